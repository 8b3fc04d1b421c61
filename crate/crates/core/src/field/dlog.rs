//! Baby-step/giant-step, used when the field is too large for log tables.

use std::collections::HashMap;

use super::{Elem, FieldCtx};
use crate::numth::isqrt;

/// `e` in `0..order` with `base^e = target`, if one exists.
pub(crate) fn bsgs(ctx: &FieldCtx, base: &Elem, target: &Elem, order: u64) -> Option<u64> {
    if target.is_zero() || base.is_zero() {
        return None;
    }
    let step = isqrt(order) + 1;
    let mut baby = HashMap::with_capacity(step as usize);
    let mut x = ctx.one();
    for j in 0..step {
        baby.entry(x.clone()).or_insert(j);
        x = ctx.mul(&x, base);
    }
    // base^{-step}
    let giant = ctx.inv(&ctx.pow_square_multiply(base, step)).ok()?;
    let mut gamma = target.clone();
    for i in 0..step {
        if let Some(&j) = baby.get(&gamma) {
            let e = i * step + j;
            if e < order {
                return Some(e);
            }
        }
        gamma = ctx.mul(&gamma, &giant);
    }
    None
}
