//! p-ary m-sequences `s(t) = Tr_n(ξ^t)`, their decimations, and the
//! cross-correlation view of `S_f(0)`.
//!
//! With `u = s` decimated by `d` and `v = s` decimated by 2 (both of period
//! `(p^n-1)/2`), substituting `x = ξ^t` in the sum over `GF(p^n)^*` gives
//!
//! ```text
//! S_f(0) at (a, b) = (ξ^{dτ}, -1)  =  1 + 2·C_{u,v}(τ),
//! C_{u,v}(τ) = Σ_t ω^{u(t+τ) - v(t)}
//! ```
//!
//! (the `x = 0` term contributes 1, and `t ↦ t + (p^n-1)/2` covers every
//! nonzero `x` twice). The same value is `S_f(0)` at `(-ξ^{dτ}, 1)`. The shifts
//! `τ` therefore sweep the square coefficients `a`; [`fit_affine`] recovers the
//! relation from data and the tests pin it at `p = 3` and check it at `p = 5`.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::expsum::CoeffPair;
use crate::field::Elem;
use crate::{CycInt, Instance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PSequence {
    pub p: u32,
    pub symbols: Vec<u8>,
    pub origin: String,
}

impl PSequence {
    pub fn period(&self) -> usize {
        self.symbols.len()
    }

    /// `u(t) = s(e·t mod P)`; the result has period `P / gcd(e, P)`.
    pub fn decimate(&self, e: u64) -> Result<PSequence> {
        if e == 0 {
            return Err(Error::ZeroArgument);
        }
        let len = self.period() as u64;
        let period = len / e.gcd(&len);
        let step = (e % len) as usize;
        let mut idx = 0usize;
        let mut symbols = Vec::with_capacity(period as usize);
        for _ in 0..period {
            symbols.push(self.symbols[idx]);
            idx += step;
            if idx >= len as usize {
                idx -= len as usize;
            }
        }
        Ok(PSequence { p: self.p, symbols, origin: format!("{} decimated by {e}", self.origin) })
    }

    pub fn shift(&self, tau: usize) -> PSequence {
        let mut symbols = self.symbols.clone();
        symbols.rotate_left(tau % self.period());
        PSequence { p: self.p, symbols, origin: format!("{} shifted by {tau}", self.origin) }
    }

    pub fn to_csv_line(&self) -> String {
        let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
        parts.join(",")
    }
}

/// `Σ_{t < P} ω^{u(t+τ) - v(t)}`.
pub fn cross_correlation(u: &PSequence, v: &PSequence, tau: usize) -> Result<CycInt> {
    if u.period() != v.period() {
        return Err(Error::PeriodMismatch(u.period(), v.period()));
    }
    let p = u.p as usize;
    let len = u.period();
    let mut counts = vec![0u64; p];
    for t in 0..len {
        let x = u.symbols[(t + tau) % len] as usize;
        let y = v.symbols[t] as usize;
        counts[(x + p - y) % p] += 1;
    }
    Ok(CycInt::from_residue_counts(u.p, &counts))
}

/// Exact integer fit of `y = α + β·x` through every point; `None` when no
/// single affine map fits, or the data has fewer than two distinct `x`.
pub fn fit_affine(points: &[(i64, i64)]) -> Option<(i64, i64)> {
    let &(x0, y0) = points.first()?;
    let &(x1, y1) = points.iter().find(|(x, _)| *x != x0)?;
    let (dy, dx) = (y1 - y0, x1 - x0);
    if dy % dx != 0 {
        return None;
    }
    let beta = dy / dx;
    let alpha = y0 - beta * x0;
    points.iter().all(|&(x, y)| y == alpha + beta * x).then_some((alpha, beta))
}

impl Instance {
    pub fn m_sequence(&self) -> PSequence {
        PSequence {
            p: self.p(),
            symbols: self.trace_seq().to_vec(),
            origin: "m-sequence".to_string(),
        }
    }

    /// `(u, v)`: the m-sequence decimated by `d` and by 2.
    pub fn decimated_pair(&self) -> Result<(PSequence, PSequence)> {
        let s = self.m_sequence();
        Ok((s.decimate(self.params().d)?, s.decimate(2)?))
    }

    /// The coefficient pair `(ξ^{dτ}, -1)` whose `S_f(0)` corresponds to shift `τ`.
    pub fn shift_pair(&self, tau: usize) -> CoeffPair {
        let ctx = self.ctx();
        let e = (self.params().d as u128 * tau as u128 % ctx.order() as u128) as u64;
        CoeffPair { a: ctx.xi_pow(e), b: ctx.neg(&ctx.one()) }
    }

    /// `(C(τ), S_f(0) at shift_pair(τ))` for every shift, as integers.
    pub fn correlation_vs_s0(&self) -> Result<Vec<(i64, i64)>> {
        let (u, v) = self.decimated_pair()?;
        (0..u.period())
            .map(|tau| {
                let c = cross_correlation(&u, &v, tau)?.expect_integer()?;
                let s0 = self.s0_bruteforce(&self.shift_pair(tau))?.expect_integer()?;
                Ok((c, s0))
            })
            .collect()
    }

    pub fn square_coefficients(&self) -> Vec<Elem> {
        let ctx = self.ctx();
        (0..ctx.order() / 2).map(|j| ctx.xi_pow(2 * j)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn m_sequence_basics() {
        let inst = Instance::new(3, 1).unwrap();
        let s = inst.m_sequence();
        assert_eq!(s.period(), 80);
        let count = |v| s.symbols.iter().filter(|&&x| x == v).count();
        assert_eq!((count(0), count(1), count(2)), (26, 27, 27));
        let auto = cross_correlation(&s, &s, 0).unwrap();
        assert_eq!(auto.as_integer(), Some(80));
    }

    #[test]
    fn shift_and_add() {
        let inst = Instance::new(3, 1).unwrap();
        let s = inst.m_sequence();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let tau = rng.gen_range(1..80);
            if tau == 40 {
                continue;
            }
            let diff: Vec<u8> = (0..80).map(|t| (s.symbols[(t + tau) % 80] + 3 - s.symbols[t]) % 3).collect();
            assert!((0..80).any(|sh| s.shift(sh).symbols == diff));
        }
    }

    #[test]
    fn decimation_periods() {
        let inst = Instance::new(3, 1).unwrap();
        let s = inst.m_sequence();
        assert_eq!(s.decimate(1).unwrap().symbols, s.symbols);
        assert_eq!(s.decimate(2).unwrap().period(), 40);
        assert_eq!(s.decimate(34).unwrap().period(), 40);
        assert_eq!(s.decimate(0), Err(Error::ZeroArgument));
        let (u, _) = inst.decimated_pair().unwrap();
        assert_eq!(cross_correlation(&u, &s, 0), Err(Error::PeriodMismatch(40, 80)));
    }

    #[test]
    fn common_shift_invariance() {
        let inst = Instance::new(3, 1).unwrap();
        let (u, v) = inst.decimated_pair().unwrap();
        for tau in [0, 3, 17] {
            let base = cross_correlation(&u, &v, tau).unwrap();
            assert_eq!(cross_correlation(&u.shift(5), &v.shift(5), tau).unwrap(), base);
        }
    }

    #[test]
    fn relation_pinned_at_p3() {
        let inst = Instance::new(3, 1).unwrap();
        let data = inst.correlation_vs_s0().unwrap();
        assert_eq!(fit_affine(&data), Some((1, 2)));
        assert_eq!(data[0], (4, 9));
        let ctx = inst.ctx();
        for tau in 0..40 {
            let pair = inst.shift_pair(tau);
            let flipped = CoeffPair::new(ctx.neg(&pair.a), ctx.one()).unwrap();
            assert_eq!(inst.s0_bruteforce(&flipped).unwrap().as_integer(), Some(data[tau].1));
        }
    }

    #[test]
    fn fit_affine_rejects_nonlinear() {
        assert_eq!(fit_affine(&[(0, 1), (1, 3), (2, 5)]), Some((1, 2)));
        assert_eq!(fit_affine(&[(0, 1), (1, 3), (2, 6)]), None);
        assert_eq!(fit_affine(&[(0, 1)]), None);
    }
}
