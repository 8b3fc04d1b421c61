use crate::error::Result;
use crate::field::{Elem, FieldCtx, FieldParams, SubfieldView};

/// One `(p, k)` instance: `GF(p^{4k})` with its absolute-trace sequence and
/// the subgroup `U` of order `p^{2k} + 1`, precomputed once.
#[derive(Debug)]
pub struct Instance {
    ctx: FieldCtx,
    trace_seq: Vec<u8>,
    unit_circle: Vec<Elem>,
}

impl Instance {
    pub fn new(p: u64, k: usize) -> Result<Self> {
        Self::from_params(FieldParams::new(p, k)?)
    }

    pub fn from_params(params: FieldParams) -> Result<Self> {
        let ctx = FieldCtx::build(params, params.n)?;
        let trace_seq = ctx.trace_sequence();
        let step = params.q2() - 1;
        let unit_circle = (0..=params.q2()).map(|j| ctx.xi_pow(step * j)).collect();
        Ok(Self { ctx, trace_seq, unit_circle })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn params(&self) -> &FieldParams {
        self.ctx.params()
    }

    pub fn p(&self) -> u32 {
        self.ctx.p()
    }

    /// `s(t) = Tr_n(ξ^t)` for `t = 0..p^n - 2`.
    pub fn trace_seq(&self) -> &[u8] {
        &self.trace_seq
    }

    /// `U = ⟨ξ^{p^{2k} - 1}⟩`, listed as `ξ^{(p^{2k}-1)j}` for `j = 0..p^{2k}`.
    pub fn subgroup_u(&self) -> &[Elem] {
        &self.unit_circle
    }

    /// `GF(p^k)` inside `GF(p^n)`.
    pub fn gf_k(&self) -> SubfieldView<'_> {
        self.ctx.subfield(self.params().k).expect("k divides 4k")
    }

    /// `GF(p^{2k})` inside `GF(p^n)`.
    pub fn gf_2k(&self) -> SubfieldView<'_> {
        self.ctx.subfield(2 * self.params().k).expect("2k divides 4k")
    }

    /// The primitive element `ν = ξ^{p^{2k}+1}` of `GF(p^{2k})`.
    pub fn nu(&self) -> Elem {
        self.gf_2k().generator().clone()
    }

    /// Quadratic character of the whole field, `b^{(p^n-1)/2}` as `±1` (0 at 0).
    pub fn chi_n(&self, x: &Elem) -> i8 {
        self.ctx.subfield(self.params().n).expect("whole field").chi(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgroup_u_p3k1() {
        let inst = Instance::new(3, 1).unwrap();
        let ctx = inst.ctx();
        let u = inst.subgroup_u();
        assert_eq!(u.len(), 10);
        for x in u {
            assert_eq!(ctx.pow(x, 10), ctx.one());
            assert!(u.contains(&ctx.neg(x)));
            assert!(u.contains(&ctx.inv(x).unwrap()));
        }
        assert!(u.contains(&ctx.from_int(-1)));
        let mut sorted = u.to_vec();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 10);
    }

    #[test]
    fn nu_is_primitive_in_gf9() {
        let inst = Instance::new(3, 1).unwrap();
        let ctx = inst.ctx();
        let nu = inst.nu();
        assert_eq!(nu, ctx.xi_pow(10));
        assert_eq!(ctx.pow(&nu, 8), ctx.one());
        assert_ne!(ctx.pow(&nu, 4), ctx.one());
    }
}
