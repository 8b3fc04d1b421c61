use super::{dlog, Elem, FieldCtx};
use crate::error::{Error, Result};

/// The subfield `GF(p^{m'})` of a context, `m' | m`, with its induced
/// primitive element `ξ^{(p^m - 1)/(p^{m'} - 1)}`.
#[derive(Clone, Debug)]
pub struct SubfieldView<'a> {
    ctx: &'a FieldCtx,
    degree: usize,
    order: u64,
    ratio: u64,
    generator: Elem,
}

impl<'a> SubfieldView<'a> {
    pub(super) fn new(ctx: &'a FieldCtx, degree: usize) -> Result<Self> {
        if degree == 0 || ctx.degree() % degree != 0 {
            return Err(Error::NotASubfield(degree, ctx.degree()));
        }
        let order = (ctx.p() as u64).pow(degree as u32) - 1;
        let ratio = ctx.order() / order;
        let generator = ctx.xi_pow(ratio);
        Ok(Self { ctx, degree, order, ratio, generator })
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `p^{m'}`.
    pub fn size(&self) -> u64 {
        self.order + 1
    }

    /// `p^{m'} - 1`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// `(p^m - 1)/(p^{m'} - 1)`, the exponent of ξ giving the generator.
    pub fn ratio(&self) -> u64 {
        self.ratio
    }

    /// The induced primitive element.
    pub fn generator(&self) -> &Elem {
        &self.generator
    }

    pub fn contains(&self, x: &Elem) -> bool {
        if self.degree == self.ctx.degree() || x.is_zero() {
            return true;
        }
        if self.ctx.has_tables() {
            let e = self.ctx.log(x).expect("nonzero");
            return e % self.ratio == 0;
        }
        self.ctx.in_subfield(x, self.degree)
    }

    fn check(&self, x: &Elem) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::NotInSubfield(self.degree))
        }
    }

    /// `0` followed by `generator^i` for `i = 0..p^{m'} - 2`.
    pub fn elements(&self) -> Vec<Elem> {
        let mut out = Vec::with_capacity(self.size() as usize);
        out.push(self.ctx.zero());
        out.extend(self.nonzero_elements());
        out
    }

    /// `generator^i` for `i = 0..p^{m'} - 2`, in exponent order.
    pub fn nonzero_elements(&self) -> Vec<Elem> {
        (0..self.order).map(|i| self.ctx.xi_pow(i * self.ratio)).collect()
    }

    /// `e` with `generator^e = x`.
    pub fn discrete_log(&self, x: &Elem) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroArgument);
        }
        if self.ctx.has_tables() {
            let e = self.ctx.log(x)?;
            if e % self.ratio != 0 {
                return Err(Error::NotInSubfield(self.degree));
            }
            return Ok(e / self.ratio);
        }
        self.check(x)?;
        dlog::bsgs(self.ctx, &self.generator, x, self.order)
            .ok_or_else(|| Error::NoSolution("discrete log in subfield".into()))
    }

    /// The quadratic character of the subfield (0 at 0).
    pub fn quadratic_character(&self, x: &Elem) -> Result<i8> {
        self.check(x)?;
        Ok(self.chi(x))
    }

    /// Quadratic character without the membership check.
    pub(crate) fn chi(&self, x: &Elem) -> i8 {
        if x.is_zero() {
            return 0;
        }
        if self.ctx.has_tables() {
            let e = self.ctx.log(x).expect("nonzero") / self.ratio;
            return if e % 2 == 0 { 1 } else { -1 };
        }
        self.chi_by_power(x)
    }

    /// Euler's criterion `x^{(p^{m'}-1)/2} = ±1`.
    pub(crate) fn chi_by_power(&self, x: &Elem) -> i8 {
        if x.is_zero() {
            return 0;
        }
        let h = self.ctx.pow(x, self.order / 2);
        if h == self.ctx.one() {
            1
        } else {
            debug_assert_eq!(h, self.ctx.from_int(-1));
            -1
        }
    }

    /// `Tr_{m'}(x)` down to the prime field, as an integer in `0..p`.
    pub fn abs_trace(&self, x: &Elem) -> Result<u32> {
        Ok(self.ctx.trace(x, self.degree, 1)?.constant())
    }

    /// `Tr_{to}^{m'}(x)`.
    pub fn trace_down(&self, x: &Elem, to: usize) -> Result<Elem> {
        self.ctx.trace(x, self.degree, to)
    }

    /// `Tr_{m'}^{m}(x)` from the whole context down into this subfield.
    pub fn trace_from_parent(&self, x: &Elem) -> Elem {
        self.ctx
            .trace(x, self.ctx.degree(), self.degree)
            .expect("view degree divides the context degree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldParams;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf81() -> FieldCtx {
        FieldCtx::build(FieldParams::new(3, 1).unwrap(), 4).unwrap()
    }

    #[test]
    fn membership_counts() {
        let ctx = gf81();
        for (deg, count) in [(1, 3), (2, 9), (4, 81)] {
            let view = ctx.subfield(deg).unwrap();
            assert_eq!(ctx.elements().filter(|x| view.contains(x)).count(), count);
            assert_eq!(ctx.elements().filter(|x| ctx.in_subfield(x, deg)).count(), count);
            assert_eq!(view.elements().len(), count);
        }
        assert!(matches!(ctx.subfield(3), Err(Error::NotASubfield(3, 4))));
    }

    #[test]
    fn quadratic_character_gf9() {
        let ctx = gf81();
        let v = ctx.subfield(2).unwrap();
        assert_eq!(v.quadratic_character(&ctx.one()).unwrap(), 1);
        assert_eq!(v.quadratic_character(v.generator()).unwrap(), -1);
        assert_eq!(v.quadratic_character(&ctx.zero()).unwrap(), 0);
        assert_eq!(v.quadratic_character(ctx.xi()), Err(Error::NotInSubfield(2)));
        let elems = v.nonzero_elements();
        let squares = elems.iter().filter(|x| v.chi(x) == 1).count();
        assert_eq!(squares, 4);
        for x in &elems {
            assert_eq!(v.chi(x), v.chi_by_power(x));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x = &elems[rng.gen_range(0..elems.len())];
            let y = &elems[rng.gen_range(0..elems.len())];
            let xy = ctx.mul(x, y);
            assert_eq!(v.chi(x) * v.chi(y), v.chi(&xy));
        }
    }

    #[test]
    fn quadratic_character_balance() {
        for (p, k, deg) in [(3, 1, 4), (5, 1, 2), (3, 2, 4)] {
            let ctx = FieldCtx::build(FieldParams::new(p, k).unwrap(), 4 * k).unwrap();
            let v = ctx.subfield(deg).unwrap();
            let plus = v.nonzero_elements().iter().filter(|x| v.chi(x) == 1).count() as u64;
            assert_eq!(plus, v.order() / 2);
        }
    }

    #[test]
    fn discrete_logs_gf9() {
        let ctx = gf81();
        let v = ctx.subfield(2).unwrap();
        let nu = v.generator().clone();
        assert_eq!(v.discrete_log(&ctx.one()).unwrap(), 0);
        assert_eq!(v.discrete_log(&ctx.pow(&nu, 5)).unwrap(), 5);
        for x in v.nonzero_elements() {
            let e = v.discrete_log(&x).unwrap();
            assert_eq!(ctx.pow(&nu, e), x);
        }
        assert_eq!(v.discrete_log(&ctx.zero()), Err(Error::ZeroArgument));
        assert_eq!(v.discrete_log(ctx.xi()), Err(Error::NotInSubfield(2)));
    }

    #[test]
    fn relative_trace_lands_in_subfield() {
        let ctx = gf81();
        let v = ctx.subfield(2).unwrap();
        for x in ctx.elements() {
            let t = v.trace_from_parent(&x);
            assert!(v.contains(&t));
            assert_eq!(v.abs_trace(&t).unwrap(), ctx.abs_trace(&x));
        }
    }
}
