//! Jacobsthal sums `H_n(a) = Σ_x η(x^{n+1} + ax)` and companion sums
//! `I_n(a) = Σ_{x≠0} η(x^n + a)` over `GF(p^{2k})`, and the reduction of
//! `H_{p^k+1}(a)` to an affine point count on `f² = z³ - A z² + C z` over
//! `GF(p^k)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx, SubfieldView};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobsthalRecord {
    pub a: Elem,
    pub order_n: u64,
    pub h: i64,
    pub i: i64,
    /// `I_{2n}(a)`.
    pub i2: i64,
    /// Affine point count of the associated curve, when `a ∉ GF(p^k)`.
    pub curve_n: Option<i64>,
}

#[derive(Clone, Debug)]
pub struct Theorem2Report {
    pub records: Vec<JacobsthalRecord>,
    /// `max |H| / (2 p^{k/2} (p^k + 1))`.
    pub max_ratio: f64,
    pub argmax: Elem,
    /// Whether `H^2 = 4 p^k (p^k+1)^2` for some `a` (equality in the bound).
    pub attained: bool,
}

/// Serializable line of a Jacobsthal scan.
#[derive(Clone, Debug, Serialize)]
pub struct JacobsthalLine {
    pub a: String,
    #[serde(rename = "H")]
    pub h: i64,
    #[serde(rename = "I")]
    pub i: i64,
    #[serde(rename = "I2")]
    pub i2: i64,
    pub curve_n: Option<i64>,
    pub bound_ratio: f64,
}

pub struct Jacobsthal<'a> {
    ctx: &'a FieldCtx,
    big: SubfieldView<'a>,
    small: SubfieldView<'a>,
    q: u64,
    sqrt_mu: Elem,
    big_elems: Vec<Elem>,
    small_elems: Vec<Elem>,
}

impl<'a> Jacobsthal<'a> {
    /// Works inside `GF(p^{4k})` or a standalone `GF(p^{2k})`.
    pub fn new(ctx: &'a FieldCtx) -> Result<Self> {
        let k = ctx.params().k;
        if ctx.degree() != 2 * k && ctx.degree() != 4 * k {
            return Err(Error::DegreeUnsupported { m: ctx.degree(), k });
        }
        let big = ctx.subfield(2 * k)?;
        let small = ctx.subfield(k)?;
        // μ = ξ^r with r = (p^m - 1)/(p^k - 1) a sum of an even number of odd terms
        let r = small.ratio();
        debug_assert_eq!(r % 2, 0);
        let sqrt_mu = ctx.xi_pow(r / 2);
        let big_elems = big.elements();
        let small_elems = small.elements();
        Ok(Self {
            ctx,
            big,
            small,
            q: ctx.params().q1(),
            sqrt_mu,
            big_elems,
            small_elems,
        })
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    /// `GF(p^{2k})`.
    pub fn big(&self) -> &SubfieldView<'a> {
        &self.big
    }

    /// `GF(p^k)`.
    pub fn small(&self) -> &SubfieldView<'a> {
        &self.small
    }

    /// `μ^{1/2}` with `μ` the generator of `GF(p^k)^*`.
    pub fn sqrt_mu(&self) -> &Elem {
        &self.sqrt_mu
    }

    /// `a ∈ GF(p^{2k}) \ GF(p^k)`, in discrete-log order.
    pub fn non_base_elements(&self) -> Vec<Elem> {
        self.big_elems[1..]
            .iter()
            .filter(|a| !self.small.contains(a))
            .cloned()
            .collect()
    }

    fn check_arg(&self, a: &Elem) -> Result<()> {
        if a.is_zero() {
            return Err(Error::ZeroArgument);
        }
        if !self.big.contains(a) {
            return Err(Error::NotInSubfield(self.big.degree()));
        }
        Ok(())
    }

    pub fn h_sum(&self, n: u64, a: &Elem) -> Result<i64> {
        self.check_arg(a)?;
        let ctx = self.ctx;
        Ok(self
            .big_elems
            .iter()
            .map(|x| {
                let v = ctx.add(&ctx.pow(x, n + 1), &ctx.mul(a, x));
                self.big.chi(&v) as i64
            })
            .sum())
    }

    pub fn i_sum(&self, n: u64, a: &Elem) -> Result<i64> {
        self.check_arg(a)?;
        let ctx = self.ctx;
        Ok(self.big_elems[1..]
            .iter()
            .map(|x| self.big.chi(&ctx.add(&ctx.pow(x, n), a)) as i64)
            .sum())
    }

    /// `-(p^k + 1)(η(a) + 1)`, the value of `I_{p^k+1}(a)` for `a ∉ GF(p^k)`.
    pub fn i_closed_form(&self, a: &Elem) -> Result<i64> {
        let eta = self.big.quadratic_character(a)? as i64;
        Ok(-(self.q as i64 + 1) * (eta + 1))
    }

    /// `(a0, a1) ∈ GF(p^k)²` with `a = a0 + 2 μ^{1/2} a1`.
    pub fn decompose(&self, a: &Elem) -> Result<(Elem, Elem)> {
        if !self.big.contains(a) {
            return Err(Error::NotInSubfield(self.big.degree()));
        }
        let ctx = self.ctx;
        let k = ctx.params().k;
        // the conjugate over GF(p^k) flips the sign of μ^{1/2}
        let conj = ctx.frobenius(a, k);
        let half = ctx.inv(&ctx.from_int(2))?;
        let a0 = ctx.mul(&ctx.add(a, &conj), &half);
        let four_s = ctx.scale(&self.sqrt_mu, 4);
        let a1 = ctx.div(&ctx.sub(a, &conj), &four_s)?;
        Ok((a0, a1))
    }

    pub fn recompose(&self, a0: &Elem, a1: &Elem) -> Elem {
        let ctx = self.ctx;
        ctx.add(a0, &ctx.mul(&ctx.scale(&self.sqrt_mu, 2), a1))
    }

    /// Affine points `(z, f) ∈ GF(p^k)²` on `f² = z³ - A z² + C z`.
    pub fn curve_point_count(&self, a_coef: &Elem, c_coef: &Elem) -> Result<i64> {
        if c_coef.is_zero() {
            return Err(Error::ZeroC);
        }
        for v in [a_coef, c_coef] {
            if !self.small.contains(v) {
                return Err(Error::NotInSubfield(self.small.degree()));
            }
        }
        let ctx = self.ctx;
        Ok(self
            .small_elems
            .iter()
            .map(|z| {
                let z2 = ctx.square(z);
                let z3 = ctx.mul(&z2, z);
                let rhs = ctx.add(&ctx.sub(&z3, &ctx.mul(a_coef, &z2)), &ctx.mul(c_coef, z));
                1 + self.small.chi(&rhs) as i64
            })
            .sum())
    }

    /// The curve attached to `a ∉ GF(p^k)`: `A = a0`, `C = μ a1²`.
    pub fn curve_for(&self, a: &Elem) -> Result<(Elem, Elem)> {
        let (a0, a1) = self.decompose(a)?;
        let mu = self.small.generator();
        Ok((a0, self.ctx.mul(mu, &self.ctx.square(&a1))))
    }

    pub fn record(&self, n: u64, a: &Elem) -> Result<JacobsthalRecord> {
        let h = self.h_sum(n, a)?;
        let i = self.i_sum(n, a)?;
        let i2 = self.i_sum(2 * n, a)?;
        let curve_n = if self.small.contains(a) {
            None
        } else {
            let (ca, cc) = self.curve_for(a)?;
            Some(self.curve_point_count(&ca, &cc)?)
        };
        Ok(JacobsthalRecord { a: a.clone(), order_n: n, h, i, i2, curve_n })
    }

    /// `|H| / (2 p^{k/2} (p^k + 1))`.
    pub fn bound_ratio(&self, h: i64) -> f64 {
        let bound = 2.0 * (self.q as f64).sqrt() * (self.q as f64 + 1.0);
        h.unsigned_abs() as f64 / bound
    }

    /// `|H| ≤ 2 p^{k/2} (p^k+1)`, compared exactly as `H² ≤ 4 p^k (p^k+1)²`.
    pub fn within_bound(&self, h: i64) -> bool {
        let q = self.q as i128;
        (h as i128) * (h as i128) <= 4 * q * (q + 1) * (q + 1)
    }

    /// Scans every `a ∈ GF(p^{2k}) \ GF(p^k)` with `n = p^k + 1`, checking the
    /// bound, `I_{2n} = I_n + H_n`, the closed form of `I_n` and the point-count
    /// identity `H/(p^k+1) = N - p^k`.
    pub fn theorem2_scan(&self) -> Result<Theorem2Report> {
        let n = self.q + 1;
        let records = self
            .non_base_elements()
            .par_iter()
            .map(|a| self.record(n, a))
            .collect::<Result<Vec<_>>>()?;
        let q = self.q as i64;
        let mut best: Option<(f64, &JacobsthalRecord)> = None;
        let mut attained = false;
        for r in &records {
            let name = self.ctx.format_power(&r.a);
            if !self.within_bound(r.h) {
                return Err(Error::BoundViolation(format!("|H({name})| = {}", r.h.abs())));
            }
            if r.i2 != r.i + r.h {
                return Err(Error::OracleMismatch(format!("I2 != I + H at {name}")));
            }
            if r.i != self.i_closed_form(&r.a)? {
                return Err(Error::OracleMismatch(format!("I_n({name}) = {}", r.i)));
            }
            let curve_n = r.curve_n.expect("a outside GF(p^k)");
            if r.h % (q + 1) != 0 || r.h / (q + 1) != curve_n - q {
                return Err(Error::OracleMismatch(format!(
                    "H({name})/(p^k+1) != N - p^k (H = {}, N = {curve_n})",
                    r.h
                )));
            }
            let qi = q as i128;
            attained |= (r.h as i128).pow(2) == 4 * qi * (qi + 1) * (qi + 1);
            let ratio = self.bound_ratio(r.h);
            if best.is_none_or(|(b, _)| ratio > b) {
                best = Some((ratio, r));
            }
        }
        let (max_ratio, arg) = best.ok_or(Error::NoSolution("empty scan".into()))?;
        let argmax = arg.a.clone();
        Ok(Theorem2Report { records, max_ratio, argmax, attained })
    }

    pub fn line(&self, r: &JacobsthalRecord) -> JacobsthalLine {
        JacobsthalLine {
            a: self.ctx.format_power(&r.a),
            h: r.h,
            i: r.i,
            i2: r.i2,
            curve_n: r.curve_n,
            bound_ratio: self.bound_ratio(r.h),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldParams;
    use crate::Instance;

    /// Written independently of the table-driven path: Euler's criterion,
    /// square-and-multiply through repeated `mul`, and a fresh element scan.
    fn h_oracle(ctx: &FieldCtx, n: u64, a: &Elem) -> i64 {
        let k = ctx.params().k;
        let big = ctx.subfield(2 * k).unwrap();
        let mut total = 0;
        for x in ctx.elements().filter(|x| ctx.in_subfield(x, 2 * k)) {
            let mut xp = ctx.one();
            for _ in 0..n + 1 {
                xp = ctx.mul(&xp, &x);
            }
            total += big.chi_by_power(&ctx.add(&xp, &ctx.mul(a, &x))) as i64;
        }
        total
    }

    #[test]
    fn h_sum_matches_oracle_p5() {
        let inst = Instance::new(5, 1).unwrap();
        let jac = Jacobsthal::new(inst.ctx()).unwrap();
        for a in jac.big().nonzero_elements().iter().step_by(3) {
            for n in [6, 12, 3] {
                assert_eq!(jac.h_sum(n, a).unwrap(), h_oracle(inst.ctx(), n, a));
            }
        }
    }

    #[test]
    fn bound_at_p3() {
        let inst = Instance::new(3, 1).unwrap();
        let jac = Jacobsthal::new(inst.ctx()).unwrap();
        let outside = jac.non_base_elements();
        assert_eq!(outside.len(), 6);
        for a in &outside {
            assert!(jac.h_sum(4, a).unwrap().abs() <= 12);
        }
    }

    #[test]
    fn companion_identity() {
        for (p, k) in [(3, 1), (5, 1)] {
            let inst = Instance::new(p, k).unwrap();
            let jac = Jacobsthal::new(inst.ctx()).unwrap();
            let q = inst.params().q1();
            for a in jac.big().nonzero_elements() {
                for n in [q + 1, 2 * (q + 1), 2, 5] {
                    let lhs = jac.i_sum(2 * n, &a).unwrap();
                    let rhs = jac.i_sum(n, &a).unwrap() + jac.h_sum(n, &a).unwrap();
                    assert_eq!(lhs, rhs, "p={p} n={n}");
                }
            }
        }
    }

    #[test]
    fn companion_closed_form() {
        let inst = Instance::new(3, 1).unwrap();
        let jac = Jacobsthal::new(inst.ctx()).unwrap();
        let mut seen = Vec::new();
        for a in jac.non_base_elements() {
            let v = jac.i_sum(4, &a).unwrap();
            assert_eq!(v, jac.i_closed_form(&a).unwrap());
            seen.push(v);
        }
        seen.sort();
        seen.dedup();
        assert_eq!(seen, vec![-8, 0]);
    }

    #[test]
    fn zero_argument_rejected() {
        let inst = Instance::new(3, 1).unwrap();
        let jac = Jacobsthal::new(inst.ctx()).unwrap();
        let z = inst.ctx().zero();
        assert_eq!(jac.h_sum(4, &z), Err(Error::ZeroArgument));
        assert_eq!(jac.i_sum(4, &z), Err(Error::ZeroArgument));
        assert_eq!(jac.h_sum(4, inst.ctx().xi()), Err(Error::NotInSubfield(2)));
        let one = inst.ctx().one();
        assert_eq!(jac.curve_point_count(&one, &z), Err(Error::ZeroC));
    }

    #[test]
    fn half_basis() {
        let inst = Instance::new(3, 1).unwrap();
        let ctx = inst.ctx();
        let jac = Jacobsthal::new(ctx).unwrap();
        assert!(!jac.small().contains(jac.sqrt_mu()));
        assert!(jac.big().contains(jac.sqrt_mu()));
        for a in jac.small().elements() {
            assert_eq!(jac.decompose(&a).unwrap(), (a.clone(), ctx.zero()));
        }
        for a in jac.big().elements() {
            let (a0, a1) = jac.decompose(&a).unwrap();
            assert!(jac.small().contains(&a0) && jac.small().contains(&a1));
            assert_eq!(jac.recompose(&a0, &a1), a);
            assert_eq!(a1.is_zero(), jac.small().contains(&a));
        }
        let basis = ctx.scale(jac.sqrt_mu(), 2);
        assert_eq!(jac.decompose(&basis).unwrap(), (ctx.zero(), ctx.one()));
    }

    #[test]
    fn hasse_bound_on_all_curves_p3() {
        let inst = Instance::new(3, 1).unwrap();
        let jac = Jacobsthal::new(inst.ctx()).unwrap();
        for a_coef in jac.small().elements() {
            for c_coef in jac.small().nonzero_elements() {
                let n = jac.curve_point_count(&a_coef, &c_coef).unwrap();
                // |N - 3| ≤ 2√3, i.e. (N - 3)² ≤ 12
                assert!((n - 3) * (n - 3) <= 12);
            }
        }
    }

    #[test]
    fn point_count_identity() {
        for (p, k) in [(3, 1), (5, 1), (3, 2)] {
            let inst = Instance::new(p, k).unwrap();
            let jac = Jacobsthal::new(inst.ctx()).unwrap();
            let q = inst.params().q1() as i64;
            for a in jac.non_base_elements() {
                let r = jac.record(q as u64 + 1, &a).unwrap();
                assert_eq!(r.h % (q + 1), 0);
                assert_eq!(r.h / (q + 1), r.curve_n.unwrap() - q, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn scans() {
        for (p, k, count) in [(3, 1, 6), (5, 1, 20), (3, 2, 72)] {
            let inst = Instance::new(p, k).unwrap();
            let jac = Jacobsthal::new(inst.ctx()).unwrap();
            let rep = jac.theorem2_scan().unwrap();
            assert_eq!(rep.records.len(), count);
            assert!(rep.max_ratio <= 1.0);
        }
    }

    #[test]
    fn standalone_context_agrees() {
        let fp = FieldParams::new(5, 1).unwrap();
        let small = FieldCtx::build(fp, 2).unwrap();
        let jac = Jacobsthal::new(&small).unwrap();
        let rep = jac.theorem2_scan().unwrap();
        let inst = Instance::new(5, 1).unwrap();
        let big = Jacobsthal::new(inst.ctx()).unwrap();
        let mut a: Vec<i64> = rep.records.iter().map(|r| r.h).collect();
        let mut b: Vec<i64> = big.theorem2_scan().unwrap().records.iter().map(|r| r.h).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}
