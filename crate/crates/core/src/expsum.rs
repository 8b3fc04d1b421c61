//! The exponential sum `S_f(0)` of `f(x) = Tr_n(a·x^d + b·x²)`.
//!
//! `S_f(0) = p^{2k}(2N(a,b) - 1)` where `2N(a,b)` counts the zeros in `U` of
//! the linearized polynomial
//! `L(X) = b^{p^{2k}} X + a X^{p^k} + b X^{p^{2k}} + a^{p^{2k}} X^{p^{3k}}`.
//! This module computes `N` three ways (zeros of `L` on `U`, a nonsquare count
//! over `GF(p^k)`, and a Jacobsthal sum), computes `S_f(0)` directly in `Z[ω]`,
//! and runs the distribution sweeps over `a` for fixed `b`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::jacobsthal::Jacobsthal;
use crate::numth::{inv_mod, mul_mod};
use crate::{CycInt, Instance};

/// Coefficients `(a, b) ≠ (0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoeffPair {
    pub a: Elem,
    pub b: Elem,
}

impl CoeffPair {
    pub fn new(a: Elem, b: Elem) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::BothCoefficientsZero);
        }
        Ok(Self { a, b })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CaseTag {
    /// `a^{p^k(p^k+1)} ≠ b^{p^k+1}` (and not `SquareMatch`).
    NormDiffer,
    /// `a² = b^d`, `b ≠ 0`.
    SquareMatch,
    /// `a^{p^k(p^k+1)} = b^{p^k+1}` and `a² ≠ b^d`.
    Jacobsthal,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::NormDiffer => "NORM_DIFFER",
            CaseTag::SquareMatch => "SQUARE_MATCH",
            CaseTag::Jacobsthal => "JACOBSTHAL",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub tag: CaseTag,
    /// `a^{p^k(p^k+1)} = b^{p^k+1}`. For `SquareMatch` this holds exactly when
    /// `b` is a square.
    pub norms_equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpSumRecord {
    pub pair: CoeffPair,
    pub tag: CaseTag,
    pub n: u64,
    pub s0: i64,
    /// Zeros of `L` in `U`, in discrete-log order.
    pub witnesses: Vec<Elem>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpSumLine {
    pub a: String,
    pub b: String,
    pub tag: CaseTag,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "S0")]
    pub s0: i64,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistributionReport {
    pub b: String,
    /// `b^{(p^n-1)/2}`.
    pub b_character: i8,
    pub r: u64,
    pub s: u64,
    pub t: u64,
    pub jac_histogram: BTreeMap<u64, u64>,
    pub sum_s0: i64,
    /// `r + s + t - (p^n - p^k + b^{(p^n-1)/2})`.
    pub residual_count: i64,
    /// `-r + s + 3t - b^{(p^n-1)/2} p^k`.
    pub residual_weighted: i64,
    /// `Σ_a S_f(0) - p^n`.
    pub residual_sum: i64,
}

pub struct Sweep {
    pub records: Vec<ExpSumRecord>,
    pub report: DistributionReport,
}

#[derive(Clone, Debug)]
pub struct Prop1Report {
    pub zeros_l: Vec<Elem>,
    pub zeros_f: Vec<Elem>,
    pub n: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl PropertyCheck {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self { name: name.to_string(), passed, detail }
    }
}

/// `L` for a fixed pair, with the coefficient Frobenius images precomputed.
struct Linearized {
    b_q2: Elem,
    a: Elem,
    b: Elem,
    a_q2: Elem,
}

impl Instance {
    pub fn pair(&self, a: Elem, b: Elem) -> Result<CoeffPair> {
        CoeffPair::new(a, b)
    }

    fn linearized(&self, pair: &CoeffPair) -> Linearized {
        let ctx = self.ctx();
        let k = self.params().k;
        Linearized {
            b_q2: ctx.frobenius(&pair.b, 2 * k),
            a: pair.a.clone(),
            b: pair.b.clone(),
            a_q2: ctx.frobenius(&pair.a, 2 * k),
        }
    }

    fn eval_linearized(&self, l: &Linearized, x: &Elem) -> Elem {
        let ctx = self.ctx();
        let k = self.params().k;
        let x1 = ctx.frobenius(x, k);
        let x2 = ctx.frobenius(x, 2 * k);
        let x3 = ctx.frobenius(x, 3 * k);
        let t0 = ctx.mul(&l.b_q2, x);
        let t1 = ctx.mul(&l.a, &x1);
        let t2 = ctx.mul(&l.b, &x2);
        let t3 = ctx.mul(&l.a_q2, &x3);
        ctx.add(&ctx.add(&t0, &t1), &ctx.add(&t2, &t3))
    }

    /// `L(x)`.
    pub fn l_eval(&self, x: &Elem, pair: &CoeffPair) -> Elem {
        self.eval_linearized(&self.linearized(pair), x)
    }

    /// `(N(a,b), zeros of L in U)`.
    pub fn n_count(&self, pair: &CoeffPair) -> Result<(u64, Vec<Elem>)> {
        let l = self.linearized(pair);
        let witnesses: Vec<Elem> = self
            .subgroup_u()
            .iter()
            .filter(|u| self.eval_linearized(&l, u).is_zero())
            .cloned()
            .collect();
        if witnesses.len() % 2 != 0 {
            return Err(Error::OracleMismatch(format!(
                "odd number of zeros ({}) of L in U",
                witnesses.len()
            )));
        }
        Ok((witnesses.len() as u64 / 2, witnesses))
    }

    /// `p^{2k}(2N - 1)`.
    pub fn s0_closed(&self, pair: &CoeffPair) -> Result<i64> {
        let (n, _) = self.n_count(pair)?;
        Ok(self.params().q2() as i64 * (2 * n as i64 - 1))
    }

    /// Histogram of `f(x) - Tr_n(yx)` over all `x`, indexed by residue mod `p`.
    ///
    /// With `x = ξ^j`, `Tr_n(c·x^e) = s((log c + e·j) mod (p^n - 1))` where `s`
    /// is the trace sequence, so the scan never touches field arithmetic.
    pub(crate) fn exponent_histogram(&self, a: &Elem, b: &Elem, y: Option<&Elem>) -> Vec<u64> {
        let ctx = self.ctx();
        let p = self.p() as usize;
        let q = ctx.order() as usize;
        let s = self.trace_seq();
        let mut counts = vec![0u64; p];
        counts[0] += 1; // x = 0
        let d = (self.params().d % q as u64) as usize;
        let mut terms: Vec<(usize, usize, bool)> = Vec::with_capacity(3);
        if let Some(la) = ctx.log_or_none(a) {
            terms.push((la as usize, d, false));
        }
        if let Some(lb) = ctx.log_or_none(b) {
            terms.push((lb as usize, 2 % q, false));
        }
        if let Some(ly) = y.and_then(|y| ctx.log_or_none(y)) {
            terms.push((ly as usize, 1 % q, true));
        }
        for _ in 0..q {
            let mut v = 0usize;
            for (idx, step, negate) in terms.iter_mut() {
                let sym = s[*idx] as usize;
                v += if *negate { p - sym } else { sym };
                *idx += *step;
                if *idx >= q {
                    *idx -= q;
                }
            }
            counts[v % p] += 1;
        }
        counts
    }

    /// `S_f(0) = Σ_x ω^{f(x)}` computed directly in `Z[ω]`.
    pub fn s0_bruteforce(&self, pair: &CoeffPair) -> Result<CycInt> {
        let counts = self.exponent_histogram(&pair.a, &pair.b, None);
        Ok(CycInt::from_residue_counts(self.p(), &counts))
    }

    /// Brute-force `S_f(0)`, checked to be the rational integer
    /// `p^{2k}(2N - 1)`.
    pub fn s0_checked(&self, pair: &CoeffPair) -> Result<i64> {
        let brute = self.s0_bruteforce(pair)?;
        let closed = self.s0_closed(pair)?;
        match brute.as_integer() {
            Some(v) if v == closed => Ok(v),
            _ => Err(Error::OracleMismatch(format!(
                "S_f(0) at (a, b) = ({}, {}): brute force {brute}, closed form {closed}",
                self.ctx().format_power(&pair.a),
                self.ctx().format_power(&pair.b)
            ))),
        }
    }

    pub fn classify(&self, pair: &CoeffPair) -> Result<Classification> {
        let ctx = self.ctx();
        let fp = self.params();
        let q1 = fp.q1();
        let norm_a = ctx.pow(&pair.a, q1 * (q1 + 1));
        let norm_b = ctx.pow(&pair.b, q1 + 1);
        let norms_equal = norm_a == norm_b;
        let square_match = !pair.b.is_zero() && ctx.square(&pair.a) == ctx.pow(&pair.b, fp.d);
        let tag = if square_match {
            CaseTag::SquareMatch
        } else if !norms_equal {
            CaseTag::NormDiffer
        } else {
            CaseTag::Jacobsthal
        };
        Ok(Classification { tag, norms_equal })
    }

    /// `a^{p^{2k}} b^{p^{3k}} - a b^{p^k}`, the middle coefficient of `F`.
    pub fn f_middle_coefficient(&self, pair: &CoeffPair) -> Elem {
        let ctx = self.ctx();
        let k = self.params().k;
        let lhs = ctx.mul(&ctx.frobenius(&pair.a, 2 * k), &ctx.frobenius(&pair.b, 3 * k));
        let rhs = ctx.mul(&pair.a, &ctx.frobenius(&pair.b, k));
        ctx.sub(&lhs, &rhs)
    }

    /// Zeros of
    /// `F(X) = A X^{p^{2k}} + (a^{p^{2k}}b^{p^{3k}} - ab^{p^k}) X^{p^k} + A^{p^k} X`,
    /// `A = a^{p^k(p^k+1)} - b^{p^k+1}`, compared against the zeros of `L` over
    /// the whole field; also checks `N ≤ 2`.
    pub fn prop1_f_zeros(&self, pair: &CoeffPair) -> Result<Prop1Report> {
        let ctx = self.ctx();
        let fp = self.params();
        let (k, q1) = (fp.k, fp.q1());
        let big_a = ctx.sub(&ctx.pow(&pair.a, q1 * (q1 + 1)), &ctx.pow(&pair.b, q1 + 1));
        if big_a.is_zero() {
            return Err(Error::WrongCase("needs a^{p^k(p^k+1)} != b^{p^k+1}"));
        }
        let mid = self.f_middle_coefficient(pair);
        let big_a_q1 = ctx.frobenius(&big_a, k);
        let l = self.linearized(pair);
        let mut zeros_l = Vec::new();
        let mut zeros_f = Vec::new();
        for x in ctx.elements() {
            let fx = ctx.add(
                &ctx.add(
                    &ctx.mul(&big_a, &ctx.frobenius(&x, 2 * k)),
                    &ctx.mul(&mid, &ctx.frobenius(&x, k)),
                ),
                &ctx.mul(&big_a_q1, &x),
            );
            if fx.is_zero() {
                zeros_f.push(x.clone());
            }
            if self.eval_linearized(&l, &x).is_zero() {
                zeros_l.push(x);
            }
        }
        if zeros_f != zeros_l {
            return Err(Error::OracleMismatch(format!(
                "L has {} zeros, F has {}",
                zeros_l.len(),
                zeros_f.len()
            )));
        }
        let (n, _) = self.n_count(pair)?;
        if n > 2 {
            return Err(Error::BoundViolation(format!("N = {n} > 2 outside the Jacobsthal case")));
        }
        Ok(Prop1Report { zeros_l, zeros_f, n })
    }

    fn require_jacobsthal(&self, pair: &CoeffPair) -> Result<()> {
        if self.classify(pair)?.tag != CaseTag::Jacobsthal {
            return Err(Error::WrongCase("needs a^{p^k(p^k+1)} = b^{p^k+1} and a^2 != b^d"));
        }
        Ok(())
    }

    /// `-b^{p^{3k}}/a`, the target of `g^{p^k - 1}`.
    fn g_target(&self, pair: &CoeffPair) -> Result<Elem> {
        let ctx = self.ctx();
        let b3 = ctx.frobenius(&pair.b, 3 * self.params().k);
        Ok(ctx.neg(&ctx.div(&b3, &pair.a)?))
    }

    /// The canonical `g = ν^t ∈ GF(p^{2k})^*` with `g^{p^k-1} = -b^{p^{3k}}/a`
    /// (smallest `t ≥ 0`).
    pub fn find_g(&self, pair: &CoeffPair) -> Result<Elem> {
        self.require_jacobsthal(pair)?;
        let ctx = self.ctx();
        let q1 = self.params().q1();
        let gf2k = self.gf_2k();
        let target = self.g_target(pair)?;
        let e = gf2k
            .discrete_log(&target)
            .map_err(|e| Error::NoSolution(format!("target not in GF(p^2k): {e}")))?;
        if e % (q1 - 1) != 0 {
            return Err(Error::NoSolution(format!(
                "log of target ({e}) not divisible by p^k - 1"
            )));
        }
        let g = ctx.pow(gf2k.generator(), e / (q1 - 1));
        if ctx.pow(&g, q1 - 1) != target {
            return Err(Error::NoSolution("g^{p^k-1} check failed".into()));
        }
        Ok(g)
    }

    /// `#{c ∈ GF(p^k) : (cg)² - b^{p^{2k}+1} is a nonsquare in GF(p^{2k})}`.
    pub fn n_via_nonsquares(&self, pair: &CoeffPair) -> Result<u64> {
        let g = self.find_g(pair)?;
        self.n_via_nonsquares_with(pair, &g)
    }

    /// As [`Instance::n_via_nonsquares`] with a caller-chosen `g`.
    pub fn n_via_nonsquares_with(&self, pair: &CoeffPair, g: &Elem) -> Result<u64> {
        self.require_jacobsthal(pair)?;
        let ctx = self.ctx();
        if ctx.mul(&ctx.pow(g, self.params().q1() - 1), &pair.a) != ctx.neg(&ctx.frobenius(&pair.b, 3 * self.params().k)) {
            return Err(Error::WrongCase("g does not satisfy g^{p^k-1} = -b^{p^{3k}}/a"));
        }
        let gf2k = self.gf_2k();
        let bn = ctx.pow(&pair.b, self.params().q2() + 1);
        let mut n = 0;
        for c in self.gf_k().elements() {
            let v = ctx.sub(&ctx.square(&ctx.mul(&c, g)), &bn);
            match gf2k.quadratic_character(&v)? {
                -1 => n += 1,
                0 => {
                    return Err(Error::OracleMismatch(
                        "(cg)^2 - b^{p^2k+1} vanished".into(),
                    ))
                }
                _ => {}
            }
        }
        Ok(n)
    }

    /// `N` from `2N = p^k - H_{p^k+1}(-b^{p^{2k}+1}/g²)/(p^k+1) + 1`.
    pub fn n_via_jacobsthal(&self, pair: &CoeffPair) -> Result<u64> {
        let g = self.find_g(pair)?;
        let ctx = self.ctx();
        let q1 = self.params().q1() as i64;
        let bn = ctx.pow(&pair.b, self.params().q2() + 1);
        let arg = ctx.neg(&ctx.div(&bn, &ctx.square(&g))?);
        let jac = Jacobsthal::new(ctx)?;
        let h = jac.h_sum(q1 as u64 + 1, &arg)?;
        if h % (q1 + 1) != 0 {
            return Err(Error::OracleMismatch(format!("H = {h} not divisible by p^k + 1")));
        }
        let two_n = q1 - h / (q1 + 1) + 1;
        if two_n < 0 || two_n % 2 != 0 {
            return Err(Error::OracleMismatch(format!("2N = {two_n} from the Jacobsthal sum")));
        }
        Ok(two_n as u64 / 2)
    }

    /// `N(a, b) = N(a h^d, b h²)`.
    pub fn corollary1_check(&self, pair: &CoeffPair, h: &Elem) -> Result<bool> {
        if h.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let ctx = self.ctx();
        let moved = CoeffPair::new(
            ctx.mul(&pair.a, &ctx.pow(h, self.params().d)),
            ctx.mul(&pair.b, &ctx.square(h)),
        )?;
        Ok(self.n_count(pair)?.0 == self.n_count(&moved)?.0)
    }

    /// Properties (i)–(v) of a Jacobsthal-case pair: inversion, sign flips,
    /// their combination, parity and the deviation bound.
    pub fn corollary_suite(&self, pair: &CoeffPair) -> Result<Vec<PropertyCheck>> {
        self.require_jacobsthal(pair)?;
        let ctx = self.ctx();
        let fp = self.params();
        let q1 = fp.q1();
        let square = self.chi_n(&pair.b) == 1;
        let n = self.n_count(pair)?.0;
        let inv = CoeffPair::new(ctx.inv(&pair.a)?, ctx.inv(&pair.b)?)?;
        let n_inv = self.n_count(&inv)?.0;
        let n_neg_a = self.n_count(&CoeffPair::new(ctx.neg(&pair.a), pair.b.clone())?)?.0;
        let n_neg_b = self.n_count(&CoeffPair::new(pair.a.clone(), ctx.neg(&pair.b))?)?.0;

        let mut out = Vec::new();
        let want_i = if square { n_inv } else { q1 + 1 - n_inv };
        out.push(PropertyCheck::new(
            "(i) inverse pair",
            n == want_i,
            format!("N = {n}, N(1/a, 1/b) = {n_inv}, b square = {square}"),
        ));
        out.push(PropertyCheck::new(
            "(ii) sign flips",
            n + n_neg_a == q1 + 1 && n + n_neg_b == q1 + 1,
            format!("N = {n}, N(-a, b) = {n_neg_a}, N(a, -b) = {n_neg_b}"),
        ));
        let want_iii = if square { q1 + 1 - n_inv } else { n_inv };
        out.push(PropertyCheck::new(
            "(iii) combined",
            n_neg_a == want_iii,
            format!("N(-a, b) = {n_neg_a}, expected {want_iii}"),
        ));
        out.push(PropertyCheck::new(
            "(iv) parity",
            (n % 2 == 0) == square,
            format!("N = {n}, b square = {square}"),
        ));
        // |N - (p^k+1)/2| ≤ p^{k/2}  ⇔  (2N - p^k - 1)² ≤ 4 p^k
        let dev = 2 * n as i128 - q1 as i128 - 1;
        let mut bound_ok = n >= 1 && dev * dev <= 4 * q1 as i128;
        if fp.k > 2 {
            bound_ok &= n > 8;
        }
        out.push(PropertyCheck::new("(v) bound", bound_ok, format!("N = {n}")));
        Ok(out)
    }

    /// For `p ≡ 3 (mod 4)`, odd `k`, square `b`, both
    /// `a = ±ν^{(p^{2k}-1)/4} b^{d/2}` give `N = (p^k+1)/2`. `None` when the
    /// preconditions do not hold.
    pub fn symmetric_point_check(&self, b: &Elem) -> Result<Option<PropertyCheck>> {
        let fp = self.params();
        if fp.p % 4 != 3 || fp.k % 2 == 0 || self.chi_n(b) != 1 {
            return Ok(None);
        }
        let ctx = self.ctx();
        let a = ctx.mul(&ctx.pow(&self.nu(), (fp.q2() - 1) / 4), &ctx.pow(b, fp.d / 2));
        let pair = CoeffPair::new(a.clone(), b.clone())?;
        self.require_jacobsthal(&pair)?;
        let n = self.n_count(&pair)?.0;
        let n_neg = self.n_count(&CoeffPair::new(ctx.neg(&a), b.clone())?)?.0;
        let half = (fp.q1() + 1) / 2;
        Ok(Some(PropertyCheck::new(
            "(vi) symmetric point",
            n == half && n_neg == half,
            format!("a = {}, N(a, b) = {n}, N(-a, b) = {n_neg}", ctx.format_power(&a)),
        )))
    }

    /// All `a` for which `(a, b)` is in the Jacobsthal case, in log order.
    ///
    /// `a^{p^k(p^k+1)} = b^{p^k+1}` fixes `log a` modulo
    /// `M = (p^n-1)/(p^k+1)` to `p^{-k} log b`, leaving `p^k + 1` candidates.
    pub fn jacobsthal_coefficients(&self, b: &Elem) -> Result<Vec<Elem>> {
        if b.is_zero() {
            return Err(Error::ZeroB);
        }
        let ctx = self.ctx();
        let q1 = self.params().q1();
        let m = ctx.order() / (q1 + 1);
        let inv = inv_mod(q1 % m, m).expect("p^k is a unit mod p^n - 1");
        let e0 = mul_mod(ctx.log(b)? % m, inv, m);
        let mut out = Vec::new();
        for j in 0..=q1 {
            let a = ctx.xi_pow(e0 + j * m);
            let pair = CoeffPair::new(a.clone(), b.clone())?;
            if self.classify(&pair)?.tag == CaseTag::Jacobsthal {
                out.push(a);
            }
        }
        Ok(out)
    }

    /// `Σ N(a, b)` over the Jacobsthal-case `a` equals
    /// `(p^k+1)(p^k - b^{(p^n-1)/2})/2`. Returns `(sum, expected, #a)`.
    pub fn jacobsthal_n_total(&self, b: &Elem) -> Result<(u64, u64, usize)> {
        let coeffs = self.jacobsthal_coefficients(b)?;
        let mut sum = 0;
        for a in &coeffs {
            sum += self.n_count(&CoeffPair::new(a.clone(), b.clone())?)?.0;
        }
        let q1 = self.params().q1() as i64;
        let expected = (q1 + 1) * (q1 - self.chi_n(b) as i64) / 2;
        Ok((sum, expected as u64, coeffs.len()))
    }

    pub fn record(&self, pair: &CoeffPair, oracle: bool) -> Result<ExpSumRecord> {
        let tag = self.classify(pair)?.tag;
        let (n, witnesses) = self.n_count(pair)?;
        let s0 = self.params().q2() as i64 * (2 * n as i64 - 1);
        if oracle {
            self.s0_checked(pair)?;
        }
        Ok(ExpSumRecord { pair: pair.clone(), tag, n, s0, witnesses })
    }

    pub fn line(&self, r: &ExpSumRecord) -> ExpSumLine {
        let ctx = self.ctx();
        ExpSumLine {
            a: ctx.format_power(&r.pair.a),
            b: ctx.format_power(&r.pair.b),
            tag: r.tag,
            n: r.n,
            s0: r.s0,
            witnesses: r.witnesses.iter().map(|w| ctx.format_power(w)).collect(),
        }
    }

    /// Every `a ∈ GF(p^n)` for fixed nonzero `b`: classification, `N`, `S_f(0)`
    /// (brute-force checked when `oracle` is set), the `r, s, t` tallies and
    /// the Jacobsthal-case histogram of `N`. The linear identities and
    /// `Σ_a S_f(0) = p^n` are enforced.
    pub fn distribution_sweep(&self, b: &Elem, oracle: bool) -> Result<Sweep> {
        if b.is_zero() {
            return Err(Error::ZeroB);
        }
        let ctx = self.ctx();
        let fp = self.params();
        let q2 = fp.q2() as i64;
        let candidates: Vec<Elem> = std::iter::once(ctx.zero())
            .chain((0..ctx.order()).map(|e| ctx.xi_pow(e)))
            .collect();
        let records = candidates
            .par_iter()
            .map(|a| self.record(&CoeffPair::new(a.clone(), b.clone())?, oracle))
            .collect::<Result<Vec<_>>>()?;

        let (mut r, mut s, mut t) = (0u64, 0u64, 0u64);
        let mut jac_histogram = BTreeMap::new();
        let mut sum_s0 = 0i64;
        for rec in &records {
            sum_s0 += rec.s0;
            match rec.tag {
                CaseTag::Jacobsthal => {
                    if rec.s0 == -q2 {
                        return Err(Error::BoundViolation(format!(
                            "S_f(0) = -p^2k in the Jacobsthal case at a = {}",
                            ctx.format_power(&rec.pair.a)
                        )));
                    }
                    *jac_histogram.entry(rec.n).or_insert(0) += 1;
                }
                _ => match rec.s0 / q2 {
                    -1 => r += 1,
                    1 => s += 1,
                    3 => t += 1,
                    _ => {
                        return Err(Error::BoundViolation(format!(
                            "S_f(0) = {} outside {{-p^2k, p^2k, 3p^2k}} at a = {}",
                            rec.s0,
                            ctx.format_power(&rec.pair.a)
                        )))
                    }
                },
            }
        }
        let chi = self.chi_n(b) as i64;
        let (qn, q1) = (fp.qn() as i64, fp.q1() as i64);
        let report = DistributionReport {
            b: ctx.format_power(b),
            b_character: chi as i8,
            r,
            s,
            t,
            jac_histogram,
            sum_s0,
            residual_count: (r + s + t) as i64 - (qn - q1 + chi),
            residual_weighted: -(r as i64) + s as i64 + 3 * t as i64 - chi * q1,
            residual_sum: sum_s0 - qn,
        };
        if report.residual_count != 0 || report.residual_weighted != 0 || report.residual_sum != 0 {
            return Err(Error::OracleMismatch(format!(
                "distribution identities fail for b = {}: residuals {}, {}, {}",
                report.b, report.residual_count, report.residual_weighted, report.residual_sum
            )));
        }
        Ok(Sweep { records, report })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p3() -> Instance {
        Instance::new(3, 1).unwrap()
    }

    /// `Σ_x ω^{Tr_n(a x^d + b x²)}` by plain field arithmetic, element by element.
    fn s0_direct(inst: &Instance, pair: &CoeffPair) -> CycInt {
        let ctx = inst.ctx();
        let p = ctx.p();
        let mut counts = vec![0u64; p as usize];
        for x in ctx.elements() {
            let v = ctx.add(
                &ctx.mul(&pair.a, &ctx.pow(&x, inst.params().d)),
                &ctx.mul(&pair.b, &ctx.square(&x)),
            );
            counts[ctx.abs_trace(&v) as usize] += 1;
        }
        CycInt::from_residue_counts(p, &counts)
    }

    #[test]
    fn rejects_zero_pair() {
        let inst = p3();
        let z = inst.ctx().zero();
        assert_eq!(CoeffPair::new(z.clone(), z), Err(Error::BothCoefficientsZero));
    }

    #[test]
    fn l_is_odd_and_lands_in_gf2k() {
        let inst = p3();
        let ctx = inst.ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pair = CoeffPair::new(ctx.xi_pow(5), ctx.xi_pow(17)).unwrap();
        assert!(inst.l_eval(&ctx.zero(), &pair).is_zero());
        for _ in 0..100 {
            let x = ctx.decode(rng.gen_range(0..81));
            let lhs = inst.l_eval(&ctx.neg(&x), &pair);
            assert_eq!(lhs, ctx.neg(&inst.l_eval(&x, &pair)));
        }
        let gf2k = inst.gf_2k();
        for u in inst.subgroup_u() {
            assert!(gf2k.contains(&inst.l_eval(u, &pair)));
        }
    }

    #[test]
    fn n_count_examples() {
        let inst = p3();
        let ctx = inst.ctx();
        let one = ctx.one();
        let (n, w) = inst.n_count(&CoeffPair::new(one.clone(), one.clone()).unwrap()).unwrap();
        assert_eq!((n, w.len()), (0, 0));
        let (n, w) = inst.n_count(&CoeffPair::new(ctx.neg(&one), one.clone()).unwrap()).unwrap();
        assert_eq!(n, 1);
        // ±b^{-(p^{2k}-1)/2} with b = 1 is ±1
        assert_eq!(w, vec![one.clone(), ctx.neg(&one)]);
        let pair = CoeffPair::new(ctx.zero(), one).unwrap();
        assert_eq!(inst.n_count(&pair).unwrap().0, 0);
        assert_eq!(inst.s0_closed(&pair).unwrap(), -9);
        assert_eq!(inst.s0_bruteforce(&pair).unwrap().as_integer(), Some(-9));
    }

    #[test]
    fn fast_bruteforce_matches_direct() {
        let inst = p3();
        let ctx = inst.ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let pair = CoeffPair::new(
                ctx.decode(rng.gen_range(0..81)),
                ctx.decode(rng.gen_range(1..81)),
            )
            .unwrap();
            assert_eq!(inst.s0_bruteforce(&pair).unwrap(), s0_direct(&inst, &pair));
        }
    }

    #[test]
    fn s0_small_cases() {
        let inst = p3();
        let ctx = inst.ctx();
        let one = ctx.one();
        assert_eq!(inst.s0_checked(&CoeffPair::new(one.clone(), one.clone()).unwrap()).unwrap(), -9);
        assert_eq!(inst.s0_checked(&CoeffPair::new(ctx.neg(&one), one).unwrap()).unwrap(), 9);
    }

    #[test]
    fn classification_examples() {
        let inst = p3();
        let ctx = inst.ctx();
        let one = ctx.one();
        let c = inst.classify(&CoeffPair::new(one.clone(), one.clone()).unwrap()).unwrap();
        assert_eq!(c, Classification { tag: CaseTag::SquareMatch, norms_equal: true });
        let c = inst.classify(&CoeffPair::new(ctx.zero(), one.clone()).unwrap()).unwrap();
        assert_eq!(c.tag, CaseTag::NormDiffer);
        let a = ctx.pow(&inst.nu(), 2);
        let c = inst.classify(&CoeffPair::new(a, one).unwrap()).unwrap();
        assert_eq!(c.tag, CaseTag::Jacobsthal);
    }

    #[test]
    fn square_match_norms_follow_b_squareness() {
        let inst = p3();
        let ctx = inst.ctx();
        for e in 0..80 {
            let b = ctx.xi_pow(e);
            let a = ctx.pow(&b, inst.params().d / 2);
            for a in [a.clone(), ctx.neg(&a)] {
                let c = inst.classify(&CoeffPair::new(a, b.clone()).unwrap()).unwrap();
                assert_eq!(c.tag, CaseTag::SquareMatch);
                assert_eq!(c.norms_equal, e % 2 == 0);
            }
        }
    }

    #[test]
    fn f_and_l_share_zeros() {
        let inst = p3();
        let ctx = inst.ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut done = 0;
        while done < 200 {
            let pair = CoeffPair::new(
                ctx.decode(rng.gen_range(0..81)),
                ctx.decode(rng.gen_range(0..81)),
            );
            let Ok(pair) = pair else { continue };
            if inst.classify(&pair).unwrap().norms_equal {
                assert!(matches!(inst.prop1_f_zeros(&pair), Err(Error::WrongCase(_))));
                continue;
            }
            let rep = inst.prop1_f_zeros(&pair).unwrap();
            assert!(rep.n <= 2);
            done += 1;
        }
    }

    #[test]
    fn middle_coefficient_vanishes_in_jacobsthal_case() {
        let inst = p3();
        let ctx = inst.ctx();
        for b in [ctx.one(), ctx.xi().clone()] {
            for a in inst.jacobsthal_coefficients(&b).unwrap() {
                let pair = CoeffPair::new(a, b.clone()).unwrap();
                assert!(inst.f_middle_coefficient(&pair).is_zero());
            }
        }
    }

    #[test]
    fn jacobsthal_coefficients_match_classification() {
        let inst = p3();
        let ctx = inst.ctx();
        for e in 0..80 {
            let b = ctx.xi_pow(e);
            let brute: Vec<Elem> = (0..80)
                .map(|j| ctx.xi_pow(j))
                .filter(|a| {
                    let pair = CoeffPair::new(a.clone(), b.clone()).unwrap();
                    inst.classify(&pair).unwrap().tag == CaseTag::Jacobsthal
                })
                .collect();
            assert_eq!(inst.jacobsthal_coefficients(&b).unwrap(), brute);
            assert_eq!(brute.len(), if e % 2 == 0 { 2 } else { 4 });
        }
    }

    #[test]
    fn three_routes_to_n() {
        let inst = p3();
        let ctx = inst.ctx();
        let jac = Jacobsthal::new(ctx).unwrap();
        let gf_k = inst.gf_k();
        for e in 0..80 {
            let b = ctx.xi_pow(e);
            for a in inst.jacobsthal_coefficients(&b).unwrap() {
                let pair = CoeffPair::new(a, b.clone()).unwrap();
                let n = inst.n_count(&pair).unwrap().0;
                let g = inst.find_g(&pair).unwrap();
                // g^{p^k-1}·a + b^{p^{3k}} = 0
                let lhs = ctx.add(&ctx.mul(&ctx.pow(&g, 2), &pair.a), &ctx.frobenius(&b, 3));
                assert!(lhs.is_zero());
                let ratio = ctx.div(&ctx.pow(&b, 10), &ctx.square(&g)).unwrap();
                assert!(!jac.small().contains(&ratio));
                assert_eq!(inst.n_via_nonsquares(&pair).unwrap(), n);
                assert_eq!(inst.n_via_jacobsthal(&pair).unwrap(), n);
                // rescaling g by GF(p^k)^* leaves the count unchanged
                for c in gf_k.nonzero_elements() {
                    let g2 = ctx.mul(&g, &c);
                    assert_eq!(inst.n_via_nonsquares_with(&pair, &g2).unwrap(), n);
                }
                assert!((1..=3).contains(&n));
            }
        }
    }

    #[test]
    fn wrong_case_is_rejected() {
        let inst = p3();
        let one = inst.ctx().one();
        let pair = CoeffPair::new(one.clone(), one).unwrap();
        assert!(matches!(inst.find_g(&pair), Err(Error::WrongCase(_))));
        assert!(matches!(inst.n_via_jacobsthal(&pair), Err(Error::WrongCase(_))));
        assert!(matches!(inst.corollary_suite(&pair), Err(Error::WrongCase(_))));
    }

    #[test]
    fn scaling_invariance() {
        let inst = p3();
        let ctx = inst.ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let one = ctx.one();
        let pair = CoeffPair::new(ctx.xi_pow(3), ctx.xi_pow(7)).unwrap();
        assert!(inst.corollary1_check(&pair, &one).unwrap());
        assert_eq!(inst.corollary1_check(&pair, &ctx.zero()), Err(Error::ZeroArgument));
        for _ in 0..200 {
            let pair = CoeffPair::new(
                ctx.decode(rng.gen_range(0..81)),
                ctx.decode(rng.gen_range(1..81)),
            )
            .unwrap();
            let h = ctx.decode(rng.gen_range(1..81));
            assert!(inst.corollary1_check(&pair, &h).unwrap());
            let d = inst.params().d;
            assert_eq!(ctx.pow(&h, d), ctx.pow(&ctx.neg(&h), d));
        }
    }

    #[test]
    fn jacobsthal_case_properties_p3() {
        let inst = p3();
        let ctx = inst.ctx();
        let one = ctx.one();
        let (sum, expected, count) = inst.jacobsthal_n_total(&one).unwrap();
        assert_eq!((sum, expected, count), (4, 4, 2));
        let (sum, expected, count) = inst.jacobsthal_n_total(ctx.xi()).unwrap();
        assert_eq!((sum, expected, count), (8, 8, 4));
        let vi = inst.symmetric_point_check(&one).unwrap().unwrap();
        assert!(vi.passed, "{vi:?}");
        assert!(inst.symmetric_point_check(ctx.xi()).unwrap().is_none());
        for e in 0..80 {
            let b = ctx.xi_pow(e);
            for a in inst.jacobsthal_coefficients(&b).unwrap() {
                let pair = CoeffPair::new(a, b.clone()).unwrap();
                for c in inst.corollary_suite(&pair).unwrap() {
                    assert!(c.passed, "{c:?}");
                }
            }
        }
    }

    #[test]
    fn sweep_identities_p3() {
        let inst = p3();
        let ctx = inst.ctx();
        let rep = inst.distribution_sweep(&ctx.one(), true).unwrap().report;
        assert_eq!(rep.r + rep.s + rep.t, 79);
        assert_eq!(-(rep.r as i64) + rep.s as i64 + 3 * rep.t as i64, 3);
        assert_eq!(rep.sum_s0, 81);
        let rep = inst.distribution_sweep(ctx.xi(), true).unwrap().report;
        assert_eq!(rep.r + rep.s + rep.t, 77);
        assert_eq!(-(rep.r as i64) + rep.s as i64 + 3 * rep.t as i64, -3);
        assert_eq!(inst.distribution_sweep(&ctx.zero(), false).err(), Some(Error::ZeroB));
    }
}
