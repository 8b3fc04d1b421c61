//! Walsh spectra `S_f(y) = Σ_x ω^{f(x) - Tr_n(yx)}` in `Z[ω]`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expsum::CoeffPair;
use crate::field::Elem;
use crate::numth::inv_mod;
use crate::{CycInt, Instance};

/// `f(x) = Tr_n(a·x^d + b·x²)`; unlike [`CoeffPair`], `(0, 0)` is allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionSpec {
    pub a: Elem,
    pub b: Elem,
}

impl From<CoeffPair> for FunctionSpec {
    fn from(p: CoeffPair) -> Self {
        Self { a: p.a, b: p.b }
    }
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    /// `(y, S_f(y))` with `y = 0` first, then `y = ξ^e` for increasing `e`.
    pub coefficients: Vec<(Elem, CycInt)>,
    pub summary: BTreeMap<CycInt, u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumLine {
    pub y: String,
    pub coeff: Vec<i64>,
    pub norm2: i64,
}

#[derive(Clone, Debug)]
pub struct Theorem1Report {
    pub y: Elem,
    pub x0: Elem,
    pub coeff: CycInt,
    pub predicted: CycInt,
    /// `Some(x0 == -Tr_k^{2k}(y²))` when `y² ∈ GF(p^{2k})`.
    pub special_case: Option<bool>,
}

impl Instance {
    pub fn function_spec(&self, a: Elem, b: Elem) -> FunctionSpec {
        FunctionSpec { a, b }
    }

    /// `f(x)` as a residue in `0..p`.
    pub fn f_eval(&self, spec: &FunctionSpec, x: &Elem) -> u32 {
        let ctx = self.ctx();
        let v = ctx.add(
            &ctx.mul(&spec.a, &ctx.pow(x, self.params().d)),
            &ctx.mul(&spec.b, &ctx.square(x)),
        );
        ctx.abs_trace(&v)
    }

    pub fn walsh_coeff(&self, spec: &FunctionSpec, y: &Elem) -> CycInt {
        let counts = self.exponent_histogram(&spec.a, &spec.b, Some(y));
        CycInt::from_residue_counts(self.p(), &counts)
    }

    /// All `p^n` coefficients. Parseval is checked.
    pub fn full_spectrum(&self, spec: &FunctionSpec) -> Result<Spectrum> {
        let ctx = self.ctx();
        let ys: Vec<Elem> = std::iter::once(ctx.zero())
            .chain((0..ctx.order()).map(|e| ctx.xi_pow(e)))
            .collect();
        let coefficients: Vec<(Elem, CycInt)> = ys
            .into_par_iter()
            .map(|y| {
                let c = self.walsh_coeff(spec, &y);
                (y, c)
            })
            .collect();
        let mut summary = BTreeMap::new();
        for (_, c) in &coefficients {
            *summary.entry(c.clone()).or_insert(0) += 1;
        }
        let spectrum = Spectrum { coefficients, summary };
        self.check_parseval(&spectrum)?;
        Ok(spectrum)
    }

    /// `Σ_y |S_f(y)|² = p^{2n}`.
    pub fn check_parseval(&self, spectrum: &Spectrum) -> Result<()> {
        let p = self.p();
        let mut total = CycInt::zero(p);
        for (value, count) in &spectrum.summary {
            total += &value.norm_squared().scale(*count as i64);
        }
        let qn = self.params().qn() as i64;
        if total.as_integer() != Some(qn * qn) {
            return Err(Error::OracleMismatch(format!("Parseval sum is {total}, expected {}", qn * qn)));
        }
        Ok(())
    }

    /// `p^{-n} Σ_y S_f(y) ω^{Tr_n(yx)}`, which should be `ω^{f(x)}`.
    pub fn inverse_at(&self, spectrum: &Spectrum, x: &Elem) -> Result<CycInt> {
        let ctx = self.ctx();
        let p = self.p();
        let mut acc = CycInt::zero(p);
        for (y, c) in &spectrum.coefficients {
            let t = ctx.abs_trace(&ctx.mul(y, x));
            acc += &c.omega_shift(t as u64);
        }
        let qn = self.params().qn() as i64;
        if acc.coeffs().iter().any(|c| c % qn != 0) {
            return Err(Error::NotRationalInteger(format!("{acc} is not divisible by p^n")));
        }
        CycInt::from_coeffs(p, acc.coeffs().iter().map(|c| c / qn).collect())
    }

    pub fn is_bent(&self, spectrum: &Spectrum) -> bool {
        let qn = self.params().qn() as i64;
        spectrum.summary.keys().all(|v| v.norm_squared().as_integer() == Some(qn))
    }

    /// Every coefficient lies in `{-p^{n/2} ω^j}`.
    pub fn is_weakly_regular_neg(&self, spectrum: &Spectrum) -> bool {
        let p = self.p();
        let root = -(self.params().q2() as i64);
        let allowed: Vec<CycInt> = (0..p as u64).map(|j| CycInt::omega_pow(p, j).scale(root)).collect();
        spectrum.summary.keys().all(|v| allowed.contains(v))
    }

    pub fn spectrum_line(&self, y: &Elem, c: &CycInt) -> SpectrumLine {
        SpectrumLine {
            y: self.ctx().format_power(y),
            coeff: c.coeffs().to_vec(),
            norm2: c.norm_squared().as_integer().unwrap_or(i64::MIN),
        }
    }

    /// `-p^{2k} ω^j` for `j = 1..p-1` occur `p^{2k-1}(p^{2k}+1)` times each and
    /// `-p^{2k}` occurs `(p^{2k-1}-1)(p^{2k}+1) + 1` times.
    pub fn bent_value_counts(&self) -> BTreeMap<CycInt, u64> {
        let p = self.p();
        let q2 = self.params().q2();
        let mut out = BTreeMap::new();
        for j in 0..p as u64 {
            let count = if j == 0 {
                (q2 / p as u64 - 1) * (q2 + 1) + 1
            } else {
                q2 / p as u64 * (q2 + 1)
            };
            out.insert(CycInt::omega_pow(p, j).scale(-(q2 as i64)), count);
        }
        out
    }

    /// Roots in `GF(p^k)` of
    /// `y^{p^{2k}+1} + (y²+X)^{(p^{2k}+1)/2} + y^{p^k(p^{2k}+1)} + (y²+X)^{p^k(p^{2k}+1)/2}`.
    pub fn x0_roots(&self, y: &Elem) -> Vec<Elem> {
        let ctx = self.ctx();
        let fp = self.params();
        let (q1, q2) = (fp.q1(), fp.q2());
        let y2 = ctx.square(y);
        let c = ctx.pow(y, q2 + 1);
        let c = ctx.add(&c, &ctx.frobenius(&c, fp.k));
        self.gf_k()
            .elements()
            .into_iter()
            .filter(|x| {
                let h = ctx.pow(&ctx.add(&y2, x), (q2 + 1) / 2);
                let v = ctx.add(&c, &ctx.add(&h, &ctx.pow(&h, q1)));
                v.is_zero()
            })
            .collect()
    }

    /// Checks `S_f(y) = -p^{2k} ω^{Tr_k(x0)·4^{-1}}` for `f = Tr_n(x^d + x²)`.
    pub fn theorem1_verify(&self, y: &Elem) -> Result<Theorem1Report> {
        let ctx = self.ctx();
        let fp = self.params();
        let p = self.p();
        let roots = self.x0_roots(y);
        if roots.len() != 1 {
            return Err(Error::RootCountViolation(format!(
                "{} roots in GF(p^k) at y = {}",
                roots.len(),
                ctx.format_power(y)
            )));
        }
        let x0 = roots.into_iter().next().expect("one root");
        let gf_k = self.gf_k();
        let tr = gf_k.abs_trace(&x0)? as u64;
        let inv4 = inv_mod(4, p as u64).expect("p odd");
        let predicted = CycInt::omega_pow(p, tr * inv4 % p as u64).scale(-(fp.q2() as i64));
        let spec = FunctionSpec { a: ctx.one(), b: ctx.one() };
        let coeff = self.walsh_coeff(&spec, y);
        if coeff != predicted {
            return Err(Error::OracleMismatch(format!(
                "S_f({}) = {coeff}, predicted {predicted}",
                ctx.format_power(y)
            )));
        }
        let y2 = ctx.square(y);
        let gf_2k = self.gf_2k();
        let special_case = if gf_2k.contains(&y2) {
            let expected = ctx.neg(&gf_2k.trace_down(&y2, fp.k)?);
            if expected != x0 {
                return Err(Error::OracleMismatch(format!(
                    "x0 = {} but -Tr(y^2) = {} at y = {}",
                    ctx.format_power(&x0),
                    ctx.format_power(&expected),
                    ctx.format_power(y)
                )));
            }
            Some(true)
        } else {
            None
        };
        Ok(Theorem1Report { y: y.clone(), x0, coeff, predicted, special_case })
    }
}
