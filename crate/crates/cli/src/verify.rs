//! The `verify-all` suite: every closed-form identity checked against brute
//! force at one `(p, k)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use charsum::cyclotomy::Cyclotomy;
use charsum::expsum::{CaseTag, CoeffPair, ExpSumRecord};
use charsum::jacobsthal::{Jacobsthal, Theorem2Report};
use charsum::sequences::fit_affine;
use charsum::walsh::FunctionSpec;
use charsum::{Elem, Instance};

#[derive(Clone, Debug, Serialize)]
pub struct Step {
    pub step: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub struct VerifyConfig {
    /// Coefficients `b` for the full sweeps over `a`.
    pub sweep_b: Vec<Elem>,
    pub seed: u64,
    /// Random triples for the scaling invariance.
    pub scaling_samples: usize,
    /// Random pairs for the `F`/`L` zero-set comparison.
    pub zero_set_samples: usize,
}

type StepResult = Result<String, String>;

fn err<E: ToString>(e: E) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub struct Suite<'a> {
    inst: &'a Instance,
    cfg: &'a VerifyConfig,
    sweeps: Vec<Vec<ExpSumRecord>>,
}

impl<'a> Suite<'a> {
    pub fn new(inst: &'a Instance, cfg: &'a VerifyConfig) -> Self {
        Self { inst, cfg, sweeps: Vec::new() }
    }

    /// Runs every step in order, handing each result to `emit` as it finishes.
    pub fn run<E>(&mut self, mut emit: impl FnMut(&Step) -> Result<(), E>) -> Result<Vec<Step>, E> {
        let mut steps = Vec::new();
        let mut push = |step: &'static str, r: StepResult, steps: &mut Vec<Step>| -> Result<(), E> {
            let s = match r {
                Ok(detail) => Step { step, passed: true, detail },
                Err(detail) => Step { step, passed: false, detail },
            };
            emit(&s)?;
            steps.push(s);
            Ok(())
        };
        push("cyclotomic-numbers", self.cyclotomic_numbers(), &mut steps)?;
        push("period-sums", self.period_sums(), &mut steps)?;
        let jac = Jacobsthal::new(self.inst.ctx());
        let scan = jac.as_ref().map_err(err).and_then(|j| j.theorem2_scan().map_err(err));
        push("companion-sums", self.companion_sums(jac.as_ref().ok()), &mut steps)?;
        push("jacobsthal-bound", self.jacobsthal_bound(jac.as_ref().ok(), &scan), &mut steps)?;
        push("curve-count", self.curve_count(&scan), &mut steps)?;
        push("expsum-oracle", self.expsum_oracle(), &mut steps)?;
        push("non-jacobsthal-range", self.non_jacobsthal_range(), &mut steps)?;
        push("jacobsthal-three-way", self.three_way(), &mut steps)?;
        push("scaling-invariance", self.scaling_invariance(), &mut steps)?;
        push("jacobsthal-properties", self.jacobsthal_properties(), &mut steps)?;
        push("distribution-identities", self.distribution_identities(), &mut steps)?;
        push("bent-spectrum", self.bent_spectrum(), &mut steps)?;
        push("sequence-correlation", self.sequence_correlation(), &mut steps)?;
        Ok(steps)
    }

    fn cyclotomic_numbers(&self) -> StepResult {
        let cyc = Cyclotomy::new(self.inst.gf_2k()).map_err(err)?;
        if let Some(m) = cyc.verify_lemma1().first() {
            return Err(format!("entry ({}, {}) is {}, closed form {}", m.i, m.j, m.got, m.expected));
        }
        let t = cyc.full_table();
        Ok(format!("{0}x{0} table, total {1}", t.order, t.total()))
    }

    fn period_sums(&self) -> StepResult {
        let cyc = Cyclotomy::new(self.inst.gf_2k()).map_err(err)?;
        if let Some(m) = cyc.verify_pt().first() {
            return Err(format!("P_{} is {}, closed form {}", m.i, m.got, m.expected));
        }
        Ok(format!("{} classes", cyc.order()))
    }

    fn companion_sums(&self, jac: Option<&Jacobsthal>) -> StepResult {
        let jac = jac.ok_or("no Jacobsthal context")?;
        let n = self.inst.params().q1() + 1;
        let elems = jac.non_base_elements();
        for a in &elems {
            let got = jac.i_sum(n, a).map_err(err)?;
            let want = jac.i_closed_form(a).map_err(err)?;
            ensure(got == want, || {
                format!("I({}) = {got}, closed form {want}", self.inst.ctx().format_power(a))
            })?;
        }
        Ok(format!("{} elements", elems.len()))
    }

    fn jacobsthal_bound(&self, jac: Option<&Jacobsthal>, scan: &Result<Theorem2Report, String>) -> StepResult {
        let jac = jac.ok_or("no Jacobsthal context")?;
        let rep = scan.as_ref().map_err(Clone::clone)?;
        for r in &rep.records {
            ensure(jac.within_bound(r.h), || format!("H = {} exceeds the bound", r.h))?;
        }
        Ok(format!(
            "{} elements, max |H|/bound = {:.6} at {}, equality {}",
            rep.records.len(),
            rep.max_ratio,
            self.inst.ctx().format_power(&rep.argmax),
            if rep.attained { "attained" } else { "not attained" }
        ))
    }

    fn curve_count(&self, scan: &Result<Theorem2Report, String>) -> StepResult {
        let rep = scan.as_ref().map_err(Clone::clone)?;
        let q = self.inst.params().q1() as i64;
        for r in &rep.records {
            let n = r.curve_n.ok_or("missing curve count")?;
            ensure(r.h == (q + 1) * (n - q), || format!("H = {}, curve count {n}", r.h))?;
        }
        Ok(format!("{} curves", rep.records.len()))
    }

    fn expsum_oracle(&mut self) -> StepResult {
        let inst = self.inst;
        let ctx = inst.ctx();
        let all_a: Vec<Elem> = std::iter::once(ctx.zero())
            .chain((0..ctx.order()).map(|e| ctx.xi_pow(e)))
            .collect();
        let mut pairs = 0;
        for b in &self.cfg.sweep_b {
            let records = all_a
                .par_iter()
                .map(|a| inst.record(&CoeffPair::new(a.clone(), b.clone())?, true))
                .collect::<charsum::Result<Vec<_>>>()
                .map_err(err)?;
            pairs += records.len();
            self.sweeps.push(records);
        }
        Ok(format!("{pairs} pairs, brute force equals the zero-count form"))
    }

    fn non_jacobsthal_range(&self) -> StepResult {
        let inst = self.inst;
        let ctx = inst.ctx();
        let q2 = inst.params().q2() as i64;
        let mut checked = 0;
        for rec in self.sweeps.iter().flatten().filter(|r| r.tag != CaseTag::Jacobsthal) {
            ensure(rec.n <= 2 && [-q2, q2, 3 * q2].contains(&rec.s0), || {
                format!(
                    "S_f(0) = {} at ({}, {})",
                    rec.s0,
                    ctx.format_power(&rec.pair.a),
                    ctx.format_power(&rec.pair.b)
                )
            })?;
            checked += 1;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        let mut sampled = 0;
        let mut tries = 0;
        while sampled < self.cfg.zero_set_samples && tries < 100 * self.cfg.zero_set_samples {
            tries += 1;
            let a = ctx.decode(rng.gen_range(0..ctx.size()));
            let b = ctx.decode(rng.gen_range(0..ctx.size()));
            let Ok(pair) = CoeffPair::new(a, b) else { continue };
            if inst.classify(&pair).map_err(err)?.tag != CaseTag::NormDiffer {
                continue;
            }
            inst.prop1_f_zeros(&pair).map_err(err)?;
            sampled += 1;
        }
        Ok(format!("{checked} swept pairs in range, {sampled} zero sets of F and L agree"))
    }

    fn all_b(&self) -> Vec<Elem> {
        let ctx = self.inst.ctx();
        (0..ctx.order()).map(|e| ctx.xi_pow(e)).collect()
    }

    fn jacobsthal_pairs(&self) -> Result<Vec<CoeffPair>, String> {
        let inst = self.inst;
        let per_b = self
            .all_b()
            .par_iter()
            .map(|b| {
                let coeffs = inst.jacobsthal_coefficients(b)?;
                coeffs.into_iter().map(|a| CoeffPair::new(a, b.clone())).collect()
            })
            .collect::<charsum::Result<Vec<Vec<CoeffPair>>>>()
            .map_err(err)?;
        Ok(per_b.into_iter().flatten().collect())
    }

    fn three_way(&self) -> StepResult {
        let inst = self.inst;
        let ctx = inst.ctx();
        let pairs = self.jacobsthal_pairs()?;
        pairs
            .par_iter()
            .map(|pair| -> Result<(), String> {
                let n = inst.n_count(pair).map_err(err)?.0;
                let n2 = inst.n_via_nonsquares(pair).map_err(err)?;
                let n3 = inst.n_via_jacobsthal(pair).map_err(err)?;
                ensure(n == n2 && n == n3, || {
                    format!(
                        "N = {n}, {n2}, {n3} at ({}, {})",
                        ctx.format_power(&pair.a),
                        ctx.format_power(&pair.b)
                    )
                })
            })
            .collect::<Result<Vec<()>, String>>()?;
        Ok(format!("{} pairs agree on all three paths", pairs.len()))
    }

    fn scaling_invariance(&self) -> StepResult {
        let ctx = self.inst.ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed.wrapping_add(1));
        for _ in 0..self.cfg.scaling_samples {
            let a = ctx.decode(rng.gen_range(0..ctx.size()));
            let b = ctx.decode(rng.gen_range(1..ctx.size()));
            let h = ctx.decode(rng.gen_range(1..ctx.size()));
            let pair = CoeffPair::new(a, b).map_err(err)?;
            ensure(self.inst.corollary1_check(&pair, &h).map_err(err)?, || {
                format!(
                    "N changes at ({}, {}) under h = {}",
                    ctx.format_power(&pair.a),
                    ctx.format_power(&pair.b),
                    ctx.format_power(&h)
                )
            })?;
        }
        Ok(format!("{} triples, seed {}", self.cfg.scaling_samples, self.cfg.seed))
    }

    fn jacobsthal_properties(&self) -> StepResult {
        let inst = self.inst;
        let ctx = inst.ctx();
        let pairs = self.jacobsthal_pairs()?;
        let min_n = pairs
            .par_iter()
            .map(|pair| -> Result<u64, String> {
                for c in inst.corollary_suite(pair).map_err(err)? {
                    ensure(c.passed, || {
                        format!(
                            "{} fails at ({}, {}): {}",
                            c.name,
                            ctx.format_power(&pair.a),
                            ctx.format_power(&pair.b),
                            c.detail
                        )
                    })?;
                }
                Ok(inst.n_count(pair).map_err(err)?.0)
            })
            .collect::<Result<Vec<u64>, String>>()?
            .into_iter()
            .min();
        let mut symmetric = 0;
        for b in self.all_b() {
            let (sum, expected, _) = inst.jacobsthal_n_total(&b).map_err(err)?;
            ensure(sum == expected, || {
                format!("sum of N at b = {} is {sum}, expected {expected}", ctx.format_power(&b))
            })?;
            if let Some(c) = inst.symmetric_point_check(&b).map_err(err)? {
                ensure(c.passed, || format!("{}: {}", c.name, c.detail))?;
                symmetric += 1;
            }
        }
        let min = min_n.map_or("none".to_string(), |m| m.to_string());
        Ok(format!("{} pairs, symmetric point at {symmetric} b, minimum N {min}", pairs.len()))
    }

    fn distribution_identities(&self) -> StepResult {
        let mut parts = Vec::new();
        for b in &self.cfg.sweep_b {
            let rep = self.inst.distribution_sweep(b, false).map_err(err)?.report;
            parts.push(format!("b={}: r={} s={} t={}", rep.b, rep.r, rep.s, rep.t));
        }
        Ok(parts.join("; "))
    }

    fn bent_spectrum(&self) -> StepResult {
        let inst = self.inst;
        let ctx = inst.ctx();
        let spec = FunctionSpec { a: ctx.one(), b: ctx.one() };
        let s = inst.full_spectrum(&spec).map_err(err)?;
        ensure(inst.is_bent(&s), || "not bent".into())?;
        ensure(inst.is_weakly_regular_neg(&s), || "not weakly regular with u = -1".into())?;
        ensure(s.summary == inst.bent_value_counts(), || "value distribution differs".into())?;
        s.coefficients
            .par_iter()
            .map(|(y, _)| inst.theorem1_verify(y).map(|_| ()).map_err(err))
            .collect::<Result<Vec<()>, String>>()?;
        Ok(format!("{} coefficients, unique root for every y", s.coefficients.len()))
    }

    fn sequence_correlation(&self) -> StepResult {
        let base = Instance::new(3, 1).map_err(err)?;
        let pinned = fit_affine(&base.correlation_vs_s0().map_err(err)?).ok_or("no affine fit at p=3, k=1")?;
        let here = self.inst.correlation_vs_s0().map_err(err)?;
        let bad = here.iter().position(|&(c, s0)| s0 != pinned.0 + pinned.1 * c);
        ensure(bad.is_none(), || format!("relation fails at shift {}", bad.unwrap_or(0)))?;
        Ok(format!("S_f(0) = {} + {}*C over {} shifts", pinned.0, pinned.1, here.len()))
    }
}
