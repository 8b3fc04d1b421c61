mod output;
mod verify;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use charsum::cyclotomy::{pt_closed_form, Cyclotomy};
use charsum::expsum::{CoeffPair, ExpSumLine};
use charsum::jacobsthal::Jacobsthal;
use charsum::sequences::{cross_correlation, fit_affine};
use charsum::walsh::FunctionSpec;
use charsum::{CycInt, Elem, Error, FieldCtx, Instance};

use output::{Emitter, Format};
use verify::{Suite, VerifyConfig};

#[derive(Parser, Debug)]
#[command(name = "charsum", version, about = "Exact character sums for Tr(a x^d + b x^2) over GF(p^4k)")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Odd prime characteristic.
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,

    /// The field is GF(p^(4k)).
    #[arg(long, global = true, default_value_t = 1)]
    k: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "CHARSUM_THREADS", default_value_t = 0)]
    threads: usize,

    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 20_100_101)]
    seed: u64,

    /// Largest p^(4k) accepted without --allow-large.
    #[arg(long, global = true, default_value_t = 100_000_000)]
    guard: u64,

    #[arg(long, global = true)]
    allow_large: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cyclotomic numbers of order p^k+1 over GF(p^2k).
    CyclotomyTable,
    /// Sums of ω^Tr over each cyclotomic class.
    PtSums,
    /// H and I sums for every a in GF(p^2k) outside GF(p^k).
    JacobsthalScan {
        /// Run inside a separately built GF(p^2k) instead of the big field.
        #[arg(long)]
        standalone: bool,
    },
    /// S_f(0), N(a,b) and the case of one coefficient pair.
    Expsum {
        /// Element as g^e or c0,c1,...
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Every a for a fixed b.
    ExpsumSweep {
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Skip the brute-force check of each S_f(0).
        #[arg(long)]
        no_oracle: bool,
    },
    /// The full Walsh spectrum of Tr(a x^d + b x^2).
    WalshSpectrum {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Root x0 and coefficient for a = b = 1, at one y or all of them.
    Theorem1Verify {
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
    },
    /// Correlation of the m-sequence decimated by d and by 2, against S_f(0).
    SequencesCrosscorr {
        /// Print the m-sequence as one line of symbols instead.
        #[arg(long)]
        dump: bool,
    },
    /// Run every check in order.
    VerifyAll {
        /// Coefficients b for the full sweeps (repeatable).
        #[arg(long = "b", allow_hyphen_values = true, default_values_t = ["g^0".to_string(), "g^1".to_string()])]
        sweep_b: Vec<String>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CyclotomyTable => "cyclotomy-table",
            Command::PtSums => "pt-sums",
            Command::JacobsthalScan { .. } => "jacobsthal-scan",
            Command::Expsum { .. } => "expsum",
            Command::ExpsumSweep { .. } => "expsum-sweep",
            Command::WalshSpectrum { .. } => "walsh-spectrum",
            Command::Theorem1Verify { .. } => "theorem1-verify",
            Command::SequencesCrosscorr { .. } => "sequences-crosscorr",
            Command::VerifyAll { .. } => "verify-all",
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invalid arguments: {0}")]
    Args(String),
    #[error("p^(4k) = {size} exceeds the guard {guard}; pass --allow-large to override")]
    Guard { size: String, guard: u64 },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Args(_) => 2,
            CliError::Guard { .. } => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonPrimeP(_)
            | Error::EvenCharacteristic
            | Error::ZeroK
            | Error::BadExponentGcd(_)
            | Error::Parse { .. }
            | Error::BothCoefficientsZero
            | Error::ZeroB
            | Error::ZeroC
            | Error::ZeroArgument
            | Error::WrongCase(_)
            | Error::IndexOutOfRange { .. } => CliError::Args(e.to_string()),
            Error::FieldTooLarge { p, m } => CliError::Guard { size: format!("{p}^{m}"), guard: 0 },
            _ => CliError::Verification(e.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn check_guard(cli: &Cli) -> CliResult {
    if cli.allow_large {
        return Ok(());
    }
    let size = u32::try_from(4 * cli.k)
        .ok()
        .and_then(|e| cli.p.checked_pow(e))
        .filter(|&s| s <= cli.guard);
    match size {
        Some(_) => Ok(()),
        None => Err(CliError::Guard { size: format!("{}^{}", cli.p, 4 * cli.k), guard: cli.guard }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Emitter::new(cli.format, io::BufWriter::new(io::stdout()));
    let result = run(&cli, &mut out);
    let flushed = out.flush();
    match result.and(flushed.map_err(CliError::from)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("charsum: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run<W: Write + Send>(cli: &Cli, out: &mut Emitter<W>) -> CliResult {
    if cli.p < 3 || cli.p % 2 == 0 || cli.k == 0 {
        return Err(CliError::Args("p must be an odd prime and k >= 1".into()));
    }
    check_guard(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Args(e.to_string()))?;
    pool.install(|| {
        let inst = Instance::new(cli.p, cli.k)?;
        out.header(cli.command.name(), cli.p, cli.k, cli.seed)?;
        match &cli.command {
            Command::CyclotomyTable => cyclotomy_table(&inst, out),
            Command::PtSums => pt_sums(&inst, out),
            Command::JacobsthalScan { standalone } => jacobsthal_scan(&inst, *standalone, out),
            Command::Expsum { a, b } => expsum(&inst, a, b, out),
            Command::ExpsumSweep { b, no_oracle } => expsum_sweep(&inst, b, !no_oracle, out),
            Command::WalshSpectrum { a, b } => walsh_spectrum(&inst, a, b, out),
            Command::Theorem1Verify { y } => theorem1(&inst, y.as_deref(), out),
            Command::SequencesCrosscorr { dump } => sequences(&inst, *dump, out),
            Command::VerifyAll { sweep_b, samples } => verify_all(&inst, cli.seed, sweep_b, *samples, out),
        }
    })
}

fn parse(inst: &Instance, s: &str) -> CliResult<Elem> {
    Ok(inst.ctx().parse_elem(s)?)
}

fn coeff_columns(p: u32) -> String {
    (0..p - 1).map(|j| format!("c{j}")).collect::<Vec<_>>().join(",")
}

fn coeff_csv(c: &CycInt) -> String {
    c.coeffs().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn cyclotomy_table<W: Write>(inst: &Instance, out: &mut Emitter<W>) -> CliResult {
    let cyc = Cyclotomy::new(inst.gf_2k())?;
    let table = cyc.full_table();
    let bad = cyc.verify_lemma1();
    #[derive(Serialize)]
    struct Row<'a> {
        order: usize,
        table: &'a [Vec<u64>],
        mismatches: usize,
    }
    match out.format {
        Format::Json => out.json(&Row { order: table.order, table: &table.table, mismatches: bad.len() })?,
        Format::Csv => out.raw(&table.to_csv())?,
        Format::Text => {
            out.text(&format!("cyclotomic numbers (i, j), order {}", table.order))?;
            for row in &table.table {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:>4}")).collect();
                out.text(&cells.join(""))?;
            }
            out.text(&format!("closed form: {} mismatches", bad.len()))?;
        }
    }
    match bad.first() {
        Some(m) => Err(CliError::Verification(format!(
            "cyclotomic number ({}, {}) is {}, closed form {}",
            m.i, m.j, m.got, m.expected
        ))),
        None => Ok(()),
    }
}

fn pt_sums<W: Write>(inst: &Instance, out: &mut Emitter<W>) -> CliResult {
    let cyc = Cyclotomy::new(inst.gf_2k())?;
    let q1 = inst.params().q1();
    #[derive(Serialize)]
    struct Line {
        t: usize,
        value: Vec<i64>,
        expected: i64,
    }
    out.csv(&format!("t,{},expected", coeff_columns(inst.p())))?;
    for (t, v) in cyc.pt_sums().iter().enumerate() {
        let expected = pt_closed_form(q1, t);
        let line = Line { t, value: v.coeffs().to_vec(), expected };
        out.record(&line, &format!("{t},{},{expected}", coeff_csv(v)), &format!("P_{t} = {v}  (expected {expected})"))?;
    }
    match cyc.verify_pt().first() {
        Some(m) => Err(CliError::Verification(format!("P_{} is {}, closed form {}", m.i, m.got, m.expected))),
        None => Ok(()),
    }
}

fn jacobsthal_scan<W: Write>(inst: &Instance, standalone: bool, out: &mut Emitter<W>) -> CliResult {
    let small;
    let ctx: &FieldCtx = if standalone {
        small = FieldCtx::build(*inst.params(), 2 * inst.params().k)?;
        &small
    } else {
        inst.ctx()
    };
    let jac = Jacobsthal::new(ctx)?;
    let rep = jac.theorem2_scan()?;
    out.csv("a,H,I,I2,curve_n,bound_ratio")?;
    for r in &rep.records {
        let l = jac.line(r);
        let curve = l.curve_n.map_or(String::new(), |n| n.to_string());
        out.record(
            &l,
            &format!("{},{},{},{},{curve},{:.6}", l.a, l.h, l.i, l.i2, l.bound_ratio),
            &format!("a={:<8} H={:<6} I={:<6} I2={:<6} N={curve:<6} ratio={:.6}", l.a, l.h, l.i, l.i2, l.bound_ratio),
        )?;
    }
    #[derive(Serialize)]
    struct Summary {
        count: usize,
        max_ratio: f64,
        argmax: String,
        attained: bool,
    }
    let s = Summary {
        count: rep.records.len(),
        max_ratio: rep.max_ratio,
        argmax: ctx.format_power(&rep.argmax),
        attained: rep.attained,
    };
    out.record(
        &s,
        &format!("# count={} max_ratio={:.6} argmax={} attained={}", s.count, s.max_ratio, s.argmax, s.attained),
        &format!("{} elements, max ratio {:.6} at {}, equality attained: {}", s.count, s.max_ratio, s.argmax, s.attained),
    )?;
    Ok(())
}

fn expsum_csv_line(l: &ExpSumLine) -> String {
    format!("{},{},{},{},{},{}", l.a, l.b, l.tag.as_str(), l.n, l.s0, l.witnesses.join(";"))
}

fn expsum_text_line(l: &ExpSumLine) -> String {
    format!("a={:<8} b={:<8} {:<13} N={:<3} S0={}", l.a, l.b, l.tag.as_str(), l.n, l.s0)
}

fn expsum<W: Write>(inst: &Instance, a: &str, b: &str, out: &mut Emitter<W>) -> CliResult {
    let pair = CoeffPair::new(parse(inst, a)?, parse(inst, b)?)?;
    let rec = inst.record(&pair, true)?;
    let class = inst.classify(&pair)?;
    #[derive(Serialize)]
    struct Line {
        #[serde(flatten)]
        line: ExpSumLine,
        norms_equal: bool,
    }
    let line = inst.line(&rec);
    out.csv("a,b,tag,N,S0,witnesses")?;
    let (csv, text) = (expsum_csv_line(&line), expsum_text_line(&line));
    out.record(&Line { line, norms_equal: class.norms_equal }, &csv, &text)?;
    Ok(())
}

fn expsum_sweep<W: Write>(inst: &Instance, b: &str, oracle: bool, out: &mut Emitter<W>) -> CliResult {
    let b = parse(inst, b)?;
    let sweep = inst.distribution_sweep(&b, oracle)?;
    out.csv("a,b,tag,N,S0,witnesses")?;
    for r in &sweep.records {
        let l = inst.line(r);
        out.record(&l, &expsum_csv_line(&l), &expsum_text_line(&l))?;
    }
    let rep = &sweep.report;
    out.record(
        rep,
        &format!("# r={} s={} t={} residuals={},{},{}", rep.r, rep.s, rep.t, rep.residual_count, rep.residual_weighted, rep.residual_sum),
        &format!(
            "r={} s={} t={} jacobsthal N histogram {:?}; residuals {} {} {}",
            rep.r, rep.s, rep.t, rep.jac_histogram, rep.residual_count, rep.residual_weighted, rep.residual_sum
        ),
    )?;
    Ok(())
}

fn walsh_spectrum<W: Write>(inst: &Instance, a: &str, b: &str, out: &mut Emitter<W>) -> CliResult {
    let spec = FunctionSpec { a: parse(inst, a)?, b: parse(inst, b)? };
    let s = inst.full_spectrum(&spec)?;
    out.csv(&format!("y,{},norm2", coeff_columns(inst.p())))?;
    for (y, c) in &s.coefficients {
        let l = inst.spectrum_line(y, c);
        out.record(&l, &format!("{},{},{}", l.y, coeff_csv(c), l.norm2), &format!("S({}) = {c}", l.y))?;
    }
    #[derive(Serialize)]
    struct Summary {
        summary: std::collections::BTreeMap<String, u64>,
        bent: bool,
        weakly_regular_neg: bool,
        parseval: bool,
    }
    let summary = s.summary.iter().map(|(v, n)| (v.to_string(), *n)).collect();
    let sm = Summary { summary, bent: inst.is_bent(&s), weakly_regular_neg: inst.is_weakly_regular_neg(&s), parseval: true };
    let counts: Vec<String> = s.summary.iter().map(|(v, n)| format!("{v}: {n}")).collect();
    out.record(
        &sm,
        &format!("# bent={} weakly_regular_neg={}", sm.bent, sm.weakly_regular_neg),
        &format!("values {{{}}}; bent {}, weakly regular (u=-1) {}", counts.join(", "), sm.bent, sm.weakly_regular_neg),
    )?;
    Ok(())
}

fn theorem1<W: Write>(inst: &Instance, y: Option<&str>, out: &mut Emitter<W>) -> CliResult {
    let ctx = inst.ctx();
    let ys: Vec<Elem> = match y {
        Some(s) => vec![parse(inst, s)?],
        None => std::iter::once(ctx.zero()).chain((0..ctx.order()).map(|e| ctx.xi_pow(e))).collect(),
    };
    #[derive(Serialize)]
    struct Line {
        y: String,
        x0: String,
        coeff: Vec<i64>,
        special_case: Option<bool>,
    }
    out.csv(&format!("y,x0,{}", coeff_columns(inst.p())))?;
    use rayon::prelude::*;
    let reports = ys.par_iter().map(|y| inst.theorem1_verify(y)).collect::<Vec<_>>();
    for r in reports {
        let r = r?;
        let l = Line {
            y: ctx.format_power(&r.y),
            x0: ctx.format_power(&r.x0),
            coeff: r.coeff.coeffs().to_vec(),
            special_case: r.special_case,
        };
        out.record(&l, &format!("{},{},{}", l.y, l.x0, coeff_csv(&r.coeff)), &format!("y={:<8} x0={:<8} S={}", l.y, l.x0, r.coeff))?;
    }
    Ok(())
}

fn sequences<W: Write>(inst: &Instance, dump: bool, out: &mut Emitter<W>) -> CliResult {
    if dump {
        let s = inst.m_sequence();
        #[derive(Serialize)]
        struct Dump<'a> {
            origin: &'a str,
            symbols: &'a [u8],
        }
        out.record(&Dump { origin: &s.origin, symbols: &s.symbols }, &s.to_csv_line(), &s.to_csv_line())?;
        return Ok(());
    }
    let (u, v) = inst.decimated_pair()?;
    let data = inst.correlation_vs_s0()?;
    #[derive(Serialize)]
    struct Line {
        tau: usize,
        a: String,
        #[serde(rename = "C")]
        c: Vec<i64>,
        #[serde(rename = "S0")]
        s0: i64,
    }
    out.csv(&format!("tau,a,{},S0", coeff_columns(inst.p())))?;
    for (tau, &(_, s0)) in data.iter().enumerate() {
        let c = cross_correlation(&u, &v, tau)?;
        let a = inst.ctx().format_power(&inst.shift_pair(tau).a);
        let text = format!("tau={tau:<5} a={a:<8} C={c:<8} S0={s0}");
        let csv = format!("{tau},{a},{},{s0}", coeff_csv(&c));
        out.record(&Line { tau, a, c: c.coeffs().to_vec(), s0 }, &csv, &text)?;
    }
    let base = Instance::new(3, 1)?;
    let pinned = fit_affine(&base.correlation_vs_s0()?);
    let here = fit_affine(&data);
    #[derive(Serialize)]
    struct Relation {
        pinned: Option<(i64, i64)>,
        fitted: Option<(i64, i64)>,
        holds: bool,
    }
    let holds = pinned.is_some() && pinned == here;
    let r = Relation { pinned, fitted: here, holds };
    out.record(
        &r,
        &format!("# pinned={pinned:?} fitted={here:?}"),
        &format!("S0 = alpha + beta*C: pinned at p=3,k=1 {pinned:?}, here {here:?}"),
    )?;
    if !holds {
        return Err(CliError::Verification("correlation relation differs from the pinned one".into()));
    }
    Ok(())
}

fn verify_all<W: Write>(inst: &Instance, seed: u64, sweep_b: &[String], samples: usize, out: &mut Emitter<W>) -> CliResult {
    let sweep_b = sweep_b.iter().map(|s| parse(inst, s)).collect::<CliResult<Vec<_>>>()?;
    if sweep_b.iter().any(Elem::is_zero) {
        return Err(CliError::Args("sweep coefficients b must be nonzero".into()));
    }
    let cfg = VerifyConfig { sweep_b, seed, scaling_samples: samples, zero_set_samples: 20 };
    let mut suite = Suite::new(inst, &cfg);
    let steps = suite.run(|s| {
        let mark = if s.passed { "ok  " } else { "FAIL" };
        out.record(s, &format!("{},{},\"{}\"", s.step, s.passed, s.detail.replace('"', "'")), &format!("{mark} {:<24} {}", s.step, s.detail))
    })?;
    match steps.iter().find(|s| !s.passed) {
        Some(s) => Err(CliError::Verification(format!("{}: {}", s.step, s.detail))),
        None => Ok(()),
    }
}
