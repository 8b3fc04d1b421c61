//! Arithmetic in `GF(p^m)`, with `GF(p^k)` and `GF(p^{2k})` realized as
//! Frobenius-fixed subfields of one context.

mod dlog;
mod poly;
mod subfield;
mod text;

use serde::Serialize;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::numth::{self, gcd};

pub use subfield::SubfieldView;

/// Log/antilog tables are built when the field has at most this many elements.
pub const LOG_TABLE_LIMIT: u64 = 1 << 20;

/// The parameters of the binomial family: odd prime `p`, `n = 4k` and the
/// exponent `d = p^{3k} + p^{2k} - p^k + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FieldParams {
    pub p: u64,
    pub k: usize,
    pub n: usize,
    pub d: u64,
}

impl FieldParams {
    pub fn new(p: u64, k: usize) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if !numth::is_prime(p) {
            return Err(Error::NonPrimeP(p));
        }
        if k == 0 {
            return Err(Error::ZeroK);
        }
        let n = 4 * k;
        let pn = u32::try_from(n)
            .ok()
            .and_then(|n| p.checked_pow(n))
            .filter(|&q| q < 1 << 62)
            .ok_or(Error::FieldTooLarge { p, m: n })?;
        let pk = p.pow(k as u32);
        let d = pk * pk * pk + pk * pk - pk + 1;
        let g = gcd(d, pn - 1);
        if g != 2 {
            return Err(Error::BadExponentGcd(g));
        }
        Ok(Self { p, k, n, d })
    }

    /// `p^e`.
    pub fn pow_p(&self, e: usize) -> u64 {
        self.p.pow(e as u32)
    }

    /// `p^k`.
    pub fn q1(&self) -> u64 {
        self.pow_p(self.k)
    }

    /// `p^{2k}`.
    pub fn q2(&self) -> u64 {
        self.pow_p(2 * self.k)
    }

    /// `p^n`.
    pub fn qn(&self) -> u64 {
        self.pow_p(self.n)
    }
}

pub(crate) type Coeffs = SmallVec<[u32; 8]>;

/// A field element: coefficients of `1, X, …, X^{m-1}` modulo `p`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Elem {
    coeffs: Coeffs,
}

impl Elem {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Constant coefficient; the value of a prime-subfield element.
    pub fn constant(&self) -> u32 {
        self.coeffs[0]
    }
}

struct LogTables {
    /// `exp[e]` is the encoding of `ξ^e`.
    exp: Vec<u32>,
    /// `log[enc]` is the exponent of the encoded element; `u32::MAX` for zero.
    log: Vec<u32>,
}

/// A concrete `GF(p^m)` with a deterministic primitive modulus.
///
/// Immutable once built; every operation is a pure function of its inputs.
pub struct FieldCtx {
    params: FieldParams,
    m: usize,
    p: u32,
    modulus: Vec<u32>,
    size: u64,
    order: u64,
    xi: Elem,
    tables: Option<LogTables>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .field("tables", &self.tables.is_some())
            .finish()
    }
}

impl FieldCtx {
    /// Builds `GF(p^m)` for `m ∈ {k, 2k, 4k}`. The modulus is the first monic
    /// primitive polynomial of degree `m` in base-`p` encoding order.
    pub fn build(params: FieldParams, m: usize) -> Result<Self> {
        let k = params.k;
        if m != k && m != 2 * k && m != 4 * k {
            return Err(Error::DegreeUnsupported { m, k });
        }
        Self::build_degree(params, m)
    }

    pub(crate) fn build_degree(params: FieldParams, m: usize) -> Result<Self> {
        let p = params.p;
        let size = p
            .checked_pow(m as u32)
            .filter(|&q| q < 1 << 62)
            .ok_or(Error::FieldTooLarge { p, m })?;
        let modulus = poly::first_primitive(p as u32, m, size - 1);
        let p32 = p as u32;
        let xi = Elem { coeffs: poly::reduce(&[0, 1], &modulus, p32) };
        let mut ctx = Self {
            params,
            m,
            p: p32,
            modulus,
            size,
            order: size - 1,
            xi,
            tables: None,
        };
        if size <= LOG_TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    fn build_tables(&self) -> LogTables {
        let mut exp = Vec::with_capacity(self.order as usize);
        let mut log = vec![u32::MAX; self.size as usize];
        let mut x = self.one();
        for e in 0..self.order {
            let enc = self.encode(&x) as usize;
            debug_assert_eq!(log[enc], u32::MAX, "modulus is not primitive");
            log[enc] = e as u32;
            exp.push(enc as u32);
            x = self.mul_schoolbook(&x, &self.xi);
        }
        LogTables { exp, log }
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Extension degree `m`.
    pub fn degree(&self) -> usize {
        self.m
    }

    /// Monic modulus, constant term first (length `m + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Number of field elements `p^m`.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Multiplicative order `p^m - 1`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// The primitive element ξ (class of `X`).
    pub fn xi(&self) -> &Elem {
        &self.xi
    }

    pub fn zero(&self) -> Elem {
        Elem { coeffs: SmallVec::from_elem(0, self.m) }
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        let mut z = self.zero();
        z.coeffs[0] = v.rem_euclid(self.p as i64) as u32;
        z
    }

    /// Builds an element from base-`p` digits (constant term first); missing
    /// high digits are zero.
    pub fn from_coeffs(&self, digits: &[u32]) -> Result<Elem> {
        if digits.len() > self.m {
            return Err(Error::Parse {
                input: format!("{digits:?}"),
                reason: format!("more than {} coefficients", self.m),
            });
        }
        if let Some(&bad) = digits.iter().find(|&&c| c >= self.p) {
            return Err(Error::Parse {
                input: format!("{digits:?}"),
                reason: format!("digit {bad} is not below p = {}", self.p),
            });
        }
        let mut z = self.zero();
        z.coeffs[..digits.len()].copy_from_slice(digits);
        Ok(z)
    }

    /// Base-`p` integer encoding, constant term least significant.
    pub fn encode(&self, x: &Elem) -> u64 {
        x.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    pub fn decode(&self, mut v: u64) -> Elem {
        debug_assert!(v < self.size);
        let mut z = self.zero();
        for c in z.coeffs.iter_mut() {
            *c = (v % self.p as u64) as u32;
            v /= self.p as u64;
        }
        z
    }

    /// All `p^m` elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.size).map(move |v| self.decode(v))
    }

    pub fn add(&self, x: &Elem, y: &Elem) -> Elem {
        let p = self.p;
        let coeffs = x
            .coeffs
            .iter()
            .zip(&y.coeffs)
            .map(|(&a, &b)| {
                let s = a + b;
                if s >= p { s - p } else { s }
            })
            .collect();
        Elem { coeffs }
    }

    pub fn neg(&self, x: &Elem) -> Elem {
        let p = self.p;
        let coeffs = x.coeffs.iter().map(|&a| if a == 0 { 0 } else { p - a }).collect();
        Elem { coeffs }
    }

    pub fn sub(&self, x: &Elem, y: &Elem) -> Elem {
        self.add(x, &self.neg(y))
    }

    /// Multiplies by an integer from the prime field.
    pub fn scale(&self, x: &Elem, s: i64) -> Elem {
        let s = s.rem_euclid(self.p as i64) as u64;
        let p = self.p as u64;
        let coeffs = x.coeffs.iter().map(|&a| ((a as u64 * s) % p) as u32).collect();
        Elem { coeffs }
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        self.mul_schoolbook(x, y)
    }

    fn mul_schoolbook(&self, x: &Elem, y: &Elem) -> Elem {
        let prod = poly::mul_mod(&x.coeffs, &y.coeffs, &self.modulus, self.p);
        Elem { coeffs: prod }
    }

    pub fn square(&self, x: &Elem) -> Elem {
        self.mul(x, x)
    }

    /// `x^e`; for nonzero `x` the exponent is reduced mod `p^m - 1`.
    pub fn pow(&self, x: &Elem, e: u64) -> Elem {
        if x.is_zero() {
            return if e == 0 { self.one() } else { self.zero() };
        }
        let e = e % self.order;
        if let Some(t) = &self.tables {
            let l = t.log[self.encode(x) as usize] as u64;
            return self.decode(t.exp[numth::mul_mod(l, e, self.order) as usize] as u64);
        }
        self.pow_square_multiply(x, e)
    }

    fn pow_square_multiply(&self, x: &Elem, mut e: u64) -> Elem {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_schoolbook(&acc, &base);
            }
            base = self.mul_schoolbook(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `x^{-e}` for nonzero `x`.
    pub fn pow_neg(&self, x: &Elem, e: u64) -> Result<Elem> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(x, self.order - e % self.order))
    }

    pub fn inv(&self, x: &Elem) -> Result<Elem> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(x, self.order - 1))
    }

    pub fn div(&self, x: &Elem, y: &Elem) -> Result<Elem> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    /// `ξ^e`.
    pub fn xi_pow(&self, e: u64) -> Elem {
        let e = e % self.order;
        match &self.tables {
            Some(t) => self.decode(t.exp[e as usize] as u64),
            None => self.pow_square_multiply(&self.xi, e),
        }
    }

    /// Frobenius power `x^{p^i}`.
    pub fn frobenius(&self, x: &Elem, i: usize) -> Elem {
        let i = i % self.m;
        let mut e = 1u64;
        for _ in 0..i {
            e = numth::mul_mod(e, self.p as u64, self.order);
        }
        self.pow(x, e)
    }

    /// Whether `x` lies in the subfield `GF(p^{sub})`, i.e. `x^{p^{sub}} = x`.
    pub fn in_subfield(&self, x: &Elem, sub: usize) -> bool {
        self.frobenius(x, sub) == *x
    }

    /// Relative trace `Tr_{to}^{from}(x) = Σ_{i < from/to} x^{p^{to·i}}` for
    /// `x ∈ GF(p^{from})`.
    pub fn trace(&self, x: &Elem, from: usize, to: usize) -> Result<Elem> {
        if from == 0 || self.m % from != 0 {
            return Err(Error::NotASubfield(from, self.m));
        }
        if to == 0 || from % to != 0 {
            return Err(Error::NotASubfield(to, from));
        }
        if from != self.m && !self.in_subfield(x, from) {
            return Err(Error::NotInSubfield(from));
        }
        let mut acc = self.zero();
        let mut term = x.clone();
        for _ in 0..from / to {
            acc = self.add(&acc, &term);
            term = self.frobenius(&term, to);
        }
        Ok(acc)
    }

    /// Absolute trace `Tr_m(x)` as an integer in `0..p`.
    pub fn abs_trace(&self, x: &Elem) -> u32 {
        self.trace(x, self.m, 1)
            .expect("full field is always a valid trace source")
            .constant()
    }

    /// Discrete logarithm to base ξ: `e` with `ξ^e = x`, `0 ≤ e < p^m - 1`.
    pub fn log(&self, x: &Elem) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroArgument);
        }
        if let Some(t) = &self.tables {
            return Ok(t.log[self.encode(x) as usize] as u64);
        }
        dlog::bsgs(self, &self.xi, x, self.order)
            .ok_or_else(|| Error::NoSolution("discrete log in the full group".into()))
    }

    /// `log`, with `None` for zero.
    pub fn log_or_none(&self, x: &Elem) -> Option<u64> {
        self.log(x).ok()
    }

    /// View of the subfield `GF(p^{degree})`.
    pub fn subfield(&self, degree: usize) -> Result<SubfieldView<'_>> {
        SubfieldView::new(self, degree)
    }

    /// The absolute-trace sequence `s(t) = Tr_m(ξ^t)`, `t = 0..p^m - 2`.
    ///
    /// Entry `t` is the trace of `ξ^t`, so any character sum over `GF(p^m)^*`
    /// whose argument is a monomial in ξ reduces to index arithmetic here.
    pub fn trace_sequence(&self) -> Vec<u8> {
        assert!(self.p < 256, "trace sequence stores symbols as bytes");
        // The trace is linear, so it is the dot product with the vector of
        // basis traces Tr(X^i).
        let basis: Vec<u64> = (0..self.m)
            .map(|i| {
                let mut digits = vec![0u32; self.m];
                digits[i] = 1;
                let e = self.from_coeffs(&digits).expect("basis vector");
                self.abs_trace(&e) as u64
            })
            .collect();
        let p = self.p as u64;
        let mut out = Vec::with_capacity(self.order as usize);
        match &self.tables {
            Some(t) => {
                for &enc in &t.exp {
                    let mut v = enc as u64;
                    let mut acc = 0u64;
                    for b in &basis {
                        acc += (v % p) * b;
                        v /= p;
                    }
                    out.push((acc % p) as u8);
                }
            }
            None => {
                let mut x = self.one();
                for _ in 0..self.order {
                    let acc: u64 = x.coeffs.iter().zip(&basis).map(|(&c, b)| c as u64 * b).sum();
                    out.push((acc % p) as u8);
                    x = self.mul_schoolbook(&x, &self.xi);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf81() -> FieldCtx {
        FieldCtx::build(FieldParams::new(3, 1).unwrap(), 4).unwrap()
    }

    #[test]
    fn params_validation() {
        assert_eq!(FieldParams::new(4, 1), Err(Error::NonPrimeP(4)));
        assert_eq!(FieldParams::new(2, 1), Err(Error::EvenCharacteristic));
        assert_eq!(FieldParams::new(3, 0), Err(Error::ZeroK));
        let fp = FieldParams::new(3, 1).unwrap();
        assert_eq!((fp.n, fp.d), (4, 34));
        assert_eq!(FieldParams::new(5, 1).unwrap().d, 146);
        let fp = FieldParams::new(3, 2).unwrap();
        assert_eq!(fp.d, 729 + 81 - 9 + 1);
        assert_eq!(
            FieldCtx::build(fp, 3).unwrap_err(),
            Error::DegreeUnsupported { m: 3, k: 2 }
        );
    }

    #[test]
    fn prime_field_modulus() {
        let ctx = FieldCtx::build(FieldParams::new(3, 1).unwrap(), 1).unwrap();
        assert_eq!(ctx.modulus(), &[1, 1]);
        assert_eq!(ctx.xi().coeffs(), &[2]);
        let ctx = FieldCtx::build(FieldParams::new(5, 1).unwrap(), 1).unwrap();
        // X + 2 has root 3, the first primitive root mod 5 under this order
        assert_eq!(ctx.modulus(), &[2, 1]);
        assert_eq!(ctx.xi().coeffs(), &[3]);
    }

    /// Independent enumeration: the first monic quartic over Z/3 whose root
    /// has order exactly 80, found by listing root powers directly.
    #[test]
    fn gf81_modulus_is_first_primitive() {
        let ctx = gf81();
        let mut expected = None;
        'outer: for enc in 0..81u32 {
            let f = [enc % 3, enc / 3 % 3, enc / 9 % 3, enc / 27, 1];
            if f[0] == 0 {
                continue;
            }
            // multiply by X repeatedly in Z/3[X]/(f) and look for the first return to 1
            let mut x = [1u32, 0, 0, 0];
            for step in 1..=80 {
                let top = x[3];
                x = [0, x[0], x[1], x[2]];
                for i in 0..4 {
                    x[i] = (x[i] + 3 * 3 - top * f[i]) % 3;
                }
                if x == [1, 0, 0, 0] {
                    if step == 80 {
                        expected = Some(f.to_vec());
                        break 'outer;
                    }
                    continue 'outer;
                }
            }
        }
        assert_eq!(ctx.modulus(), expected.unwrap().as_slice());
    }

    #[test]
    fn primitive_element_order() {
        for (p, k) in [(3, 1), (5, 1), (3, 2)] {
            let fp = FieldParams::new(p, k).unwrap();
            for m in [k, 2 * k, 4 * k] {
                let ctx = FieldCtx::build(fp, m).unwrap();
                assert_eq!(ctx.pow(ctx.xi(), ctx.order()), ctx.one());
                for q in numth::prime_divisors(ctx.order()) {
                    assert_ne!(ctx.pow_square_multiply(ctx.xi(), ctx.order() / q), ctx.one());
                }
            }
        }
    }

    #[test]
    fn arithmetic_axioms() {
        let ctx = gf81();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x = ctx.decode(rng.gen_range(1..81));
            assert_eq!(ctx.mul(&ctx.inv(&x).unwrap(), &x), ctx.one());
        }
        assert_eq!(ctx.inv(&ctx.zero()), Err(Error::DivisionByZero));
        for x in ctx.elements() {
            assert_eq!(ctx.pow(&x, 81), x);
            assert_eq!(ctx.add(&x, &ctx.neg(&x)), ctx.zero());
            if !x.is_zero() {
                assert_eq!(ctx.pow(&x, 17), ctx.pow_square_multiply(&x, 17));
            }
        }
        assert_eq!(ctx.pow(&ctx.zero(), 0), ctx.one());
    }

    #[test]
    fn traces() {
        let ctx = gf81();
        assert_eq!(ctx.abs_trace(&ctx.zero()), 0);
        let mut hits = [0u32; 3];
        for x in ctx.elements() {
            let t = ctx.abs_trace(&x);
            hits[t as usize] += 1;
            assert_eq!(ctx.abs_trace(&ctx.pow(&x, 3)), t);
            // transitivity through GF(3) = GF(p^k), k = 1
            let down = ctx.trace(&x, 4, 1).unwrap();
            assert_eq!(down.constant(), t);
            let rel = ctx.trace(&x, 4, 2).unwrap();
            assert!(ctx.in_subfield(&rel, 2));
            assert_eq!(ctx.trace(&rel, 2, 1).unwrap().constant(), t);
        }
        assert_eq!(hits, [27, 27, 27]);
        assert_eq!(ctx.trace(ctx.xi(), 2, 1), Err(Error::NotInSubfield(2)));
    }

    #[test]
    fn trace_sequence_matches_direct_trace() {
        let ctx = gf81();
        let s = ctx.trace_sequence();
        assert_eq!(s.len(), 80);
        for (t, &v) in s.iter().enumerate() {
            assert_eq!(v as u32, ctx.abs_trace(&ctx.xi_pow(t as u64)));
        }
    }

    #[test]
    fn log_round_trip() {
        let ctx = gf81();
        for e in 0..80 {
            assert_eq!(ctx.log(&ctx.xi_pow(e)).unwrap(), e);
        }
        assert_eq!(ctx.log(&ctx.zero()), Err(Error::ZeroArgument));
    }
}
