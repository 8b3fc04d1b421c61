//! Dense polynomials over `Z/p`, constant term first.

use super::Coeffs;
use crate::numth;

/// Reduces `v` modulo `p` and the monic `modulus`, returning exactly
/// `deg(modulus)` coefficients.
pub(crate) fn reduce(v: &[u32], modulus: &[u32], p: u32) -> Coeffs {
    let m = modulus.len() - 1;
    let p64 = p as u64;
    let mut w: Vec<u64> = v.iter().map(|&c| c as u64 % p64).collect();
    if w.len() < m {
        w.resize(m, 0);
    }
    for i in (m..w.len()).rev() {
        let t = w[i] % p64;
        if t == 0 {
            continue;
        }
        for j in 0..m {
            let slot = &mut w[i - m + j];
            *slot = (*slot + (p64 - t) * modulus[j] as u64) % p64;
        }
        w[i] = 0;
    }
    w.truncate(m);
    w.into_iter().map(|c| (c % p64) as u32).collect()
}

pub(crate) fn mul_mod(x: &[u32], y: &[u32], modulus: &[u32], p: u32) -> Coeffs {
    let m = modulus.len() - 1;
    let p64 = p as u64;
    let mut prod = vec![0u64; 2 * m - 1];
    for (i, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate() {
            prod[i + j] = (prod[i + j] + a as u64 * b as u64) % p64;
        }
    }
    for i in (m..prod.len()).rev() {
        let t = prod[i];
        if t == 0 {
            continue;
        }
        let neg = p64 - t;
        for j in 0..m {
            let slot = &mut prod[i - m + j];
            *slot = (*slot + neg * modulus[j] as u64) % p64;
        }
    }
    prod[..m].iter().map(|&c| c as u32).collect()
}

fn pow_x_mod(e: u64, modulus: &[u32], p: u32) -> Coeffs {
    let m = modulus.len() - 1;
    let mut base = reduce(&[0, 1], modulus, p);
    let mut acc = reduce(&[1], modulus, p);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &base, modulus, p);
        }
        base = mul_mod(&base, &base, modulus, p);
        e >>= 1;
    }
    debug_assert_eq!(acc.len(), m);
    acc
}

/// The order test for `X` in `Z/p[X]/(f)`: `X^{q} = 1` and `X^{q/r} ≠ 1` for
/// every prime `r | q`, where `q = p^m - 1`. Passing it forces the unit group
/// to have `p^m - 1` elements, so `f` is irreducible as well.
pub(crate) fn is_primitive(modulus: &[u32], p: u32, order: u64, primes: &[u64]) -> bool {
    if modulus[0] == 0 {
        return false;
    }
    let one = reduce(&[1], modulus, p);
    if pow_x_mod(order, modulus, p) != one {
        return false;
    }
    primes.iter().all(|&r| pow_x_mod(order / r, modulus, p) != one)
}

/// First monic primitive polynomial of degree `m` in ascending base-`p`
/// encoding order (constant term least significant).
pub(crate) fn first_primitive(p: u32, m: usize, order: u64) -> Vec<u32> {
    let primes = numth::prime_divisors(order);
    let count = order + 1;
    for enc in 0..count {
        let mut f = Vec::with_capacity(m + 1);
        let mut v = enc;
        for _ in 0..m {
            f.push((v % p as u64) as u32);
            v /= p as u64;
        }
        f.push(1);
        if is_primitive(&f, p, order, &primes) {
            return f;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}
