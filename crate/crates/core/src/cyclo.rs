//! Exact arithmetic in the ring of integers `Z[ω]`, `ω = e^{2πi/p}`.
//!
//! Values are stored in the power basis `1, ω, …, ω^{p-2}`; the relation
//! `ω^{p-1} = -(1 + ω + … + ω^{p-2})` is applied eagerly, so two values are
//! equal exactly when their coefficient vectors are equal.

use std::fmt;
use std::hash::Hash;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{PrimInt, Signed};

use crate::error::{Error, Result};

/// Integer scalars usable as coefficients of [`Cyclo`].
pub trait CycScalar:
    PrimInt + Signed + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl CycScalar for i32 {}
impl CycScalar for i64 {}
impl CycScalar for i128 {}

/// An element of `Z[ω]` in canonical reduced form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Cyclo<T> {
    p: u32,
    c: Vec<T>,
}

fn cast<T: CycScalar>(v: i64) -> T {
    T::from(v).expect("coefficient does not fit the scalar type")
}

impl<T: CycScalar> Cyclo<T> {
    pub fn zero(p: u32) -> Self {
        assert!(p >= 3 && p % 2 == 1, "ω needs an odd prime p");
        Self { p, c: vec![T::zero(); p as usize - 1] }
    }

    pub fn from_int(p: u32, n: T) -> Self {
        let mut z = Self::zero(p);
        z.c[0] = n;
        z
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, T::one())
    }

    /// `ω^j`, with `j` taken mod `p`.
    pub fn omega_pow(p: u32, j: u64) -> Self {
        let mut dense = vec![T::zero(); p as usize];
        dense[(j % p as u64) as usize] = T::one();
        Self::from_dense(p, dense)
    }

    /// Decodes a canonical coefficient vector (length `p - 1`).
    pub fn from_coeffs(p: u32, c: Vec<T>) -> Result<Self> {
        if c.len() != p as usize - 1 {
            return Err(Error::IndexOutOfRange { index: c.len(), bound: p as usize });
        }
        Ok(Self { p, c })
    }

    /// Reduces `Σ_{j<p} v[j]·ω^j` to canonical form.
    pub fn from_dense(p: u32, v: Vec<T>) -> Self {
        debug_assert_eq!(v.len(), p as usize);
        let top = v[p as usize - 1];
        let c = v[..p as usize - 1].iter().map(|&x| x - top).collect();
        Self { p, c }
    }

    /// `Σ_j counts[j]·ω^j` where `counts` has length `p`; the usual way a
    /// character sum is assembled from a histogram of exponents.
    pub fn from_residue_counts(p: u32, counts: &[u64]) -> Self {
        assert_eq!(counts.len(), p as usize);
        let v = counts
            .iter()
            .map(|&n| cast::<T>(i64::try_from(n).expect("count overflows i64")))
            .collect();
        Self::from_dense(p, v)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_rational_integer(&self) -> bool {
        self.c[1..].iter().all(|x| x.is_zero())
    }

    pub fn as_integer(&self) -> Option<T> {
        self.is_rational_integer().then_some(self.c[0])
    }

    /// Like [`Cyclo::as_integer`], but an error when the value is irrational.
    pub fn expect_integer(&self) -> Result<T> {
        self.as_integer()
            .ok_or_else(|| Error::NotRationalInteger(self.to_string()))
    }

    fn dense(&self) -> Vec<T> {
        let mut v = self.c.clone();
        v.push(T::zero());
        v
    }

    pub fn scale(&self, s: T) -> Self {
        Self { p: self.p, c: self.c.iter().map(|&x| x * s).collect() }
    }

    /// `ω^j · self`.
    pub fn omega_shift(&self, j: u64) -> Self {
        let p = self.p as usize;
        let j = (j % p as u64) as usize;
        let src = self.dense();
        let mut v = vec![T::zero(); p];
        for (i, x) in src.into_iter().enumerate() {
            v[(i + j) % p] = x;
        }
        Self::from_dense(self.p, v)
    }

    /// Complex conjugation, `ω ↦ ω^{-1}`.
    pub fn conj(&self) -> Self {
        let p = self.p as usize;
        let src = self.dense();
        let mut v = vec![T::zero(); p];
        for (i, x) in src.into_iter().enumerate() {
            v[(p - i) % p] = x;
        }
        Self::from_dense(self.p, v)
    }

    /// `self · conj(self)`, i.e. `|z|²` as an element of `Z[ω]`.
    pub fn norm_squared(&self) -> Self {
        self * &self.conj()
    }

    /// `|z|²` as an integer. It always is one, so an error here means the
    /// arithmetic is broken.
    pub fn norm_squared_int(&self) -> Result<T> {
        self.norm_squared().expect_integer()
    }

    fn check_same_ring(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing Z[ω] for different p");
    }
}

impl<T: CycScalar> Add for &Cyclo<T> {
    type Output = Cyclo<T>;
    fn add(self, rhs: &Cyclo<T>) -> Cyclo<T> {
        self.check_same_ring(rhs);
        let c = self.c.iter().zip(&rhs.c).map(|(&x, &y)| x + y).collect();
        Cyclo { p: self.p, c }
    }
}

impl<T: CycScalar> Add for Cyclo<T> {
    type Output = Cyclo<T>;
    fn add(self, rhs: Cyclo<T>) -> Cyclo<T> {
        &self + &rhs
    }
}

impl<T: CycScalar> AddAssign<&Cyclo<T>> for Cyclo<T> {
    fn add_assign(&mut self, rhs: &Cyclo<T>) {
        self.check_same_ring(rhs);
        for (x, &y) in self.c.iter_mut().zip(&rhs.c) {
            *x = *x + y;
        }
    }
}

impl<T: CycScalar> Sub for &Cyclo<T> {
    type Output = Cyclo<T>;
    fn sub(self, rhs: &Cyclo<T>) -> Cyclo<T> {
        self.check_same_ring(rhs);
        let c = self.c.iter().zip(&rhs.c).map(|(&x, &y)| x - y).collect();
        Cyclo { p: self.p, c }
    }
}

impl<T: CycScalar> Sub for Cyclo<T> {
    type Output = Cyclo<T>;
    fn sub(self, rhs: Cyclo<T>) -> Cyclo<T> {
        &self - &rhs
    }
}

impl<T: CycScalar> Neg for &Cyclo<T> {
    type Output = Cyclo<T>;
    fn neg(self) -> Cyclo<T> {
        Cyclo { p: self.p, c: self.c.iter().map(|&x| -x).collect() }
    }
}

impl<T: CycScalar> Neg for Cyclo<T> {
    type Output = Cyclo<T>;
    fn neg(self) -> Cyclo<T> {
        -&self
    }
}

impl<T: CycScalar> Mul for &Cyclo<T> {
    type Output = Cyclo<T>;
    fn mul(self, rhs: &Cyclo<T>) -> Cyclo<T> {
        self.check_same_ring(rhs);
        let p = self.p as usize;
        let mut v = vec![T::zero(); p];
        for (i, &x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in rhs.c.iter().enumerate() {
                let slot = &mut v[(i + j) % p];
                *slot = *slot + x * y;
            }
        }
        Cyclo::from_dense(self.p, v)
    }
}

impl<T: CycScalar> Mul for Cyclo<T> {
    type Output = Cyclo<T>;
    fn mul(self, rhs: Cyclo<T>) -> Cyclo<T> {
        &self * &rhs
    }
}

impl<'a, T: CycScalar> Sum<&'a Cyclo<T>> for Option<Cyclo<T>> {
    fn sum<I: Iterator<Item = &'a Cyclo<T>>>(iter: I) -> Self {
        let mut acc: Option<Cyclo<T>> = None;
        for z in iter {
            match acc.as_mut() {
                Some(a) => *a += z,
                None => acc = Some(z.clone()),
            }
        }
        acc
    }
}

impl<T: CycScalar> fmt::Display for Cyclo<T> {
    /// Canonical rendering, e.g. `9 + 9*w` or `-25*w^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, &x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let mag = x.abs();
            if first {
                if x.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if x.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match j {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}*w")?,
                _ => write!(f, "{mag}*w^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
