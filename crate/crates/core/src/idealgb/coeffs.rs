//! Coefficient contexts for the Gröbner engine.
//!
//! The engine is written against [`Coeffs`], which carries the field as a
//! value. Static fields go through [`StaticField`]; prime fields whose
//! modulus is chosen at run time use [`PrimeField`].

use std::fmt::Debug;
use std::marker::PhantomData;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::exactpoly::{BigRat, Field};

pub trait Coeffs: Clone + Send + Sync {
    type E: Clone + PartialEq + Debug + Send + Sync;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
}

/// Adapter from a static [`Field`].
pub struct StaticField<F>(PhantomData<F>);

impl<F> StaticField<F> {
    pub fn new() -> Self {
        StaticField(PhantomData)
    }
}

impl<F> Default for StaticField<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F> Clone for StaticField<F> {
    fn clone(&self) -> Self {
        StaticField(PhantomData)
    }
}

impl<F: Field> Coeffs for StaticField<F> {
    type E = F;
    fn zero(&self) -> F {
        F::zero()
    }
    fn one(&self) -> F {
        F::one()
    }
    fn is_zero(&self, a: &F) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &F, b: &F) -> F {
        a.add(b)
    }
    fn sub(&self, a: &F, b: &F) -> F {
        a.sub(b)
    }
    fn mul(&self, a: &F, b: &F) -> F {
        a.mul(b)
    }
    fn neg(&self, a: &F) -> F {
        a.neg()
    }
    fn inv(&self, a: &F) -> F {
        a.inv()
    }
}

/// `Z/pZ` for a prime `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < (1 << 31), "prime out of range");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn from_bigint(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("reduced residue fits")
    }

    /// Reduction of a rational; `None` when the denominator vanishes mod p.
    pub fn from_rat(&self, r: &BigRat) -> Option<u64> {
        let d = self.from_bigint(r.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(&self.from_bigint(r.numer()), &self.inv(&d)))
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        let mut b = a % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        acc
    }
}

impl Coeffs for PrimeField {
    type E = u64;
    #[inline]
    fn zero(&self) -> u64 {
        0
    }
    #[inline]
    fn one(&self) -> u64 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero mod p");
        // extended Euclid on i64
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        s0.rem_euclid(self.p as i64) as u64
    }
}

/// Deterministic sequence of distinct primes just below `2^31`, largest
/// first.
pub fn primes_below_2_31(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n: u64 = (1 << 31) - 1;
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n -= 2;
    }
    out
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Rational number reconstruction of `a mod m` with `|num|, den <=
/// sqrt(m/2)`.
pub fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<BigRat> {
    let bound = num_integer::Roots::sqrt(&(m / BigInt::from(2)));
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::from(1));
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || num_traits::Signed::abs(&t1) > bound {
        return None;
    }
    if r1.gcd(&t1) != BigInt::from(1) {
        return None;
    }
    Some(BigRat::new(r1, t1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(primes_below_2_31(1)[0]);
        for a in [1u64, 2, 12345, f.modulus() - 1] {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
    }

    #[test]
    fn reconstruct_rational() {
        let m = BigInt::from(primes_below_2_31(1)[0]) * BigInt::from(primes_below_2_31(2)[1]);
        let r = BigRat::new(BigInt::from(-355), BigInt::from(113));
        let den_inv = r.denom().modinv(&m).unwrap();
        let a = (r.numer() * den_inv).mod_floor(&m);
        assert_eq!(rational_reconstruction(&a, &m), Some(r));
    }
}
