//! Rational functions in `t` over the rationals, the base field `Q(t)`.

use std::fmt;



use super::field::{BigRat, Field};
use super::upoly::UPoly;

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFuncT {
    num: UPoly<BigRat>,
    den: UPoly<BigRat>,
}

impl RatFuncT {
    /// Builds a reduced fraction. Panics if `den` is zero.
    pub fn new(num: UPoly<BigRat>, den: UPoly<BigRat>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.divrem(&g).0, den.divrem(&g).0)
        };
        let lc = d.lc();
        if !lc.is_one() {
            let li = lc.inv();
            n = n.scale(&li);
            d = d.scale(&li);
        }
        RatFuncT { num: n, den: d }
    }

    pub fn from_poly(num: UPoly<BigRat>) -> Self {
        RatFuncT {
            num,
            den: UPoly::one(),
        }
    }

    /// The element `t`.
    pub fn t() -> Self {
        Self::from_poly(UPoly::x())
    }

    pub fn num(&self) -> &UPoly<BigRat> {
        &self.num
    }

    pub fn den(&self) -> &UPoly<BigRat> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// The rational value when this is a constant.
    pub fn as_constant(&self) -> Option<BigRat> {
        (self.is_polynomial() && self.num.degree().unwrap_or(0) == 0).then(|| self.num.coeff(0))
    }

    /// Evaluates at `t = x`; `None` when the denominator vanishes there.
    pub fn eval(&self, x: &BigRat) -> Option<BigRat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    pub fn to_text(&self) -> String {
        let n = self.num.to_text("t");
        if self.is_polynomial() {
            n
        } else {
            format!("({})/({})", n, self.den.to_text("t"))
        }
    }
}

impl Field for RatFuncT {
    fn zero() -> Self {
        RatFuncT {
            num: UPoly::zero(),
            den: UPoly::one(),
        }
    }
    fn one() -> Self {
        RatFuncT {
            num: UPoly::one(),
            den: UPoly::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::new(self.num.add(&other.num), self.den.clone());
        }
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_polynomial() && other.is_polynomial() {
            let n = self.num.mul(&other.num);
            return RatFuncT {
                num: n,
                den: UPoly::one(),
            };
        }
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }
    fn neg(&self) -> Self {
        RatFuncT {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::new(self.den.clone(), self.num.clone())
    }
    fn from_rat(r: &BigRat) -> Self {
        Self::from_poly(UPoly::constant(r.clone()))
    }
    fn text_parts(&self) -> (bool, String) {
        if let Some(c) = self.as_constant() {
            return c.text_parts();
        }
        if self.is_polynomial() && self.num.coeffs().iter().filter(|c| !c.is_zero()).count() == 1 {
            let (neg, _) = self.num.lc().text_parts();
            let s = if neg { self.neg() } else { self.clone() };
            return (neg, s.num.to_text("t"));
        }
        (false, format!("({})", self.to_text()))
    }
}

impl fmt::Debug for RatFuncT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::field::rat_int;

    fn up(c: &[i64]) -> UPoly<BigRat> {
        UPoly::from_coeffs(c.iter().map(|&v| rat_int(v)).collect())
    }

    #[test]
    fn reduced_and_monic() {
        // (t^2 - 1) / (2t - 2) = (t + 1)/2
        let r = RatFuncT::new(up(&[-1, 0, 1]), up(&[-2, 2]));
        assert!(r.is_polynomial());
        assert_eq!(r.num(), &up(&[1, 1]).scale(&crate::exactpoly::field::rat(1, 2)));
    }

    #[test]
    fn field_ops() {
        let a = RatFuncT::new(up(&[1]), up(&[0, 1]));
        let b = RatFuncT::new(up(&[1]), up(&[1, 1]));
        // 1/t - 1/(t+1) = 1/(t^2+t)
        let d = a.sub(&b);
        assert_eq!(d, RatFuncT::new(up(&[1]), up(&[0, 1, 1])));
        assert!(d.mul(&d.inv()).is_one());
    }
}
