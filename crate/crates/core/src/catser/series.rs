//! Truncated series in `t` with polynomial-in-`u` or constant coefficients.

use std::fmt;

use num_integer::Integer;
use num_traits::Signed;

use crate::exactpoly::{rat_to_text, BigRat, Field, UPoly};

use super::SeriesError;

/// `sum_{j < N} c_j(u) t^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncBiSeries {
    coeffs: Vec<UPoly<BigRat>>,
}

impl TruncBiSeries {
    pub fn zero(n: usize) -> Self {
        TruncBiSeries {
            coeffs: vec![UPoly::zero(); n],
        }
    }

    pub fn constant(n: usize, c: UPoly<BigRat>) -> Self {
        let mut s = Self::zero(n);
        if n > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// Pads or truncates `coeffs` to length `n`.
    pub fn from_coeffs(n: usize, mut coeffs: Vec<UPoly<BigRat>>) -> Self {
        coeffs.resize(n, UPoly::zero());
        TruncBiSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[UPoly<BigRat>] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &UPoly<BigRat> {
        &self.coeffs[j]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(UPoly::is_zero)
    }

    pub fn truncate(&self, n: usize) -> Self {
        Self::from_coeffs(n, self.coeffs.iter().take(n).cloned().collect())
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        Ok(TruncBiSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        Ok(TruncBiSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let n = self.order();
        let mut out = vec![UPoly::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Ok(TruncBiSeries { coeffs: out })
    }

    pub fn mul_upoly(&self, p: &UPoly<BigRat>) -> Self {
        TruncBiSeries {
            coeffs: self.coeffs.iter().map(|c| c.mul(p)).collect(),
        }
    }

    /// Multiplies by `t^k`.
    pub fn shift_t(&self, k: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![UPoly::zero(); n];
        for j in k..n {
            coeffs[j] = self.coeffs[j - k].clone();
        }
        TruncBiSeries { coeffs }
    }

    /// `d^j/du^j` evaluated at `u = a`.
    pub fn specialize(&self, a: &BigRat, j: usize) -> TruncTSeries {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let mut d = c.clone();
                for _ in 0..j {
                    d = d.derivative();
                }
                d.eval(a)
            })
            .collect();
        TruncTSeries::new(self.order(), 1, coeffs).expect("length matches")
    }

    /// Coefficients of `u^r` after `u -> u + a`, as series in `t`.
    pub fn u_coefficients(&self, a: &BigRat) -> Vec<TruncTSeries> {
        let n = self.order();
        let shifted: Vec<UPoly<BigRat>> = self.coeffs.iter().map(|c| c.taylor_shift(a)).collect();
        let deg = shifted.iter().filter_map(UPoly::degree).max().unwrap_or(0);
        (0..=deg)
            .map(|r| TruncTSeries::new(n, 1, shifted.iter().map(|c| c.coeff(r)).collect()).expect("length"))
            .collect()
    }

    /// `sum_j t^j c_j(U(t))` for a series `U` of the same order.
    pub fn compose_u(&self, u: &TruncTSeries) -> Result<TruncTSeries, SeriesError> {
        if u.order() != self.order() {
            return Err(SeriesError::OrderMismatch(self.order(), u.order()));
        }
        let d = u.ramification();
        let mut acc = TruncTSeries::zero(self.order(), d);
        let t = TruncTSeries::t_power(self.order(), d, d as usize);
        for c in self.coeffs.iter().rev() {
            let mut h = TruncTSeries::zero(self.order(), d);
            for k in (0..c.coeffs().len()).rev() {
                h = h.mul(u)?.add_constant(&c.coeff(k));
            }
            acc = acc.mul(&t)?.add(&h)?;
        }
        Ok(acc)
    }
}

fn poly_text(p: &UPoly<BigRat>) -> (String, bool) {
    let text = p.to_text("u");
    let atomic = p.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
    (text, atomic)
}

impl fmt::Display for TruncBiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let (text, atomic) = poly_text(c);
            match j {
                0 => f.write_str(&text)?,
                _ => {
                    if text == "1" {
                    } else if atomic && !text.starts_with('-') {
                        write!(f, "{text}*")?;
                    } else {
                        write!(f, "({text})*")?;
                    }
                    if j == 1 {
                        f.write_str("t")?;
                    } else {
                        write!(f, "t^{j}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.order())
    }
}

/// `sum_{e < N d} c_e t^{e/d}`: a series in `t` known modulo `t^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncTSeries {
    n: usize,
    d: u32,
    coeffs: Vec<BigRat>,
}

impl TruncTSeries {
    pub fn new(n: usize, d: u32, coeffs: Vec<BigRat>) -> Result<Self, SeriesError> {
        if d == 0 {
            return Err(SeriesError::Ramification("ramification must be at least 1".into()));
        }
        if coeffs.len() != n * d as usize {
            return Err(SeriesError::Ramification(format!(
                "expected {} coefficients, got {}",
                n * d as usize,
                coeffs.len()
            )));
        }
        Ok(TruncTSeries { n, d, coeffs })
    }

    /// Integer-exponent series from its first coefficients, padded or cut to `n`.
    pub fn from_slice(n: usize, c: &[BigRat]) -> Self {
        let mut coeffs: Vec<BigRat> = c.iter().take(n).cloned().collect();
        coeffs.resize(n, BigRat::zero());
        TruncTSeries { n, d: 1, coeffs }
    }

    pub fn zero(n: usize, d: u32) -> Self {
        TruncTSeries {
            n,
            d,
            coeffs: vec![BigRat::zero(); n * d as usize],
        }
    }

    pub fn constant(n: usize, d: u32, c: BigRat) -> Self {
        let mut s = Self::zero(n, d);
        if n > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// `t^{e/d}`.
    pub fn t_power(n: usize, d: u32, e: usize) -> Self {
        let mut s = Self::zero(n, d);
        if e < s.coeffs.len() {
            s.coeffs[e] = BigRat::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn ramification(&self) -> u32 {
        self.d
    }

    /// Coefficient of `t^{e/d}`.
    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Field::is_zero)
    }

    /// Valuation in units of `1/d`; `None` when zero to the known order.
    pub fn valuation_units(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn valuation(&self) -> Option<BigRat> {
        self.valuation_units()
            .map(|e| BigRat::new((e as i64).into(), (self.d as i64).into()))
    }

    /// Same series with ramification `d2`, a multiple of the current one.
    pub fn ramify(&self, d2: u32) -> Result<Self, SeriesError> {
        if d2 % self.d != 0 {
            return Err(SeriesError::Ramification(format!("{} does not divide {}", self.d, d2)));
        }
        let f = (d2 / self.d) as usize;
        let mut out = Self::zero(self.n, d2);
        for (e, c) in self.coeffs.iter().enumerate() {
            out.coeffs[e * f] = c.clone();
        }
        Ok(out)
    }

    pub fn truncate(&self, n: usize) -> Self {
        let mut coeffs: Vec<BigRat> = self.coeffs.iter().take(n * self.d as usize).cloned().collect();
        coeffs.resize(n * self.d as usize, BigRat::zero());
        TruncTSeries { n, d: self.d, coeffs }
    }

    fn align(&self, other: &Self) -> Result<(Self, Self), SeriesError> {
        if self.n != other.n {
            return Err(SeriesError::OrderMismatch(self.n, other.n));
        }
        if self.d == other.d {
            return Ok((self.clone(), other.clone()));
        }
        let d = self.d.lcm(&other.d);
        Ok((self.ramify(d)?, other.ramify(d)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        let (a, b) = self.align(other)?;
        Ok(TruncTSeries {
            n: a.n,
            d: a.d,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        let (a, b) = self.align(other)?;
        Ok(TruncTSeries {
            n: a.n,
            d: a.d,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        let (a, b) = self.align(other)?;
        let len = a.coeffs.len();
        let mut out = vec![BigRat::zero(); len];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().take(len - i).enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        Ok(TruncTSeries {
            n: a.n,
            d: a.d,
            coeffs: out,
        })
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        TruncTSeries {
            n: self.n,
            d: self.d,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add_constant(&self, c: &BigRat) -> Self {
        let mut s = self.clone();
        if !s.coeffs.is_empty() {
            s.coeffs[0] += c;
        }
        s
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRat::one())
    }

    /// As a bivariate series with constant coefficients; needs `d = 1`.
    pub fn to_bi(&self) -> Result<TruncBiSeries, SeriesError> {
        if self.d != 1 {
            return Err(SeriesError::Ramification("a ramified series has no bivariate form".into()));
        }
        Ok(TruncBiSeries::from_coeffs(
            self.n,
            self.coeffs.iter().map(|c| UPoly::constant(c.clone())).collect(),
        ))
    }
}

impl fmt::Display for TruncTSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = rat_to_text(&c.abs());
            let mag = if mag.contains('/') { format!("({mag})") } else { mag };
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            first = false;
            let exp = BigRat::new((e as i64).into(), (self.d as i64).into());
            let pow = if exp.is_zero() {
                String::new()
            } else if exp.is_one() {
                "t".to_string()
            } else if exp.is_integer() {
                format!("t^{exp}")
            } else {
                format!("t^({exp})")
            };
            match (pow.is_empty(), mag == "1") {
                (true, _) => f.write_str(&mag)?,
                (false, true) => f.write_str(&pow)?,
                (false, false) => write!(f, "{mag}*{pow}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{rat, rat_int};

    fn up(c: &[i64]) -> UPoly<BigRat> {
        UPoly::from_coeffs(c.iter().map(|&x| rat_int(x)).collect())
    }

    #[test]
    fn specialize_small() {
        // 1 + t u^2
        let s = TruncBiSeries::from_coeffs(3, vec![up(&[1]), up(&[0, 0, 1])]);
        assert_eq!(s.specialize(&rat_int(0), 0), TruncTSeries::from_slice(3, &[rat_int(1)]));
        assert_eq!(s.specialize(&rat_int(0), 2), TruncTSeries::from_slice(3, &[rat_int(0), rat_int(2)]));
    }

    #[test]
    fn ramified_product() {
        // (1 + t^{1/2})^2 = 1 + 2 t^{1/2} + t
        let a = TruncTSeries::new(2, 2, vec![rat_int(1), rat_int(1), rat_int(0), rat_int(0)]).unwrap();
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.coeffs(), &[rat_int(1), rat_int(2), rat_int(1), rat_int(0)]);
        assert_eq!(sq.to_string(), "1 + 2*t^(1/2) + t + O(t^2)");
        let b = TruncTSeries::from_slice(2, &[rat(1, 2), rat_int(-1)]);
        assert_eq!(a.add(&b).unwrap().ramification(), 2);
    }

    #[test]
    fn compose_with_root() {
        // c_0(u) = u^2, U = 1 + t  ->  1 + 2t + t^2
        let s = TruncBiSeries::from_coeffs(3, vec![up(&[0, 0, 1])]);
        let u = TruncTSeries::from_slice(3, &[rat_int(1), rat_int(1)]);
        assert_eq!(s.compose_u(&u).unwrap().coeffs(), &[rat_int(1), rat_int(2), rat_int(1)]);
    }

    #[test]
    fn display() {
        let s = TruncBiSeries::from_coeffs(3, vec![up(&[1]), up(&[1, 0, 1]), up(&[0, -2])]);
        assert_eq!(s.to_string(), "1 + (u^2 + 1)*t + (-2*u)*t^2 + O(t^3)");
    }
}
