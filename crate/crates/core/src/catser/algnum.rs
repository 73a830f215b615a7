//! Elements of towers `Q[r1]/(g1)[r2]/(g2)...` with exact arithmetic.
//!
//! The defining polynomials are only known to be squarefree, so a level may
//! be a product of fields. Inverting a zero divisor sets a thread-local flag
//! (see [`take_zero_divisor`]) instead of panicking; callers that build
//! towers check it and give up on the computation.

use std::cell::Cell;
use std::fmt;
use std::sync::Arc;

use crate::exactpoly::{rat_to_text, BigRat, Field, UPoly};

thread_local! {
    static ZERO_DIVISOR: Cell<bool> = const { Cell::new(false) };
}

/// Returns and clears the zero-divisor flag of this thread.
pub fn take_zero_divisor() -> bool {
    ZERO_DIVISOR.with(|f| f.replace(false))
}

#[derive(Debug)]
pub struct Level {
    /// Monic, coefficients lowest first, of degree at least 2.
    minpoly: Vec<AlgNum>,
    depth: usize,
}

impl Level {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }
}

#[derive(Clone)]
pub enum AlgNum {
    Rat(BigRat),
    /// `sum c_i r^i` over the level's generator `r`. Canonical: some `c_i`
    /// with `i >= 1` is nonzero and the length is below the degree.
    Ext(Arc<Level>, Vec<AlgNum>),
}

/// Adjoins a root of `g` (monic after normalization, degree >= 2) on top of
/// the levels its coefficients live in.
pub fn adjoin(g: &UPoly<AlgNum>) -> (Arc<Level>, AlgNum) {
    let g = g.monic();
    let depth = g.coeffs().iter().map(AlgNum::depth).max().unwrap_or(0) + 1;
    assert!(g.degree().unwrap_or(0) >= 2, "adjoin needs degree >= 2");
    let level = Arc::new(Level {
        minpoly: g.coeffs().to_vec(),
        depth,
    });
    let gen = AlgNum::Ext(level.clone(), vec![AlgNum::Rat(BigRat::zero()), AlgNum::Rat(BigRat::one())]);
    (level, gen)
}

impl AlgNum {
    pub fn depth(&self) -> usize {
        match self {
            AlgNum::Rat(_) => 0,
            AlgNum::Ext(l, _) => l.depth,
        }
    }

    pub fn as_rat(&self) -> Option<&BigRat> {
        match self {
            AlgNum::Rat(r) => Some(r),
            AlgNum::Ext(..) => None,
        }
    }

    fn canon(level: &Arc<Level>, mut c: Vec<AlgNum>) -> AlgNum {
        while c.last().is_some_and(Field::is_zero) {
            c.pop();
        }
        match c.len() {
            0 => AlgNum::Rat(BigRat::zero()),
            1 => c.pop().unwrap(),
            _ => AlgNum::Ext(level.clone(), c),
        }
    }

    fn coeff_vec(&self, level: &Arc<Level>) -> Vec<AlgNum> {
        match self {
            AlgNum::Ext(l, c) if Arc::ptr_eq(l, level) => c.clone(),
            other => vec![other.clone()],
        }
    }

    /// The highest level among two operands; `None` for two rationals.
    fn top(a: &AlgNum, b: &AlgNum) -> Option<Arc<Level>> {
        match (a, b) {
            (AlgNum::Ext(l, _), AlgNum::Ext(m, _)) => {
                if l.depth >= m.depth {
                    debug_assert!(l.depth != m.depth || Arc::ptr_eq(l, m), "elements of different towers");
                    Some(l.clone())
                } else {
                    Some(m.clone())
                }
            }
            (AlgNum::Ext(l, _), _) | (_, AlgNum::Ext(l, _)) => Some(l.clone()),
            _ => None,
        }
    }

    fn reduce(level: &Arc<Level>, mut c: Vec<AlgNum>) -> AlgNum {
        let d = level.degree();
        while c.len() > d {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let base = c.len() - d;
            for (j, m) in level.minpoly.iter().take(d).enumerate() {
                c[base + j] = c[base + j].sub(&top.mul(m));
            }
        }
        AlgNum::canon(level, c)
    }

    pub fn try_inv(&self) -> Option<AlgNum> {
        match self {
            AlgNum::Rat(r) => (!r.is_zero()).then(|| AlgNum::Rat(Field::inv(r))),
            AlgNum::Ext(level, c) => {
                // extended Euclid on (c, minpoly) over the level below
                let a = UPoly::from_coeffs(c.clone());
                let m = UPoly::from_coeffs(level.minpoly.clone());
                let before = take_zero_divisor();
                let (g, s, _) = a.ext_gcd(&m);
                let bad = take_zero_divisor();
                if before {
                    ZERO_DIVISOR.with(|f| f.set(true));
                }
                if bad || g.degree() != Some(0) {
                    return None;
                }
                let ginv = g.coeff(0).try_inv()?;
                Some(AlgNum::reduce(level, s.scale(&ginv).into_coeffs()))
            }
        }
    }
}

impl PartialEq for AlgNum {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (AlgNum::Rat(a), AlgNum::Rat(b)) => a == b,
            (AlgNum::Ext(l, a), AlgNum::Ext(m, b)) => Arc::ptr_eq(l, m) && a == b,
            _ => false,
        }
    }
}

impl Eq for AlgNum {}

impl fmt::Debug for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

impl AlgNum {
    fn text(&self) -> String {
        match self {
            AlgNum::Rat(r) => rat_to_text(r),
            AlgNum::Ext(l, c) => {
                let parts: Vec<String> = c
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, x)| match i {
                        0 => x.text(),
                        1 => format!("({})*r{}", x.text(), l.depth),
                        _ => format!("({})*r{}^{}", x.text(), l.depth, i),
                    })
                    .collect();
                parts.join(" + ")
            }
        }
    }
}

impl Field for AlgNum {
    fn zero() -> Self {
        AlgNum::Rat(BigRat::zero())
    }

    fn one() -> Self {
        AlgNum::Rat(BigRat::one())
    }

    fn is_zero(&self) -> bool {
        matches!(self, AlgNum::Rat(r) if r.is_zero())
    }

    fn add(&self, other: &Self) -> Self {
        match AlgNum::top(self, other) {
            None => AlgNum::Rat(self.as_rat().unwrap() + other.as_rat().unwrap()),
            Some(l) => {
                let (mut a, b) = (self.coeff_vec(&l), other.coeff_vec(&l));
                if a.len() < b.len() {
                    a.resize(b.len(), AlgNum::zero());
                }
                for (i, x) in b.iter().enumerate() {
                    a[i] = a[i].add(x);
                }
                AlgNum::canon(&l, a)
            }
        }
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        match AlgNum::top(self, other) {
            None => AlgNum::Rat(self.as_rat().unwrap() * other.as_rat().unwrap()),
            Some(l) => {
                let (a, b) = (self.coeff_vec(&l), other.coeff_vec(&l));
                let mut c = vec![AlgNum::zero(); a.len() + b.len() - 1];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        c[i + j] = c[i + j].add(&x.mul(y));
                    }
                }
                AlgNum::reduce(&l, c)
            }
        }
    }

    fn neg(&self) -> Self {
        match self {
            AlgNum::Rat(r) => AlgNum::Rat(-r.clone()),
            AlgNum::Ext(l, c) => AlgNum::Ext(l.clone(), c.iter().map(Field::neg).collect()),
        }
    }

    fn inv(&self) -> Self {
        match self.try_inv() {
            Some(x) => x,
            None => {
                ZERO_DIVISOR.with(|f| f.set(true));
                AlgNum::zero()
            }
        }
    }

    fn from_rat(r: &BigRat) -> Self {
        AlgNum::Rat(r.clone())
    }

    fn text_parts(&self) -> (bool, String) {
        match self {
            AlgNum::Rat(r) => r.text_parts(),
            ext => (false, format!("({})", ext.text())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat_int;

    fn q(v: i64) -> AlgNum {
        AlgNum::Rat(rat_int(v))
    }

    #[test]
    fn sqrt2_arithmetic() {
        let (_, r) = adjoin(&UPoly::from_coeffs(vec![q(-2), q(0), q(1)]));
        assert_eq!(r.mul(&r), q(2));
        let x = r.add(&q(1));
        let y = x.inv();
        assert_eq!(x.mul(&y), q(1));
        assert!(!take_zero_divisor());
    }

    #[test]
    fn tower_of_two() {
        // r1^2 = 2, r2^2 = r1
        let (_, r1) = adjoin(&UPoly::from_coeffs(vec![q(-2), q(0), q(1)]));
        let (_, r2) = adjoin(&UPoly::from_coeffs(vec![r1.neg(), q(0), q(1)]));
        let four = r2.mul(&r2).mul(&r2).mul(&r2);
        assert_eq!(four, q(2));
        assert_eq!(r2.add(&r1).mul(&r2.add(&r1).inv()), q(1));
    }

    #[test]
    fn zero_divisor_is_flagged() {
        // (r - 1)(r - 2) = 0 in Q[r]/((r-1)(r-2))
        let (_, r) = adjoin(&UPoly::from_coeffs(vec![q(2), q(-3), q(1)]));
        let z = r.sub(&q(1));
        take_zero_divisor();
        assert!(z.try_inv().is_none());
        let _ = Field::inv(&z);
        assert!(take_zero_divisor());
    }
}
