//! Newton-polygon analysis of `u`-polynomials with truncated series
//! coefficients: roots of positive valuation, counted without multiplicity.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::exactpoly::{BigRat, Field, UPoly};

use super::algnum::{adjoin, take_zero_divisor, AlgNum};
use super::series::TruncTSeries;
use super::SeriesError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PuiseuxStatus {
    Certified,
    Inconclusive,
}

/// Roots sharing a valuation whose leading coefficients are the roots of
/// `leading_minpoly` (squarefree over Q, in the variable `c`).
#[derive(Clone, Debug, PartialEq)]
pub struct RootGroup {
    pub valuation: BigRat,
    pub leading_minpoly: UPoly<BigRat>,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PuiseuxReport {
    pub roots: Vec<RootGroup>,
    pub total_distinct: usize,
    /// Truncation order of the input coefficients.
    pub certified_to: usize,
    pub status: PuiseuxStatus,
    pub reason: Option<String>,
}

impl fmt::Display for PuiseuxReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {} distinct", self.status, self.total_distinct)?;
        for g in &self.roots {
            write!(f, "; val {} lead {} x{}", g.valuation, g.leading_minpoly.to_text("c"), g.count)?;
        }
        if let Some(r) = &self.reason {
            write!(f, " ({r})")?;
        }
        Ok(())
    }
}

/// `sum_r c_r(t) u^r` with `c_r[e]` the coefficient of `t^{e/d}`, known for
/// `e < prec`.
#[derive(Clone, Debug)]
struct SerPoly {
    d: u32,
    prec: usize,
    c: Vec<Vec<AlgNum>>,
}

struct Edge {
    left: usize,
    right: usize,
    /// Slope in units of `1/d`, positive: `(v_left - v_right)/(right - left)`.
    slope: BigRat,
    poly: UPoly<AlgNum>,
}

enum Fail {
    Inconclusive(String),
}

type Step<T> = Result<T, Fail>;

fn inconclusive<T>(msg: impl Into<String>) -> Step<T> {
    Err(Fail::Inconclusive(msg.into()))
}

impl SerPoly {
    fn from_series(p: &[TruncTSeries]) -> Result<Self, SeriesError> {
        let Some(first) = p.first() else {
            return Err(SeriesError::ZeroPolynomial);
        };
        let n = first.order();
        let mut d = 1u32;
        for s in p {
            if s.order() != n {
                return Err(SeriesError::OrderMismatch(n, s.order()));
            }
            d = d.lcm(&s.ramification());
        }
        let mut c = Vec::with_capacity(p.len());
        for s in p {
            c.push(s.ramify(d)?.coeffs().iter().map(AlgNum::from_rat).collect());
        }
        let sp = SerPoly { d, prec: n * d as usize, c };
        if (0..sp.c.len()).all(|r| sp.val(r).is_none()) {
            return Err(SeriesError::ZeroPolynomial);
        }
        Ok(sp)
    }

    fn val(&self, r: usize) -> Option<usize> {
        self.c.get(r)?.iter().position(|x| !x.is_zero())
    }

    /// Positive-slope edges of the lower hull, certified against unknown
    /// coefficients.
    fn edges(&self) -> Step<Vec<Edge>> {
        let vals: Vec<Option<usize>> = (0..self.c.len()).map(|r| self.val(r)).collect();
        if vals[0].is_none() {
            return inconclusive("constant coefficient vanishes to the working precision");
        }
        let vmin = vals.iter().flatten().copied().min().expect("nonzero");
        let r0 = vals.iter().position(|v| *v == Some(vmin)).unwrap();
        if r0 == 0 {
            return Ok(Vec::new());
        }
        // lower hull over known points with r <= r0
        let pts: Vec<(usize, usize)> = (0..=r0).filter_map(|r| vals[r].map(|v| (r, v))).collect();
        let mut hull: Vec<(usize, usize)> = Vec::new();
        for &p in &pts {
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                // drop b when it is on or above segment a-p
                let lhs = (b.1 as i128 - a.1 as i128) * (p.0 as i128 - a.0 as i128);
                let rhs = (p.1 as i128 - a.1 as i128) * (b.0 as i128 - a.0 as i128);
                if lhs >= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        let mut edges = Vec::new();
        for w in hull.windows(2) {
            let ((i, vi), (j, vj)) = (w[0], w[1]);
            let slope = BigRat::new(BigInt::from(vi as i64 - vj as i64), BigInt::from((j - i) as i64));
            let mut coeffs = vec![AlgNum::zero(); j - i + 1];
            for r in i..=j {
                // value of the edge line at r, times (j - i)
                let line = vi as i128 * (j - i) as i128 - (vi as i128 - vj as i128) * (r - i) as i128;
                match vals[r] {
                    Some(v) if v as i128 * (j - i) as i128 == line => coeffs[r - i] = self.c[r][v].clone(),
                    Some(_) => {}
                    None => {
                        if self.prec as i128 * ((j - i) as i128) <= line {
                            return inconclusive("an unknown coefficient may lie on the Newton polygon");
                        }
                    }
                }
            }
            edges.push(Edge {
                left: i,
                right: j,
                slope,
                poly: UPoly::from_coeffs(coeffs),
            });
        }
        Ok(edges)
    }

    /// `p(t^s (theta + u1)) / t^{v}` where the edge starts at `left`.
    fn substitute(&self, edge: &Edge, theta: &AlgNum) -> SerPoly {
        let b = edge.slope.denom().to_usize().expect("small slope");
        let a = edge.slope.numer().to_usize().expect("small slope");
        let d2 = self.d * b as u32;
        let vl = self.val(edge.left).expect("edge endpoint is known");
        let ve = vl * b + a * edge.left;
        let prec2 = self.prec * b - ve;
        // q_r = c_r t^{s r - v}
        let q: Vec<Vec<AlgNum>> = self
            .c
            .iter()
            .enumerate()
            .map(|(r, cr)| {
                let mut out = vec![AlgNum::zero(); prec2];
                for (e, x) in cr.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let pos = (e * b + a * r) as i64 - ve as i64;
                    debug_assert!(pos >= 0, "point below the Newton polygon");
                    if pos >= 0 && (pos as usize) < prec2 {
                        out[pos as usize] = x.clone();
                    }
                }
                out
            })
            .collect();
        let mut deg = q.len();
        while deg > 0 && q[deg - 1].iter().all(Field::is_zero) {
            deg -= 1;
        }
        // Taylor shift by theta: c1_m = sum_{r >= m} binom(r, m) theta^{r-m} q_r
        let mut c1: Vec<Vec<AlgNum>> = q[..deg].to_vec();
        for i in 0..deg {
            for j in (i..deg.saturating_sub(1)).rev() {
                let (lo, hi) = c1.split_at_mut(j + 1);
                for (x, y) in lo[j].iter_mut().zip(&hi[0]) {
                    if !y.is_zero() {
                        *x = x.add(&y.mul(theta));
                    }
                }
            }
        }
        if c1.is_empty() {
            c1.push(vec![AlgNum::zero(); prec2]);
        }
        SerPoly { d: d2, prec: prec2, c: c1 }
    }
}

/// Rational roots of a polynomial with rational coefficients and nonzero
/// constant term. Gives up (returns what it found) when the integers are too
/// large to enumerate divisors.
pub(crate) fn rational_roots(p: &UPoly<BigRat>) -> Vec<BigRat> {
    let Some(deg) = p.degree() else { return Vec::new() };
    if deg == 0 {
        return Vec::new();
    }
    let den = p.coeffs().iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * BigRat::from_integer(den.clone())).to_integer()).collect();
    if ints[0].sign() == num_bigint::Sign::NoSign {
        let mut out = vec![BigRat::zero()];
        out.extend(rational_roots(&UPoly::from_coeffs(p.coeffs()[1..].to_vec())));
        out.sort();
        out.dedup();
        return out;
    }
    let (Some(a0), Some(an)) = (ints[0].abs().to_u64(), ints[deg].abs().to_u64()) else {
        return Vec::new();
    };
    if a0 > 1_000_000_000_000 || an > 1_000_000_000_000 {
        return Vec::new();
    }
    let divisors = |n: u64| -> Vec<u64> {
        let mut v = Vec::new();
        let mut i = 1u64;
        while i * i <= n {
            if n % i == 0 {
                v.push(i);
                if i * i != n {
                    v.push(n / i);
                }
            }
            i += 1;
        }
        v
    };
    let mut out = Vec::new();
    for num in divisors(a0) {
        for den in divisors(an) {
            for sign in [1i64, -1] {
                let cand = BigRat::new(BigInt::from(num) * sign, BigInt::from(den));
                if p.eval(&cand).is_zero() && !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
    }
    out.sort();
    out
}

fn to_rational_poly(p: &UPoly<AlgNum>) -> Option<UPoly<BigRat>> {
    let c: Option<Vec<BigRat>> = p.coeffs().iter().map(|x| x.as_rat().cloned()).collect();
    c.map(UPoly::from_coeffs)
}

/// A root of `g` over the current field: either in the field already or a
/// new generator. The second value is the number of conjugates it stands for.
fn roots_to_follow(g: &UPoly<AlgNum>) -> Vec<(AlgNum, usize, UPoly<BigRat>)> {
    let mut out = Vec::new();
    let mut rest = g.clone();
    if let Some(rp) = to_rational_poly(g) {
        for r in rational_roots(&rp) {
            let lin = UPoly::from_coeffs(vec![AlgNum::Rat(-r.clone()), AlgNum::one()]);
            rest = rest.divrem(&lin).0;
            out.push((AlgNum::Rat(r.clone()), 1, UPoly::from_coeffs(vec![-r, BigRat::one()])));
        }
    }
    match rest.degree() {
        None | Some(0) => {}
        Some(1) => {
            let root = rest.coeff(0).neg().div(&rest.coeff(1));
            let label = to_rational_poly(&rest.monic()).unwrap_or_else(|| UPoly::zero());
            out.push((root, 1, label));
        }
        Some(k) => {
            let (_, gen) = adjoin(&rest);
            let label = to_rational_poly(&rest.monic()).unwrap_or_else(|| UPoly::zero());
            out.push((gen, k, label));
        }
    }
    out
}

/// Distinct roots of positive valuation, grouped at this level.
fn analyze(p: &SerPoly, depth: usize, max_depth: usize) -> Step<Vec<RootGroup>> {
    let mut groups = Vec::new();
    for edge in p.edges()? {
        let valuation = &edge.slope / BigRat::from_integer(BigInt::from(p.d));
        let sqf = edge.poly.squarefree_decomposition();
        if take_zero_divisor() {
            return inconclusive("zero divisor in the coefficient field");
        }
        let mut seen = 0usize;
        for (mult, g) in sqf {
            seen += mult * g.degree().unwrap_or(0);
            for (theta, conj, label) in roots_to_follow(&g) {
                if take_zero_divisor() {
                    return inconclusive("zero divisor in the coefficient field");
                }
                let count = if mult == 1 {
                    conj
                } else {
                    if depth >= max_depth {
                        return inconclusive(format!("repeated leading coefficients beyond depth {max_depth}"));
                    }
                    let sub = p.substitute(&edge, &theta);
                    let inner: usize = analyze(&sub, depth + 1, max_depth)?.iter().map(|g| g.count).sum();
                    if inner == 0 || inner > mult {
                        return inconclusive("truncation too short to separate a repeated root");
                    }
                    inner * conj
                };
                groups.push(RootGroup {
                    valuation: valuation.clone(),
                    leading_minpoly: label,
                    count,
                });
            }
        }
        debug_assert_eq!(seen, edge.right - edge.left);
    }
    Ok(groups)
}

/// Newton-polygon/Puiseux analysis of `sum_r p[r](t) u^r` for roots with
/// positive valuation. Counts are of distinct roots; repeated leading
/// coefficients are separated by recursion over algebraic extensions up to
/// `max_depth` levels. A truncation that cannot decide the answer gives an
/// `Inconclusive` report, never a wrong count.
pub fn puiseux_roots(p: &[TruncTSeries], max_depth: usize) -> Result<PuiseuxReport, SeriesError> {
    let sp = SerPoly::from_series(p)?;
    take_zero_divisor();
    let certified_to = p[0].order();
    Ok(match analyze(&sp, 0, max_depth) {
        Ok(roots) => PuiseuxReport {
            total_distinct: roots.iter().map(|g| g.count).sum(),
            roots,
            certified_to,
            status: PuiseuxStatus::Certified,
            reason: None,
        },
        Err(Fail::Inconclusive(msg)) => PuiseuxReport {
            roots: Vec::new(),
            total_distinct: 0,
            certified_to,
            status: PuiseuxStatus::Inconclusive,
            reason: Some(msg),
        },
    })
}

/// A Puiseux series `sum c_i t^{e_i}` with rational exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PSeries {
    pub terms: Vec<(BigRat, BigRat)>,
}

impl PSeries {
    /// Terms with exponent below `n`, as a series with the common ramification.
    pub fn to_trunc(&self, n: usize) -> TruncTSeries {
        let d = self.terms.iter().fold(BigInt::from(1), |acc, (e, _)| acc.lcm(e.denom()));
        let d = d.to_u32().expect("small ramification");
        let mut s = TruncTSeries::zero(n, d);
        let mut coeffs = s.coeffs().to_vec();
        for (e, c) in &self.terms {
            let pos = (e * BigRat::from_integer(BigInt::from(d))).to_integer();
            if let Some(p) = pos.to_usize().filter(|&p| p < coeffs.len()) {
                coeffs[p] = c.clone();
            }
        }
        s = TruncTSeries::new(n, d, coeffs).expect("length");
        s
    }
}

impl fmt::Display for PSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("({c})*t^({e})")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Follows every root of positive valuation whose Puiseux coefficients are
/// rational until a term of exponent at least `target` is known. Branches
/// that need an algebraic coefficient or cannot be separated are skipped;
/// the second value counts them.
pub fn rational_branches(p: &[TruncTSeries], target: &BigRat, max_levels: usize) -> Result<(Vec<PSeries>, usize), SeriesError> {
    let sp = SerPoly::from_series(p)?;
    let mut done = Vec::new();
    let mut skipped = 0;
    follow(&sp, BigRat::zero(), Vec::new(), target, max_levels, &mut done, &mut skipped);
    Ok((done, skipped))
}

fn follow(
    p: &SerPoly,
    base: BigRat,
    terms: Vec<(BigRat, BigRat)>,
    target: &BigRat,
    levels_left: usize,
    done: &mut Vec<PSeries>,
    skipped: &mut usize,
) {
    if terms.last().is_some_and(|(e, _)| e >= target) {
        done.push(PSeries { terms });
        return;
    }
    if levels_left == 0 {
        *skipped += 1;
        return;
    }
    let Ok(edges) = p.edges() else {
        *skipped += 1;
        return;
    };
    for edge in &edges {
        let step = &edge.slope / BigRat::from_integer(BigInt::from(p.d));
        let e = &base + &step;
        let Some(rp) = to_rational_poly(&edge.poly) else {
            *skipped += edge.right - edge.left;
            continue;
        };
        for r in rational_roots(&rp) {
            let sub = p.substitute(edge, &AlgNum::Rat(r.clone()));
            let mut t = terms.clone();
            t.push((e.clone(), r));
            follow(&sub, e.clone(), t, target, levels_left - 1, done, skipped);
        }
        let rational: usize = rp
            .squarefree_decomposition()
            .iter()
            .map(|(m, g)| m * rational_roots(g).len())
            .sum();
        *skipped += (edge.right - edge.left) - rational;
    }
}
