//! Guessing annihilating polynomials of truncated series, and certificates
//! for the guesses.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::catser::{eval_at_series, Binding, SeriesError, TruncTSeries};
use crate::exactpoly::{exact_div, primitive_integer, pseudo_divide, BigRat, MPoly, Monomial, PolyError, VarTable};

/// Extra matched coefficients beyond the number of unknowns.
pub const DEFAULT_GUARD: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GuessError {
    #[error("series known to order {have}, the ansatz needs {needed}")]
    InsufficientTruncation { needed: usize, have: usize },
    #[error("ramified series (t^(1/{0})) cannot be guessed")]
    Ramified(u32),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("candidate has degree 0 in `{0}`")]
    ConstantInZ(String),
    #[error("polynomial must involve only t and one other variable, found {0}")]
    BadVariables(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GuessCandidate {
    /// Primitive integer polynomial in `t` and the series variable.
    pub poly: MPoly<BigRat>,
    pub dz: usize,
    pub dt: usize,
    pub verified_order: usize,
}

/// Annihilator of `s` with `deg_z <= dz` and `deg_t <= dt`, lexicographically
/// smallest in `(deg_z, deg_t)`, found from all coefficients of `s`.
pub fn guess_minpoly(
    s: &TruncTSeries,
    z_name: &str,
    dz: usize,
    dt: usize,
    guard: usize,
) -> Result<Option<GuessCandidate>, GuessError> {
    check_input(s, dz, dt, guard)?;
    let powers = series_powers(s, dz)?;
    for z in 1..=dz {
        for t in 0..=dt {
            if let Some(c) = guess_box(s, &powers, z_name, z, t)? {
                return Ok(Some(c));
            }
        }
    }
    Ok(None)
}

/// Sweeps boxes by `dz + dt` ascending (then `dz` ascending) up to the caps
/// and returns the first candidate. Boxes too large for the truncation end
/// the sweep.
pub fn guess_sweep(
    s: &TruncTSeries,
    z_name: &str,
    max_dz: usize,
    max_dt: usize,
    guard: usize,
) -> Result<Option<GuessCandidate>, GuessError> {
    check_input(s, 1, 0, guard)?;
    let powers = series_powers(s, max_dz)?;
    for total in 1..=max_dz + max_dt {
        for z in 1..=max_dz.min(total) {
            let t = total - z;
            if t > max_dt {
                continue;
            }
            if (z + 1) * (t + 1) + guard > s.order() {
                continue;
            }
            if let Some(c) = guess_box(s, &powers, z_name, z, t)? {
                return Ok(Some(c));
            }
        }
    }
    Ok(None)
}

fn check_input(s: &TruncTSeries, dz: usize, dt: usize, guard: usize) -> Result<(), GuessError> {
    if s.ramification() != 1 {
        return Err(GuessError::Ramified(s.ramification()));
    }
    let needed = (dz + 1) * (dt + 1) + guard;
    if s.order() < needed {
        return Err(GuessError::InsufficientTruncation { needed, have: s.order() });
    }
    Ok(())
}

fn series_powers(s: &TruncTSeries, dz: usize) -> Result<Vec<Vec<BigRat>>, GuessError> {
    let mut out = vec![TruncTSeries::constant(s.order(), 1, BigRat::one())];
    for i in 1..=dz {
        let next = out[i - 1].mul(s)?;
        out.push(next);
    }
    Ok(out.into_iter().map(|p| p.coeffs().to_vec()).collect())
}

/// One ansatz box. Columns are `(i, j)` for `z^i t^j`.
fn guess_box(
    s: &TruncTSeries,
    powers: &[Vec<BigRat>],
    z_name: &str,
    dz: usize,
    dt: usize,
) -> Result<Option<GuessCandidate>, GuessError> {
    let n = s.order();
    let cols: Vec<(usize, usize)> = (0..=dz).flat_map(|i| (0..=dt).map(move |j| (i, j))).collect();
    let mut rows = Vec::with_capacity(n);
    for r in 0..n {
        let row: Vec<BigRat> = cols
            .iter()
            .map(|&(i, j)| if r >= j { powers[i][r - j].clone() } else { BigRat::zero() })
            .collect();
        rows.push(integer_row(&row));
    }
    let kernel = nullspace(rows, cols.len());
    let Some(v) = kernel.into_iter().next() else {
        return Ok(None);
    };
    let vars = VarTable::new(&["t", z_name])?;
    let terms = cols.iter().zip(v).map(|(&(i, j), c)| (Monomial::from_exps(&[j as u16, i as u16]), c));
    let poly = primitive_integer(&MPoly::from_terms(&vars, terms));
    // a nullspace vector of a smaller box would have been found first, so
    // the degrees here are exact
    if poly.degree_in(1) as usize != dz {
        return Ok(None);
    }
    Ok(Some(GuessCandidate {
        poly,
        dz,
        dt,
        verified_order: n,
    }))
}

fn integer_row(row: &[BigRat]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    row.iter().map(|c| c.numer() * (&l / c.denom())).collect()
}

fn remove_content(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in row.iter_mut() {
            *c = &*c / &g;
        }
    }
}

/// Kernel basis of an integer matrix, by fraction-free elimination followed
/// by back substitution over the rationals.
pub(crate) fn nullspace(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> Vec<Vec<BigRat>> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let best = (rank..rows.len())
            .filter(|&r| !rows[r][col].is_zero())
            .min_by_key(|&r| rows[r][col].abs());
        let Some(p) = best else { continue };
        rows.swap(rank, p);
        let (top, rest) = rows.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in rest.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let (a, b) = (prow[col].clone(), row[col].clone());
            for j in col..ncols {
                row[j] = &row[j] * &a - &prow[j] * &b;
            }
            remove_content(row);
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![BigRat::zero(); ncols];
        v[f] = BigRat::one();
        for (r, &pc) in pivots.iter().enumerate().rev() {
            let mut acc = BigRat::zero();
            for j in pc + 1..ncols {
                if !v[j].is_zero() && !rows[r][j].is_zero() {
                    acc += BigRat::from_integer(rows[r][j].clone()) * &v[j];
                }
            }
            v[pc] = -acc / BigRat::from_integer(rows[r][pc].clone());
        }
        out.push(v);
    }
    out
}

/// The variable of `p` other than `t`.
fn series_var(p: &MPoly<BigRat>) -> Result<String, GuessError> {
    let used: Vec<usize> = p.used_vars().into_iter().filter(|&v| p.vars().name(v) != "t").collect();
    match used.as_slice() {
        [] => Ok(p.vars().names().iter().find(|n| n.as_str() != "t").cloned().unwrap_or_default()),
        [v] => Ok(p.vars().name(*v).to_string()),
        _ => Err(GuessError::BadVariables(
            used.iter().map(|&v| p.vars().name(v)).collect::<Vec<_>>().join(", "),
        )),
    }
}

/// True iff `p(s, t) = 0 mod t^order`.
pub fn verify_annihilation(p: &MPoly<BigRat>, s: &TruncTSeries, order: usize) -> Result<bool, GuessError> {
    if p.is_zero() {
        return Err(GuessError::ZeroPolynomial);
    }
    let order = order.min(s.order());
    let name = series_var(p)?;
    let mut bind = HashMap::new();
    bind.insert(name, Binding::T(s.truncate(order)));
    let v = eval_at_series(p, &bind, order)?;
    Ok(v.is_zero())
}

/// True iff `candidate` divides `eliminant` in `Q[t, z]`: zero
/// pseudo-remainder in `z`, then exact division.
pub fn certify_divides(candidate: &MPoly<BigRat>, eliminant: &MPoly<BigRat>) -> Result<bool, GuessError> {
    if candidate.is_zero() || eliminant.is_zero() {
        return Err(GuessError::ZeroPolynomial);
    }
    let name = series_var(candidate)?;
    let target: Arc<VarTable> = eliminant.vars().clone();
    let c = candidate.embed(&target)?;
    let z = target.require(&name)?;
    if c.degree_in(z) == 0 {
        return Err(GuessError::ConstantInZ(name));
    }
    let (_, rem, _) = pseudo_divide(eliminant, &c, z)?;
    if !rem.is_zero() {
        return Ok(false);
    }
    Ok(exact_div(eliminant, &c).is_some())
}

/// Canonical form: primitive over the integers with a positive leading
/// coefficient.
pub fn normalize_candidate(p: &MPoly<BigRat>) -> MPoly<BigRat> {
    primitive_integer(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{parse_poly, rat_int};

    fn geometric(n: usize) -> TruncTSeries {
        TruncTSeries::from_slice(n, &vec![rat_int(1); n])
    }

    #[test]
    fn rational_series() {
        let c = guess_minpoly(&geometric(20), "z", 2, 2, DEFAULT_GUARD).unwrap().unwrap();
        let expect = parse_poly("t*z - z + 1", c.poly.vars()).unwrap();
        assert_eq!(c.poly, expect);
        assert_eq!((c.dz, c.dt), (1, 1));
        assert!(verify_annihilation(&c.poly, &geometric(20), 20).unwrap());
    }

    #[test]
    fn too_short() {
        assert!(matches!(
            guess_minpoly(&geometric(10), "z", 2, 2, DEFAULT_GUARD),
            Err(GuessError::InsufficientTruncation { needed: 17, have: 10 })
        ));
    }

    #[test]
    fn nullspace_of_rank_one() {
        let rows = vec![vec![BigInt::from(2), BigInt::from(4)], vec![BigInt::from(1), BigInt::from(2)]];
        let k = nullspace(rows, 2);
        assert_eq!(k, vec![vec![rat_int(-2), rat_int(1)]]);
    }

    #[test]
    fn normalization_is_idempotent() {
        let vars = VarTable::new(&["t", "z"]).unwrap();
        let p = parse_poly("-6*t*z^2 + 4*z - 2/3", &vars).unwrap();
        let once = normalize_candidate(&p);
        assert_eq!(normalize_candidate(&once), once);
    }
}
