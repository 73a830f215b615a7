//! Determinants of polynomial matrices and resultants.

use super::field::Field;
use super::gcd::exact_div;
use super::mpoly::MPoly;
use super::PolyError;

/// Determinant of a square polynomial matrix: cofactor expansion up to 3x3,
/// fraction-free (Bareiss) elimination above.
pub fn pdet<F: Field>(m: &[Vec<MPoly<F>>]) -> Result<MPoly<F>, PolyError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(PolyError::NotSquare);
    }
    if n == 0 {
        return Err(PolyError::EmptyMatrix);
    }
    if n <= 3 {
        return Ok(cofactor_det(m));
    }
    Ok(bareiss_det(m))
}

/// Laplace expansion along the first row.
pub fn cofactor_det<F: Field>(m: &[Vec<MPoly<F>>]) -> MPoly<F> {
    let n = m.len();
    match n {
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let vars = m[0][0].vars().clone();
            let mut acc = MPoly::zero(&vars);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<MPoly<F>>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * &cofactor_det(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

fn bareiss_det<F: Field>(m: &[Vec<MPoly<F>>]) -> MPoly<F> {
    let n = m.len();
    let vars = m[0][0].vars().clone();
    let mut a: Vec<Vec<MPoly<F>>> = m.to_vec();
    let mut negate = false;
    let mut prev = MPoly::one(&vars);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return MPoly::zero(&vars);
            };
            a.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = exact_div(&num, &prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Sylvester matrix of `p` and `q` with respect to `var`, rows of `p`
/// first, coefficients in descending powers.
pub fn sylvester_matrix<F: Field>(p: &MPoly<F>, q: &MPoly<F>, var: usize) -> Vec<Vec<MPoly<F>>> {
    let vars = p.vars().clone();
    let m = p.degree_in(var) as usize;
    let n = q.degree_in(var) as usize;
    let size = m + n;
    let pc = p.coeffs_in(var);
    let qc = q.coeffs_in(var);
    let mut rows = Vec::with_capacity(size);
    for r in 0..n {
        let mut row = vec![MPoly::zero(&vars); size];
        for (k, c) in pc.iter().enumerate() {
            row[r + (m - k)] = c.clone();
        }
        rows.push(row);
    }
    for r in 0..m {
        let mut row = vec![MPoly::zero(&vars); size];
        for (k, c) in qc.iter().enumerate() {
            row[r + (n - k)] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Resultant of `p` and `q` with respect to `var`, defined as the
/// determinant of [`sylvester_matrix`].
pub fn resultant<F: Field>(p: &MPoly<F>, q: &MPoly<F>, var: usize) -> Result<MPoly<F>, PolyError> {
    if p.vars().names() != q.vars().names() {
        return Err(PolyError::VarTableMismatch {
            left: p.vars().names().join(","),
            right: q.vars().names().join(","),
        });
    }
    if p.is_zero() || q.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let m = p.degree_in(var);
    let n = q.degree_in(var);
    if m == 0 && n == 0 {
        return Ok(MPoly::one(p.vars()));
    }
    if n == 0 {
        return Ok(q.pow(m as u32));
    }
    if m == 0 {
        return Ok(p.pow(n as u32));
    }
    let s = sylvester_matrix(p, q, var);
    if s.len() <= 3 {
        Ok(cofactor_det(&s))
    } else {
        Ok(bareiss_det(&s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::text::parse_poly;
    use crate::exactpoly::vartable::VarTable;

    #[test]
    fn small_determinants() {
        let v = VarTable::new(&["a", "b", "c", "d"]).unwrap();
        let p = |s| parse_poly(s, &v).unwrap();
        let m = vec![vec![p("a"), p("b")], vec![p("c"), p("d")]];
        assert_eq!(pdet(&m).unwrap(), p("a*d - b*c"));
        let id: Vec<Vec<_>> = (0..3)
            .map(|i| (0..3).map(|j| if i == j { p("1") } else { p("0") }).collect())
            .collect();
        assert_eq!(pdet(&id).unwrap(), p("1"));
        assert!(matches!(pdet(&[vec![p("a"), p("b")]]), Err(PolyError::NotSquare)));
    }

    #[test]
    fn resultant_examples() {
        let v = VarTable::new(&["t", "u", "x1", "x2"]).unwrap();
        let p = |s| parse_poly(s, &v).unwrap();
        assert_eq!(resultant(&p("u - t"), &p("u - 1"), 1).unwrap(), p("t - 1"));
        assert_eq!(resultant(&p("u^3 + t"), &p("1"), 1).unwrap(), p("1"));
        assert_eq!(resultant(&p("x2^2 - t"), &p("x2 - x1"), 3).unwrap(), p("x1^2 - t"));
    }
}
