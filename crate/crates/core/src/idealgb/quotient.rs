//! Linear algebra in the quotient ring `K[x] / I` for a Gröbner basis of a
//! zero-dimensional ideal.

use std::collections::HashMap;

use crate::exactpoly::Monomial;

use super::coeffs::Coeffs;
use super::engine::{reduce, GPoly};
use super::order::MonomialOrder;

/// Monic minimal polynomial of variable `var` modulo the ideal with Gröbner
/// basis `basis`, as coefficients lowest degree first. `None` when no
/// relation of degree at most `max_degree` exists.
pub fn minimal_polynomial_of_var<C: Coeffs>(
    ctx: &C,
    order: &MonomialOrder,
    basis: &[GPoly<C::E>],
    var: usize,
    max_degree: usize,
) -> Option<Vec<C::E>> {
    let nvars = basis.first().map(|b| b.lm().nvars())?;
    let x = Monomial::var(nvars, var, 1);
    let mut cols: HashMap<Monomial, usize> = HashMap::new();
    // echelon rows: (pivot column, dense row, combination of powers)
    let mut rows: Vec<(usize, Vec<C::E>, Vec<C::E>)> = Vec::new();
    let mut power = reduce(
        ctx,
        order,
        GPoly {
            terms: vec![(Monomial::one(nvars), ctx.one())],
        },
        basis,
    );
    for k in 0..=max_degree {
        let mut v: Vec<C::E> = Vec::new();
        for (m, c) in &power.terms {
            let n = cols.len();
            let col = *cols.entry(m.clone()).or_insert(n);
            if v.len() <= col {
                v.resize(col + 1, ctx.zero());
            }
            v[col] = c.clone();
        }
        let mut comb = vec![ctx.zero(); k + 1];
        comb[k] = ctx.one();
        for (p, row, rc) in &rows {
            let f = match v.get(*p) {
                Some(f) if !ctx.is_zero(f) => f.clone(),
                _ => continue,
            };
            for (j, r) in row.iter().enumerate() {
                if ctx.is_zero(r) {
                    continue;
                }
                if v.len() <= j {
                    v.resize(j + 1, ctx.zero());
                }
                v[j] = ctx.sub(&v[j], &ctx.mul(&f, r));
            }
            for (j, r) in rc.iter().enumerate() {
                comb[j] = ctx.sub(&comb[j], &ctx.mul(&f, r));
            }
        }
        match v.iter().position(|c| !ctx.is_zero(c)) {
            None => return Some(comb),
            Some(p) => {
                let inv = ctx.inv(&v[p]);
                let row: Vec<C::E> = v.iter().map(|c| ctx.mul(c, &inv)).collect();
                let rc: Vec<C::E> = comb.iter().map(|c| ctx.mul(c, &inv)).collect();
                rows.push((p, row, rc));
            }
        }
        let shifted = GPoly {
            terms: power.terms.iter().map(|(m, c)| (m.mul(&x), c.clone())).collect(),
        };
        power = reduce(ctx, order, shifted, basis);
    }
    None
}
