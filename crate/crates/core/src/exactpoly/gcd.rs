//! Exact division, pseudo-division, gcd and squarefree parts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::{gcd_numerators, lcm_denominators, BigRat, Field};
use super::monomial::Monomial;
use super::mpoly::MPoly;
use super::PolyError;

/// Exact quotient `p / d`, or `None` when `d` does not divide `p`.
pub fn exact_div<F: Field>(p: &MPoly<F>, d: &MPoly<F>) -> Option<MPoly<F>> {
    assert!(!d.is_zero(), "division by zero polynomial");
    if p.is_zero() {
        return Some(MPoly::zero(p.vars()));
    }
    if let Some(c) = d.as_constant() {
        return Some(p.scale(&c.inv()));
    }
    let (dm, dc) = d.leading_term().unwrap().clone();
    let dci = dc.inv();
    let mut r = p.clone();
    let mut q = Vec::new();
    while let Some((rm, rc)) = r.leading_term().cloned() {
        let m = rm.div(&dm)?;
        let c = rc.mul(&dci);
        r = &r - &d.mul_term(&m, &c);
        q.push((m, c));
    }
    Some(MPoly::from_terms(p.vars(), q))
}

/// Pseudo-division in variable `var`: returns `(quotient, remainder,
/// multiplier)` with `multiplier * p = quotient * q + remainder`,
/// `deg_var(remainder) < deg_var(q)` and the multiplier a power of the
/// leading coefficient of `q` in `var`.
pub fn pseudo_divide<F: Field>(
    p: &MPoly<F>,
    q: &MPoly<F>,
    var: usize,
) -> Result<(MPoly<F>, MPoly<F>, MPoly<F>), PolyError> {
    if q.is_zero() {
        return Err(PolyError::ZeroDivisor);
    }
    let vars = p.vars().clone();
    let dq = q.degree_in(var);
    let lc = q.lc_in(var);
    let dp = p.degree_in(var);
    if p.is_zero() || dp < dq {
        return Ok((MPoly::zero(&vars), p.clone(), MPoly::one(&vars)));
    }
    let steps = (dp - dq + 1) as u32;
    let mut r = p.clone();
    let mut quo = MPoly::zero(&vars);
    let mut used = 0u32;
    while !r.is_zero() && r.degree_in(var) >= dq {
        let dr = r.degree_in(var);
        let lr = r.lc_in(var);
        let shift = MPoly::monomial(&vars, Monomial::var(vars.len(), var, dr - dq), F::one());
        let t = &lr * &shift;
        quo = &(&quo * &lc) + &t;
        r = &(&r * &lc) - &(&t * q);
        used += 1;
    }
    // pad to the canonical multiplier lc^(dp - dq + 1)
    let extra = steps - used;
    let mult = lc.pow(steps);
    if extra > 0 {
        let f = lc.pow(extra);
        quo = &quo * &f;
        r = &r * &f;
    }
    Ok((quo, r, mult))
}

/// Remainder of the pseudo-division.
pub fn prem<F: Field>(p: &MPoly<F>, q: &MPoly<F>, var: usize) -> MPoly<F> {
    pseudo_divide(p, q, var).expect("nonzero divisor").1
}

/// Gcd in `F[vars]`, normalized to leading coefficient one (the zero
/// polynomial only when both inputs are zero).
pub fn gcd<F: Field>(p: &MPoly<F>, q: &MPoly<F>) -> MPoly<F> {
    gcd_rec(p, q).monic()
}

fn gcd_rec<F: Field>(p: &MPoly<F>, q: &MPoly<F>) -> MPoly<F> {
    let vars = p.vars().clone();
    if p.is_zero() {
        return q.clone();
    }
    if q.is_zero() {
        return p.clone();
    }
    if p.is_constant() || q.is_constant() {
        return MPoly::one(&vars);
    }
    let pv = p.used_vars();
    let qv = q.used_vars();
    let main = *pv.iter().chain(qv.iter()).max().unwrap();
    if !p.contains_var(main) {
        return gcd_rec(p, &content(q, main));
    }
    if !q.contains_var(main) {
        return gcd_rec(&content(p, main), q);
    }
    let cp = content(p, main);
    let cq = content(q, main);
    let pp = exact_div(p, &cp).expect("content divides");
    let qp = exact_div(q, &cq).expect("content divides");
    let g = subresultant_gcd_primitive(&pp, &qp, main);
    let c = gcd_rec(&cp, &cq);
    &c * &g
}

/// Content with respect to `var`: gcd of the coefficients in `var`.
pub fn content<F: Field>(p: &MPoly<F>, var: usize) -> MPoly<F> {
    let mut g = MPoly::zero(p.vars());
    for c in p.coeffs_in(var) {
        if c.is_zero() {
            continue;
        }
        g = gcd_rec(&g, &c);
        if g.is_constant() {
            return MPoly::one(p.vars());
        }
    }
    g.monic()
}

pub fn primitive_part<F: Field>(p: &MPoly<F>, var: usize) -> MPoly<F> {
    if p.is_zero() {
        return p.clone();
    }
    exact_div(p, &content(p, var)).expect("content divides")
}

/// Gcd of two polynomials primitive in `var` via the subresultant PRS.
fn subresultant_gcd_primitive<F: Field>(p: &MPoly<F>, q: &MPoly<F>, var: usize) -> MPoly<F> {
    let vars = p.vars().clone();
    let (mut a, mut b) = if p.degree_in(var) >= q.degree_in(var) {
        (p.clone(), q.clone())
    } else {
        (q.clone(), p.clone())
    };
    let mut g = MPoly::one(&vars);
    let mut h = MPoly::one(&vars);
    loop {
        let delta = (a.degree_in(var) - b.degree_in(var)) as u32;
        let r = prem(&a, &b, var);
        if r.is_zero() {
            return primitive_part(&b, var);
        }
        if r.degree_in(var) == 0 {
            return MPoly::one(&vars);
        }
        let divisor = &g * &h.pow(delta);
        a = b;
        b = exact_div(&r, &divisor).expect("subresultant division is exact");
        g = a.lc_in(var);
        h = if delta == 0 {
            h
        } else {
            let num = g.pow(delta);
            let den = h.pow(delta - 1);
            exact_div(&num, &den).expect("subresultant division is exact")
        };
    }
}

/// `p / gcd(p, d p / d var)`, normalized to leading coefficient one.
pub fn squarefree_part<F: Field>(p: &MPoly<F>, var: usize) -> Result<MPoly<F>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let d = p.derivative(var);
    if d.is_zero() {
        return Ok(p.monic());
    }
    let g = gcd(p, &d);
    Ok(exact_div(p, &g).expect("gcd divides").monic())
}

/// Scales a rational polynomial to have coprime integer coefficients and a
/// positive leading coefficient (in storage order).
pub fn primitive_integer(p: &MPoly<BigRat>) -> MPoly<BigRat> {
    if p.is_zero() {
        return p.clone();
    }
    let l = lcm_denominators(p.terms().iter().map(|t| &t.1));
    let scaled = p.scale(&BigRat::from_integer(l));
    let g = gcd_numerators(scaled.terms().iter().map(|t| &t.1));
    let mut s = BigRat::from_integer(BigInt::one()) / BigRat::from_integer(g.abs());
    if scaled.leading_coeff().is_negative() {
        s = -s;
    }
    scaled.scale(&s)
}

/// True when every coefficient is an integer and their gcd is one.
pub fn is_primitive_integer(p: &MPoly<BigRat>) -> bool {
    p.terms().iter().all(|t| t.1.is_integer())
        && p.terms()
            .iter()
            .fold(BigInt::zero(), |acc, t| acc.gcd(t.1.numer()))
            .is_one()
}
