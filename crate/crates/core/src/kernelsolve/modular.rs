//! Specialization `t = t0` modulo a prime, and the reconstruction of
//! polynomials in `Q[t][z]` from their images.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exactpoly::{BigRat, MPoly, Monomial};
use crate::idealgb::{
    dimension_from_leading, groebner, groebner_packed, minimal_polynomial_of_var, rational_reconstruction, Coeffs, Dimension,
    GPoly, GbBudget, GbError, MonomialOrder, PrimeField,
};

/// Image of `p` at `t = t0` in `F_p[vars \ t]`, or `None` when a
/// coefficient denominator vanishes.
pub(crate) fn specialize_mod(
    p: &MPoly<BigRat>,
    t: usize,
    t0: u64,
    ctx: &PrimeField,
    order: &MonomialOrder,
) -> Option<GPoly<u64>> {
    let n = p.nvars();
    let mut terms = Vec::with_capacity(p.num_terms());
    for (m, c) in p.terms() {
        let c = ctx.from_rat(c)?;
        let v = ctx.mul(&c, &ctx.pow(t0, m.exp(t) as u64));
        let exps: Vec<u16> = (0..n).filter(|&i| i != t).map(|i| m.exp(i)).collect();
        terms.push((Monomial::from_exps(&exps), v));
    }
    Some(GPoly::from_terms(ctx, order, terms))
}

/// A Gröbner basis of a specialized ideal.
pub(crate) struct ModBasis {
    pub ctx: PrimeField,
    pub order: MonomialOrder,
    pub basis: Vec<GPoly<u64>>,
}

impl ModBasis {
    pub fn compute(
        gens: &[MPoly<BigRat>],
        t: usize,
        t0: u64,
        ctx: PrimeField,
        budget: &GbBudget,
    ) -> Result<Option<ModBasis>, GbError> {
        let order = MonomialOrder::DegRevLex;
        let mut g = Vec::with_capacity(gens.len());
        for p in gens {
            match specialize_mod(p, t, t0, &ctx, &order) {
                Some(x) => g.push(x),
                None => return Ok(None),
            }
        }
        let nvars = g.first().map_or(0, |x: &GPoly<u64>| x.terms.first().map_or(0, |t| t.0.nvars()));
        let basis = match groebner_packed(ctx, nvars, &g, budget) {
            Some(r) => r?,
            None => groebner(&ctx, &order, g, budget)?,
        };
        Ok(Some(ModBasis { ctx, order, basis }))
    }

    /// Dimension over the variables `idx` (indices after removing `t`).
    pub fn dimension(&self, table: &crate::exactpoly::VarTable, idx: &[usize]) -> Dimension {
        let lms: Vec<Monomial> = self.basis.iter().map(|g| g.lm().clone()).collect();
        dimension_from_leading(table, &lms, idx)
    }

    pub fn is_unit(&self) -> bool {
        self.basis.iter().any(|g| g.lm().is_one())
    }

    /// Monic minimal polynomial of a variable, lowest degree first.
    pub fn minpoly(&self, var: usize, max_degree: usize) -> Option<Vec<u64>> {
        minimal_polynomial_of_var(&self.ctx, &self.order, &self.basis, var, max_degree)
    }
}

/// Dense polynomials over `F_p`, lowest degree first, no trailing zeros.
pub(crate) mod fp {
    use crate::idealgb::{Coeffs, PrimeField};

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn deg(a: &[u64]) -> Option<usize> {
        a.iter().rposition(|&c| c != 0)
    }

    pub fn sub(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| f.sub(a.get(i).unwrap_or(&0), b.get(i).unwrap_or(&0)))
            .collect();
        trim(out)
    }

    pub fn mul(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(x, y));
            }
        }
        trim(out)
    }

    pub fn divrem(f: &PrimeField, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let db = deg(b).expect("nonzero divisor");
        let inv = f.inv(&b[db]);
        let mut r = trim(a.to_vec());
        let mut q = vec![0u64; r.len().saturating_sub(db)];
        while let Some(dr) = deg(&r).filter(|&d| d >= db) {
            let c = f.mul(&r[dr], &inv);
            q[dr - db] = c;
            for (i, y) in b.iter().enumerate() {
                r[dr - db + i] = f.sub(&r[dr - db + i], &f.mul(&c, y));
            }
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn eval(f: &PrimeField, a: &[u64], x: u64) -> u64 {
        a.iter().rev().fold(0, |acc, c| f.add(&f.mul(&acc, &x), c))
    }

    pub fn monic(f: &PrimeField, a: &[u64]) -> Vec<u64> {
        match deg(a) {
            None => Vec::new(),
            Some(d) => {
                let inv = f.inv(&a[d]);
                a.iter().map(|c| f.mul(c, &inv)).collect()
            }
        }
    }

    pub fn gcd(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = divrem(f, &a, &b).1;
            a = std::mem::replace(&mut b, r);
        }
        monic(f, &a)
    }

    /// Newton interpolation through `(xs[i], ys[i])`.
    pub fn interpolate(f: &PrimeField, xs: &[u64], ys: &[u64]) -> Vec<u64> {
        let mut result: Vec<u64> = Vec::new();
        let mut basis: Vec<u64> = vec![1];
        for (i, (&x, &y)) in xs.iter().zip(ys).enumerate() {
            let cur = eval(f, &result, x);
            let b = eval(f, &basis, x);
            let c = f.mul(&f.sub(&y, &cur), &f.inv(&b));
            let scaled: Vec<u64> = basis.iter().map(|v| f.mul(v, &c)).collect();
            result = trim(
                (0..result.len().max(scaled.len()))
                    .map(|j| f.add(result.get(j).unwrap_or(&0), scaled.get(j).unwrap_or(&0)))
                    .collect(),
            );
            if i + 1 < xs.len() {
                basis = mul(f, &basis, &[f.neg(&x), 1]);
            }
        }
        result
    }

    /// `num / den` with `deg num <= dn`, `deg den < L - dn` and
    /// `num = den * a mod m`, where `L = deg m`; `den` monic.
    pub fn rational_reconstruct(f: &PrimeField, a: &[u64], m: &[u64], dn: usize) -> Option<(Vec<u64>, Vec<u64>)> {
        let l = deg(m)?;
        let (mut r0, mut r1) = (trim(m.to_vec()), trim(a.to_vec()));
        let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
        while deg(&r1).is_some_and(|d| d > dn) {
            let (q, r) = divrem(f, &r0, &r1);
            let s2 = sub(f, &s0, &mul(f, &q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        let ds = deg(&s1)?;
        if ds + dn >= l {
            return None;
        }
        if deg(&gcd(f, &r1, &s1)).unwrap_or(0) > 0 {
            return None;
        }
        let inv = f.inv(&s1[ds]);
        let num = r1.iter().map(|c| f.mul(c, &inv)).collect();
        let den = s1.iter().map(|c| f.mul(c, &inv)).collect();
        Some((trim(num), den))
    }
}

/// Image of a polynomial in `Q[t][z]` modulo one prime, as coefficient
/// lists `coeffs[i][j]` of `z^i t^j`.
pub(crate) type ModImage = Vec<Vec<u64>>;

/// Reconstructs `D(t) * (z^d + sum c_i(t) z^i)` with `D` the monic lcm of the
/// denominators, from values of the monic `c_i` at the points `xs`.
pub(crate) fn reconstruct_over_t(f: &PrimeField, xs: &[u64], values: &[Vec<u64>]) -> Option<ModImage> {
    let d = values[0].len() - 1;
    let l = xs.len();
    let mut modulus: Vec<u64> = vec![1];
    for &x in xs {
        modulus = fp::mul(f, &modulus, &[f.neg(&x), 1]);
    }
    let dn = (l - 1) / 2;
    let mut fracs = Vec::with_capacity(d);
    for i in 0..d {
        let ys: Vec<u64> = values.iter().map(|v| v[i]).collect();
        let a = fp::interpolate(f, xs, &ys);
        fracs.push(fp::rational_reconstruct(f, &a, &modulus, dn)?);
    }
    let mut den: Vec<u64> = vec![1];
    for (_, q) in &fracs {
        let g = fp::gcd(f, &den, q);
        den = fp::divrem(f, &fp::mul(f, &den, q), &g).0;
    }
    let mut out = Vec::with_capacity(d + 1);
    for (num, q) in &fracs {
        let cof = fp::divrem(f, &den, q).0;
        out.push(fp::mul(f, num, &cof));
    }
    out.push(den);
    Some(out)
}

/// Chinese remaindering of images into rationals. Returns `None` while
/// some coefficient has no reconstruction yet.
pub(crate) fn crt_reconstruct(primes: &[u64], images: &[ModImage]) -> Option<Vec<Vec<BigRat>>> {
    let shape = &images[0];
    if images.iter().any(|im| im.len() != shape.len()) {
        return None;
    }
    let modulus = primes.iter().fold(BigInt::one(), |acc, &p| acc * BigInt::from(p));
    let mut out = Vec::with_capacity(shape.len());
    for i in 0..shape.len() {
        let width = images.iter().map(|im| im[i].len()).max().unwrap_or(0);
        let mut row = Vec::with_capacity(width);
        for j in 0..width {
            let mut acc = BigInt::zero();
            let mut m = BigInt::one();
            for (p, im) in primes.iter().zip(images) {
                let r = BigInt::from(*im[i].get(j).unwrap_or(&0));
                let pb = BigInt::from(*p);
                // acc + m * ((r - acc) / m mod p)
                let minv = m.modinv(&pb)?;
                let delta = ((&r - &acc) * minv).mod_floor(&pb);
                acc += &m * delta;
                m *= &pb;
            }
            if acc.is_zero() {
                row.push(BigRat::zero());
            } else {
                row.push(rational_reconstruction(&acc, &modulus)?);
            }
        }
        out.push(row);
    }
    Some(out)
}

/// Reduction of a rational image for comparison against a fresh prime.
pub(crate) fn image_of(f: &PrimeField, coeffs: &[Vec<BigRat>]) -> Option<ModImage> {
    coeffs
        .iter()
        .map(|row| row.iter().map(|c| f.from_rat(c)).collect::<Option<Vec<u64>>>().map(fp::trim))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idealgb::primes_below_2_31;

    #[test]
    fn rational_function_roundtrip() {
        let f = PrimeField::new(primes_below_2_31(1)[0]);
        // (1 + 2t) / (1 - t + 3t^2)
        let xs: Vec<u64> = (10..18).collect();
        let ys: Vec<u64> = xs
            .iter()
            .map(|&x| {
                let num = fp::eval(&f, &[1, 2], x);
                let den = fp::eval(&f, &[1, f.neg(&1), 3], x);
                f.mul(&num, &f.inv(&den))
            })
            .collect();
        let a = fp::interpolate(&f, &xs, &ys);
        let mut m = vec![1u64];
        for &x in &xs {
            m = fp::mul(&f, &m, &[f.neg(&x), 1]);
        }
        let (num, den) = fp::rational_reconstruct(&f, &a, &m, 3).unwrap();
        let inv3 = f.inv(&3);
        assert_eq!(den, vec![inv3, f.mul(&f.neg(&1), &inv3), 1]);
        assert_eq!(num, vec![inv3, f.mul(&2, &inv3)]);
    }
}
