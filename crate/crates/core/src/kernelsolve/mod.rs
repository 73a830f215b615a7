//! Kernel-method elimination: `Det` and `P`, the duplicated system,
//! genericity, the eliminant, and the full solving pipeline.

mod kernel;
mod modular;
mod pipeline;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::catser::SeriesError;
use crate::ddefront::{DdeError, NumeratorSystem};
use crate::exactpoly::{
    exact_div, gcd, primitive_integer, resultant, BigRat, MPoly, Monomial, PolyError, RatFuncT, VarTable,
};
use crate::guessprove::GuessError;
use crate::idealgb::{buchberger_with, dimension_check, primes_below_2_31, Dimension, GbBudget, GbError, MonomialOrder, PrimeField};

pub use kernel::{build_det, build_p, duplicate, kernel_system, rescaled_det, DuplicatedSystem, KernelSystem};
pub use pipeline::{solve, Certificate, DeformMode, DeformationInfo, GenericityInfo, SolveOptions, SolveReport, Timings};

use modular::{crt_reconstruct, fp, image_of, reconstruct_over_t, ModBasis, ModImage};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("the duplicated system is not zero-dimensional (independent: {})", witness.join(", "))]
    NonGeneric { witness: Vec<String> },
    #[error("the duplicated system has no solutions")]
    UnitIdeal,
    #[error("elimination ideal is empty")]
    EmptyElimination,
    #[error("eliminant could not be reconstructed from {primes} primes")]
    Reconstruction { primes: usize },
    #[error("resultant vanished while eliminating {0}")]
    DegenerateResultant(String),
    #[error("reduction to one equation needs at least two unknowns")]
    TooFewUnknowns,
    #[error("unknown target variable `{0}`")]
    BadTarget(String),
    #[error("parameter `{0}` must be given a value")]
    UnboundParameter(String),
    #[error(transparent)]
    Dde(#[from] DdeError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Gb(#[from] GbError),
    #[error(transparent)]
    Guess(#[from] GuessError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl KernelError {
    pub fn is_budget(&self) -> bool {
        matches!(self, KernelError::Gb(GbError::Budget { .. }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenericityMethod {
    /// Gröbner basis modulo a prime at a random value of `t`.
    Modular,
    /// Gröbner basis over `Q(t)`.
    Exact,
}

#[derive(Clone, Debug)]
pub struct ElimOptions {
    pub budget: GbBudget,
    pub seed: u64,
    pub max_primes: usize,
    pub max_points: usize,
}

impl Default for ElimOptions {
    fn default() -> Self {
        ElimOptions {
            budget: GbBudget::default(),
            seed: 1,
            max_primes: 40,
            max_points: 400,
        }
    }
}

/// Generators of the saturated duplicated ideal, with the extra variable
/// `m` appended when there is something to saturate by.
fn saturated_generators(ds: &DuplicatedSystem) -> Result<(Arc<VarTable>, Vec<MPoly<BigRat>>), KernelError> {
    let nparams = ds.vars.len() - (1 + ds.n * ds.copies + 2 * ds.copies);
    if nparams > 0 {
        return Err(KernelError::UnboundParameter(ds.vars.name(ds.vars.len() - nparams).to_string()));
    }
    let sep = ds.separator();
    if sep.is_constant() {
        return Ok((ds.vars.clone(), ds.sdup.clone()));
    }
    let vars = ds.vars.extended(&["m"])?;
    let mut gens: Vec<MPoly<BigRat>> = ds.sdup.iter().map(|p| p.embed(&vars)).collect::<Result<_, _>>()?;
    let m = MPoly::var(&vars, "m")?;
    gens.push(&(&m * &sep.embed(&vars)?) - &MPoly::one(&vars));
    Ok((vars, gens))
}

fn without_t(vars: &VarTable) -> Result<Arc<VarTable>, PolyError> {
    vars.without(&["t"])
}

/// Dimension over `Q(t)` of the duplicated ideal saturated by the pairwise
/// differences of the `u_i`.
pub fn genericity_check(
    ds: &DuplicatedSystem,
    method: GenericityMethod,
    opts: &ElimOptions,
) -> Result<Dimension, KernelError> {
    let (vars, gens) = saturated_generators(ds)?;
    let rest = without_t(&vars)?;
    match method {
        GenericityMethod::Exact => {
            let gens: Vec<MPoly<RatFuncT>> = gens.iter().map(|g| g.to_ratfunc(0, &rest)).collect::<Result<_, _>>()?;
            let gb = buchberger_with(&rest, gens, MonomialOrder::DegRevLex, &opts.budget)?;
            let names: Vec<&str> = rest.names().iter().map(String::as_str).collect();
            Ok(dimension_check(&gb, &names)?)
        }
        GenericityMethod::Modular => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            for p in primes_below_2_31(4) {
                let ctx = PrimeField::new(p);
                let t0 = rng.gen_range(2..p);
                if let Some(b) = ModBasis::compute(&gens, 0, t0, ctx, &opts.budget)? {
                    let idx: Vec<usize> = (0..rest.len()).collect();
                    return Ok(b.dimension(&rest, &idx));
                }
            }
            Err(KernelError::Reconstruction { primes: 4 })
        }
    }
}

/// Primitive generator of the elimination ideal in `Q[t, target]` of the
/// saturated duplicated ideal. The result lives in the table `[t, target]`.
pub fn eliminant(ds: &DuplicatedSystem, target: &str, opts: &ElimOptions) -> Result<MPoly<BigRat>, KernelError> {
    let (vars, gens) = saturated_generators(ds)?;
    let rest = without_t(&vars)?;
    let z = rest.index_of(target).filter(|_| target.starts_with('z')).ok_or_else(|| KernelError::BadTarget(target.into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let primes = primes_below_2_31(opts.max_primes);
    let mut used_primes = Vec::new();
    let mut images: Vec<ModImage> = Vec::new();
    let mut previous: Option<Vec<Vec<BigRat>>> = None;
    let mut want_points = 8usize;
    let mut degree_bound: Option<usize> = None;
    let mut spent = 0usize;
    for &p in &primes {
        let ctx = PrimeField::new(p);
        let Some(image) = image_for_prime(&gens, &rest, z, &ctx, &mut rng, &mut want_points, &mut degree_bound, &mut spent, opts)?
        else {
            continue;
        };
        if images.first().is_some_and(|im: &ModImage| im.len() != image.len()) {
            // an unlucky prime changed the z-degree; keep the larger one
            if image.len() < images[0].len() {
                continue;
            }
            images.clear();
            used_primes.clear();
            previous = None;
        }
        if let Some(prev) = &previous {
            // a reconstruction that predicts a fresh prime is accepted
            if image_of(&ctx, prev).as_ref() == Some(&image) {
                return Ok(to_poly(prev, target)?);
            }
        }
        images.push(image);
        used_primes.push(p);
        previous = crt_reconstruct(&used_primes, &images);
        if spent > opts.max_points {
            break;
        }
    }
    Err(KernelError::Reconstruction { primes: used_primes.len() })
}

fn to_poly(coeffs: &[Vec<BigRat>], target: &str) -> Result<MPoly<BigRat>, KernelError> {
    let vars = VarTable::new(&["t", target])?;
    let mut terms = Vec::new();
    for (i, row) in coeffs.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            terms.push((Monomial::from_exps(&[j as u16, i as u16]), c.clone()));
        }
    }
    Ok(primitive_integer(&MPoly::from_terms(&vars, terms)))
}

/// Image of the eliminant modulo one prime, from enough specializations of
/// `t`. `None` when the prime is unusable.
#[allow(clippy::too_many_arguments)]
fn image_for_prime(
    gens: &[MPoly<BigRat>],
    rest: &VarTable,
    z: usize,
    ctx: &PrimeField,
    rng: &mut ChaCha8Rng,
    want_points: &mut usize,
    degree_bound: &mut Option<usize>,
    spent: &mut usize,
    opts: &ElimOptions,
) -> Result<Option<ModImage>, KernelError> {
    let p = ctx.modulus();
    let mut xs: Vec<u64> = Vec::new();
    let mut values: Vec<Vec<u64>> = Vec::new();
    let mut failures = 0;
    loop {
        if *spent > opts.max_points {
            return Ok(None);
        }
        let t0 = rng.gen_range(2..p);
        if xs.contains(&t0) {
            continue;
        }
        *spent += 1;
        let Some(b) = ModBasis::compute(gens, 0, t0, *ctx, &opts.budget)? else {
            failures += 1;
            if failures > 8 {
                return Ok(None);
            }
            continue;
        };
        if b.is_unit() {
            return Err(KernelError::UnitIdeal);
        }
        let bound = match degree_bound {
            Some(d) => *d,
            None => {
                let all: Vec<usize> = (0..rest.len()).collect();
                match b.dimension(rest, &all) {
                    Dimension::ZeroDimensional { degree } => {
                        *degree_bound = Some(degree as usize);
                        degree as usize
                    }
                    Dimension::PositiveDimensional { .. } => return Err(KernelError::EmptyElimination),
                }
            }
        };
        let Some(mp) = b.minpoly(z, bound) else {
            return Err(KernelError::EmptyElimination);
        };
        let d = mp.len();
        match values.first().map(Vec::len) {
            Some(prev) if d < prev => continue,
            Some(prev) if d > prev => {
                xs.clear();
                values.clear();
            }
            _ => {}
        }
        xs.push(t0);
        values.push(mp);
        if xs.len() < *want_points + 2 {
            continue;
        }
        let l = xs.len() - 2;
        if let Some(image) = reconstruct_over_t(ctx, &xs[..l], &values[..l]) {
            if predicts(ctx, &image, &xs[l..], &values[l..]) {
                *want_points = l;
                return Ok(Some(image));
            }
        }
        *want_points += 4;
    }
}

/// Checks a reconstructed image against held-out points.
fn predicts(ctx: &PrimeField, image: &ModImage, xs: &[u64], values: &[Vec<u64>]) -> bool {
    for (x, v) in xs.iter().zip(values) {
        let lc = fp::eval(ctx, image.last().unwrap(), *x);
        if lc == 0 {
            return false;
        }
        let inv = crate::idealgb::Coeffs::inv(ctx, &lc);
        for (i, want) in v.iter().enumerate() {
            let got = crate::idealgb::Coeffs::mul(ctx, &fp::eval(ctx, &image[i], *x), &inv);
            if got != *want {
                return false;
            }
        }
    }
    true
}

/// Eliminates `x_n, ..., x_2` from `E_1..E_n` by resultants and removes
/// factors shared with `Det`.
pub fn reduce_to_scalar(ns: &NumeratorSystem) -> Result<MPoly<BigRat>, KernelError> {
    if ns.n < 2 {
        return Err(KernelError::TooFewUnknowns);
    }
    let det = build_det(ns);
    let mut eqs = ns.e.clone();
    for v in (1..ns.n).rev() {
        let x = ns.x(v);
        let name = ns.vars.name(x).to_string();
        let pivot_pos = eqs
            .iter()
            .enumerate()
            .filter(|(_, e)| e.contains_var(x))
            .min_by_key(|(_, e)| (e.degree_in(x), e.num_terms()))
            .map(|(i, _)| i);
        let Some(pp) = pivot_pos else { continue };
        let pivot = eqs.remove(pp);
        let mut next = Vec::with_capacity(eqs.len());
        for e in eqs {
            if !e.contains_var(x) {
                next.push(e);
                continue;
            }
            let r = resultant(&pivot, &e, x)?;
            if r.is_zero() {
                return Err(KernelError::DegenerateResultant(name));
            }
            next.push(r);
        }
        eqs = next;
    }
    let mut r = eqs.into_iter().find(|e| !e.is_zero()).ok_or(KernelError::DegenerateResultant("x".into()))?;
    loop {
        let g = gcd(&r, &det);
        if g.is_constant() {
            break;
        }
        r = exact_div(&r, &g).expect("gcd divides");
    }
    Ok(primitive_integer(&r))
}

/// `(2nk delta)^(2 n^3 k^2 + 2n)` and `((nk)!)^(nk)`.
pub fn degree_bound(n: u32, k: u32, delta: u32) -> (BigInt, BigInt) {
    let nk = n * k;
    let base = BigInt::from(2 * nk * delta);
    let num = num_traits::pow(base, (2 * n.pow(3) * k.pow(2) + 2 * n) as usize);
    let fact = (1..=nk).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
    (num, num_traits::pow(fact, nk as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_instances() {
        assert_eq!(degree_bound(1, 1, 2), (BigInt::from(256), BigInt::one()));
        assert_eq!(degree_bound(1, 1, 1), (BigInt::from(16), BigInt::one()));
        assert_eq!(degree_bound(2, 1, 3), (num_traits::pow(BigInt::from(12), 20), BigInt::from(4)));
    }
}
