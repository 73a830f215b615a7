//! Generic deformation of a system.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactpoly::BigRat;

use super::ast::Expr;
use super::normalize::{normalize, NormalMode};
use super::system::DDESystem;
use super::DdeError;

#[derive(Clone, Debug, PartialEq)]
pub enum Epsilon {
    Rational(BigRat),
    /// Kept as the parameter `eps`.
    Symbolic,
}

/// `coeff * t^t_exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaEntry {
    pub coeff: BigInt,
    pub t_exp: u32,
}

impl fmt::Display for GammaEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.t_exp, self.coeff.is_one()) {
            (0, _) => write!(f, "{}", self.coeff),
            (1, true) => write!(f, "t"),
            (e, true) => write!(f, "t^{e}"),
            (1, false) => write!(f, "{}*t", self.coeff),
            (e, false) => write!(f, "{}*t^{e}", self.coeff),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeformationParams {
    pub alpha: u32,
    pub beta: u32,
    pub gamma: Vec<Vec<GammaEntry>>,
    pub epsilon: Epsilon,
    pub k: u32,
    pub m: Vec<u32>,
    pub big_m: u32,
}

/// Returns the deformed system (point 0, same unknowns) and its parameters.
///
/// `G_i = F_i(t^alpha, u + a) + t eps^k sum_j gamma_ij D^k[G_j]` after the
/// right-hand side substitution; at `eps = 0` the series of the original
/// system are recovered through `t -> t^alpha`.
pub fn deform(sys: &DDESystem, epsilon: Epsilon) -> Result<(DDESystem, DeformationParams), DdeError> {
    if matches!(&epsilon, Epsilon::Rational(e) if e.is_zero()) {
        return Err(DdeError::ZeroEpsilon);
    }
    let ns = normalize(sys, NormalMode::DeformationReady)?;
    let (n, k) = (ns.n as u32, ns.k);
    let big_m = ns.big_m;
    let beta = 2 * big_m / k;
    let alpha = n * n * k * (beta + 1) + n * big_m;

    let shifted = sys.shifted_to_zero();
    let mut decl = shifted.declarations().clone();
    decl.order = Some(k);
    let eps_factor = match &epsilon {
        Epsilon::Rational(e) => Expr::Num(num_traits::pow(e.clone(), k as usize)),
        Epsilon::Symbolic => {
            if decl.params.iter().any(|(p, _)| p == "eps") {
                return Err(DdeError::BadDeclaration("a parameter named `eps` already exists".into()));
            }
            decl.params.push(("eps".into(), None));
            Expr::pow(Expr::Param(decl.params.len() - 1), k)
        }
    };

    let gamma: Vec<Vec<GammaEntry>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        GammaEntry { coeff: BigInt::from(i + 1).pow(k), t_exp: 0 }
                    } else {
                        GammaEntry { coeff: BigInt::one(), t_exp: beta }
                    }
                })
                .collect()
        })
        .collect();

    let t_alpha = Expr::pow(Expr::T, alpha);
    let mut equations = Vec::with_capacity(n as usize);
    for (i, rhs) in shifted.equations().iter().enumerate() {
        let mut sum: Option<Expr> = None;
        for (j, g) in gamma[i].iter().enumerate() {
            let coef = if g.t_exp == 0 {
                Expr::Num(BigRat::from_integer(g.coeff.clone()))
            } else {
                Expr::pow(Expr::T, g.t_exp)
            };
            let term = Expr::mul(coef, Expr::Delta { order: k, unknown: j });
            sum = Some(match sum {
                None => term,
                Some(s) => Expr::add(s, term),
            });
        }
        let extra = Expr::mul(Expr::mul(Expr::T, eps_factor.clone()), sum.expect("n >= 1"));
        equations.push(Expr::add(rhs.subst_t(&t_alpha), extra));
    }
    let deformed = DDESystem::from_parts(decl, equations)?;
    Ok((
        deformed,
        DeformationParams {
            alpha,
            beta,
            gamma,
            epsilon,
            k,
            m: ns.m,
            big_m,
        },
    ))
}
