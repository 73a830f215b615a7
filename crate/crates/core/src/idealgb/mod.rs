//! Gröbner bases: Buchberger's algorithm with the Gebauer-Möller criteria,
//! elimination, saturation and dimension tests.

mod coeffs;
mod engine;
mod ideal;
mod order;
mod packed;
mod quotient;

use std::fmt;

use thiserror::Error;

use crate::exactpoly::PolyError;

pub use coeffs::{primes_below_2_31, rational_reconstruction, Coeffs, PrimeField, StaticField};
pub use engine::{groebner, reduce as reduce_terms, s_polynomial, GPoly};
pub use ideal::{buchberger, buchberger_with, dimension_check, dimension_from_leading, eliminate, eliminate_with, saturate, saturate_with, BasisStatus, Dimension, Ideal};
pub use packed::groebner_packed;
pub use order::{BlockKind, MonomialOrder, OrderBlock};
pub use quotient::minimal_polynomial_of_var;

/// Limits for a Gröbner computation; `None` means unlimited.
#[derive(Clone, Debug, PartialEq)]
pub struct GbBudget {
    pub max_pairs: Option<usize>,
    pub max_degree: Option<u32>,
    pub max_basis: Option<usize>,
    pub max_seconds: Option<f64>,
}

impl Default for GbBudget {
    fn default() -> Self {
        GbBudget {
            max_pairs: Some(1_000_000),
            max_degree: Some(256),
            max_basis: Some(50_000),
            max_seconds: None,
        }
    }
}

impl GbBudget {
    pub fn unlimited() -> Self {
        GbBudget {
            max_pairs: None,
            max_degree: None,
            max_basis: None,
            max_seconds: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BudgetKind {
    Pairs,
    Degree,
    BasisSize,
    Seconds,
}

impl fmt::Display for BudgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BudgetKind::Pairs => "critical pairs",
            BudgetKind::Degree => "pair degree",
            BudgetKind::BasisSize => "basis size",
            BudgetKind::Seconds => "seconds",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GbError {
    #[error("budget exceeded: {kind} limit {limit}")]
    Budget { kind: BudgetKind, limit: u64 },
    #[error("invalid monomial order: {0}")]
    BadOrder(String),
    #[error("zero generator")]
    ZeroGenerator,
    #[error("operation needs a Gröbner basis")]
    NotGroebner,
    #[error(transparent)]
    Poly(#[from] PolyError),
}
