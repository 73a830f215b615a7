//! Truncated power series: series solutions of DDE systems, evaluation of
//! polynomials at series, and Puiseux analysis of `u`-polynomials.

mod algnum;
mod puiseux;
mod series;
mod solve;

use thiserror::Error;

use crate::ddefront::DdeError;
use crate::exactpoly::PolyError;

pub use algnum::{adjoin, take_zero_divisor, AlgNum, Level};
pub use puiseux::{puiseux_roots, rational_branches, PSeries, PuiseuxReport, PuiseuxStatus, RootGroup};
pub use series::{TruncBiSeries, TruncTSeries};
pub use solve::{
    eval_at_series, fixed_point_iterate, residuals, solution_bindings, solve_analysis, solve_series, specialize,
    Binding, Schedule,
};

/// Default truncation for guessing an annihilator of total degree bound `b`.
pub fn default_order(expected_degree_bound: usize) -> usize {
    2 * expected_degree_bound + 8
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("equation for `{unknown}` is malformed: {msg}")]
    Malformed { unknown: String, msg: String },
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("truncation orders differ: {0} and {1}")]
    OrderMismatch(usize, usize),
    #[error("{0}")]
    Ramification(String),
    #[error("the polynomial vanishes to the working precision")]
    ZeroPolynomial,
    #[error("truncation order must be at least 1")]
    BadOrder,
    #[error(transparent)]
    Dde(#[from] DdeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
