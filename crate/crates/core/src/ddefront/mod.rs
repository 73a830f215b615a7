//! Text front end for systems of discrete differential equations and their
//! polynomial numerator form.

mod ast;
mod deform;
mod normalize;
mod parser;
mod system;

use thiserror::Error;

use crate::exactpoly::PolyError;

pub use ast::{print_expr, Expr, Names};
pub use deform::{deform, DeformationParams, Epsilon, GammaEntry};
pub use normalize::{normalize, NormalMode, NumeratorSystem};
pub use parser::parse_dde;
pub use system::{expand_delta, lin_power, system_vars, Analysis, DDESystem, Declarations, RhsFrac};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DdeError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}, column {col}: unknown symbol `{name}`")]
    UnknownSymbol { name: String, line: usize, col: usize },
    #[error("no equation for unknown `{0}`")]
    MissingEquation(String),
    #[error("more than one point declaration")]
    MultiplePoints,
    #[error("no point declaration")]
    MissingPoint,
    #[error("bad declaration: {0}")]
    BadDeclaration(String),
    #[error("equation for `{unknown}`: {msg}")]
    Shape { unknown: String, msg: String },
    #[error("equation for `{unknown}`: {msg}")]
    Clearing { unknown: String, msg: String },
    #[error("equation for `{unknown}`: division by (u - a)^{den_exp} is not exact at any admissible order")]
    NotExact { unknown: String, den_exp: u32 },
    #[error("D^{j} used but the order is {k}")]
    DeltaOrder { j: u32, k: u32 },
    #[error("unbound parameter {0}")]
    UnboundParameter(String),
    #[error("epsilon must be nonzero")]
    ZeroEpsilon,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl DdeError {
    pub fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Self {
        DdeError::Syntax { line, col, msg: msg.into() }
    }
}
