//! Exact rational arithmetic and sparse multivariate polynomial kernels.

mod det;
mod field;
mod gcd;
mod monomial;
mod mpoly;
mod ratfunc;
mod text;
mod upoly;
mod vartable;

use thiserror::Error;

pub use det::{cofactor_det, pdet, resultant, sylvester_matrix};
pub use field::{gcd_numerators, lcm_denominators, parse_rat, rat, rat_int, rat_to_i64, rat_to_text, BigRat, Field};
pub use gcd::{content, exact_div, gcd, is_primitive_integer, primitive_integer, primitive_part, pseudo_divide, squarefree_part};
pub use monomial::{cmp_degrevlex, cmp_lex, Monomial};
pub use mpoly::{sum_all, ArithOp, MPoly};
pub use ratfunc::RatFuncT;
pub use text::parse_poly;
pub use upoly::UPoly;
pub use vartable::VarTable;

#[allow(unused_imports)]
pub(crate) use vartable::is_identifier;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable tables differ: [{left}] vs [{right}]")]
    VarTableMismatch { left: String, right: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("invalid variable name `{0}`")]
    BadVariableName(String),
    #[error("matrix is not square")]
    NotSquare,
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("zero polynomial where a nonzero one is required")]
    ZeroInput,
    #[error("division by a polynomial that is zero in the main variable")]
    ZeroDivisor,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
