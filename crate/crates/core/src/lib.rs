//! Exact solver for systems of discrete differential equations (DDEs) with
//! one catalytic variable.
//!
//! The pipeline parses a system, clears the divided differences into
//! polynomial numerator equations, builds the Jacobian determinant `Det` and
//! its column-replaced companion `P`, duplicates the kernel system, and
//! eliminates down to a polynomial relation for a specialized series
//! `F_i(t, a)`. Results are certified against independently computed
//! truncated series.

pub mod exactpoly;
pub mod catser;
pub mod ddefront;
pub mod guessprove;
pub mod idealgb;
pub mod kernelsolve;
