//! Numerator equations `E_i = (u - a)^{m_i} (RHS_i - x_i)`.

use std::sync::Arc;

use crate::exactpoly::{BigRat, MPoly, VarTable};

use super::system::{lin_power, Analysis, DDESystem, RhsFrac};
use super::DdeError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalMode {
    /// `m_i` is the exact denominator exponent.
    Minimal,
    /// The point is moved to 0 and `m_i >= k`.
    DeformationReady,
}

#[derive(Clone, Debug)]
pub struct NumeratorSystem {
    pub vars: Arc<VarTable>,
    pub n: usize,
    pub k: u32,
    /// Point of the polynomials in `e`; 0 after shifting.
    pub a: BigRat,
    /// Point of the system as written.
    pub original_a: BigRat,
    pub a_shifted: bool,
    pub e: Vec<MPoly<BigRat>>,
    pub m: Vec<u32>,
    pub big_m: u32,
    pub rhs: Vec<RhsFrac>,
    pub topo: Vec<usize>,
    pub unbound: Vec<String>,
}

impl NumeratorSystem {
    pub fn analysis(&self) -> Analysis {
        Analysis {
            vars: self.vars.clone(),
            n: self.n,
            k: self.k,
            a: self.a.clone(),
            rhs: self.rhs.clone(),
            topo: self.topo.clone(),
            unbound: self.unbound.clone(),
        }
    }

    pub fn t(&self) -> usize {
        0
    }

    pub fn u(&self) -> usize {
        1
    }

    pub fn x(&self, i: usize) -> usize {
        2 + i
    }

    pub fn z(&self, j: usize) -> usize {
        2 + self.n + j
    }

    /// Errors when a parameter is still free.
    pub fn require_bound(&self) -> Result<(), DdeError> {
        match self.unbound.first() {
            Some(p) => Err(DdeError::UnboundParameter(p.clone())),
            None => Ok(()),
        }
    }
}

pub fn normalize(sys: &DDESystem, mode: NormalMode) -> Result<NumeratorSystem, DdeError> {
    let original_a = sys.a().clone();
    let (src, a_shifted) = match mode {
        NormalMode::Minimal => (sys.clone(), false),
        NormalMode::DeformationReady => {
            let shifted = !num_traits::Zero::is_zero(&original_a);
            (sys.shifted_to_zero(), shifted)
        }
    };
    let an = src.analyze()?;
    let mut e = Vec::with_capacity(an.n);
    let mut m = Vec::with_capacity(an.n);
    for (i, r) in an.rhs.iter().enumerate() {
        let mi = match mode {
            NormalMode::Minimal => r.den_exp,
            NormalMode::DeformationReady => r.den_exp.max(an.k),
        };
        let lhs = &lin_power(&an.vars, &an.a, mi - r.den_exp) * &r.num;
        let x = &lin_power(&an.vars, &an.a, mi) * &MPoly::var_idx(&an.vars, an.x(i));
        e.push(&lhs - &x);
        m.push(mi);
    }
    let big_m = m.iter().sum();
    Ok(NumeratorSystem {
        vars: an.vars,
        n: an.n,
        k: an.k,
        a: an.a,
        original_a,
        a_shifted,
        e,
        m,
        big_m,
        rhs: an.rhs,
        topo: an.topo,
        unbound: an.unbound,
    })
}
