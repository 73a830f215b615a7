//! `Det`, `P` and the duplicated kernel system.

use std::sync::Arc;

use crate::ddefront::NumeratorSystem;
use crate::exactpoly::{exact_div, pdet, BigRat, MPoly, VarTable};

use super::KernelError;

#[derive(Clone, Debug)]
pub struct KernelSystem {
    pub base: NumeratorSystem,
    pub det: MPoly<BigRat>,
    pub p: MPoly<BigRat>,
    /// `E_1, ..., E_n, Det, P`.
    pub s: Vec<MPoly<BigRat>>,
}

fn jacobian(ns: &NumeratorSystem) -> Vec<Vec<MPoly<BigRat>>> {
    ns.e
        .iter()
        .map(|e| (0..ns.n).map(|j| e.derivative(ns.x(j))).collect())
        .collect()
}

/// Determinant of `(d E_i / d x_j)`.
pub fn build_det(ns: &NumeratorSystem) -> MPoly<BigRat> {
    pdet(&jacobian(ns)).expect("square nonempty matrix")
}

/// The Jacobian determinant with its last column replaced by `(d E_i / du)`.
pub fn build_p(ns: &NumeratorSystem) -> MPoly<BigRat> {
    let mut m = jacobian(ns);
    for (row, e) in m.iter_mut().zip(&ns.e) {
        *row.last_mut().unwrap() = e.derivative(ns.u());
    }
    pdet(&m).expect("square nonempty matrix")
}

pub fn kernel_system(ns: &NumeratorSystem) -> KernelSystem {
    let det = build_det(ns);
    let p = build_p(ns);
    let mut s = ns.e.clone();
    s.push(det.clone());
    s.push(p.clone());
    KernelSystem {
        base: ns.clone(),
        det,
        p,
        s,
    }
}

/// `Det` with row `i` divided by `(u - a)^{m_i - k}`. Rows whose factor does
/// not divide out are left alone.
pub fn rescaled_det(ks: &KernelSystem) -> MPoly<BigRat> {
    let ns = &ks.base;
    let vars = &ns.vars;
    let lin = &MPoly::var_idx(vars, ns.u()) - &MPoly::constant(vars, ns.a.clone());
    let mut m = jacobian(ns);
    for (row, &mi) in m.iter_mut().zip(&ns.m) {
        let f = lin.pow(mi.saturating_sub(ns.k));
        if let Some(q) = row.iter().map(|c| exact_div(c, &f)).collect::<Option<Vec<_>>>() {
            *row = q;
        }
    }
    pdet(&m).expect("square nonempty matrix")
}

#[derive(Clone, Debug)]
pub struct DuplicatedSystem {
    /// `t, x1..x_{n^2 k}, z0..z_{nk-1}, u1..u_{nk}`, then bound parameters
    /// (none once the system is specialized).
    pub vars: Arc<VarTable>,
    pub sdup: Vec<MPoly<BigRat>>,
    pub copies: usize,
    pub n: usize,
    pub k: u32,
    /// Also saturate by `u_i - a`, which discards kernel roots at the point.
    pub avoid_point: bool,
    pub a: BigRat,
}

impl DuplicatedSystem {
    pub fn u_name(i: usize) -> String {
        format!("u{}", i + 1)
    }

    /// `prod (u_i - u_j)` over `i < j`, times `prod (u_i - a)` when the point
    /// is avoided.
    pub fn separator(&self) -> MPoly<BigRat> {
        let vars = &self.vars;
        let u = |i: usize| MPoly::var(vars, &Self::u_name(i)).expect("u variable");
        let mut acc = MPoly::one(vars);
        for i in 0..self.copies {
            for j in i + 1..self.copies {
                acc = &acc * &(&u(i) - &u(j));
            }
            if self.avoid_point {
                acc = &acc * &(&u(i) - &MPoly::constant(vars, self.a.clone()));
            }
        }
        acc
    }
}

/// `nk` copies of `S` with fresh `x`-blocks and `u_i`, sharing `t` and `z`.
pub fn duplicate(ks: &KernelSystem) -> Result<DuplicatedSystem, KernelError> {
    let ns = &ks.base;
    let n = ns.n;
    let copies = n * ns.k as usize;
    let mut names: Vec<String> = vec!["t".into()];
    names.extend((1..=n * copies).map(|i| format!("x{i}")));
    names.extend((0..copies).map(|j| format!("z{j}")));
    names.extend((0..copies).map(DuplicatedSystem::u_name));
    let params: Vec<String> = ns.vars.names()[2 + n + copies..].to_vec();
    names.extend(params);
    let vars = VarTable::new(&names)?;
    let mut sdup = Vec::with_capacity(copies * (n + 2));
    for c in 0..copies {
        let rename = |name: &str| -> String {
            if name == "u" {
                return DuplicatedSystem::u_name(c);
            }
            match name.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
                Some(j) => format!("x{}", n * c + j),
                None => name.to_string(),
            }
        };
        for p in &ks.s {
            sdup.push(p.rename_into(&vars, &rename)?);
        }
    }
    Ok(DuplicatedSystem {
        vars,
        sdup,
        copies,
        n,
        k: ns.k,
        avoid_point: false,
        a: ns.a.clone(),
    })
}
