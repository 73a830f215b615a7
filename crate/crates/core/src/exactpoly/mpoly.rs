//! Sparse multivariate polynomials.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::field::{BigRat, Field};
use super::monomial::{cmp_degrevlex, Monomial};
use super::ratfunc::RatFuncT;
use super::upoly::UPoly;
use super::vartable::VarTable;
use super::PolyError;

/// Sparse polynomial over `F` in the variables of a [`VarTable`].
///
/// Terms are kept sorted by descending graded reverse lexicographic order
/// and never carry a zero coefficient, so structural equality is polynomial
/// equality.
#[derive(Clone)]
pub struct MPoly<F> {
    vars: Arc<VarTable>,
    terms: Vec<(Monomial, F)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl<F: Field> PartialEq for MPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl<F: Field> Eq for MPoly<F> {}

fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || a.names() == b.names()
}

impl<F: Field> MPoly<F> {
    pub fn zero(vars: &Arc<VarTable>) -> Self {
        MPoly {
            vars: vars.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(vars: &Arc<VarTable>) -> Self {
        Self::constant(vars, F::one())
    }

    pub fn constant(vars: &Arc<VarTable>, c: F) -> Self {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(Monomial::one(vars.len()), c)]
        };
        MPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn from_i64(vars: &Arc<VarTable>, c: i64) -> Self {
        Self::constant(vars, F::from_i64(c))
    }

    /// The variable called `name`.
    pub fn var(vars: &Arc<VarTable>, name: &str) -> Result<Self, PolyError> {
        Ok(Self::var_idx(vars, vars.require(name)?))
    }

    pub fn var_idx(vars: &Arc<VarTable>, i: usize) -> Self {
        Self::monomial(vars, Monomial::var(vars.len(), i, 1), F::one())
    }

    pub fn monomial(vars: &Arc<VarTable>, m: Monomial, c: F) -> Self {
        assert_eq!(m.nvars(), vars.len(), "monomial length mismatch");
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        MPoly {
            vars: vars.clone(),
            terms,
        }
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated or
    /// zero) terms.
    pub fn from_terms(vars: &Arc<VarTable>, terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut acc: HashMap<Monomial, F> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), vars.len(), "monomial length mismatch");
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&m) {
                Some(e) => *e = e.add(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(vars, acc)
    }

    fn from_map(vars: &Arc<VarTable>, acc: HashMap<Monomial, F>) -> Self {
        let mut terms: Vec<(Monomial, F)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| cmp_degrevlex(&b.0, &a.0));
        MPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> &[(Monomial, F)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, F)> {
        self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<F> {
        match self.terms.as_slice() {
            [] => Some(F::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Leading term in the storage (degrevlex) order.
    pub fn leading_term(&self) -> Option<&(Monomial, F)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> F {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(F::zero)
    }

    /// Coefficient of exactly the monomial `m`.
    pub fn coeff_of(&self, m: &Monomial) -> F {
        self.terms
            .iter()
            .find(|(mm, _)| mm == m)
            .map(|t| t.1.clone())
            .unwrap_or_else(F::zero)
    }

    fn check(&self, other: &Self) -> Result<(), PolyError> {
        if same_table(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(PolyError::VarTableMismatch {
                left: self.vars.names().join(","),
                right: other.vars.names().join(","),
            })
        }
    }

    /// Exact `p op q`; fails when the operands use different variable tables.
    pub fn try_arith(&self, other: &Self, op: ArithOp) -> Result<Self, PolyError> {
        self.check(other)?;
        Ok(match op {
            ArithOp::Add => self.add_impl(other, false),
            ArithOp::Sub => self.add_impl(other, true),
            ArithOp::Mul => self.mul_impl(other),
        })
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match cmp_degrevlex(&a[i].0, &b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { b[j].1.neg() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { a[i].1.sub(&b[j].1) } else { a[i].1.add(&b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), if negate { c.neg() } else { c.clone() })));
        MPoly {
            vars: self.vars.clone(),
            terms: out,
        }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.vars);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        let mut acc: HashMap<Monomial, F> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(e) => *e = e.add(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Self::from_map(&self.vars, acc)
    }

    /// Multiplication by the term `c * m` (order preserving).
    pub fn mul_term(&self, m: &Monomial, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc.mul(c))).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.mul_term(&Monomial::one(self.nvars()), c)
    }

    pub fn neg(&self) -> Self {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Degree in variable `i` (0 for the zero polynomial).
    pub fn degree_in(&self, i: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.exp(i)).max().unwrap_or(0)
    }

    /// Indices of the variables that occur.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.nvars())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exp(i) > 0))
            .collect()
    }

    pub fn contains_var(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(i) > 0)
    }

    /// Coefficients with respect to variable `i`: `p = sum_k out[k] * x_i^k`.
    pub fn coeffs_in(&self, i: usize) -> Vec<Self> {
        let d = self.degree_in(i) as usize;
        let mut buckets: Vec<Vec<(Monomial, F)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exp(i) as usize;
            let mut mm = m.clone();
            mm.set_exp(i, 0);
            buckets[e].push((mm, c.clone()));
        }
        if self.is_zero() {
            return vec![Self::zero(&self.vars)];
        }
        buckets
            .into_iter()
            .map(|t| {
                // removing a single variable keeps degrevlex order only up to
                // ties, so re-sort
                let mut t = t;
                t.sort_by(|a, b| cmp_degrevlex(&b.0, &a.0));
                MPoly {
                    vars: self.vars.clone(),
                    terms: t,
                }
            })
            .collect()
    }

    /// Coefficient of `x_i^k`.
    pub fn coeff_in(&self, i: usize, k: u16) -> Self {
        let mut t: Vec<(Monomial, F)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(i) == k)
            .map(|(m, c)| {
                let mut mm = m.clone();
                mm.set_exp(i, 0);
                (mm, c.clone())
            })
            .collect();
        t.sort_by(|a, b| cmp_degrevlex(&b.0, &a.0));
        MPoly {
            vars: self.vars.clone(),
            terms: t,
        }
    }

    /// Leading coefficient with respect to variable `i`.
    pub fn lc_in(&self, i: usize) -> Self {
        self.coeff_in(i, self.degree_in(i))
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in).
    pub fn from_coeffs_in(vars: &Arc<VarTable>, i: usize, coeffs: &[Self]) -> Self {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, cc) in &c.terms {
                let mut mm = m.clone();
                mm.set_exp(i, m.exp(i) + k as u16);
                terms.push((mm, cc.clone()));
            }
        }
        Self::from_terms(vars, terms)
    }

    pub fn derivative(&self, i: usize) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.exp(i) > 0).map(|(m, c)| {
            let e = m.exp(i);
            let mut mm = m.clone();
            mm.set_exp(i, e - 1);
            (mm, c.mul(&F::from_i64(e as i64)))
        });
        Self::from_terms(&self.vars, terms)
    }

    pub fn derivative_by(&self, name: &str) -> Result<Self, PolyError> {
        Ok(self.derivative(self.vars.require(name)?))
    }

    /// Replaces variable `i` by `value` (same table).
    pub fn substitute(&self, i: usize, value: &Self) -> Result<Self, PolyError> {
        self.check(value)?;
        let cs = self.coeffs_in(i);
        let mut acc = Self::zero(&self.vars);
        for c in cs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        Ok(acc)
    }

    /// Simultaneous substitution of several variables.
    pub fn substitute_many(&self, subs: &[(usize, Self)]) -> Result<Self, PolyError> {
        for (_, v) in subs {
            self.check(v)?;
        }
        let mut powers: HashMap<(usize, u16), Self> = HashMap::new();
        let mut acc: Vec<Self> = Vec::new();
        for (m, c) in &self.terms {
            let mut base = m.clone();
            let mut factor = Self::one(&self.vars);
            for (i, v) in subs {
                let e = m.exp(*i);
                if e == 0 {
                    continue;
                }
                base.set_exp(*i, 0);
                let p = powers.entry((*i, e)).or_insert_with(|| v.pow(e as u32)).clone();
                factor = &factor * &p;
            }
            acc.push(factor.mul_term(&base, c));
        }
        Ok(sum_all(&self.vars, acc))
    }

    /// Evaluates variable `i` at a constant.
    pub fn eval_var(&self, i: usize, x: &F) -> Self {
        self.substitute(i, &Self::constant(&self.vars, x.clone()))
            .expect("same table")
    }

    /// Re-expresses the polynomial in another table, matching variables by
    /// name. Fails when a used variable is missing from `target`.
    pub fn embed(&self, target: &Arc<VarTable>) -> Result<Self, PolyError> {
        let map: Vec<Option<usize>> = self.vars.names().iter().map(|n| target.index_of(n)).collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut mm = Monomial::one(target.len());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => mm.set_exp(j, e),
                    None => return Err(PolyError::UnknownVariable(self.vars.name(i).to_string())),
                }
            }
            terms.push((mm, c.clone()));
        }
        Ok(Self::from_terms(target, terms))
    }

    /// Renames variables according to `rename` (old name to new name) and
    /// embeds into `target`.
    pub fn rename_into(&self, target: &Arc<VarTable>, rename: &dyn Fn(&str) -> String) -> Result<Self, PolyError> {
        let map: Vec<Option<usize>> = self
            .vars
            .names()
            .iter()
            .map(|n| target.index_of(&rename(n)))
            .collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut mm = Monomial::one(target.len());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => mm.set_exp(j, mm.exp(j) + e),
                    None => return Err(PolyError::UnknownVariable(rename(self.vars.name(i)))),
                }
            }
            terms.push((mm, c.clone()));
        }
        Ok(Self::from_terms(target, terms))
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> MPoly<G> {
        MPoly::from_terms(&self.vars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Normalizes so that the leading (degrevlex) coefficient is one.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coeff().inv())
    }

    /// Univariate view in variable `i` when no other variable occurs.
    pub fn to_upoly(&self, i: usize) -> Option<UPoly<F>> {
        if self.used_vars().iter().any(|&j| j != i) {
            return None;
        }
        let d = self.degree_in(i) as usize;
        let mut v = vec![F::zero(); d + 1];
        for (m, c) in &self.terms {
            v[m.exp(i) as usize] = c.clone();
        }
        Some(UPoly::from_coeffs(v))
    }

    pub fn from_upoly(vars: &Arc<VarTable>, i: usize, p: &UPoly<F>) -> Self {
        Self::from_terms(
            vars,
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::var(vars.len(), i, k as u16), c.clone())),
        )
    }

    /// Canonical text form, terms in storage order.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (m, c) in &self.terms {
            let (neg, mag) = c.text_parts();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mon = monomial_text(&self.vars, m);
            if mon.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&mon);
            } else {
                out.push_str(&mag);
                out.push('*');
                out.push_str(&mon);
            }
        }
        out
    }
}

pub(crate) fn monomial_text(vars: &VarTable, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars.name(i).to_string()),
            _ => parts.push(format!("{}^{}", vars.name(i), e)),
        }
    }
    parts.join("*")
}

/// Sum of many polynomials sharing a table.
pub fn sum_all<F: Field>(vars: &Arc<VarTable>, ps: impl IntoIterator<Item = MPoly<F>>) -> MPoly<F> {
    MPoly::from_terms(vars, ps.into_iter().flat_map(|p| p.terms))
}

impl MPoly<BigRat> {
    /// Moves the variable `t` into the coefficient field, giving a polynomial
    /// over `Q(t)` in the remaining variables of `target`.
    pub fn to_ratfunc(&self, t: usize, target: &Arc<VarTable>) -> Result<MPoly<RatFuncT>, PolyError> {
        let mut groups: HashMap<Monomial, Vec<(usize, BigRat)>> = HashMap::new();
        for (m, c) in &self.terms {
            let mut mm = m.clone();
            mm.set_exp(t, 0);
            groups.entry(mm).or_default().push((m.exp(t) as usize, c.clone()));
        }
        let mut terms = Vec::new();
        for (m, cs) in groups {
            let d = cs.iter().map(|x| x.0).max().unwrap_or(0);
            let mut v = vec![BigRat::zero(); d + 1];
            for (e, c) in cs {
                v[e] = c;
            }
            let coeff = RatFuncT::from_poly(UPoly::from_coeffs(v));
            let single = MPoly::<BigRat>::monomial(&self.vars, m, BigRat::one());
            let embedded = single.embed(target)?;
            let mono = embedded.terms[0].0.clone();
            terms.push((mono, coeff));
        }
        Ok(MPoly::from_terms(target, terms))
    }
}

impl MPoly<RatFuncT> {
    /// Clears denominators in `t` and returns a polynomial over `Q` in
    /// `target`, which must contain every variable plus `t_name`.
    pub fn clear_t(&self, target: &Arc<VarTable>, t_name: &str) -> Result<MPoly<BigRat>, PolyError> {
        let t = target.require(t_name)?;
        let mut den = UPoly::<BigRat>::one();
        for (_, c) in &self.terms {
            let g = den.gcd(c.den());
            den = den.mul(c.den()).divrem(&g).0;
        }
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let scaled = c.num().mul(&den.divrem(c.den()).0);
            let one = MPoly::<RatFuncT>::monomial(&self.vars, m.clone(), RatFuncT::one());
            let base = one.map_coeffs(|_| BigRat::one()).embed(target)?;
            let bm = base.terms[0].0.clone();
            for (k, cc) in scaled.coeffs().iter().enumerate() {
                if cc.is_zero() {
                    continue;
                }
                let mut mm = bm.clone();
                mm.set_exp(t, k as u16);
                terms.push((mm, cc.clone()));
            }
        }
        Ok(MPoly::from_terms(target, terms))
    }
}



impl<F: Field> fmt::Display for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<F: Field> fmt::Debug for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{}]({})", self.vars.names().join(","), self.to_text())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:expr) => {
        impl<'a, F: Field> std::ops::$tr<&'a MPoly<F>> for &'a MPoly<F> {
            type Output = MPoly<F>;
            /// Panics when the operands use different variable tables; use
            /// [`MPoly::try_arith`] for a fallible version.
            fn $m(self, rhs: &'a MPoly<F>) -> MPoly<F> {
                self.try_arith(rhs, $op).expect("variable table mismatch")
            }
        }
        impl<F: Field> std::ops::$tr<MPoly<F>> for MPoly<F> {
            type Output = MPoly<F>;
            fn $m(self, rhs: MPoly<F>) -> MPoly<F> {
                self.try_arith(&rhs, $op).expect("variable table mismatch")
            }
        }
    };
}

binop!(Add, add, ArithOp::Add);
binop!(Sub, sub, ArithOp::Sub);
binop!(Mul, mul, ArithOp::Mul);

impl<F: Field> std::ops::Neg for &MPoly<F> {
    type Output = MPoly<F>;
    fn neg(self) -> MPoly<F> {
        MPoly::neg(self)
    }
}
