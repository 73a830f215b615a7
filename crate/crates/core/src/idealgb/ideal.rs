//! Ideals of `MPoly` over a static field.

use std::sync::Arc;

use crate::exactpoly::{Field, MPoly, Monomial, VarTable};

use super::coeffs::StaticField;
use super::engine::{groebner, reduce, GPoly};
use super::order::MonomialOrder;
use super::{GbBudget, GbError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisStatus {
    Raw,
    Groebner,
}

#[derive(Clone)]
pub struct Ideal<F> {
    vars: Arc<VarTable>,
    generators: Vec<MPoly<F>>,
    order: MonomialOrder,
    status: BasisStatus,
}

impl<F: Field> std::fmt::Debug for Ideal<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Ideal")
            .field("generators", &self.generators)
            .field("order", &self.order)
            .field("status", &self.status)
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dimension {
    ZeroDimensional { degree: u64 },
    PositiveDimensional { witness: Vec<String> },
}

fn to_gpoly<F: Field>(p: &MPoly<F>, order: &MonomialOrder) -> GPoly<F> {
    let ctx = StaticField::<F>::new();
    GPoly::from_terms(&ctx, order, p.terms().to_vec())
}

fn from_gpoly<F: Field>(vars: &Arc<VarTable>, g: GPoly<F>) -> MPoly<F> {
    MPoly::from_terms(vars, g.terms)
}

impl<F: Field> Ideal<F> {
    /// Raw ideal from generators. Zero generators are rejected.
    pub fn new(vars: &Arc<VarTable>, generators: Vec<MPoly<F>>, order: MonomialOrder) -> Result<Self, GbError> {
        order.validate(vars.len())?;
        for g in &generators {
            if g.is_zero() {
                return Err(GbError::ZeroGenerator);
            }
            if g.vars().names() != vars.names() {
                return Err(crate::exactpoly::PolyError::VarTableMismatch {
                    left: vars.names().join(","),
                    right: g.vars().names().join(","),
                }
                .into());
            }
        }
        Ok(Ideal {
            vars: vars.clone(),
            generators,
            order,
            status: BasisStatus::Raw,
        })
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn generators(&self) -> &[MPoly<F>] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn basis_status(&self) -> BasisStatus {
        self.status
    }

    /// Reduced Gröbner basis of this ideal under its order.
    pub fn groebner(&self, budget: &GbBudget) -> Result<Self, GbError> {
        if self.status == BasisStatus::Groebner {
            return Ok(self.clone());
        }
        let ctx = StaticField::<F>::new();
        let gens = self.generators.iter().map(|g| to_gpoly(g, &self.order)).collect();
        let basis = groebner(&ctx, &self.order, gens, budget)?;
        Ok(Ideal {
            vars: self.vars.clone(),
            generators: basis.into_iter().map(|g| from_gpoly(&self.vars, g)).collect(),
            order: self.order.clone(),
            status: BasisStatus::Groebner,
        })
    }

    /// Leading monomial of `p` under the ideal's order.
    pub fn leading_monomial(&self, p: &MPoly<F>) -> Option<Monomial> {
        p.terms().iter().map(|t| &t.0).max_by(|a, b| self.order.cmp(a, b)).cloned()
    }

    /// Normal form of `p`; requires a Gröbner basis.
    pub fn reduce(&self, p: &MPoly<F>) -> Result<MPoly<F>, GbError> {
        if self.status != BasisStatus::Groebner {
            return Err(GbError::NotGroebner);
        }
        let ctx = StaticField::<F>::new();
        let basis: Vec<GPoly<F>> = self.generators.iter().map(|g| to_gpoly(g, &self.order)).collect();
        Ok(from_gpoly(&self.vars, reduce(&ctx, &self.order, to_gpoly(p, &self.order), &basis)))
    }

    pub fn contains(&self, p: &MPoly<F>) -> Result<bool, GbError> {
        Ok(self.reduce(p)?.is_zero())
    }

    /// True for the unit ideal.
    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(|g| g.is_constant())
    }
}

pub fn buchberger<F: Field>(vars: &Arc<VarTable>, gens: Vec<MPoly<F>>, order: MonomialOrder) -> Result<Ideal<F>, GbError> {
    buchberger_with(vars, gens, order, &GbBudget::default())
}

pub fn buchberger_with<F: Field>(
    vars: &Arc<VarTable>,
    gens: Vec<MPoly<F>>,
    order: MonomialOrder,
    budget: &GbBudget,
) -> Result<Ideal<F>, GbError> {
    Ideal::new(vars, gens, order)?.groebner(budget)
}

/// Generators of `I ∩ K[keep]`: the basis elements free of the other
/// variables under a block elimination order.
pub fn eliminate<F: Field>(i: &Ideal<F>, keep: &[&str]) -> Result<Vec<MPoly<F>>, GbError> {
    eliminate_with(i, keep, &GbBudget::default())
}

pub fn eliminate_with<F: Field>(i: &Ideal<F>, keep: &[&str], budget: &GbBudget) -> Result<Vec<MPoly<F>>, GbError> {
    let keep_idx = keep.iter().map(|n| i.vars.require(n)).collect::<Result<Vec<_>, _>>()?;
    let elim: Vec<usize> = (0..i.vars.len()).filter(|v| !keep_idx.contains(v)).collect();
    if elim.is_empty() {
        return Ok(i.groebner(budget)?.generators);
    }
    let order = i.order.elimination(i.vars.len(), &elim);
    let raw = Ideal::new(&i.vars, i.generators.clone(), order)?;
    let gb = raw.groebner(budget)?;
    Ok(gb
        .generators
        .into_iter()
        .filter(|g| elim.iter().all(|&v| !g.contains_var(v)))
        .collect())
}

/// Saturation `I : g^∞` via a fresh variable `w` and `w*g - 1`. The result
/// is a reduced Gröbner basis under the ideal's order.
pub fn saturate<F: Field>(i: &Ideal<F>, g: &MPoly<F>) -> Result<Ideal<F>, GbError> {
    saturate_with(i, g, &GbBudget::default())
}

pub fn saturate_with<F: Field>(i: &Ideal<F>, g: &MPoly<F>, budget: &GbBudget) -> Result<Ideal<F>, GbError> {
    if g.is_zero() {
        return Err(GbError::ZeroGenerator);
    }
    let mut name = String::from("w");
    while i.vars.index_of(&name).is_some() {
        name.push('_');
    }
    let ext = i.vars.extended(&[name.as_str()])?;
    let w = ext.len() - 1;
    let mut gens: Vec<MPoly<F>> = i.generators.iter().map(|p| p.embed(&ext)).collect::<Result<_, _>>()?;
    let wg = &MPoly::var_idx(&ext, w) * &g.embed(&ext)?;
    gens.push(&wg - &MPoly::one(&ext));
    let order = i.order.elimination(ext.len(), &[w]);
    let gb = Ideal::new(&ext, gens, order)?.groebner(budget)?;
    let n = i.vars.len();
    let basis: Vec<MPoly<F>> = gb
        .generators
        .into_iter()
        .filter(|p| !p.contains_var(w))
        .map(|p| {
            MPoly::from_terms(
                &i.vars,
                p.into_terms()
                    .into_iter()
                    .map(|(m, c)| (Monomial::from_exps(&m.exps()[..n]), c)),
            )
        })
        .collect();
    Ok(Ideal {
        vars: i.vars.clone(),
        generators: basis,
        order: i.order.clone(),
        status: BasisStatus::Groebner,
    })
}

/// Dimension test from the leading monomials of a Gröbner basis, restricted
/// to the variables `vars`.
pub fn dimension_check<F: Field>(i: &Ideal<F>, vars: &[&str]) -> Result<Dimension, GbError> {
    if i.status != BasisStatus::Groebner {
        return Err(GbError::NotGroebner);
    }
    let idx = vars.iter().map(|n| i.vars.require(n)).collect::<Result<Vec<_>, _>>()?;
    let lms: Vec<Monomial> = i.generators.iter().filter_map(|g| i.leading_monomial(g)).collect();
    Ok(dimension_from_leading(&i.vars, &lms, &idx))
}

/// Same test on bare leading monomials.
pub fn dimension_from_leading(table: &VarTable, lms: &[Monomial], vars: &[usize]) -> Dimension {
    let within = |m: &Monomial, set: &[usize]| (0..m.nvars()).all(|v| m.exp(v) == 0 || set.contains(&v));
    let relevant: Vec<&Monomial> = lms.iter().filter(|m| within(m, vars)).collect();
    if relevant.iter().any(|m| m.is_one()) {
        return Dimension::ZeroDimensional { degree: 0 };
    }
    let mut bounds = Vec::with_capacity(vars.len());
    for &v in vars {
        let pure = relevant
            .iter()
            .filter(|m| m.exp(v) > 0 && m.degree() == m.exp(v) as u32)
            .map(|m| m.exp(v))
            .min();
        bounds.push(pure);
    }
    if bounds.iter().all(|b| b.is_some()) {
        let bounds: Vec<u16> = bounds.into_iter().map(|b| b.unwrap()).collect();
        let nvars = lms.first().map(|m| m.nvars()).unwrap_or(table.len());
        let mut exps = vec![0u16; nvars];
        let degree = count_standard(&relevant, vars, &bounds, 0, &mut exps);
        return Dimension::ZeroDimensional { degree };
    }
    let mut best = Vec::new();
    let mut cur = Vec::new();
    max_independent(&relevant, vars, 0, &mut cur, &mut best);
    Dimension::PositiveDimensional {
        witness: best.iter().map(|&v| table.name(v).to_string()).collect(),
    }
}

fn count_standard(lms: &[&Monomial], vars: &[usize], bounds: &[u16], k: usize, exps: &mut Vec<u16>) -> u64 {
    if k == vars.len() {
        return 1;
    }
    let v = vars[k];
    let mut total = 0;
    for e in 0..bounds[k] {
        exps[v] = e;
        // prune: monomials only grow in later coordinates
        let m = Monomial::from_exps(exps);
        if lms.iter().any(|l| l.divides(&m)) {
            break;
        }
        total += count_standard(lms, vars, bounds, k + 1, exps);
    }
    exps[v] = 0;
    total
}

fn max_independent(lms: &[&Monomial], vars: &[usize], k: usize, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
    if cur.len() + (vars.len() - k) <= best.len() {
        return;
    }
    if k == vars.len() {
        *best = cur.clone();
        return;
    }
    let v = vars[k];
    cur.push(v);
    let ok = !lms
        .iter()
        .any(|m| (0..m.nvars()).all(|x| m.exp(x) == 0 || cur.contains(&x)));
    if ok {
        max_independent(lms, vars, k + 1, cur, best);
    }
    cur.pop();
    max_independent(lms, vars, k + 1, cur, best);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{parse_poly, BigRat};

    fn setup(names: &[&str]) -> Arc<VarTable> {
        VarTable::new(names).unwrap()
    }

    fn polys(v: &Arc<VarTable>, s: &[&str]) -> Vec<MPoly<BigRat>> {
        s.iter().map(|x| parse_poly(x, v).unwrap()).collect()
    }

    #[test]
    fn linear_generator_wins() {
        let v = setup(&["x"]);
        let gb = buchberger(&v, polys(&v, &["x^2 - 1", "x - 1"]), MonomialOrder::Lex).unwrap();
        assert_eq!(gb.generators(), polys(&v, &["x - 1"]).as_slice());
    }

    #[test]
    fn substitution_elimination() {
        let v = setup(&["x", "z", "t"]);
        let i = Ideal::new(&v, polys(&v, &["x - t", "z - x^2"]), MonomialOrder::DegRevLex).unwrap();
        let e = eliminate(&i, &["z", "t"]).unwrap();
        let want = &polys(&v, &["z - t^2"])[0];
        assert_eq!(e.len(), 1);
        assert!(&e[0] == want || e[0].neg() == *want);
    }

    #[test]
    fn monomial_saturation() {
        let v = setup(&["x", "y"]);
        let i = Ideal::new(&v, polys(&v, &["x*y"]), MonomialOrder::DegRevLex).unwrap();
        let s = saturate(&i, &polys(&v, &["x"])[0]).unwrap();
        assert_eq!(s.generators(), polys(&v, &["y"]).as_slice());
    }

    #[test]
    fn dimension_examples() {
        let v = setup(&["x", "y"]);
        let gb = buchberger(&v, polys(&v, &["x^2", "y - 1"]), MonomialOrder::DegRevLex).unwrap();
        assert_eq!(dimension_check(&gb, &["x", "y"]).unwrap(), Dimension::ZeroDimensional { degree: 2 });
        let gb = buchberger(&v, polys(&v, &["x*y"]), MonomialOrder::DegRevLex).unwrap();
        assert!(matches!(
            dimension_check(&gb, &["x", "y"]).unwrap(),
            Dimension::PositiveDimensional { witness } if witness.len() == 1
        ));
    }
}
