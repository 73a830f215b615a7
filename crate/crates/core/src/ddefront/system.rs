//! Parsed systems and their translation into polynomial form.

use std::sync::Arc;


use crate::exactpoly::{exact_div, BigRat, Field, MPoly, VarTable};

use super::ast::{decl_rational, print_expr, Expr, Names};
use super::DdeError;

const RESERVED: &[&str] = &["t", "D", "system", "unknowns", "catalytic", "point", "param", "order", "m", "w"];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Declarations {
    pub unknowns: Vec<String>,
    pub catalytic: Option<String>,
    pub point: Option<(String, BigRat)>,
    pub params: Vec<(String, Option<BigRat>)>,
    pub order: Option<u32>,
}

fn internal_name(s: &str) -> bool {
    let rest = s.strip_prefix('x').or_else(|| s.strip_prefix('z'));
    matches!(rest, Some(r) if !r.is_empty() && r.chars().all(|c| c.is_ascii_digit())) || s == "u"
}

impl Declarations {
    pub fn validate(&self) -> Result<(), DdeError> {
        if self.unknowns.is_empty() {
            return Err(DdeError::BadDeclaration("no unknowns declared".into()));
        }
        if self.point.is_none() {
            return Err(DdeError::MissingPoint);
        }
        let mut names: Vec<&str> = self.unknowns.iter().map(String::as_str).collect();
        names.push(self.catalytic_name());
        names.push(&self.point.as_ref().unwrap().0);
        for (p, _) in &self.params {
            if internal_name(p) {
                return Err(DdeError::BadDeclaration(format!("parameter name `{p}` is reserved")));
            }
            names.push(p);
        }
        let mut seen = std::collections::HashSet::new();
        for n in names {
            if RESERVED.contains(&n) {
                return Err(DdeError::BadDeclaration(format!("`{n}` is reserved")));
            }
            if !seen.insert(n) {
                return Err(DdeError::BadDeclaration(format!("`{n}` declared twice")));
            }
        }
        Ok(())
    }

    pub fn catalytic_name(&self) -> &str {
        self.catalytic.as_deref().unwrap_or("u")
    }
}

/// A system `F_i = RHS_i` as written, with its declarations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DDESystem {
    decl: Declarations,
    equations: Vec<Expr>,
}

/// `num / (u - a)^den_exp` with `num` not divisible by `u - a` when
/// `den_exp > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct RhsFrac {
    pub num: MPoly<BigRat>,
    pub den_exp: u32,
}

/// Polynomial view of a system for a fixed order `k`.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub vars: Arc<VarTable>,
    pub n: usize,
    pub k: u32,
    pub a: BigRat,
    pub rhs: Vec<RhsFrac>,
    /// Equations ordered so that t-free dependencies come first.
    pub topo: Vec<usize>,
    pub unbound: Vec<String>,
}

impl Analysis {
    pub fn t(&self) -> usize {
        0
    }

    pub fn u(&self) -> usize {
        1
    }

    /// Index of `x_{i+1}` for the 0-based unknown `i`.
    pub fn x(&self, i: usize) -> usize {
        2 + i
    }

    /// Index of `z_j`.
    pub fn z(&self, j: usize) -> usize {
        2 + self.n + j
    }

    pub fn nz(&self) -> usize {
        self.n * self.k as usize
    }
}

/// Variable table `t, u, x1..xn, z0..z_{nk-1}` followed by `extra`.
pub fn system_vars(n: usize, k: u32, extra: &[String]) -> Result<Arc<VarTable>, DdeError> {
    let mut names: Vec<String> = vec!["t".into(), "u".into()];
    names.extend((1..=n).map(|i| format!("x{i}")));
    names.extend((0..n * k as usize).map(|j| format!("z{j}")));
    names.extend(extra.iter().cloned());
    Ok(VarTable::new(&names)?)
}

impl DDESystem {
    pub fn new(decl: Declarations, equations: Vec<Expr>) -> Result<Self, DdeError> {
        decl.validate()?;
        if equations.len() != decl.unknowns.len() {
            return Err(DdeError::BadDeclaration("one equation per unknown is required".into()));
        }
        if let Some(k) = decl.order {
            let used = equations.iter().map(Expr::max_delta).max().unwrap_or(0);
            if used > k {
                return Err(DdeError::DeltaOrder { j: used, k });
            }
        }
        Ok(DDESystem {
            decl,
            equations: equations.into_iter().map(Expr::fold).collect(),
        })
    }

    pub fn declarations(&self) -> &Declarations {
        &self.decl
    }

    pub fn equations(&self) -> &[Expr] {
        &self.equations
    }

    pub fn n(&self) -> usize {
        self.decl.unknowns.len()
    }

    pub fn unknowns(&self) -> &[String] {
        &self.decl.unknowns
    }

    pub fn a(&self) -> &BigRat {
        &self.decl.point.as_ref().expect("validated").1
    }

    pub fn params(&self) -> &[(String, Option<BigRat>)] {
        &self.decl.params
    }

    /// Binds (or rebinds) a parameter.
    pub fn with_param(&self, name: &str, value: BigRat) -> Result<Self, DdeError> {
        let mut s = self.clone();
        let Some(slot) = s.decl.params.iter_mut().find(|(p, _)| p == name) else {
            return Err(DdeError::BadDeclaration(format!("no parameter `{name}`")));
        };
        slot.1 = Some(value);
        Ok(s)
    }

    /// Same system with an explicit order override.
    pub fn with_order(&self, k: u32) -> Result<Self, DdeError> {
        let mut d = self.decl.clone();
        d.order = Some(k);
        DDESystem::new(d, self.equations.clone())
    }

    pub(crate) fn from_parts(decl: Declarations, equations: Vec<Expr>) -> Result<Self, DdeError> {
        DDESystem::new(decl, equations)
    }

    fn names(&self) -> (Vec<String>, &str, &str) {
        let params = self.decl.params.iter().map(|(p, _)| p.clone()).collect();
        (params, self.decl.catalytic_name(), &self.decl.point.as_ref().unwrap().0)
    }

    /// Canonical DSL text; parsing it gives back an equal system.
    pub fn print(&self) -> String {
        let (params, cat, point) = self.names();
        let names = Names {
            unknowns: &self.decl.unknowns,
            params: &params,
            catalytic: cat,
            point,
        };
        let mut s = String::from("system {\n");
        s.push_str(&format!("  unknowns {};\n", self.decl.unknowns.join(", ")));
        s.push_str(&format!("  catalytic {cat};\n"));
        s.push_str(&format!("  point {point} = {};\n", decl_rational(self.a())));
        for (p, v) in &self.decl.params {
            match v {
                Some(v) => s.push_str(&format!("  param {p} = {};\n", decl_rational(v))),
                None => s.push_str(&format!("  param {p};\n")),
            }
        }
        if let Some(k) = self.decl.order {
            s.push_str(&format!("  order {k};\n"));
        }
        for (u, e) in self.decl.unknowns.iter().zip(&self.equations) {
            s.push_str(&format!("  {u} = {};\n", print_expr(e, &names)));
        }
        s.push_str("}\n");
        s
    }

    /// The same system with `u` translated so that the point becomes 0.
    pub fn shifted_to_zero(&self) -> Self {
        let a = self.a().clone();
        if a.is_zero() {
            return self.clone();
        }
        let mut decl = self.decl.clone();
        decl.point.as_mut().unwrap().1 = BigRat::zero();
        let with = Expr::add(Expr::U, Expr::Num(a.clone()));
        let equations = self
            .equations
            .iter()
            .map(|e| {
                e.map_leaves(&|leaf| match leaf {
                    Expr::U => Some(with.clone()),
                    Expr::Point => Some(Expr::Num(a.clone())),
                    _ => None,
                })
                .fold()
            })
            .collect();
        DDESystem { decl, equations }
    }

    /// Smallest admissible order: at least one, at least every `D` order and
    /// the declared order, and large enough for every division by `u - a`
    /// to be exact on the series.
    pub fn analyze(&self) -> Result<Analysis, DdeError> {
        let used = self.equations.iter().map(Expr::max_delta).max().unwrap_or(0);
        let k0 = used.max(1).max(self.decl.order.unwrap_or(0));
        let mut last_err = None;
        let k_max = if self.decl.order.is_some() { k0 } else { k0 + 16 };
        for k in k0..=k_max {
            match self.analyze_at(k) {
                Ok(a) => return Ok(a),
                Err(e @ DdeError::NotExact { .. }) => {
                    let needed = match &e {
                        DdeError::NotExact { den_exp, .. } => *den_exp,
                        _ => unreachable!(),
                    };
                    last_err = Some(e);
                    if k >= needed {
                        break;
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Err(last_err.expect("at least one attempt"))
    }

    /// Analysis for a fixed order `k`.
    pub fn analyze_at(&self, k: u32) -> Result<Analysis, DdeError> {
        let n = self.n();
        let unbound: Vec<String> = self
            .decl
            .params
            .iter()
            .filter(|(_, v)| v.is_none())
            .map(|(p, _)| p.clone())
            .collect();
        let vars = system_vars(n, k, &unbound)?;
        let a = self.a().clone();
        let ctx = EvalCtx {
            vars: &vars,
            n,
            k,
            a: &a,
            decl: &self.decl,
        };
        let mut rhs = Vec::with_capacity(n);
        for (i, e) in self.equations.iter().enumerate() {
            let r = ctx.eval(e, &self.decl.unknowns[i])?;
            let r = strip(&ctx, r);
            check_exact(&ctx, &r, &self.decl.unknowns[i])?;
            rhs.push(r);
        }
        let mut an = Analysis {
            vars,
            n,
            k,
            a,
            rhs,
            topo: Vec::new(),
            unbound,
        };
        an.topo = t_free_order(&an, &self.decl.unknowns)?;
        Ok(an)
    }
}

struct EvalCtx<'a> {
    vars: &'a Arc<VarTable>,
    n: usize,
    k: u32,
    a: &'a BigRat,
    decl: &'a Declarations,
}

impl EvalCtx<'_> {
    fn constant(&self, c: BigRat) -> MPoly<BigRat> {
        MPoly::constant(self.vars, c)
    }

    /// `u - a`.
    fn lin(&self) -> MPoly<BigRat> {
        &MPoly::var_idx(self.vars, 1) - &self.constant(self.a.clone())
    }

    fn x(&self, i: usize) -> MPoly<BigRat> {
        MPoly::var_idx(self.vars, 2 + i)
    }

    fn z(&self, j: usize) -> MPoly<BigRat> {
        MPoly::var_idx(self.vars, 2 + self.n + j)
    }

    fn frac(&self, num: MPoly<BigRat>, den_exp: u32) -> RhsFrac {
        RhsFrac { num, den_exp }
    }

    fn eval(&self, e: &Expr, who: &str) -> Result<RhsFrac, DdeError> {
        use Expr::*;
        Ok(match e {
            Num(v) => self.frac(self.constant(v.clone()), 0),
            T => self.frac(MPoly::var_idx(self.vars, 0), 0),
            U => self.frac(MPoly::var_idx(self.vars, 1), 0),
            Point => self.frac(self.constant(self.a.clone()), 0),
            Param(i) => {
                let (name, v) = &self.decl.params[*i];
                match v {
                    Some(v) => self.frac(self.constant(v.clone()), 0),
                    None => self.frac(MPoly::var(self.vars, name)?, 0),
                }
            }
            Unknown(i) => self.frac(self.x(*i), 0),
            Spec(i) => self.frac(self.z(self.k as usize * i), 0),
            Delta { order, unknown } => {
                let (num, e) = delta_numerator(self, *unknown, *order)?;
                self.frac(num, e)
            }
            Neg(x) => {
                let r = self.eval(x, who)?;
                self.frac(r.num.neg(), r.den_exp)
            }
            Add(x, y) => self.combine(x, y, who, false)?,
            Sub(x, y) => self.combine(x, y, who, true)?,
            Mul(x, y) => {
                let (p, q) = (self.eval(x, who)?, self.eval(y, who)?);
                strip(self, self.frac(&p.num * &q.num, p.den_exp + q.den_exp))
            }
            Div(x, y) => {
                let (p, q) = (self.eval(x, who)?, self.eval(y, who)?);
                let (c, j) = self.as_lin_power(&q.num).ok_or_else(|| DdeError::Clearing {
                    unknown: who.to_string(),
                    msg: format!("denominator is not a constant times a power of ({} - {})", self.decl.catalytic_name(), self.decl.point.as_ref().unwrap().0),
                })?;
                let num = (&p.num * &self.lin().pow(q.den_exp)).scale(&c.inv());
                strip(self, self.frac(num, p.den_exp + j))
            }
            Pow(x, k) => {
                let p = self.eval(x, who)?;
                self.frac(p.num.pow(*k), p.den_exp * k)
            }
        })
    }

    fn combine(&self, x: &Expr, y: &Expr, who: &str, sub: bool) -> Result<RhsFrac, DdeError> {
        let (p, q) = (self.eval(x, who)?, self.eval(y, who)?);
        let e = p.den_exp.max(q.den_exp);
        let pn = &p.num * &self.lin().pow(e - p.den_exp);
        let qn = &q.num * &self.lin().pow(e - q.den_exp);
        let num = if sub { &pn - &qn } else { &pn + &qn };
        Ok(strip(self, self.frac(num, e)))
    }

    /// `Some((c, j))` when `p = c (u - a)^j` with `c` a nonzero constant.
    fn as_lin_power(&self, p: &MPoly<BigRat>) -> Option<(BigRat, u32)> {
        if p.is_zero() {
            return None;
        }
        if let Some(c) = p.as_constant() {
            return Some((c, 0));
        }
        if p.used_vars() != [1] {
            return None;
        }
        let up = p.to_upoly(1)?;
        let shifted = up.taylor_shift(self.a);
        let d = shifted.degree()?;
        if (0..d).any(|i| !shifted.coeff(i).is_zero()) {
            return None;
        }
        Some((shifted.coeff(d), d as u32))
    }
}

/// Cancels common factors `u - a` between numerator and denominator.
fn strip(ctx: &EvalCtx<'_>, mut r: RhsFrac) -> RhsFrac {
    if r.num.is_zero() {
        r.den_exp = 0;
        return r;
    }
    let lin = ctx.lin();
    let u = 1;
    while r.den_exp > 0 && r.num.eval_var(u, ctx.a).is_zero() {
        r.num = exact_div(&r.num, &lin).expect("u - a divides");
        r.den_exp -= 1;
    }
    r
}

/// Numerator and exponent of `D^j[F_i]` at order `k`.
fn delta_numerator(ctx: &EvalCtx<'_>, i: usize, j: u32) -> Result<(MPoly<BigRat>, u32), DdeError> {
    if j > ctx.k {
        return Err(DdeError::DeltaOrder { j, k: ctx.k });
    }
    let mut num = ctx.x(i);
    let lin = ctx.lin();
    let mut fact = BigRat::one();
    for l in 0..j {
        if l > 0 {
            fact *= BigRat::from_integer(l.into());
        }
        let term = (&lin.pow(l) * &ctx.z(ctx.k as usize * i + l as usize)).scale(&fact.inv());
        num = &num - &term;
    }
    Ok((num, j))
}

/// Public form of the `Y_{i,j}` expansion: numerator over `(u - a)^j`,
/// with `i` 1-based as in the variable names.
pub fn expand_delta(vars: &Arc<VarTable>, n: usize, k: u32, a: &BigRat, i: usize, j: u32) -> Result<(MPoly<BigRat>, u32), DdeError> {
    if i == 0 || i > n {
        return Err(DdeError::BadDeclaration(format!("unknown index {i} out of range")));
    }
    let decl = Declarations::default();
    let ctx = EvalCtx { vars, n, k, a, decl: &decl };
    if j == 0 {
        return Ok((ctx.x(i - 1), 0));
    }
    delta_numerator(&ctx, i - 1, j)
}

/// Substitutes the order-k Taylor expansion with remainder `(u-a)^k w_i`
/// for every `x_i` and checks that `(u - a)^den_exp` divides the result.
fn check_exact(ctx: &EvalCtx<'_>, r: &RhsFrac, who: &str) -> Result<(), DdeError> {
    if r.den_exp == 0 {
        return Ok(());
    }
    let ws: Vec<String> = (1..=ctx.n).map(|i| format!("w{i}")).collect();
    let ext = ctx.vars.extended(&ws)?;
    let num = r.num.embed(&ext)?;
    let lin = &MPoly::var_idx(&ext, 1) - &MPoly::constant(&ext, ctx.a.clone());
    let mut subs = Vec::with_capacity(ctx.n);
    for i in 0..ctx.n {
        let mut taylor = &lin.pow(ctx.k) * &MPoly::var_idx(&ext, ctx.vars.len() + i);
        let mut fact = BigRat::one();
        for l in 0..ctx.k {
            if l > 0 {
                fact *= BigRat::from_integer(l.into());
            }
            let z = MPoly::var_idx(&ext, 2 + ctx.n + ctx.k as usize * i + l as usize);
            taylor = &taylor + &(&lin.pow(l) * &z).scale(&fact.inv());
        }
        subs.push((2 + i, taylor));
    }
    let expanded = num.substitute_many(&subs)?;
    // valuation in (u - a): shift u -> u + a and read the lowest u power
    let shifted = expanded.substitute(1, &(&MPoly::var_idx(&ext, 1) + &MPoly::constant(&ext, ctx.a.clone())))?;
    let val = shifted.terms().iter().map(|(m, _)| m.exp(1) as u32).min().unwrap_or(u32::MAX);
    if val < r.den_exp {
        return Err(DdeError::NotExact {
            unknown: who.to_string(),
            den_exp: r.den_exp,
        });
    }
    Ok(())
}

/// Topological order of the t-free dependencies between equations.
fn t_free_order(an: &Analysis, names: &[String]) -> Result<Vec<usize>, DdeError> {
    let n = an.n;
    let k = an.k as usize;
    let mut deps: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, r) in an.rhs.iter().enumerate() {
        for (m, _) in r.num.terms() {
            if m.exp(0) > 0 {
                continue;
            }
            for l in 0..n {
                let uses = m.exp(an.x(l)) > 0 || (0..k).any(|j| m.exp(an.z(k * l + j)) > 0);
                if uses && !deps[i].contains(&l) {
                    deps[i].push(l);
                }
            }
        }
        if deps[i].contains(&i) {
            return Err(DdeError::Shape {
                unknown: names[i].clone(),
                msg: "the right-hand side depends on this unknown without a factor t".into(),
            });
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut state = vec![0u8; n];
    fn visit(i: usize, deps: &[Vec<usize>], state: &mut [u8], order: &mut Vec<usize>) -> bool {
        match state[i] {
            1 => return false,
            2 => return true,
            _ => {}
        }
        state[i] = 1;
        for &d in &deps[i] {
            if !visit(d, deps, state, order) {
                return false;
            }
        }
        state[i] = 2;
        order.push(i);
        true
    }
    for i in 0..n {
        if !visit(i, &deps, &mut state, &mut order) {
            return Err(DdeError::Shape {
                unknown: names[i].clone(),
                msg: "cyclic dependence between equations without a factor t".into(),
            });
        }
    }
    Ok(order)
}

/// `u`-polynomial helper used by callers that need `(u - a)^j`.
pub fn lin_power(vars: &Arc<VarTable>, a: &BigRat, j: u32) -> MPoly<BigRat> {
    let lin = &MPoly::var_idx(vars, 1) - &MPoly::constant(vars, a.clone());
    lin.pow(j)
}
