//! Series solutions of DDE systems and evaluation of polynomials at series.

use std::collections::HashMap;

use crate::ddefront::{Analysis, DDESystem, NumeratorSystem};
use crate::exactpoly::{BigRat, Field, MPoly, Monomial, UPoly};

use super::series::{TruncBiSeries, TruncTSeries};
use super::SeriesError;

/// A value substituted for a polynomial variable.
#[derive(Clone, Debug)]
pub enum Binding {
    Bi(TruncBiSeries),
    T(TruncTSeries),
}

impl Binding {
    fn to_bi(&self, n: usize) -> Result<TruncBiSeries, SeriesError> {
        let s = match self {
            Binding::Bi(b) => b.clone(),
            Binding::T(t) => t.to_bi()?,
        };
        if s.order() < n {
            return Err(SeriesError::OrderMismatch(n, s.order()));
        }
        Ok(s.truncate(n))
    }
}

/// Splits `c t^q u^r M` terms by the part `M` free of `t` and `u`; each group
/// holds its `t^q u^r` multiplier as `(q, u-polynomial)` pairs.
fn group_terms(p: &MPoly<BigRat>, t: Option<usize>, u: Option<usize>) -> Vec<(Monomial, Vec<(usize, UPoly<BigRat>)>)> {
    let mut groups: HashMap<Monomial, HashMap<usize, UPoly<BigRat>>> = HashMap::new();
    let mut order: Vec<Monomial> = Vec::new();
    for (m, c) in p.terms() {
        let mut rest = m.clone();
        let q = t.map_or(0, |i| {
            let e = m.exp(i);
            rest.set_exp(i, 0);
            e as usize
        });
        let r = u.map_or(0, |i| {
            let e = m.exp(i);
            rest.set_exp(i, 0);
            e as usize
        });
        if !groups.contains_key(&rest) {
            order.push(rest.clone());
        }
        let slot = groups.entry(rest).or_default().entry(q).or_insert_with(UPoly::zero);
        *slot = slot.add(&UPoly::monomial(c.clone(), r));
    }
    order
        .into_iter()
        .map(|m| {
            let mut v: Vec<(usize, UPoly<BigRat>)> = groups.remove(&m).unwrap().into_iter().collect();
            v.sort_by_key(|(q, _)| *q);
            (m, v)
        })
        .collect()
}

fn apply_multiplier(m: &TruncBiSeries, mult: &[(usize, UPoly<BigRat>)], acc: &mut [UPoly<BigRat>]) {
    let n = acc.len();
    for (q, c) in mult {
        for j in *q..n {
            let v = m.coeff(j - q);
            if !v.is_zero() {
                acc[j] = acc[j].add(&v.mul(c));
            }
        }
    }
}

/// Evaluation with bindings given by variable index; `t` and `u` stay formal.
pub(crate) fn eval_indexed(
    p: &MPoly<BigRat>,
    t: Option<usize>,
    u: Option<usize>,
    bind: &[Option<TruncBiSeries>],
    n: usize,
) -> Result<TruncBiSeries, SeriesError> {
    let mut powers: HashMap<(usize, u16), TruncBiSeries> = HashMap::new();
    let mut acc = vec![UPoly::zero(); n];
    for (m, mult) in group_terms(p, t, u) {
        let mut prod = TruncBiSeries::constant(n, UPoly::one());
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let Some(base) = bind.get(i).and_then(Option::as_ref) else {
                return Err(SeriesError::UnboundVariable(p.vars().name(i).to_string()));
            };
            if !powers.contains_key(&(i, e)) {
                let mut pw = base.clone();
                for _ in 1..e {
                    pw = pw.mul(base)?;
                }
                powers.insert((i, e), pw);
            }
            prod = prod.mul(&powers[&(i, e)])?;
        }
        apply_multiplier(&prod, &mult, &mut acc);
    }
    Ok(TruncBiSeries::from_coeffs(n, acc))
}

/// Truncated evaluation of `p` with every variable other than `t` and `u`
/// bound by name.
pub fn eval_at_series(p: &MPoly<BigRat>, bind: &HashMap<String, Binding>, n: usize) -> Result<TruncBiSeries, SeriesError> {
    let vars = p.vars();
    let t = vars.index_of("t");
    let u = vars.index_of("u");
    let mut by_index = vec![None; vars.len()];
    for (i, name) in vars.names().iter().enumerate() {
        if Some(i) == t || Some(i) == u {
            continue;
        }
        if let Some(b) = bind.get(name) {
            by_index[i] = Some(b.to_bi(n)?);
        }
    }
    eval_indexed(p, t, u, &by_index, n)
}

/// `specialize` as a free function: `d^j/du^j` of `s` at `u = a`.
pub fn specialize(s: &TruncBiSeries, a: &BigRat, j: usize) -> TruncTSeries {
    s.specialize(a, j)
}

/// Name bindings `x_i -> F_i`, `z_{k(i-1)+l} -> d^l F_i/du^l (a)`.
pub fn solution_bindings(an: &Analysis, sol: &[TruncBiSeries]) -> HashMap<String, Binding> {
    let mut map = HashMap::new();
    let k = an.k as usize;
    for (i, f) in sol.iter().enumerate() {
        map.insert(format!("x{}", i + 1), Binding::Bi(f.clone()));
        for l in 0..k {
            map.insert(format!("z{}", k * i + l), Binding::T(f.specialize(&an.a, l)));
        }
    }
    map
}

fn lin_power(a: &BigRat, e: u32) -> UPoly<BigRat> {
    UPoly::from_coeffs(vec![a.neg(), BigRat::one()]).pow(e)
}

fn divide_lin(c: &UPoly<BigRat>, a: &BigRat, e: u32, who: &str, j: usize) -> Result<UPoly<BigRat>, SeriesError> {
    if e == 0 {
        return Ok(c.clone());
    }
    let (q, r) = c.divrem(&lin_power(a, e));
    if !r.is_zero() {
        return Err(SeriesError::Malformed {
            unknown: who.to_string(),
            msg: format!("coefficient of t^{j} is not divisible by (u - a)^{e}"),
        });
    }
    Ok(q)
}

struct Node {
    parent: Option<usize>,
    var: usize,
    cache: Vec<UPoly<BigRat>>,
}

/// Online evaluation: coefficient `j` of every product is computed once, from
/// coefficients `<= j` of its factors.
struct Online<'a> {
    an: &'a Analysis,
    f: Vec<Vec<UPoly<BigRat>>>,
    z: Vec<Vec<BigRat>>,
    nodes: Vec<Node>,
    index: HashMap<Monomial, usize>,
}

impl<'a> Online<'a> {
    fn new(an: &'a Analysis) -> Self {
        Online {
            an,
            f: vec![Vec::new(); an.n],
            z: vec![Vec::new(); an.nz()],
            nodes: vec![Node {
                parent: None,
                var: 0,
                cache: Vec::new(),
            }],
            index: HashMap::new(),
        }
    }

    fn node_for(&mut self, m: &Monomial) -> usize {
        if m.is_one() {
            return 0;
        }
        if let Some(&id) = self.index.get(m) {
            return id;
        }
        let var = m.exps().iter().position(|&e| e > 0).expect("not one");
        let mut rest = m.clone();
        rest.set_exp(var, m.exp(var) - 1);
        let parent = self.node_for(&rest);
        self.nodes.push(Node {
            parent: Some(parent),
            var,
            cache: Vec::new(),
        });
        let id = self.nodes.len() - 1;
        self.index.insert(m.clone(), id);
        id
    }

    fn leaf(&self, var: usize, j: usize) -> UPoly<BigRat> {
        let an = self.an;
        if var >= an.x(0) && var < an.x(an.n) {
            self.f[var - an.x(0)][j].clone()
        } else {
            UPoly::constant(self.z[var - an.z(0)][j].clone())
        }
    }

    fn get(&mut self, id: usize, j: usize) -> UPoly<BigRat> {
        while self.nodes[id].cache.len() <= j {
            let jj = self.nodes[id].cache.len();
            let value = match self.nodes[id].parent {
                None => {
                    if jj == 0 {
                        UPoly::one()
                    } else {
                        UPoly::zero()
                    }
                }
                Some(p) => {
                    let var = self.nodes[id].var;
                    let mut acc = UPoly::zero();
                    for l in 0..=jj {
                        let a = self.get(p, l);
                        if a.is_zero() {
                            continue;
                        }
                        let b = self.leaf(var, jj - l);
                        if !b.is_zero() {
                            acc = acc.add(&a.mul(&b));
                        }
                    }
                    acc
                }
            };
            self.nodes[id].cache.push(value);
        }
        self.nodes[id].cache[j].clone()
    }
}

/// The unique series solution of an analyzed system, modulo `t^n`.
pub fn solve_analysis(an: &Analysis, n: usize, names: &[String]) -> Result<Vec<TruncBiSeries>, SeriesError> {
    if n == 0 {
        return Err(SeriesError::BadOrder);
    }
    if let Some(p) = an.unbound.first() {
        return Err(SeriesError::UnboundVariable(p.clone()));
    }
    let mut on = Online::new(an);
    let groups: Vec<Vec<(usize, Vec<(usize, UPoly<BigRat>)>)>> = an
        .rhs
        .iter()
        .map(|r| {
            group_terms(&r.num, Some(an.t()), Some(an.u()))
                .into_iter()
                .map(|(m, mult)| (on.node_for(&m), mult))
                .collect()
        })
        .collect();
    let k = an.k as usize;
    for j in 0..n {
        for &i in &an.topo {
            let mut acc = UPoly::zero();
            for (id, mult) in &groups[i] {
                for (q, c) in mult {
                    if *q > j {
                        break;
                    }
                    let v = on.get(*id, j - q);
                    if !v.is_zero() {
                        acc = acc.add(&v.mul(c));
                    }
                }
            }
            let fi = divide_lin(&acc, &an.a, an.rhs[i].den_exp, &names[i], j)?;
            let mut d = fi.clone();
            for l in 0..k {
                on.z[k * i + l].push(d.eval(&an.a));
                d = d.derivative();
            }
            on.f[i].push(fi);
        }
    }
    Ok(on
        .f
        .into_iter()
        .map(|c| TruncBiSeries::from_coeffs(n, c))
        .collect())
}

/// The unique series solution `(F_1, ..., F_n) mod t^n`.
pub fn solve_series(sys: &DDESystem, n: usize) -> Result<Vec<TruncBiSeries>, SeriesError> {
    let an = sys.analyze()?;
    solve_analysis(&an, n, sys.unknowns())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// Every equation uses the previous iterate.
    Simultaneous,
    /// Equations are updated one at a time, in dependency order, each using
    /// the newest values.
    Sequential,
}

/// `iterations` rounds of `F <- RHS(F)` from `F = 0`, modulo `t^n`.
///
/// A sequential round fixes at least one more coefficient in `t`. A
/// simultaneous round may need up to `n` rounds per coefficient when the
/// `t`-free parts of the equations depend on each other.
pub fn fixed_point_iterate(
    an: &Analysis,
    n: usize,
    schedule: Schedule,
    iterations: usize,
) -> Result<Vec<TruncBiSeries>, SeriesError> {
    if let Some(p) = an.unbound.first() {
        return Err(SeriesError::UnboundVariable(p.clone()));
    }
    let mut cur = vec![TruncBiSeries::zero(n); an.n];
    for _ in 0..iterations {
        let prev = cur.clone();
        for &i in &an.topo {
            let src = match schedule {
                Schedule::Simultaneous => &prev,
                Schedule::Sequential => &cur,
            };
            let bind = index_bindings(an, src);
            let num = eval_indexed(&an.rhs[i].num, Some(an.t()), Some(an.u()), &bind, n)?;
            let coeffs = num
                .coeffs()
                .iter()
                .enumerate()
                .map(|(j, c)| divide_lin(c, &an.a, an.rhs[i].den_exp, &format!("x{}", i + 1), j))
                .collect::<Result<Vec<_>, _>>()?;
            cur[i] = TruncBiSeries::from_coeffs(n, coeffs);
        }
    }
    Ok(cur)
}

fn index_bindings(an: &Analysis, sol: &[TruncBiSeries]) -> Vec<Option<TruncBiSeries>> {
    let mut bind = vec![None; an.vars.len()];
    let k = an.k as usize;
    for (i, f) in sol.iter().enumerate() {
        bind[an.x(i)] = Some(f.clone());
        for l in 0..k {
            bind[an.z(k * i + l)] = Some(f.specialize(&an.a, l).to_bi().expect("unramified"));
        }
    }
    bind
}

/// `E_i` evaluated at the given series; all zero for the true solution.
pub fn residuals(ns: &NumeratorSystem, sol: &[TruncBiSeries]) -> Result<Vec<TruncBiSeries>, SeriesError> {
    let an = ns.analysis();
    let n = sol.first().map_or(0, TruncBiSeries::order);
    let bind = index_bindings(&an, sol);
    ns.e.iter()
        .map(|e| eval_indexed(e, Some(an.t()), Some(an.u()), &bind, n))
        .collect()
}
