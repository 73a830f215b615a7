//! Buchberger's algorithm over a [`Coeffs`] context on bare term lists.

use std::cmp::Ordering;
use std::time::Instant;

use crate::exactpoly::Monomial;

use super::coeffs::Coeffs;
use super::order::MonomialOrder;
use super::{BudgetKind, GbBudget, GbError};

/// Polynomial as terms sorted descending under some order, no zero
/// coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct GPoly<E> {
    pub terms: Vec<(Monomial, E)>,
}

impl<E: Clone> GPoly<E> {
    pub fn zero() -> Self {
        GPoly { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    /// Sorts arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms<C: Coeffs<E = E>>(ctx: &C, order: &MonomialOrder, mut terms: Vec<(Monomial, E)>) -> Self {
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, E)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = ctx.add(&last.1, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !ctx.is_zero(c));
        GPoly { terms: out }
    }
}

pub(crate) fn make_monic<C: Coeffs>(ctx: &C, p: &mut GPoly<C::E>) {
    if p.is_zero() {
        return;
    }
    let li = ctx.inv(&p.terms[0].1);
    if li == ctx.one() {
        return;
    }
    for t in p.terms.iter_mut() {
        t.1 = ctx.mul(&t.1, &li);
    }
}

/// `a - c * q * b` by merging; `q * b` keeps the order of `b`.
fn sub_scaled<C: Coeffs>(
    ctx: &C,
    order: &MonomialOrder,
    a: &[(Monomial, C::E)],
    c: &C::E,
    q: &Monomial,
    b: &[(Monomial, C::E)],
) -> Vec<(Monomial, C::E)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut bi = b.iter().map(|(m, e)| (m.mul(q), e)).peekable();
    while i < a.len() || bi.peek().is_some() {
        let ord = match (a.get(i), bi.peek()) {
            (Some(x), Some(y)) => order.cmp(&x.0, &y.0),
            (Some(_), None) => Ordering::Greater,
            _ => Ordering::Less,
        };
        match ord {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let (m, e) = bi.next().unwrap();
                out.push((m, ctx.neg(&ctx.mul(c, e))));
            }
            Ordering::Equal => {
                let (m, e) = bi.next().unwrap();
                let v = ctx.sub(&a[i].1, &ctx.mul(c, e));
                if !ctx.is_zero(&v) {
                    out.push((m, v));
                }
                i += 1;
            }
        }
    }
    out
}

/// Reducer view: monic polynomial plus its leading monomial data.
pub(crate) struct Reducer<'a, E> {
    pub poly: &'a GPoly<E>,
    pub mask: u64,
}

fn find_reducer<'a, E: Clone>(reducers: &'a [Reducer<'a, E>], m: &Monomial, mask: u64) -> Option<&'a Reducer<'a, E>> {
    reducers
        .iter()
        .find(|r| r.mask & !mask == 0 && r.poly.lm().divides(m))
}

/// Normal form modulo monic reducers. With `full = false` only the leading
/// term is reduced away.
pub(crate) fn normal_form<C: Coeffs>(
    ctx: &C,
    order: &MonomialOrder,
    p: GPoly<C::E>,
    reducers: &[Reducer<'_, C::E>],
    full: bool,
    deadline: Deadline,
) -> Result<GPoly<C::E>, GbError> {
    let mut done: Vec<(Monomial, C::E)> = Vec::new();
    let mut rem = p.terms;
    let mut start = 0;
    let mut steps = 0u64;
    while start < rem.len() {
        steps += 1;
        if steps % 4096 == 0 {
            check_deadline(deadline)?;
        }
        let (m, c) = &rem[start];
        let mask = m.support_mask();
        match find_reducer(reducers, m, mask) {
            Some(r) => {
                let q = m.div(r.poly.lm()).expect("divisible");
                let c = c.clone();
                rem = sub_scaled(ctx, order, &rem[start..], &c, &q, &r.poly.terms);
                start = 0;
            }
            None => {
                if !full {
                    break;
                }
                done.push(rem[start].clone());
                start += 1;
            }
        }
    }
    done.extend(rem.drain(start..));
    Ok(GPoly { terms: done })
}

pub(crate) type Deadline = Option<(Instant, f64)>;

fn check_deadline(deadline: Deadline) -> Result<(), GbError> {
    if let Some((d, secs)) = deadline {
        if Instant::now() > d {
            return Err(GbError::Budget {
                kind: BudgetKind::Seconds,
                limit: secs.ceil() as u64,
            });
        }
    }
    Ok(())
}

struct Entry<E> {
    poly: GPoly<E>,
    mask: u64,
    sugar: u32,
    active: bool,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    deg: u32,
    sugar: u32,
}

/// Reduced Gröbner basis of `gens` (already sorted under `order`), monic,
/// sorted ascending by leading monomial.
pub fn groebner<C: Coeffs>(
    ctx: &C,
    order: &MonomialOrder,
    gens: Vec<GPoly<C::E>>,
    budget: &GbBudget,
) -> Result<Vec<GPoly<C::E>>, GbError> {
    let deadline = budget.max_seconds.map(|s| (Instant::now() + std::time::Duration::from_secs_f64(s), s));
    let mut gens: Vec<GPoly<C::E>> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    gens.sort_by(|a, b| order.cmp(a.lm(), b.lm()));

    let mut basis: Vec<Entry<C::E>> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut processed = 0usize;

    for g in gens {
        let sugar = g.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0);
        let h = reduce_against(ctx, order, g, &basis, deadline)?;
        if h.is_zero() {
            continue;
        }
        if h.lm().is_one() {
            return Ok(vec![unit(ctx, h.lm().nvars())]);
        }
        insert(ctx, h, sugar, &mut basis, &mut pairs, budget)?;
    }

    while !pairs.is_empty() {
        check_deadline(deadline)?;
        let k = select(order, &pairs);
        let pair = pairs.swap_remove(k);
        processed += 1;
        if let Some(max) = budget.max_pairs {
            if processed > max {
                return Err(GbError::Budget {
                    kind: BudgetKind::Pairs,
                    limit: max as u64,
                });
            }
        }
        if let Some(max) = budget.max_degree {
            if pair.deg > max {
                return Err(GbError::Budget {
                    kind: BudgetKind::Degree,
                    limit: max as u64,
                });
            }
        }
        let s = spoly(ctx, order, &basis[pair.i].poly, &basis[pair.j].poly, &pair.lcm);
        let h = reduce_against(ctx, order, s, &basis, deadline)?;
        if h.is_zero() {
            continue;
        }
        if h.lm().is_one() {
            return Ok(vec![unit(ctx, h.lm().nvars())]);
        }
        insert(ctx, h, pair.sugar, &mut basis, &mut pairs, budget)?;
    }

    let active: Vec<GPoly<C::E>> = basis.into_iter().filter(|e| e.active).map(|e| e.poly).collect();
    interreduce(ctx, order, active, deadline)
}

fn unit<C: Coeffs>(ctx: &C, nvars: usize) -> GPoly<C::E> {
    GPoly {
        terms: vec![(Monomial::one(nvars), ctx.one())],
    }
}

fn reduce_against<C: Coeffs>(
    ctx: &C,
    order: &MonomialOrder,
    p: GPoly<C::E>,
    basis: &[Entry<C::E>],
    deadline: Deadline,
) -> Result<GPoly<C::E>, GbError> {
    let reducers: Vec<Reducer<'_, C::E>> = basis
        .iter()
        .filter(|e| e.active)
        .map(|e| Reducer {
            poly: &e.poly,
            mask: e.mask,
        })
        .collect();
    let mut h = normal_form(ctx, order, p, &reducers, true, deadline)?;
    make_monic(ctx, &mut h);
    Ok(h)
}

fn spoly<C: Coeffs>(ctx: &C, order: &MonomialOrder, f: &GPoly<C::E>, g: &GPoly<C::E>, lcm: &Monomial) -> GPoly<C::E> {
    let qf = lcm.div(f.lm()).expect("lcm");
    let qg = lcm.div(g.lm()).expect("lcm");
    // both monic: S = qf*f - qg*g; the leading terms cancel
    let a: Vec<(Monomial, C::E)> = f.terms[1..].iter().map(|(m, c)| (m.mul(&qf), c.clone())).collect();
    GPoly {
        terms: sub_scaled(ctx, order, &a, &ctx.one(), &qg, &g.terms[1..]),
    }
}

fn select(order: &MonomialOrder, pairs: &[Pair]) -> usize {
    let mut best = 0;
    for k in 1..pairs.len() {
        let (a, b) = (&pairs[k], &pairs[best]);
        let o = a
            .deg
            .cmp(&b.deg)
            .then(a.sugar.cmp(&b.sugar))
            .then_with(|| order.cmp(&a.lcm, &b.lcm))
            .then((a.j, a.i).cmp(&(b.j, b.i)));
        if o == Ordering::Less {
            best = k;
        }
    }
    best
}

/// Adds `h` to the basis with the Gebauer-Möller update.
fn insert<C: Coeffs>(
    _ctx: &C,
    h: GPoly<C::E>,
    sugar: u32,
    basis: &mut Vec<Entry<C::E>>,
    pairs: &mut Vec<Pair>,
    budget: &GbBudget,
) -> Result<(), GbError> {
    let hn = basis.len();
    let hlm = h.lm().clone();

    // candidate new pairs (h, g)
    let mut cand: Vec<(usize, Monomial)> = basis
        .iter()
        .enumerate()
        .filter(|(_, e)| e.active)
        .map(|(i, e)| (i, hlm.lcm(e.poly.lm())))
        .collect();
    let mut kept: Vec<(usize, Monomial)> = Vec::new();
    while let Some((g1, l1)) = cand.pop() {
        let coprime = hlm.is_coprime(basis[g1].poly.lm());
        if coprime || (!cand.iter().any(|(_, l2)| l2.divides(&l1)) && !kept.iter().any(|(_, l2)| l2.divides(&l1))) {
            kept.push((g1, l1));
        }
    }
    kept.retain(|(g, _)| !hlm.is_coprime(basis[*g].poly.lm()));

    // old pairs made redundant by h
    pairs.retain(|p| {
        !(hlm.divides(&p.lcm)
            && hlm.lcm(basis[p.i].poly.lm()) != p.lcm
            && hlm.lcm(basis[p.j].poly.lm()) != p.lcm)
    });

    for e in basis.iter_mut() {
        if e.active && hlm.divides(e.poly.lm()) {
            e.active = false;
        }
    }

    let hdeg = hlm.degree();
    for (g, l) in kept {
        let d = l.degree();
        let ge = &basis[g];
        let s = (sugar + d - hdeg).max(ge.sugar + d - ge.poly.lm().degree());
        pairs.push(Pair {
            i: g,
            j: hn,
            lcm: l,
            deg: d,
            sugar: s,
        });
    }
    basis.push(Entry {
        mask: hlm.support_mask(),
        poly: h,
        sugar,
        active: true,
    });
    if let Some(max) = budget.max_basis {
        let n = basis.iter().filter(|e| e.active).count();
        if n > max {
            return Err(GbError::Budget {
                kind: BudgetKind::BasisSize,
                limit: max as u64,
            });
        }
    }
    Ok(())
}

/// Turns a minimal basis into the reduced one.
fn interreduce<C: Coeffs>(
    ctx: &C,
    order: &MonomialOrder,
    mut polys: Vec<GPoly<C::E>>,
    deadline: Deadline,
) -> Result<Vec<GPoly<C::E>>, GbError> {
    polys.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    // drop anything whose leading monomial is divisible by another one
    let lms: Vec<Monomial> = polys.iter().map(|p| p.lm().clone()).collect();
    let mut keep = vec![true; polys.len()];
    for i in 0..polys.len() {
        for j in 0..polys.len() {
            if i != j && keep[j] && lms[j].divides(&lms[i]) && (lms[i] != lms[j] || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let polys: Vec<GPoly<C::E>> = polys.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect();
    let mut out = Vec::with_capacity(polys.len());
    for i in 0..polys.len() {
        let reducers: Vec<Reducer<'_, C::E>> = polys
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| Reducer {
                poly: p,
                mask: p.lm().support_mask(),
            })
            .collect();
        let head = polys[i].terms[0].clone();
        let tail = GPoly {
            terms: polys[i].terms[1..].to_vec(),
        };
        let mut r = normal_form(ctx, order, tail, &reducers, true, deadline)?;
        r.terms.insert(0, head);
        make_monic(ctx, &mut r);
        out.push(r);
    }
    Ok(out)
}

/// Full normal form of `p` modulo a Gröbner basis.
pub fn reduce<C: Coeffs>(ctx: &C, order: &MonomialOrder, p: GPoly<C::E>, basis: &[GPoly<C::E>]) -> GPoly<C::E> {
    let mut monic: Vec<GPoly<C::E>> = basis.to_vec();
    for b in monic.iter_mut() {
        make_monic(ctx, b);
    }
    let reducers: Vec<Reducer<'_, C::E>> = monic
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| Reducer {
            poly: p,
            mask: p.lm().support_mask(),
        })
        .collect();
    normal_form(ctx, order, p, &reducers, true, None).expect("no deadline")
}

/// S-polynomial of two polynomials (not necessarily monic).
pub fn s_polynomial<C: Coeffs>(ctx: &C, order: &MonomialOrder, f: &GPoly<C::E>, g: &GPoly<C::E>) -> GPoly<C::E> {
    let mut f = f.clone();
    let mut g = g.clone();
    make_monic(ctx, &mut f);
    make_monic(ctx, &mut g);
    let l = f.lm().lcm(g.lm());
    spoly(ctx, order, &f, &g, &l)
}
