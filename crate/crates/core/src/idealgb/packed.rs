//! Buchberger's algorithm over `F_p` in degrevlex, with exponent vectors
//! packed into one `u128` (up to 16 variables, exponents below 128).
//!
//! Same strategy as the generic engine: normal selection with sugar, the
//! Gebauer-Möller update, full reduction of S-polynomials.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use crate::exactpoly::Monomial;

use super::coeffs::{Coeffs, PrimeField};
use super::engine::GPoly;
use super::{BudgetKind, GbBudget, GbError};

pub const MAX_VARS: usize = 16;
const MAX_EXP: u16 = 127;
const GUARD: u128 = 0x8080_8080_8080_8080_8080_8080_8080_8080;

/// The last variable occupies the most significant byte, so among monomials
/// of equal degree the larger `bits` is the smaller monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct PMono {
    deg: u16,
    bits: u128,
}

impl Ord for PMono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.deg.cmp(&o.deg).then(o.bits.cmp(&self.bits))
    }
}

impl PartialOrd for PMono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl PMono {
    fn one() -> Self {
        PMono { deg: 0, bits: 0 }
    }

    fn shift(i: usize, nvars: usize) -> u32 {
        8 * (MAX_VARS - nvars + i) as u32
    }

    fn pack(exps: &[u16]) -> Option<Self> {
        let n = exps.len();
        let mut bits = 0u128;
        let mut deg = 0u16;
        for (i, &e) in exps.iter().enumerate() {
            if e > MAX_EXP {
                return None;
            }
            bits |= (e as u128) << Self::shift(i, n);
            deg += e;
        }
        Some(PMono { deg, bits })
    }

    fn exp(&self, i: usize, nvars: usize) -> u16 {
        ((self.bits >> Self::shift(i, nvars)) & 0xff) as u16
    }

    fn unpack(&self, nvars: usize) -> Monomial {
        let exps: Vec<u16> = (0..nvars).map(|i| self.exp(i, nvars)).collect();
        Monomial::from_exps(&exps)
    }

    fn mul(self, o: Self) -> Self {
        PMono {
            deg: self.deg + o.deg,
            bits: self.bits + o.bits,
        }
    }

    fn divides(self, o: Self) -> bool {
        self.deg <= o.deg && ((o.bits | GUARD) - self.bits) & GUARD == GUARD
    }

    fn div(self, d: Self) -> Self {
        PMono {
            deg: self.deg - d.deg,
            bits: self.bits - d.bits,
        }
    }

    fn lcm(self, o: Self) -> Self {
        let mut bits = 0u128;
        let mut deg = 0u16;
        for b in 0..MAX_VARS as u32 {
            let s = 8 * b;
            let e = ((self.bits >> s) & 0xff).max((o.bits >> s) & 0xff);
            bits |= e << s;
            deg += e as u16;
        }
        PMono { deg, bits }
    }

    fn coprime(self, o: Self) -> bool {
        for b in 0..MAX_VARS as u32 {
            let s = 8 * b;
            if (self.bits >> s) & 0xff != 0 && (o.bits >> s) & 0xff != 0 {
                return false;
            }
        }
        true
    }

    fn overflows(&self) -> bool {
        self.bits & GUARD != 0
    }
}

type Poly = Vec<(PMono, u64)>;

struct Entry {
    poly: Poly,
    sugar: u16,
    active: bool,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: PMono,
    sugar: u16,
}

struct Run<'a> {
    f: PrimeField,
    budget: &'a GbBudget,
    deadline: Option<Instant>,
    steps: u64,
}

impl Run<'_> {
    fn check(&mut self) -> Result<(), GbError> {
        self.steps += 1;
        if self.steps % 1024 == 0 {
            if let (Some(d), Some(s)) = (self.deadline, self.budget.max_seconds) {
                if Instant::now() > d {
                    return Err(GbError::Budget {
                        kind: BudgetKind::Seconds,
                        limit: s.ceil() as u64,
                    });
                }
            }
        }
        Ok(())
    }

    /// `a - c * q * b`, merging two sorted term lists.
    fn sub_scaled(&self, a: &[(PMono, u64)], c: u64, q: PMono, b: &[(PMono, u64)], out: &mut Poly) {
        out.clear();
        out.reserve(a.len() + b.len());
        let f = &self.f;
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let bm = b[j].0.mul(q);
            match a[i].0.cmp(&bm) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push((bm, f.neg(&f.mul(&c, &b[j].1))));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = f.sub(&a[i].1, &f.mul(&c, &b[j].1));
                    if v != 0 {
                        out.push((bm, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for &(m, e) in &b[j..] {
            out.push((m.mul(q), f.neg(&f.mul(&c, &e))));
        }
    }

    fn normal_form(&mut self, p: Poly, basis: &[Entry], skip: Option<usize>) -> Result<Poly, GbError> {
        let reducers: Vec<&Poly> = basis
            .iter()
            .enumerate()
            .filter(|(k, e)| e.active && Some(*k) != skip)
            .map(|(_, e)| &e.poly)
            .collect();
        let mut done: Poly = Vec::new();
        let mut rem = p;
        let mut scratch = Vec::new();
        let mut start = 0;
        while start < rem.len() {
            self.check()?;
            let (m, c) = rem[start];
            match reducers.iter().find(|r| r[0].0.divides(m)) {
                Some(r) => {
                    let q = m.div(r[0].0);
                    self.sub_scaled(&rem[start + 1..], c, q, &r[1..], &mut scratch);
                    std::mem::swap(&mut rem, &mut scratch);
                    start = 0;
                }
                None => {
                    done.push((m, c));
                    start += 1;
                }
            }
        }
        Ok(done)
    }

    fn monic(&self, p: &mut Poly) {
        if let Some(&(_, lc)) = p.first() {
            if lc != 1 {
                let inv = self.f.inv(&lc);
                for t in p.iter_mut() {
                    t.1 = self.f.mul(&t.1, &inv);
                }
            }
        }
    }
}

fn spoly(run: &Run<'_>, f: &Poly, g: &Poly, lcm: PMono) -> Poly {
    let qf = lcm.div(f[0].0);
    let qg = lcm.div(g[0].0);
    let a: Poly = f[1..].iter().map(|&(m, c)| (m.mul(qf), c)).collect();
    let mut out = Vec::new();
    run.sub_scaled(&a, 1, qg, &g[1..], &mut out);
    out
}

/// Reduced Gröbner basis in degrevlex of polynomials over `F_p` given by
/// exponent vectors. `None` when there are too many variables or an
/// exponent is too large for the packing.
pub fn groebner_packed(
    f: PrimeField,
    nvars: usize,
    gens: &[GPoly<u64>],
    budget: &GbBudget,
) -> Option<Result<Vec<GPoly<u64>>, GbError>> {
    if nvars > MAX_VARS {
        return None;
    }
    let mut packed = Vec::with_capacity(gens.len());
    for g in gens {
        let mut p: Poly = Vec::with_capacity(g.terms.len());
        for (m, c) in &g.terms {
            p.push((PMono::pack(m.exps())?, *c));
        }
        p.sort_by(|a, b| b.0.cmp(&a.0));
        packed.push(p);
    }
    let run = Run {
        f,
        budget,
        deadline: budget.max_seconds.map(|s| Instant::now() + Duration::from_secs_f64(s)),
        steps: 0,
    };
    match buchberger(run, packed) {
        Ok(Some(b)) => Some(Ok(b
            .into_iter()
            .map(|p| GPoly {
                terms: p.into_iter().map(|(m, c)| (m.unpack(nvars), c)).collect(),
            })
            .collect())),
        Ok(None) => None,
        Err(e) => Some(Err(e)),
    }
}

fn buchberger(mut run: Run<'_>, mut gens: Vec<Poly>) -> Result<Option<Vec<Poly>>, GbError> {
    gens.retain(|g| !g.is_empty());
    gens.sort_by(|a, b| a[0].0.cmp(&b[0].0));
    let mut basis: Vec<Entry> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut processed = 0usize;
    let mut queue: Vec<(Poly, u16)> = gens
        .into_iter()
        .map(|g| {
            let s = g.iter().map(|t| t.0.deg).max().unwrap_or(0);
            (g, s)
        })
        .collect();
    queue.reverse();
    loop {
        let (s, sugar) = if let Some(g) = queue.pop() {
            g
        } else if !pairs.is_empty() {
            let k = select(&pairs);
            let pair = pairs.swap_remove(k);
            processed += 1;
            if let Some(max) = run.budget.max_pairs {
                if processed > max {
                    return Err(GbError::Budget {
                        kind: BudgetKind::Pairs,
                        limit: max as u64,
                    });
                }
            }
            if let Some(max) = run.budget.max_degree {
                if pair.lcm.deg as u32 > max {
                    return Err(GbError::Budget {
                        kind: BudgetKind::Degree,
                        limit: max as u64,
                    });
                }
            }
            (spoly(&run, &basis[pair.i].poly, &basis[pair.j].poly, pair.lcm), pair.sugar)
        } else {
            break;
        };
        let mut h = run.normal_form(s, &basis, None)?;
        if h.is_empty() {
            continue;
        }
        if h.iter().any(|t| t.0.overflows()) {
            return Ok(None);
        }
        run.monic(&mut h);
        if h[0].0 == PMono::one() {
            return Ok(Some(vec![vec![(PMono::one(), 1)]]));
        }
        insert(h, sugar, &mut basis, &mut pairs, run.budget)?;
    }
    let mut active: Vec<Poly> = basis.into_iter().filter(|e| e.active).map(|e| e.poly).collect();
    active.sort_by(|a, b| a[0].0.cmp(&b[0].0));
    // reduce tails against the other (minimal) leading terms
    let entries: Vec<Entry> = active
        .into_iter()
        .map(|poly| Entry {
            poly,
            sugar: 0,
            active: true,
        })
        .collect();
    let mut out = Vec::with_capacity(entries.len());
    for (i, e) in entries.iter().enumerate() {
        let head = e.poly[0];
        let mut tail = run.normal_form(e.poly[1..].to_vec(), &entries, Some(i))?;
        tail.insert(0, head);
        out.push(tail);
    }
    Ok(Some(out))
}

fn select(pairs: &[Pair]) -> usize {
    let mut best = 0;
    for k in 1..pairs.len() {
        let (a, b) = (&pairs[k], &pairs[best]);
        let o = a
            .lcm
            .deg
            .cmp(&b.lcm.deg)
            .then(a.sugar.cmp(&b.sugar))
            .then_with(|| a.lcm.cmp(&b.lcm))
            .then((a.j, a.i).cmp(&(b.j, b.i)));
        if o == Ordering::Less {
            best = k;
        }
    }
    best
}

fn insert(h: Poly, sugar: u16, basis: &mut Vec<Entry>, pairs: &mut Vec<Pair>, budget: &GbBudget) -> Result<(), GbError> {
    let hn = basis.len();
    let hlm = h[0].0;
    let mut cand: Vec<(usize, PMono)> = basis
        .iter()
        .enumerate()
        .filter(|(_, e)| e.active)
        .map(|(i, e)| (i, hlm.lcm(e.poly[0].0)))
        .collect();
    let mut kept: Vec<(usize, PMono)> = Vec::new();
    while let Some((g1, l1)) = cand.pop() {
        let coprime = hlm.coprime(basis[g1].poly[0].0);
        if coprime || (!cand.iter().any(|(_, l2)| l2.divides(l1)) && !kept.iter().any(|(_, l2)| l2.divides(l1))) {
            kept.push((g1, l1));
        }
    }
    kept.retain(|(g, _)| !hlm.coprime(basis[*g].poly[0].0));
    pairs.retain(|p| {
        !(hlm.divides(p.lcm) && hlm.lcm(basis[p.i].poly[0].0) != p.lcm && hlm.lcm(basis[p.j].poly[0].0) != p.lcm)
    });
    for e in basis.iter_mut() {
        if e.active && hlm.divides(e.poly[0].0) {
            e.active = false;
        }
    }
    for (g, l) in kept {
        let ge = &basis[g];
        let s = (sugar + l.deg - hlm.deg).max(ge.sugar + l.deg - ge.poly[0].0.deg);
        pairs.push(Pair { i: g, j: hn, lcm: l, sugar: s });
    }
    basis.push(Entry {
        poly: h,
        sugar,
        active: true,
    });
    if let Some(max) = budget.max_basis {
        if basis.iter().filter(|e| e.active).count() > max {
            return Err(GbError::Budget {
                kind: BudgetKind::BasisSize,
                limit: max as u64,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::cmp_degrevlex;
    use crate::idealgb::{groebner, primes_below_2_31, MonomialOrder};

    #[test]
    fn packed_order_is_degrevlex() {
        let ms: Vec<Vec<u16>> = vec![vec![1, 0, 1], vec![0, 2, 0], vec![2, 0, 0], vec![0, 0, 2], vec![1, 1, 0], vec![0, 1, 1]];
        for a in &ms {
            for b in &ms {
                let (pa, pb) = (PMono::pack(a).unwrap(), PMono::pack(b).unwrap());
                let (ma, mb) = (Monomial::from_exps(a), Monomial::from_exps(b));
                assert_eq!(pa.cmp(&pb), cmp_degrevlex(&ma, &mb), "{a:?} {b:?}");
                assert_eq!(pa.divides(pb), ma.divides(&mb));
                assert_eq!(pa.lcm(pb).unpack(3), ma.lcm(&mb));
            }
        }
    }

    #[test]
    fn agrees_with_generic_engine() {
        let f = PrimeField::new(primes_below_2_31(1)[0]);
        let o = MonomialOrder::DegRevLex;
        let m = |e: &[u16]| Monomial::from_exps(e);
        let neg = |v: u64| f.neg(&v);
        // x^2 + y^2 - 1, x*y - 2, y^3 - x
        let gens = vec![
            GPoly::from_terms(&f, &o, vec![(m(&[2, 0]), 1), (m(&[0, 2]), 1), (m(&[0, 0]), neg(1))]),
            GPoly::from_terms(&f, &o, vec![(m(&[1, 1]), 1), (m(&[0, 0]), neg(2))]),
            GPoly::from_terms(&f, &o, vec![(m(&[0, 3]), 1), (m(&[1, 0]), neg(1))]),
        ];
        let a = groebner(&f, &o, gens.clone(), &GbBudget::default()).unwrap();
        let b = groebner_packed(f, 2, &gens, &GbBudget::default()).unwrap().unwrap();
        assert_eq!(a, b);
    }
}
