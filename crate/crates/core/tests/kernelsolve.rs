use catsolve_core::catser::{puiseux_roots, rational_branches, solution_bindings, solve_series, eval_at_series, PuiseuxStatus, TruncTSeries};
use catsolve_core::ddefront::{deform, normalize, parse_dde, Epsilon, NormalMode, NumeratorSystem};
use catsolve_core::exactpoly::{cofactor_det, parse_poly, primitive_integer, primitive_part, rat_int, BigRat, MPoly};
use catsolve_core::idealgb::{buchberger, eliminate, saturate, Dimension, Ideal, MonomialOrder};
use catsolve_core::kernelsolve::*;
use num_bigint::BigInt;
use num_traits::{One, Zero};

mod common;

use common::{HARD, SCALAR, THREE, TWO_COLORS};

fn numerators(src: &str) -> NumeratorSystem {
    normalize(&parse_dde(src).unwrap(), NormalMode::Minimal).unwrap()
}

fn jacobian(ns: &NumeratorSystem) -> Vec<Vec<MPoly<BigRat>>> {
    ns.e.iter().map(|e| (0..ns.n).map(|j| e.derivative(ns.x(j))).collect()).collect()
}

/// `p(t, u, F(t, u))` as a polynomial in `u - a` with series coefficients.
fn along_solution(p: &MPoly<BigRat>, src_sys: &catsolve_core::ddefront::DDESystem, ns: &NumeratorSystem, n: usize) -> Vec<TruncTSeries> {
    let sol = solve_series(src_sys, n).unwrap();
    let bind = solution_bindings(&ns.analysis(), &sol);
    eval_at_series(p, &bind, n).unwrap().u_coefficients(&ns.a)
}

#[test]
fn det_and_p_of_two_colors() {
    let ns = numerators(TWO_COLORS);
    let det = build_det(&ns);
    let factors = parse_poly("(4*t*u^2*x1 - 4*t*u*x1 + t*u - u + 1)*(2*t*u^2*x1 - 2*t*u*x1 + t*u - u + 1)", &ns.vars).unwrap();
    assert_eq!(det, factors);
    let p = build_p(&ns);
    let p0 = parse_poly("-2*t*x1*x2 - t*x1 + t*x2 - t*z1 - x2", &ns.vars).unwrap();
    assert_eq!(p.coeff_in(ns.u(), 0), p0);
}

#[test]
fn scalar_kernel_is_the_classical_one() {
    let ns = numerators(SCALAR);
    assert_eq!(build_det(&ns), ns.e[0].derivative(ns.x(0)));
    assert_eq!(build_p(&ns), ns.e[0].derivative(ns.u()));
}

#[test]
fn three_unknowns_match_cofactor_expansion() {
    let ns = numerators(THREE);
    let mut m = jacobian(&ns);
    assert_eq!(build_det(&ns), cofactor_det(&m));
    for (row, e) in m.iter_mut().zip(&ns.e) {
        row[2] = e.derivative(ns.u());
    }
    assert_eq!(build_p(&ns), cofactor_det(&m));
}

#[test]
fn duplication_shares_t_and_z() {
    let ns = numerators(TWO_COLORS);
    let ds = duplicate(&kernel_system(&ns)).unwrap();
    assert_eq!(ds.copies, 2);
    assert_eq!(ds.sdup.len(), 8);
    let names: Vec<&str> = ds.vars.names().iter().map(String::as_str).collect();
    assert_eq!(names, ["t", "x1", "x2", "x3", "x4", "z0", "z1", "u1", "u2"]);
    // the second copy uses x3, x4 and u2 only
    for p in &ds.sdup[4..] {
        for v in ["x1", "x2", "u1"] {
            assert!(!p.contains_var(ds.vars.index_of(v).unwrap()));
        }
    }
    let sep = ds.separator();
    assert_eq!(sep, parse_poly("u1 - u2", &ds.vars).unwrap());

    let k2 = parse_dde(SCALAR).unwrap().with_order(2).unwrap();
    let ds = duplicate(&kernel_system(&normalize(&k2, NormalMode::Minimal).unwrap())).unwrap();
    assert_eq!((ds.copies, ds.sdup.len()), (2, 6));
}

#[test]
fn genericity_of_fixtures() {
    let opts = ElimOptions::default();
    let two = duplicate(&kernel_system(&numerators(TWO_COLORS))).unwrap();
    assert!(matches!(genericity_check(&two, GenericityMethod::Modular, &opts).unwrap(), Dimension::ZeroDimensional { .. }));
    let scalar = duplicate(&kernel_system(&numerators(SCALAR))).unwrap();
    assert!(matches!(
        genericity_check(&scalar, GenericityMethod::Exact, &opts).unwrap(),
        Dimension::ZeroDimensional { .. }
    ));
    let hard = duplicate(&kernel_system(&numerators(HARD))).unwrap();
    assert!(matches!(
        genericity_check(&hard, GenericityMethod::Modular, &opts).unwrap(),
        Dimension::PositiveDimensional { .. }
    ));
}

#[test]
fn deformed_det_has_separated_roots() {
    let (def, params) = deform(&parse_dde(HARD).unwrap(), Epsilon::Rational(rat_int(1))).unwrap();
    assert_eq!((params.beta, params.alpha), (4, 24));
    let ns = normalize(&def, NormalMode::DeformationReady).unwrap();
    let ks = kernel_system(&ns);
    let det = rescaled_det(&ks);
    let coeffs = along_solution(&det, &def, &ns, 12);
    let rep = puiseux_roots(&coeffs, 4).unwrap();
    assert_eq!(rep.status, PuiseuxStatus::Certified, "{rep}");
    assert_eq!(rep.total_distinct, 2, "{rep}");
    let mut leading = Vec::new();
    for g in &rep.roots {
        assert_eq!(g.valuation, rat_int(1));
        // roots of the linear leading polynomials
        assert_eq!(g.leading_minpoly.degree(), Some(1));
        let c = g.leading_minpoly.coeffs();
        leading.push(-&c[0] / &c[1]);
    }
    leading.sort();
    assert_eq!(leading, vec![rat_int(1), rat_int(2)]);
}

#[test]
fn scalar_reduction_keeps_kernel_roots() {
    let sys = parse_dde(TWO_COLORS).unwrap();
    let ns = numerators(TWO_COLORS);
    let r = reduce_to_scalar(&ns).unwrap();
    assert!(!r.contains_var(ns.x(1)));
    let n = 8;
    let det_coeffs = along_solution(&build_det(&ns), &sys, &ns, n);
    let (roots, skipped) = rational_branches(&det_coeffs, &rat_int(4), 8).unwrap();
    assert_eq!(skipped, 0);
    assert_eq!(roots.len(), 2);
    let dr = r.derivative(ns.x(0));
    let sol = solve_series(&sys, n).unwrap();
    let bind = solution_bindings(&ns.analysis(), &sol);
    let along = eval_at_series(&dr, &bind, n).unwrap();
    for root in &roots {
        let u = root.to_trunc(n).add_constant(&ns.a);
        let v = along.compose_u(&u).unwrap();
        assert!(v.coeffs()[..2].iter().all(Zero::is_zero), "{root}");
    }
}

#[test]
fn reduction_rejects_scalar_systems() {
    assert!(matches!(reduce_to_scalar(&numerators(SCALAR)), Err(KernelError::TooFewUnknowns)));
}

#[test]
fn scalar_pipeline_matches_classical_elimination() {
    let sys = parse_dde(SCALAR).unwrap();
    let opts = SolveOptions { order: 30, ..SolveOptions::default() };
    let rep = solve(&sys, &opts).unwrap();
    assert!(!rep.deformation_used);
    assert_eq!(rep.eliminant_verified_order, Some(30));
    let ours = rep.eliminant_poly.unwrap();

    let ns = numerators(SCALAR);
    let e = &ns.e[0];
    let gens = vec![e.clone(), e.derivative(ns.x(0)), e.derivative(ns.u())];
    let ideal = buchberger(&ns.vars, gens, MonomialOrder::DegRevLex).unwrap();
    let elim = eliminate(&ideal, &["t", "z0"]).unwrap();
    let classical = elim.iter().filter(|g| g.contains_var(ns.z(0))).min_by_key(|g| g.degree_in(ns.z(0))).unwrap();
    let vars2 = ours.vars().clone();
    // compare over Q(t): drop the content in t
    let classical = classical.rename_into(&vars2, &|s| s.to_string()).unwrap();
    let classical = primitive_integer(&primitive_part(&classical, 1));
    assert_eq!(ours, classical);
}

/// `(2 n k delta)^(2 n^3 k^2 + 2 n)` and `((nk)!)^(nk)` by repeated
/// multiplication.
fn bound_by_hand(n: u64, k: u64, d: u64) -> (BigInt, BigInt) {
    let mut num = BigInt::one();
    for _ in 0..(2 * n * n * n * k * k + 2 * n) {
        num *= BigInt::from(2 * n * k * d);
    }
    let mut fact = BigInt::one();
    for i in 1..=n * k {
        fact *= BigInt::from(i);
    }
    let mut den = BigInt::one();
    for _ in 0..n * k {
        den *= &fact;
    }
    (num, den)
}

#[test]
fn degree_bound_instances() {
    assert_eq!(degree_bound(1, 1, 2), (BigInt::from(256), BigInt::one()));
    for (n, k, d) in [(1, 1, 1), (2, 1, 3), (1, 3, 2), (3, 2, 1), (2, 2, 5)] {
        assert_eq!(degree_bound(n, k, d), bound_by_hand(n as u64, k as u64, d as u64), "{n} {k} {d}");
    }
}

#[test]
fn non_generic_system_without_deformation_is_an_error() {
    let sys = parse_dde(HARD).unwrap();
    let opts = SolveOptions { deform: DeformMode::Off, eliminate: false, ..SolveOptions::default() };
    assert!(matches!(solve(&sys, &opts), Err(KernelError::NonGeneric { .. })));
}

/// Terms of `p` with `t`-degree below `n`.
fn mod_t(p: &MPoly<BigRat>, n: u16) -> MPoly<BigRat> {
    MPoly::from_terms(p.vars(), p.terms().iter().filter(|(m, _)| m.exp(0) < n).cloned())
}

#[test]
fn det_and_p_vanish_at_kernel_roots() {
    let sys = parse_dde(TWO_COLORS).unwrap();
    let ns = numerators(TWO_COLORS);
    let n = 8;
    let (roots, _) = rational_branches(&along_solution(&build_det(&ns), &sys, &ns, n), &rat_int(4), 8).unwrap();
    assert_eq!(roots.len(), 2);
    let sol = solve_series(&sys, n).unwrap();
    let bind = solution_bindings(&ns.analysis(), &sol);
    for poly in [build_det(&ns), build_p(&ns)] {
        let along = eval_at_series(&poly, &bind, n).unwrap();
        for root in &roots {
            let v = along.compose_u(&root.to_trunc(n).add_constant(&ns.a)).unwrap();
            assert!(v.coeffs()[..2].iter().all(Zero::is_zero), "{root}");
        }
    }
}

#[test]
fn linear_elimination_substitutes() {
    let src = "system { unknowns F1, F2; catalytic u; point a = 0;
      F1 = 1 + t*(u*F1*F2 + (F1 - F1(0))/u);
      F2 = t*u*F1^2 + t; }";
    let ns = numerators(src);
    // E2 = c*x2 + rest with c constant
    let c = ns.e[1].coeff_in(ns.x(1), 1);
    assert_eq!(c.terms().len(), 1);
    let c = c.terms()[0].1.clone();
    let g = &MPoly::constant(&ns.vars, -rat_int(1) / c) * &ns.e[1].coeff_in(ns.x(1), 0);
    let r = reduce_to_scalar(&ns).unwrap();
    let want = primitive_integer(&ns.e[0].substitute(ns.x(1), &g).unwrap());
    assert_eq!(r, want);
    // R lies in <E1, E2> : Det^oo
    let i = Ideal::new(&ns.vars, ns.e.clone(), MonomialOrder::DegRevLex).unwrap();
    let sat = saturate(&i, &build_det(&ns)).unwrap();
    assert!(sat.contains(&r).unwrap());
}

#[test]
fn hard_particles_reduce_to_nonzero_resultant() {
    let ns = numerators(HARD);
    let r = reduce_to_scalar(&ns).unwrap();
    assert!(!r.is_zero());
    assert!(!r.contains_var(ns.x(1)));
    assert!(r.contains_var(ns.x(0)));
}

#[test]
fn deformed_det_is_diagonal_near_zero() {
    let (def, _) = deform(&parse_dde(HARD).unwrap(), Epsilon::Rational(rat_int(1))).unwrap();
    let ns = normalize(&def, NormalMode::DeformationReady).unwrap();
    let det = rescaled_det(&kernel_system(&ns));
    let v = &ns.vars;
    let want = parse_poly("(-u + t)*(-u + 2*t)", v).unwrap();
    let n1 = ns.n as u16 + 1;
    assert_eq!(mod_t(&det, n1), mod_t(&want, n1));
}

#[test]
fn hard_particles_auto_mode() {
    let sys = parse_dde(HARD).unwrap();
    let mut opts = SolveOptions { order: 50, ..SolveOptions::default() };
    opts.elim.budget.max_seconds = Some(60.0);
    let rep = solve(&sys, &opts).unwrap();
    assert!(!rep.genericity.zero_dimensional);
    assert!(rep.deformation_used || rep.budget_exhausted, "{rep:?}");
    assert!(matches!(rep.certificate, Some(Certificate::SeriesVerified { order }) if order >= 30), "{rep:?}");
}
