use std::collections::HashMap;

use catsolve_core::catser::{
    eval_at_series, fixed_point_iterate, puiseux_roots, residuals, solution_bindings, solve_series, Binding,
    PuiseuxStatus, Schedule, SeriesError, TruncTSeries,
};
use catsolve_core::ddefront::{normalize, parse_dde, NormalMode};
use catsolve_core::exactpoly::{parse_poly, rat_int, BigRat};
use proptest::prelude::*;

const TWO_COLORS: &str = "system { unknowns F1, F2; catalytic u; point a = 1;
  F1 = 1 + t*(u + 2*u*F1^2 + 2*u*F2(a) + u*(F1 - u*F1(a))/(u-1));
  F2 = t*(2*u*F1*F2 + u*F1 + u*F2(a) + u*(F2 - u*F2(a))/(u-1)); }";

const HARD: &str = "system { unknowns F1, F2; catalytic u; point a = 1; param s = 2;
  F1 = F2 + t*u^2*F1^2 + t*u*(u*F1 - F1(1))/(u-1);
  F2 = 1 + t*s*u*F1*F2 + t*s*u*(F2 - F2(1))/(u-1); }";

fn assert_residuals_vanish(src: &str, n: usize) {
    let sys = parse_dde(src).unwrap();
    let sol = solve_series(&sys, n).unwrap();
    let ns = normalize(&sys, NormalMode::Minimal).unwrap();
    // evaluate through the name-based path, independent of the solver's
    // online products
    let bind = solution_bindings(&ns.analysis(), &sol);
    for (i, e) in ns.e.iter().enumerate() {
        let r = eval_at_series(e, &bind, n).unwrap();
        assert!(r.is_zero(), "equation {i} residual {r}");
    }
    for r in residuals(&ns, &sol).unwrap() {
        assert!(r.is_zero());
    }
}

#[test]
fn geometric_series() {
    let sys = parse_dde("system { unknowns F; catalytic u; point a = 0; F = 1 + t*F; }").unwrap();
    let f = &solve_series(&sys, 6).unwrap()[0];
    assert_eq!(f.specialize(&rat_int(5), 0), TruncTSeries::from_slice(6, &vec![rat_int(1); 6]));
    assert_eq!(f.to_string(), "1 + t + t^2 + t^3 + t^4 + t^5 + O(t^6)");
}

#[test]
fn two_color_residuals() {
    assert_residuals_vanish(TWO_COLORS, 8);
}

#[test]
fn hard_particle_residuals() {
    assert_residuals_vanish(HARD, 8);
}

#[test]
fn second_order_residuals() {
    assert_residuals_vanish(
        "system { unknowns F; catalytic u; point a = 0; F = 1 + t*(u + F^2 + D[F] + u*D^2[F]); }",
        7,
    );
}

#[test]
fn zero_polynomial_evaluates_to_zero() {
    let sys = parse_dde(TWO_COLORS).unwrap();
    let ns = normalize(&sys, NormalMode::Minimal).unwrap();
    let sol = solve_series(&sys, 5).unwrap();
    let p = parse_poly("x1 - x1", &ns.vars).unwrap();
    assert!(eval_at_series(&p, &solution_bindings(&ns.analysis(), &sol), 5).unwrap().is_zero());
    let q = parse_poly("x1 + z0", &ns.vars).unwrap();
    assert!(matches!(eval_at_series(&q, &HashMap::new(), 5), Err(SeriesError::UnboundVariable(_))));
}

#[test]
fn two_color_counts_start_like_the_cubic() {
    // F1(t,1) is annihilated by the cubic; its expansion starts 1 + 3t.
    let sys = parse_dde(TWO_COLORS).unwrap();
    let f1 = solve_series(&sys, 3).unwrap()[0].specialize(&rat_int(1), 0);
    assert_eq!(f1.coeffs()[0], rat_int(1));
    let cubic = parse_poly(
        "64*t^3*z0^3 + (48*t^3-72*t^2+2*t)*z0^2 - (15*t^3-9*t^2-19*t+1)*z0 + t^3+27*t^2-19*t+1",
        &catsolve_core::exactpoly::VarTable::new(&["t", "u", "z0"]).unwrap(),
    )
    .unwrap();
    let mut bind = HashMap::new();
    bind.insert("z0".to_string(), Binding::T(f1));
    assert!(eval_at_series(&cubic, &bind, 3).unwrap().is_zero());
}

#[test]
fn schedules_agree_and_contract() {
    for src in [TWO_COLORS, HARD] {
        let sys = parse_dde(src).unwrap();
        let an = sys.analyze().unwrap();
        let n = 6;
        let online = solve_series(&sys, n).unwrap();
        // t-free coupling between equations slows simultaneous sweeps to one
        // order per n sweeps
        let sim = fixed_point_iterate(&an, n, Schedule::Simultaneous, an.n * (n + 1)).unwrap();
        assert_eq!(sim, online);
        let mut prev = fixed_point_iterate(&an, n, Schedule::Sequential, 0).unwrap();
        for j in 0..n {
            let next = fixed_point_iterate(&an, n, Schedule::Sequential, j + 1).unwrap();
            if j > 0 {
                for (a, b) in prev.iter().zip(&next) {
                    assert_eq!(a.truncate(j), b.truncate(j), "iterates {} and {} differ mod t^{j}", j, j + 1);
                }
            }
            prev = next;
        }
        assert_eq!(prev, online);
    }
}

#[test]
fn zero_order_is_rejected() {
    let sys = parse_dde("system { unknowns F; catalytic u; point a = 0; F = 1 + t*(F - F(0))/u; }").unwrap();
    assert!(solve_series(&sys, 4).is_ok());
    assert!(matches!(solve_series(&sys, 0), Err(SeriesError::BadOrder)));
}

#[test]
fn puiseux_count_never_exceeds_degree() {
    let n = 6;
    let s = |c: &[i64]| TruncTSeries::from_slice(n, &c.iter().map(|&x| rat_int(x)).collect::<Vec<_>>());
    let cases = vec![
        vec![s(&[0, 1]), s(&[1])],
        vec![s(&[0, 0, 2]), s(&[0, 3]), s(&[1])],
        vec![s(&[0, 0, 0, 1]), s(&[]), s(&[]), s(&[1])],
        vec![s(&[0, 1]), s(&[0, 0, 1]), s(&[0, 1]), s(&[1, 1])],
    ];
    for p in cases {
        let rep = puiseux_roots(&p, 4).unwrap();
        assert!(rep.total_distinct < p.len(), "{rep}");
        assert_eq!(rep.status, PuiseuxStatus::Certified, "{rep}");
        let grouped: usize = rep.roots.iter().map(|g| g.count).sum();
        assert_eq!(grouped, rep.total_distinct);
    }
}

const ATOMS: &[&str] = &["u", "F1", "F2", "F1(a)", "F2(a)", "D[F1]", "D[F2]", "F1*F2", "u*F1^2", "u^2"];

fn rhs() -> impl Strategy<Value = String> {
    (-2i64..3, prop::collection::vec((0..ATOMS.len(), -2i64..3), 1..4)).prop_map(|(f, terms)| {
        let q: Vec<String> = terms.iter().map(|(i, c)| format!("({c})*{}", ATOMS[*i])).collect();
        format!("{f} + t*({})", q.join(" + "))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_systems_have_zero_residuals(r1 in rhs(), r2 in rhs(), a in -1i64..3) {
        let src = format!("system {{ unknowns F1, F2; catalytic u; point a = {a}; F1 = {r1}; F2 = {r2}; }}");
        let sys = parse_dde(&src).unwrap();
        let n = 5;
        let sol = solve_series(&sys, n).unwrap();
        let ns = normalize(&sys, NormalMode::Minimal).unwrap();
        for r in residuals(&ns, &sol).unwrap() {
            prop_assert!(r.is_zero());
        }
        let an = sys.analyze().unwrap();
        let sim = fixed_point_iterate(&an, n, Schedule::Simultaneous, 2 * (n + 1)).unwrap();
        prop_assert_eq!(sim, sol);
    }

    #[test]
    fn specialize_commutes_with_truncation(r1 in rhs(), r2 in rhs(), a in -1i64..3, j in 0usize..3, m in 1usize..5) {
        let src = format!("system {{ unknowns F1, F2; catalytic u; point a = 0; F1 = {r1}; F2 = {r2}; }}");
        let sol = solve_series(&parse_dde(&src).unwrap(), 5).unwrap();
        let at = BigRat::from_integer(a.into());
        prop_assert_eq!(sol[0].specialize(&at, j).truncate(m), sol[0].truncate(m).specialize(&at, j));
    }
}
