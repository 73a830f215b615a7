use catsolve_core::ddefront::{
    deform, expand_delta, normalize, parse_dde, system_vars, DDESystem, DdeError, Declarations, Epsilon, Expr,
    NormalMode,
};
use catsolve_core::exactpoly::{parse_poly, rat, rat_int, BigRat, MPoly};
use proptest::prelude::*;

const TWO_COLORS: &str = "system { unknowns F1, F2; catalytic u; point a = 1;
  F1 = 1 + t*(u + 2*u*F1^2 + 2*u*F2(a) + u*(F1 - u*F1(a))/(u-1));
  F2 = t*(2*u*F1*F2 + u*F1 + u*F2(a) + u*(F2 - u*F2(a))/(u-1)); }";

const HARD: &str = "system { unknowns F1, F2; catalytic u; point a = 1; param s = 1;
  F1 = F2 + t*u^2*F1^2 + t*u*(u*F1 - F1(1))/(u-1);
  F2 = 1 + t*s*u*F1*F2 + t*s*u*(F2 - F2(1))/(u-1); }";

fn poly(sys_vars: &std::sync::Arc<catsolve_core::exactpoly::VarTable>, s: &str) -> MPoly<BigRat> {
    parse_poly(s, sys_vars).unwrap()
}

#[test]
fn numerators_of_two_color_example() {
    let sys = parse_dde(TWO_COLORS).unwrap();
    let ns = normalize(&sys, NormalMode::Minimal).unwrap();
    assert_eq!((ns.n, ns.k, ns.m.clone()), (2, 1, vec![1, 1]));
    let v = &ns.vars;
    let e1 = poly(v, "(1 - x1)*(u-1) + t*(2*u^2*x1^2 - u^2*z0 + 2*u^2*z1 - 2*u*x1^2 + u^2 + u*x1 - 2*u*z1 - u)");
    let e2 = poly(v, "x2*(1-u) + t*(2*u^2*x1*x2 + u^2*x1 - 2*u*x1*x2 - u*x1 + u*x2 - u*z1)");
    assert_eq!(ns.e[0], e1);
    assert_eq!(ns.e[1], e2);
}

#[test]
fn t_free_dependency_is_ordered() {
    let sys = parse_dde(HARD).unwrap();
    let an = sys.analyze().unwrap();
    assert_eq!(an.topo, vec![1, 0]);
    assert_eq!(an.k, 1);
}

#[test]
fn deformation_parameters_hard_particles() {
    let sys = parse_dde(HARD).unwrap();
    let (def, p) = deform(&sys, Epsilon::Rational(rat_int(1))).unwrap();
    assert_eq!((p.k, p.big_m, p.beta, p.alpha), (1, 2, 4, 24));
    let g: Vec<Vec<String>> = p.gamma.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect();
    assert_eq!(g, vec![vec!["1", "t^4"], vec!["t^4", "2"]]);
    assert!(def.a() == &rat_int(0));
    // the printed deformed system is valid input
    assert_eq!(parse_dde(&def.print()).unwrap(), def);
    let ns = normalize(&def, NormalMode::DeformationReady).unwrap();
    assert!(ns.m.iter().all(|&m| m >= ns.k));
}

#[test]
fn symbolic_epsilon_becomes_parameter() {
    let sys = parse_dde(TWO_COLORS).unwrap();
    let (def, _) = deform(&sys, Epsilon::Symbolic).unwrap();
    assert_eq!(def.params().last().unwrap().0, "eps");
    let ns = normalize(&def, NormalMode::DeformationReady).unwrap();
    assert!(matches!(ns.require_bound(), Err(DdeError::UnboundParameter(p)) if p == "eps"));
    assert_eq!(deform(&sys, Epsilon::Rational(rat_int(0))).unwrap_err(), DdeError::ZeroEpsilon);
}

#[test]
fn shift_moves_point_to_zero() {
    let sys = parse_dde(TWO_COLORS).unwrap();
    let ns = normalize(&sys, NormalMode::DeformationReady).unwrap();
    assert!(ns.a_shifted);
    assert_eq!(ns.original_a, rat_int(1));
    // E1 with u -> u + 1
    let v = &ns.vars;
    let e1 = poly(v, "(1 - x1)*(u-1) + t*(2*u^2*x1^2 - u^2*z0 + 2*u^2*z1 - 2*u*x1^2 + u^2 + u*x1 - 2*u*z1 - u)");
    let shifted = e1.substitute(1, &poly(v, "u + 1")).unwrap();
    assert_eq!(ns.e[0], shifted);
}

#[test]
fn delta_expansion() {
    let v = system_vars(1, 2, &[]).unwrap();
    let (num, e) = expand_delta(&v, 1, 2, &rat_int(0), 1, 1).unwrap();
    assert_eq!((num, e), (poly(&v, "x1 - z0"), 1));
    let (num, e) = expand_delta(&v, 1, 2, &rat_int(0), 1, 2).unwrap();
    assert_eq!((num, e), (poly(&v, "x1 - z0 - u*z1"), 2));
    let (num, _) = expand_delta(&v, 1, 2, &rat(1, 2), 1, 2).unwrap();
    assert_eq!(num, poly(&v, "x1 - z0 - (u - 1/2)*z1"));
    assert!(matches!(expand_delta(&v, 1, 2, &rat_int(0), 1, 3), Err(DdeError::DeltaOrder { j: 3, k: 2 })));
}

#[test]
fn order_two_system_infers_k() {
    let sys = parse_dde("system { unknowns F; catalytic u; point a = 0; F = 1 + t*u*D^2[F] + t*F^2; }").unwrap();
    let ns = normalize(&sys, NormalMode::Minimal).unwrap();
    assert_eq!(ns.k, 2);
    assert_eq!(ns.m, vec![1]);
    let v = &ns.vars;
    assert_eq!(ns.e[0], poly(v, "u + t*(x1 - z0 - u*z1) + t*u*x1^2 - u*x1"));
}

#[test]
fn exactness_decides_admissible_divisions() {
    // the square of a first difference is divisible by u^2 on series
    let sys = parse_dde("system { unknowns F; catalytic u; point a = 0; F = 1 + t*(F - F(0))^2/u^2; }").unwrap();
    assert_eq!(sys.analyze().unwrap().k, 1);
    let sys = parse_dde("system { unknowns F; catalytic u; point a = 0; F = 1 + t*(F - F(0))/u^2; }").unwrap();
    assert!(matches!(sys.analyze(), Err(DdeError::NotExact { den_exp: 2, .. })));
}

#[test]
fn rejects_bad_shapes() {
    let e = parse_dde("system { unknowns F; catalytic u; point a = 0; F = u + F^2; }").unwrap().analyze().unwrap_err();
    assert!(matches!(e, DdeError::Shape { .. }), "{e}");
    let e = parse_dde("system { unknowns F; catalytic u; point a = 1; F = 1 + t*F/(u-2); }").unwrap().analyze().unwrap_err();
    assert!(matches!(e, DdeError::Clearing { .. }), "{e}");
    let e = parse_dde("system { unknowns F; catalytic u; point a = 1; F = 1 + t*F/(u-1); }").unwrap().analyze().unwrap_err();
    assert!(matches!(e, DdeError::NotExact { .. }), "{e}");
    let e = parse_dde("system { unknowns F, G; catalytic u; point a = 0; F = G + t; G = F + t; }").unwrap().analyze().unwrap_err();
    assert!(matches!(e, DdeError::Shape { .. }), "{e}");
    assert!(matches!(
        parse_dde("system { unknowns F; catalytic u; point a = 0; point b = 1; F = 1; }"),
        Err(DdeError::MultiplePoints)
    ));
    assert!(matches!(parse_dde("system { unknowns F, G; catalytic u; point a = 0; F = 1; }"), Err(DdeError::MissingEquation(_))));
    assert!(matches!(parse_dde("system { unknowns t; catalytic u; point a = 0; t = 1; }"), Err(_)));
}

#[test]
fn unbound_parameters_are_variables() {
    let sys = parse_dde("system { unknowns F; catalytic u; point a = 0; param s; F = 1 + t*s*u*F^2; }").unwrap();
    let ns = normalize(&sys, NormalMode::Minimal).unwrap();
    assert_eq!(ns.unbound, vec!["s".to_string()]);
    assert!(ns.require_bound().is_err());
    let bound = sys.with_param("s", rat(3, 2)).unwrap();
    assert!(normalize(&bound, NormalMode::Minimal).unwrap().require_bound().is_ok());
}

fn leaf(n: usize) -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-4i64..5, 1i64..4).prop_map(|(a, b)| Expr::Num(rat(a, b))),
        Just(Expr::T),
        Just(Expr::U),
        Just(Expr::Point),
        Just(Expr::Param(0)),
        (0..n).prop_map(Expr::Unknown),
        (0..n).prop_map(Expr::Spec),
        (1u32..3, 0..n).prop_map(|(order, unknown)| Expr::Delta { order, unknown }),
    ]
}

fn expr(n: usize) -> impl Strategy<Value = Expr> {
    leaf(n).prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::div(a, b)),
            (inner, 0u32..4).prop_map(|(a, e)| Expr::pow(a, e)),
        ]
    })
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(eqs in prop::collection::vec(expr(2), 2), a in -2i64..3, s in prop::option::of(-3i64..4)) {
        let decl = Declarations {
            unknowns: vec!["F1".into(), "G".into()],
            catalytic: Some("v".into()),
            point: Some(("b".into(), rat_int(a))),
            params: vec![("s".into(), s.map(rat_int))],
            order: None,
        };
        let sys = DDESystem::new(decl, eqs).unwrap();
        let text = sys.print();
        let back = parse_dde(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(back, sys);
    }

    #[test]
    fn fold_is_idempotent(e in expr(2)) {
        let once = e.fold();
        prop_assert_eq!(once.clone().fold(), once);
    }
}
