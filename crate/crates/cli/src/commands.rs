use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use catsolve_core::catser::{puiseux_roots, solution_bindings, solve_series, eval_at_series, PuiseuxReport, PuiseuxStatus, SeriesError};
use catsolve_core::ddefront::{deform, normalize, parse_dde, DDESystem, DdeError, Epsilon, NormalMode};
use catsolve_core::exactpoly::{parse_rat, rat_to_text, BigRat};
use catsolve_core::idealgb::GbBudget;
use catsolve_core::kernelsolve::{
    build_det, build_p, duplicate, genericity_check, kernel_system, solve, Certificate, DeformMode, ElimOptions,
    GenericityInfo, GenericityMethod, KernelError, SolveOptions, SolveReport,
};
use serde::Serialize;
use thiserror::Error;

use crate::{Deform, Format, RunArgs};

/// Certified output exists but no certificate was produced and the budget
/// was not the reason.
const EXIT_UNCERTIFIED: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Parse(#[from] DdeError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("{0}")]
    NonGeneric(KernelError),
    #[error("{0}")]
    Budget(KernelError),
    #[error(transparent)]
    Kernel(KernelError),
    #[error("cannot encode report: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<KernelError> for CliError {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::NonGeneric { .. } => CliError::NonGeneric(e),
            e if e.is_budget() => CliError::Budget(e),
            KernelError::Dde(d) => CliError::Parse(d),
            e => CliError::Kernel(e),
        }
    }
}

fn load(args: &RunArgs) -> Result<DDESystem, CliError> {
    let src = fs::read_to_string(&args.input).map_err(|source| CliError::Io {
        path: args.input.clone(),
        source,
    })?;
    let mut sys = parse_dde(&src)?;
    for p in &args.params {
        let (name, value) = p
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("expected NAME=VALUE, got `{p}`")))?;
        let v = parse_rat(value).ok_or_else(|| CliError::Input(format!("`{value}` is not a rational number")))?;
        sys = sys.with_param(name.trim(), v)?;
    }
    Ok(sys)
}

fn epsilon(args: &RunArgs) -> Result<BigRat, CliError> {
    parse_rat(&args.epsilon).ok_or_else(|| CliError::Input(format!("epsilon `{}` is not a rational number", args.epsilon)))
}

fn elim_options(args: &RunArgs) -> Result<ElimOptions, CliError> {
    if !(args.budget_seconds > 0.0) {
        return Err(CliError::Input("--budget-seconds must be positive".into()));
    }
    Ok(ElimOptions {
        budget: GbBudget {
            max_pairs: Some(args.budget_pairs as usize),
            max_degree: Some(args.budget_degree),
            max_seconds: Some(args.budget_seconds),
            ..GbBudget::default()
        },
        seed: args.seed,
        ..ElimOptions::default()
    })
}

fn emit<T: Serialize>(args: &RunArgs, report: &T, text: &str) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(report)? + "\n";
    if let Some(path) = &args.json {
        fs::write(path, &json).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    match args.format {
        Format::Json => print!("{json}"),
        Format::Text => print!("{text}"),
    }
    Ok(())
}

pub fn run(command: &str, args: &RunArgs) -> Result<u8, CliError> {
    match command {
        "solve" => cmd_solve(args),
        "series" => cmd_series(args),
        _ => cmd_analyze(args),
    }
}

fn genericity_text(g: &GenericityInfo) -> String {
    match g.degree {
        Some(d) if g.zero_dimensional => format!("zero-dimensional, {d} solutions"),
        _ => format!("positive-dimensional, independent: {}", g.independent.join(", ")),
    }
}

fn solve_text(r: &SolveReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "system (n = {}, k = {}):\n{}", r.n, r.k, r.system.trim_end());
    let _ = writeln!(s, "genericity: {}", genericity_text(&r.genericity));
    if let Some(d) = &r.deformation {
        let _ = writeln!(s, "deformation: alpha = {}, beta = {}, epsilon = {}, gamma = {:?}", d.alpha, d.beta, d.epsilon, d.gamma);
    }
    match (&r.eliminant, r.eliminant_degrees) {
        (Some(e), Some((dz, dt))) => {
            let _ = writeln!(s, "eliminant (degree {dz} in {}, {dt} in t): {e}", r.target);
            if let Some(o) = r.eliminant_verified_order {
                let _ = writeln!(s, "eliminant annihilates the series mod t^{o}");
            }
        }
        _ => {
            if let Some(err) = &r.elimination_error {
                let _ = writeln!(s, "eliminant: not computed ({err})");
            }
        }
    }
    match &r.minimal {
        Some(m) => {
            let _ = writeln!(s, "minimal polynomial: {m}");
        }
        None => s.push_str("minimal polynomial: none found\n"),
    }
    let cert = match &r.certificate {
        Some(Certificate::Both { order }) => format!("annihilates the series mod t^{order} and divides the eliminant"),
        Some(Certificate::SeriesVerified { order }) => format!("annihilates the series mod t^{order}"),
        Some(Certificate::DividesEliminant) => "divides the eliminant".into(),
        None => "none".into(),
    };
    let _ = writeln!(s, "certificate: {cert}");
    for w in &r.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    if let Some(t) = &r.timings {
        let _ = writeln!(
            s,
            "timings (ms): series {}, genericity {}, elimination {}, guessing {}",
            t.series_ms, t.genericity_ms, t.elimination_ms, t.guess_ms
        );
    }
    s
}

fn cmd_solve(args: &RunArgs) -> Result<u8, CliError> {
    let sys = load(args)?;
    let opts = SolveOptions {
        order: args.order as usize,
        target: args.target.clone(),
        deform: match args.deform {
            Deform::Off => DeformMode::Off,
            Deform::On => DeformMode::On,
            Deform::Auto => DeformMode::Auto,
        },
        epsilon: epsilon(args)?,
        elim: elim_options(args)?,
        eliminate: !args.no_eliminate,
        timings: args.timings,
        ..SolveOptions::default()
    };
    let report = solve(&sys, &opts)?;
    emit(args, &report, &solve_text(&report))?;
    Ok(if report.certificate.is_some() {
        0
    } else if report.budget_exhausted {
        2
    } else {
        EXIT_UNCERTIFIED
    })
}

#[derive(Serialize)]
struct UnknownSeries {
    name: String,
    series: String,
    /// `d^l/du^l F(t, a)` for `l < k`.
    at_point: Vec<String>,
}

#[derive(Serialize)]
struct SeriesReport {
    schema: u32,
    system: String,
    order: u32,
    point: String,
    unknowns: Vec<UnknownSeries>,
}

fn cmd_series(args: &RunArgs) -> Result<u8, CliError> {
    let sys = load(args)?;
    let ns = normalize(&sys, NormalMode::Minimal)?;
    ns.require_bound()?;
    let sol = solve_series(&sys, args.order as usize)?;
    let mut unknowns = Vec::new();
    let mut text = String::new();
    for (name, f) in sys.unknowns().iter().zip(&sol) {
        let at: Vec<String> = (0..ns.k as usize).map(|l| f.specialize(sys.a(), l).to_string()).collect();
        let _ = writeln!(text, "{name} = {f}");
        for (l, s) in at.iter().enumerate() {
            let lhs = match l {
                0 => format!("{name}(a)"),
                _ => format!("D^{l}{name}(a)"),
            };
            let _ = writeln!(text, "{lhs} = {s}");
        }
        unknowns.push(UnknownSeries {
            name: name.clone(),
            series: f.to_string(),
            at_point: at,
        });
    }
    let report = SeriesReport {
        schema: 1,
        system: sys.print(),
        order: args.order,
        point: rat_to_text(sys.a()),
        unknowns,
    };
    emit(args, &report, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct RootGroupJson {
    valuation: String,
    leading_minpoly: String,
    count: usize,
}

#[derive(Serialize)]
struct PuiseuxJson {
    certified: bool,
    total_distinct: usize,
    certified_to: usize,
    roots: Vec<RootGroupJson>,
    reason: Option<String>,
}

impl From<&PuiseuxReport> for PuiseuxJson {
    fn from(r: &PuiseuxReport) -> Self {
        PuiseuxJson {
            certified: r.status == PuiseuxStatus::Certified,
            total_distinct: r.total_distinct,
            certified_to: r.certified_to,
            roots: r
                .roots
                .iter()
                .map(|g| RootGroupJson {
                    valuation: rat_to_text(&g.valuation),
                    leading_minpoly: g.leading_minpoly.to_text("c"),
                    count: g.count,
                })
                .collect(),
            reason: r.reason.clone(),
        }
    }
}

#[derive(Serialize)]
struct DeformJson {
    alpha: u32,
    beta: u32,
    gamma: Vec<Vec<String>>,
    epsilon: String,
}

#[derive(Serialize)]
struct AnalyzeReport {
    schema: u32,
    system: String,
    n: usize,
    k: u32,
    m: Vec<u32>,
    big_m: u32,
    numerators: Vec<String>,
    det: String,
    p: String,
    /// Roots of `Det` at the series solution, in `u - a`.
    det_roots: PuiseuxJson,
    genericity: Option<GenericityInfo>,
    genericity_error: Option<String>,
    deformation: Option<DeformJson>,
}

fn cmd_analyze(args: &RunArgs) -> Result<u8, CliError> {
    let sys = load(args)?;
    let ns = normalize(&sys, NormalMode::Minimal)?;
    ns.require_bound()?;
    let ks = kernel_system(&ns);
    let (det, p) = (build_det(&ns), build_p(&ns));
    let n = args.order as usize;
    let sol = solve_series(&sys, n)?;
    let along = eval_at_series(&det, &solution_bindings(&ns.analysis(), &sol), n)?;
    let roots = puiseux_roots(&along.u_coefficients(&ns.a), 4)?;

    let ds = duplicate(&ks)?;
    let (genericity, genericity_error) = match genericity_check(&ds, GenericityMethod::Modular, &elim_options(args)?) {
        Ok(d) => (Some(GenericityInfo::from(&d)), None),
        Err(e) if e.is_budget() => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let non_generic = genericity.as_ref().is_some_and(|g| !g.zero_dimensional);
    let deformation = match args.deform {
        Deform::On => true,
        Deform::Auto => non_generic,
        Deform::Off => false,
    }
    .then(|| -> Result<DeformJson, CliError> {
        let eps = epsilon(args)?;
        let (_, prm) = deform(&sys, Epsilon::Rational(eps.clone()))?;
        Ok(DeformJson {
            alpha: prm.alpha,
            beta: prm.beta,
            gamma: prm.gamma.iter().map(|r| r.iter().map(|g| g.to_string()).collect()).collect(),
            epsilon: rat_to_text(&eps),
        })
    })
    .transpose()?;

    let report = AnalyzeReport {
        schema: 1,
        system: sys.print(),
        n: ns.n,
        k: ns.k,
        m: ns.m.clone(),
        big_m: ns.big_m,
        numerators: ns.e.iter().map(|e| e.to_text()).collect(),
        det: det.to_text(),
        p: p.to_text(),
        det_roots: PuiseuxJson::from(&roots),
        genericity,
        genericity_error,
        deformation,
    };

    let mut text = String::new();
    let _ = writeln!(text, "n = {}, k = {}, m = {:?}, M = {}", report.n, report.k, report.m, report.big_m);
    for (i, e) in report.numerators.iter().enumerate() {
        let _ = writeln!(text, "E{} = {e}", i + 1);
    }
    let _ = writeln!(text, "Det = {}", report.det);
    let _ = writeln!(text, "P = {}", report.p);
    let _ = writeln!(text, "roots of Det in u - a: {roots}");
    match (&report.genericity, &report.genericity_error) {
        (Some(g), _) => {
            let _ = writeln!(text, "genericity: {}", genericity_text(g));
        }
        (None, Some(e)) => {
            let _ = writeln!(text, "genericity: undecided ({e})");
        }
        _ => {}
    }
    if let Some(d) = &report.deformation {
        let _ = writeln!(text, "deformation: alpha = {}, beta = {}, epsilon = {}, gamma = {:?}", d.alpha, d.beta, d.epsilon, d.gamma);
    }
    emit(args, &report, &text)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use catsolve_core::idealgb::Dimension;

    #[test]
    fn budget_errors_map_to_their_exit_class() {
        let e: CliError = KernelError::NonGeneric { witness: vec!["x2".into()] }.into();
        assert!(matches!(e, CliError::NonGeneric(_)));
        let e: CliError = KernelError::TooFewUnknowns.into();
        assert!(matches!(e, CliError::Kernel(_)));
    }

    #[test]
    fn genericity_lines() {
        let g = GenericityInfo::from(&Dimension::ZeroDimensional { degree: 26 });
        assert_eq!(genericity_text(&g), "zero-dimensional, 26 solutions");
    }
}
