//! The solving pipeline and its report.

use std::time::Instant;

use serde::Serialize;

use crate::catser::{solve_series, TruncTSeries};
use crate::ddefront::{deform, normalize, DDESystem, DeformationParams, Epsilon, NormalMode};
use crate::exactpoly::{rat_to_text, BigRat, MPoly};
use crate::guessprove::{certify_divides, guess_sweep, verify_annihilation, GuessCandidate, DEFAULT_GUARD};
use crate::idealgb::Dimension;

use super::{duplicate, eliminant, genericity_check, kernel_system, ElimOptions, GenericityMethod, KernelError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DeformMode {
    Off,
    On,
    Auto,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Truncation order of the series used for guessing and verification.
    pub order: usize,
    /// `z`-variable to eliminate for; `z0` is `F_1(t, a)`.
    pub target: String,
    pub deform: DeformMode,
    pub epsilon: BigRat,
    pub elim: ElimOptions,
    pub genericity: GenericityMethod,
    /// Skip the elimination and only guess from the series.
    pub eliminate: bool,
    pub guess_max_dz: usize,
    pub guess_max_dt: usize,
    pub guard: usize,
    pub timings: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            order: 40,
            target: "z0".into(),
            deform: DeformMode::Auto,
            epsilon: BigRat::from_integer(1.into()),
            elim: ElimOptions::default(),
            genericity: GenericityMethod::Modular,
            eliminate: true,
            guess_max_dz: 8,
            guess_max_dt: 16,
            guard: DEFAULT_GUARD,
            timings: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Annihilates the series modulo `t^order`.
    SeriesVerified { order: usize },
    /// Divides the eliminant.
    DividesEliminant,
    Both { order: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericityInfo {
    pub zero_dimensional: bool,
    /// Number of solutions counted with multiplicity, when finite.
    pub degree: Option<u64>,
    /// A maximal independent set of variables, when not finite.
    pub independent: Vec<String>,
}

impl From<&Dimension> for GenericityInfo {
    fn from(d: &Dimension) -> Self {
        match d {
            Dimension::ZeroDimensional { degree } => GenericityInfo {
                zero_dimensional: true,
                degree: Some(*degree),
                independent: Vec::new(),
            },
            Dimension::PositiveDimensional { witness } => GenericityInfo {
                zero_dimensional: false,
                degree: None,
                independent: witness.clone(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeformationInfo {
    pub alpha: u32,
    pub beta: u32,
    pub gamma: Vec<Vec<String>>,
    pub epsilon: String,
    /// The deformed system that was eliminated.
    pub system: String,
}

impl DeformationInfo {
    fn new(p: &DeformationParams, eps: &BigRat, sys: &DDESystem) -> Self {
        DeformationInfo {
            alpha: p.alpha,
            beta: p.beta,
            gamma: p.gamma.iter().map(|r| r.iter().map(|g| g.to_string()).collect()).collect(),
            epsilon: rat_to_text(eps),
            system: sys.print(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Timings {
    pub series_ms: u128,
    pub genericity_ms: u128,
    pub elimination_ms: u128,
    pub guess_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub schema: u32,
    pub system: String,
    pub n: usize,
    pub k: u32,
    pub target: String,
    pub series_order: usize,
    pub genericity: GenericityInfo,
    pub deformation_used: bool,
    pub deformation: Option<DeformationInfo>,
    /// Present unless elimination was skipped or failed.
    pub eliminant: Option<String>,
    /// Degrees in the target and in `t`.
    pub eliminant_degrees: Option<(u16, u16)>,
    /// Order to which the eliminant annihilates the series of the system it
    /// was computed for.
    pub eliminant_verified_order: Option<usize>,
    pub elimination_error: Option<String>,
    pub budget_exhausted: bool,
    pub minimal: Option<String>,
    pub certificate: Option<Certificate>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
    #[serde(skip)]
    pub eliminant_poly: Option<MPoly<BigRat>>,
    #[serde(skip)]
    pub minimal_poly: Option<MPoly<BigRat>>,
}

/// `d^l/du^l F_i (t, a)` for the target `z_{k i + l}`.
fn target_series(sys: &DDESystem, target: &str, k: u32, order: usize) -> Result<TruncTSeries, KernelError> {
    let j: usize = target
        .strip_prefix('z')
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| KernelError::BadTarget(target.into()))?;
    let (i, l) = (j / k as usize, j % k as usize);
    if i >= sys.n() {
        return Err(KernelError::BadTarget(target.into()));
    }
    let sol = solve_series(sys, order)?;
    Ok(sol[i].specialize(sys.a(), l))
}

pub fn solve(sys: &DDESystem, opts: &SolveOptions) -> Result<SolveReport, KernelError> {
    let mut timings = Timings::default();
    let mut warnings = Vec::new();
    let ns = normalize(sys, NormalMode::Minimal)?;
    ns.require_bound()?;

    let clock = Instant::now();
    let series = target_series(sys, &opts.target, ns.k, opts.order)?;
    timings.series_ms = clock.elapsed().as_millis();

    let clock = Instant::now();
    let ks = kernel_system(&ns);
    let ds = duplicate(&ks)?;
    let dim = genericity_check(&ds, opts.genericity, &opts.elim)?;
    timings.genericity_ms = clock.elapsed().as_millis();
    let generic = matches!(dim, Dimension::ZeroDimensional { .. });

    let use_deformation = match opts.deform {
        DeformMode::On => true,
        DeformMode::Auto => !generic,
        DeformMode::Off => {
            if let Dimension::PositiveDimensional { witness } = &dim {
                return Err(KernelError::NonGeneric { witness: witness.clone() });
            }
            false
        }
    };

    let mut deformation = None;
    let mut elim_sys = sys.clone();
    let mut elim_ds = ds;
    if use_deformation {
        let (dsys, params) = deform(sys, Epsilon::Rational(opts.epsilon.clone()))?;
        deformation = Some(DeformationInfo::new(&params, &opts.epsilon, &dsys));
        let dns = normalize(&dsys, NormalMode::DeformationReady)?;
        let mut d = duplicate(&kernel_system(&dns))?;
        // kernel roots of the deformed system are nonzero
        d.avoid_point = true;
        elim_ds = d;
        elim_sys = dsys;
    }

    let mut eliminant_poly = None;
    let mut elimination_error = None;
    let mut budget_exhausted = false;
    let mut eliminant_verified_order = None;
    if opts.eliminate {
        let clock = Instant::now();
        match eliminant(&elim_ds, &opts.target, &opts.elim) {
            Ok(e) => {
                let s = if use_deformation {
                    target_series(&elim_sys, &opts.target, elim_ds.k, opts.order)?
                } else {
                    series.clone()
                };
                if verify_annihilation(&e, &s, opts.order)? {
                    eliminant_verified_order = Some(opts.order);
                } else {
                    warnings.push(format!("eliminant does not annihilate the series mod t^{}", opts.order));
                }
                eliminant_poly = Some(e);
            }
            Err(err) => {
                budget_exhausted = err.is_budget();
                elimination_error = Some(err.to_string());
            }
        }
        timings.elimination_ms = clock.elapsed().as_millis();
    }

    let clock = Instant::now();
    let guess: Option<GuessCandidate> = guess_sweep(&series, &opts.target, opts.guess_max_dz, opts.guess_max_dt, opts.guard)?;
    timings.guess_ms = clock.elapsed().as_millis();
    let mut certificate = None;
    let mut minimal_poly = None;
    if let Some(c) = guess {
        if verify_annihilation(&c.poly, &series, opts.order)? {
            let divides = match (&eliminant_poly, use_deformation) {
                (Some(e), false) => certify_divides(&c.poly, e)?,
                _ => false,
            };
            if !use_deformation && eliminant_poly.is_some() && !divides {
                warnings.push("guessed polynomial does not divide the eliminant".into());
            }
            certificate = Some(if divides {
                Certificate::Both { order: opts.order }
            } else {
                Certificate::SeriesVerified { order: opts.order }
            });
            minimal_poly = Some(c.poly);
        }
    }
    if minimal_poly.is_none() {
        warnings.push("no annihilating polynomial found within the guessing degree caps".into());
    }

    Ok(SolveReport {
        schema: 1,
        system: sys.print(),
        n: ns.n,
        k: ns.k,
        target: opts.target.clone(),
        series_order: opts.order,
        genericity: GenericityInfo::from(&dim),
        deformation_used: use_deformation,
        deformation,
        eliminant: eliminant_poly.as_ref().map(|e| e.to_text()),
        eliminant_degrees: eliminant_poly.as_ref().map(|e| (e.degree_in(1), e.degree_in(0))),
        eliminant_verified_order,
        elimination_error,
        budget_exhausted,
        minimal: minimal_poly.as_ref().map(|m| m.to_text()),
        certificate,
        warnings,
        timings: opts.timings.then_some(timings),
        eliminant_poly,
        minimal_poly,
    })
}
