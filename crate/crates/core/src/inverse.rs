//! Order identification from one measurement d = u(x₀, t₁).
//!
//! The forward solution reduces the problem to the scalar equation
//! `F(α) = Σ_n f_n E_α(-D λ_n t₁^α) sin(nπx₀/l) = d`. The solver scans F on a
//! uniform grid, checks monotonicity numerically, brackets every sign change
//! and refines each bracket by bisection, optionally accelerated by Newton
//! steps that use the analytic F'(α).

use serde::Serialize;
use thiserror::Error;

use crate::forward::{eigenvalue, evaluate_solution, ForwardError, ForwardProblem};
use crate::special::{ml_alpha_derivative, DerivativeQuery, SpecialError};

/// Tolerance used by [`residual`] and friends when none is given.
pub const DEFAULT_REL_TOL: f64 = 1e-12;
/// |F'| below this is treated as a vanishing derivative.
pub const FLAT_DERIVATIVE: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InverseError {
    #[error(transparent)]
    Forward(#[from] ForwardError),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error("invalid {name}: {reason}")]
    Config { name: &'static str, reason: String },
    #[error("no root in range [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },
    #[error("no convergence after {iterations} iterations, bracket [{lo}, {hi}]")]
    MaxIterations { iterations: usize, lo: f64, hi: f64 },
}

fn config_error(name: &'static str, reason: impl Into<String>) -> InverseError {
    InverseError::Config {
        name,
        reason: reason.into(),
    }
}

/// A single observation d = u(x₀, t₁).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Measurement {
    x0: f64,
    t1: f64,
    d: f64,
}

impl Measurement {
    /// Requires 0 < x₀ < l and 0 < t₁ ≤ T.
    pub fn new(p: &ForwardProblem, x0: f64, t1: f64, d: f64) -> Result<Self, InverseError> {
        if !(x0 > 0.0 && x0 < p.length()) {
            return Err(ForwardError::OutOfDomain {
                name: "x0",
                value: x0,
                domain: format!("(0, {})", p.length()),
            }
            .into());
        }
        p.time_point(t1).map_err(|_| ForwardError::OutOfDomain {
            name: "t1",
            value: t1,
            domain: format!("(0, {}]", p.horizon()),
        })?;
        if !d.is_finite() {
            return Err(ForwardError::NonFinite { name: "d" }.into());
        }
        Ok(Self { x0, t1, d })
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn with_value(self, d: f64) -> Self {
        Self { d, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseConfig {
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    /// Absolute tolerance on α.
    pub root_tol: f64,
    pub scan_points: usize,
    pub max_iters: usize,
    pub use_newton: bool,
    /// Relative accuracy of each F evaluation.
    pub rel_tol: f64,
}

impl Default for InverseConfig {
    fn default() -> Self {
        Self {
            alpha_lo: 1e-3,
            alpha_hi: 1.0 - 1e-3,
            root_tol: 1e-10,
            scan_points: 99,
            max_iters: 200,
            use_newton: true,
            rel_tol: DEFAULT_REL_TOL,
        }
    }
}

impl InverseConfig {
    pub fn validate(&self) -> Result<(), InverseError> {
        if !(self.alpha_lo > 0.0) {
            return Err(config_error("alpha_lo", "must be positive"));
        }
        if !(self.alpha_hi < 1.0) {
            return Err(config_error("alpha_hi", "must be below 1"));
        }
        if !(self.alpha_lo < self.alpha_hi) {
            return Err(config_error("alpha_lo", "must be below alpha_hi"));
        }
        if !(self.root_tol > 0.0) {
            return Err(config_error("root_tol", "must be positive"));
        }
        if self.scan_points < 9 {
            return Err(config_error("scan_points", "must be at least 9"));
        }
        if self.max_iters == 0 {
            return Err(config_error("max_iters", "must be positive"));
        }
        if !(1e-15..=1e-3).contains(&self.rel_tol) {
            return Err(config_error("rel_tol", "must lie in [1e-15, 1e-3]"));
        }
        Ok(())
    }
}

fn check_open_order(alpha: f64) -> Result<(), InverseError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(ForwardError::Order(alpha).into())
    }
}

/// F(α) at the measurement point. α = 0 returns the limit Σ f_n φ_n(x₀)/(1 + Dλ_n).
pub fn forward_value(
    p: &ForwardProblem,
    m: &Measurement,
    alpha: f64,
    rel_tol: f64,
) -> Result<f64, InverseError> {
    if alpha == 0.0 {
        return Ok(endpoint_values(p, m).f_zero);
    }
    let x = p.space_point(m.x0)?;
    let t = p.time_point(m.t1)?;
    Ok(evaluate_solution(p, alpha, x, t, rel_tol)?)
}

/// F(α) − d.
pub fn residual(p: &ForwardProblem, m: &Measurement, alpha: f64) -> Result<f64, InverseError> {
    residual_with_tol(p, m, alpha, DEFAULT_REL_TOL)
}

pub fn residual_with_tol(
    p: &ForwardProblem,
    m: &Measurement,
    alpha: f64,
    rel_tol: f64,
) -> Result<f64, InverseError> {
    Ok(forward_value(p, m, alpha, rel_tol)? - m.d)
}

/// F'(α) = Σ f_n φ_n(x₀) d/dα E_α(-D λ_n t₁^α), for 0 < α < 1.
pub fn residual_derivative(
    p: &ForwardProblem,
    m: &Measurement,
    alpha: f64,
) -> Result<f64, InverseError> {
    residual_derivative_with_tol(p, m, alpha, DEFAULT_REL_TOL)
}

pub fn residual_derivative_with_tol(
    p: &ForwardProblem,
    m: &Measurement,
    alpha: f64,
    rel_tol: f64,
) -> Result<f64, InverseError> {
    check_open_order(alpha)?;
    let mut total = 0.0;
    for mode in p.modes() {
        let phi = p.eigenfunction(mode.n, m.x0);
        if phi == 0.0 {
            continue;
        }
        let c = p.diffusion() * eigenvalue(p, mode.n);
        let q = DerivativeQuery::new(alpha, c, m.t1)?.with_rel_tol(rel_tol)?;
        total += mode.f * phi * ml_alpha_derivative(&q)?;
    }
    Ok(total)
}

/// Closed forms of F at the ends of the order interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Endpoints {
    /// lim α→0⁺: E_α(-c t^α) → 1/(1 + c).
    pub f_zero: f64,
    /// α = 1: E_1(-c t) = exp(-c t).
    pub f_one: f64,
}

pub fn endpoint_values(p: &ForwardProblem, m: &Measurement) -> Endpoints {
    let mut f_zero = 0.0;
    let mut f_one = 0.0;
    for mode in p.modes() {
        let weight = mode.f * p.eigenfunction(mode.n, m.x0);
        let c = p.diffusion() * eigenvalue(p, mode.n);
        f_zero += weight / (1.0 + c);
        f_one += weight * (-c * m.t1).exp();
    }
    Endpoints { f_zero, f_one }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeSign {
    pub n: u32,
    pub f: f64,
    pub phi: f64,
    /// f_n φ_n(x₀) > 0
    pub positive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessCheck {
    pub holds: bool,
    pub modes: Vec<ModeSign>,
}

/// True when every contributing term f_n sin(nπx₀/l) is strictly positive.
pub fn check_uniqueness_hypothesis(p: &ForwardProblem, m: &Measurement) -> UniquenessCheck {
    let modes: Vec<ModeSign> = p
        .modes()
        .iter()
        .map(|mode| {
            let phi = p.eigenfunction(mode.n, m.x0);
            ModeSign {
                n: mode.n,
                f: mode.f,
                phi,
                positive: mode.f * phi > 0.0,
            }
        })
        .collect();
    UniquenessCheck {
        holds: modes.iter().all(|s| s.positive),
        modes,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotonicity {
    Verified,
    Violated,
    NotChecked,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// A cell [lo, hi] of the scan grid with F − d of opposite signs at the
/// ends, or a grid point where F − d vanishes (lo == hi).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    /// (α, F(α) − d) on the uniform grid.
    pub grid: Vec<(f64, f64)>,
    pub monotone: Monotonicity,
    pub direction: Option<Direction>,
    pub brackets: Vec<Bracket>,
}

pub fn scan_grid(cfg: &InverseConfig) -> Vec<f64> {
    let n = cfg.scan_points;
    let span = cfg.alpha_hi - cfg.alpha_lo;
    (0..n)
        .map(|i| {
            if i + 1 == n {
                cfg.alpha_hi
            } else {
                cfg.alpha_lo + span * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Evaluates F − d on the scan grid and locates sign changes.
pub fn scan_bracket(
    p: &ForwardProblem,
    m: &Measurement,
    cfg: &InverseConfig,
) -> Result<ScanResult, InverseError> {
    cfg.validate()?;
    let grid = scan_grid(cfg)
        .into_iter()
        .map(|a| Ok((a, residual_with_tol(p, m, a, cfg.rel_tol)?)))
        .collect::<Result<Vec<_>, InverseError>>()?;

    let diffs: Vec<f64> = grid.windows(2).map(|w| w[1].1 - w[0].1).collect();
    let direction = if diffs.iter().all(|&d| d < 0.0) {
        Some(Direction::Decreasing)
    } else if diffs.iter().all(|&d| d > 0.0) {
        Some(Direction::Increasing)
    } else {
        None
    };
    let monotone = if direction.is_some() {
        Monotonicity::Verified
    } else {
        Monotonicity::Violated
    };

    let mut brackets = Vec::new();
    for (i, &(a, fa)) in grid.iter().enumerate() {
        if fa == 0.0 {
            brackets.push(Bracket {
                lo: a,
                hi: a,
                f_lo: fa,
                f_hi: fa,
            });
            continue;
        }
        if let Some(&(b, fb)) = grid.get(i + 1) {
            if fa * fb < 0.0 {
                brackets.push(Bracket {
                    lo: a,
                    hi: b,
                    f_lo: fa,
                    f_hi: fb,
                });
            }
        }
    }
    Ok(ScanResult {
        grid,
        monotone,
        direction,
        brackets,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceStep {
    pub iteration: usize,
    pub alpha: f64,
    pub residual: f64,
    pub newton: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootStatus {
    Unique,
    Multiple,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InversionReport {
    pub alpha_hat: f64,
    /// Every root found, ascending; `alpha_hat` is the first.
    pub roots: Vec<f64>,
    pub status: RootStatus,
    pub residual: f64,
    pub derivative_at_root: f64,
    pub monotone: Monotonicity,
    pub uniqueness_hypothesis: bool,
    /// |1/F'(α̂)|, infinite when F' vanishes.
    pub sensitivity: f64,
    /// Iterations of the solve for `alpha_hat`.
    pub trace: Vec<TraceStep>,
}

/// Recovers α from the measurement.
pub fn invert_order(
    p: &ForwardProblem,
    m: &Measurement,
    cfg: &InverseConfig,
) -> Result<InversionReport, InverseError> {
    let scan = scan_bracket(p, m, cfg)?;
    if scan.brackets.is_empty() {
        return Err(InverseError::NoRoot {
            lo: cfg.alpha_lo,
            hi: cfg.alpha_hi,
        });
    }
    let mut roots = Vec::with_capacity(scan.brackets.len());
    let mut first_trace = None;
    for b in &scan.brackets {
        let mut trace = Vec::new();
        roots.push(solve_bracket(p, m, cfg, b, &mut trace)?);
        first_trace.get_or_insert(trace);
    }
    let status = if roots.len() == 1 {
        RootStatus::Unique
    } else {
        RootStatus::Multiple
    };
    build_report(
        p,
        m,
        cfg,
        roots,
        status,
        scan.monotone,
        first_trace.unwrap_or_default(),
    )
}

/// Solves inside a caller-supplied bracket without scanning; monotonicity
/// is reported as not checked.
pub fn invert_in_bracket(
    p: &ForwardProblem,
    m: &Measurement,
    cfg: &InverseConfig,
    lo: f64,
    hi: f64,
) -> Result<InversionReport, InverseError> {
    cfg.validate()?;
    if !(lo >= cfg.alpha_lo && hi <= cfg.alpha_hi && lo < hi) {
        return Err(config_error(
            "bracket",
            format!("[{lo}, {hi}] must lie inside the search interval"),
        ));
    }
    let f_lo = residual_with_tol(p, m, lo, cfg.rel_tol)?;
    let f_hi = residual_with_tol(p, m, hi, cfg.rel_tol)?;
    if f_lo * f_hi > 0.0 {
        return Err(InverseError::NoRoot { lo, hi });
    }
    let mut trace = Vec::new();
    let root = solve_bracket(p, m, cfg, &Bracket { lo, hi, f_lo, f_hi }, &mut trace)?;
    build_report(
        p,
        m,
        cfg,
        vec![root],
        RootStatus::Unique,
        Monotonicity::NotChecked,
        trace,
    )
}

fn build_report(
    p: &ForwardProblem,
    m: &Measurement,
    cfg: &InverseConfig,
    roots: Vec<f64>,
    status: RootStatus,
    monotone: Monotonicity,
    trace: Vec<TraceStep>,
) -> Result<InversionReport, InverseError> {
    let alpha_hat = roots[0];
    let residual = residual_with_tol(p, m, alpha_hat, cfg.rel_tol)?;
    let derivative_at_root = residual_derivative_with_tol(p, m, alpha_hat, cfg.rel_tol)?;
    Ok(InversionReport {
        alpha_hat,
        roots,
        status,
        residual,
        derivative_at_root,
        monotone,
        uniqueness_hypothesis: check_uniqueness_hypothesis(p, m).holds,
        sensitivity: conditioning(derivative_at_root),
        trace,
    })
}

fn conditioning(derivative: f64) -> f64 {
    if derivative.abs() < FLAT_DERIVATIVE {
        f64::INFINITY
    } else {
        (1.0 / derivative).abs()
    }
}

/// Safeguarded Newton–bisection on one bracket. The returned α is within
/// `root_tol / 2` of a sign change of F − d.
fn solve_bracket(
    p: &ForwardProblem,
    m: &Measurement,
    cfg: &InverseConfig,
    bracket: &Bracket,
    trace: &mut Vec<TraceStep>,
) -> Result<f64, InverseError> {
    let Bracket {
        mut lo,
        mut hi,
        mut f_lo,
        f_hi,
    } = *bracket;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    let f = |a: f64| residual_with_tol(p, m, a, cfg.rel_tol);
    let df = |a: f64| {
        residual_derivative_with_tol(p, m, a, cfg.rel_tol)
            .ok()
            .filter(|d| d.abs() >= FLAT_DERIVATIVE)
    };

    let mut use_newton = cfg.use_newton;
    // latest iterate with its value and slope, the Newton anchor
    let mut anchor: Option<(f64, f64, f64)> = None;
    let mut previous_width = hi - lo;
    let mut iteration = 0;

    while iteration < cfg.max_iters {
        if hi - lo <= cfg.root_tol {
            return Ok(0.5 * (lo + hi));
        }
        iteration += 1;

        let width = hi - lo;
        let newton = anchor.and_then(|(a, fa, da)| {
            let next = a - fa / da;
            let step = (next - a).abs();
            (next > lo && next < hi && step < 0.5 * previous_width).then_some((next, step))
        });
        previous_width = width;

        let (candidate, newton_step) = match newton {
            Some((c, step)) => (c, Some(step)),
            None => (0.5 * (lo + hi), None),
        };
        let fc = f(candidate)?;
        trace.push(TraceStep {
            iteration,
            alpha: candidate,
            residual: fc,
            newton: newton_step.is_some(),
        });
        if fc == 0.0 {
            return Ok(candidate);
        }
        if fc.signum() == f_lo.signum() {
            lo = candidate;
            f_lo = fc;
        } else {
            hi = candidate;
        }

        // a converged Newton iterate only pins one side of the bracket; probe
        // half a tolerance across the root to pin the other side too
        if let Some(step) = newton_step {
            if step < cfg.root_tol && iteration < cfg.max_iters && hi - lo > cfg.root_tol {
                let probe = if candidate == lo {
                    (candidate + 0.5 * cfg.root_tol).min(hi)
                } else {
                    (candidate - 0.5 * cfg.root_tol).max(lo)
                };
                iteration += 1;
                let fp = f(probe)?;
                trace.push(TraceStep {
                    iteration,
                    alpha: probe,
                    residual: fp,
                    newton: false,
                });
                if fp == 0.0 {
                    return Ok(probe);
                }
                if fp.signum() == f_lo.signum() {
                    lo = probe;
                    f_lo = fp;
                } else {
                    hi = probe;
                }
            }
        }

        anchor = if use_newton {
            match df(candidate) {
                Some(d) => Some((candidate, fc, d)),
                None => {
                    use_newton = false;
                    None
                }
            }
        } else {
            None
        };
    }
    if hi - lo <= cfg.root_tol {
        return Ok(0.5 * (lo + hi));
    }
    Err(InverseError::MaxIterations {
        iterations: cfg.max_iters,
        lo,
        hi,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityRow {
    pub alpha: f64,
    pub value: f64,
    pub derivative: f64,
    pub conditioning: f64,
}

/// (α, F(α), F'(α), |1/F'(α)|) for each α.
pub fn sensitivity_profile(
    p: &ForwardProblem,
    m: &Measurement,
    alphas: &[f64],
) -> Result<Vec<SensitivityRow>, InverseError> {
    alphas
        .iter()
        .map(|&alpha| {
            check_open_order(alpha)?;
            let value = forward_value(p, m, alpha, DEFAULT_REL_TOL)?;
            let derivative = residual_derivative(p, m, alpha)?;
            Ok(SensitivityRow {
                alpha,
                value,
                derivative,
                conditioning: conditioning(derivative),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointResidual {
    pub t: f64,
    pub d: f64,
    pub residual: f64,
}

/// F(α) − d_k at further times t_k at the same x₀. Diagnostic only.
pub fn point_residuals(
    p: &ForwardProblem,
    x0: f64,
    points: &[(f64, f64)],
    alpha: f64,
    rel_tol: f64,
) -> Result<Vec<PointResidual>, InverseError> {
    points
        .iter()
        .map(|&(t, d)| {
            let m = Measurement::new(p, x0, t, d)?;
            Ok(PointResidual {
                t,
                d,
                residual: residual_with_tol(p, &m, alpha, rel_tol)?,
            })
        })
        .collect()
}
