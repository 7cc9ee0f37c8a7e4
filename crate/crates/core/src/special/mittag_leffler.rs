//! One-parameter Mittag-Leffler function E_α(z) on the real axis, 0 < α ≤ 1.
//!
//! Four evaluation routes, each of which certifies its own accuracy:
//!
//! * `α = 1` reduces to `exp(z)`.
//! * The power series Σ z^j / Γ(αj + 1), compensated-summed. Accepted when
//!   it converges within [`SERIES_MAX_TERMS`] terms and the cancellation
//!   estimate `2ε Σ|t_j|` stays below the requested tolerance. Used for
//!   `z ≥ 0` and for `|z| ≤ 4` on the negative axis.
//! * The algebraic asymptotic expansion
//!   `E_α(-x) ~ Σ_{k≥1} (-1)^{k+1} x^{-k} / Γ(1 - αk)` for `x > 4`, truncated
//!   at its smallest term and accepted only when that term and the
//!   exponentially small remainder are both below tolerance.
//! * The real integral representation, valid for `0 < α < 1`, `x > 0`:
//!
//!   `E_α(-x) = sin(απ)/(απ) ∫_0^∞ exp(-v^{1/α}) x / (v² + 2vx cos(απ) + x²) dv`
//!
//!   evaluated with tanh-sinh quadrature split at the integrand's kinks. The
//!   integrand is positive, so the quadrature error is relative.
//!
//! For `z ∈ [-6, -4]` a second certified route is evaluated and the two
//! must agree to `10 * rel_tol`.

use std::f64::consts::PI;

use super::gamma::{gamma_unchecked, ln_gamma_unchecked, recip_gamma, sin_pi, GAMMA_MAX_ARG};
use super::quadrature::tanh_sinh;
use super::{CompensatedSum, SpecialError};

pub const SERIES_MAX_TERMS: usize = 500;
pub const DEFAULT_Z_MAX: f64 = 5.0;
pub const MIN_REL_TOL: f64 = 1e-15;
pub const MAX_REL_TOL: f64 = 1e-3;

/// Below this |z| the negative-axis series is the first choice.
const SERIES_RADIUS: f64 = 4.0;
/// Overlap band where two routes are cross-checked.
const BAND: (f64, f64) = (4.0, 6.0);
/// exp(-745) underflows to zero.
const EXP_UNDERFLOW: f64 = 745.0;

/// A validated evaluation point for [`mittag_leffler`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlParams {
    alpha: f64,
    z: f64,
    rel_tol: f64,
}

impl MlParams {
    pub fn new(alpha: f64, z: f64, rel_tol: f64) -> Result<Self, SpecialError> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(SpecialError::Domain {
                name: "alpha",
                value: alpha,
            });
        }
        if !z.is_finite() {
            return Err(SpecialError::Domain {
                name: "z",
                value: z,
            });
        }
        if !(MIN_REL_TOL..=MAX_REL_TOL).contains(&rel_tol) {
            return Err(SpecialError::Domain {
                name: "rel_tol",
                value: rel_tol,
            });
        }
        Ok(Self { alpha, z, rel_tol })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }
}

/// Which route produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlStrategy {
    Exponential,
    Series,
    Asymptotic,
    Integral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlEvaluation {
    pub value: f64,
    pub strategy: MlStrategy,
    /// Estimated absolute error.
    pub error_estimate: f64,
}

/// Evaluator with a configurable cutoff for positive arguments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MittagLeffler {
    pub z_max: f64,
}

impl Default for MittagLeffler {
    fn default() -> Self {
        Self {
            z_max: DEFAULT_Z_MAX,
        }
    }
}

/// E_α(z) at the accuracy requested in `q`, with the default `z_max`.
pub fn mittag_leffler(q: &MlParams) -> Result<f64, SpecialError> {
    MittagLeffler::default().evaluate(q).map(|e| e.value)
}

impl MittagLeffler {
    pub fn evaluate(&self, q: &MlParams) -> Result<MlEvaluation, SpecialError> {
        let MlParams { alpha, z, rel_tol } = *q;
        if z > self.z_max {
            return Err(SpecialError::Domain {
                name: "z",
                value: z,
            });
        }
        if z == 0.0 {
            return Ok(MlEvaluation {
                value: 1.0,
                strategy: MlStrategy::Series,
                error_estimate: 0.0,
            });
        }
        if alpha == 1.0 {
            let value = z.exp();
            return Ok(MlEvaluation {
                value,
                strategy: MlStrategy::Exponential,
                error_estimate: f64::EPSILON * value,
            });
        }
        let fail = || SpecialError::AccuracyNotAchieved { alpha, z, rel_tol };
        if z > 0.0 {
            return series(alpha, z, rel_tol)
                .filter(|e| certified(e, rel_tol))
                .ok_or_else(fail);
        }

        let x = -z;
        let mut routes: Vec<MlStrategy> = Vec::with_capacity(3);
        if x <= SERIES_RADIUS {
            routes.push(MlStrategy::Series);
        } else {
            routes.push(MlStrategy::Asymptotic);
        }
        routes.push(MlStrategy::Integral);
        if x > SERIES_RADIUS && x <= BAND.1 {
            routes.push(MlStrategy::Series);
        } else if x >= BAND.0 && x <= SERIES_RADIUS {
            routes.push(MlStrategy::Asymptotic);
        }

        let in_band = (BAND.0..=BAND.1).contains(&x);
        let mut accepted: Option<MlEvaluation> = None;
        for route in routes {
            let candidate = match route {
                MlStrategy::Series => series(alpha, z, rel_tol),
                MlStrategy::Asymptotic => asymptotic(alpha, x, rel_tol),
                MlStrategy::Integral => integral(alpha, x, rel_tol),
                MlStrategy::Exponential => unreachable!(),
            };
            let Some(candidate) = candidate.filter(|e| certified(e, rel_tol)) else {
                continue;
            };
            match accepted {
                None if !in_band => return Ok(candidate),
                None => accepted = Some(candidate),
                Some(first) => {
                    let gap = (first.value - candidate.value).abs();
                    if gap > 10.0 * rel_tol * first.value.abs() {
                        return Err(fail());
                    }
                    return Ok(first);
                }
            }
        }
        // in the band with only one certified route there is nothing to
        // compare against; the certificate of that route stands
        accepted.ok_or_else(fail)
    }
}

fn certified(e: &MlEvaluation, rel_tol: f64) -> bool {
    e.value.is_finite() && e.error_estimate <= rel_tol * e.value.abs()
}

/// z^j / Γ(αj + 1), falling back to logs once either factor leaves range.
pub(crate) fn series_term(alpha: f64, z: f64, j: usize) -> f64 {
    let arg = alpha * j as f64 + 1.0;
    if j < 300 && arg < GAMMA_MAX_ARG {
        let p = z.powi(j as i32);
        if p.is_finite() && p != 0.0 {
            return p / gamma_unchecked(arg);
        }
    }
    let sign = if z < 0.0 && j % 2 == 1 { -1.0 } else { 1.0 };
    sign * (j as f64 * z.abs().ln() - ln_gamma_unchecked(arg)).exp()
}

/// Truncated power series. `None` when the term budget runs out.
pub(crate) fn series(alpha: f64, z: f64, rel_tol: f64) -> Option<MlEvaluation> {
    let mut sum = CompensatedSum::default();
    let mut abs_sum = 0.0;
    let mut small_run = 0;
    let mut prev = f64::INFINITY;
    for j in 0..SERIES_MAX_TERMS {
        let term = series_term(alpha, z, j);
        let t = term.abs();
        sum.add(term);
        abs_sum += t;
        if t <= rel_tol * sum.value().abs() {
            small_run += 1;
            if small_run == 3 {
                // terms decay at least geometrically from here on
                let ratio = (t / prev).min(0.5);
                return Some(MlEvaluation {
                    value: sum.value(),
                    strategy: MlStrategy::Series,
                    error_estimate: 2.0 * f64::EPSILON * abs_sum + t * ratio / (1.0 - ratio),
                });
            }
        } else {
            small_run = 0;
        }
        prev = t;
    }
    None
}

/// Negative-axis asymptotic expansion at x > 0.
pub(crate) fn asymptotic(alpha: f64, x: f64, rel_tol: f64) -> Option<MlEvaluation> {
    let ln_x = x.ln();
    let mut sum = CompensatedSum::default();
    let mut prev_envelope = f64::INFINITY;
    let mut k = 1usize;
    loop {
        let s = alpha * k as f64;
        // |1/Γ(1 - s)| ≤ Γ(s)/π; this envelope ignores the sin(πs) factor
        let envelope = (ln_gamma_unchecked(s) - k as f64 * ln_x).exp() / PI;
        if envelope > prev_envelope || k > 2000 {
            // past the smallest term without meeting the tolerance
            return None;
        }
        let value = sum.value();
        if k > 1 && envelope <= 0.1 * rel_tol * value.abs() {
            let remainder = 2.0 * envelope + exponential_remainder(alpha, x, k);
            return Some(MlEvaluation {
                value,
                strategy: MlStrategy::Asymptotic,
                error_estimate: remainder,
            });
        }
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * (-(k as f64) * ln_x).exp() * recip_gamma(1.0 - s);
        sum.add(term);
        prev_envelope = envelope;
        k += 1;
    }
}

/// Size of the integral-representation contribution from v > x/2, which
/// the algebraic expansion does not see.
fn exponential_remainder(alpha: f64, x: f64, k: usize) -> f64 {
    let half = 0.5 * x;
    let decay = half.powf(1.0 / alpha);
    if decay > EXP_UNDERFLOW {
        return 0.0;
    }
    let s = sin_pi(alpha);
    (-decay).exp() * (1.0 + x) * (k as f64 + 1.0 / (s * s)) / x
}

/// Breakpoints for the integral representation on (0, v_max).
pub(crate) fn integral_breakpoints(alpha: f64, x: f64) -> Vec<f64> {
    let v_max = EXP_UNDERFLOW.powf(alpha);
    let cos = (alpha * PI).cos();
    let mut points = vec![0.0, v_max];
    for p in [x, 1.0, -x * cos] {
        if p > 0.0 && p < v_max {
            points.push(p);
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

/// Integral representation, 0 < α < 1 and x > 0.
pub(crate) fn integral(alpha: f64, x: f64, rel_tol: f64) -> Option<MlEvaluation> {
    if !(alpha < 1.0) || !(x > 0.0) {
        return None;
    }
    let inv_alpha = 1.0 / alpha;
    let (sin, cos) = (alpha * PI).sin_cos();
    let prefactor = sin_pi(alpha) / (alpha * PI);
    let integrand = |v: f64| {
        let damp = (-v.powf(inv_alpha)).exp();
        if damp == 0.0 {
            return 0.0;
        }
        // v² + 2vx cos + x², written without the cancellation near v = -x cos
        let shifted = v + x * cos;
        damp * x / (shifted * shifted + (x * sin) * (x * sin))
    };
    let points = integral_breakpoints(alpha, x);
    let mut total = CompensatedSum::default();
    let mut error = 0.0;
    for w in points.windows(2) {
        let q = tanh_sinh(integrand, w[0], w[1], rel_tol);
        if !q.converged {
            return None;
        }
        total.add(q.value);
        error += q.error;
    }
    let value = prefactor * total.value();
    Some(MlEvaluation {
        value,
        strategy: MlStrategy::Integral,
        // the level difference overstates the tanh-sinh error; keep a
        // rounding floor on top of it
        error_estimate: prefactor * error + 4.0 * f64::EPSILON * value,
    })
}
