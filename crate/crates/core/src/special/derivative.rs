//! d/dα of G(α) = E_α(-c t^α).
//!
//! Term-wise differentiation of the power series gives
//!
//! ```text
//! G'(α) = Σ_{j≥1} (-c)^j j t^{αj} (ln t + γ_j) / Γ(αj + 1),   γ_j = -ψ(αj + 1)
//! ```
//!
//! The γ_j form follows from ψ(z) = -γ - 1/z + Σ_n (1/n - 1/(n + z)) evaluated
//! at z = αj + 1. The series is summed until three consecutive terms fall
//! below tolerance. If it runs out of budget or cancels too badly, the
//! derivative is taken under the integral representation instead.

use std::f64::consts::PI;

use super::digamma::digamma_unchecked;
use super::mittag_leffler::{integral_breakpoints, series_term};
use super::quadrature::tanh_sinh;
use super::{CompensatedSum, SpecialError};

pub const DERIVATIVE_MAX_TERMS: usize = 1000;
pub const DEFAULT_DERIVATIVE_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeQuery {
    alpha: f64,
    c: f64,
    t: f64,
    rel_tol: f64,
}

impl DerivativeQuery {
    pub fn new(alpha: f64, c: f64, t: f64) -> Result<Self, SpecialError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(SpecialError::Domain {
                name: "alpha",
                value: alpha,
            });
        }
        if !(c > 0.0) || c.is_infinite() {
            return Err(SpecialError::Domain {
                name: "c",
                value: c,
            });
        }
        if !(t > 0.0) || t.is_infinite() {
            return Err(SpecialError::Domain {
                name: "t",
                value: t,
            });
        }
        Ok(Self {
            alpha,
            c,
            t,
            rel_tol: DEFAULT_DERIVATIVE_REL_TOL,
        })
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Result<Self, SpecialError> {
        if !(1e-15..=1e-3).contains(&rel_tol) {
            return Err(SpecialError::Domain {
                name: "rel_tol",
                value: rel_tol,
            });
        }
        self.rel_tol = rel_tol;
        Ok(self)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeRoute {
    Series,
    Integral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeEvaluation {
    pub value: f64,
    pub route: DerivativeRoute,
    pub terms: usize,
}

/// G'(α) for G(α) = E_α(-c t^α).
pub fn ml_alpha_derivative(q: &DerivativeQuery) -> Result<f64, SpecialError> {
    ml_alpha_derivative_detailed(q).map(|d| d.value)
}

pub fn ml_alpha_derivative_detailed(
    q: &DerivativeQuery,
) -> Result<DerivativeEvaluation, SpecialError> {
    let terms = match derivative_series(q) {
        Ok(ev) => return Ok(ev),
        Err(terms) => terms,
    };
    derivative_integral(q).ok_or(SpecialError::Convergence { terms })
}

/// `Err(n)` reports how many terms were summed before giving up.
fn derivative_series(q: &DerivativeQuery) -> Result<DerivativeEvaluation, usize> {
    let DerivativeQuery {
        alpha,
        c,
        t,
        rel_tol,
    } = *q;
    let ln_t = t.ln();
    let z = -c * t.powf(alpha);
    let mut sum = CompensatedSum::default();
    let mut abs_sum = 0.0;
    let mut small_run = 0;
    for j in 1..=DERIVATIVE_MAX_TERMS {
        let base = series_term(alpha, z, j) * j as f64;
        let gamma_j = -digamma_unchecked(alpha * j as f64 + 1.0);
        let y = base * ln_t;
        let y_bar = base * gamma_j;
        sum.add(y);
        sum.add(y_bar);
        let size = y.abs() + y_bar.abs();
        abs_sum += size;
        if !sum.value().is_finite() {
            return Err(j);
        }
        if size <= rel_tol * sum.value().abs() {
            small_run += 1;
            if small_run == 3 {
                let value = sum.value();
                if 2.0 * f64::EPSILON * abs_sum > rel_tol * value.abs() {
                    return Err(j);
                }
                return Ok(DerivativeEvaluation {
                    value,
                    route: DerivativeRoute::Series,
                    terms: j,
                });
            }
        } else {
            small_run = 0;
        }
    }
    Err(DERIVATIVE_MAX_TERMS)
}

/// Differentiates
/// `E_α(-x) = P(α) ∫ exp(-v^{1/α}) x / Q dv`, `P = sin(απ)/(απ)`,
/// `Q = v² + 2vx cos(απ) + x²`, along x = c t^α.
fn derivative_integral(q: &DerivativeQuery) -> Option<DerivativeEvaluation> {
    let DerivativeQuery {
        alpha,
        c,
        t,
        rel_tol,
    } = *q;
    let x = c * t.powf(alpha);
    let dx_dalpha = x * t.ln();
    let (sin, cos) = (alpha * PI).sin_cos();
    let prefactor = sin / (alpha * PI);
    let log_prefactor_slope = PI * cos / sin - 1.0 / alpha;
    let inv_alpha = 1.0 / alpha;

    let integrand = |v: f64| {
        let p = v.powf(inv_alpha);
        let damp = (-p).exp();
        if damp == 0.0 {
            return 0.0;
        }
        let shifted = v + x * cos;
        let quad = shifted * shifted + (x * sin) * (x * sin);
        let h = x / quad;
        let damp_slope = if v > 0.0 {
            p * v.ln() * inv_alpha * inv_alpha
        } else {
            0.0
        };
        let h_alpha = 2.0 * PI * v * x * x * sin / (quad * quad);
        let h_x = (v * v - x * x) / (quad * quad);
        damp * ((log_prefactor_slope + damp_slope) * h + h_alpha + h_x * dx_dalpha)
    };

    let mut total = CompensatedSum::default();
    for w in integral_breakpoints(alpha, x).windows(2) {
        let est = tanh_sinh(integrand, w[0], w[1], rel_tol);
        if !est.converged {
            return None;
        }
        total.add(est.value);
    }
    Some(DerivativeEvaluation {
        value: prefactor * total.value(),
        route: DerivativeRoute::Integral,
        terms: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{mittag_leffler, MlParams};

    fn g(alpha: f64, c: f64, t: f64) -> f64 {
        let z = -c * t.powf(alpha);
        mittag_leffler(&MlParams::new(alpha, z, 1e-14).unwrap()).unwrap()
    }

    fn central(alpha: f64, c: f64, t: f64) -> f64 {
        let h = 1e-6;
        (g(alpha + h, c, t) - g(alpha - h, c, t)) / (2.0 * h)
    }

    #[test]
    fn unit_time_drops_log_terms() {
        let q = DerivativeQuery::new(0.5, 0.4, 1.0).unwrap();
        let d = ml_alpha_derivative(&q).unwrap();
        assert!(d.is_finite());
        // only the digamma part survives; compare with the finite difference
        assert!(((d - central(0.5, 0.4, 1.0)) / d).abs() < 1e-5);
    }

    #[test]
    fn example_parameters_match_finite_differences() {
        for &(a, c, t) in &[(0.75, 0.4, 2.0), (0.5, 0.05, 10.0), (0.5, 0.45, 10.0)] {
            let d = ml_alpha_derivative(&DerivativeQuery::new(a, c, t).unwrap()).unwrap();
            let fd = central(a, c, t);
            assert!(
                ((d - fd) / fd).abs() < 1e-5,
                "α={a} c={c} t={t}: {d} vs {fd}"
            );
        }
    }

    #[test]
    fn integral_route_agrees_with_series() {
        for &(a, c, t) in &[
            (0.3, 0.4, 2.0),
            (0.6, 0.45, 10.0),
            (0.9, 0.05, 10.0),
            (0.75, 1.3, 0.5),
        ] {
            let q = DerivativeQuery::new(a, c, t).unwrap();
            let s = derivative_series(&q).unwrap();
            let i = derivative_integral(&q).unwrap();
            assert!(
                ((s.value - i.value) / s.value).abs() < 1e-9,
                "{s:?} vs {i:?}"
            );
        }
    }

    #[test]
    fn falls_back_to_integral_when_series_cancels() {
        // x = c t^α ≈ 25 with α = 0.3: the series is hopeless in f64
        let q = DerivativeQuery::new(0.3, 5.0, 200.0).unwrap();
        let d = ml_alpha_derivative_detailed(&q).unwrap();
        assert_eq!(d.route, DerivativeRoute::Integral);
        let fd = central(0.3, 5.0, 200.0);
        assert!(((d.value - fd) / fd).abs() < 1e-5, "{} vs {fd}", d.value);
    }

    #[test]
    fn rejects_invalid_queries() {
        assert!(DerivativeQuery::new(1.0, 0.4, 2.0).is_err());
        assert!(DerivativeQuery::new(0.0, 0.4, 2.0).is_err());
        assert!(DerivativeQuery::new(0.5, 0.0, 2.0).is_err());
        assert!(DerivativeQuery::new(0.5, 0.4, -1.0).is_err());
        assert!(DerivativeQuery::new(0.5, 0.4, 1.0)
            .unwrap()
            .with_rel_tol(0.0)
            .is_err());
    }
}
