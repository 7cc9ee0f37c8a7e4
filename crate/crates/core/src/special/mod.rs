//! Real-argument special functions: Gamma, digamma, Gamma ratios, the
//! Mittag-Leffler function on the real axis and its derivative in the order.
//!
//! Everything here is a pure function of its arguments.

mod derivative;
mod digamma;
mod gamma;
mod mittag_leffler;
mod quadrature;

pub use derivative::{
    ml_alpha_derivative, ml_alpha_derivative_detailed, DerivativeEvaluation, DerivativeQuery,
    DerivativeRoute, DERIVATIVE_MAX_TERMS,
};
pub use digamma::{digamma, EULER_GAMMA};
pub use gamma::{gamma_fn, gamma_ratio, ln_gamma, sin_pi, GAMMA_MAX_ARG};
pub use mittag_leffler::{
    mittag_leffler, MittagLeffler, MlEvaluation, MlParams, MlStrategy, DEFAULT_Z_MAX, MAX_REL_TOL,
    MIN_REL_TOL, SERIES_MAX_TERMS,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("{name} = {value} is outside the domain")]
    Domain { name: &'static str, value: f64 },
    #[error("Gamma({x}) overflows f64")]
    Overflow { x: f64 },
    #[error("cannot certify E_{alpha}({z}) to relative tolerance {rel_tol}")]
    AccuracyNotAchieved { alpha: f64, z: f64, rel_tol: f64 },
    #[error("alpha-derivative series did not converge after {terms} terms")]
    Convergence { terms: usize },
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}
