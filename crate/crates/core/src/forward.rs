//! The forward problem: homogeneous Dirichlet data on (0, l), finite sine-mode
//! initial data, spectral solution
//! `u(x, t) = Σ_n f_n E_α(-D λ_n t^α) sin(nπx/l)` with `λ_n = n²π²/l²`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::special::{mittag_leffler, sin_pi, MlParams, SpecialError, MIN_REL_TOL};

/// Minimum number of samples accepted by [`sine_coefficient`].
pub const MIN_SAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ForwardError {
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{name} must be finite")]
    NonFinite { name: &'static str },
    #[error("mode index must be at least 1")]
    ZeroModeIndex,
    #[error("mode index {0} appears more than once")]
    DuplicateMode(u32),
    #[error("initial data has no non-zero modes")]
    NoModes,
    #[error("{name} = {value} lies outside {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: String,
    },
    #[error("order alpha = {0} must lie in (0, 1]")]
    Order(f64),
    #[error("evaluation grid is empty")]
    EmptyGrid,
    #[error("need at least {MIN_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error("samples are not on a uniform grid starting at 0")]
    NonUniformGrid,
    #[error(transparent)]
    Special(#[from] SpecialError),
}

/// One term f_n sin(nπx/l) of the initial data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub n: u32,
    pub f: f64,
}

/// A validated forward problem. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardProblem {
    diffusion: f64,
    length: f64,
    modes: Vec<Mode>,
    horizon: f64,
}

/// A point of [0, l].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SpacePoint(f64);

/// A time in (0, T].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct TimePoint(f64);

impl SpacePoint {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl TimePoint {
    pub fn value(self) -> f64 {
        self.0
    }
}

fn positive(name: &'static str, value: f64) -> Result<f64, ForwardError> {
    if !value.is_finite() {
        return Err(ForwardError::NonFinite { name });
    }
    if value <= 0.0 {
        return Err(ForwardError::NonPositive { name, value });
    }
    Ok(value)
}

/// Builds a [`ForwardProblem`] from raw inputs.
///
/// Zero coefficients are dropped and the modes sorted by index; duplicate
/// indices are rejected rather than merged.
pub fn make_problem<I>(
    diffusion: f64,
    length: f64,
    modes: I,
    horizon: f64,
) -> Result<ForwardProblem, ForwardError>
where
    I: IntoIterator<Item = (u32, f64)>,
{
    let diffusion = positive("D", diffusion)?;
    let length = positive("l", length)?;
    let horizon = positive("T", horizon)?;

    let mut kept: Vec<Mode> = Vec::new();
    let mut seen: Vec<u32> = Vec::new();
    for (n, f) in modes {
        if n == 0 {
            return Err(ForwardError::ZeroModeIndex);
        }
        if !f.is_finite() {
            return Err(ForwardError::NonFinite { name: "f_n" });
        }
        if seen.contains(&n) {
            return Err(ForwardError::DuplicateMode(n));
        }
        seen.push(n);
        if f != 0.0 {
            kept.push(Mode { n, f });
        }
    }
    if kept.is_empty() {
        return Err(ForwardError::NoModes);
    }
    kept.sort_by_key(|m| m.n);
    Ok(ForwardProblem {
        diffusion,
        length,
        modes: kept,
        horizon,
    })
}

impl ForwardProblem {
    pub fn diffusion(&self) -> f64 {
        self.diffusion
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn space_point(&self, x: f64) -> Result<SpacePoint, ForwardError> {
        if !(0.0..=self.length).contains(&x) {
            return Err(ForwardError::OutOfDomain {
                name: "x",
                value: x,
                domain: format!("[0, {}]", self.length),
            });
        }
        Ok(SpacePoint(x))
    }

    pub fn time_point(&self, t: f64) -> Result<TimePoint, ForwardError> {
        if !(t > 0.0 && t <= self.horizon) {
            return Err(ForwardError::OutOfDomain {
                name: "t",
                value: t,
                domain: format!("(0, {}]", self.horizon),
            });
        }
        Ok(TimePoint(t))
    }

    /// sin(nπx/l), exactly zero at x = 0 and x = l.
    pub fn eigenfunction(&self, n: u32, x: f64) -> f64 {
        sin_pi(n as f64 * (x / self.length))
    }

    /// Σ f_n sin(nπx/l), the data the solution starts from.
    pub fn initial_value(&self, x: SpacePoint) -> f64 {
        self.modes
            .iter()
            .map(|m| m.f * self.eigenfunction(m.n, x.0))
            .sum()
    }
}

/// λ_n = n²π²/l².
pub fn eigenvalue(p: &ForwardProblem, n: u32) -> f64 {
    let k = n as f64 * PI / p.length;
    k * k
}

fn check_order(alpha: f64) -> Result<(), ForwardError> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(ForwardError::Order(alpha))
    }
}

/// E_α(-D λ_n t^α) for one mode.
pub(crate) fn mode_decay(
    p: &ForwardProblem,
    n: u32,
    alpha: f64,
    t: f64,
    rel_tol: f64,
) -> Result<f64, ForwardError> {
    let z = -p.diffusion * eigenvalue(p, n) * t.powf(alpha);
    Ok(mittag_leffler(&MlParams::new(alpha, z, rel_tol)?)?)
}

/// u(x, t). Each Mittag-Leffler factor is evaluated at `rel_tol / N`.
pub fn evaluate_solution(
    p: &ForwardProblem,
    alpha: f64,
    x: SpacePoint,
    t: TimePoint,
    rel_tol: f64,
) -> Result<f64, ForwardError> {
    check_order(alpha)?;
    let per_mode = (rel_tol / p.modes.len() as f64).max(MIN_REL_TOL);
    let mut u = 0.0;
    for m in &p.modes {
        let phi = p.eigenfunction(m.n, x.0);
        if phi == 0.0 {
            continue;
        }
        u += m.f * mode_decay(p, m.n, alpha, t.0, per_mode)? * phi;
    }
    Ok(u)
}

/// `M[i][j] = u(xs[i], ts[j])`.
pub fn evaluate_solution_grid(
    p: &ForwardProblem,
    alpha: f64,
    xs: &[SpacePoint],
    ts: &[TimePoint],
    rel_tol: f64,
) -> Result<Vec<Vec<f64>>, ForwardError> {
    if xs.is_empty() || ts.is_empty() {
        return Err(ForwardError::EmptyGrid);
    }
    check_order(alpha)?;
    let per_mode = (rel_tol / p.modes.len() as f64).max(MIN_REL_TOL);
    // the time factors do not depend on x
    let decay: Vec<Vec<f64>> = ts
        .iter()
        .map(|t| {
            p.modes
                .iter()
                .map(|m| mode_decay(p, m.n, alpha, t.0, per_mode))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    Ok(xs
        .iter()
        .map(|x| {
            decay
                .iter()
                .map(|row| {
                    let mut u = 0.0;
                    for (m, e) in p.modes.iter().zip(row) {
                        let phi = p.eigenfunction(m.n, x.0);
                        if phi != 0.0 {
                            u += m.f * e * phi;
                        }
                    }
                    u
                })
                .collect()
        })
        .collect())
}

/// (2/l) ∫_0^l f(x) sin(nπx/l) dx by the composite trapezoid rule on uniform
/// samples `(x_i, f(x_i))` with `x_0 = 0` and `x_last = l`. Error is O(h²).
pub fn sine_coefficient(samples: &[(f64, f64)], n: u32) -> Result<f64, ForwardError> {
    if samples.len() < MIN_SAMPLES {
        return Err(ForwardError::TooFewSamples(samples.len()));
    }
    if n == 0 {
        return Err(ForwardError::ZeroModeIndex);
    }
    let length = samples[samples.len() - 1].0;
    let h = length / (samples.len() - 1) as f64;
    if !(h > 0.0) || samples[0].0.abs() > 1e-12 * length {
        return Err(ForwardError::NonUniformGrid);
    }
    for (i, (x, _)) in samples.iter().enumerate() {
        if (x - i as f64 * h).abs() > 1e-9 * length {
            return Err(ForwardError::NonUniformGrid);
        }
    }
    let last = samples.len() - 1;
    let weighted: f64 = samples
        .iter()
        .enumerate()
        .map(|(i, &(x, f))| {
            let w = if i == 0 || i == last { 0.5 } else { 1.0 };
            w * f * sin_pi(n as f64 * (x / length))
        })
        .sum();
    Ok(2.0 / length * h * weighted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_one() -> ForwardProblem {
        make_problem(0.1, PI, [(2, 0.5)], 4.0).unwrap()
    }

    fn example_two() -> ForwardProblem {
        make_problem(0.05, PI, [(1, 2.0), (3, 0.5)], 20.0).unwrap()
    }

    #[test]
    fn canonicalizes_modes() {
        let p = make_problem(1.0, 2.0, [(5, 1.0), (2, 0.0), (1, -3.0)], 1.0).unwrap();
        assert_eq!(p.modes(), &[Mode { n: 1, f: -3.0 }, Mode { n: 5, f: 1.0 }]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            make_problem(1.0, PI, [(1, 1.0), (1, 2.0)], 1.0),
            Err(ForwardError::DuplicateMode(1))
        );
        assert!(matches!(
            make_problem(-0.1, PI, [(1, 1.0)], 1.0),
            Err(ForwardError::NonPositive { name: "D", .. })
        ));
        assert!(matches!(
            make_problem(0.1, 0.0, [(1, 1.0)], 1.0),
            Err(ForwardError::NonPositive { name: "l", .. })
        ));
        assert!(matches!(
            make_problem(0.1, PI, [(1, 1.0)], 0.0),
            Err(ForwardError::NonPositive { name: "T", .. })
        ));
        assert_eq!(
            make_problem(0.1, PI, [(1, 0.0)], 1.0),
            Err(ForwardError::NoModes)
        );
        assert_eq!(
            make_problem(0.1, PI, [(0, 1.0)], 1.0),
            Err(ForwardError::ZeroModeIndex)
        );
        assert!(make_problem(f64::NAN, PI, [(1, 1.0)], 1.0).is_err());
    }

    #[test]
    fn eigenvalues() {
        let p = example_one();
        assert!((eigenvalue(&p, 1) - 1.0).abs() < 1e-15);
        assert!((eigenvalue(&p, 3) - 9.0).abs() < 1e-14);
        let wide = make_problem(1.0, 2.0 * PI, [(1, 1.0)], 1.0).unwrap();
        assert!((eigenvalue(&wide, 2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn domain_checks() {
        let p = example_one();
        assert!(p.space_point(-1e-9).is_err());
        assert!(p.space_point(PI + 1e-9).is_err());
        assert!(p.time_point(0.0).is_err());
        assert!(p.time_point(4.0 + 1e-9).is_err());
        assert!(p.time_point(4.0).is_ok());
        let (x, t) = (p.space_point(1.0).unwrap(), p.time_point(1.0).unwrap());
        assert_eq!(
            evaluate_solution(&p, 0.0, x, t, 1e-12),
            Err(ForwardError::Order(0.0))
        );
        assert_eq!(
            evaluate_solution(&p, 1.5, x, t, 1e-12),
            Err(ForwardError::Order(1.5))
        );
    }

    #[test]
    fn example_values() {
        let p = example_one();
        let u = evaluate_solution(
            &p,
            0.75,
            p.space_point(PI / 4.0).unwrap(),
            p.time_point(2.0).unwrap(),
            1e-12,
        )
        .unwrap();
        assert!((u - 0.25818).abs() <= 5e-5, "{u}");
        let p = example_two();
        let u = evaluate_solution(
            &p,
            0.5,
            p.space_point(PI / 6.0).unwrap(),
            p.time_point(10.0).unwrap(),
            1e-12,
        )
        .unwrap();
        assert!((u - 1.0112).abs() <= 5e-4, "{u}");
    }

    #[test]
    fn boundary_is_exactly_zero() {
        for p in [example_one(), example_two()] {
            for t in [0.1, 1.0, 3.9] {
                let t = p.time_point(t).unwrap();
                for x in [0.0, PI] {
                    let u =
                        evaluate_solution(&p, 0.6, p.space_point(x).unwrap(), t, 1e-12).unwrap();
                    assert_eq!(u, 0.0);
                }
            }
        }
    }

    #[test]
    fn grid_matches_pointwise() {
        let p = example_two();
        let xs: Vec<_> = [0.3, 1.0, 2.9]
            .iter()
            .map(|&x| p.space_point(x).unwrap())
            .collect();
        let ts: Vec<_> = [0.5, 4.0, 19.0]
            .iter()
            .map(|&t| p.time_point(t).unwrap())
            .collect();
        let grid = evaluate_solution_grid(&p, 0.4, &xs, &ts, 1e-12).unwrap();
        for (i, x) in xs.iter().enumerate() {
            for (j, t) in ts.iter().enumerate() {
                assert_eq!(
                    grid[i][j],
                    evaluate_solution(&p, 0.4, *x, *t, 1e-12).unwrap()
                );
            }
        }
        assert_eq!(
            evaluate_solution_grid(&p, 0.4, &[], &ts, 1e-12),
            Err(ForwardError::EmptyGrid)
        );
    }

    #[test]
    fn sine_coefficients_from_samples() {
        let grid = |f: &dyn Fn(f64) -> f64| -> Vec<(f64, f64)> {
            (0..1024)
                .map(|i| PI * i as f64 / 1023.0)
                .map(|x| (x, f(x)))
                .collect()
        };
        let s = grid(&|x: f64| (2.0 * x).sin());
        assert!((sine_coefficient(&s, 2).unwrap() - 1.0).abs() < 1e-3);
        assert!(sine_coefficient(&s, 1).unwrap().abs() < 1e-3);
        let s = grid(&|x: f64| 2.0 * x.sin() + 0.5 * (3.0 * x).sin());
        assert!((sine_coefficient(&s, 3).unwrap() - 0.5).abs() < 1e-3);
        assert!((sine_coefficient(&s, 1).unwrap() - 2.0).abs() < 1e-3);

        assert_eq!(
            sine_coefficient(&s[..10], 1),
            Err(ForwardError::TooFewSamples(10))
        );
        let mut bent = s.clone();
        bent[100].0 += 1e-3;
        assert_eq!(
            sine_coefficient(&bent, 1),
            Err(ForwardError::NonUniformGrid)
        );
    }
}
