//! Built-in numerical checks against stored reference values and
//! internal consistency relations.

use std::f64::consts::PI;

use crate::forward::{make_problem, ForwardProblem};
use crate::inverse::{
    endpoint_values, forward_value, invert_order, residual, residual_derivative, InverseConfig,
    Measurement, RootStatus,
};
use crate::special::{digamma, gamma_fn, mittag_leffler, MlParams};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    /// Worst error observed, in the check's own measure.
    pub error: f64,
    pub tolerance: f64,
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.error <= self.tolerance
    }

    pub fn line(&self) -> String {
        let status = if self.passed() { "pass" } else { "fail" };
        let mut s = format!(
            "check={} status={status} error={:e} tol={:e}",
            self.name, self.error, self.tolerance
        );
        if let Some(d) = &self.detail {
            s.push_str(" detail=");
            s.push_str(d);
        }
        s
    }
}

fn rel(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

fn ml(alpha: f64, z: f64) -> f64 {
    MlParams::new(alpha, z, 1e-14)
        .and_then(|p| mittag_leffler(&p))
        .unwrap_or(f64::NAN)
}

type Check = (&'static str, f64, fn() -> (f64, Option<String>));

/// Worst error of a sequence, with NaN (a failed evaluation) winning.
fn worst(errors: impl IntoIterator<Item = f64>) -> f64 {
    errors.into_iter().fold(0.0, |acc, e| {
        if e.is_nan() || acc.is_nan() {
            f64::NAN
        } else {
            acc.max(e)
        }
    })
}

fn gamma_check() -> (f64, Option<String>) {
    // 40-digit references
    let table = [
        (0.1, 9.513_507_698_668_731_836_3),
        (2.5, 1.329_340_388_179_137_020_5),
        (7.3, 1_271.423_633_663_909_273_1),
        (55.5, 1.708_096_280_799_410_638_4e72),
    ];
    (
        worst(
            table
                .iter()
                .map(|&(x, v)| gamma_fn(x).map_or(f64::NAN, |g| rel(g, v))),
        ),
        None,
    )
}

fn digamma_check() -> (f64, Option<String>) {
    let table = [
        (0.3, -3.502_524_222_200_132_989),
        (3.7, 1.167_153_539_361_511_385_9),
        (25.0, 3.198_742_512_851_974_008_5),
    ];
    (
        worst(
            table
                .iter()
                .map(|&(x, v)| digamma(x).map_or(f64::NAN, |g| rel(g, v))),
        ),
        None,
    )
}

fn erfcx_check() -> (f64, Option<String>) {
    // E_{1/2}(-x) = exp(x²) erfc(x)
    let table = [
        (0.1, 0.896_456_979_969_126_641_93),
        (0.5, 0.615_690_344_192_924_874_87),
        (1.0, 0.427_583_576_155_807_004_41),
        (2.0, 0.255_395_676_310_505_743_87),
        (5.0, 0.110_704_637_733_068_626_37),
        (10.0, 0.056_140_992_743_822_585_858),
    ];
    (worst(table.iter().map(|&(x, v)| rel(ml(0.5, -x), v))), None)
}

fn exponential_check() -> (f64, Option<String>) {
    (
        worst(
            (0..50)
                .map(|i| 20.0 * i as f64 / 49.0)
                .map(|x| rel(ml(1.0, -x), (-x).exp())),
        ),
        None,
    )
}

fn mittag_leffler_table_check() -> (f64, Option<String>) {
    let table = [
        (0.25, -3.0, 0.219_004_427_560_406_799_3),
        (0.75, -5.0, 0.067_923_974_332_643_942_12),
        (0.9, -10.0, 0.012_820_606_051_102_102_7),
        (0.3, 2.0, 79_485.907_625_183_497_18),
    ];
    (worst(table.iter().map(|&(a, z, v)| rel(ml(a, z), v))), None)
}

fn example_one() -> (ForwardProblem, Measurement) {
    let p = make_problem(0.1, PI, [(2, 0.5)], 4.0).expect("valid example");
    let m = Measurement::new(&p, PI / 4.0, 2.0, 0.25818).expect("valid example");
    (p, m)
}

fn example_two() -> (ForwardProblem, Measurement) {
    let p = make_problem(0.05, PI, [(1, 2.0), (3, 0.5)], 20.0).expect("valid example");
    let m = Measurement::new(&p, PI / 6.0, 10.0, 1.0112).expect("valid example");
    (p, m)
}

fn derivative_check() -> (f64, Option<String>) {
    let h = 1e-6;
    let mut errors = Vec::new();
    for (p, m) in [example_one(), example_two()] {
        for k in 1..=9 {
            let a = k as f64 / 10.0;
            let err = (|| {
                let fd = (residual(&p, &m, a + h)? - residual(&p, &m, a - h)?) / (2.0 * h);
                Ok::<_, crate::inverse::InverseError>(rel(residual_derivative(&p, &m, a)?, fd))
            })();
            errors.push(err.unwrap_or(f64::NAN));
        }
    }
    (worst(errors), Some("cases=18".into()))
}

fn forward_example_one() -> (f64, Option<String>) {
    let (p, m) = example_one();
    (
        forward_value(&p, &m, 0.75, 1e-12).map_or(f64::NAN, |u| (u - 0.25818).abs()),
        None,
    )
}

fn forward_example_two() -> (f64, Option<String>) {
    let (p, m) = example_two();
    (
        forward_value(&p, &m, 0.5, 1e-12).map_or(f64::NAN, |u| (u - 1.0112).abs()),
        None,
    )
}

fn inversion_error(p: &ForwardProblem, m: &Measurement, truth: f64) -> f64 {
    match invert_order(p, m, &InverseConfig::default()) {
        Ok(r) if r.status == RootStatus::Unique => (r.alpha_hat - truth).abs(),
        _ => f64::NAN,
    }
}

fn inversion_example_one() -> (f64, Option<String>) {
    let (p, m) = example_one();
    (inversion_error(&p, &m, 0.75), None)
}

fn inversion_example_two() -> (f64, Option<String>) {
    let (p, m) = example_two();
    (inversion_error(&p, &m, 0.5), None)
}

fn round_trip_check() -> (f64, Option<String>) {
    let mut errors = Vec::new();
    for (p, m) in [example_one(), example_two()] {
        for truth in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let err = forward_value(&p, &m, truth, 1e-13)
                .map_or(f64::NAN, |d| inversion_error(&p, &m.with_value(d), truth));
            errors.push(err);
        }
    }
    (worst(errors), Some("cases=10".into()))
}

fn endpoint_check() -> (f64, Option<String>) {
    let (p, m) = example_one();
    let e = endpoint_values(&p, &m);
    let err = (e.f_zero - 5.0 / 14.0)
        .abs()
        .max((e.f_one - 0.5 * (-0.8f64).exp()).abs());
    (err, None)
}

const CHECKS: &[Check] = &[
    ("gamma.reference", 1e-13, gamma_check),
    ("digamma.reference", 1e-13, digamma_check),
    ("mittag_leffler.erfcx", 1e-10, erfcx_check),
    ("mittag_leffler.exponential", 1e-12, exponential_check),
    (
        "mittag_leffler.reference",
        1e-10,
        mittag_leffler_table_check,
    ),
    ("derivative.finite_difference", 1e-5, derivative_check),
    ("example1.forward", 5e-5, forward_example_one),
    ("example2.forward", 5e-4, forward_example_two),
    ("example1.inversion", 2e-3, inversion_example_one),
    ("example2.inversion", 2e-3, inversion_example_two),
    ("examples.round_trip", 1e-8, round_trip_check),
    ("example1.endpoints", 1e-10, endpoint_check),
];

/// Runs every check with its tolerance multiplied by `tolerance_scale`.
pub fn cmd_selfcheck(tolerance_scale: f64) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .map(|&(name, tol, run)| {
            let (error, detail) = run();
            // NaN errors never pass
            let error = if error.is_nan() { f64::INFINITY } else { error };
            CheckResult {
                name,
                error,
                tolerance: tol * tolerance_scale,
                detail,
            }
        })
        .collect()
}

pub fn render(results: &[CheckResult]) -> String {
    let mut out: String = results.iter().map(|r| r.line() + "\n").collect();
    let failed: Vec<_> = results
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.name)
        .collect();
    out.push_str(&format!(
        "summary passed={} failed={}",
        results.len() - failed.len(),
        failed.len()
    ));
    if !failed.is_empty() {
        out.push_str(&format!(" failing={}", failed.join(",")));
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        let results = cmd_selfcheck(1.0);
        for r in &results {
            assert!(r.passed(), "{}", r.line());
        }
        assert!(render(&results).ends_with("failed=0\n"));
    }

    #[test]
    fn zero_tolerance_fails_by_name() {
        let results = cmd_selfcheck(0.0);
        let text = render(&results);
        let failing = text
            .lines()
            .last()
            .unwrap()
            .split("failing=")
            .nth(1)
            .unwrap();
        assert!(
            failing.split(',').any(|n| n == "example1.forward"),
            "{text}"
        );
    }

    #[test]
    fn worst_propagates_nan() {
        assert!(worst([1.0, f64::NAN, 2.0]).is_nan());
        assert_eq!(worst([1.0, 3.0]), 3.0);
    }
}
