//! Tanh-sinh (double exponential) quadrature on finite intervals.

use std::f64::consts::FRAC_PI_2;

const T_MAX: f64 = 4.0;
const MIN_LEVEL: u32 = 3;
pub(crate) const MAX_LEVEL: u32 = 11;

#[derive(Debug, Clone, Copy)]
pub(crate) struct QuadEstimate {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// Integrates `f` over `[a, b]`, halving the step until two successive
/// levels agree to `rel_tol` relative to the integral of |f|.
///
/// Endpoint singularities and endpoint-localized peaks are handled well,
/// since nodes cluster double-exponentially towards both ends.
pub(crate) fn tanh_sinh<F>(mut f: F, a: f64, b: f64, rel_tol: f64) -> QuadEstimate
where
    F: FnMut(f64) -> f64,
{
    let half = 0.5 * (b - a);
    if half <= 0.0 {
        return QuadEstimate {
            value: 0.0,
            error: 0.0,
            converged: true,
        };
    }

    let centre = f(a + half);
    // node at offset t: returns (f(a + d) + f(b - d)) * w and the |f| analogue
    let mut pair = |t: f64| -> (f64, f64) {
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u).exp();
        // distance from the nearer endpoint, 1 - tanh(u) = 2e^{-2u}/(1 + e^{-2u})
        let dist = half * 2.0 * e / (1.0 + e);
        let sech = 2.0 * (-u).exp() / (1.0 + e);
        let w = half * FRAC_PI_2 * t.cosh() * sech * sech;
        if w == 0.0 || dist == 0.0 {
            return (0.0, 0.0);
        }
        let lo = f(a + dist);
        let hi = f(b - dist);
        ((lo + hi) * w, (lo.abs() + hi.abs()) * w)
    };

    let w0 = half * FRAC_PI_2;
    let mut sum = centre * w0;
    let mut abs_sum = centre.abs() * w0;
    let mut h = 1.0;
    let mut k = 1.0;
    while k <= T_MAX {
        let (s, m) = pair(k);
        sum += s;
        abs_sum += m;
        k += 1.0;
    }
    let mut prev = sum * h;
    let mut estimate = QuadEstimate {
        value: prev,
        error: f64::INFINITY,
        converged: false,
    };

    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        // new nodes are the odd multiples of h
        let mut t = h;
        while t <= T_MAX {
            let (s, m) = pair(t);
            sum += s;
            abs_sum += m;
            t += 2.0 * h;
        }
        let value = sum * h;
        // scale for the error test: the integral of |f|
        let magnitude = abs_sum * h;
        let error = (value - prev).abs();
        estimate = QuadEstimate {
            value,
            error,
            converged: false,
        };
        if !value.is_finite() {
            return estimate;
        }
        if level >= MIN_LEVEL && error <= rel_tol * magnitude {
            estimate.converged = true;
            return estimate;
        }
        prev = value;
    }
    estimate
}
