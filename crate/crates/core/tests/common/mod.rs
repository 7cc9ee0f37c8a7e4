//! Reference implementations shared by the integration tests. They are
//! written independently of the library and use different algorithms.

#![allow(dead_code)]

use std::f64::consts::PI;

/// exp(x²) erfc(x) for x ≥ 0.
///
/// Below 2: exp(x²) minus the all-positive series
/// erf(x) exp(x²) = (2/√π) Σ 2ⁿ x^{2n+1} / (2n+1)!!.
/// From 2 on: the Laplace continued fraction, evaluated bottom-up.
pub fn erfcx(x: f64) -> f64 {
    assert!(x >= 0.0);
    if x < 2.0 {
        let mut term = x;
        let mut sum = x;
        let mut n = 0.0;
        while term > 1e-18 * sum {
            n += 1.0;
            term *= 2.0 * x * x / (2.0 * n + 1.0);
            sum += term;
        }
        (x * x).exp() - 2.0 / PI.sqrt() * sum
    } else {
        // erfcx(x) = (1/√π) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
        let mut tail = x;
        for k in (1..=200).rev() {
            tail = x + (k as f64 / 2.0) / tail;
        }
        1.0 / (PI.sqrt() * tail)
    }
}

/// ψ(x) = -γ + Σ_{n≥0} (1/(n+1) - 1/(n+x)), summed directly over the first
/// `N` terms plus a midpoint-rule estimate of the tail.
pub fn digamma_by_sum(x: f64) -> f64 {
    const N: usize = 2_000_000;
    const EULER: f64 = 0.577_215_664_901_532_860_6;
    let mut sum = 0.0;
    let mut comp = 0.0;
    for n in (0..N).rev() {
        let n = n as f64;
        let t = 1.0 / (n + 1.0) - 1.0 / (n + x);
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    let n = N as f64;
    // Σ_{n≥N} (1/(n+1) - 1/(n+x)) ≈ ln((N + x - 1/2)/(N + 1/2))
    let tail = ((n + x - 0.5) / (n + 0.5)).ln();
    -EULER + sum + tail
}

/// First Example: D = 0.1, l = π, f = sin(2x)/2, T = 4, x₀ = π/4, t₁ = 2.
pub const EX1: (f64, f64, f64, f64, f64) = (0.1, PI, 4.0, PI / 4.0, 2.0);
/// Second Example: D = 0.05, l = π, f = 2 sin x + sin(3x)/2, T = 20, x₀ = π/6, t₁ = 10.
pub const EX2: (f64, f64, f64, f64, f64) = (0.05, PI, 20.0, PI / 6.0, 10.0);
