//! Digamma ψ(x) = Γ'(x)/Γ(x) for x > 0.

use super::SpecialError;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Arguments at or above this use the asymptotic series directly.
const ASYMPTOTIC_FROM: f64 = 10.0;

// B_{2k} / (2k) for k = 1..7
const BERNOULLI_OVER_2K: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
];

/// ψ(x) for x > 0.
///
/// Small arguments are shifted up with ψ(x + 1) = ψ(x) + 1/x until x ≥ 10,
/// where the Bernoulli asymptotic series is truncated after the x^-14 term.
pub fn digamma(x: f64) -> Result<f64, SpecialError> {
    if !(x > 0.0) || x.is_infinite() {
        return Err(SpecialError::Domain {
            name: "x",
            value: x,
        });
    }
    Ok(digamma_unchecked(x))
}

pub(crate) fn digamma_unchecked(mut x: f64) -> f64 {
    let mut shift = 0.0;
    while x < ASYMPTOTIC_FROM {
        shift += 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Horner in 1/x², highest order first
    let tail = BERNOULLI_OVER_2K
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * inv2 + c)
        * inv2;
    x.ln() - 0.5 / x - tail - shift
}
