//! Chi-square goodness-of-fit against uniformity.

use alloc::vec::Vec;
use core::f64::consts::PI;

/// χ²(0.99) critical value at 3 degrees of freedom, the 4-bin uniformity
/// threshold at significance 0.01.
pub const CHI2_CRITICAL_4BIN_P01: f64 = 11.344866730144373;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub p_value: f64,
    /// p > 0.01, equivalently statistic below the critical value.
    pub passes: bool,
}

/// Pearson statistic Σ (observed − expected)² / expected.
pub fn chi_square_statistic(observed: &[u64], expected_probs: &[f64]) -> f64 {
    let total: u64 = observed.iter().sum();
    let n = total as f64;
    observed
        .iter()
        .zip(expected_probs)
        .map(|(&o, &p)| {
            let e = n * p;
            let d = o as f64 - e;
            d * d / e
        })
        .sum()
}

/// Survival function of χ² with 3 degrees of freedom:
/// Q(x) = erfc(√(x/2)) + √(2x/π)·e^{−x/2}.
fn chi_square_sf_3df(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    libm::erfc(libm::sqrt(x / 2.0)) + libm::sqrt(2.0 * x / PI) * libm::exp(-x / 2.0)
}

/// Test 4-bin counts against the uniform distribution at significance 0.01.
pub fn uniformity_test_4(observed: &[u64; 4]) -> ChiSquareTest {
    let probs: Vec<f64> = alloc::vec![0.25; 4];
    let statistic = chi_square_statistic(observed, &probs);
    let p_value = chi_square_sf_3df(statistic);
    ChiSquareTest {
        statistic,
        p_value,
        passes: p_value > 0.01,
    }
}
