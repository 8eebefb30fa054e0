//! Measurement angles with exact octant arithmetic.
//!
//! Blind delegation enumerates angles over the eight multiples of π/4, so
//! octant angles are kept as integers mod 8 and every combination of
//! negation, π-shift, and octant addition stays exact. Floats appear only at
//! the gate-kernel boundary, where half-angle phases come from a fixed table
//! so that e.g. RZ(π) is the exact diagonal (−i, i).

use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, TAU};
use num_complex::Complex64;

/// cos(π/8) and sin(π/8), the only irrational constants the octant phase
/// table needs beyond 1/√2.
const COS_PI_8: f64 = 0.923_879_532_511_286_7;
const SIN_PI_8: f64 = 0.382_683_432_365_089_8;

/// e^{iπm/8} for m in 0..16. Entries at multiples of 4 are exact.
const EIGHTH_PI_PHASES: [Complex64; 16] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(COS_PI_8, SIN_PI_8),
    Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
    Complex64::new(SIN_PI_8, COS_PI_8),
    Complex64::new(0.0, 1.0),
    Complex64::new(-SIN_PI_8, COS_PI_8),
    Complex64::new(-FRAC_1_SQRT_2, FRAC_1_SQRT_2),
    Complex64::new(-COS_PI_8, SIN_PI_8),
    Complex64::new(-1.0, 0.0),
    Complex64::new(-COS_PI_8, -SIN_PI_8),
    Complex64::new(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
    Complex64::new(-SIN_PI_8, -COS_PI_8),
    Complex64::new(0.0, -1.0),
    Complex64::new(SIN_PI_8, -COS_PI_8),
    Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
    Complex64::new(COS_PI_8, -SIN_PI_8),
];

/// An angle in the XY measurement plane.
///
/// `Octant(k)` means k·π/4 with k in `0..8`; `Radians(x)` is canonicalized
/// to `[0, 2π)`. Constructing octants through [`Angle::octant`] keeps k in
/// range; kernels reduce mod 8 either way.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Octant(u8),
    Radians(f64),
}

impl Angle {
    pub const ZERO: Angle = Angle::Octant(0);
    pub const PI: Angle = Angle::Octant(4);

    /// Octant angle k·π/4, with k reduced mod 8 (negative k allowed).
    pub fn octant(k: i64) -> Angle {
        Angle::Octant(k.rem_euclid(8) as u8)
    }

    /// Arbitrary angle, canonicalized to `[0, 2π)`.
    pub fn radians(x: f64) -> Angle {
        Angle::Radians(canonical(x))
    }

    pub fn to_radians(self) -> f64 {
        match self {
            Angle::Octant(k) => f64::from(k % 8) * FRAC_PI_4,
            Angle::Radians(x) => canonical(x),
        }
    }

    /// The octant index if this angle is an exact multiple of π/4.
    pub fn as_octant(self) -> Option<u8> {
        match self {
            Angle::Octant(k) => Some(k % 8),
            Angle::Radians(_) => None,
        }
    }

    /// θ + π, closed over octants.
    pub fn plus_pi(self) -> Angle {
        match self {
            Angle::Octant(k) => Angle::Octant((k % 8 + 4) % 8),
            Angle::Radians(x) => Angle::radians(x + core::f64::consts::PI),
        }
    }

    /// Equality on the circle within `tol`, across representations.
    pub fn approx_eq(self, other: Angle, tol: f64) -> bool {
        let d = libm::fabs(self.to_radians() - other.to_radians());
        let d = if d > TAU { d % TAU } else { d };
        d <= tol || (TAU - d) <= tol
    }
}

/// −θ, closed over octants.
impl core::ops::Neg for Angle {
    type Output = Angle;

    fn neg(self) -> Angle {
        match self {
            Angle::Octant(k) => Angle::Octant((8 - k % 8) % 8),
            Angle::Radians(x) => Angle::radians(-x),
        }
    }
}

/// θ + φ, exact whenever both operands are octants.
impl core::ops::Add for Angle {
    type Output = Angle;

    fn add(self, other: Angle) -> Angle {
        match (self, other) {
            (Angle::Octant(a), Angle::Octant(b)) => Angle::Octant((a % 8 + b % 8) % 8),
            _ => Angle::radians(self.to_radians() + other.to_radians()),
        }
    }
}

/// Reduce to `[0, 2π)`.
fn canonical(x: f64) -> f64 {
    let mut y = x % TAU;
    if y < 0.0 {
        y += TAU;
    }
    if y >= TAU {
        y -= TAU;
    }
    y
}

/// The `|1⟩` phase of RZ(θ).
///
/// The kernel uses the phase-gate representative `diag(1, e^{iθ})`, which
/// is RZ(θ) with its unobservable e^{−iθ/2} prefactor dropped. That makes
/// inverse pairs compose to the literal identity under canonicalized
/// angles, and the Pauli case exact: RZ(π) is exactly `diag(1, −1)`.
/// Octant angles read from the π/8 table; arbitrary angles go through
/// `from_polar`.
pub(crate) fn rz_phase(angle: Angle) -> Complex64 {
    match angle {
        Angle::Octant(k) => EIGHTH_PI_PHASES[usize::from(k % 8) * 2],
        Angle::Radians(x) => Complex64::from_polar(1.0, x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octant_constructor_reduces_mod_8() {
        assert_eq!(Angle::octant(9), Angle::Octant(1));
        assert_eq!(Angle::octant(-1), Angle::Octant(7));
    }

    #[test]
    fn octant_ops_stay_octant() {
        for k in 0..8i64 {
            let a = Angle::octant(k);
            assert!((-a).as_octant().is_some());
            assert!(a.plus_pi().as_octant().is_some());
            for j in 0..8i64 {
                assert!((a + Angle::octant(j)).as_octant().is_some());
            }
        }
    }

    #[test]
    fn octant_matches_radians_within_1e12() {
        for k in 0..8i64 {
            let oct = Angle::octant(k);
            let rad = Angle::radians(k as f64 * FRAC_PI_4);
            assert!(oct.approx_eq(rad, 1e-12));
        }
        // Wrap-around: 2π − ε is close to 0 on the circle.
        assert!(Angle::radians(TAU - 1e-13).approx_eq(Angle::ZERO, 1e-12));
    }

    #[test]
    fn radians_canonicalized() {
        assert!((Angle::radians(-FRAC_PI_4).to_radians() - 7.0 * FRAC_PI_4).abs() < 1e-12);
        assert!(Angle::radians(TAU).to_radians().abs() < 1e-12);
        assert!((Angle::radians(3.0 * TAU + 1.0).to_radians() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_rz_phases_are_exact() {
        assert_eq!(rz_phase(Angle::PI), Complex64::new(-1.0, 0.0));
        assert_eq!(rz_phase(Angle::ZERO), Complex64::new(1.0, 0.0));
        assert_eq!(rz_phase(Angle::octant(2)), Complex64::new(0.0, 1.0));
        assert_eq!(rz_phase(Angle::octant(6)), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn phase_table_matches_libm() {
        for (m, entry) in EIGHTH_PI_PHASES.iter().enumerate() {
            let x = m as f64 * core::f64::consts::PI / 8.0;
            assert!((entry.re - x.cos()).abs() < 1e-15, "cos mismatch at m={m}");
            assert!((entry.im - x.sin()).abs() < 1e-15, "sin mismatch at m={m}");
        }
    }
}
