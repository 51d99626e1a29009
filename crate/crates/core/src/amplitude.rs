//! Complex probability amplitudes in polar form.
//!
//! Magnitudes stay tied to classical probabilities through the Born rule
//! (`p = |ψ|²`) and phases are kept canonical in `[0, 2π)`, so a reported
//! phase such as `3.7812` survives unchanged.

use core::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::AMPLITUDE_TOLERANCE;

/// A complex amplitude `magnitude · e^{i·phase}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude {
    magnitude: f64,
    phase: f64,
}

/// Wraps `phase` into `[0, 2π)`.
pub fn canonical_phase(phase: f64) -> f64 {
    let mut wrapped = libm::fmod(phase, TAU);
    if wrapped < 0.0 {
        wrapped += TAU;
    }
    // tiny negative inputs round up to exactly TAU
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}

impl Amplitude {
    pub const ONE: Amplitude = Amplitude { magnitude: 1.0, phase: 0.0 };
    pub const ZERO: Amplitude = Amplitude { magnitude: 0.0, phase: 0.0 };

    /// Builds an amplitude from polar components, canonicalizing the phase.
    pub fn new(magnitude: f64, phase: f64) -> Result<Self> {
        if !magnitude.is_finite() {
            return Err(Error::NonFinite("magnitude"));
        }
        if !phase.is_finite() {
            return Err(Error::NonFinite("phase"));
        }
        if !(0.0..=1.0 + AMPLITUDE_TOLERANCE).contains(&magnitude) {
            return Err(Error::MagnitudeOutOfRange(magnitude));
        }
        Ok(Self { magnitude, phase: canonical_phase(phase) })
    }

    /// Inverts the Born rule: magnitude `√p`, the given phase.
    pub fn from_probability(p: f64, phase: f64) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::NonFinite("probability"));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        Self::new(libm::sqrt(p), phase)
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Born rule: `|ψ|²`. The phase never contributes.
    pub fn born_probability(&self) -> f64 {
        self.magnitude * self.magnitude
    }

    /// Multiplies magnitudes and adds phases modulo 2π.
    pub fn multiply(&self, other: &Amplitude) -> Amplitude {
        Amplitude {
            magnitude: self.magnitude * other.magnitude,
            phase: canonical_phase(self.phase + other.phase),
        }
    }
}

impl core::ops::Mul for Amplitude {
    type Output = Amplitude;

    fn mul(self, rhs: Amplitude) -> Amplitude {
        self.multiply(&rhs)
    }
}

impl Default for Amplitude {
    fn default() -> Self {
        Amplitude::ZERO
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, PI};
    use proptest::prelude::*;

    fn phase_close(a: f64, b: f64, tol: f64) -> bool {
        let d = (a - b).rem_euclid(TAU);
        d < tol || TAU - d < tol
    }

    #[test]
    fn from_probability_identity() {
        let a = Amplitude::from_probability(1.0, 0.0).unwrap();
        assert_eq!(a.magnitude(), 1.0);
        assert_eq!(a.phase(), 0.0);
    }

    #[test]
    fn from_probability_square_root() {
        // sqrt(0.97) to 30 digits: 0.984885780179610472174621141492
        let a = Amplitude::from_probability(0.97, 0.0).unwrap();
        assert!((a.magnitude() - 0.984_885_780_179_610_5).abs() < 1e-15);
        assert_eq!(a.phase(), 0.0);
    }

    #[test]
    fn from_probability_canonicalizes_phase() {
        let a = Amplitude::from_probability(0.25, 3.0 * PI).unwrap();
        assert_eq!(a.magnitude(), 0.5);
        assert!((a.phase() - PI).abs() < 1e-12);
    }

    #[test]
    fn from_probability_rejects_bad_input() {
        assert_eq!(Amplitude::from_probability(1.2, 0.0), Err(Error::ProbabilityOutOfRange(1.2)));
        assert_eq!(Amplitude::from_probability(-0.1, 0.0), Err(Error::ProbabilityOutOfRange(-0.1)));
        assert!(matches!(Amplitude::from_probability(f64::NAN, 0.0), Err(Error::NonFinite(_))));
        assert!(matches!(Amplitude::from_probability(0.5, f64::INFINITY), Err(Error::NonFinite(_))));
    }

    #[test]
    fn new_rejects_large_magnitude() {
        assert!(Amplitude::new(1.0 + 1e-13, 0.0).is_ok());
        assert!(matches!(Amplitude::new(1.01, 0.0), Err(Error::MagnitudeOutOfRange(_))));
        assert!(matches!(Amplitude::new(-0.1, 0.0), Err(Error::MagnitudeOutOfRange(_))));
    }

    #[test]
    fn negative_phase_wraps() {
        let a = Amplitude::new(0.5, -FRAC_PI_2).unwrap();
        assert!((a.phase() - 1.5 * PI).abs() < 1e-12);
        assert_eq!(canonical_phase(-1e-300), 0.0);
    }

    #[test]
    fn born_probability_examples() {
        assert_eq!(Amplitude::ZERO.born_probability(), 0.0);
        assert_eq!(Amplitude::new(1.0, 2.3).unwrap().born_probability(), 1.0);
        let a = Amplitude::from_probability(0.84, 1.3).unwrap();
        assert!((a.born_probability() - 0.84).abs() < 1e-12);
    }

    #[test]
    fn multiply_examples() {
        let b = Amplitude::new(0.7, 1.1).unwrap();
        let p = Amplitude::ONE * b;
        assert_eq!(p.magnitude(), 0.7);
        assert_eq!(p.phase(), 1.1);

        let prior = Amplitude::new(libm::sqrt(0.5), 0.0).unwrap();
        let cond = Amplitude::new(libm::sqrt(0.97), 0.0).unwrap();
        // sqrt(0.485) = 0.696419413859205966923386946426
        assert!(((prior * cond).magnitude() - 0.696_419_413_859_206).abs() < 1e-15);

        let h = Amplitude::new(0.5, 1.5 * PI).unwrap();
        let sq = h * h;
        assert_eq!(sq.magnitude(), 0.25);
        assert!((sq.phase() - PI).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn born_round_trip(p in 0.0f64..=1.0, phase in -20.0f64..20.0) {
            let a = Amplitude::from_probability(p, phase).unwrap();
            prop_assert!((a.born_probability() - p).abs() <= 1e-12);
            prop_assert!((0.0..TAU).contains(&a.phase()));
        }

        #[test]
        fn multiply_commutes_and_associates(
            m in proptest::array::uniform3(0.0f64..=1.0),
            ph in proptest::array::uniform3(-10.0f64..10.0),
        ) {
            let a = Amplitude::new(m[0], ph[0]).unwrap();
            let b = Amplitude::new(m[1], ph[1]).unwrap();
            let c = Amplitude::new(m[2], ph[2]).unwrap();
            let ab = a * b;
            let ba = b * a;
            prop_assert!((ab.magnitude() - ba.magnitude()).abs() <= 1e-12);
            prop_assert!(phase_close(ab.phase(), ba.phase(), 1e-12));
            let left = (a * b) * c;
            let right = a * (b * c);
            prop_assert!((left.magnitude() - right.magnitude()).abs() <= 1e-12);
            prop_assert!(phase_close(left.phase(), right.phase(), 1e-12));
        }
    }
}
