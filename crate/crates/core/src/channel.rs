//! Supply-to-output power chain of a resonant beam charging link.
//!
//! The transmitter converts electrical supply power into stored pump power,
//! the resonant cavity couples that power into an external beam whose
//! efficiency falls with the transmitter-receiver distance, and the receiver
//! converts the arriving beam back into electrical power. The chain is, for
//! supply power `p_s` and distance `d`:
//!
//! - stored power        `p_g = eta_g * p_s`
//! - diffraction loss    `delta(d) = exp(-2*pi*a^2 / (lambda*(l + d)))`
//! - coupling ratio      `alpha(d) = 2*(1-f)*m / ((1+f)*(delta(d) - ln f))`
//! - external beam power `p_ob = alpha(d)*p_g + big_c`
//! - electrical output   `p_e = beta*p_ob + gamma`, clamped at zero
//!
//! `delta` grows from 0 toward 1 with distance, so `alpha` falls from its
//! on-top value `alpha(0)` toward a positive floor, and the electrical output
//! is non-increasing in distance. The distance at which the unclamped output
//! crosses zero is the maximum transmission distance; it is computed two
//! independent ways ([`ChannelParams::max_transmission_distance`] in closed
//! form, [`ChannelParams::max_transmission_distance_bisect`] by bracketing
//! the raw output) so the routes can cross-check each other.
//!
//! All powers are in watts, all lengths in meters.

use std::f64::consts::PI;

use thiserror::Error;

/// Errors raised by the power-chain operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    /// A power argument was negative or non-finite.
    #[error("power must be finite and non-negative, got {0}")]
    InvalidPower(f64),
    /// A distance argument was negative or non-finite.
    #[error("distance must be finite and non-negative, got {0}")]
    InvalidDistance(f64),
    /// A parameter set failed validation.
    #[error("invalid channel parameter: {0}")]
    InvalidParams(String),
}

/// Outcome of inverting the power chain for the zero-output distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaxDistance {
    /// Output power is positive up to this distance (meters) and zero beyond.
    Finite(f64),
    /// Output power is non-positive even with the receiver on top of the
    /// transmitter.
    NoCoverage,
    /// Output power stays positive at every distance.
    Unbounded,
}

impl MaxDistance {
    /// Finite boundary distance, if there is one.
    pub fn finite(&self) -> Option<f64> {
        match *self {
            MaxDistance::Finite(d) => Some(d),
            _ => None,
        }
    }

    /// Whether a receiver at distance `d` lies inside the powered range.
    pub fn covers(&self, d: f64) -> bool {
        match *self {
            MaxDistance::Finite(d_max) => d <= d_max,
            MaxDistance::NoCoverage => false,
            MaxDistance::Unbounded => true,
        }
    }
}

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// Physical and fitted constants of one transmitter-receiver link.
///
/// The defaults describe the reference hardware: a 1550 nm-class pump diode
/// feeding a thin-disk gain medium with retro-reflector receivers.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelParams {
    /// Beam-to-electricity conversion slope of the receiver photovoltaic.
    pub beta: f64,
    /// Beam-to-electricity conversion offset (watts, negative for a real
    /// photovoltaic that needs a minimum drive).
    pub gamma: f64,
    /// External-beam offset (watts) of the linear cavity output fit.
    pub big_c: f64,
    /// Output mirror reflectivity, `0 < f < 1`.
    pub f: f64,
    /// Gain medium excitation efficiency, `0 < m <= 1`.
    pub m: f64,
    /// Beam waist radius at the gain medium (meters).
    pub a: f64,
    /// Beam wavelength (meters).
    pub lambda: f64,
    /// Supply-to-stored-power efficiency, `0 < eta_g <= 1`.
    pub eta_g: f64,
    /// Internal cavity path length (meters) added to the free-space distance.
    pub l: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        ChannelParams {
            beta: 0.3487,
            gamma: -1.535,
            big_c: -5.64,
            f: 0.88,
            m: 0.80,
            a: 1.5e-3,
            lambda: 1.064e-6,
            eta_g: 0.2849,
            l: 0.0,
        }
    }
}

impl ChannelParams {
    /// Checks the structural constraints on the parameter set.
    pub fn validate(&self) -> Result<(), ChannelError> {
        let fields = [
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("big_c", self.big_c),
            ("f", self.f),
            ("m", self.m),
            ("a", self.a),
            ("lambda", self.lambda),
            ("eta_g", self.eta_g),
            ("l", self.l),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(ChannelError::InvalidParams(format!(
                    "{name} must be finite, got {value}"
                )));
            }
        }
        if self.f <= 0.0 || self.f >= 1.0 {
            return Err(ChannelError::InvalidParams(format!(
                "f must lie in (0, 1), got {}",
                self.f
            )));
        }
        if self.m <= 0.0 || self.m > 1.0 {
            return Err(ChannelError::InvalidParams(format!(
                "m must lie in (0, 1], got {}",
                self.m
            )));
        }
        if self.eta_g <= 0.0 || self.eta_g > 1.0 {
            return Err(ChannelError::InvalidParams(format!(
                "eta_g must lie in (0, 1], got {}",
                self.eta_g
            )));
        }
        if self.a <= 0.0 {
            return Err(ChannelError::InvalidParams(format!(
                "a must be positive, got {}",
                self.a
            )));
        }
        if self.lambda <= 0.0 {
            return Err(ChannelError::InvalidParams(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if self.l < 0.0 {
            return Err(ChannelError::InvalidParams(format!(
                "l must be non-negative, got {}",
                self.l
            )));
        }
        Ok(())
    }

    // -----------------------------------------------------------------------
    // Forward chain
    // -----------------------------------------------------------------------

    /// Pump power stored at the transmitter: `p_g = eta_g * p_s`.
    pub fn stored_power(&self, p_s: f64) -> Result<f64, ChannelError> {
        check_power(p_s)?;
        Ok(self.eta_g * p_s)
    }

    /// Diffraction-induced transfer ratio of the resonating beam,
    /// `delta(d) = exp(-2*pi*a^2 / (lambda*(l + d)))`.
    ///
    /// Grows monotonically from 0 (at `l + d = 0`, where the IEEE division
    /// by zero gives the correct limit) toward 1 at large distance.
    pub fn diffraction_loss(&self, d: f64) -> Result<f64, ChannelError> {
        check_distance(d)?;
        let exponent = 2.0 * PI * self.a * self.a / (self.lambda * (self.l + d));
        Ok((-exponent).exp())
    }

    /// Stored-to-external-beam coupling ratio,
    /// `alpha(d) = 2*(1-f)*m / ((1+f)*(delta(d) - ln f))`.
    ///
    /// Strictly decreasing in distance, from `alpha(0)` down toward the
    /// positive floor reached as `delta` approaches 1.
    pub fn cavity_coefficient(&self, d: f64) -> Result<f64, ChannelError> {
        let delta = self.diffraction_loss(d)?;
        Ok(self.alpha_from_delta(delta))
    }

    /// External beam power leaving the cavity for stored power `p_g` at
    /// distance `d`: `p_ob = alpha(d)*p_g + big_c`. May be negative; the
    /// chain is only clamped at the electrical output.
    pub fn external_beam_power(&self, p_g: f64, d: f64) -> Result<f64, ChannelError> {
        check_power(p_g)?;
        let alpha = self.cavity_coefficient(d)?;
        Ok(alpha * p_g + self.big_c)
    }

    /// Electrical output power at the receiver for supply power `p_s` at
    /// distance `d`: `max(0, beta*p_ob + gamma)`.
    pub fn output_electric_power(&self, p_s: f64, d: f64) -> Result<f64, ChannelError> {
        let p_g = self.stored_power(p_s)?;
        let p_ob = self.external_beam_power(p_g, d)?;
        Ok((self.beta * p_ob + self.gamma).max(0.0))
    }

    // -----------------------------------------------------------------------
    // Distance inversion
    // -----------------------------------------------------------------------

    /// Maximum transmission distance for supply power `p_s`, in closed form.
    ///
    /// The unclamped output is zero where `alpha(d)*p_g = -gamma/beta -
    /// big_c`. Solving the coupling ratio for the matching transfer ratio
    /// `delta*` and inverting the diffraction law gives
    /// `d = 2*pi*a^2 / (lambda * ln(1/delta*)) - l`.
    ///
    /// Requires `beta > 0` (otherwise the output cannot be solved for the
    /// beam power).
    pub fn max_transmission_distance(&self, p_s: f64) -> Result<MaxDistance, ChannelError> {
        let p_g = self.stored_power(p_s)?;
        if self.beta <= 0.0 {
            return Err(ChannelError::InvalidParams(format!(
                "beta must be positive to invert the chain, got {}",
                self.beta
            )));
        }
        // Beam power the cavity must deliver for the output to reach zero.
        let target = -self.gamma / self.beta - self.big_c;
        if p_g == 0.0 {
            // The beam term vanishes; the output is the same at every
            // distance and the boundary degenerates.
            return Ok(if self.beta * self.big_c + self.gamma > 0.0 {
                MaxDistance::Unbounded
            } else {
                MaxDistance::NoCoverage
            });
        }
        let alpha_star = target / p_g;
        if alpha_star <= 0.0 {
            // Any positive coupling already clears the target.
            return Ok(MaxDistance::Unbounded);
        }
        let delta_star =
            2.0 * (1.0 - self.f) * self.m / ((1.0 + self.f) * alpha_star) + self.f.ln();
        if delta_star >= 1.0 {
            return Ok(MaxDistance::Unbounded);
        }
        if delta_star <= 0.0 {
            return Ok(MaxDistance::NoCoverage);
        }
        let d = 2.0 * PI * self.a * self.a / (self.lambda * (1.0 / delta_star).ln()) - self.l;
        if d <= 0.0 {
            Ok(MaxDistance::NoCoverage)
        } else {
            Ok(MaxDistance::Finite(d))
        }
    }

    /// Maximum transmission distance by bracketing and bisecting the raw
    /// (unclamped) electrical output over distance.
    ///
    /// Deliberately shares no algebra with
    /// [`max_transmission_distance`](Self::max_transmission_distance): it
    /// only evaluates the forward chain, expanding a bracket geometrically
    /// and bisecting the sign change to about 1e-12 relative width. The two
    /// routes are cross-checked in the verification suite.
    pub fn max_transmission_distance_bisect(&self, p_s: f64) -> Result<MaxDistance, ChannelError> {
        let p_g = self.stored_power(p_s)?;
        let raw = |d: f64| -> f64 {
            let p_ob = self
                .external_beam_power(p_g, d)
                .expect("bracketed distance is non-negative");
            self.beta * p_ob + self.gamma
        };
        if raw(0.0) <= 0.0 {
            return Ok(MaxDistance::NoCoverage);
        }
        // Expand until the raw output goes non-positive; past this span the
        // coupling ratio is flat to machine precision, so a still-positive
        // output will never cross zero.
        const SPAN_LIMIT: f64 = 1e15;
        let mut lo = 0.0;
        let mut hi = 1.0;
        while raw(hi) > 0.0 {
            lo = hi;
            hi *= 2.0;
            if hi > SPAN_LIMIT {
                return Ok(MaxDistance::Unbounded);
            }
        }
        while hi - lo > 1e-12 * hi.max(1.0) {
            let mid = 0.5 * (lo + hi);
            if raw(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(MaxDistance::Finite(0.5 * (lo + hi)))
    }

    /// Coupling ratio for a precomputed transfer ratio.
    fn alpha_from_delta(&self, delta: f64) -> f64 {
        2.0 * (1.0 - self.f) * self.m / ((1.0 + self.f) * (delta - self.f.ln()))
    }
}

fn check_power(p: f64) -> Result<(), ChannelError> {
    if !p.is_finite() || p < 0.0 {
        return Err(ChannelError::InvalidPower(p));
    }
    Ok(())
}

fn check_distance(d: f64) -> Result<(), ChannelError> {
    if !d.is_finite() || d < 0.0 {
        return Err(ChannelError::InvalidDistance(d));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn assert_rel(actual: f64, expected: f64, rel: f64) {
        let err = (actual - expected).abs() / expected.abs().max(f64::MIN_POSITIVE);
        assert!(
            err <= rel,
            "expected {expected}, got {actual} (relative error {err:.3e} > {rel:.1e})"
        );
    }

    #[test]
    fn stored_power_is_linear_in_supply() {
        let p = ChannelParams::default();
        assert_rel(p.stored_power(100.0).unwrap(), 28.49, 1e-12);
        assert_eq!(p.stored_power(0.0).unwrap(), 0.0);
    }

    #[test]
    fn diffraction_loss_matches_reference_points() {
        let p = ChannelParams::default();
        assert_eq!(p.diffraction_loss(0.0).unwrap(), 0.0);
        assert_rel(p.diffraction_loss(2.0).unwrap(), 1.3025837e-3, 1e-7);
        assert_rel(p.diffraction_loss(1e6).unwrap(), 0.9999867133, 1e-9);
    }

    #[test]
    fn coupling_ratio_endpoints() {
        let p = ChannelParams::default();
        assert_rel(p.cavity_coefficient(0.0).unwrap(), 0.79891235, 1e-8);
        // Far-field floor: the transfer ratio saturates at 1.
        assert_rel(p.cavity_coefficient(1e12).unwrap(), 0.090552082, 1e-6);
    }

    #[test]
    fn external_beam_power_on_top_of_transmitter() {
        let p = ChannelParams::default();
        let p_g = p.stored_power(100.0).unwrap();
        assert_rel(p.external_beam_power(p_g, 0.0).unwrap(), 17.121013, 1e-7);
    }

    #[test]
    fn electrical_output_reference_point() {
        let p = ChannelParams::default();
        assert_rel(
            p.output_electric_power(100.0, 2.0).unwrap(),
            4.3550397,
            1e-7,
        );
    }

    #[test]
    fn electrical_output_clamps_at_zero() {
        let p = ChannelParams::default();
        // Beyond the 100 W boundary (about 7.3 m) the raw chain is negative.
        assert_eq!(p.output_electric_power(100.0, 50.0).unwrap(), 0.0);
        // With no supply the raw chain sits at beta*big_c + gamma < 0.
        assert_eq!(p.output_electric_power(0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn negative_inputs_are_rejected() {
        let p = ChannelParams::default();
        assert!(matches!(
            p.stored_power(-1.0),
            Err(ChannelError::InvalidPower(_))
        ));
        assert!(matches!(
            p.diffraction_loss(-0.5),
            Err(ChannelError::InvalidDistance(_))
        ));
        assert!(matches!(
            p.external_beam_power(-2.0, 1.0),
            Err(ChannelError::InvalidPower(_))
        ));
        assert!(matches!(
            p.output_electric_power(10.0, -1.0),
            Err(ChannelError::InvalidDistance(_))
        ));
        assert!(matches!(
            p.output_electric_power(f64::NAN, 1.0),
            Err(ChannelError::InvalidPower(_))
        ));
        assert!(matches!(
            p.max_transmission_distance(f64::INFINITY),
            Err(ChannelError::InvalidPower(_))
        ));
    }

    #[test]
    fn validate_rejects_out_of_range_parameters() {
        let mut p = ChannelParams::default();
        assert!(p.validate().is_ok());
        p.f = 1.0;
        assert!(p.validate().is_err());
        p = ChannelParams::default();
        p.m = 0.0;
        assert!(p.validate().is_err());
        p = ChannelParams::default();
        p.a = -1e-3;
        assert!(p.validate().is_err());
        p = ChannelParams::default();
        p.lambda = 0.0;
        assert!(p.validate().is_err());
        p = ChannelParams::default();
        p.eta_g = 1.5;
        assert!(p.validate().is_err());
        p = ChannelParams::default();
        p.l = -0.1;
        assert!(p.validate().is_err());
        p = ChannelParams::default();
        p.gamma = f64::NAN;
        assert!(p.validate().is_err());
    }

    #[test]
    fn max_distance_matches_reference_grid() {
        let p = ChannelParams::default();
        let expected = [
            (50.0, 3.2627254),
            (100.0, 7.297568534),
            (150.0, 11.24456055),
            (200.0, 16.71628492),
        ];
        for (p_s, d) in expected {
            match p.max_transmission_distance(p_s).unwrap() {
                MaxDistance::Finite(got) => assert_rel(got, d, 1e-8),
                other => panic!("expected finite distance at {p_s} W, got {other:?}"),
            }
        }
    }

    #[test]
    fn max_distance_regimes() {
        let p = ChannelParams::default();
        assert_eq!(
            p.max_transmission_distance(0.0).unwrap(),
            MaxDistance::NoCoverage
        );
        assert_eq!(
            p.max_transmission_distance(40.0).unwrap(),
            MaxDistance::NoCoverage
        );
        assert_eq!(
            p.max_transmission_distance(44.11).unwrap(),
            MaxDistance::NoCoverage
        );
        match p.max_transmission_distance(44.12).unwrap() {
            MaxDistance::Finite(d) => assert_rel(d, 0.974459, 1e-5),
            other => panic!("expected finite distance just above threshold, got {other:?}"),
        }
        match p.max_transmission_distance(389.0).unwrap() {
            MaxDistance::Finite(d) => assert_rel(d, 18108.24, 1e-6),
            other => panic!("expected finite distance just below saturation, got {other:?}"),
        }
        assert_eq!(
            p.max_transmission_distance(390.0).unwrap(),
            MaxDistance::Unbounded
        );
    }

    #[test]
    fn bisection_route_agrees_with_closed_form() {
        let p = ChannelParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p_s = rng.random_range(44.5..389.0);
            let closed = p.max_transmission_distance(p_s).unwrap().finite().unwrap();
            let bisect = p
                .max_transmission_distance_bisect(p_s)
                .unwrap()
                .finite()
                .unwrap();
            assert_rel(bisect, closed, 1e-9);
        }
    }

    #[test]
    fn bisection_route_agrees_on_regimes() {
        let p = ChannelParams::default();
        for p_s in [0.0, 10.0, 44.11, 390.0, 1000.0] {
            let closed = p.max_transmission_distance(p_s).unwrap();
            let bisect = p.max_transmission_distance_bisect(p_s).unwrap();
            match (closed, bisect) {
                (MaxDistance::Finite(a), MaxDistance::Finite(b)) => assert_rel(b, a, 1e-9),
                (a, b) => assert_eq!(a, b, "regimes disagree at {p_s} W"),
            }
        }
    }

    #[test]
    fn covers_respects_each_regime() {
        assert!(MaxDistance::Finite(5.0).covers(5.0));
        assert!(!MaxDistance::Finite(5.0).covers(5.000001));
        assert!(!MaxDistance::NoCoverage.covers(0.0));
        assert!(MaxDistance::Unbounded.covers(1e9));
    }

    proptest! {
        #[test]
        fn diffraction_loss_is_monotone_and_bounded(
            d1 in 0.0..1e4f64,
            d2 in 0.0..1e4f64,
        ) {
            let p = ChannelParams::default();
            let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
            let dl = p.diffraction_loss(lo).unwrap();
            let dh = p.diffraction_loss(hi).unwrap();
            prop_assert!(dl <= dh);
            prop_assert!((0.0..1.0).contains(&dl));
            prop_assert!((0.0..1.0).contains(&dh));
        }

        #[test]
        fn output_power_is_non_increasing_in_distance(
            p_s in 0.0..400.0f64,
            d1 in 0.0..50.0f64,
            d2 in 0.0..50.0f64,
        ) {
            let p = ChannelParams::default();
            let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
            let near = p.output_electric_power(p_s, lo).unwrap();
            let far = p.output_electric_power(p_s, hi).unwrap();
            prop_assert!(near >= far);
            prop_assert!(far >= 0.0);
        }

        #[test]
        fn output_is_positive_inside_and_zero_outside_the_boundary(
            p_s in 44.5..389.0f64,
        ) {
            let p = ChannelParams::default();
            let d = p.max_transmission_distance(p_s).unwrap().finite().unwrap();
            prop_assert!(p.output_electric_power(p_s, d * (1.0 - 1e-6)).unwrap() > 0.0);
            prop_assert!(p.output_electric_power(p_s, d * (1.0 + 1e-6)).unwrap() == 0.0);
        }

        #[test]
        fn coupling_ratio_stays_inside_its_endpoints(d in 0.0..1e6f64) {
            let p = ChannelParams::default();
            let alpha = p.cavity_coefficient(d).unwrap();
            prop_assert!(alpha > 0.0905);
            prop_assert!(alpha <= 0.7989124);
        }
    }
}
