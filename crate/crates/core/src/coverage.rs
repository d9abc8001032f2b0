//! Coverage cone geometry and receiver placement.
//!
//! A transmitter with maximum transmission distance `d_max` and field of
//! view `fov` covers a cone of height `h = d_max*cos(fov/2)` and base
//! radius `r = d_max*sin(fov/2)`; the apex sits at the transmitter and the
//! axis points along +z.
//!
//! Two placement conventions are supported:
//!
//! - [`PositionMode::Faithful`] draws the coordinates sequentially,
//!   `z = u1*h`, `x = u2*(h - z)*tan(fov/2)`, `y = u3*sqrt(r^2 - x^2)`,
//!   which confines receivers to one octant and puts the widest
//!   cross-section at `z = 0`. This is the reference recipe and the
//!   default.
//! - [`PositionMode::Geometric`] draws uniformly by volume inside the
//!   apex-at-origin cone (`z = h*u1^(1/3)`, radius `z*tan(fov/2)*sqrt(u2)`,
//!   azimuth `2*pi*u3`), matching the physical beam geometry.
//!
//! Both conventions keep every sample within distance `d_max` of the
//! transmitter. Lengths are in meters.

use rand::Rng;
use thiserror::Error;

/// Errors raised when constructing coverage geometry.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoverageError {
    /// The maximum transmission distance was zero, negative, or non-finite.
    #[error("coverage distance must be finite and positive, got {0}")]
    InvalidDistance(f64),
    /// The field of view was outside the open interval (0, 180) degrees.
    #[error("field of view must lie in (0, 180) degrees, got {0}")]
    InvalidFov(f64),
}

/// Receiver placement convention, see the module docs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PositionMode {
    /// Sequential per-coordinate draws in one octant (reference recipe).
    #[default]
    Faithful,
    /// Uniform-by-volume draws inside the apex cone.
    Geometric,
}

/// A point in transmitter-centered coordinates (meters). The transmitter
/// sits at the origin with the cone axis along +z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Position { x, y, z }
    }

    /// Euclidean distance to the transmitter at the origin.
    pub fn distance_to_transmitter(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

// ---------------------------------------------------------------------------
// Cone
// ---------------------------------------------------------------------------

/// Coverage cone of one transmitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageCone {
    /// Full field-of-view angle in degrees.
    pub fov_deg: f64,
    /// Maximum transmission distance (meters); every covered point lies
    /// within this distance of the apex.
    pub d_max: f64,
    /// Cone height `d_max * cos(fov/2)` (meters).
    pub h: f64,
    /// Base radius `d_max * sin(fov/2)` (meters).
    pub r: f64,
}

impl CoverageCone {
    /// Builds the cone implied by a maximum transmission distance and a
    /// field of view.
    pub fn from_distance(d_max: f64, fov_deg: f64) -> Result<Self, CoverageError> {
        if !d_max.is_finite() || d_max <= 0.0 {
            return Err(CoverageError::InvalidDistance(d_max));
        }
        if !fov_deg.is_finite() || fov_deg <= 0.0 || fov_deg >= 180.0 {
            return Err(CoverageError::InvalidFov(fov_deg));
        }
        let half = (fov_deg / 2.0).to_radians();
        Ok(CoverageCone {
            fov_deg,
            d_max,
            h: d_max * half.cos(),
            r: d_max * half.sin(),
        })
    }

    /// Half of the field-of-view angle, in radians.
    pub fn half_angle_rad(&self) -> f64 {
        (self.fov_deg / 2.0).to_radians()
    }

    /// Maps three unit draws in `[0, 1)` to a position, deterministically.
    ///
    /// This is the full placement logic; [`sample_position`](Self::
    /// sample_position) only supplies the draws. The draws are consumed in
    /// the order `u[0]`, `u[1]`, `u[2]`.
    pub fn position_from_unit_draws(&self, mode: PositionMode, u: [f64; 3]) -> Position {
        let tan_half = self.half_angle_rad().tan();
        match mode {
            PositionMode::Faithful => {
                let z = u[0] * self.h;
                let x = u[1] * (self.h - z) * tan_half;
                // x can exceed r by a rounding step at the rim; clamp the
                // radicand so y stays real.
                let y = u[2] * (self.r * self.r - x * x).max(0.0).sqrt();
                Position { x, y, z }
            }
            PositionMode::Geometric => {
                let z = self.h * u[0].cbrt();
                let rho = z * tan_half * u[1].sqrt();
                let phi = 2.0 * std::f64::consts::PI * u[2];
                Position {
                    x: rho * phi.cos(),
                    y: rho * phi.sin(),
                    z,
                }
            }
        }
    }

    /// Draws a receiver position inside the cone. Consumes exactly three
    /// unit draws from `rng`, whichever mode is chosen.
    pub fn sample_position<R: Rng + ?Sized>(&self, rng: &mut R, mode: PositionMode) -> Position {
        let u = [
            rng.random::<f64>(),
            rng.random::<f64>(),
            rng.random::<f64>(),
        ];
        self.position_from_unit_draws(mode, u)
    }

    /// Whether a position counts as covered.
    ///
    /// `Faithful` checks only the powered range `distance <= d_max`,
    /// mirroring how eligibility is decided during scheduling. `Geometric`
    /// requires membership in the cone solid (`0 <= z <= h` and lateral
    /// radius at most `z*tan(fov/2)`), which is a subset of the powered
    /// sphere.
    pub fn contains(&self, p: &Position, mode: PositionMode) -> bool {
        match mode {
            PositionMode::Faithful => p.distance_to_transmitter() <= self.d_max,
            PositionMode::Geometric => {
                let rho = (p.x * p.x + p.y * p.y).sqrt();
                p.z >= 0.0 && p.z <= self.h && rho <= p.z * self.half_angle_rad().tan()
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_rel(actual: f64, expected: f64, rel: f64) {
        let err = (actual - expected).abs() / expected.abs().max(f64::MIN_POSITIVE);
        assert!(
            err <= rel,
            "expected {expected}, got {actual} (relative error {err:.3e} > {rel:.1e})"
        );
    }

    #[test]
    fn cone_dimensions_match_reference_points() {
        let cone = CoverageCone::from_distance(7.2972, 100.0).unwrap();
        assert_rel(cone.h, 4.6905497, 1e-7);
        assert_rel(cone.r, 5.5899795, 1e-7);

        let cone = CoverageCone::from_distance(16.7149, 100.0).unwrap();
        assert_rel(cone.h, 10.744131, 1e-7);
        assert_rel(cone.r, 12.804356, 1e-7);
    }

    #[test]
    fn square_field_of_view_gives_equal_height_and_radius() {
        let cone = CoverageCone::from_distance(1.0, 90.0).unwrap();
        assert_rel(cone.h, std::f64::consts::FRAC_1_SQRT_2, 1e-11);
        assert_rel(cone.r, std::f64::consts::FRAC_1_SQRT_2, 1e-11);
    }

    #[test]
    fn invalid_geometry_is_rejected() {
        assert!(CoverageCone::from_distance(0.0, 100.0).is_err());
        assert!(CoverageCone::from_distance(-1.0, 100.0).is_err());
        assert!(CoverageCone::from_distance(f64::NAN, 100.0).is_err());
        assert!(CoverageCone::from_distance(1.0, 0.0).is_err());
        assert!(CoverageCone::from_distance(1.0, 180.0).is_err());
        assert!(CoverageCone::from_distance(1.0, -5.0).is_err());
    }

    #[test]
    fn faithful_draw_endpoints() {
        let cone = CoverageCone::from_distance(7.2972, 100.0).unwrap();
        let origin = cone.position_from_unit_draws(PositionMode::Faithful, [0.0, 0.0, 0.0]);
        assert_eq!(origin, Position::new(0.0, 0.0, 0.0));

        // All-ones draws land on the cone's outer corner: apex height on the
        // axis, base radius sideways.
        let corner = cone.position_from_unit_draws(PositionMode::Faithful, [1.0, 1.0, 1.0]);
        assert_eq!(corner.z, cone.h);
        assert_eq!(corner.x, 0.0);
        assert_rel(corner.y, cone.r, 1e-12);
    }

    #[test]
    fn geometric_draw_endpoints() {
        let cone = CoverageCone::from_distance(7.2972, 100.0).unwrap();
        let origin = cone.position_from_unit_draws(PositionMode::Geometric, [0.0, 0.5, 0.25]);
        assert_eq!(origin, Position::new(0.0, 0.0, 0.0));

        let rim = cone.position_from_unit_draws(PositionMode::Geometric, [1.0, 1.0, 0.0]);
        assert_eq!(rim.z, cone.h);
        assert_rel(rim.x, cone.r, 1e-12);
        assert!(rim.y.abs() < 1e-12);
    }

    #[test]
    fn coverage_check_follows_the_mode() {
        let cone = CoverageCone::from_distance(7.2972, 100.0).unwrap();
        let base_rim = Position::new(0.0, 5.5900, 0.0);
        // Inside the powered range, so the range check accepts it; at z = 0
        // the cone solid has zero radius, so the solid check rejects it.
        assert!(cone.contains(&base_rim, PositionMode::Faithful));
        assert!(!cone.contains(&base_rim, PositionMode::Geometric));

        let outside = Position::new(0.0, 0.0, 8.0);
        assert!(!cone.contains(&outside, PositionMode::Faithful));
        assert!(!cone.contains(&outside, PositionMode::Geometric));

        let on_axis = Position::new(0.0, 0.0, 2.0);
        assert!(cone.contains(&on_axis, PositionMode::Faithful));
        assert!(cone.contains(&on_axis, PositionMode::Geometric));
    }

    #[test]
    fn sampled_positions_stay_in_coverage() {
        let cone = CoverageCone::from_distance(7.2972, 100.0).unwrap();
        for mode in [PositionMode::Faithful, PositionMode::Geometric] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..100_000 {
                let p = cone.sample_position(&mut rng, mode);
                assert!(cone.contains(&p, mode), "{mode:?} sample escaped: {p:?}");
            }
        }
    }

    #[test]
    fn faithful_samples_fill_one_octant_only() {
        let cone = CoverageCone::from_distance(7.2972, 100.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10_000 {
            let p = cone.sample_position(&mut rng, PositionMode::Faithful);
            assert!(p.x >= 0.0 && p.y >= 0.0 && p.z >= 0.0);
        }
    }

    #[test]
    fn geometric_samples_use_the_full_azimuth() {
        let cone = CoverageCone::from_distance(7.2972, 100.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut negative_x = 0usize;
        let mut negative_y = 0usize;
        for _ in 0..10_000 {
            let p = cone.sample_position(&mut rng, PositionMode::Geometric);
            if p.x < 0.0 {
                negative_x += 1;
            }
            if p.y < 0.0 {
                negative_y += 1;
            }
        }
        assert!(negative_x > 4000, "x sign is lopsided: {negative_x}");
        assert!(negative_y > 4000, "y sign is lopsided: {negative_y}");
    }

    proptest! {
        #[test]
        fn unit_draws_never_escape_the_powered_range(
            d_max in 0.1..100.0f64,
            fov in 10.0..170.0f64,
            u1 in 0.0..1.0f64,
            u2 in 0.0..1.0f64,
            u3 in 0.0..1.0f64,
        ) {
            let cone = CoverageCone::from_distance(d_max, fov).unwrap();
            for mode in [PositionMode::Faithful, PositionMode::Geometric] {
                let p = cone.position_from_unit_draws(mode, [u1, u2, u3]);
                // Headroom of a few rounding steps for draws at the rim.
                prop_assert!(
                    p.distance_to_transmitter() <= d_max * (1.0 + 1e-12),
                    "{mode:?} draw escaped: {p:?}"
                );
            }
        }

        #[test]
        fn geometric_draws_respect_the_cone_solid(
            u1 in 0.0..1.0f64,
            u2 in 0.0..1.0f64,
            u3 in 0.0..1.0f64,
        ) {
            let cone = CoverageCone::from_distance(7.2972, 100.0).unwrap();
            let p = cone.position_from_unit_draws(PositionMode::Geometric, [u1, u2, u3]);
            let rho = (p.x * p.x + p.y * p.y).sqrt();
            prop_assert!(p.z >= 0.0 && p.z <= cone.h);
            prop_assert!(rho <= p.z * cone.half_angle_rad().tan() * (1.0 + 1e-12) + 1e-300);
        }
    }
}
