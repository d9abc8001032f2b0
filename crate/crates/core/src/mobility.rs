//! Random-velocity receiver motion.
//!
//! Each time slot every receiver gets a fresh velocity with independent
//! components, each a uniform magnitude in `[0, v_max)` with a random sign,
//! then moves in a straight line for the slot. There are no walls: a
//! receiver can wander out of the coverage region, and eligibility checks
//! during scheduling are what take it out of play. Lengths in meters, times
//! in seconds, speeds in meters per second.

use rand::Rng;

use crate::coverage::Position;

/// Per-axis velocity of one receiver (meters per second).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Velocity {
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
}

/// Draws a fresh velocity. Consumes exactly six unit draws from `rng`: a
/// magnitude draw then a sign draw for x, y, z in that order. Callers that
/// pair runs against each other rely on this consumption count.
pub fn sample_velocity<R: Rng + ?Sized>(rng: &mut R, v_max: f64) -> Velocity {
    debug_assert!(v_max >= 0.0, "v_max must be non-negative");
    let mut component = || {
        let magnitude = rng.random::<f64>() * v_max;
        let sign = if rng.random::<f64>() < 0.5 { -1.0 } else { 1.0 };
        sign * magnitude
    };
    Velocity {
        vx: component(),
        vy: component(),
        vz: component(),
    }
}

/// Advances a position by `v * dt`.
pub fn step(p: &Position, v: &Velocity, dt: f64) -> Position {
    debug_assert!(dt >= 0.0, "dt must be non-negative");
    Position {
        x: p.x + v.vx * dt,
        y: p.y + v.vy * dt,
        z: p.z + v.vz * dt,
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
