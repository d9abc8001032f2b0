//! Per-slot receiver selection policies.
//!
//! In every time slot the transmitter beams to at most one receiver. Two
//! policies are implemented:
//!
//! - CDC (charge via the distance-and-charge coefficient): each receiver is
//!   scored with `F = c_e * e_r + c_d * d`, remaining battery energy `e_r`
//!   (Wh) against current distance `d` (m), and the lowest score wins. The
//!   score deliberately mixes units; the optional `normalize` switch scores
//!   `e_r / battery_capacity` against `d / d_max` instead.
//! - RRC (round-robin charging): receivers take turns in arrival order,
//!   ignoring battery state and position entirely.
//!
//! A receiver is eligible for delivery only while it sits inside the powered
//! range and its battery is not full. How ineligibility interacts with
//! selection differs by policy: round-robin spends the slot on the head of
//! the queue regardless, while CDC consults [`EligibilityMode`].

use std::collections::VecDeque;

use thiserror::Error;

use crate::channel::MaxDistance;
use crate::coverage::Position;

/// Errors raised by the selection policies.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchedulingError {
    /// Selection was asked for with no receivers at all.
    #[error("cannot select from an empty receiver population")]
    EmptyPopulation,
    /// The round-robin queue had no entries.
    #[error("round-robin queue is empty")]
    EmptyQueue,
}

/// What CDC does when the best-scored receiver is not eligible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EligibilityMode {
    /// Keep the slot idle: the winner is the winner, eligible or not.
    #[default]
    Strict,
    /// Fall through to the best-scored eligible receiver, if any.
    WorkConserving,
}

/// Which selection policy drives a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SchedulerKind {
    #[default]
    Cdc,
    Rrc,
}

/// Weights and switches of the CDC policy.
#[derive(Debug, Clone, PartialEq)]
pub struct SchedulerConfig {
    /// Weight on remaining energy.
    pub c_e: f64,
    /// Weight on distance.
    pub c_d: f64,
    pub eligibility_mode: EligibilityMode,
    /// Score dimensionless ratios instead of raw Wh and meters.
    pub normalize: bool,
}

impl Default for SchedulerConfig {
    fn default() -> Self {
        SchedulerConfig {
            c_e: 0.5,
            c_d: 0.5,
            eligibility_mode: EligibilityMode::Strict,
            normalize: false,
        }
    }
}

impl SchedulerConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !self.c_e.is_finite() || self.c_e < 0.0 {
            return Err(format!(
                "c_e must be finite and non-negative, got {}",
                self.c_e
            ));
        }
        if !self.c_d.is_finite() || self.c_d < 0.0 {
            return Err(format!(
                "c_d must be finite and non-negative, got {}",
                self.c_d
            ));
        }
        if self.c_e + self.c_d <= 0.0 {
            return Err("at least one of c_e, c_d must be positive".to_string());
        }
        Ok(())
    }
}

/// One receiver as the scheduler sees it.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverState {
    /// Stable identifier; ties in the score break toward the lowest id.
    pub id: usize,
    pub position: Position,
    /// Energy currently in the battery (Wh).
    pub remaining_energy: f64,
    /// Battery capacity (Wh); the battery is full at this level.
    pub battery_capacity: f64,
    /// Rank in order of first connection, used to seed the round-robin
    /// queue.
    pub arrival_order: usize,
}

impl ReceiverState {
    pub fn new(
        id: usize,
        position: Position,
        remaining_energy: f64,
        battery_capacity: f64,
    ) -> Self {
        ReceiverState {
            id,
            position,
            remaining_energy,
            battery_capacity,
            arrival_order: id,
        }
    }

    pub fn distance_to_transmitter(&self) -> f64 {
        self.position.distance_to_transmitter()
    }

    /// Whether the battery can still take energy.
    pub fn has_room(&self) -> bool {
        self.remaining_energy < self.battery_capacity
    }
}

/// Whether a receiver may take delivery: inside the powered range with room
/// left in the battery.
pub fn is_eligible(state: &ReceiverState, range: &MaxDistance) -> bool {
    range.covers(state.distance_to_transmitter()) && state.has_room()
}

// ---------------------------------------------------------------------------
// CDC
// ---------------------------------------------------------------------------

/// Distance-and-charge score; lower is more urgent.
pub fn scheduling_coefficient(e_r: f64, d: f64, cfg: &SchedulerConfig) -> f64 {
    cfg.c_e * e_r + cfg.c_d * d
}

/// Picks the receiver CDC beams to this slot, or `None` to idle.
///
/// Scores every receiver, finds the lowest score (ties go to the lowest
/// id), then applies the eligibility mode. The result does not depend on
/// the order of `states`.
pub fn cdc_select(
    states: &[ReceiverState],
    range: &MaxDistance,
    cfg: &SchedulerConfig,
) -> Result<Option<usize>, SchedulingError> {
    if states.is_empty() {
        return Err(SchedulingError::EmptyPopulation);
    }
    let scored: Vec<(f64, &ReceiverState)> = states
        .iter()
        .map(|s| {
            let d = s.distance_to_transmitter();
            let coeff = if cfg.normalize {
                let d_scale = range.finite().unwrap_or(1.0);
                scheduling_coefficient(s.remaining_energy / s.battery_capacity, d / d_scale, cfg)
            } else {
                scheduling_coefficient(s.remaining_energy, d, cfg)
            };
            (coeff, s)
        })
        .collect();

    let winner = scored
        .iter()
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.id.cmp(&b.1.id)))
        .expect("population is non-empty");

    match cfg.eligibility_mode {
        EligibilityMode::Strict => {
            if is_eligible(winner.1, range) {
                Ok(Some(winner.1.id))
            } else {
                Ok(None)
            }
        }
        EligibilityMode::WorkConserving => {
            let mut ranked: Vec<&(f64, &ReceiverState)> = scored.iter().collect();
            ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.id.cmp(&b.1.id)));
            Ok(ranked
                .iter()
                .find(|(_, s)| is_eligible(s, range))
                .map(|(_, s)| s.id))
        }
    }
}

// ---------------------------------------------------------------------------
// RRC
// ---------------------------------------------------------------------------

/// Picks the receiver RRC beams to this slot: the head of the queue, no
/// matter its battery level or position. The caller rotates the queue after
/// the slot.
pub fn rrc_select(
    queue: &VecDeque<usize>,
    states: &[ReceiverState],
) -> Result<usize, SchedulingError> {
    let head = *queue.front().ok_or(SchedulingError::EmptyQueue)?;
    debug_assert!(
        states.iter().any(|s| s.id == head),
        "queue head {head} is not a known receiver"
    );
    Ok(head)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
