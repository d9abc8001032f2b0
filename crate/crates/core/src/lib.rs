//! Resonant beam charging (RBC) library.
//!
//! An RBC transmitter drives a resonant optical cavity whose external beam
//! delivers power to mobile receivers. This crate models the full power
//! chain from electrical supply to the receiver's electrical output, derives
//! the coverage region implied by that chain, and simulates charge
//! scheduling for populations of receivers moving inside the coverage cone.
//!
//! Layout:
//! - [`channel`]: supply-to-output power chain and its distance inversion
//! - [`coverage`]: coverage cone geometry and receiver placement
//! - [`mobility`]: random-velocity receiver motion
//! - [`scheduling`]: per-slot receiver selection policies
//! - [`simulation`]: time-slotted episodes and Monte Carlo aggregation
//! - [`verification`]: self-checks against published reference behavior

pub mod channel;
pub mod coverage;
pub mod mobility;
pub mod scheduling;
pub mod simulation;
pub mod verification;

pub use channel::{ChannelError, ChannelParams, MaxDistance};
pub use coverage::{CoverageCone, CoverageError, Position, PositionMode};
pub use mobility::Velocity;
pub use scheduling::{
    EligibilityMode, ReceiverState, SchedulerConfig, SchedulerKind, SchedulingError,
};
pub use simulation::{
    EpisodeResult, MonteCarloResult, PairedComparison, SimConfig, SimError, SlotRecord,
};
