//! Time-slotted charging episodes and Monte Carlo aggregation.
//!
//! An episode places `n_r` receivers uniformly inside the placement cone
//! with uniformly charged batteries, then walks time slots of length `t_c`
//! until the slot start passes the horizon `t_o`. Each slot:
//!
//! 1. the scheduler picks at most one receiver,
//! 2. if that receiver is eligible (inside the powered range, battery not
//!    full) it receives the slot's energy at the output power for its
//!    current distance, clamped at the battery capacity,
//! 3. every receiver gets a fresh random velocity and moves for `t_c`
//!    seconds,
//! 4. a round-robin queue, if present, rotates.
//!
//! Randomness contract: each run `i` of a Monte Carlo batch draws from
//! `ChaCha8Rng::seed_from_u64(seed)` on stream `i`, so runs are independent
//! of each other and of how many threads execute them. Within a run the
//! consumption order is fixed (four draws per receiver at placement, six
//! per receiver per slot for motion) and no selection policy consumes
//! draws, so two batches that differ only in the scheduler see identical
//! placements and motion, slot for slot. Scheduler comparisons are
//! therefore paired by construction.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::channel::{ChannelError, ChannelParams, MaxDistance};
use crate::coverage::{CoverageCone, CoverageError, PositionMode};
use crate::mobility;
use crate::scheduling::{
    cdc_select, is_eligible, rrc_select, ReceiverState, SchedulerConfig, SchedulerKind,
};

pub const SECONDS_PER_HOUR: f64 = 3600.0;

/// Errors raised when configuring or starting a simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Coverage(#[from] CoverageError),
    /// The placement power yields no finite coverage region to put
    /// receivers in.
    #[error("placement cone is undefined: {0}")]
    UndefinedCone(String),
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// Full description of one simulation scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub channel: ChannelParams,
    /// Supply power while charging (W).
    pub p_s: f64,
    /// Number of receivers.
    pub n_r: usize,
    /// Slot length (s).
    pub t_c: f64,
    /// Operation horizon (s). A horizon shorter than one slot still runs
    /// the slot that starts at time zero.
    pub t_o: f64,
    /// Battery capacity of every receiver (Wh).
    pub e_b: f64,
    /// Per-axis speed cap (m/s).
    pub v_max: f64,
    /// Field of view of the placement cone (degrees).
    pub fov_deg: f64,
    /// Supply power defining the placement cone; defaults to `p_s`. Letting
    /// it differ supports scenarios where receivers are scattered for one
    /// power level but charged at another.
    pub init_cone_power: Option<f64>,
    /// Master seed of the Monte Carlo batch.
    pub seed: u64,
    /// Number of independent runs in the batch.
    pub n_runs: usize,
    pub position_mode: PositionMode,
    pub scheduler: SchedulerKind,
    pub scheduler_cfg: SchedulerConfig,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            channel: ChannelParams::default(),
            p_s: 100.0,
            n_r: 1,
            t_c: 10.0,
            t_o: 3600.0,
            e_b: 10.35,
            v_max: 0.01,
            fov_deg: 100.0,
            init_cone_power: None,
            seed: 0,
            n_runs: 1,
            position_mode: PositionMode::Faithful,
            scheduler: SchedulerKind::Cdc,
            scheduler_cfg: SchedulerConfig::default(),
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        self.channel.validate()?;
        self.scheduler_cfg
            .validate()
            .map_err(SimError::InvalidConfig)?;
        if !self.p_s.is_finite() || self.p_s < 0.0 {
            return Err(SimError::InvalidConfig(format!(
                "p_s must be finite and non-negative, got {}",
                self.p_s
            )));
        }
        if self.n_r == 0 {
            return Err(SimError::InvalidConfig("n_r must be at least 1".into()));
        }
        if !self.t_c.is_finite() || self.t_c <= 0.0 {
            return Err(SimError::InvalidConfig(format!(
                "t_c must be finite and positive, got {}",
                self.t_c
            )));
        }
        if !self.t_o.is_finite() || self.t_o < 0.0 {
            return Err(SimError::InvalidConfig(format!(
                "t_o must be finite and non-negative, got {}",
                self.t_o
            )));
        }
        if !self.e_b.is_finite() || self.e_b <= 0.0 {
            return Err(SimError::InvalidConfig(format!(
                "e_b must be finite and positive, got {}",
                self.e_b
            )));
        }
        if !self.v_max.is_finite() || self.v_max < 0.0 {
            return Err(SimError::InvalidConfig(format!(
                "v_max must be finite and non-negative, got {}",
                self.v_max
            )));
        }
        if !self.fov_deg.is_finite() || self.fov_deg <= 0.0 || self.fov_deg >= 180.0 {
            return Err(SimError::InvalidConfig(format!(
                "fov_deg must lie in (0, 180), got {}",
                self.fov_deg
            )));
        }
        if let Some(p) = self.init_cone_power {
            if !p.is_finite() || p < 0.0 {
                return Err(SimError::InvalidConfig(format!(
                    "init_cone_power must be finite and non-negative, got {p}"
                )));
            }
        }
        if self.n_runs == 0 {
            return Err(SimError::InvalidConfig("n_runs must be at least 1".into()));
        }
        Ok(())
    }

    /// Powered range of the charging beam.
    pub fn charge_range(&self) -> Result<MaxDistance, ChannelError> {
        self.channel.max_transmission_distance(self.p_s)
    }

    /// Cone that receivers are placed in, from `init_cone_power` (or `p_s`).
    pub fn placement_cone(&self) -> Result<CoverageCone, SimError> {
        let power = self.init_cone_power.unwrap_or(self.p_s);
        match self.channel.max_transmission_distance(power)? {
            MaxDistance::Finite(d) => Ok(CoverageCone::from_distance(d, self.fov_deg)?),
            MaxDistance::NoCoverage => Err(SimError::UndefinedCone(format!(
                "{power} W puts the whole space out of range"
            ))),
            MaxDistance::Unbounded => Err(SimError::UndefinedCone(format!(
                "{power} W powers an unbounded range"
            ))),
        }
    }

    /// Number of slots the episode loop will run.
    pub fn slot_count(&self) -> usize {
        slot_count(self.t_c, self.t_o)
    }
}

/// Slots run by an episode: one per slot start in `[0, t_o]`, stepping by
/// `t_c`. The count is `floor(t_o/t_c) + 1` up to floating-point fencepost
/// behavior at exact multiples; a zero horizon runs exactly one slot.
pub fn slot_count(t_c: f64, t_o: f64) -> usize {
    assert!(t_c > 0.0, "slot length must be positive");
    let mut n = 0usize;
    let mut slot_start = 0.0;
    while slot_start <= t_o {
        n += 1;
        slot_start += t_c;
    }
    n
}

/// RNG of one Monte Carlo run: the master seed keyed to the run's own
/// stream.
pub fn episode_rng(seed: u64, run_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run_index);
    rng
}

// ---------------------------------------------------------------------------
// Episode
// ---------------------------------------------------------------------------

/// Per-slot trace of an episode.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotRecord {
    pub slot: usize,
    /// Receiver the scheduler picked, if any. Round-robin always picks one;
    /// it just delivers nothing when the pick is ineligible.
    pub selected: Option<usize>,
    /// Output power actually delivered this slot (W); zero when idle or
    /// when the pick was ineligible.
    pub delivered_power_w: f64,
    /// Distance of every receiver at selection time, in receiver order.
    pub distances_m: Vec<f64>,
}

/// Outcome of one episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeResult {
    /// Receivers as the episode left them.
    pub states: Vec<ReceiverState>,
    /// Sum of remaining battery energies at the end (Wh).
    pub energy_sum_wh: f64,
    pub slots: Vec<SlotRecord>,
}

/// Scheduler bookkeeping that lives across slots.
#[derive(Debug, Clone)]
pub enum SchedulerState {
    Cdc,
    Rrc { queue: VecDeque<usize> },
}

impl SchedulerState {
    /// Fresh scheduler state; round-robin queues receivers by arrival
    /// order.
    pub fn new(kind: SchedulerKind, states: &[ReceiverState]) -> Self {
        match kind {
            SchedulerKind::Cdc => SchedulerState::Cdc,
            SchedulerKind::Rrc => {
                let mut order: Vec<(usize, usize)> =
                    states.iter().map(|s| (s.arrival_order, s.id)).collect();
                order.sort_unstable();
                SchedulerState::Rrc {
                    queue: order.into_iter().map(|(_, id)| id).collect(),
                }
            }
        }
    }

    /// Receiver to beam to this slot.
    pub fn select(
        &self,
        states: &[ReceiverState],
        range: &MaxDistance,
        cfg: &SchedulerConfig,
    ) -> Option<usize> {
        match self {
            SchedulerState::Cdc => {
                cdc_select(states, range, cfg).expect("receiver population is non-empty")
            }
            SchedulerState::Rrc { queue } => {
                Some(rrc_select(queue, states).expect("round-robin queue is non-empty"))
            }
        }
    }

    /// End-of-slot bookkeeping: the round-robin head goes to the back.
    pub fn advance(&mut self) {
        if let SchedulerState::Rrc { queue } = self {
            if let Some(head) = queue.pop_front() {
                queue.push_back(head);
            }
        }
    }
}

/// Places the receiver population for one episode. Consumes exactly four
/// unit draws per receiver: three for position, one for battery level.
pub fn init_episode<R: Rng + ?Sized>(
    cfg: &SimConfig,
    rng: &mut R,
) -> Result<Vec<ReceiverState>, SimError> {
    cfg.validate()?;
    let cone = cfg.placement_cone()?;
    let mut states = Vec::with_capacity(cfg.n_r);
    for id in 0..cfg.n_r {
        let position = cone.sample_position(rng, cfg.position_mode);
        let remaining_energy = rng.random::<f64>() * cfg.e_b;
        states.push(ReceiverState::new(id, position, remaining_energy, cfg.e_b));
    }
    Ok(states)
}

/// Advances one slot: select, deliver, move, rotate. Consumes exactly six
/// unit draws per receiver regardless of scheduler or eligibility.
pub fn run_slot<R: Rng + ?Sized>(
    cfg: &SimConfig,
    range: &MaxDistance,
    states: &mut [ReceiverState],
    scheduler: &mut SchedulerState,
    slot: usize,
    rng: &mut R,
) -> SlotRecord {
    let selected = scheduler.select(states, range, &cfg.scheduler_cfg);
    let mut delivered_power_w = 0.0;
    if let Some(id) = selected {
        let idx = states
            .iter()
            .position(|s| s.id == id)
            .expect("scheduler picked a known receiver");
        if is_eligible(&states[idx], range) {
            let d = states[idx].distance_to_transmitter();
            let p_e = cfg
                .channel
                .output_electric_power(cfg.p_s, d)
                .expect("power and distance are non-negative");
            let gain_wh = p_e * cfg.t_c / SECONDS_PER_HOUR;
            let state = &mut states[idx];
            state.remaining_energy = (state.remaining_energy + gain_wh).min(state.battery_capacity);
            delivered_power_w = p_e;
        }
    }
    let distances_m = states.iter().map(|s| s.distance_to_transmitter()).collect();
    for state in states.iter_mut() {
        let v = mobility::sample_velocity(rng, cfg.v_max);
        state.position = mobility::step(&state.position, &v, cfg.t_c);
    }
    scheduler.advance();
    SlotRecord {
        slot,
        selected,
        delivered_power_w,
        distances_m,
    }
}

/// Runs an episode from an already-placed population.
pub fn run_episode_from<R: Rng + ?Sized>(
    cfg: &SimConfig,
    kind: SchedulerKind,
    mut states: Vec<ReceiverState>,
    rng: &mut R,
) -> Result<EpisodeResult, SimError> {
    if states.is_empty() {
        return Err(SimError::InvalidConfig(
            "episode needs at least one receiver".into(),
        ));
    }
    let range = cfg.charge_range()?;
    let n_slots = slot_count(cfg.t_c, cfg.t_o);
    let mut scheduler = SchedulerState::new(kind, &states);
    let mut slots = Vec::with_capacity(n_slots);
    for slot in 0..n_slots {
        slots.push(run_slot(
            cfg,
            &range,
            &mut states,
            &mut scheduler,
            slot,
            rng,
        ));
    }
    let energy_sum_wh = states.iter().map(|s| s.remaining_energy).sum();
    Ok(EpisodeResult {
        states,
        energy_sum_wh,
        slots,
    })
}

/// Places a population and runs one full episode.
pub fn run_episode<R: Rng + ?Sized>(
    cfg: &SimConfig,
    kind: SchedulerKind,
    rng: &mut R,
) -> Result<EpisodeResult, SimError> {
    let states = init_episode(cfg, rng)?;
    run_episode_from(cfg, kind, states, rng)
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

/// Aggregate of a Monte Carlo batch.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloResult {
    /// Average saturated energy: mean remaining energy per receiver, over
    /// all receivers and runs (Wh).
    pub e_sa_wh: f64,
    /// End-of-episode energy sum of each run (Wh), in run order.
    pub per_run_energy_wh: Vec<f64>,
    /// Receiver count the batch ran with.
    pub n_r: usize,
}

impl MonteCarloResult {
    /// Sample standard deviation of the per-run per-receiver averages (Wh);
    /// zero for a single run.
    pub fn e_sa_sd_wh(&self) -> f64 {
        let n = self.per_run_energy_wh.len();
        if n < 2 {
            return 0.0;
        }
        let scale = self.n_r as f64;
        let mean = self.e_sa_wh;
        let ss: f64 = self
            .per_run_energy_wh
            .iter()
            .map(|e| {
                let x = e / scale - mean;
                x * x
            })
            .sum();
        (ss / (n - 1) as f64).sqrt()
    }
}

/// Scheduler comparison on identical random draws.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedComparison {
    pub cdc: MonteCarloResult,
    pub rrc: MonteCarloResult,
    /// `e_sa(CDC) - e_sa(RRC)` (Wh).
    pub d_sa_wh: f64,
}

/// Runs `cfg.n_runs` independent episodes of `kind` and averages them.
///
/// Run `i` draws from stream `i` of the master seed, so the result does not
/// depend on thread count or scheduling, and batches with different
/// schedulers stay paired run for run.
pub fn monte_carlo(cfg: &SimConfig, kind: SchedulerKind) -> Result<MonteCarloResult, SimError> {
    cfg.validate()?;
    // Surface placement problems once, up front.
    cfg.placement_cone()?;
    let per_run_energy_wh: Vec<f64> = (0..cfg.n_runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = episode_rng(cfg.seed, run as u64);
            run_episode(cfg, kind, &mut rng).map(|ep| ep.energy_sum_wh)
        })
        .collect::<Result<_, _>>()?;
    let e_sa_wh = per_run_energy_wh.iter().sum::<f64>() / (cfg.n_r as f64 * cfg.n_runs as f64);
    Ok(MonteCarloResult {
        e_sa_wh,
        per_run_energy_wh,
        n_r: cfg.n_r,
    })
}

/// Runs the CDC and round-robin batches on identical draws and differences
/// the averages.
pub fn compare(cfg: &SimConfig) -> Result<PairedComparison, SimError> {
    let cdc = monte_carlo(cfg, SchedulerKind::Cdc)?;
    let rrc = monte_carlo(cfg, SchedulerKind::Rrc)?;
    let d_sa_wh = cdc.e_sa_wh - rrc.e_sa_wh;
    Ok(PairedComparison { cdc, rrc, d_sa_wh })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    // Tests tweak one field of a default scenario at a time; the
    // struct-update form would bury which knob each test turns.
    #![allow(clippy::field_reassign_with_default)]

    use super::*;
    use crate::coverage::Position;
    use crate::scheduling::EligibilityMode;

    fn assert_rel(actual: f64, expected: f64, rel: f64) {
        let err = (actual - expected).abs() / expected.abs().max(f64::MIN_POSITIVE);
        assert!(
            err <= rel,
            "expected {expected}, got {actual} (relative error {err:.3e} > {rel:.1e})"
        );
    }

    #[test]
    fn slot_counts_include_the_slot_starting_at_the_horizon() {
        assert_eq!(slot_count(10.0, 3600.0), 361);
        assert_eq!(slot_count(10.0, 0.0), 1);
        assert_eq!(slot_count(10.0, 9.999), 1);
        assert_eq!(slot_count(10.0, 10.0), 2);
        assert_eq!(slot_count(60.0, 3600.0), 61);
        assert_eq!(slot_count(10.0, 7200.0), 721);
        assert_eq!(slot_count(10.0, 10800.0), 1081);
    }

    #[test]
    fn config_validation_rejects_degenerate_scenarios() {
        let ok = SimConfig::default();
        assert!(ok.validate().is_ok());
        for tweak in [
            |c: &mut SimConfig| c.p_s = -1.0,
            |c: &mut SimConfig| c.n_r = 0,
            |c: &mut SimConfig| c.t_c = 0.0,
            |c: &mut SimConfig| c.t_o = -1.0,
            |c: &mut SimConfig| c.e_b = 0.0,
            |c: &mut SimConfig| c.v_max = -0.01,
            |c: &mut SimConfig| c.fov_deg = 180.0,
            |c: &mut SimConfig| c.n_runs = 0,
            |c: &mut SimConfig| c.init_cone_power = Some(-5.0),
            |c: &mut SimConfig| c.channel.f = 2.0,
            |c: &mut SimConfig| c.scheduler_cfg.c_e = -1.0,
        ] {
            let mut bad = SimConfig::default();
            tweak(&mut bad);
            assert!(bad.validate().is_err(), "tweak was accepted: {bad:?}");
        }
    }

    #[test]
    fn placement_requires_a_finite_cone() {
        let mut cfg = SimConfig::default();
        cfg.p_s = 40.0;
        let mut rng = episode_rng(0, 0);
        assert!(matches!(
            init_episode(&cfg, &mut rng),
            Err(SimError::UndefinedCone(_))
        ));
        cfg.p_s = 400.0;
        assert!(matches!(
            init_episode(&cfg, &mut rng),
            Err(SimError::UndefinedCone(_))
        ));
        // A separate placement power rescues an otherwise uncoverable
        // charging power.
        cfg.p_s = 40.0;
        cfg.init_cone_power = Some(200.0);
        assert!(init_episode(&cfg, &mut rng).is_ok());
    }

    #[test]
    fn placement_draws_four_per_receiver() {
        let mut cfg = SimConfig::default();
        cfg.n_r = 5;
        let mut used = episode_rng(9, 0);
        init_episode(&cfg, &mut used).unwrap();
        let mut fresh = episode_rng(9, 0);
        for _ in 0..4 * cfg.n_r {
            fresh.random::<f64>();
        }
        assert_eq!(used.random::<f64>(), fresh.random::<f64>());
    }

    #[test]
    fn slot_draws_six_per_receiver() {
        let mut cfg = SimConfig::default();
        cfg.n_r = 3;
        let mut rng = episode_rng(10, 0);
        let mut states = init_episode(&cfg, &mut rng).unwrap();
        let mut fresh = episode_rng(10, 0);
        for _ in 0..4 * cfg.n_r {
            fresh.random::<f64>();
        }
        let range = cfg.charge_range().unwrap();
        let mut sched = SchedulerState::new(SchedulerKind::Cdc, &states);
        run_slot(&cfg, &range, &mut states, &mut sched, 0, &mut rng);
        for _ in 0..6 * cfg.n_r {
            fresh.random::<f64>();
        }
        assert_eq!(rng.random::<f64>(), fresh.random::<f64>());
    }

    #[test]
    fn placement_respects_the_cone_and_battery_bounds() {
        let mut cfg = SimConfig::default();
        cfg.n_r = 200;
        cfg.p_s = 200.0;
        let cone = cfg.placement_cone().unwrap();
        let mut rng = episode_rng(3, 0);
        let states = init_episode(&cfg, &mut rng).unwrap();
        assert_eq!(states.len(), 200);
        for (i, s) in states.iter().enumerate() {
            assert_eq!(s.id, i);
            assert_eq!(s.arrival_order, i);
            assert!(cone.contains(&s.position, cfg.position_mode));
            assert!(s.remaining_energy >= 0.0 && s.remaining_energy < cfg.e_b);
            assert_eq!(s.battery_capacity, cfg.e_b);
        }
    }

    #[test]
    fn placement_battery_levels_average_half_capacity() {
        let mut cfg = SimConfig::default();
        cfg.n_r = 50_000;
        let mut rng = episode_rng(77, 0);
        let states = init_episode(&cfg, &mut rng).unwrap();
        let mean = states.iter().map(|s| s.remaining_energy).sum::<f64>() / cfg.n_r as f64;
        // Three standard errors of a uniform [0, 10.35) mean at this size.
        assert!((mean - 5.175).abs() < 0.0400854, "mean {mean} is off");
    }

    #[test]
    fn static_receiver_accumulates_the_analytic_energy() {
        // One receiver pinned at 2 m with motion disabled: every slot adds
        // output_power(100 W, 2 m) * 10 s, which is 0.012097333 Wh, across
        // 361 slots.
        let mut cfg = SimConfig::default();
        cfg.v_max = 0.0;
        let state = ReceiverState::new(0, Position::new(0.0, 0.0, 2.0), 1.0, cfg.e_b);
        let mut rng = episode_rng(0, 0);
        let ep = run_episode_from(&cfg, SchedulerKind::Cdc, vec![state], &mut rng).unwrap();
        assert_eq!(ep.slots.len(), 361);
        assert_rel(ep.energy_sum_wh, 1.0 + 361.0 * 0.012097333, 1e-6);
        // Every slot delivered the same power to the same receiver.
        for slot in &ep.slots {
            assert_eq!(slot.selected, Some(0));
            assert_rel(slot.delivered_power_w, 4.3550397, 1e-7);
            assert_eq!(slot.distances_m.len(), 1);
            assert_rel(slot.distances_m[0], 2.0, 1e-12);
        }
    }

    #[test]
    fn battery_clamps_at_capacity() {
        let mut cfg = SimConfig::default();
        cfg.v_max = 0.0;
        let state = ReceiverState::new(0, Position::new(0.0, 0.0, 2.0), 10.0, cfg.e_b);
        let mut rng = episode_rng(0, 0);
        let ep = run_episode_from(&cfg, SchedulerKind::Cdc, vec![state], &mut rng).unwrap();
        assert_eq!(ep.states[0].remaining_energy, cfg.e_b);
        // Once full the receiver goes ineligible and the strict scheduler
        // idles.
        assert_eq!(ep.slots.last().unwrap().selected, None);
        assert_eq!(ep.slots.last().unwrap().delivered_power_w, 0.0);
    }

    #[test]
    fn zero_horizon_runs_exactly_one_slot() {
        let mut cfg = SimConfig::default();
        cfg.t_o = 0.0;
        let mut rng = episode_rng(1, 0);
        let ep = run_episode(&cfg, SchedulerKind::Cdc, &mut rng).unwrap();
        assert_eq!(ep.slots.len(), 1);
    }

    #[test]
    fn round_robin_rotates_through_arrival_order() {
        let mut cfg = SimConfig::default();
        cfg.n_r = 3;
        cfg.t_o = 70.0; // 8 slots
        let mut rng = episode_rng(5, 0);
        let ep = run_episode(&cfg, SchedulerKind::Rrc, &mut rng).unwrap();
        let picks: Vec<Option<usize>> = ep.slots.iter().map(|s| s.selected).collect();
        let expected: Vec<Option<usize>> = [0, 1, 2, 0, 1, 2, 0, 1].into_iter().map(Some).collect();
        assert_eq!(picks, expected);
    }

    #[test]
    fn motion_is_identical_across_schedulers() {
        // Selection consumes no draws, so the two policies must see the
        // exact same positions all the way through.
        let mut cfg = SimConfig::default();
        cfg.n_r = 4;
        cfg.t_o = 300.0;
        let mut rng_cdc = episode_rng(8, 0);
        let cdc = run_episode(&cfg, SchedulerKind::Cdc, &mut rng_cdc).unwrap();
        let mut rng_rrc = episode_rng(8, 0);
        let rrc = run_episode(&cfg, SchedulerKind::Rrc, &mut rng_rrc).unwrap();
        for (a, b) in cdc.states.iter().zip(rrc.states.iter()) {
            assert_eq!(a.position, b.position);
        }
        for (sa, sb) in cdc.slots.iter().zip(rrc.slots.iter()) {
            assert_eq!(sa.distances_m, sb.distances_m);
        }
    }

    #[test]
    fn batches_are_reproducible_and_runs_are_distinct() {
        let mut cfg = SimConfig::default();
        cfg.n_r = 2;
        cfg.n_runs = 4;
        cfg.t_o = 600.0;
        let a = monte_carlo(&cfg, SchedulerKind::Cdc).unwrap();
        let b = monte_carlo(&cfg, SchedulerKind::Cdc).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.per_run_energy_wh.len(), 4);
        assert_ne!(a.per_run_energy_wh[0], a.per_run_energy_wh[1]);
        let mean = a.per_run_energy_wh.iter().sum::<f64>() / (2.0 * 4.0);
        assert_eq!(a.e_sa_wh, mean);
    }

    #[test]
    fn batch_results_do_not_depend_on_thread_count() {
        let mut cfg = SimConfig::default();
        cfg.n_r = 3;
        cfg.n_runs = 8;
        cfg.t_o = 600.0;
        let parallel = monte_carlo(&cfg, SchedulerKind::Cdc).unwrap();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| monte_carlo(&cfg, SchedulerKind::Cdc))
            .unwrap();
        assert_eq!(parallel, single);
    }

    #[test]
    fn single_receiver_comparison_is_an_exact_tie() {
        // With one receiver both policies pick it whenever anything can be
        // delivered, on identical draws, so the difference is exactly zero.
        let mut cfg = SimConfig::default();
        cfg.n_runs = 3;
        cfg.t_o = 360.0;
        let cmp = compare(&cfg).unwrap();
        assert_eq!(cmp.cdc.per_run_energy_wh, cmp.rrc.per_run_energy_wh);
        assert_eq!(cmp.d_sa_wh, 0.0);
    }

    #[test]
    fn strict_and_work_conserving_modes_diverge_when_the_winner_is_full() {
        let mut cfg = SimConfig::default();
        cfg.v_max = 0.0;
        cfg.t_o = 0.0;
        // The full receiver wins the score (5.675 against 6.0).
        let full = ReceiverState::new(0, Position::new(0.0, 0.0, 1.0), 10.35, 10.35);
        let runner_up = ReceiverState::new(1, Position::new(0.0, 0.0, 4.0), 8.0, 10.35);

        let mut rng = episode_rng(0, 0);
        let strict = run_episode_from(
            &cfg,
            SchedulerKind::Cdc,
            vec![full.clone(), runner_up.clone()],
            &mut rng,
        )
        .unwrap();
        assert_eq!(strict.slots[0].selected, None);

        cfg.scheduler_cfg.eligibility_mode = EligibilityMode::WorkConserving;
        let mut rng = episode_rng(0, 0);
        let fallthrough =
            run_episode_from(&cfg, SchedulerKind::Cdc, vec![full, runner_up], &mut rng).unwrap();
        assert_eq!(fallthrough.slots[0].selected, Some(1));
        assert!(fallthrough.energy_sum_wh > strict.energy_sum_wh);
    }

    #[test]
    fn standard_deviation_matches_a_hand_computation() {
        let result = MonteCarloResult {
            e_sa_wh: 2.0,
            per_run_energy_wh: vec![2.0, 6.0, 4.0],
            n_r: 2,
        };
        // Per-receiver averages 1, 3, 2 with mean 2: variance 1.
        assert_rel(result.e_sa_sd_wh(), 1.0, 1e-12);
        let single = MonteCarloResult {
            e_sa_wh: 1.0,
            per_run_energy_wh: vec![2.0],
            n_r: 2,
        };
        assert_eq!(single.e_sa_sd_wh(), 0.0);
    }
}
