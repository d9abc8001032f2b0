//! Self-checks against published reference behavior.
//!
//! Each function returns structured [`Check`] records so front ends can
//! print an expected/actual/tolerance table; nothing here panics on a
//! failing check, and simulation errors from perturbed parameter sets are
//! reported as failed checks rather than crashes.
//!
//! The reference grid values reproduce the published coverage tables for
//! the default [`ChannelParams`]. The published simulation figures are not
//! bit-reproducible (their Monte Carlo count and RNG were never stated), so
//! the batch-level checks pin statistical trends at a fixed seed and run
//! count instead of exact curves.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{ChannelParams, MaxDistance};
use crate::coverage::{CoverageCone, Position};
use crate::scheduling::{
    cdc_select, EligibilityMode, ReceiverState, SchedulerConfig, SchedulerKind,
};
use crate::simulation::{
    compare, episode_rng, monte_carlo, run_slot, SchedulerState, SimConfig, SimError,
};

/// Relative tolerance on the coverage-table reproductions; slack for the
/// reference tables' rounded constants.
pub const TABLE_REL_TOL: f64 = 0.005;
/// Relative agreement demanded between the two distance-inversion routes.
pub const INVERSION_REL_TOL: f64 = 1e-9;
/// Random supply powers thrown at the inversion cross-check.
pub const INVERSION_SAMPLES: usize = 1000;
/// Supply-power band (W) that keeps the inversion in the finite regime
/// with margin on both sides.
pub const INVERSION_POWER_BAND: (f64, f64) = (44.5, 389.0);
/// Step (m) of the power-curve shape sweeps.
pub const SHAPE_STEP_M: f64 = 0.01;
/// Runs per Monte Carlo batch in the trend checks.
pub const TREND_RUNS: usize = 200;
/// Default master seed of the seeded checks.
pub const DEFAULT_SEED: u64 = 42;

/// Supply powers (W) against expected maximum transmission distances (m).
pub const MAX_DISTANCE_TABLE: [(f64, f64); 4] = [
    (50.0, 3.2623),
    (100.0, 7.2972),
    (150.0, 11.2438),
    (200.0, 16.7149),
];

/// Supply powers (W) against expected cone height and base radius (m).
pub const CONE_TABLE: [(f64, f64, f64); 4] = [
    (50.0, 2.0970, 2.4991),
    (100.0, 4.6906, 5.5900),
    (150.0, 7.2274, 8.6133),
    (200.0, 10.7441, 12.8044),
];

/// Receiver-count grid of the population trend check.
pub const RECEIVER_GRID: [usize; 5] = [1, 5, 10, 20, 50];
/// Horizon grid (s) of the duration trend check.
pub const DURATION_GRID_S: [f64; 3] = [3600.0, 7200.0, 10800.0];
/// Supply-power grid (W) of the power trend check.
pub const POWER_GRID_W: [f64; 4] = [50.0, 100.0, 150.0, 200.0];
/// Receiver counts that must show a strictly positive scheduling gap.
pub const GAP_RECEIVER_COUNTS: [usize; 2] = [5, 10];

/// One verified fact: what was expected, what happened, how much slack.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub tolerance: String,
    pub passed: bool,
}

impl Check {
    fn rel(name: impl Into<String>, expected: f64, actual: f64, rel_tol: f64) -> Check {
        let err = (actual - expected).abs() / expected.abs().max(f64::MIN_POSITIVE);
        Check {
            name: name.into(),
            expected: format!("{expected}"),
            actual: format!("{actual:.7}"),
            tolerance: format!("{:.2}% rel", rel_tol * 100.0),
            passed: err <= rel_tol,
        }
    }

    fn exact(
        name: impl Into<String>,
        expected: impl Into<String>,
        actual: impl Into<String>,
        passed: bool,
    ) -> Check {
        Check {
            name: name.into(),
            expected: expected.into(),
            actual: actual.into(),
            tolerance: "exact".into(),
            passed,
        }
    }

    fn error(name: impl Into<String>, expected: impl Into<String>, err: &SimError) -> Check {
        Check {
            name: name.into(),
            expected: expected.into(),
            actual: format!("error: {err}"),
            tolerance: "exact".into(),
            passed: false,
        }
    }
}

// ---------------------------------------------------------------------------
// Channel-level checks
// ---------------------------------------------------------------------------

/// Maximum transmission distance against the reference grid.
pub fn verify_max_distance_table(params: &ChannelParams) -> Vec<Check> {
    MAX_DISTANCE_TABLE
        .iter()
        .map(|&(p_s, expected)| {
            let name = format!("max_distance[p_s={p_s}]");
            match params.max_transmission_distance(p_s) {
                Ok(MaxDistance::Finite(d)) => Check::rel(name, expected, d, TABLE_REL_TOL),
                Ok(other) => {
                    Check::exact(name, format!("{expected} m"), format!("{other:?}"), false)
                }
                Err(e) => Check::exact(name, format!("{expected} m"), format!("error: {e}"), false),
            }
        })
        .collect()
}

/// Cone height and radius against the reference grid.
pub fn verify_cone_table(params: &ChannelParams) -> Vec<Check> {
    let mut checks = Vec::new();
    for &(p_s, expected_h, expected_r) in &CONE_TABLE {
        let cone = params
            .max_transmission_distance(p_s)
            .ok()
            .and_then(|m| m.finite())
            .and_then(|d| CoverageCone::from_distance(d, 100.0).ok());
        match cone {
            Some(cone) => {
                checks.push(Check::rel(
                    format!("cone_height[p_s={p_s}]"),
                    expected_h,
                    cone.h,
                    TABLE_REL_TOL,
                ));
                checks.push(Check::rel(
                    format!("cone_radius[p_s={p_s}]"),
                    expected_r,
                    cone.r,
                    TABLE_REL_TOL,
                ));
            }
            None => {
                checks.push(Check::exact(
                    format!("cone_height[p_s={p_s}]"),
                    format!("{expected_h} m"),
                    "no finite cone".to_string(),
                    false,
                ));
                checks.push(Check::exact(
                    format!("cone_radius[p_s={p_s}]"),
                    format!("{expected_r} m"),
                    "no finite cone".to_string(),
                    false,
                ));
            }
        }
    }
    checks
}

/// Agreement of the closed-form inversion with the bracketing route on
/// random powers in the finite band.
pub fn verify_inversion_agreement(params: &ChannelParams, seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut failures = 0usize;
    for _ in 0..INVERSION_SAMPLES {
        let p_s = rng.random_range(INVERSION_POWER_BAND.0..INVERSION_POWER_BAND.1);
        let closed = params
            .max_transmission_distance(p_s)
            .ok()
            .and_then(|m| m.finite());
        let bisect = params
            .max_transmission_distance_bisect(p_s)
            .ok()
            .and_then(|m| m.finite());
        match (closed, bisect) {
            (Some(c), Some(b)) => {
                let err = (c - b).abs() / c.abs().max(f64::MIN_POSITIVE);
                worst = worst.max(err);
                if err > INVERSION_REL_TOL {
                    failures += 1;
                }
            }
            _ => failures += 1,
        }
    }
    vec![Check {
        name: format!("inversion_agreement[{INVERSION_SAMPLES} powers]"),
        expected: "both routes finite and matching".into(),
        actual: format!("worst relative gap {worst:.3e}, {failures} failures"),
        tolerance: format!("{INVERSION_REL_TOL:.0e} rel"),
        passed: failures == 0,
    }]
}

/// Shape of the output-power curve: non-increasing, zero past the
/// boundary, and ordered by supply power.
// The negated comparisons are deliberate: a NaN anywhere in the curve must
// count as a violation, which `p_e > prev` would silently wave through.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn verify_power_curve_shape(params: &ChannelParams) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut boundaries = Vec::new();
    for &(p_s, _) in &MAX_DISTANCE_TABLE {
        let d_max = match params.max_transmission_distance(p_s) {
            Ok(MaxDistance::Finite(d)) => d,
            other => {
                checks.push(Check::exact(
                    format!("power_curve[p_s={p_s}]"),
                    "finite boundary".to_string(),
                    format!("{other:?}"),
                    false,
                ));
                continue;
            }
        };
        boundaries.push((p_s, d_max));

        // Non-increasing over [0, d_max + 1] in centimeter steps.
        let steps = ((d_max + 1.0) / SHAPE_STEP_M).ceil() as usize;
        let mut monotone = true;
        let mut prev = f64::INFINITY;
        for k in 0..=steps {
            let d = k as f64 * SHAPE_STEP_M;
            let p_e = params.output_electric_power(p_s, d).unwrap_or(f64::NAN);
            if !(p_e <= prev) {
                monotone = false;
                break;
            }
            prev = p_e;
        }
        checks.push(Check::exact(
            format!("power_curve_non_increasing[p_s={p_s}]"),
            "p_e(d) never rises".to_string(),
            if monotone {
                "never rises"
            } else {
                "rises somewhere"
            }
            .to_string(),
            monotone,
        ));

        // Zero at and past the boundary. At the boundary itself the raw
        // chain sits within rounding of zero, so allow a vanishing residue
        // there; past it the clamp must be exact.
        let at_boundary = params.output_electric_power(p_s, d_max).unwrap_or(f64::NAN);
        let mut beyond_zero = at_boundary.abs() <= 1e-9;
        for k in 1..=((1.0 / SHAPE_STEP_M) as usize) {
            let d = d_max + k as f64 * SHAPE_STEP_M;
            if params.output_electric_power(p_s, d).unwrap_or(f64::NAN) != 0.0 {
                beyond_zero = false;
                break;
            }
        }
        checks.push(Check {
            name: format!("power_curve_zero_beyond[p_s={p_s}]"),
            expected: "p_e = 0 from the boundary outward".into(),
            actual: format!("p_e(boundary) = {at_boundary:.3e}"),
            tolerance: "1e-9 W at the boundary, exact past it".into(),
            passed: beyond_zero,
        });
    }

    // More supply power means strictly more output everywhere inside the
    // smaller boundary.
    for pair in boundaries.windows(2) {
        let (p_lo, d_lo) = pair[0];
        let (p_hi, _) = pair[1];
        let mut ordered = true;
        let mut k = 0usize;
        loop {
            let d = k as f64 * SHAPE_STEP_M;
            if d >= d_lo {
                break;
            }
            let lo = params.output_electric_power(p_lo, d).unwrap_or(f64::NAN);
            let hi = params.output_electric_power(p_hi, d).unwrap_or(f64::NAN);
            if !(hi > lo) {
                ordered = false;
                break;
            }
            k += 1;
        }
        checks.push(Check::exact(
            format!("power_curve_ordering[{p_lo}<{p_hi}]"),
            "higher supply dominates pointwise".to_string(),
            if ordered { "dominates" } else { "crosses" }.to_string(),
            ordered,
        ));
    }
    checks
}

// ---------------------------------------------------------------------------
// Batch-level trend checks
// ---------------------------------------------------------------------------

fn trend_config(params: &ChannelParams, seed: u64) -> SimConfig {
    SimConfig {
        channel: params.clone(),
        seed,
        n_runs: TREND_RUNS,
        ..SimConfig::default()
    }
}

fn e_sa(cfg: &SimConfig, kind: SchedulerKind) -> Result<f64, SimError> {
    monte_carlo(cfg, kind).map(|r| r.e_sa_wh)
}

/// Average saturated energy falls (weakly) as the population grows.
pub fn verify_receiver_count_trend(params: &ChannelParams, seed: u64) -> Vec<Check> {
    let mut cfg = trend_config(params, seed);
    cfg.p_s = 200.0;
    cfg.t_o = 3600.0;
    let mut checks = Vec::new();
    let mut prev: Option<(usize, f64)> = None;
    for n_r in RECEIVER_GRID {
        cfg.n_r = n_r;
        let value = match e_sa(&cfg, SchedulerKind::Cdc) {
            Ok(v) => v,
            Err(e) => {
                checks.push(Check::error(
                    format!("e_sa_vs_receivers[n_r={n_r}]"),
                    "finite batch average",
                    &e,
                ));
                return checks;
            }
        };
        if let Some((prev_n, prev_v)) = prev {
            checks.push(Check::exact(
                format!("e_sa_non_increasing[n_r {prev_n}->{n_r}]"),
                format!("<= {prev_v:.6}"),
                format!("{value:.6}"),
                value <= prev_v,
            ));
        }
        prev = Some((n_r, value));
    }
    checks
}

/// Average saturated energy grows (weakly) with the horizon.
pub fn verify_duration_trend(params: &ChannelParams, seed: u64) -> Vec<Check> {
    let mut cfg = trend_config(params, seed);
    cfg.p_s = 200.0;
    cfg.n_r = 10;
    let mut checks = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for t_o in DURATION_GRID_S {
        cfg.t_o = t_o;
        let value = match e_sa(&cfg, SchedulerKind::Cdc) {
            Ok(v) => v,
            Err(e) => {
                checks.push(Check::error(
                    format!("e_sa_vs_duration[t_o={t_o}]"),
                    "finite batch average",
                    &e,
                ));
                return checks;
            }
        };
        if let Some((prev_t, prev_v)) = prev {
            checks.push(Check::exact(
                format!("e_sa_non_decreasing[t_o {prev_t}->{t_o}]"),
                format!(">= {prev_v:.6}"),
                format!("{value:.6}"),
                value >= prev_v,
            ));
        }
        prev = Some((t_o, value));
    }
    checks
}

/// Average saturated energy grows (weakly) with supply power.
///
/// Placement is pinned to the strongest power's cone for every grid point,
/// matching the published experiment design. (Letting the placement cone
/// scale with each power genuinely inverts the 150 W -> 200 W step: the
/// wider scatter outweighs the extra power.)
pub fn verify_power_trend(params: &ChannelParams, seed: u64) -> Vec<Check> {
    let mut cfg = trend_config(params, seed);
    cfg.n_r = 10;
    cfg.t_o = 10_800.0;
    cfg.init_cone_power = Some(*POWER_GRID_W.last().expect("grid is non-empty"));
    let mut checks = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for p_s in POWER_GRID_W {
        cfg.p_s = p_s;
        let value = match e_sa(&cfg, SchedulerKind::Cdc) {
            Ok(v) => v,
            Err(e) => {
                checks.push(Check::error(
                    format!("e_sa_vs_power[p_s={p_s}]"),
                    "finite batch average",
                    &e,
                ));
                return checks;
            }
        };
        if let Some((prev_p, prev_v)) = prev {
            checks.push(Check::exact(
                format!("e_sa_non_decreasing[p_s {prev_p}->{p_s}]"),
                format!(">= {prev_v:.6}"),
                format!("{value:.6}"),
                value >= prev_v,
            ));
        }
        prev = Some((p_s, value));
    }
    checks
}

/// The paired scheduling gap: exactly zero with one receiver, strictly
/// positive with enough receivers to fight over the beam.
pub fn verify_paired_gap(params: &ChannelParams, seed: u64) -> Vec<Check> {
    let mut cfg = trend_config(params, seed);
    cfg.p_s = 200.0;
    cfg.t_o = 10_800.0;
    let mut checks = Vec::new();

    cfg.n_r = 1;
    match compare(&cfg) {
        Ok(cmp) => checks.push(Check::exact(
            "gap_zero[n_r=1]",
            "d_sa = 0 exactly",
            format!("d_sa = {:?}", cmp.d_sa_wh),
            cmp.d_sa_wh == 0.0,
        )),
        Err(e) => checks.push(Check::error("gap_zero[n_r=1]", "d_sa = 0 exactly", &e)),
    }

    for n_r in GAP_RECEIVER_COUNTS {
        cfg.n_r = n_r;
        match compare(&cfg) {
            Ok(cmp) => checks.push(Check::exact(
                format!("gap_positive[n_r={n_r}]"),
                "d_sa > 0",
                format!("d_sa = {:.6}", cmp.d_sa_wh),
                cmp.d_sa_wh > 0.0,
            )),
            Err(e) => checks.push(Check::error(
                format!("gap_positive[n_r={n_r}]"),
                "d_sa > 0",
                &e,
            )),
        }
    }
    checks
}

// ---------------------------------------------------------------------------
// Invariant suite
// ---------------------------------------------------------------------------

/// Energy conservation, selection invariances, rotation fairness, and
/// bit-determinism of the batch machinery.
pub fn verify_invariants(params: &ChannelParams, seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    checks.extend(verify_energy_conservation(params, seed));
    checks.push(verify_scale_invariance(seed));
    checks.push(verify_rrc_fairness(params, seed));
    checks.extend(verify_bit_determinism(params, seed));
    checks
}

fn verify_energy_conservation(params: &ChannelParams, seed: u64) -> Vec<Check> {
    let mut cfg = trend_config(params, seed);
    cfg.n_r = 8;
    cfg.t_o = 1800.0;
    let mut checks = Vec::new();
    for kind in [SchedulerKind::Cdc, SchedulerKind::Rrc] {
        let mut rng = episode_rng(seed, 0);
        let mut states = match crate::simulation::init_episode(&cfg, &mut rng) {
            Ok(s) => s,
            Err(e) => {
                checks.push(Check::error(
                    format!("energy_conservation[{kind:?}]"),
                    "episode runs",
                    &e,
                ));
                continue;
            }
        };
        let range = match cfg.charge_range() {
            Ok(r) => r,
            Err(e) => {
                checks.push(Check::error(
                    format!("energy_conservation[{kind:?}]"),
                    "episode runs",
                    &SimError::Channel(e),
                ));
                continue;
            }
        };
        let mut scheduler = SchedulerState::new(kind, &states);
        let mut violation = None;
        for slot in 0..cfg.slot_count() {
            let before: Vec<f64> = states.iter().map(|s| s.remaining_energy).collect();
            run_slot(&cfg, &range, &mut states, &mut scheduler, slot, &mut rng);
            let mut grew = 0usize;
            for (s, b) in states.iter().zip(&before) {
                if s.remaining_energy < *b {
                    violation = Some(format!("slot {slot}: receiver {} lost energy", s.id));
                }
                if s.remaining_energy > s.battery_capacity {
                    violation = Some(format!("slot {slot}: receiver {} above capacity", s.id));
                }
                if s.remaining_energy > *b {
                    grew += 1;
                }
            }
            if grew > 1 {
                violation = Some(format!("slot {slot}: {grew} receivers charged at once"));
            }
            if violation.is_some() {
                break;
            }
        }
        checks.push(Check::exact(
            format!("energy_conservation[{kind:?}]"),
            "monotone per receiver, capped, one beam per slot",
            violation
                .clone()
                .unwrap_or_else(|| "held across all slots".into()),
            violation.is_none(),
        ));
    }
    checks
}

fn verify_scale_invariance(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5ca1e);
    let cfg = SchedulerConfig::default();
    let mut mismatches = 0usize;
    for _ in 0..200 {
        let n = rng.random_range(1..8usize);
        let states: Vec<ReceiverState> = (0..n)
            .map(|id| {
                ReceiverState::new(
                    id,
                    Position::new(0.0, 0.0, rng.random_range(0.01..20.0)),
                    rng.random_range(0.0..10.35),
                    10.35,
                )
            })
            .collect();
        let scale = rng.random_range(0.1..10.0);
        let scaled: Vec<ReceiverState> = states
            .iter()
            .map(|s| {
                let mut c = s.clone();
                c.remaining_energy *= scale;
                c.battery_capacity *= scale;
                c.position.z *= scale;
                c
            })
            .collect();
        let base = cdc_select(&states, &MaxDistance::Finite(7.0), &cfg).unwrap();
        let scaled_pick = cdc_select(&scaled, &MaxDistance::Finite(7.0 * scale), &cfg).unwrap();
        if base != scaled_pick {
            mismatches += 1;
        }
    }
    Check::exact(
        "argmin_scale_invariance",
        "same pick under joint rescaling, 200 populations",
        format!("{mismatches} mismatches"),
        mismatches == 0,
    )
}

fn verify_rrc_fairness(params: &ChannelParams, seed: u64) -> Check {
    let mut cfg = trend_config(params, seed);
    cfg.n_r = 7;
    cfg.t_o = 690.0; // 70 slots
    let mut rng = episode_rng(seed, 1);
    let ep = match crate::simulation::run_episode(&cfg, SchedulerKind::Rrc, &mut rng) {
        Ok(ep) => ep,
        Err(e) => return Check::error("rrc_window_fairness", "episode runs", &e),
    };
    let picks: Vec<usize> = ep
        .slots
        .iter()
        .map(|s| s.selected.expect("round-robin always picks"))
        .collect();
    let fair = picks.windows(cfg.n_r).all(|w| {
        let distinct: BTreeSet<usize> = w.iter().copied().collect();
        distinct.len() == cfg.n_r
    });
    Check::exact(
        "rrc_window_fairness",
        "every 7-slot window selects each receiver once",
        if fair {
            "fair in all windows"
        } else {
            "repeat inside a window"
        }
        .to_string(),
        fair,
    )
}

fn verify_bit_determinism(params: &ChannelParams, seed: u64) -> Vec<Check> {
    let mut cfg = trend_config(params, seed);
    cfg.n_r = 5;
    cfg.n_runs = 16;
    cfg.t_o = 600.0;
    let mut checks = Vec::new();

    let first = monte_carlo(&cfg, SchedulerKind::Cdc);
    let second = monte_carlo(&cfg, SchedulerKind::Cdc);
    match (&first, &second) {
        (Ok(a), Ok(b)) => checks.push(Check::exact(
            "determinism_monte_carlo",
            "two batches bit-identical",
            if a == b { "identical" } else { "differ" }.to_string(),
            a == b,
        )),
        (Err(e), _) | (_, Err(e)) => {
            checks.push(Check::error("determinism_monte_carlo", "batches run", e))
        }
    }

    if let Ok(reference) = &first {
        let mut pool_ok = true;
        let mut detail = String::from("all pools identical");
        for threads in [1usize, 2, 4] {
            let pooled = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| e.to_string())
                .and_then(|pool| {
                    pool.install(|| monte_carlo(&cfg, SchedulerKind::Cdc))
                        .map_err(|e| e.to_string())
                });
            match pooled {
                Ok(r) if &r == reference => {}
                Ok(_) => {
                    pool_ok = false;
                    detail = format!("{threads}-thread pool differs");
                    break;
                }
                Err(e) => {
                    pool_ok = false;
                    detail = format!("{threads}-thread pool failed: {e}");
                    break;
                }
            }
        }
        checks.push(Check::exact(
            "determinism_thread_pools",
            "result independent of parallelism degree",
            detail,
            pool_ok,
        ));
    }

    let cmp_a = compare(&cfg);
    let cmp_b = compare(&cfg);
    match (cmp_a, cmp_b) {
        (Ok(a), Ok(b)) => {
            let same = a.d_sa_wh.to_bits() == b.d_sa_wh.to_bits() && a == b;
            checks.push(Check::exact(
                "determinism_compare",
                "paired gap bit-identical across invocations",
                if same { "identical" } else { "differs" }.to_string(),
                same,
            ));
        }
        (Err(e), _) | (_, Err(e)) => {
            checks.push(Check::error("determinism_compare", "comparisons run", &e));
        }
    }
    checks
}

// ---------------------------------------------------------------------------
// Eligibility fidelity
// ---------------------------------------------------------------------------

/// Strict mode idles a slot whose score winner is out of range;
/// work-conserving mode hands the slot to the runner-up.
pub fn verify_fidelity(params: &ChannelParams) -> Vec<Check> {
    let mut cfg = SimConfig {
        channel: params.clone(),
        v_max: 0.0,
        t_o: 0.0,
        ..SimConfig::default()
    };
    let range = match cfg.charge_range() {
        Ok(r) => r,
        Err(e) => {
            return vec![Check::error(
                "fidelity_strict_idles",
                "slot runs",
                &SimError::Channel(e),
            )]
        }
    };
    // The winner by score sits out of range; the runner-up is chargeable.
    let out_of_range = ReceiverState::new(0, Position::new(0.0, 0.0, 9.0), 0.0, cfg.e_b);
    let in_range = ReceiverState::new(1, Position::new(0.0, 0.0, 2.0), 8.0, cfg.e_b);
    let mut checks = Vec::new();

    let mut rng = episode_rng(0, 0);
    let mut states = vec![out_of_range.clone(), in_range.clone()];
    let mut scheduler = SchedulerState::new(SchedulerKind::Cdc, &states);
    let record = run_slot(&cfg, &range, &mut states, &mut scheduler, 0, &mut rng);
    let untouched = states[0].remaining_energy == 0.0 && states[1].remaining_energy == 8.0;
    checks.push(Check::exact(
        "fidelity_strict_idles",
        "no pick, no delivery",
        format!(
            "pick {:?}, delivered {} W",
            record.selected, record.delivered_power_w
        ),
        record.selected.is_none() && record.delivered_power_w == 0.0 && untouched,
    ));

    cfg.scheduler_cfg.eligibility_mode = EligibilityMode::WorkConserving;
    let mut rng = episode_rng(0, 0);
    let mut states = vec![out_of_range, in_range];
    let mut scheduler = SchedulerState::new(SchedulerKind::Cdc, &states);
    let record = run_slot(&cfg, &range, &mut states, &mut scheduler, 0, &mut rng);
    checks.push(Check::exact(
        "fidelity_work_conserving_delivers",
        "runner-up picked and charged",
        format!(
            "pick {:?}, delivered {:.4} W",
            record.selected, record.delivered_power_w
        ),
        record.selected == Some(1)
            && record.delivered_power_w > 0.0
            && states[1].remaining_energy > 8.0,
    ));
    checks
}

/// Every check in the suite, in report order.
pub fn verify_all(params: &ChannelParams, seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    checks.extend(verify_max_distance_table(params));
    checks.extend(verify_cone_table(params));
    checks.extend(verify_inversion_agreement(params, seed));
    checks.extend(verify_power_curve_shape(params));
    checks.extend(verify_receiver_count_trend(params, seed));
    checks.extend(verify_duration_trend(params, seed));
    checks.extend(verify_power_trend(params, seed));
    checks.extend(verify_paired_gap(params, seed));
    checks.extend(verify_invariants(params, seed));
    checks.extend(verify_fidelity(params));
    checks
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
