//! Flat key-value run configuration and the manifest written next to CSVs.
//!
//! The config format is plain text, one `key = value` pair per line, `#`
//! starting a comment, with dotted keys naming sections:
//!
//! ```text
//! # ten receivers charged for three hours
//! sim.p_s        = 200
//! sim.n_r        = 10
//! sim.t_o        = 3h
//! sched.c_e      = 0.5
//! sweep.variable = n_r
//! sweep.values   = 1,5,10,20,50
//! ```
//!
//! Resolution order, later assignments winning: built-in defaults, the
//! `--config` file top to bottom, repeatable `--set key=value` flags, then
//! the dedicated flags (`--seed`, `--n-runs`, `--mode`, `--eligibility`,
//! `--scheduler`, `--sweep`, `--values`). Unknown keys are rejected by
//! name. `meta.*` keys are accepted and ignored, so every run manifest is
//! itself a valid config file: feeding a manifest back through `--config`
//! regenerates its CSV byte for byte.
//!
//! Durations (`sim.t_c`, `sim.t_o`, and `t_o` sweep values) take an
//! optional `h`, `m`, or `s` suffix; bare numbers are seconds.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context, Result};
use rbc_core::{EligibilityMode, PositionMode, SchedulerKind, SimConfig};

use crate::format::fmt_sig;

// ---------------------------------------------------------------------------
// sweep specification
// ---------------------------------------------------------------------------

/// Variable swept by the `simulate` and `compare` commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepVar {
    #[default]
    ReceiverCount,
    Horizon,
    SupplyPower,
}

impl SweepVar {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "n_r" => Ok(Self::ReceiverCount),
            "t_o" => Ok(Self::Horizon),
            "p_s" => Ok(Self::SupplyPower),
            other => bail!("unknown sweep variable `{other}` (expected n_r, t_o, or p_s)"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::ReceiverCount => "n_r",
            Self::Horizon => "t_o",
            Self::SupplyPower => "p_s",
        }
    }
}

// ---------------------------------------------------------------------------
// resolved configuration
// ---------------------------------------------------------------------------

/// A fully resolved run: scenario plus the sweep riding on top of it.
#[derive(Debug, Clone, Default)]
pub struct Resolved {
    pub sim: SimConfig,
    pub sweep: SweepVar,
    /// Raw comma-separated sweep values; `None` sweeps the single value the
    /// scenario already carries.
    pub values: Option<String>,
}

impl Resolved {
    /// The sweep values as given, or the scenario's own value when the run
    /// never asked for a grid.
    pub fn value_list(&self) -> Vec<String> {
        match &self.values {
            Some(raw) => raw.split(',').map(|s| s.trim().to_string()).collect(),
            None => vec![match self.sweep {
                SweepVar::ReceiverCount => self.sim.n_r.to_string(),
                SweepVar::Horizon => format!("{:?}", self.sim.t_o),
                SweepVar::SupplyPower => format!("{:?}", self.sim.p_s),
            }],
        }
    }

    /// One scenario per sweep value, paired with the CSV label of the point.
    pub fn sweep_configs(&self) -> Result<Vec<(String, SimConfig)>> {
        self.value_list()
            .iter()
            .map(|raw| {
                let mut cfg = self.sim.clone();
                let label = match self.sweep {
                    SweepVar::ReceiverCount => {
                        let n: usize = raw
                            .parse()
                            .map_err(|_| anyhow!("invalid n_r sweep value `{raw}`"))?;
                        cfg.n_r = n;
                        n.to_string()
                    }
                    SweepVar::Horizon => {
                        let secs = parse_duration_s(raw)
                            .with_context(|| format!("invalid t_o sweep value `{raw}`"))?;
                        cfg.t_o = secs;
                        fmt_sig(secs)
                    }
                    SweepVar::SupplyPower => {
                        let watts: f64 = raw
                            .parse()
                            .map_err(|_| anyhow!("invalid p_s sweep value `{raw}`"))?;
                        cfg.p_s = watts;
                        fmt_sig(watts)
                    }
                };
                Ok((label, cfg))
            })
            .collect()
    }
}

/// Values of the dedicated override flags, applied after `--set` pairs.
#[derive(Debug, Clone, Copy, Default)]
pub struct FlagOverrides {
    pub seed: Option<u64>,
    pub n_runs: Option<usize>,
    pub mode: Option<PositionMode>,
    pub eligibility: Option<EligibilityMode>,
    pub scheduler: Option<SchedulerKind>,
}

/// Builds the final configuration from a base, an optional file, `--set`
/// pairs, and the dedicated flags, in that order.
pub fn resolve(
    base: Resolved,
    config: Option<&Path>,
    sets: &[String],
    flags: &FlagOverrides,
) -> Result<Resolved> {
    let mut resolved = base;
    if let Some(path) = config {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        apply_text(&mut resolved, &text)
            .with_context(|| format!("in config {}", path.display()))?;
    }
    for pair in sets {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| anyhow!("--set expects KEY=VALUE, got `{pair}`"))?;
        apply_assignment(&mut resolved, key.trim(), value.trim())?;
    }
    if let Some(seed) = flags.seed {
        resolved.sim.seed = seed;
    }
    if let Some(n_runs) = flags.n_runs {
        resolved.sim.n_runs = n_runs;
    }
    if let Some(mode) = flags.mode {
        resolved.sim.position_mode = mode;
    }
    if let Some(eligibility) = flags.eligibility {
        resolved.sim.scheduler_cfg.eligibility_mode = eligibility;
    }
    if let Some(scheduler) = flags.scheduler {
        resolved.sim.scheduler = scheduler;
    }
    Ok(resolved)
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

/// Applies a whole config file's worth of assignments.
pub fn apply_text(resolved: &mut Resolved, text: &str) -> Result<()> {
    for (index, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected `key = value`, got `{raw}`", index + 1))?;
        apply_assignment(resolved, key.trim(), value.trim())
            .with_context(|| format!("line {}", index + 1))?;
    }
    Ok(())
}

/// Applies one `key = value` assignment, rejecting unknown keys by name.
pub fn apply_assignment(resolved: &mut Resolved, key: &str, value: &str) -> Result<()> {
    // Manifests carry provenance under meta.*; accept and ignore it so a
    // manifest can be fed straight back through --config.
    if key.starts_with("meta.") {
        return Ok(());
    }
    let sim = &mut resolved.sim;
    match key {
        "channel.eta_g" => sim.channel.eta_g = parse_f64(key, value)?,
        "channel.f" => sim.channel.f = parse_f64(key, value)?,
        "channel.m" => sim.channel.m = parse_f64(key, value)?,
        "channel.a" => sim.channel.a = parse_f64(key, value)?,
        "channel.lambda" => sim.channel.lambda = parse_f64(key, value)?,
        "channel.l" => sim.channel.l = parse_f64(key, value)?,
        "channel.beta" => sim.channel.beta = parse_f64(key, value)?,
        "channel.gamma" => sim.channel.gamma = parse_f64(key, value)?,
        "channel.big_c" => sim.channel.big_c = parse_f64(key, value)?,
        "sim.p_s" => sim.p_s = parse_f64(key, value)?,
        "sim.n_r" => sim.n_r = parse_usize(key, value)?,
        "sim.t_c" => sim.t_c = parse_duration_key(key, value)?,
        "sim.t_o" => sim.t_o = parse_duration_key(key, value)?,
        "sim.e_b" => sim.e_b = parse_f64(key, value)?,
        "sim.v_max" => sim.v_max = parse_f64(key, value)?,
        "sim.fov_deg" => sim.fov_deg = parse_f64(key, value)?,
        "sim.init_cone_power" => {
            sim.init_cone_power = if value.eq_ignore_ascii_case("none") {
                None
            } else {
                Some(parse_f64(key, value)?)
            }
        }
        "sim.seed" => {
            sim.seed = value
                .parse()
                .map_err(|_| anyhow!("invalid value for {key}: `{value}`"))?
        }
        "sim.n_runs" => sim.n_runs = parse_usize(key, value)?,
        "sim.position_mode" => {
            sim.position_mode = match value {
                "faithful" => PositionMode::Faithful,
                "geometric" => PositionMode::Geometric,
                other => {
                    bail!("invalid value for {key}: `{other}` (expected faithful or geometric)")
                }
            }
        }
        "sim.scheduler" => {
            sim.scheduler = match value {
                "cdc" => SchedulerKind::Cdc,
                "rrc" => SchedulerKind::Rrc,
                other => bail!("invalid value for {key}: `{other}` (expected cdc or rrc)"),
            }
        }
        "sched.c_e" => sim.scheduler_cfg.c_e = parse_f64(key, value)?,
        "sched.c_d" => sim.scheduler_cfg.c_d = parse_f64(key, value)?,
        "sched.eligibility" => {
            sim.scheduler_cfg.eligibility_mode = match value {
                "strict" => EligibilityMode::Strict,
                "work-conserving" => EligibilityMode::WorkConserving,
                other => {
                    bail!("invalid value for {key}: `{other}` (expected strict or work-conserving)")
                }
            }
        }
        "sched.normalize" => {
            sim.scheduler_cfg.normalize = match value {
                "true" => true,
                "false" => false,
                other => bail!("invalid value for {key}: `{other}` (expected true or false)"),
            }
        }
        "sweep.variable" => resolved.sweep = SweepVar::parse(value)?,
        "sweep.values" => resolved.values = Some(value.to_string()),
        other => bail!("unknown config key `{other}`"),
    }
    Ok(())
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .parse()
        .map_err(|_| anyhow!("invalid value for {key}: `{value}`"))
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| anyhow!("invalid value for {key}: `{value}`"))
}

fn parse_duration_key(key: &str, value: &str) -> Result<f64> {
    parse_duration_s(value).with_context(|| format!("invalid value for {key}: `{value}`"))
}

/// Parses a duration in seconds; `h`, `m`, and `s` suffixes are accepted
/// (`1h`, `90m`, `30s`, `1.5h`), a bare number is seconds.
pub fn parse_duration_s(text: &str) -> Result<f64> {
    let trimmed = text.trim();
    let (body, factor) = if let Some(hours) = trimmed.strip_suffix('h') {
        (hours, 3600.0)
    } else if let Some(minutes) = trimmed.strip_suffix('m') {
        (minutes, 60.0)
    } else if let Some(seconds) = trimmed.strip_suffix('s') {
        (seconds, 1.0)
    } else {
        (trimmed, 1.0)
    };
    let value: f64 = body
        .trim()
        .parse()
        .map_err(|_| anyhow!("`{text}` is not a duration (use seconds or an h/m/s suffix)"))?;
    Ok(value * factor)
}

// ---------------------------------------------------------------------------
// manifests
// ---------------------------------------------------------------------------

/// Renders the manifest written next to a CSV: provenance under `meta.*`
/// followed by the full resolved configuration, floats in round-trip form.
///
/// For `simulate` and `compare`, `rbc <command> --config <manifest>`
/// regenerates the CSV exactly. The analytic commands additionally record
/// their sweep flags in `meta.args`; re-run them with those flags plus
/// `--config <manifest>`.
pub fn render_manifest(
    resolved: &Resolved,
    command: &str,
    args_echo: Option<&str>,
    csv_path: &Path,
) -> String {
    let unix_s = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let channel = &resolved.sim.channel;
    let sim = &resolved.sim;
    let sched = &sim.scheduler_cfg;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "# rbc run manifest; feed back through --config to regenerate the CSV"
    );
    let _ = writeln!(out, "meta.tool = rbc {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "meta.command = {command}");
    if let Some(args) = args_echo {
        let _ = writeln!(out, "meta.args = {args}");
    }
    let _ = writeln!(out, "meta.generated_unix_s = {unix_s}");
    let _ = writeln!(out, "meta.csv = {}", csv_path.display());
    let _ = writeln!(out, "channel.eta_g = {:?}", channel.eta_g);
    let _ = writeln!(out, "channel.f = {:?}", channel.f);
    let _ = writeln!(out, "channel.m = {:?}", channel.m);
    let _ = writeln!(out, "channel.a = {:?}", channel.a);
    let _ = writeln!(out, "channel.lambda = {:?}", channel.lambda);
    let _ = writeln!(out, "channel.l = {:?}", channel.l);
    let _ = writeln!(out, "channel.beta = {:?}", channel.beta);
    let _ = writeln!(out, "channel.gamma = {:?}", channel.gamma);
    let _ = writeln!(out, "channel.big_c = {:?}", channel.big_c);
    let _ = writeln!(out, "sim.p_s = {:?}", sim.p_s);
    let _ = writeln!(out, "sim.n_r = {}", sim.n_r);
    let _ = writeln!(out, "sim.t_c = {:?}", sim.t_c);
    let _ = writeln!(out, "sim.t_o = {:?}", sim.t_o);
    let _ = writeln!(out, "sim.e_b = {:?}", sim.e_b);
    let _ = writeln!(out, "sim.v_max = {:?}", sim.v_max);
    let _ = writeln!(out, "sim.fov_deg = {:?}", sim.fov_deg);
    match sim.init_cone_power {
        Some(power) => {
            let _ = writeln!(out, "sim.init_cone_power = {power:?}");
        }
        None => {
            let _ = writeln!(out, "sim.init_cone_power = none");
        }
    }
    let _ = writeln!(out, "sim.seed = {}", sim.seed);
    let _ = writeln!(out, "sim.n_runs = {}", sim.n_runs);
    let _ = writeln!(
        out,
        "sim.position_mode = {}",
        match sim.position_mode {
            PositionMode::Faithful => "faithful",
            PositionMode::Geometric => "geometric",
        }
    );
    let _ = writeln!(
        out,
        "sim.scheduler = {}",
        match sim.scheduler {
            SchedulerKind::Cdc => "cdc",
            SchedulerKind::Rrc => "rrc",
        }
    );
    let _ = writeln!(out, "sched.c_e = {:?}", sched.c_e);
    let _ = writeln!(out, "sched.c_d = {:?}", sched.c_d);
    let _ = writeln!(
        out,
        "sched.eligibility = {}",
        match sched.eligibility_mode {
            EligibilityMode::Strict => "strict",
            EligibilityMode::WorkConserving => "work-conserving",
        }
    );
    let _ = writeln!(out, "sched.normalize = {}", sched.normalize);
    let _ = writeln!(out, "sweep.variable = {}", resolved.sweep.name());
    let _ = writeln!(out, "sweep.values = {}", resolved.value_list().join(","));
    out
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
