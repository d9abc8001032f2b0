//! The five subcommands: CSV assembly and the verification report.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rbc_core::channel::ChannelParams;
use rbc_core::simulation::{compare, monte_carlo};
use rbc_core::verification::{verify_all, Check};
use rbc_core::{CoverageCone, MaxDistance, SchedulerKind};

use crate::config::{render_manifest, Resolved};
use crate::format::fmt_sig;

// ---------------------------------------------------------------------------
// output plumbing
// ---------------------------------------------------------------------------

/// Prints the CSV, or writes it to `out` with its manifest alongside
/// (`foo.csv` gets `foo.manifest`).
fn deliver(csv: &str, out: Option<&Path>, manifest: Option<&str>) -> Result<()> {
    match out {
        None => print!("{csv}"),
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
            if let Some(body) = manifest {
                let manifest_path = manifest_path_for(path);
                fs::write(&manifest_path, body)
                    .with_context(|| format!("writing {}", manifest_path.display()))?;
            }
        }
    }
    Ok(())
}

fn manifest_path_for(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("manifest")
}

fn scheduler_name(kind: SchedulerKind) -> &'static str {
    match kind {
        SchedulerKind::Cdc => "cdc",
        SchedulerKind::Rrc => "rrc",
    }
}

// ---------------------------------------------------------------------------
// channel: power-over-distance sweep
// ---------------------------------------------------------------------------

/// Parses a distance grid spec: `start..end`, or a single value.
fn parse_range(spec: &str) -> Result<(f64, f64)> {
    let parse_one = |s: &str| -> Result<f64> {
        s.trim()
            .parse()
            .map_err(|_| anyhow::anyhow!("invalid distance `{s}` in `{spec}`"))
    };
    let (start, end) = match spec.split_once("..") {
        Some((a, b)) => (parse_one(a)?, parse_one(b)?),
        None => {
            let single = parse_one(spec)?;
            (single, single)
        }
    };
    if !start.is_finite() || !end.is_finite() {
        bail!("distance grid `{spec}` is not finite");
    }
    if start < 0.0 {
        bail!("distance grid `{spec}` starts below zero");
    }
    if end < start {
        bail!("distance grid `{spec}` ends before it starts");
    }
    Ok((start, end))
}

pub fn channel(
    params: &ChannelParams,
    powers: &[f64],
    d_spec: &str,
    step: f64,
    out: Option<&Path>,
    resolved: &Resolved,
    args_echo: &str,
) -> Result<()> {
    if !step.is_finite() || step <= 0.0 {
        bail!("--step must be a positive number, got {step}");
    }
    let (start, end) = parse_range(d_spec)?;

    let mut csv = String::from("p_s_w,d_m,p_e_w\n");
    for &p_s in powers {
        let mut index = 0usize;
        loop {
            // Compute each grid point from the index so long sweeps do not
            // accumulate rounding drift, with a hair of slack at the end.
            let d = start + index as f64 * step;
            if d > end + step * 1e-9 {
                break;
            }
            let p_e = params.output_electric_power(p_s, d)?;
            let _ = writeln!(csv, "{},{},{}", fmt_sig(p_s), fmt_sig(d), fmt_sig(p_e));
            index += 1;
        }
    }

    let manifest = out.map(|path| render_manifest(resolved, "channel", Some(args_echo), path));
    deliver(&csv, out, manifest.as_deref())
}

// ---------------------------------------------------------------------------
// coverage: distance and cone table
// ---------------------------------------------------------------------------

pub fn coverage(
    params: &ChannelParams,
    powers: &[f64],
    fov_deg: f64,
    out: Option<&Path>,
    resolved: &Resolved,
    args_echo: &str,
) -> Result<()> {
    let mut csv = String::from("p_s_w,d_max_m,h_m,r_m\n");
    for &p_s in powers {
        match params.max_transmission_distance(p_s)? {
            MaxDistance::Finite(d_max) => {
                let cone = CoverageCone::from_distance(d_max, fov_deg)?;
                let _ = writeln!(
                    csv,
                    "{},{},{},{}",
                    fmt_sig(p_s),
                    fmt_sig(d_max),
                    fmt_sig(cone.h),
                    fmt_sig(cone.r)
                );
            }
            MaxDistance::NoCoverage => {
                let _ = writeln!(csv, "{},no_coverage,,", fmt_sig(p_s));
            }
            MaxDistance::Unbounded => {
                let _ = writeln!(csv, "{},unbounded,,", fmt_sig(p_s));
            }
        }
    }

    let manifest = out.map(|path| render_manifest(resolved, "coverage", Some(args_echo), path));
    deliver(&csv, out, manifest.as_deref())
}

// ---------------------------------------------------------------------------
// simulate and compare: Monte Carlo sweeps
// ---------------------------------------------------------------------------

pub fn simulate(resolved: &Resolved, out: Option<&Path>) -> Result<()> {
    let kind = resolved.sim.scheduler;
    let mut csv = String::from("sweep_value,scheduler,e_sa_wh,e_sa_sd_wh,n_runs\n");
    for (label, cfg) in resolved.sweep_configs()? {
        let batch = monte_carlo(&cfg, kind)?;
        let _ = writeln!(
            csv,
            "{label},{},{},{},{}",
            scheduler_name(kind),
            fmt_sig(batch.e_sa_wh),
            fmt_sig(batch.e_sa_sd_wh()),
            cfg.n_runs
        );
    }

    let manifest = out.map(|path| render_manifest(resolved, "simulate", None, path));
    deliver(&csv, out, manifest.as_deref())
}

pub fn compare_schedulers(resolved: &Resolved, out: Option<&Path>) -> Result<()> {
    let mut csv = String::from("sweep_value,e_sa_cdc_wh,e_sa_rrc_wh,d_sa_wh\n");
    for (label, cfg) in resolved.sweep_configs()? {
        let paired = compare(&cfg)?;
        let _ = writeln!(
            csv,
            "{label},{},{},{}",
            fmt_sig(paired.cdc.e_sa_wh),
            fmt_sig(paired.rrc.e_sa_wh),
            fmt_sig(paired.d_sa_wh)
        );
    }

    let manifest = out.map(|path| render_manifest(resolved, "compare", None, path));
    deliver(&csv, out, manifest.as_deref())
}

// ---------------------------------------------------------------------------
// verify: expected/actual report
// ---------------------------------------------------------------------------

/// Runs the whole verification suite and prints one row per check.
/// Returns the process exit code: 0 all green, 2 otherwise.
pub fn verify(params: &ChannelParams, seed: u64) -> Result<i32> {
    let checks = verify_all(params, seed);
    print!("{}", render_report(&checks));
    let failed = checks.iter().filter(|c| !c.passed).count();
    Ok(if failed == 0 { 0 } else { 2 })
}

fn render_report(checks: &[Check]) -> String {
    let width = |header: &str, pick: fn(&Check) -> &str| {
        checks
            .iter()
            .map(|c| pick(c).len())
            .chain([header.len()])
            .max()
            .unwrap_or(0)
    };
    let name_w = width("check", |c| &c.name);
    let expected_w = width("expected", |c| &c.expected);
    let actual_w = width("actual", |c| &c.actual);
    let tolerance_w = width("tolerance", |c| &c.tolerance);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<name_w$}  {:<expected_w$}  {:<actual_w$}  {:<tolerance_w$}  status",
        "check", "expected", "actual", "tolerance"
    );
    for check in checks {
        let _ = writeln!(
            out,
            "{:<name_w$}  {:<expected_w$}  {:<actual_w$}  {:<tolerance_w$}  {}",
            check.name,
            check.expected,
            check.actual,
            check.tolerance,
            if check.passed { "pass" } else { "FAIL" }
        );
    }
    let passed = checks.len() - checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(out, "{passed}/{} checks passed", checks.len());
    out
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
