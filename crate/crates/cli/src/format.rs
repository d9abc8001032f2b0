//! Number formatting for CSV output.

/// Renders a value with six significant digits in plain decimal notation.
///
/// CSV consumers get a stable, diff-friendly representation; full `f64`
/// precision is kept internally and in run manifests. Zero collapses to
/// `0` so exact zeros (an idle scheduler gap, power past the coverage
/// boundary) are recognizable at a glance.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (5 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
