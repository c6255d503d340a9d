//! CSV trace serialization.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::Context;
use kaltrack_core::sim::RunSummary;

/// Column layout; consumers key on this exact header line.
pub const CSV_HEADER: &str =
    "step,true_x,true_y,meas_x,meas_y,est_x,est_y,est_vx,est_vy,p00,p11,p22,p33,nees,nll";

/// Renders a float with 9 significant digits, enough to round-trip within
/// 1e-8 relative while keeping rows diffable by eye.
fn field(value: f64) -> String {
    format!("{value:.8e}")
}

/// One row per step record, LF line endings, header always present.
pub fn trace_csv_string(summary: &RunSummary) -> String {
    let mut out = String::with_capacity(64 + summary.records.len() * 220);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &summary.records {
        let cols = [
            r.true_state[0],
            r.true_state[1],
            r.measurement[0],
            r.measurement[1],
            r.posterior_mean[0],
            r.posterior_mean[1],
            r.posterior_mean[2],
            r.posterior_mean[3],
            r.posterior_cov_diag[0],
            r.posterior_cov_diag[1],
            r.posterior_cov_diag[2],
            r.posterior_cov_diag[3],
            r.nees,
            r.neg_log_likelihood,
        ];
        let _ = write!(out, "{}", r.step);
        for c in cols {
            out.push(',');
            out.push_str(&field(c));
        }
        out.push('\n');
    }
    out
}

pub fn emit_trace_csv(summary: &RunSummary, path: &Path) -> anyhow::Result<()> {
    std::fs::write(path, trace_csv_string(summary))
        .with_context(|| format!("writing trace CSV to {}", path.display()))
}
