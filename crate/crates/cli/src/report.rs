//! Plain-text bench report.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::Context;
use kaltrack_core::sim::{MeanSe, MonteCarloAggregate};

fn row(out: &mut String, label: &str, stat: MeanSe) {
    let _ = writeln!(out, "{label:<20} {:>12.6} ± {:.6}", stat.mean, stat.se);
}

/// Byte-stable table; single-run aggregates render their SE fields as 0.
pub fn bench_report_string(aggregate: &MonteCarloAggregate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "monte carlo bench ({} runs)", aggregate.n_runs);
    row(&mut out, "rmse_measurement", aggregate.rmse_measurement);
    row(&mut out, "rmse_filtered", aggregate.rmse_filtered);
    row(&mut out, "mean_nees", aggregate.mean_nees);
    row(&mut out, "rmse_gap", aggregate.rmse_gap);
    let _ = writeln!(
        out,
        "{:<20} {:>12.6}",
        "improvement ratio",
        aggregate.rmse_filtered.mean / aggregate.rmse_measurement.mean
    );
    let _ = writeln!(
        out,
        "{:<20} {:>9}/{}",
        "filtered wins", aggregate.filtered_wins, aggregate.n_runs
    );
    out
}

pub fn emit_bench_report(aggregate: &MonteCarloAggregate, path: &Path) -> anyhow::Result<()> {
    std::fs::write(path, bench_report_string(aggregate))
        .with_context(|| format!("writing bench report to {}", path.display()))
}
