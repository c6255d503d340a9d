//! Command-line front-end for the tracking simulator: scenario
//! configuration, deterministic runs, CSV traces, SVG plots, and Monte
//! Carlo benchmarks.

pub mod args;
pub mod plot;
pub mod report;
pub mod trace;

use std::path::Path;

use args::{Cli, Command, Mode, ScenarioArgs};
use kaltrack_core::sim::{run_monte_carlo, run_scenario, MeasurementMode, RunSummary, Scenario};

fn build_scenario(args: &ScenarioArgs) -> anyhow::Result<Scenario> {
    let mut scenario =
        Scenario::mobile_tracking_with(args.dt, args.n_iter, args.sigma, args.seed)?;
    scenario.measurement_mode = match args.mode {
        Mode::Direct => MeasurementMode::DirectPosition,
        Mode::Toa => MeasurementMode::ToaTrilateration,
    };
    scenario.noise.paper_faithful = args.paper_faithful;
    scenario.center_on_estimate = args.center_on_estimate;
    scenario.validate()?;
    Ok(scenario)
}

/// The reference scenario: default constants with measurements centered on
/// the running estimate and one-sided noise.
pub fn paper_repro_scenario(seed: u64) -> Scenario {
    let mut scenario = Scenario::mobile_tracking(seed);
    scenario.noise.paper_faithful = true;
    scenario.center_on_estimate = true;
    scenario
}

fn print_summary(summary: &RunSummary) {
    println!(
        "steps {}  rmse_measurement {:.6}  rmse_filtered {:.6}  mean_nees {:.6}",
        summary.records.len(),
        summary.rmse_measurement,
        summary.rmse_filtered,
        summary.mean_nees
    );
}

fn emit_run_artifacts(
    summary: &RunSummary,
    trace: Option<&Path>,
    plot: Option<&Path>,
) -> anyhow::Result<()> {
    if let Some(path) = trace {
        trace::emit_trace_csv(summary, path)?;
    }
    if let Some(path) = plot {
        plot::emit_plot_svg(summary, path)?;
    }
    Ok(())
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Simulate {
            scenario,
            trace,
            plot,
        } => {
            let summary = run_scenario(&build_scenario(&scenario)?)?;
            emit_run_artifacts(&summary, trace.as_deref(), plot.as_deref())?;
            print_summary(&summary);
        }
        Command::Bench {
            runs,
            scenario,
            report,
        } => {
            let aggregate = run_monte_carlo(&build_scenario(&scenario)?, runs)?;
            match report {
                Some(path) => report::emit_bench_report(&aggregate, &path)?,
                None => print!("{}", report::bench_report_string(&aggregate)),
            }
        }
        Command::PaperRepro { seed, trace, plot } => {
            let summary = run_scenario(&paper_repro_scenario(seed))?;
            emit_run_artifacts(&summary, trace.as_deref(), plot.as_deref())?;
            print_summary(&summary);
        }
    }
    Ok(())
}
