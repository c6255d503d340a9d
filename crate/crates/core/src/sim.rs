//! Tracking simulation: ground-truth generation, noisy measurements,
//! filter loop, and accuracy/consistency metrics.
//!
//! Determinism contract: a run owns one [`SeededRng`] seeded from the
//! scenario. Draw order is fixed — first the truth trajectory (one
//! 4-deviate Gaussian draw for the initial state when its covariance is
//! nonzero, then one per step when `process_sigma > 0`), then per step the
//! measurement noise (two deviates in direct mode, one per anchor in ToA
//! mode). The filter itself consumes no randomness, so identical scenarios
//! replay bit-for-bit.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gaussian::{sample_gaussian, GaussianParams};
use crate::kf::{self, ControlInput, GaussianState, StateSpaceModel};
use crate::localize::{self, Anchor};
use crate::mat::Matrix;
use crate::math;
use crate::rng::SeededRng;

/// Planar tracking state: x, y, vx, vy.
pub type StateVec = [f64; 4];

/// Planar measurement: x, y.
pub type MeasVec = [f64; 2];

/// Where measurements come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurementMode {
    /// Noisy position readings `H·x + v`.
    DirectPosition,
    /// Noisy per-anchor ranges converted to a position fix by
    /// trilateration.
    ToaTrilateration,
}

/// Noise generation knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig {
    /// Measurement noise standard deviation (meters, per axis or per
    /// range).
    pub meas_sigma: f64,
    /// Process disturbance standard deviation applied to each state
    /// component of the truth; zero disables the disturbance entirely.
    pub process_sigma: f64,
    /// When true, direct-mode measurement noise is folded to `|N(0, σ)|`,
    /// a one-sided draw with positive mean. ToA range noise is unaffected.
    pub paper_faithful: bool,
}

/// Everything needed to rerun an experiment deterministically.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub dt: f64,
    pub n_iter: usize,
    pub initial_state: GaussianState,
    pub model: StateSpaceModel,
    pub anchors: Vec<Anchor>,
    pub measurement_mode: MeasurementMode,
    pub noise: NoiseConfig,
    /// Center each measurement on the previous posterior mean instead of
    /// the truth, reproducing a feedback loop in which the filter chases
    /// its own estimate.
    pub center_on_estimate: bool,
    pub seed: u64,
}

/// One row of a run trace.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub true_state: StateVec,
    pub measurement: MeasVec,
    pub predicted_mean: StateVec,
    pub posterior_mean: StateVec,
    pub posterior_cov_diag: StateVec,
    /// Full posterior covariance, kept so consistency checks can audit
    /// positive semidefiniteness after the fact.
    pub posterior_cov: Matrix,
    pub nees: f64,
    pub neg_log_likelihood: f64,
}

/// Metrics and trace of one deterministic run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    /// RMS over steps of the measurement-to-true-position distance.
    pub rmse_measurement: f64,
    /// RMS over steps of the posterior-to-true-position distance.
    pub rmse_filtered: f64,
    pub mean_nees: f64,
    pub records: Vec<StepRecord>,
}

/// A mean with its standard error (0 when only one sample exists).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSe {
    pub mean: f64,
    pub se: f64,
}

/// Cross-run aggregate of [`run_monte_carlo`].
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloAggregate {
    pub n_runs: usize,
    pub rmse_measurement: MeanSe,
    pub rmse_filtered: MeanSe,
    pub mean_nees: MeanSe,
    /// Per-run `rmse_measurement - rmse_filtered`; positive when the
    /// filter beats the raw measurements.
    pub rmse_gap: MeanSe,
    /// Number of runs in which the filter beat the raw measurements.
    pub filtered_wins: usize,
}

/// Constant-velocity transition matrix for time step `dt`.
pub fn cv_transition(dt: f64) -> Matrix {
    Matrix::from_rows([
        [1.0, 0.0, dt, 0.0],
        [0.0, 1.0, 0.0, dt],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
    .expect("finite dt yields a finite transition")
}

/// Position-only measurement matrix (2×4).
pub fn position_measurement_matrix() -> Matrix {
    Matrix::from_rows([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]]).expect("constant matrix")
}

/// Right-angle anchor triangle bracketing the default trajectory.
pub fn default_anchors() -> Vec<Anchor> {
    alloc::vec![
        Anchor::new("a", 0.0, 0.0),
        Anchor::new("b", 20.0, 0.0),
        Anchor::new("c", 0.0, 20.0),
    ]
}

impl Scenario {
    /// The reference mobile-tracking scenario: dt = 0.1 s, 50 iterations,
    /// initial state (0, 0, 0.1, 0.1) with covariance 0.01·I, B = I₄,
    /// Q = I₄, position measurements with R = I₂, measurement noise
    /// σ = 0.1 m, unbiased and centered on the truth.
    pub fn mobile_tracking(seed: u64) -> Self {
        Self::mobile_tracking_with(0.1, 50, 0.1, seed)
            .expect("reference constants form a valid scenario")
    }

    /// The reference scenario with dt, iteration count, and measurement
    /// sigma overridden. The filter model keeps the reference Q = I₄ and
    /// R = I₂ regardless of `sigma`, which only scales the generated
    /// noise.
    pub fn mobile_tracking_with(dt: f64, n_iter: usize, sigma: f64, seed: u64) -> Result<Self> {
        let model = StateSpaceModel::new(
            cv_transition(dt),
            Matrix::identity(4),
            position_measurement_matrix(),
            Matrix::identity(4),
            Matrix::identity(2),
        )?;
        let initial_state = GaussianState::new(
            Matrix::column(&[0.0, 0.0, 0.1, 0.1])?,
            Matrix::diag(&[0.01, 0.01, 0.01, 0.01])?,
        )?;
        let scenario = Self {
            dt,
            n_iter,
            initial_state,
            model,
            anchors: default_anchors(),
            measurement_mode: MeasurementMode::DirectPosition,
            noise: NoiseConfig { meas_sigma: sigma, process_sigma: 0.0, paper_faithful: false },
            center_on_estimate: false,
            seed,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// A self-consistent scenario for consistency (NEES) calibration: the
    /// truth is generated with exactly the process and measurement noise
    /// the filter assumes (Q = 0.01·I₄, R = 0.01·I₂, σ = 0.1), so NEES
    /// should average near the state dimension.
    pub fn calibration(seed: u64) -> Self {
        let dt = 0.1;
        let sigma = 0.1;
        let process_sigma = 0.1;
        let model = StateSpaceModel::new(
            cv_transition(dt),
            Matrix::identity(4),
            position_measurement_matrix(),
            Matrix::diag(&[process_sigma * process_sigma; 4]).expect("finite"),
            Matrix::diag(&[sigma * sigma; 2]).expect("finite"),
        )
        .expect("calibration model is valid");
        let initial_state = GaussianState::new(
            Matrix::column(&[0.0, 0.0, 0.0, 0.0]).expect("finite"),
            Matrix::diag(&[0.01, 0.01, 0.01, 0.01]).expect("finite"),
        )
        .expect("calibration state is valid");
        Self {
            dt,
            n_iter: 50,
            initial_state,
            model,
            anchors: default_anchors(),
            measurement_mode: MeasurementMode::DirectPosition,
            noise: NoiseConfig { meas_sigma: sigma, process_sigma, paper_faithful: false },
            center_on_estimate: false,
            seed,
        }
    }

    /// Checks the scenario invariants.
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidScenario { reason: "dt must be positive and finite" });
        }
        if self.n_iter == 0 {
            return Err(Error::InvalidScenario { reason: "n_iter must be at least 1" });
        }
        if !(self.noise.meas_sigma.is_finite() && self.noise.meas_sigma >= 0.0) {
            return Err(Error::InvalidScenario { reason: "meas_sigma must be nonnegative" });
        }
        if !(self.noise.process_sigma.is_finite() && self.noise.process_sigma >= 0.0) {
            return Err(Error::InvalidScenario { reason: "process_sigma must be nonnegative" });
        }
        if self.model.state_dim() != 4 {
            return Err(Error::InvalidScenario { reason: "model must have a 4-dimensional state" });
        }
        if self.model.measurement_dim() != 2 {
            return Err(Error::InvalidScenario { reason: "model must measure 2 components" });
        }
        if self.initial_state.dim() != 4 {
            return Err(Error::InvalidScenario { reason: "initial state must be 4-dimensional" });
        }
        if self.measurement_mode == MeasurementMode::ToaTrilateration && self.anchors.len() < 3 {
            return Err(Error::InvalidScenario { reason: "ToA mode requires at least 3 anchors" });
        }
        Ok(())
    }
}

fn to_state_vec(m: &Matrix) -> StateVec {
    [m.get(0, 0), m.get(1, 0), m.get(2, 0), m.get(3, 0)]
}

/// Generates the ground-truth trajectory: step 0 is a draw from the
/// initial state (or its mean when its covariance is all zeros), then
/// `x_k = A·x_{k-1} + w` with `w ~ N(0, process_sigma²·I)`.
pub fn generate_truth(scenario: &Scenario, rng: &mut SeededRng) -> Result<Vec<StateVec>> {
    scenario.validate()?;
    let mut out = Vec::with_capacity(scenario.n_iter);
    let cov = scenario.initial_state.cov();
    let x0 = if cov.data().iter().all(|&v| v == 0.0) {
        scenario.initial_state.mean().clone()
    } else {
        let params =
            GaussianParams::new(scenario.initial_state.mean().clone(), cov.clone())?;
        sample_gaussian(rng, &params)
    };
    out.push(to_state_vec(&x0));

    let sigma = scenario.noise.process_sigma;
    let process = if sigma > 0.0 {
        Some(GaussianParams::new(
            Matrix::zeros(4, 1),
            Matrix::diag(&[sigma * sigma; 4])?,
        )?)
    } else {
        None
    };
    for _ in 1..scenario.n_iter {
        let prev = Matrix::column(out.last().expect("nonempty"))?;
        let mut next = scenario.model.a().matmul(&prev)?;
        if let Some(params) = &process {
            next = next.add(&sample_gaussian(rng, params))?;
        }
        out.push(to_state_vec(&next));
    }
    Ok(out)
}

/// Generates one measurement around `center` (the true state by default;
/// the previous estimate when the scenario centers on estimates).
pub fn generate_measurement(
    center: &StateVec,
    scenario: &Scenario,
    rng: &mut SeededRng,
) -> Result<MeasVec> {
    let sigma = scenario.noise.meas_sigma;
    match scenario.measurement_mode {
        MeasurementMode::DirectPosition => {
            let hx = scenario.model.h().matmul(&Matrix::column(center)?)?;
            let mut out = [0.0; 2];
            for (i, slot) in out.iter_mut().enumerate() {
                let mut noise = sigma * rng.standard_normal();
                if scenario.noise.paper_faithful {
                    noise = math::abs(noise);
                }
                *slot = hx.get(i, 0) + noise;
            }
            Ok(out)
        }
        MeasurementMode::ToaTrilateration => {
            let mut ranges = Vec::with_capacity(scenario.anchors.len());
            for anchor in &scenario.anchors {
                let r = localize::range_to(anchor, center[0], center[1]);
                ranges.push(r + sigma * rng.standard_normal());
            }
            let fix = localize::trilaterate(&scenario.anchors, &ranges)?;
            Ok([fix.get(0, 0), fix.get(1, 0)])
        }
    }
}

fn step_failed(step: usize) -> impl Fn(Error) -> Error {
    move |e| Error::StepFailed { step, source: Box::new(e) }
}

/// Runs the filter loop over a scenario: per step, generate a measurement,
/// predict, update, and record metrics. Fully deterministic given the
/// scenario (including its seed).
pub fn run_scenario(scenario: &Scenario) -> Result<RunSummary> {
    scenario.validate()?;
    let mut rng = SeededRng::new(scenario.seed);
    let truth = generate_truth(scenario, &mut rng)?;
    let u = ControlInput::zeros(scenario.model.control_dim());
    let mut state = scenario.initial_state.clone();
    let mut records: Vec<StepRecord> = Vec::with_capacity(scenario.n_iter);
    let mut sum_sq_meas = 0.0;
    let mut sum_sq_filt = 0.0;
    let mut sum_nees = 0.0;

    for (k, true_state) in truth.iter().enumerate() {
        let center = if scenario.center_on_estimate {
            match records.last() {
                Some(prev) => prev.posterior_mean,
                None => to_state_vec(scenario.initial_state.mean()),
            }
        } else {
            *true_state
        };
        let measurement =
            generate_measurement(&center, scenario, &mut rng).map_err(step_failed(k))?;

        let predicted = kf::predict(&state, &scenario.model, &u).map_err(step_failed(k))?;
        let y = Matrix::column(&measurement).map_err(step_failed(k))?;
        let (posterior, diag) =
            kf::update(&predicted, &y, &scenario.model).map_err(step_failed(k))?;

        let truth_col = Matrix::column(true_state).map_err(step_failed(k))?;
        let err = truth_col.sub(posterior.mean()).map_err(step_failed(k))?;
        let p_inv = posterior.cov().inverse().map_err(step_failed(k))?;
        let nees = err
            .transpose()
            .matmul(&p_inv.matmul(&err).map_err(step_failed(k))?)
            .map_err(step_failed(k))?
            .get(0, 0)
            .max(0.0);

        let posterior_mean = to_state_vec(posterior.mean());
        let cov = posterior.cov();
        sum_sq_meas += sq_dist(&measurement, true_state);
        sum_sq_filt += sq_dist(&[posterior_mean[0], posterior_mean[1]], true_state);
        sum_nees += nees;
        records.push(StepRecord {
            step: k,
            true_state: *true_state,
            measurement,
            predicted_mean: to_state_vec(predicted.mean()),
            posterior_mean,
            posterior_cov_diag: [cov.get(0, 0), cov.get(1, 1), cov.get(2, 2), cov.get(3, 3)],
            posterior_cov: cov.clone(),
            nees,
            neg_log_likelihood: diag.likelihood.neg_log_density,
        });
        state = posterior;
    }

    let n = scenario.n_iter as f64;
    Ok(RunSummary {
        rmse_measurement: math::sqrt(sum_sq_meas / n),
        rmse_filtered: math::sqrt(sum_sq_filt / n),
        mean_nees: sum_nees / n,
        records,
    })
}

fn sq_dist(point: &MeasVec, state: &StateVec) -> f64 {
    let dx = point[0] - state[0];
    let dy = point[1] - state[1];
    dx * dx + dy * dy
}

/// Runs `n_runs` scenarios with seeds `seed, seed+1, …` and aggregates
/// their summary metrics into means with standard errors.
pub fn run_monte_carlo(scenario: &Scenario, n_runs: usize) -> Result<MonteCarloAggregate> {
    if n_runs == 0 {
        return Err(Error::InvalidScenario { reason: "n_runs must be at least 1" });
    }
    let mut rmse_meas = Vec::with_capacity(n_runs);
    let mut rmse_filt = Vec::with_capacity(n_runs);
    let mut nees = Vec::with_capacity(n_runs);
    let mut gaps = Vec::with_capacity(n_runs);
    let mut wins = 0usize;
    for i in 0..n_runs {
        let mut run = scenario.clone();
        run.seed = scenario.seed.wrapping_add(i as u64);
        let summary = run_scenario(&run)
            .map_err(|e| Error::RunFailed { seed: run.seed, source: Box::new(e) })?;
        if summary.rmse_filtered < summary.rmse_measurement {
            wins += 1;
        }
        gaps.push(summary.rmse_measurement - summary.rmse_filtered);
        rmse_meas.push(summary.rmse_measurement);
        rmse_filt.push(summary.rmse_filtered);
        nees.push(summary.mean_nees);
    }
    Ok(MonteCarloAggregate {
        n_runs,
        rmse_measurement: mean_se(&rmse_meas),
        rmse_filtered: mean_se(&rmse_filt),
        mean_nees: mean_se(&nees),
        rmse_gap: mean_se(&gaps),
        filtered_wins: wins,
    })
}

fn mean_se(values: &[f64]) -> MeanSe {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return MeanSe { mean, se: 0.0 };
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    MeanSe { mean, se: math::sqrt(var / n as f64) }
}
