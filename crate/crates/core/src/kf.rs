//! Two-step linear Kalman filter with likelihood diagnostics.
//!
//! [`predict`] propagates a Gaussian state through constant linear dynamics
//! (mean `A x + B u`, covariance `A P Aᵀ + Q`); [`update`] corrects the
//! prediction with a measurement through the gain `K = P Hᵀ S⁻¹` and
//! reports the innovation, its covariance, the gain, and the measurement
//! likelihood. Covariance outputs are symmetrized to keep roundoff from
//! accumulating into asymmetry.

use crate::error::{Error, Result};
use crate::gaussian::{self, GaussianParams, LikelihoodResult};
use crate::mat::Matrix;

/// Symmetry tolerance for model and state covariances.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// Most negative Cholesky pivot a state covariance may show and still count
/// as positive semidefinite up to roundoff.
pub const PSD_PIVOT_TOL: f64 = -1e-9;

/// Most negative Cholesky pivot accepted for the process noise Q, which may
/// be exactly singular by design (e.g. all zeros).
const Q_PIVOT_TOL: f64 = -1e-12;

/// Constant matrices of a linear state-space model:
/// dynamics `x' = A x + B u + w` with `w ~ N(0, Q)` and measurements
/// `y = H x + v` with `v ~ N(0, R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpaceModel {
    a: Matrix,
    b: Matrix,
    h: Matrix,
    q: Matrix,
    r: Matrix,
}

impl StateSpaceModel {
    /// Validates mutual dimension consistency and the noise covariances:
    /// Q must be symmetric positive semidefinite, R symmetric positive
    /// definite.
    pub fn new(a: Matrix, b: Matrix, h: Matrix, q: Matrix, r: Matrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let n = a.rows();
        let m = h.rows();
        if b.rows() != n {
            return Err(Error::ShapeMismatch { op: "model B", left: b.shape(), right: (n, b.cols()) });
        }
        if h.cols() != n {
            return Err(Error::ShapeMismatch { op: "model H", left: h.shape(), right: (m, n) });
        }
        if q.shape() != (n, n) {
            return Err(Error::ShapeMismatch { op: "model Q", left: q.shape(), right: (n, n) });
        }
        if r.shape() != (m, m) {
            return Err(Error::ShapeMismatch { op: "model R", left: r.shape(), right: (m, m) });
        }
        if !q.is_symmetric(SYMMETRY_TOL) {
            return Err(Error::NotSymmetric { max_asymmetry: q.max_abs_diff(&q.transpose()) });
        }
        let q_pivot = q.min_cholesky_pivot();
        if q_pivot < Q_PIVOT_TOL {
            return Err(Error::NotPositiveSemidefinite { min_pivot: q_pivot });
        }
        if !r.is_symmetric(SYMMETRY_TOL) {
            return Err(Error::NotSymmetric { max_asymmetry: r.max_abs_diff(&r.transpose()) });
        }
        r.cholesky()?;
        Ok(Self { a, b, h, q, r })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn h(&self) -> &Matrix {
        &self.h
    }

    pub fn q(&self) -> &Matrix {
        &self.q
    }

    pub fn r(&self) -> &Matrix {
        &self.r
    }

    /// State dimension n.
    pub fn state_dim(&self) -> usize {
        self.a.rows()
    }

    /// Control dimension l (columns of B).
    pub fn control_dim(&self) -> usize {
        self.b.cols()
    }

    /// Measurement dimension m.
    pub fn measurement_dim(&self) -> usize {
        self.h.rows()
    }
}

/// Gaussian state estimate: mean n×1 and covariance n×n, symmetric and
/// positive semidefinite up to roundoff ([`PSD_PIVOT_TOL`] after
/// symmetrization).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: Matrix,
    cov: Matrix,
}

impl GaussianState {
    pub fn new(mean: Matrix, cov: Matrix) -> Result<Self> {
        if mean.cols() != 1 {
            return Err(Error::ShapeMismatch {
                op: "state mean",
                left: mean.shape(),
                right: (mean.rows(), 1),
            });
        }
        if cov.shape() != (mean.rows(), mean.rows()) {
            return Err(Error::ShapeMismatch {
                op: "state covariance",
                left: cov.shape(),
                right: (mean.rows(), mean.rows()),
            });
        }
        if !cov.is_symmetric(SYMMETRY_TOL) {
            return Err(Error::NotSymmetric { max_asymmetry: cov.max_abs_diff(&cov.transpose()) });
        }
        let min_pivot = cov.symmetrize().min_cholesky_pivot();
        if min_pivot < PSD_PIVOT_TOL {
            return Err(Error::NotPositiveSemidefinite { min_pivot });
        }
        Ok(Self { mean, cov })
    }

    pub fn mean(&self) -> &Matrix {
        &self.mean
    }

    pub fn cov(&self) -> &Matrix {
        &self.cov
    }

    pub fn dim(&self) -> usize {
        self.mean.rows()
    }
}

/// Control vector u (l×1), matched against `B.cols()` at prediction time.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlInput {
    u: Matrix,
}

impl ControlInput {
    pub fn new(u: Matrix) -> Result<Self> {
        if u.cols() != 1 {
            return Err(Error::ShapeMismatch {
                op: "control input",
                left: u.shape(),
                right: (u.rows(), 1),
            });
        }
        Ok(Self { u })
    }

    /// The all-zeros control of dimension l.
    pub fn zeros(l: usize) -> Self {
        Self { u: Matrix::zeros(l, 1) }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.u
    }
}

/// Per-update byproducts: innovation `V = y - IM`, innovation covariance
/// `S = H P Hᵀ + R`, gain `K = P Hᵀ S⁻¹`, predicted measurement `IM = H x`,
/// and the likelihood of `y` under `N(IM, S)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdateDiagnostics {
    pub innovation: Matrix,
    pub innovation_cov: Matrix,
    pub gain: Matrix,
    pub predicted_measurement: Matrix,
    pub likelihood: LikelihoodResult,
}

/// Prediction step: mean' = A·mean + B·u, cov' = sym(A·cov·Aᵀ + Q).
pub fn predict(state: &GaussianState, model: &StateSpaceModel, u: &ControlInput) -> Result<GaussianState> {
    if state.dim() != model.state_dim() {
        return Err(Error::ShapeMismatch {
            op: "predict state",
            left: state.mean.shape(),
            right: (model.state_dim(), 1),
        });
    }
    if u.matrix().rows() != model.control_dim() {
        return Err(Error::ShapeMismatch {
            op: "predict control",
            left: u.matrix().shape(),
            right: (model.control_dim(), 1),
        });
    }
    let mean = model.a.matmul(&state.mean)?.add(&model.b.matmul(u.matrix())?)?;
    let cov = model
        .a
        .matmul(&state.cov)?
        .matmul(&model.a.transpose())?
        .add(&model.q)?
        .symmetrize();
    GaussianState::new(mean, cov)
}

/// Update step: corrects a predicted state with measurement `y` (m×1) and
/// returns the posterior with diagnostics.
pub fn update(
    predicted: &GaussianState,
    y: &Matrix,
    model: &StateSpaceModel,
) -> Result<(GaussianState, UpdateDiagnostics)> {
    if predicted.dim() != model.state_dim() {
        return Err(Error::ShapeMismatch {
            op: "update state",
            left: predicted.mean.shape(),
            right: (model.state_dim(), 1),
        });
    }
    if y.shape() != (model.measurement_dim(), 1) {
        return Err(Error::ShapeMismatch {
            op: "update measurement",
            left: y.shape(),
            right: (model.measurement_dim(), 1),
        });
    }
    let h_t = model.h.transpose();
    let predicted_measurement = model.h.matmul(&predicted.mean)?;
    let innovation = y.sub(&predicted_measurement)?;
    // Symmetrize S before inverting so roundoff asymmetry cannot leak into
    // the gain.
    let innovation_cov = model
        .h
        .matmul(&predicted.cov)?
        .matmul(&h_t)?
        .add(&model.r)?
        .symmetrize();
    let gain = predicted.cov.matmul(&h_t)?.matmul(&innovation_cov.inverse()?)?;
    let mean = predicted.mean.add(&gain.matmul(&innovation)?)?;
    let cov = predicted
        .cov
        .sub(&gain.matmul(&innovation_cov)?.matmul(&gain.transpose())?)?
        .symmetrize();
    let likelihood = gaussian::gauss_pdf(
        y,
        &GaussianParams::new(predicted_measurement.clone(), innovation_cov.clone())?,
    )?;
    let posterior = GaussianState::new(mean, cov)?;
    let diagnostics = UpdateDiagnostics {
        innovation,
        innovation_cov,
        gain,
        predicted_measurement,
        likelihood,
    };
    Ok((posterior, diagnostics))
}

/// One full filter iteration: [`predict`] then [`update`].
pub fn step(
    state: &GaussianState,
    u: &ControlInput,
    y: &Matrix,
    model: &StateSpaceModel,
) -> Result<(GaussianState, UpdateDiagnostics)> {
    let predicted = predict(state, model, u)?;
    update(&predicted, y, model)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_mat_close(got: &Matrix, want: &Matrix, tol: f64) {
        let diff = got.max_abs_diff(want);
        assert!(diff <= tol, "matrices differ by {diff} (tol {tol})");
    }

    /// Constant-velocity tracking model with the reference constants:
    /// dt = 0.1, B = I₄, Q = I₄, position-only H, R = I₂.
    fn reference_model() -> StateSpaceModel {
        let dt = 0.1;
        StateSpaceModel::new(
            Matrix::from_rows([
                [1.0, 0.0, dt, 0.0],
                [0.0, 1.0, 0.0, dt],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ])
            .unwrap(),
            Matrix::identity(4),
            Matrix::from_rows([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]]).unwrap(),
            Matrix::identity(4),
            Matrix::identity(2),
        )
        .unwrap()
    }

    fn reference_initial_state() -> GaussianState {
        GaussianState::new(
            Matrix::column(&[0.0, 0.0, 0.1, 0.1]).unwrap(),
            Matrix::diag(&[0.01, 0.01, 0.01, 0.01]).unwrap(),
        )
        .unwrap()
    }

    fn scalar_model(a: f64, q: f64, r: f64) -> StateSpaceModel {
        StateSpaceModel::new(
            Matrix::from_rows([[a]]).unwrap(),
            Matrix::from_rows([[0.0]]).unwrap(),
            Matrix::from_rows([[1.0]]).unwrap(),
            Matrix::from_rows([[q]]).unwrap(),
            Matrix::from_rows([[r]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn predict_identity_dynamics_is_noop() {
        let model = StateSpaceModel::new(
            Matrix::identity(2),
            Matrix::zeros(2, 2),
            Matrix::identity(2),
            Matrix::zeros(2, 2),
            Matrix::identity(2),
        )
        .unwrap();
        let state = GaussianState::new(
            Matrix::column(&[1.0, -2.0]).unwrap(),
            Matrix::diag(&[0.5, 0.25]).unwrap(),
        )
        .unwrap();
        let out = predict(&state, &model, &ControlInput::zeros(2)).unwrap();
        assert_eq!(out.mean(), state.mean());
        assert_eq!(out.cov(), state.cov());
    }

    #[test]
    fn predict_reference_first_step() {
        let model = reference_model();
        let out = predict(
            &reference_initial_state(),
            &model,
            &ControlInput::zeros(4),
        )
        .unwrap();
        assert_mat_close(
            out.mean(),
            &Matrix::column(&[0.01, 0.01, 0.1, 0.1]).unwrap(),
            1e-12,
        );
        let want_cov = Matrix::from_rows([
            [1.0101, 0.0, 0.001, 0.0],
            [0.0, 1.0101, 0.0, 0.001],
            [0.001, 0.0, 1.01, 0.0],
            [0.0, 0.001, 0.0, 1.01],
        ])
        .unwrap();
        assert_mat_close(out.cov(), &want_cov, 1e-12);
    }

    #[test]
    fn predict_scalar_example() {
        let model = scalar_model(2.0, 1.0, 1.0);
        let state = GaussianState::new(
            Matrix::from_rows([[1.0]]).unwrap(),
            Matrix::from_rows([[1.0]]).unwrap(),
        )
        .unwrap();
        let out = predict(&state, &model, &ControlInput::zeros(1)).unwrap();
        assert_eq!(out.mean().get(0, 0), 2.0);
        assert_eq!(out.cov().get(0, 0), 5.0);
    }

    #[test]
    fn update_zero_innovation_keeps_mean() {
        let model = reference_model();
        let predicted = predict(
            &reference_initial_state(),
            &model,
            &ControlInput::zeros(4),
        )
        .unwrap();
        let y = model.h().matmul(predicted.mean()).unwrap();
        let (posterior, diag) = update(&predicted, &y, &model).unwrap();
        assert_eq!(posterior.mean(), predicted.mean());
        assert_mat_close(&diag.innovation, &Matrix::zeros(2, 1), 0.0);
        // The covariance still shrinks even though the mean is untouched.
        for i in 0..2 {
            assert!(posterior.cov().get(i, i) < predicted.cov().get(i, i));
        }
    }

    #[test]
    fn update_scalar_example() {
        let model = scalar_model(1.0, 0.0, 1.0);
        let predicted = GaussianState::new(
            Matrix::from_rows([[0.0]]).unwrap(),
            Matrix::from_rows([[1.0]]).unwrap(),
        )
        .unwrap();
        let y = Matrix::from_rows([[1.0]]).unwrap();
        let (posterior, diag) = update(&predicted, &y, &model).unwrap();
        assert_eq!(diag.innovation_cov.get(0, 0), 2.0);
        assert_eq!(diag.gain.get(0, 0), 0.5);
        assert_eq!(posterior.mean().get(0, 0), 0.5);
        assert_eq!(posterior.cov().get(0, 0), 0.5);
    }

    #[test]
    fn update_likelihood_matches_external_recomputation() {
        let model = reference_model();
        let predicted = predict(
            &reference_initial_state(),
            &model,
            &ControlInput::zeros(4),
        )
        .unwrap();
        let y = Matrix::column(&[0.3, -0.2]).unwrap();
        let (_, diag) = update(&predicted, &y, &model).unwrap();
        let params = GaussianParams::new(
            diag.predicted_measurement.clone(),
            diag.innovation_cov.clone(),
        )
        .unwrap();
        let external = crate::gaussian::gauss_pdf(&y, &params).unwrap();
        assert_eq!(diag.likelihood.neg_log_density, external.neg_log_density);
        assert_eq!(diag.likelihood.density, external.density);
    }

    #[test]
    fn step_composes_predict_and_update() {
        let model = reference_model();
        let state = reference_initial_state();
        let u = ControlInput::zeros(4);
        let y = Matrix::column(&[0.12, 0.08]).unwrap();
        let (s1, d1) = step(&state, &u, &y, &model).unwrap();
        let predicted = predict(&state, &model, &u).unwrap();
        let (s2, d2) = update(&predicted, &y, &model).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(d1, d2);
    }

    #[test]
    fn zero_r_is_rejected() {
        let err = StateSpaceModel::new(
            Matrix::identity(1),
            Matrix::zeros(1, 1),
            Matrix::identity(1),
            Matrix::zeros(1, 1),
            Matrix::zeros(1, 1),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotPositiveDefinite { .. }));
    }

    #[test]
    fn model_validation_rejects_bad_shapes_and_noise() {
        let ok = |m: Result<StateSpaceModel>| m.unwrap();
        ok(StateSpaceModel::new(
            Matrix::identity(2),
            Matrix::zeros(2, 1),
            Matrix::from_rows([[1.0, 0.0]]).unwrap(),
            Matrix::zeros(2, 2),
            Matrix::identity(1),
        ));
        assert!(matches!(
            StateSpaceModel::new(
                Matrix::identity(2),
                Matrix::zeros(3, 1),
                Matrix::from_rows([[1.0, 0.0]]).unwrap(),
                Matrix::zeros(2, 2),
                Matrix::identity(1),
            ),
            Err(Error::ShapeMismatch { op: "model B", .. })
        ));
        assert!(matches!(
            StateSpaceModel::new(
                Matrix::identity(2),
                Matrix::zeros(2, 1),
                Matrix::from_rows([[1.0, 0.0]]).unwrap(),
                Matrix::diag(&[-1.0, 1.0]).unwrap(),
                Matrix::identity(1),
            ),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
        assert!(matches!(
            StateSpaceModel::new(
                Matrix::identity(2),
                Matrix::zeros(2, 1),
                Matrix::from_rows([[1.0, 0.0]]).unwrap(),
                Matrix::zeros(2, 2),
                Matrix::diag(&[-1.0]).unwrap(),
            ),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn state_validation_enforces_psd() {
        assert!(matches!(
            GaussianState::new(
                Matrix::column(&[0.0, 0.0]).unwrap(),
                Matrix::diag(&[1.0, -1.0]).unwrap(),
            ),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
        assert!(matches!(
            GaussianState::new(
                Matrix::column(&[0.0, 0.0]).unwrap(),
                Matrix::from_rows([[1.0, 0.1], [0.0, 1.0]]).unwrap(),
            ),
            Err(Error::NotSymmetric { .. })
        ));
        // The all-zeros covariance is a valid (degenerate) estimate.
        assert!(GaussianState::new(
            Matrix::column(&[1.0]).unwrap(),
            Matrix::zeros(1, 1)
        )
        .is_ok());
    }

    #[test]
    fn update_rejects_mismatched_measurement() {
        let model = reference_model();
        let predicted = predict(
            &reference_initial_state(),
            &model,
            &ControlInput::zeros(4),
        )
        .unwrap();
        let y = Matrix::column(&[1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            update(&predicted, &y, &model),
            Err(Error::ShapeMismatch { op: "update measurement", .. })
        ));
    }
}
