//! Multivariate Gaussian density evaluation and seeded sampling.
//!
//! The negative log density is the source of truth: the linear-scale
//! density may underflow to 0.0 far from the mean, but the log form stays
//! finite, so filters and tests should compare in log space.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mat::Matrix;
use crate::math;
use crate::rng::SeededRng;

/// Symmetry tolerance applied to covariance matrices at validation time.
pub const COV_SYMMETRY_TOL: f64 = 1e-9;

const LN_TAU: f64 = 1.837_877_066_409_345_3; // ln(2π)

/// A validated Gaussian: mean d×1 and symmetric positive-definite
/// covariance d×d.
///
/// The Cholesky factor is computed once at construction, which both proves
/// positive definiteness and makes sampling infallible.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianParams {
    mean: Matrix,
    cov: Matrix,
    chol: Matrix,
}

impl GaussianParams {
    /// Validates and wraps mean and covariance.
    ///
    /// Errors on shape mismatch, asymmetry beyond [`COV_SYMMETRY_TOL`], or a
    /// covariance that is not strictly positive definite.
    pub fn new(mean: Matrix, cov: Matrix) -> Result<Self> {
        if mean.cols() != 1 {
            return Err(Error::ShapeMismatch {
                op: "gaussian mean",
                left: mean.shape(),
                right: (mean.rows(), 1),
            });
        }
        if cov.shape() != (mean.rows(), mean.rows()) {
            return Err(Error::ShapeMismatch {
                op: "gaussian covariance",
                left: cov.shape(),
                right: (mean.rows(), mean.rows()),
            });
        }
        check_symmetric(&cov)?;
        let chol = cov.cholesky()?;
        Ok(Self { mean, cov, chol })
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

/// Density of one point under one Gaussian, in both linear and log scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LikelihoodResult {
    /// `exp(-neg_log_density)`; may underflow to 0.0 in the far tails.
    pub density: f64,
    /// `½ dᵀΣ⁻¹d + ½ k ln(2π) + ½ ln det Σ` with `d = x - mean`, in nats.
    pub neg_log_density: f64,
}

/// Shared evaluation core so the single, batch, and many-means paths agree
/// bit-for-bit: the inverse covariance and log normalizer are computed once
/// and every point goes through the same quadratic-form loop.
struct DensityEvaluator {
    inv_cov: Matrix,
    log_norm: f64,
    dim: usize,
}

impl DensityEvaluator {
    fn new(params: &GaussianParams) -> Result<Self> {
        Self::from_cov(&params.cov)
    }

    /// Builds the evaluator from an already-validated covariance.
    fn from_cov(cov: &Matrix) -> Result<Self> {
        let det = cov.det();
        if det <= 0.0 {
            // A validated covariance has positive determinant unless the
            // product of pivots underflowed; treat that as non-finite input
            // to the log rather than returning -inf downstream.
            return Err(Error::NonFinite { op: "gauss_pdf log-determinant" });
        }
        let dim = cov.rows();
        Ok(Self {
            inv_cov: cov.inverse()?,
            log_norm: 0.5 * (dim as f64 * LN_TAU + math::ln(det)),
            dim,
        })
    }

    /// Evaluates the density at `x - mean` given as explicit coordinates.
    fn eval_diff(&self, diff: &[f64]) -> Result<LikelihoodResult> {
        let mut quad = 0.0;
        for i in 0..self.dim {
            let mut row = 0.0;
            for j in 0..self.dim {
                row += self.inv_cov.get(i, j) * diff[j];
            }
            quad += diff[i] * row;
        }
        let neg_log_density = 0.5 * quad + self.log_norm;
        if !neg_log_density.is_finite() {
            return Err(Error::NonFinite { op: "gauss_pdf" });
        }
        Ok(LikelihoodResult { density: math::exp(-neg_log_density), neg_log_density })
    }
}

/// Density of a single point `x` (d×1) under `params`.
pub fn gauss_pdf(x: &Matrix, params: &GaussianParams) -> Result<LikelihoodResult> {
    if x.shape() != (params.dim(), 1) {
        return Err(Error::ShapeMismatch {
            op: "gauss_pdf point",
            left: x.shape(),
            right: (params.dim(), 1),
        });
    }
    let eval = DensityEvaluator::new(params)?;
    let diff: Vec<f64> = (0..params.dim())
        .map(|i| x.get(i, 0) - params.mean().get(i, 0))
        .collect();
    eval.eval_diff(&diff)
}

/// Densities of N points (the columns of `points`, d×N) under one Gaussian.
pub fn gauss_pdf_batch(points: &Matrix, mean: &Matrix, cov: &Matrix) -> Result<Vec<LikelihoodResult>> {
    let params = GaussianParams::new(mean.clone(), cov.clone())?;
    if points.rows() != params.dim() {
        return Err(Error::ShapeMismatch {
            op: "gauss_pdf_batch points",
            left: points.shape(),
            right: (params.dim(), points.cols()),
        });
    }
    let eval = DensityEvaluator::new(&params)?;
    let mut out = Vec::with_capacity(points.cols());
    for c in 0..points.cols() {
        let diff: Vec<f64> = (0..params.dim())
            .map(|i| points.get(i, c) - params.mean().get(i, 0))
            .collect();
        out.push(eval.eval_diff(&diff)?);
    }
    Ok(out)
}

/// Densities of one point `x` (d×1) under N candidate means (the columns of
/// `means`, d×N) sharing one covariance.
pub fn gauss_pdf_many_means(x: &Matrix, means: &Matrix, cov: &Matrix) -> Result<Vec<LikelihoodResult>> {
    if x.cols() != 1 || x.rows() != means.rows() {
        return Err(Error::ShapeMismatch {
            op: "gauss_pdf_many_means point",
            left: x.shape(),
            right: (means.rows(), 1),
        });
    }
    if cov.shape() != (means.rows(), means.rows()) {
        return Err(Error::ShapeMismatch {
            op: "gauss_pdf_many_means covariance",
            left: cov.shape(),
            right: (means.rows(), means.rows()),
        });
    }
    check_symmetric(cov)?;
    cov.cholesky()?;
    let eval = DensityEvaluator::from_cov(cov)?;
    let mut out = Vec::with_capacity(means.cols());
    for c in 0..means.cols() {
        let diff: Vec<f64> = (0..means.rows()).map(|i| x.get(i, 0) - means.get(i, c)).collect();
        out.push(eval.eval_diff(&diff)?);
    }
    Ok(out)
}

/// Draws one sample: `mean + L z` with `L` the stored Cholesky factor and
/// `z` a vector of iid standard normals consumed in index order.
pub fn sample_gaussian(rng: &mut SeededRng, params: &GaussianParams) -> Matrix {
    let d = params.dim();
    let z: Vec<f64> = (0..d).map(|_| rng.standard_normal()).collect();
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let mut v = params.mean().get(i, 0);
        // L is lower triangular: entries past the diagonal are zero.
        for j in 0..=i {
            v += params.chol.get(i, j) * z[j];
        }
        out.push(v);
    }
    Matrix::column(&out).expect("sample from validated params is finite")
}

fn check_symmetric(cov: &Matrix) -> Result<()> {
    if !cov.is_square() {
        return Err(Error::NotSquare { rows: cov.rows(), cols: cov.cols() });
    }
    if !cov.is_symmetric(COV_SYMMETRY_TOL) {
        let max_asymmetry = cov.max_abs_diff(&cov.transpose());
        return Err(Error::NotSymmetric { max_asymmetry });
    }
    Ok(())
}
