//! Time-of-arrival localization: ranging plus linearized least-squares
//! trilateration in the plane.
//!
//! Subtracting the first anchor's circle equation from each of the others
//! turns the nonlinear range equations into a linear system
//! `2 (aᵢ - a₀)ᵀ x = r₀² - rᵢ² + ‖aᵢ‖² - ‖a₀‖²`, solved by normal
//! equations. Collinear anchors make that system rank deficient, which
//! surfaces as a singular pivot.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mat::Matrix;
use crate::math;

/// Propagation speed used to convert arrival times to ranges, in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// A fixed receiver at a known planar position (meters).
#[derive(Debug, Clone, PartialEq)]
pub struct Anchor {
    pub id: String,
    pub position: [f64; 2],
}

impl Anchor {
    pub fn new(id: impl Into<String>, x: f64, y: f64) -> Self {
        Self { id: id.into(), position: [x, y] }
    }
}

/// One arrival-time reading (seconds) attributed to an anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct ToaObservation {
    pub anchor_id: String,
    pub toa: f64,
}

impl ToaObservation {
    pub fn new(anchor_id: impl Into<String>, toa: f64) -> Self {
        Self { anchor_id: anchor_id.into(), toa }
    }
}

/// Converts an arrival time to a range in meters (`r = c t`).
pub fn toa_to_range(obs: &ToaObservation) -> Result<f64> {
    if !obs.toa.is_finite() {
        return Err(Error::NonFinite { op: "toa_to_range" });
    }
    if obs.toa < 0.0 {
        return Err(Error::NegativeToa { toa: obs.toa });
    }
    Ok(SPEED_OF_LIGHT * obs.toa)
}

/// Solves for the 2D position given ≥3 anchors and one range per anchor
/// (aligned by index).
///
/// With noiseless consistent ranges the true position is recovered to
/// numerical precision; with noisy ranges this is the least-squares point
/// of the linearized system.
pub fn trilaterate(anchors: &[Anchor], ranges: &[f64]) -> Result<Matrix> {
    if anchors.len() < 3 {
        return Err(Error::TooFewAnchors { got: anchors.len() });
    }
    if ranges.len() != anchors.len() {
        return Err(Error::RangeCountMismatch { anchors: anchors.len(), ranges: ranges.len() });
    }
    for a in anchors {
        if !(a.position[0].is_finite() && a.position[1].is_finite()) {
            return Err(Error::NonFinite { op: "trilaterate anchors" });
        }
    }
    if !ranges.iter().all(|r| r.is_finite()) {
        return Err(Error::NonFinite { op: "trilaterate ranges" });
    }

    let m = anchors.len() - 1;
    let [x0, y0] = anchors[0].position;
    let r0 = ranges[0];
    let norm0 = x0 * x0 + y0 * y0;
    let mut g = Matrix::zeros(m, 2);
    let mut b = Matrix::zeros(m, 1);
    for i in 1..anchors.len() {
        let [xi, yi] = anchors[i].position;
        g.set(i - 1, 0, 2.0 * (xi - x0));
        g.set(i - 1, 1, 2.0 * (yi - y0));
        b.set(
            i - 1,
            0,
            r0 * r0 - ranges[i] * ranges[i] + xi * xi + yi * yi - norm0,
        );
    }
    let gt = g.transpose();
    let normal = gt.matmul(&g)?;
    let inv = normal.inverse().map_err(|e| match e {
        Error::SingularMatrix { column } => Error::CollinearAnchors { column },
        other => other,
    })?;
    inv.matmul(&gt.matmul(&b)?)
}

/// Converts observations to ranges and trilaterates.
///
/// Observations are matched to anchors by id; anchors without an
/// observation are ignored, and the anchor list's order determines the
/// solve order, so permuting the observations cannot change the result.
pub fn fix_position(anchors: &[Anchor], observations: &[ToaObservation]) -> Result<Matrix> {
    let mut by_id: BTreeMap<&str, f64> = BTreeMap::new();
    let mut anchor_ids: BTreeSet<&str> = BTreeSet::new();
    for a in anchors {
        if !anchor_ids.insert(a.id.as_str()) {
            return Err(Error::DuplicateAnchor { id: a.id.clone() });
        }
    }
    for obs in observations {
        if !anchor_ids.contains(obs.anchor_id.as_str()) {
            return Err(Error::UnknownAnchor { id: obs.anchor_id.clone() });
        }
        let range = toa_to_range(obs)?;
        if by_id.insert(obs.anchor_id.as_str(), range).is_some() {
            return Err(Error::DuplicateObservation { id: obs.anchor_id.clone() });
        }
    }
    let mut observed = Vec::new();
    let mut ranges = Vec::new();
    for a in anchors {
        if let Some(&r) = by_id.get(a.id.as_str()) {
            observed.push(a.clone());
            ranges.push(r);
        }
    }
    trilaterate(&observed, &ranges)
}

/// Euclidean distance between an anchor and a planar point, in meters.
pub fn range_to(anchor: &Anchor, x: f64, y: f64) -> f64 {
    math::hypot(anchor.position[0] - x, anchor.position[1] - y)
}
