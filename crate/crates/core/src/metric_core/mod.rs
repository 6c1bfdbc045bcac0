//! Model domains, boundary distances and invariant distances.

mod closed_form;
mod convex;
mod domain;
mod estimates;
pub mod models;
pub(crate) mod numeric;
mod quadrature;
pub(crate) mod sampling;

use serde::{Deserialize, Serialize};

pub use closed_form::{
    ball_distance, disc_distance, half_space_coordinate, parabolic_distance, polydisc_distance,
    right_half_plane_distance, siegel_distance,
};
pub use domain::{Domain, SupportShape};
pub use estimates::{boundary_estimate_lower, boundary_estimate_upper};

use crate::config::MetricConfig;
use crate::error::{HoroError, Result};
use crate::point::CPoint;

pub fn membership(d: &Domain, z: &CPoint) -> Result<bool> {
    d.contains(z)
}

pub fn boundary_distance(d: &Domain, z: &CPoint) -> Result<f64> {
    d.boundary_distance(z)
}

pub fn directional_boundary_distance(d: &Domain, z: &CPoint, v: &CPoint) -> Result<f64> {
    d.directional_boundary_distance(z, v)
}

fn require_inside(d: &Domain, z: &CPoint) -> Result<()> {
    if d.contains(z)? {
        Ok(())
    } else {
        Err(HoroError::OutsideDomain)
    }
}

/// Exact invariant distance; errors with `Unsupported` for kinds without a
/// closed form (use [`convex_distance_bounds`]).
pub fn distance(d: &Domain, z: &CPoint, w: &CPoint) -> Result<f64> {
    require_inside(d, z)?;
    require_inside(d, w)?;
    closed_form::exact_distance(d, z, w)
}

/// Certified bracket `(lower, upper)` on a convex domain: the best
/// supporting half-space distance below, segment quadrature above.
pub fn convex_distance_bounds(d: &Domain, z: &CPoint, w: &CPoint, cfg: &MetricConfig) -> Result<(f64, f64)> {
    require_inside(d, z)?;
    require_inside(d, w)?;
    if z == w {
        return Ok((0.0, 0.0));
    }
    let upper = convex::segment_upper(d, z, w, cfg)?;
    let lower = convex::half_space_lower(d, z, w, cfg);
    Ok((lower, upper.max(lower)))
}

/// A distance value that is either exact or only bracketed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum DistanceValue {
    Exact(f64),
    Bracket { lower: f64, upper: f64 },
}

impl DistanceValue {
    pub fn lower(&self) -> f64 {
        match *self {
            DistanceValue::Exact(v) => v,
            DistanceValue::Bracket { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> f64 {
        match *self {
            DistanceValue::Exact(v) => v,
            DistanceValue::Bracket { upper, .. } => upper,
        }
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lower() + self.upper())
    }
}

/// Exact distance where available, otherwise the convex bracket.
pub fn evaluate_distance(d: &Domain, z: &CPoint, w: &CPoint, cfg: &MetricConfig) -> Result<DistanceValue> {
    if d.has_closed_form() {
        distance(d, z, w).map(DistanceValue::Exact)
    } else {
        let (lower, upper) = convex_distance_bounds(d, z, w, cfg)?;
        Ok(DistanceValue::Bracket { lower, upper })
    }
}
