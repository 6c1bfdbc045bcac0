//! Convergence in the horosphere topology, E-limits, impressions and
//! principal parts, and the triviality of the bidisc horosphere topology.

mod bidisc_check;
mod convergence;
mod impressions;

use serde::{Deserialize, Serialize};

use crate::config::MetricConfig;
use crate::error::{HoroError, Result};
use crate::horospheres::{is_admissible, PointSequence};
use crate::metric_core::Domain;
use crate::point::CPoint;

pub use bidisc_check::{bidisc_topology_trivial_check, ClosureCheck, TopologyReport};
pub use convergence::{converges_h, e_limit};
pub use impressions::{impression_estimate, principal_part_estimate, PrincipalPart, RadiusSpread};

/// A point of the horosphere boundary, given by an admissible representative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryClass {
    pub domain: Domain,
    pub representative: PointSequence,
}

impl BoundaryClass {
    /// Checks admissibility at base `x` first.
    pub fn new(x: &CPoint, representative: PointSequence, cfg: &MetricConfig) -> Result<BoundaryClass> {
        let v = is_admissible(&representative.domain, x, &representative, cfg)?;
        if !v.is_true() {
            return Err(HoroError::Precondition(format!("representative is not admissible: {}", v.detail)));
        }
        Ok(BoundaryClass::trusted(representative))
    }

    /// For representatives known to be admissible, such as the canonical
    /// families.
    pub fn trusted(representative: PointSequence) -> BoundaryClass {
        BoundaryClass { domain: representative.domain.clone(), representative }
    }
}

/// Finite sample of a Euclidean cluster set on the boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterSet {
    pub points: Vec<CPoint>,
    pub escapes_to_infinity: bool,
    /// Probe points the set was built from.
    pub probes: usize,
}

impl ClusterSet {
    pub fn is_singleton(&self) -> bool {
        self.points.len() == 1 && !self.escapes_to_infinity
    }

    /// Largest distance from a point of `self` to the nearest point of
    /// `other`.
    pub fn excess_over(&self, other: &ClusterSet) -> f64 {
        self.points
            .iter()
            .map(|p| other.points.iter().map(|q| p.dist(q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    }

    pub fn hausdorff(&self, other: &ClusterSet) -> f64 {
        self.excess_over(other).max(other.excess_over(self))
    }
}

fn same_domain(d: &Domain, seq: &PointSequence) -> Result<()> {
    if &seq.domain != d {
        return Err(HoroError::InvalidArgument("class lives in a different domain".into()));
    }
    Ok(())
}
