use serde::{Deserialize, Serialize};

use crate::error::{HoroError, Result};
use crate::metric_core::models::{
    ball_involution, cayley, cayley_inverse, parabolic_to_siegel, siegel_to_parabolic,
};
use crate::metric_core::Domain;
use crate::point::{unimodular, CPoint, C64};

/// An explicit biholomorphism between model domains.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum MapSpec {
    Identity,
    /// `z ↦ e^{iθ} (z − a)/(1 − ā z)` on the unit disc.
    DiscAutomorphism { a: C64, theta: f64 },
    /// `z ↦ diag(e^{iφ_j}) φ_a(z)` with `φ_a` the involution exchanging
    /// `0` and `a`.
    BallAutomorphism { a: CPoint, phases: Vec<f64> },
    /// Unit ball of `C²` onto `{Re w1 > |w2|²}`.
    Cayley2,
    /// `{Re w1 > |w2|²}` onto `{Re z1 > 2 (Re z2)²}`.
    SiegelToParabolic,
    /// Applied left to right.
    Composite(Vec<MapSpec>),
    Inverse(Box<MapSpec>),
}

fn check_dim(z: &CPoint, n: usize) -> Result<()> {
    z.check_dim(n)
}

impl MapSpec {
    pub fn rotation(theta: f64) -> MapSpec {
        MapSpec::DiscAutomorphism { a: C64::new(0.0, 0.0), theta }
    }

    pub fn compose(first: MapSpec, then: MapSpec) -> MapSpec {
        MapSpec::Composite(vec![first, then])
    }

    pub fn inverse_spec(&self) -> MapSpec {
        match self {
            MapSpec::Identity => MapSpec::Identity,
            MapSpec::Inverse(inner) => (**inner).clone(),
            MapSpec::Composite(list) => MapSpec::Composite(list.iter().rev().map(MapSpec::inverse_spec).collect()),
            other => MapSpec::Inverse(Box::new(other.clone())),
        }
    }

    pub fn forward(&self, z: &CPoint) -> Result<CPoint> {
        let out = match self {
            MapSpec::Identity => z.clone(),
            MapSpec::DiscAutomorphism { a, theta } => {
                check_dim(z, 1)?;
                let den = C64::new(1.0, 0.0) - a.conj() * z[0];
                if den.norm() == 0.0 {
                    return Err(HoroError::OutsideDomain);
                }
                CPoint::scalar(unimodular(*theta) * (z[0] - a) / den)
            }
            MapSpec::BallAutomorphism { a, phases } => {
                check_dim(z, a.dim())?;
                self.check_ball_params()?;
                let w = ball_involution(a, z);
                CPoint(w.0.iter().zip(phases).map(|(c, ph)| c * unimodular(*ph)).collect())
            }
            MapSpec::Cayley2 => {
                check_dim(z, 2)?;
                if z[0] == C64::new(1.0, 0.0) {
                    return Err(HoroError::OutsideDomain);
                }
                cayley(z)
            }
            MapSpec::SiegelToParabolic => {
                check_dim(z, 2)?;
                siegel_to_parabolic(z)
            }
            MapSpec::Composite(list) => {
                let mut w = z.clone();
                for m in list {
                    w = m.forward(&w)?;
                }
                w
            }
            MapSpec::Inverse(inner) => inner.backward(z)?,
        };
        if !out.is_finite() {
            return Err(HoroError::OutsideDomain);
        }
        Ok(out)
    }

    pub fn backward(&self, w: &CPoint) -> Result<CPoint> {
        let out = match self {
            MapSpec::Identity => w.clone(),
            MapSpec::DiscAutomorphism { a, theta } => {
                check_dim(w, 1)?;
                let u = w[0] * unimodular(-*theta);
                CPoint::scalar((u + a) / (C64::new(1.0, 0.0) + a.conj() * u))
            }
            MapSpec::BallAutomorphism { a, phases } => {
                check_dim(w, a.dim())?;
                self.check_ball_params()?;
                let u = CPoint(w.0.iter().zip(phases).map(|(c, ph)| c * unimodular(-*ph)).collect());
                ball_involution(a, &u)
            }
            MapSpec::Cayley2 => {
                check_dim(w, 2)?;
                cayley_inverse(w)
            }
            MapSpec::SiegelToParabolic => {
                check_dim(w, 2)?;
                parabolic_to_siegel(w)
            }
            MapSpec::Composite(list) => {
                let mut z = w.clone();
                for m in list.iter().rev() {
                    z = m.backward(&z)?;
                }
                z
            }
            MapSpec::Inverse(inner) => inner.forward(w)?,
        };
        if !out.is_finite() {
            return Err(HoroError::OutsideDomain);
        }
        Ok(out)
    }

    fn check_ball_params(&self) -> Result<()> {
        if let MapSpec::BallAutomorphism { a, phases } = self {
            if a.norm() >= 1.0 || phases.len() != a.dim() {
                return Err(HoroError::InvalidArgument(
                    "ball automorphism needs |a| < 1 and one phase per coordinate".into(),
                ));
            }
        }
        Ok(())
    }

    /// The domain the map is defined on, when the map determines it.
    pub fn source_domain(&self) -> Option<Domain> {
        match self {
            MapSpec::Identity => None,
            MapSpec::DiscAutomorphism { .. } => Some(Domain::UnitDisc),
            MapSpec::BallAutomorphism { a, .. } if a.dim() == 1 => Some(Domain::UnitDisc),
            MapSpec::BallAutomorphism { a, .. } => Some(Domain::UnitBall(a.dim())),
            MapSpec::Cayley2 => Some(Domain::UnitBall(2)),
            MapSpec::SiegelToParabolic => Some(Domain::SiegelH2),
            MapSpec::Composite(list) => list.iter().find_map(MapSpec::source_domain),
            MapSpec::Inverse(inner) => inner.source_domain().and_then(|s| inner.image_domain(&s).ok()),
        }
    }

    /// Image of `source` under the map, or an error if the map does not
    /// act on that domain.
    pub fn image_domain(&self, source: &Domain) -> Result<Domain> {
        let bad = || HoroError::Unsupported { op: "map image", kind: source.kind_name().into() };
        match self {
            MapSpec::Identity => Ok(source.clone()),
            MapSpec::DiscAutomorphism { .. } => match source {
                Domain::UnitDisc => Ok(Domain::UnitDisc),
                _ => Err(bad()),
            },
            MapSpec::BallAutomorphism { a, .. } => match source {
                Domain::UnitBall(n) if *n == a.dim() => Ok(source.clone()),
                Domain::UnitDisc if a.dim() == 1 => Ok(Domain::UnitDisc),
                _ => Err(bad()),
            },
            MapSpec::Cayley2 => match source {
                Domain::UnitBall(2) => Ok(Domain::SiegelH2),
                _ => Err(bad()),
            },
            MapSpec::SiegelToParabolic => match source {
                Domain::SiegelH2 => Ok(Domain::ParabolicConvex),
                _ => Err(bad()),
            },
            MapSpec::Composite(list) => list.iter().try_fold(source.clone(), |d, m| m.image_domain(&d)),
            MapSpec::Inverse(inner) => inner.preimage_domain(source),
        }
    }

    pub fn preimage_domain(&self, target: &Domain) -> Result<Domain> {
        let bad = || HoroError::Unsupported { op: "map preimage", kind: target.kind_name().into() };
        match self {
            MapSpec::Cayley2 => match target {
                Domain::SiegelH2 => Ok(Domain::UnitBall(2)),
                _ => Err(bad()),
            },
            MapSpec::SiegelToParabolic => match target {
                Domain::ParabolicConvex => Ok(Domain::SiegelH2),
                _ => Err(bad()),
            },
            MapSpec::Composite(list) => list.iter().rev().try_fold(target.clone(), |d, m| m.preimage_domain(&d)),
            MapSpec::Inverse(inner) => inner.image_domain(target),
            // automorphisms and the identity
            other => other.image_domain(target),
        }
    }
}
