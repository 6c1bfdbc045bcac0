//! Gromov products, geodesic rays and triangles, quasi-geodesics, and the
//! product-based equivalence of sequences.

mod geodesics;
mod quasi;
mod seq_equiv;

use serde::{Deserialize, Serialize};

use crate::config::MetricConfig;
use crate::error::{HoroError, Result};
use crate::metric_core::numeric::grid_golden_min;
use crate::metric_core::{evaluate_distance, Domain};
use crate::point::CPoint;

pub use geodesics::{delta_hyperbolicity_estimate, triangle_thinness, Geodesic};
pub use quasi::{fit_quasi_geodesic, quasi_geodesic_check, Curve, QuasiFit};
pub use seq_equiv::seq_equiv_s;

/// `(x, y)_w = ½ (d(x, w) + d(y, w) − d(x, y))`. Bracketed distances use
/// their centers. Rounding noise below zero is clamped.
pub fn gromov_product(d: &Domain, x: &CPoint, y: &CPoint, w: &CPoint, cfg: &MetricConfig) -> Result<f64> {
    let dx = evaluate_distance(d, x, w, cfg)?.center();
    let dy = evaluate_distance(d, y, w, cfg)?.center();
    let dxy = evaluate_distance(d, x, y, cfg)?.center();
    let p = 0.5 * (dx + dy - dxy);
    debug_assert!(p > -1e-9 * (1.0 + dx + dy) || !d.has_closed_form(), "negative Gromov product {p}");
    Ok(p.max(0.0))
}

/// Unit-speed geodesic ray `t ↦ (target_j tanh(rate_j (t + start)))_j`.
/// On the disc and ball `rates` is `[1]` and `target` a unit vector; on a
/// polydisc each coordinate is radial with rate in `[0, 1]`, the largest
/// rate being 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    pub domain: Domain,
    pub target: CPoint,
    pub rates: Vec<f64>,
    pub start: f64,
}

impl Ray {
    pub fn new(domain: Domain, target: CPoint, rates: Vec<f64>, start: f64) -> Result<Ray> {
        target.check_dim(domain.dim())?;
        let bad = |m: &str| Err(HoroError::InvalidArgument(m.into()));
        match &domain {
            Domain::UnitDisc | Domain::UnitBall(_) => {
                if (target.norm() - 1.0).abs() > 1e-12 || rates != [1.0] {
                    return bad("disc and ball rays need a unit target and rate 1");
                }
            }
            Domain::Polydisc(n) => {
                if rates.len() != *n || rates.iter().any(|r| !(0.0..=1.0).contains(r)) {
                    return bad("polydisc rates must lie in [0, 1]");
                }
                let top = rates.iter().cloned().fold(0.0, f64::max);
                if (top - 1.0).abs() > 1e-12 {
                    return bad("the fastest coordinate must have rate 1");
                }
                if target.0.iter().any(|z| (z.norm() - 1.0).abs() > 1e-12 && z.norm() != 0.0) {
                    return bad("polydisc ray targets are unimodular or zero");
                }
            }
            _ => return Err(HoroError::Unsupported { op: "geodesic ray", kind: domain.kind_name().into() }),
        }
        if !(start >= 0.0) {
            return bad("ray start must be nonnegative");
        }
        Ok(Ray { domain, target, rates, start })
    }

    /// Radial ray from the origin to a boundary point of the disc or ball.
    pub fn radial(domain: Domain, target: CPoint) -> Result<Ray> {
        Ray::new(domain, target, vec![1.0], 0.0)
    }

    pub fn at(&self, t: f64) -> CPoint {
        let s = t + self.start;
        match self.domain {
            Domain::Polydisc(_) => {
                CPoint(self.target.0.iter().zip(&self.rates).map(|(z, r)| z * (r * s).tanh()).collect())
            }
            _ => self.target.scale(s.tanh()),
        }
    }

    pub fn basepoint(&self) -> CPoint {
        self.at(0.0)
    }
}

/// `sup_{t ≤ T} inf_s d(a(t), b(s))` for each horizon `T` in the list; a
/// bounded trend indicates equivalent rays.
pub fn ray_separation(a: &Ray, b: &Ray, horizons: &[f64], cfg: &MetricConfig) -> Result<Vec<f64>> {
    if a.domain != b.domain {
        return Err(HoroError::InvalidArgument("rays live in different domains".into()));
    }
    let d = &a.domain;
    let top = horizons.iter().cloned().fold(0.0, f64::max);
    let steps = 64;
    let mut sup = 0.0f64;
    let mut out = Vec::new();
    let mut sorted: Vec<f64> = horizons.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut k = 0;
    for i in 0..=steps {
        let t = top * i as f64 / steps as f64;
        let p = a.at(t);
        let f = |s: f64| evaluate_distance(d, &p, &b.at(s), cfg).map(|v| v.center()).unwrap_or(f64::INFINITY);
        let (_, m) = grid_golden_min(f, 0.0, top + 4.0 + a.start + b.start, 64, 1e-9);
        while k < sorted.len() && sorted[k] < t {
            out.push(sup);
            k += 1;
        }
        sup = sup.max(m);
    }
    while out.len() < sorted.len() {
        out.push(sup);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::C64;

    #[test]
    fn product_identities() {
        let cfg = MetricConfig::default();
        let d = Domain::UnitDisc;
        let x = CPoint::real(0.3);
        let w = CPoint::from_pairs(&[(-0.2, 0.5)]);
        let dxw = evaluate_distance(&d, &x, &w, &cfg).unwrap().center();
        assert!((gromov_product(&d, &x, &x, &w, &cfg).unwrap() - dxw).abs() < 1e-14);
        assert_eq!(gromov_product(&d, &x, &w, &x, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn opposite_face_rays_have_zero_product() {
        let cfg = MetricConfig::default();
        let d = Domain::Polydisc(2);
        let f = Ray::new(d.clone(), CPoint::from_pairs(&[(1.0, 0.0), (0.0, 0.0)]), vec![1.0, 0.0], 0.0).unwrap();
        let g = Ray::new(d.clone(), CPoint::from_pairs(&[(-1.0, 0.0), (0.0, 0.0)]), vec![1.0, 0.0], 0.0).unwrap();
        for (t, s) in [(0.5, 2.0), (3.0, 1.0), (5.5, 5.0)] {
            let p = gromov_product(&d, &f.at(t), &g.at(s), &CPoint::zeros(2), &cfg).unwrap();
            assert!(p.abs() < 1e-9, "{p}");
        }
    }

    #[test]
    fn rays_are_unit_speed_and_shifted_rays_stay_close() {
        let cfg = MetricConfig::default();
        let d = Domain::UnitDisc;
        let p = CPoint::scalar(C64::from_polar(1.0, 0.7));
        let a = Ray::radial(d.clone(), p.clone()).unwrap();
        let k = evaluate_distance(&d, &a.at(0.4), &a.at(2.9), &cfg).unwrap().center();
        assert!((k - 2.5).abs() < 1e-12);
        let b = Ray::new(d, p, vec![1.0], 1.0).unwrap();
        let sep = ray_separation(&a, &b, &[2.0, 4.0, 8.0], &cfg).unwrap();
        assert!(sep.iter().all(|s| *s <= 1.0 + 1e-6), "{sep:?}");
    }
}
