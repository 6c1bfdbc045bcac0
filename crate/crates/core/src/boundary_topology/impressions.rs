use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{same_domain, BoundaryClass, ClusterSet};
use crate::config::MetricConfig;
use crate::error::Result;
use crate::horospheres::cluster::{greedy_clusters, tail_clusters};
use crate::horospheres::{Outcome, PreparedHorosphere};
use crate::metric_core::numeric::random_unit;
use crate::metric_core::sampling::log_uniform;
use crate::metric_core::Domain;
use crate::point::{CPoint, C64};
use crate::rng::seeded;

/// Smallest horosphere radius probed; below it the tail window no longer
/// resolves membership of points at the required depth.
const RADIUS_FLOOR: f64 = 2e-3;
/// Shallowest depth of sampled points, for the same reason.
const DEPTH_FLOOR: f64 = 5e-4;

/// Product horospheres need `n · R · δ ≫ 1` before the tail term that
/// realizes the limsup dominates, so the floor radius and depth dictate a
/// deeper tail than the config default.
fn deep_tail(cfg: &MetricConfig) -> MetricConfig {
    let need = (8.0 / (RADIUS_FLOOR * DEPTH_FLOOR)) as usize;
    MetricConfig { tail_start: cfg.tail_start.max(need), ..cfg.clone() }
}

/// The config grid continued geometrically down to the floor.
fn shrinking_grid(cfg: &MetricConfig) -> Vec<f64> {
    let mut g = cfg.r_grid.clone();
    let mut r = g[0];
    while r > RADIUS_FLOOR {
        r = (r * 0.4).max(RADIUS_FLOOR);
        g.insert(0, r);
    }
    g
}

/// Points near the boundary adapted to horospheres of radius `r`: the
/// tangential spread at depth `ε` is of order `sqrt(r ε)`.
fn layer_pool(d: &Domain, limits: &[CPoint], r: f64, count: usize, seed: u64) -> Vec<CPoint> {
    let mut rng = seeded(seed, 0x1A7E + (r.to_bits() & 0xffff));
    let depth_hi = (2.0 * r).min(0.5).max(2.0 * DEPTH_FLOOR);
    if let Domain::Polydisc(n) = d {
        let anchors: Vec<Vec<C64>> = (0..*n)
            .map(|j| {
                limits.iter().map(|p| p[j]).filter(|z| z.norm() > 1.0 - 0.1).map(|z| z / z.norm()).collect()
            })
            .collect();
        return (0..count)
            .map(|_| {
                CPoint(
                    anchors
                        .iter()
                        .map(|a| {
                            if a.is_empty() || rng.gen::<f64>() < 0.5 {
                                C64::from_polar(rng.gen::<f64>().sqrt(), std::f64::consts::TAU * rng.gen::<f64>())
                            } else {
                                let q = a[rng.gen_range(0..a.len())];
                                let eps = log_uniform(&mut rng, DEPTH_FLOOR, depth_hi);
                                let spread = (2.0 * r * eps).sqrt();
                                q * C64::from_polar(1.0 - eps, spread * (2.0 * rng.gen::<f64>() - 1.0))
                            }
                        })
                        .collect(),
                )
            })
            .collect();
    }
    (0..count)
        .map(|_| {
            if limits.is_empty() || rng.gen::<f64>() < 0.15 {
                d.sample_point(&mut rng)
            } else {
                let p = &limits[rng.gen_range(0..limits.len())];
                d.sample_near(p, DEPTH_FLOOR, depth_hi, &mut rng)
            }
        })
        .collect()
}

/// Whether the tail runs off to infinity (unbounded kinds only).
fn escapes(d: &Domain, h: &PreparedHorosphere) -> bool {
    if d.is_bounded() {
        return false;
    }
    let mean = |k: usize| {
        let pts = &h.tail_points()[k];
        pts.iter().map(CPoint::norm).sum::<f64>() / pts.len() as f64
    };
    mean(2) > 100.0 && mean(2) > 1.5 * mean(0)
}

fn finite_limits(h: &PreparedHorosphere, cfg: &MetricConfig) -> Vec<CPoint> {
    let (cl, _) = tail_clusters(h.tail_points(), cfg.merge_radius());
    cl.into_iter().map(|c| c.limit).filter(|p| p.norm() < 1e3).collect()
}

/// Members of the horosphere of radius `r` close to the boundary, projected
/// onto it.
fn boundary_members(
    d: &Domain,
    h: &PreparedHorosphere,
    limits: &[CPoint],
    r: f64,
    cfg: &MetricConfig,
) -> Result<Vec<CPoint>> {
    let cap = (2.0 * r).clamp(2.0 * DEPTH_FLOOR, 0.05);
    let mut out = Vec::new();
    for w in layer_pool(d, limits, r, 4 * cfg.samples, cfg.seed) {
        if d.boundary_distance(&w)? > cap {
            continue;
        }
        if h.contains(&w, r)?.is_true() {
            out.push(d.nearest_boundary_point(&w)?);
        }
    }
    Ok(out)
}

fn cluster_centers(points: &[CPoint], cfg: &MetricConfig) -> Vec<CPoint> {
    greedy_clusters(points, cfg.merge_radius()).into_iter().map(|c| c.center).collect()
}

/// Boundary spread of the members at one radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusSpread {
    pub radius: f64,
    pub members: usize,
    pub clusters: usize,
    /// Hausdorff distance between this radius' boundary points and the
    /// final set; it shrinks to the sampling resolution as the radius does.
    pub hausdorff_to_final: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrincipalPart {
    pub set: ClusterSet,
    pub outcome: Outcome,
    pub radii: Vec<RadiusSpread>,
}

/// Intersection over radii of the boundary parts of the horosphere
/// closures. The horospheres are nested, so the intersection is read off at
/// the smallest radius that the tail window still resolves.
pub fn principal_part_estimate(d: &Domain, x: &CPoint, cls: &BoundaryClass, cfg: &MetricConfig) -> Result<PrincipalPart> {
    same_domain(d, &cls.representative)?;
    let cfg = &deep_tail(cfg);
    let h = PreparedHorosphere::new(x, &cls.representative, cfg)?;
    let limits = finite_limits(&h, cfg);
    let grid = shrinking_grid(cfg);
    let per_radius: Vec<(f64, Vec<CPoint>)> =
        grid.iter().map(|&r| Ok((r, boundary_members(d, &h, &limits, r, cfg)?))).collect::<Result<_>>()?;
    let smallest = &per_radius[0].1;
    let set = ClusterSet {
        points: cluster_centers(smallest, cfg),
        escapes_to_infinity: escapes(d, &h),
        probes: smallest.len(),
    };
    let radii = per_radius
        .iter()
        .map(|(r, pts)| {
            let s = ClusterSet { points: cluster_centers(pts, cfg), escapes_to_infinity: false, probes: pts.len() };
            RadiusSpread { radius: *r, members: pts.len(), clusters: s.points.len(), hausdorff_to_final: s.hausdorff(&set) }
        })
        .collect();
    let outcome = if set.points.is_empty() && !set.escapes_to_infinity { Outcome::Inconclusive } else { Outcome::Decided };
    Ok(PrincipalPart { set, outcome, radii })
}

/// Cluster points of a probe battery converging to the class: the
/// horosphere-interior probes of the principal part, radial probes to the
/// tail limits and tangential probes sliding into them.
pub fn impression_estimate(d: &Domain, x: &CPoint, cls: &BoundaryClass, cfg: &MetricConfig) -> Result<ClusterSet> {
    same_domain(d, &cls.representative)?;
    let cfg = &deep_tail(cfg);
    let h = PreparedHorosphere::new(x, &cls.representative, cfg)?;
    let limits = finite_limits(&h, cfg);
    let mut probes = boundary_members(d, &h, &limits, shrinking_grid(cfg)[0], cfg)?;
    let mut rng = seeded(cfg.seed, 0x1A9E);
    let c = d.center();
    for p in &limits {
        let eps: f64 = 1e-6;
        let radial = c.lerp(p, 1.0 - eps);
        if d.contains(&radial)? {
            probes.push(d.nearest_boundary_point(&radial)?);
        }
        for _ in 0..8 {
            let u = CPoint::from_real(&random_unit(&mut rng, 2 * d.dim()));
            let z = &radial + &u.scale(0.5 * eps.sqrt());
            if d.contains(&z)? {
                probes.push(d.nearest_boundary_point(&z)?);
            }
        }
    }
    Ok(ClusterSet { points: cluster_centers(&probes, cfg), escapes_to_infinity: escapes(d, &h), probes: probes.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::horospheres::{PointSequence, SeqLabel};

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    #[test]
    fn disc_and_ball_are_singletons() {
        let cfg = MetricConfig::default();
        let c = BoundaryClass::trusted(PointSequence::radial(Domain::UnitDisc, CPoint::real(1.0)).unwrap());
        let pp = principal_part_estimate(&Domain::UnitDisc, &CPoint::real(0.0), &c, &cfg).unwrap();
        assert!(pp.set.is_singleton(), "{pp:?}");
        assert!(pp.set.points[0].dist(&CPoint::real(1.0)) < 1e-2);
        let im = impression_estimate(&Domain::UnitDisc, &CPoint::real(0.0), &c, &cfg).unwrap();
        assert!(im.is_singleton() && im.hausdorff(&pp.set) < 1e-2, "{im:?}");
        let b = Domain::UnitBall(2);
        let c = BoundaryClass::trusted(PointSequence::radial(b.clone(), CPoint::from_pairs(&[(1.0, 0.0), (0.0, 0.0)])).unwrap());
        let im = impression_estimate(&b, &CPoint::zeros(2), &c, &cfg).unwrap();
        assert!(im.is_singleton(), "{im:?}");
    }

    #[test]
    fn bidisc_principal_parts() {
        let cfg = MetricConfig::default();
        let d = Domain::Polydisc(2);
        let x = CPoint::zeros(2);
        let inter = PointSequence::bidisc(SeqLabel::Interleaved {
            a: Box::new(SeqLabel::BidiscW3 { p: one() }),
            b: Box::new(SeqLabel::BidiscW2 { p: one() }),
        })
        .unwrap();
        let pp = principal_part_estimate(&d, &x, &BoundaryClass::trusted(inter), &cfg).unwrap();
        let corner = CPoint::from_pairs(&[(1.0, 0.0), (1.0, 0.0)]);
        assert!(!pp.set.points.is_empty());
        assert!(pp.set.points.iter().all(|p| p.dist(&corner) < 1e-2), "{pp:?}");
        let w3 = PointSequence::bidisc(SeqLabel::BidiscW3 { p: one() }).unwrap();
        let pp = principal_part_estimate(&d, &x, &BoundaryClass::trusted(w3), &cfg).unwrap();
        assert!(pp.set.points.iter().all(|p| (p[1] - one()).norm() < 1e-2));
        assert!(pp.set.points.len() > 50);
        let mut bins = vec![false; 100];
        for p in &pp.set.points {
            bins[(((p[0].re + 1.0) / 0.02) as usize).min(99)] = true;
        }
        assert!(bins.iter().filter(|b| **b).count() >= 90);
    }
}
