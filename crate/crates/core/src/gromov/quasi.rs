use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::MetricConfig;
use crate::error::{HoroError, Result};
use crate::horospheres::Verdict;
use crate::metric_core::{evaluate_distance, DistanceValue, Domain};
use crate::point::{CPoint, C64};
use crate::rng::seeded;

/// A curve on `[0, 1]`, re-parametrized by invariant arc length before use.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "curve", content = "params", rename_all = "snake_case")]
pub enum Curve {
    Segment { from: CPoint, to: CPoint },
    /// Arc of the circle `center + radius e^{iθ}` in the first coordinate,
    /// other coordinates zero.
    CircularArc { center: C64, radius: f64, start: f64, end: f64, dim: usize },
    Polyline { points: Vec<CPoint> },
}

impl Curve {
    pub fn at(&self, u: f64) -> CPoint {
        match self {
            Curve::Segment { from, to } => from.lerp(to, u),
            Curve::CircularArc { center, radius, start, end, dim } => {
                let mut z = CPoint::zeros(*dim);
                z.0[0] = center + C64::from_polar(*radius, start + (end - start) * u);
                z
            }
            Curve::Polyline { points } => {
                let k = points.len() - 1;
                let x = u.clamp(0.0, 1.0) * k as f64;
                let i = (x.floor() as usize).min(k.saturating_sub(1));
                points[i].lerp(&points[(i + 1).min(k)], x - i as f64)
            }
        }
    }
}

/// Cumulative invariant length on a fine uniform grid of the curve
/// parameter, summing chord distances.
struct ArcLength {
    u: Vec<f64>,
    s: Vec<f64>,
}

const FINE: usize = 2048;

impl ArcLength {
    fn new(d: &Domain, c: &Curve, cfg: &MetricConfig) -> Result<ArcLength> {
        if let Curve::Polyline { points } = c {
            if points.len() < 2 {
                return Err(HoroError::InvalidArgument("polyline needs two points".into()));
            }
        }
        let u: Vec<f64> = (0..=FINE).map(|k| k as f64 / FINE as f64).collect();
        let pts: Vec<CPoint> = u.iter().map(|&t| c.at(t)).collect();
        let mut s = vec![0.0];
        for w in pts.windows(2) {
            let step = evaluate_distance(d, &w[0], &w[1], cfg)?.upper();
            let next = s.last().unwrap() + step;
            if !next.is_finite() || next < *s.last().unwrap() {
                return Err(HoroError::NonConvergent("arc length is not monotone".into()));
            }
            s.push(next);
        }
        Ok(ArcLength { u, s })
    }

    fn total(&self) -> f64 {
        *self.s.last().unwrap()
    }

    /// Curve parameter at arc length `t`.
    fn param(&self, t: f64) -> f64 {
        let i = self.s.partition_point(|v| *v < t).clamp(1, self.s.len() - 1);
        let (s0, s1) = (self.s[i - 1], self.s[i]);
        let f = if s1 > s0 { ((t - s0) / (s1 - s0)).clamp(0.0, 1.0) } else { 0.0 };
        self.u[i - 1] + f * (self.u[i] - self.u[i - 1])
    }
}

/// Pairs of arc-length parameters with their distances.
fn sampled_pairs(d: &Domain, c: &Curve, arc: &ArcLength, cfg: &MetricConfig) -> Result<Vec<(f64, DistanceValue)>> {
    let total = arc.total();
    let mut rng = seeded(cfg.seed, 0x0A5E);
    let mut ts: Vec<(f64, f64)> = vec![(0.0, total)];
    for _ in 0..cfg.samples.min(200) {
        ts.push((total * rng.gen::<f64>(), total * rng.gen::<f64>()));
    }
    ts.iter()
        .map(|&(t, t2)| {
            let v = evaluate_distance(d, &c.at(arc.param(t)), &c.at(arc.param(t2)), cfg)?;
            Ok(((t - t2).abs(), v))
        })
        .collect()
}

/// Checks `|t − t'|/A − B ≤ d(γ(t), γ(t')) ≤ A|t − t'| + B` on sampled
/// pairs of the arc-length parametrization. The margin is the worst slack.
pub fn quasi_geodesic_check(d: &Domain, curve: &Curve, a: f64, b: f64, cfg: &MetricConfig) -> Result<Verdict> {
    if !(a >= 1.0) || !(b > 0.0) {
        return Err(HoroError::InvalidArgument("need A >= 1 and B > 0".into()));
    }
    let arc = ArcLength::new(d, curve, cfg)?;
    let pairs = sampled_pairs(d, curve, &arc, cfg)?;
    let mut certain = f64::INFINITY;
    let mut optimistic = f64::INFINITY;
    let mut worst_gap = 0.0;
    for (gap, v) in &pairs {
        let lo = |dist: f64| dist - (gap / a - b);
        let hi = |dist: f64| a * gap + b - dist;
        let c = lo(v.lower()).min(hi(v.upper()));
        if c < certain {
            certain = c;
            worst_gap = *gap;
        }
        optimistic = optimistic.min(lo(v.upper()).max(f64::NEG_INFINITY).min(hi(v.lower())));
    }
    let detail = format!("length {:.6}, {} pairs, worst slack at gap {:.4}", arc.total(), pairs.len(), worst_gap);
    let v = if certain >= -cfg.tol {
        Verdict::decided(true, arc.total(), certain, detail)
    } else if optimistic < -cfg.tol {
        Verdict::decided(false, arc.total(), certain, detail)
    } else {
        let mut v = Verdict::inconclusive(arc.total(), certain, detail);
        v.outcome = crate::horospheres::Outcome::Undecidable;
        v
    };
    Ok(v)
}

/// Smallest multiplicative constant for each additive constant on a grid;
/// the reported pair minimizes `A + B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiFit {
    pub a: f64,
    pub b: f64,
    pub length: f64,
    pub frontier: Vec<(f64, f64)>,
}

pub fn fit_quasi_geodesic(d: &Domain, curve: &Curve, cfg: &MetricConfig) -> Result<QuasiFit> {
    let arc = ArcLength::new(d, curve, cfg)?;
    let pairs = sampled_pairs(d, curve, &arc, cfg)?;
    let bs = [0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0];
    let frontier: Vec<(f64, f64)> = bs
        .iter()
        .map(|&b| {
            let a = pairs.iter().fold(1.0f64, |acc, (gap, v)| {
                let need_lo = if v.lower() + b > 0.0 { gap / (v.lower() + b) } else { f64::INFINITY };
                let need_hi = if *gap > 0.0 { (v.upper() - b) / gap } else if v.upper() > b { f64::INFINITY } else { 1.0 };
                acc.max(need_lo).max(need_hi)
            });
            (a, b)
        })
        .collect();
    let (a, b) = frontier.iter().cloned().fold((f64::INFINITY, 0.0), |best, p| if p.0 + p.1 < best.0 + best.1 { p } else { best });
    Ok(QuasiFit { a, b, length: arc.total(), frontier })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_segment_is_geodesic() {
        let cfg = MetricConfig::default();
        let c = Curve::Segment { from: CPoint::real(0.0), to: CPoint::real(0.99) };
        let v = quasi_geodesic_check(&Domain::UnitDisc, &c, 1.0, 1e-3, &cfg).unwrap();
        assert!(v.is_true(), "{v:?}");
        assert!((v.estimate - 0.5 * 199f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn arc_near_boundary_needs_large_constants() {
        let cfg = MetricConfig::default();
        let c = Curve::CircularArc { center: C64::new(0.0, 0.0), radius: 0.99, start: 0.0, end: 1.5, dim: 1 };
        let v = quasi_geodesic_check(&Domain::UnitDisc, &c, 1.0, 0.1, &cfg).unwrap();
        assert!(v.is_false(), "{v:?}");
        let fit = fit_quasi_geodesic(&Domain::UnitDisc, &c, &cfg).unwrap();
        assert!(fit.a.is_finite() && fit.a > 1.0);
        assert!(quasi_geodesic_check(&Domain::UnitDisc, &c, fit.a * 1.01, fit.b, &cfg).unwrap().is_true());
    }

    #[test]
    fn parabolic_segment_to_boundary() {
        let cfg = MetricConfig::default();
        let c = Curve::Segment {
            from: CPoint::from_pairs(&[(1.0, 0.0), (0.0, 0.0)]),
            to: CPoint::from_pairs(&[(1e-3, 0.0), (0.0, 0.0)]),
        };
        let fit = fit_quasi_geodesic(&Domain::ParabolicConvex, &c, &cfg).unwrap();
        assert!(fit.a.is_finite());
        assert!(quasi_geodesic_check(&Domain::ParabolicConvex, &c, fit.a * 1.01, fit.b, &cfg).unwrap().is_true());
    }
}
