use rand::Rng;

use crate::config::MetricConfig;
use crate::error::{HoroError, Result};
use crate::metric_core::models::ball_involution;
use crate::metric_core::numeric::{golden_min, grid_golden_min, random_unit};
use crate::metric_core::{distance, Domain};
use crate::point::{CPoint, C64};
use crate::rng::seeded;

/// Unit-speed geodesic segment between two points, for kinds with explicit
/// geodesics.
#[derive(Clone, Debug, PartialEq)]
pub enum Geodesic {
    /// Image of the radial segment `u tanh s` under the involution
    /// exchanging `0` and `start`; covers the disc as the 1-dimensional ball.
    Ball { start: CPoint, dir: CPoint, length: f64 },
    /// Coordinatewise disc geodesics, synchronized so that the slowest
    /// coordinate sets the pace.
    Polydisc { coords: Vec<Geodesic>, length: f64 },
}

impl Geodesic {
    pub fn between(d: &Domain, a: &CPoint, b: &CPoint) -> Result<Geodesic> {
        match d {
            Domain::UnitDisc | Domain::UnitBall(_) => {
                let w = ball_involution(a, b);
                let r = w.norm();
                let dir = if r == 0.0 { CPoint::zeros(a.dim()) } else { w.scale(1.0 / r) };
                Ok(Geodesic::Ball { start: a.clone(), dir, length: distance(d, a, b)? })
            }
            Domain::Polydisc(_) => {
                let coords = a
                    .0
                    .iter()
                    .zip(&b.0)
                    .map(|(x, y)| Geodesic::between(&Domain::UnitDisc, &CPoint::scalar(*x), &CPoint::scalar(*y)))
                    .collect::<Result<Vec<_>>>()?;
                let length = coords.iter().map(Geodesic::length).fold(0.0, f64::max);
                Ok(Geodesic::Polydisc { coords, length })
            }
            _ => Err(HoroError::Unsupported { op: "geodesic", kind: d.kind_name().into() }),
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            Geodesic::Ball { length, .. } | Geodesic::Polydisc { length, .. } => *length,
        }
    }

    /// Point at invariant arc length `s ∈ [0, length]`.
    pub fn at(&self, s: f64) -> CPoint {
        match self {
            Geodesic::Ball { start, dir, .. } => ball_involution(start, &dir.scale(s.tanh())),
            Geodesic::Polydisc { coords, length } => {
                let f = if *length == 0.0 { 0.0 } else { s / length };
                CPoint(coords.iter().map(|g| g.at(f * g.length())[0]).collect())
            }
        }
    }
}

fn distance_to_side(d: &Domain, p: &CPoint, g: &Geodesic) -> f64 {
    let f = |s: f64| distance(d, p, &g.at(s)).unwrap_or(f64::INFINITY);
    grid_golden_min(f, 0.0, g.length(), 24, 1e-9).1
}

/// Largest distance from a point of one side to the union of the other two
/// sides, over the three sides.
pub fn triangle_thinness(d: &Domain, a: &CPoint, b: &CPoint, c: &CPoint) -> Result<f64> {
    let sides = [Geodesic::between(d, a, b)?, Geodesic::between(d, b, c)?, Geodesic::between(d, c, a)?];
    let mut worst = 0.0f64;
    for i in 0..3 {
        let g = &sides[i];
        let others = [&sides[(i + 1) % 3], &sides[(i + 2) % 3]];
        let gap = |s: f64| {
            let p = g.at(s);
            others.iter().map(|o| distance_to_side(d, &p, o)).fold(f64::INFINITY, f64::min)
        };
        let len = g.length();
        if len == 0.0 {
            continue;
        }
        let grid = 32;
        let vals: Vec<f64> = (0..=grid).map(|k| gap(len * k as f64 / grid as f64)).collect();
        let (k, _) = vals.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (k, v)| if *v > acc.1 { (k, *v) } else { acc });
        let lo = len * (k.saturating_sub(1)) as f64 / grid as f64;
        let hi = len * ((k + 1).min(grid)) as f64 / grid as f64;
        let (_, neg) = golden_min(|s| -gap(s), lo, hi, 1e-7);
        worst = worst.max(vals[k]).max(-neg);
    }
    Ok(worst)
}

/// A vertex at invariant distance `scale` from the origin.
fn vertex(d: &Domain, scale: f64, rng: &mut impl Rng) -> CPoint {
    match d {
        Domain::Polydisc(n) => {
            let lead = rng.gen_range(0..*n);
            CPoint(
                (0..*n)
                    .map(|j| {
                        let s = if j == lead { scale } else { scale * rng.gen::<f64>() };
                        C64::from_polar(s.tanh(), std::f64::consts::TAU * rng.gen::<f64>())
                    })
                    .collect(),
            )
        }
        _ => CPoint::from_real(&random_unit(rng, 2 * d.dim())).scale(scale.tanh()),
    }
}

/// Maximum thinness over sampled triangles whose vertices lie at invariant
/// distance `scale` from the origin.
pub fn delta_hyperbolicity_estimate(d: &Domain, scale: f64, cfg: &MetricConfig) -> Result<f64> {
    if !matches!(d, Domain::UnitDisc | Domain::UnitBall(_) | Domain::Polydisc(_)) {
        return Err(HoroError::Unsupported { op: "geodesic triangles", kind: d.kind_name().into() });
    }
    if !(scale > 0.0) {
        return Err(HoroError::InvalidArgument("scale must be positive".into()));
    }
    let mut rng = seeded(cfg.seed, 0xDE17A);
    let triangles = (cfg.samples / 4).max(20);
    let mut worst = 0.0f64;
    for _ in 0..triangles {
        let (a, b, c) = (vertex(d, scale, &mut rng), vertex(d, scale, &mut rng), vertex(d, scale, &mut rng));
        worst = worst.max(triangle_thinness(d, &a, &b, &c)?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geodesics_are_unit_speed() {
        let cases = [
            (Domain::UnitDisc, CPoint::from_pairs(&[(0.3, -0.4)]), CPoint::from_pairs(&[(-0.8, 0.1)])),
            (Domain::UnitBall(2), CPoint::from_pairs(&[(0.3, -0.4), (0.1, 0.0)]), CPoint::from_pairs(&[(-0.5, 0.1), (0.0, 0.6)])),
            (Domain::Polydisc(2), CPoint::from_pairs(&[(0.3, -0.4), (0.1, 0.0)]), CPoint::from_pairs(&[(-0.5, 0.1), (0.0, 0.9)])),
        ];
        for (d, a, b) in cases {
            let g = Geodesic::between(&d, &a, &b).unwrap();
            assert!(g.at(0.0).dist(&a) < 1e-12 && g.at(g.length()).dist(&b) < 1e-12);
            let (s, t) = (0.2 * g.length(), 0.7 * g.length());
            assert!((distance(&d, &g.at(s), &g.at(t)).unwrap() - (t - s)).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_triangle_is_thin() {
        let d = Domain::UnitDisc;
        let a = CPoint::from_pairs(&[(0.5, 0.1)]);
        let b = CPoint::from_pairs(&[(-0.3, 0.6)]);
        assert!(triangle_thinness(&d, &a, &a, &b).unwrap() < 1e-6);
    }
}
