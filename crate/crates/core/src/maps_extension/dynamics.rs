use rand::Rng;
use serde::{Deserialize, Serialize};

use super::MapSpec;
use crate::boundary_topology::ClusterSet;
use crate::config::MetricConfig;
use crate::error::{HoroError, Result};
use crate::horospheres::cluster::greedy_clusters;
use crate::horospheres::{Outcome, PointSequence, PreparedHorosphere, SeqLabel, Verdict};
use crate::metric_core::Domain;
use crate::point::CPoint;
use crate::rng::seeded;

/// Orbits stop once this close to the boundary.
const BOUNDARY_STOP: f64 = 1e-12;
/// A final depth above this means the orbit did not leave compacta.
const STAGNATION_DEPTH: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitSummary {
    pub start: CPoint,
    pub steps: usize,
    pub last: CPoint,
    pub depth: f64,
    /// Boundary point the orbit tends to, if it escaped.
    pub limit: Option<CPoint>,
    /// The iterates, starting point first.
    pub path: Vec<CPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenjoyReport {
    pub target: ClusterSet,
    pub invariance: Verdict,
    pub orbits: Vec<OrbitSummary>,
    /// Some orbit stayed in a compact set: `f` likely has an interior fixed
    /// point, which the iteration assumes away.
    pub stagnated: bool,
}

impl DenjoyReport {
    /// Largest Euclidean distance between the limits of two orbits.
    pub fn limit_spread(&self) -> f64 {
        let lims: Vec<&CPoint> = self.orbits.iter().filter_map(|o| o.limit.as_ref()).collect();
        let mut worst = 0.0f64;
        for (i, a) in lims.iter().enumerate() {
            for b in &lims[i + 1..] {
                worst = worst.max(a.dist(b));
            }
        }
        worst
    }
}

fn iterate(d: &Domain, f: &MapSpec, z0: &CPoint, max_steps: usize) -> Result<OrbitSummary> {
    let mut orbit = vec![z0.clone()];
    let mut z = z0.clone();
    let mut depth = d.boundary_distance(&z)?;
    let mut steps = 0;
    while steps < max_steps && depth >= BOUNDARY_STOP {
        let next = f.forward(&z)?;
        if !d.contains(&next)? {
            return Err(HoroError::InvalidArgument("the map leaves the domain".into()));
        }
        let step = next.dist(&z);
        z = next;
        steps += 1;
        depth = d.boundary_distance(&z)?;
        orbit.push(z.clone());
        if step < 1e-14 {
            break;
        }
    }
    let limit = if depth <= STAGNATION_DEPTH { Some(boundary_trend(d, &orbit)?) } else { None };
    Ok(OrbitSummary { start: z0.clone(), steps, last: z, depth, limit, path: orbit })
}

/// Aitken extrapolation of the last three iterates, coordinatewise.
/// Complex-tangential coordinates of a ball orbit only decay like the
/// square root of the depth, so the last iterate alone is too coarse.
fn trend(orbit: &[CPoint]) -> CPoint {
    let n = orbit.len();
    if n < 3 {
        return orbit[n - 1].clone();
    }
    let (a, b, c) = (&orbit[n - 3], &orbit[n - 2], &orbit[n - 1]);
    CPoint(
        (0..c.dim())
            .map(|j| {
                let (d1, d2) = (c[j] - b[j], c[j] - 2.0 * b[j] + a[j]);
                let corr = if d2.norm() > 0.0 { d1 * d1 / d2 } else { d1 * 0.0 };
                if corr.is_finite() && corr.norm() <= 100.0 * d1.norm() {
                    c[j] - corr
                } else {
                    c[j]
                }
            })
            .collect(),
    )
}

/// Boundary point nearest the extrapolated trend. An extrapolation that
/// overshoots is pulled back to where the segment from the last iterate
/// crosses the boundary.
fn boundary_trend(d: &Domain, orbit: &[CPoint]) -> Result<CPoint> {
    let last = orbit.last().expect("orbit has its start");
    let t = trend(orbit);
    if d.contains(&t)? {
        return d.nearest_boundary_point(&t);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if d.contains(&last.lerp(&t, mid))? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(last.lerp(&t, hi))
}

/// Checks `f(E) ⊂ E` for the horospheres generated by the orbit itself:
/// every sampled `w` decided inside `E(R)` must not have `f(w)` decided
/// outside. Band samples are skipped.
fn invariance(d: &Domain, f: &MapSpec, x: &CPoint, orbit: &[CPoint], limit: Option<&CPoint>, cfg: &MetricConfig) -> Result<Verdict> {
    // the first terms are far from the tail and only slow the windows down
    let seq = PointSequence::new(d.clone(), SeqLabel::Explicit { points: orbit[1..].to_vec() })?;
    let h = match PreparedHorosphere::new(x, &seq, cfg) {
        Ok(h) => h,
        Err(e) => return Ok(Verdict::inconclusive(0.0, 0.0, format!("orbit too short for a horosphere: {e}"))),
    };
    let mut rng = seeded(cfg.seed, 0xD3);
    let count = cfg.samples.min(200);
    let (mut kept, mut broken, mut banded) = (0usize, 0usize, 0usize);
    let mut margin = f64::INFINITY;
    for _ in 0..count {
        let w = match limit {
            Some(p) if rng.gen::<f64>() < 0.75 => d.sample_near(p, 1e-3, 0.7, &mut rng),
            _ => d.sample_point(&mut rng),
        };
        let fw = f.forward(&w)?;
        let (ew, efw) = (h.estimate(&w)?, h.estimate(&fw)?);
        for &r in &cfg.r_grid {
            let vin = h.verdict(&ew, r);
            if vin.outcome != Outcome::Decided || !vin.decision {
                continue;
            }
            let vout = h.verdict(&efw, r);
            match (vout.outcome, vout.decision) {
                (Outcome::Decided, true) => {
                    kept += 1;
                    margin = margin.min(vout.margin);
                }
                (Outcome::Decided, false) => broken += 1,
                _ => banded += 1,
            }
        }
    }
    let detail = format!("{kept} images stayed inside, {broken} left, {banded} in the band");
    if kept + broken == 0 {
        return Ok(Verdict::inconclusive(0.0, 0.0, detail));
    }
    Ok(Verdict::decided(broken == 0, kept as f64 / (kept + broken) as f64, margin, detail).with_window(h.window()))
}

/// Iterates `f` from `z0` and four seeded alternates, clusters the orbit
/// limits, and tests horosphere invariance along the orbit of `z0`.
pub fn denjoy_wolff_iterate(d: &Domain, f: &MapSpec, z0: &CPoint, cfg: &MetricConfig) -> Result<DenjoyReport> {
    cfg.validate()?;
    if !d.contains(z0)? {
        return Err(HoroError::OutsideDomain);
    }
    let mut rng = seeded(cfg.seed, 0xD1);
    let mut starts = vec![z0.clone()];
    starts.extend((0..4).map(|_| d.sample_point(&mut rng)));
    let runs: Vec<Result<OrbitSummary>> = if cfg!(target_arch = "wasm32") {
        // no threads in the browser
        starts.iter().map(|z| iterate(d, f, z, cfg.samples)).collect()
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = starts.iter().map(|z| s.spawn(|| iterate(d, f, z, cfg.samples))).collect();
            handles.into_iter().map(|h| h.join().expect("orbit thread panicked")).collect()
        })
    };
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let stagnated = runs.iter().any(|o| o.limit.is_none());
    let limits: Vec<CPoint> = runs.iter().filter_map(|o| o.limit.clone()).collect();
    let target = ClusterSet {
        points: greedy_clusters(&limits, cfg.merge_radius()).into_iter().map(|c| c.center).collect(),
        escapes_to_infinity: false,
        probes: limits.len(),
    };
    let first = &runs[0];
    let invariance = if stagnated {
        Verdict::inconclusive(0.0, 0.0, "orbit stagnated; no boundary target")
    } else {
        invariance(d, f, &d.center(), &first.path, first.limit.as_ref(), cfg)?
    };
    Ok(DenjoyReport { target, invariance, orbits: runs, stagnated })
}
