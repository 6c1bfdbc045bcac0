use rand::Rng;

use super::cluster::{tail_clusters, TailCluster};
use super::horosphere::{disc_horo_level, PreparedHorosphere};
use super::sequence::PointSequence;
use super::tail::{TailEstimate, Verdict};
use crate::config::MetricConfig;
use crate::error::{HoroError, Result};
use crate::metric_core::Domain;
use crate::point::{CPoint, C64};
use crate::rng::seeded;

/// Depths of the cone points `x + (1 − ε)(p − x)`.
fn cone_depths() -> impl Iterator<Item = f64> {
    (1..=12).map(|k| 0.5f64.powi(k))
}

/// Candidate witnesses for nonemptiness of `E_x({u_n}, R)`: cone points at
/// each tail limit (aperture 2), coordinatewise corner points on product
/// domains, and points along early terms of the sequence.
pub(crate) fn witness_candidates(
    d: &Domain,
    x: &CPoint,
    seq: &PointSequence,
    clusters: &[TailCluster],
    cfg: &MetricConfig,
) -> Result<Vec<CPoint>> {
    let mut rng = seeded(cfg.seed, 0xAD_0155);
    let mut out = Vec::new();
    let band = cfg.merge_radius();
    let push = |z: CPoint, out: &mut Vec<CPoint>| {
        if d.closure_margin(&z) > 0.0 && z.is_finite() {
            out.push(z);
        }
    };
    for cl in clusters {
        let p = &cl.limit;
        for eps in cone_depths() {
            let base = x.lerp(p, 1.0 - eps);
            push(base.clone(), &mut out);
            let scale = eps * p.dist(x);
            for _ in 0..2 {
                let dir = CPoint::from_real(&crate::metric_core::numeric::random_unit(&mut rng, 2 * d.dim()));
                push(&base + &dir.scale(scale * rng.gen::<f64>()), &mut out);
            }
        }
    }
    if let Domain::Polydisc(n) = d {
        // one circle point per coordinate, drawn from the limits
        let mut per_coord: Vec<Vec<C64>> = vec![Vec::new(); *n];
        for cl in clusters {
            for j in 0..*n {
                let z = cl.limit[j];
                if 1.0 - z.norm() <= band && !per_coord[j].iter().any(|q| (q - z).norm() <= band) {
                    per_coord[j].push(z / z.norm());
                }
            }
        }
        let choices: Vec<Vec<C64>> =
            per_coord.into_iter().enumerate().map(|(j, v)| if v.is_empty() { vec![x[j]] } else { v }).collect();
        let mut combos: Vec<Vec<C64>> = vec![Vec::new()];
        for opts in &choices {
            combos = combos
                .into_iter()
                .flat_map(|pre| opts.iter().map(move |o| [pre.clone(), vec![*o]].concat()))
                .take(64)
                .collect();
        }
        for combo in combos {
            let q = CPoint(combo);
            for eps in cone_depths() {
                push(x.lerp(&q, 1.0 - eps), &mut out);
            }
        }
    }
    let mut probe = cfg.probe_indices();
    if let Some(l) = seq.len() {
        probe = (1..=8).map(|k| (l * k / 10).max(1)).collect();
    }
    for m in probe {
        let u = seq.point(m)?;
        for t in [0.5, 0.9, 1.0] {
            push(x.lerp(&u, t), &mut out);
        }
    }
    Ok(out)
}

/// Radius below which the two disc horospheres (base `x`) tangent at `a`
/// and `b` are disjoint, using `E_x(ζ, R) = E_0(ζ, R·P(ζ, x))`.
fn disc_disjoint(a: C64, b: C64, x: C64, radius: f64) -> bool {
    let ra = radius * disc_horo_level(a, x);
    let rb = radius * disc_horo_level(b, x);
    let ca = a / (ra + 1.0);
    let cb = b / (rb + 1.0);
    (ca - cb).norm() >= ra / (ra + 1.0) + rb / (rb + 1.0)
}

/// Admissibility: escape of `K(x, u_n)` and a witness in `E_x({u_n}, R)`
/// for every grid radius.
pub fn is_admissible(d: &Domain, x: &CPoint, seq: &PointSequence, cfg: &MetricConfig) -> Result<Verdict> {
    if &seq.domain != d {
        return Err(HoroError::InvalidArgument("sequence lives in a different domain".into()));
    }
    let prep = PreparedHorosphere::new(x, seq, cfg)?;
    let window = prep.window();
    let base: [Vec<f64>; 3] = std::array::from_fn(|k| prep.base_values()[k].iter().map(|v| v.lower()).collect());
    let escape = TailEstimate::from_windows(&base, cfg.tol);
    let gap = if seq.len().is_some() { cfg.tol } else { 10.0 * cfg.tol };
    if !escape.escaping(gap) {
        return Ok(Verdict::decided(
            false,
            escape.minima[2],
            escape.minima[2] - escape.minima[1],
            format!("K(x, u_n) does not escape: window minima {:?}", escape.minima),
        )
        .with_window(window));
    }
    let (clusters, _) = tail_clusters(prep.tail_points(), cfg.merge_radius());
    let candidates = witness_candidates(d, x, seq, &clusters, cfg)?;
    let mut cache: Vec<Option<super::horosphere::HoroEstimate>> = vec![None; candidates.len()];
    let mut covered = 0usize;
    let mut certified_empty = Vec::new();
    let mut missing = Vec::new();
    let mut worst_margin = f64::INFINITY;
    for &r in &cfg.r_grid {
        let mut found = None;
        for (i, w) in candidates.iter().enumerate() {
            if cache[i].is_none() {
                cache[i] = Some(prep.estimate(w)?);
            }
            let v = prep.verdict(cache[i].as_ref().unwrap(), r);
            if v.is_true() {
                found = Some(v.margin);
                break;
            }
        }
        match found {
            Some(m) => {
                covered += 1;
                worst_margin = worst_margin.min(m);
            }
            None => {
                let boundary: Vec<C64> = clusters
                    .iter()
                    .filter(|c| c.limit.dim() == 1 && 1.0 - c.limit[0].norm() <= cfg.merge_radius())
                    .map(|c| c.limit[0] / c.limit[0].norm())
                    .collect();
                let cert = *d == Domain::UnitDisc
                    && boundary.iter().enumerate().any(|(i, a)| {
                        boundary[i + 1..].iter().any(|b| disc_disjoint(*a, *b, x[0], r))
                    });
                if cert {
                    certified_empty.push(r);
                } else {
                    missing.push(r);
                }
            }
        }
    }
    let n = cfg.r_grid.len() as f64;
    let coverage = covered as f64 / n;
    let v = if covered == cfg.r_grid.len() {
        Verdict::decided(true, coverage, worst_margin, format!("witnesses found for all {} radii", covered))
    } else if !certified_empty.is_empty() {
        Verdict::decided(
            false,
            coverage,
            -1.0,
            format!("horospheres certified empty for R in {certified_empty:?} (disjoint horodiscs at tail limits)"),
        )
    } else {
        Verdict::inconclusive(coverage, 0.0, format!("no witness found for R in {missing:?}"))
    };
    Ok(v.with_window(window))
}
