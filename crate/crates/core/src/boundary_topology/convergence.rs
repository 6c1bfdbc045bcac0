use super::{same_domain, BoundaryClass};
use crate::config::MetricConfig;
use crate::error::{HoroError, Result};
use crate::horospheres::cluster::tail_clusters;
use crate::horospheres::{disc_horo_level, witness_candidates, HoroEstimate, Outcome, PreparedHorosphere, Verdict};
use crate::metric_core::Domain;
use crate::point::{CPoint, C64};

struct Prepared {
    horo: PreparedHorosphere,
    limits: Vec<CPoint>,
    witnesses: Vec<CPoint>,
}

fn prepare(d: &Domain, x: &CPoint, cls: &BoundaryClass, cfg: &MetricConfig) -> Result<Prepared> {
    same_domain(d, &cls.representative)?;
    let horo = PreparedHorosphere::new(x, &cls.representative, cfg)?;
    let (clusters, _) = tail_clusters(horo.tail_points(), cfg.merge_radius());
    let witnesses = witness_candidates(d, x, &cls.representative, &clusters, cfg)?;
    Ok(Prepared { horo, limits: clusters.into_iter().map(|c| c.limit).collect(), witnesses })
}

/// Cone points towards the midpoints of pairs of limits.
fn bridge_points(d: &Domain, x: &CPoint, a: &[CPoint], b: &[CPoint]) -> Vec<CPoint> {
    let mut out = Vec::new();
    for p in a {
        for q in b {
            let mut m = p.midpoint(q);
            if d.is_bounded() && matches!(d, Domain::UnitDisc | Domain::UnitBall(_)) && m.norm() > 0.0 {
                m = m.scale(1.0 / m.norm());
            }
            for k in 1..=12 {
                let z = x.lerp(&m, 1.0 - 0.5f64.powi(k));
                if d.closure_margin(&z) > 0.0 {
                    out.push(z);
                }
            }
        }
    }
    out
}

fn single_circle_point(limits: &[CPoint], cfg: &MetricConfig) -> Option<C64> {
    match limits {
        [p] if (1.0 - p[0].norm()).abs() <= cfg.merge_radius() => Some(p[0] / p[0].norm()),
        _ => None,
    }
}

/// For each grid radius: whether some candidate is a decided member of both
/// horospheres.
fn intersects(a: &Prepared, b: &Prepared, extra: &[CPoint], cfg: &MetricConfig) -> Result<Vec<bool>> {
    let mut est: Vec<(HoroEstimate, HoroEstimate)> = Vec::new();
    let mut found = vec![false; cfg.r_grid.len()];
    for w in a.witnesses.iter().chain(&b.witnesses).chain(extra) {
        est.push((a.horo.estimate(w)?, b.horo.estimate(w)?));
        let (ea, eb) = est.last().unwrap();
        for (i, &r) in cfg.r_grid.iter().enumerate() {
            if !found[i] && a.horo.verdict(ea, r).is_true() && b.horo.verdict(eb, r).is_true() {
                found[i] = true;
            }
        }
        if found.iter().all(|f| *f) {
            break;
        }
    }
    Ok(found)
}

/// Convergence of a list of classes to `target` in the horosphere topology:
/// for every grid radius the horospheres of all late classes meet the
/// target's horosphere. A late tail of at least `max(2, len/4)` classes is
/// required.
pub fn converges_h(
    d: &Domain,
    x: &CPoint,
    classes: &[BoundaryClass],
    target: &BoundaryClass,
    cfg: &MetricConfig,
) -> Result<Verdict> {
    if classes.is_empty() {
        return Err(HoroError::InvalidArgument("empty list of classes".into()));
    }
    let t = prepare(d, x, target, cfg)?;
    let mut cache: Vec<(&BoundaryClass, Vec<bool>, bool)> = Vec::new();
    let mut rows = Vec::with_capacity(classes.len());
    for c in classes {
        if let Some(hit) = cache.iter().find(|(k, _, _)| k.representative.label == c.representative.label) {
            rows.push((hit.1.clone(), hit.2));
            continue;
        }
        let p = prepare(d, x, c, cfg)?;
        let extra = bridge_points(d, x, &p.limits, &t.limits);
        let found = intersects(&p, &t, &extra, cfg)?;
        // on the disc, radius below which the two horodiscs are provably disjoint
        let certified = match (d, single_circle_point(&p.limits, cfg), single_circle_point(&t.limits, cfg)) {
            (Domain::UnitDisc, Some(a), Some(b)) => {
                let r = cfg.r_grid.iter().zip(&found).find(|(_, f)| !**f).map(|(r, _)| *r);
                r.map_or(false, |r| disjoint_disc(a, b, x[0], r))
            }
            _ => false,
        };
        cache.push((c, found.clone(), certified));
        rows.push((found, certified));
    }
    let n = classes.len();
    let need = (n / 4).max(2).min(n);
    let mut worst_start = 0usize;
    let mut certified_fail = None;
    let mut uncertified_fail = None;
    for (i, &r) in cfg.r_grid.iter().enumerate() {
        let start = (0..=n).rev().take_while(|&m| m == n || rows[m].0[i]).last().unwrap_or(n);
        if n - start >= need {
            worst_start = worst_start.max(start);
            continue;
        }
        // the late classes fail to meet the target at this radius
        let late = &rows[n - need..];
        if late.iter().any(|(f, c)| !f[i] && *c) {
            certified_fail.get_or_insert(r);
        } else {
            uncertified_fail.get_or_insert(r);
        }
    }
    let window = t.horo.window();
    if let Some(r) = certified_fail {
        return Ok(Verdict::decided(
            false,
            r,
            -1.0,
            format!("late horospheres at R = {r} are disjoint from the target's (disc certificate)"),
        )
        .with_window(window));
    }
    if let Some(r) = uncertified_fail {
        return Ok(Verdict::inconclusive(
            r,
            0.0,
            format!("no common witness at R = {r} for the last {need} classes; a negative search is not a proof"),
        )
        .with_window(window));
    }
    Ok(Verdict::decided(
        true,
        worst_start as f64,
        (n - worst_start) as f64,
        format!("every grid radius met from class index {worst_start} on ({n} classes)"),
    )
    .with_window(window))
}

fn disjoint_disc(a: C64, b: C64, x: C64, r: f64) -> bool {
    let ra = r * disc_horo_level(a, x);
    let rb = r * disc_horo_level(b, x);
    (a / (ra + 1.0) - b / (rb + 1.0)).norm() >= ra / (ra + 1.0) + rb / (rb + 1.0)
}

/// Eventual containment of a sequence in every grid horosphere of `target`,
/// judged on the late probe indices of the tested sequence.
pub fn e_limit(
    d: &Domain,
    x: &CPoint,
    seq_to_test: &crate::horospheres::PointSequence,
    target: &BoundaryClass,
    cfg: &MetricConfig,
) -> Result<Verdict> {
    same_domain(d, seq_to_test)?;
    same_domain(d, &target.representative)?;
    let h = PreparedHorosphere::new(x, &target.representative, cfg)?;
    let idx: Vec<usize> = match seq_to_test.len() {
        Some(l) => (1..=l).collect(),
        None => cfg.probe_indices(),
    };
    let late = &idx[idx.len() / 2..];
    if late.is_empty() {
        return Err(HoroError::InvalidArgument("tested sequence is too short".into()));
    }
    let est: Vec<HoroEstimate> =
        late.iter().map(|&i| h.estimate(&seq_to_test.point(i)?)).collect::<Result<_>>()?;
    let mut banded = None;
    let mut worst = f64::INFINITY;
    for &r in &cfg.r_grid {
        for (e, &i) in est.iter().zip(late) {
            let v = h.verdict(e, r);
            worst = worst.min(v.margin);
            match v.outcome {
                Outcome::Decided if !v.decision => {
                    return Ok(Verdict::decided(
                        false,
                        v.estimate,
                        v.margin,
                        format!("term {i} lies outside the horosphere of radius {r}"),
                    )
                    .with_window(h.window()));
                }
                Outcome::Decided => {}
                _ => {
                    banded.get_or_insert((i, r, v.estimate, v.margin));
                }
            }
        }
    }
    if let Some((i, r, e, m)) = banded {
        let mut v = Verdict::inconclusive(e, m, format!("term {i} is undecided at radius {r}"));
        v.outcome = Outcome::Undecidable;
        return Ok(v.with_window(h.window()));
    }
    Ok(Verdict::decided(true, worst, worst, format!("terms {late:?} inside every grid horosphere")).with_window(h.window()))
}
