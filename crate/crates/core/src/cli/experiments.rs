use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Experiment, ExperimentConfig, PointRow, ReportRow, RowStatus, Task, TaskOutput};
use crate::boundary_topology::{
    bidisc_topology_trivial_check, impression_estimate, principal_part_estimate, BoundaryClass, ClusterSet,
};
use crate::config::MetricConfig;
use crate::error::{HoroError, Result};
use crate::gromov::{
    delta_hyperbolicity_estimate, fit_quasi_geodesic, gromov_product, quasi_geodesic_check, Curve, Ray,
};
use crate::horospheres::{
    bidisc_rule, canonical_form_bidisc, disc_horo_level, rebase_factors, sequences_equivalent, Outcome,
    PointSequence, PreparedHorosphere, SeqLabel,
};
use crate::maps_extension::{cluster_set_on, denjoy_wolff_iterate, e_cluster_set, MapSpec};
use crate::metric_core::Domain;
use crate::point::{CPoint, C64};

fn payload<T: DeserializeOwned>(cfg: &ExperimentConfig) -> Result<T> {
    let v = if cfg.payload.is_null() { json!({}) } else { cfg.payload.clone() };
    serde_json::from_value(v)
        .map_err(|e| HoroError::InvalidConfig(format!("{} payload: {e}", cfg.experiment.name())))
}

fn one() -> f64 {
    1.0
}

fn task(f: impl FnOnce() -> Result<TaskOutput> + Send + 'static) -> Vec<Task> {
    vec![Box::new(f)]
}

fn base_or_center(d: &Domain, base: Option<CPoint>) -> Result<CPoint> {
    let x = base.unwrap_or_else(|| d.center());
    x.check_dim(d.dim())?;
    if !d.contains(&x)? {
        return Err(HoroError::InvalidConfig("base point lies outside the domain".into()));
    }
    Ok(x)
}

pub(super) fn plan(cfg: &ExperimentConfig) -> Result<Vec<Task>> {
    let m = cfg.metric.clone();
    Ok(match cfg.experiment {
        Experiment::HorosphereSlice => {
            let (d, p): (Domain, SlicePayload) = (cfg.domain()?, payload(cfg)?);
            task(move || horosphere_slice(&d, p, &m))
        }
        Experiment::ClassifyBidisc => {
            let p: ClassifyPayload = payload(cfg)?;
            if let Some(d) = &cfg.domain {
                if d != &Domain::Polydisc(2) {
                    return Err(HoroError::InvalidConfig("classify-bidisc runs on the bidisc".into()));
                }
            }
            task(move || classify_bidisc(p, &m))
        }
        Experiment::Equivalence => {
            let (d, p): (Domain, EquivalencePayload) = (cfg.domain()?, payload(cfg)?);
            task(move || equivalence(&d, p, &m))
        }
        Experiment::Impression | Experiment::PrincipalPart => {
            let (d, p): (Domain, ClassPayload) = (cfg.domain()?, payload(cfg)?);
            let principal = cfg.experiment == Experiment::PrincipalPart;
            task(move || boundary_sets(&d, p, principal, &m))
        }
        Experiment::GromovProduct => {
            let (d, p): (Domain, GromovPayload) = (cfg.domain()?, payload(cfg)?);
            task(move || gromov(&d, p, &m))
        }
        Experiment::DeltaEstimate => {
            let (d, p): (Domain, DeltaPayload) = (cfg.domain()?, payload(cfg)?);
            p.scales
                .iter()
                .map(|&s| {
                    let (d, m) = (d.clone(), m.clone());
                    Box::new(move || {
                        let delta = delta_hyperbolicity_estimate(&d, s, &m)?;
                        Ok(TaskOutput::rows(vec![ReportRow::measured(
                            format!("delta/scale={s}"),
                            delta,
                            true,
                            "largest thinness over sampled triangles",
                        )]))
                    }) as Task
                })
                .chain(std::iter::once(Box::new({
                    let (d, m, scales) = (d.clone(), m.clone(), p.scales.clone());
                    move || delta_growth(&d, &scales, &m)
                }) as Task))
                .collect()
        }
        Experiment::QuasiGeodesic => {
            let (d, p): (Domain, QuasiPayload) = (cfg.domain()?, payload(cfg)?);
            task(move || quasi(&d, p, &m))
        }
        Experiment::ClusterSet => {
            let p: ClusterPayload = payload(cfg)?;
            let d = match cfg.domain.clone().or_else(|| p.map.source_domain()) {
                Some(d) => d,
                None => return Err(HoroError::InvalidConfig("cluster-set needs a domain".into())),
            };
            task(move || cluster(&d, p, &m))
        }
        Experiment::DenjoyWolff => {
            let (d, p): (Domain, DenjoyPayload) = (cfg.domain()?, payload(cfg)?);
            task(move || denjoy(&d, p, &m))
        }
        Experiment::BidiscTopology => task(move || {
            let r = bidisc_topology_trivial_check(&m)?;
            let rows = r
                .checks
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    ReportRow::verdict(format!("closure/{}/{i:02}", c.step), &c.verdict, Some(true))
                        .with_data(json!({"from": c.from.short_name(), "to": c.to.short_name()}))
                })
                .collect();
            Ok(TaskOutput::rows(rows))
        }),
        Experiment::OracleSuite => unreachable!("planned by the oracle module"),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SlicePayload {
    sequence: SeqLabel,
    #[serde(default)]
    base: Option<CPoint>,
    #[serde(default = "one")]
    radius: f64,
    /// The slice is `origin + ζ · direction` for complex `ζ`.
    #[serde(default)]
    origin: Option<CPoint>,
    #[serde(default)]
    direction: Option<CPoint>,
    #[serde(default = "one")]
    span: f64,
    #[serde(default = "default_grid")]
    grid: usize,
    #[serde(default = "default_trace")]
    trace: usize,
}

fn default_grid() -> usize {
    31
}

fn default_trace() -> usize {
    120
}

fn horosphere_slice(d: &Domain, p: SlicePayload, cfg: &MetricConfig) -> Result<TaskOutput> {
    if !(p.radius > 0.0) || p.grid < 2 || !(p.span > 0.0) {
        return Err(HoroError::InvalidConfig("slice needs radius > 0, span > 0 and grid >= 2".into()));
    }
    let x = base_or_center(d, p.base)?;
    let seq = PointSequence::new(d.clone(), p.sequence.clone())?;
    let h = PreparedHorosphere::new(&x, &seq, cfg)?;
    let origin = base_or_center(d, p.origin)?;
    let dir = match p.direction {
        Some(v) => {
            v.check_dim(d.dim())?;
            v.normalized()?
        }
        None => {
            let mut e = CPoint::zeros(d.dim());
            e.0[0] = C64::new(1.0, 0.0);
            e
        }
    };
    let at = |z: C64| &origin + &dir.cscale(z);
    let threshold = 0.5 * p.radius.ln();
    let mut points = Vec::new();
    let (mut inside, mut outside, mut band) = (Vec::new(), 0usize, 0usize);
    for i in 0..p.grid {
        for j in 0..p.grid {
            let s = |k: usize| p.span * (2.0 * k as f64 / (p.grid - 1) as f64 - 1.0);
            let zeta = C64::new(s(i), s(j));
            let w = at(zeta);
            if !d.contains(&w)? {
                continue;
            }
            let v = h.contains(&w, p.radius)?;
            let tag = match (v.outcome, v.decision) {
                (Outcome::Decided, true) => {
                    inside.push(zeta);
                    "inside"
                }
                (Outcome::Decided, false) => {
                    outside += 1;
                    "outside"
                }
                _ => {
                    band += 1;
                    "band"
                }
            };
            points.push(PointRow::new(tag, w));
        }
    }
    let total = inside.len() + outside + band;
    let mut rows = vec![ReportRow::measured(
        "slice/grid",
        inside.len() as f64 / total.max(1) as f64,
        total > 0,
        format!("{} inside, {outside} outside, {band} in the band", inside.len()),
    )];
    // boundary trace along rays from the centroid of the inside samples
    let mut trace = Vec::new();
    if !inside.is_empty() {
        let c = inside.iter().sum::<C64>() / inside.len() as f64;
        let level = |z: C64| -> Result<f64> { Ok(h.estimate(&at(z))?.estimate() - threshold) };
        let in_domain = |z: C64| d.contains(&at(z)).unwrap_or(false);
        if in_domain(c) && level(c)? < 0.0 {
            for k in 0..p.trace {
                let u = C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / p.trace as f64);
                let (mut lo, mut hi) = (0.0, 4.0 * p.span);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if in_domain(c + u * mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let t_exit = lo * (1.0 - 1e-9);
                if level(c + u * t_exit)? <= 0.0 {
                    continue;
                }
                let (mut a, mut b) = (0.0, t_exit);
                for _ in 0..60 {
                    let mid = 0.5 * (a + b);
                    if level(c + u * mid)? < 0.0 {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                trace.push(at(c + u * (0.5 * (a + b))));
            }
        }
    }
    rows.push(ReportRow::measured(
        "slice/trace",
        trace.len() as f64,
        !trace.is_empty(),
        "boundary points found along rays from the centroid of the inside samples",
    ));
    // on the disc a radial class has a closed-form horodisc
    if let (Domain::UnitDisc, SeqLabel::Radial { p: q }) = (d, &p.sequence) {
        let q = q[0];
        let scaled = p.radius * disc_horo_level(q, x[0]);
        let away: Vec<&CPoint> = trace.iter().filter(|w| (w[0] - q).norm() > 0.05).collect();
        let worst = away.iter().map(|w| (disc_horo_level(q, w[0]) / scaled).ln().abs()).fold(0.0, f64::max);
        let tol = 10.0 * cfg.tol;
        rows.push(
            ReportRow::check(
                "slice/closed-form",
                !away.is_empty() && worst <= tol,
                worst,
                tol - worst,
                format!("largest |log| level ratio on {} traced points away from the tangency point", away.len()),
            )
            .with_data(json!({"center": [q.re * scaled / (1.0 + scaled), q.im * scaled / (1.0 + scaled)],
                               "radius": scaled / (1.0 + scaled)})),
        );
    }
    points.extend(trace.into_iter().map(|w| PointRow::new("boundary", w)));
    Ok(TaskOutput { rows, points })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifyPayload {
    sequence: SeqLabel,
    #[serde(default)]
    expect: Option<SeqLabel>,
}

fn classify_bidisc(p: ClassifyPayload, cfg: &MetricConfig) -> Result<TaskOutput> {
    let seq = PointSequence::bidisc(p.sequence)?;
    let (rule, classes) = bidisc_rule(&seq, cfg)?;
    let form = canonical_form_bidisc(&seq, cfg)?;
    let mut rows = vec![ReportRow::measured("classes", classes.len() as f64, true, "limit classes of the tail")
        .with_data(json!({"classes": classes, "rule": rule}))];
    let ratio = form
        .representative
        .as_ref()
        .and_then(|r| form.candidates.iter().find(|(l, _)| l == r).map(|(_, q)| *q))
        .unwrap_or(f64::NAN);
    let mut row = match (&form.representative, form.outcome) {
        (Some(rep), Outcome::Decided) => {
            let ok = p.expect.as_ref().map_or(true, |e| e.approx_eq(rep, 10.0 * cfg.tol));
            ReportRow::check("canonical", ok, ratio, ratio - 1e-4, rep.short_name())
        }
        _ => ReportRow::measured("canonical", ratio, false, "no unique representative"),
    };
    if row.status == RowStatus::Pass && form.outcome != Outcome::Decided {
        row.status = RowStatus::Inconclusive;
    }
    let candidates: Vec<Value> =
        form.candidates.iter().map(|(l, q)| json!({"name": l.short_name(), "ratio": q})).collect();
    rows.push(row.with_data(json!({
        "representative": form.representative,
        "name": form.representative.as_ref().map(SeqLabel::short_name),
        "candidates": candidates,
    })));
    Ok(TaskOutput::rows(rows))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EquivalencePayload {
    a: SeqLabel,
    b: SeqLabel,
    #[serde(default)]
    base: Option<CPoint>,
    #[serde(default)]
    expect: Option<bool>,
    /// Also compare the horospheres of `a` at `base` and at this point.
    #[serde(default)]
    rebase_to: Option<CPoint>,
}

fn equivalence(d: &Domain, p: EquivalencePayload, cfg: &MetricConfig) -> Result<TaskOutput> {
    let x = base_or_center(d, p.base)?;
    let a = PointSequence::new(d.clone(), p.a)?;
    let b = PointSequence::new(d.clone(), p.b)?;
    let v = sequences_equivalent(d, &x, &a, &b, cfg)?;
    let mut rows = vec![ReportRow::verdict("equivalent", &v, p.expect)];
    if let Some(y) = p.rebase_to {
        let y = base_or_center(d, Some(y))?;
        let r = rebase_factors(d, &x, &y, &a, cfg)?;
        rows.push(
            ReportRow::check(
                "rebase",
                r.violations == 0 && r.within_bounds,
                r.beta,
                r.base_distance - 0.5 * r.beta.ln().abs().max(r.alpha.ln().abs()),
                format!("{} inclusions checked, {} violated, {} in the band", r.checked, r.violations, r.banded),
            )
            .with_data(&r),
        );
    }
    Ok(TaskOutput::rows(rows))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassPayload {
    sequence: SeqLabel,
    #[serde(default)]
    base: Option<CPoint>,
}

fn boundary_sets(d: &Domain, p: ClassPayload, principal: bool, cfg: &MetricConfig) -> Result<TaskOutput> {
    let x = base_or_center(d, p.base)?;
    let cls = BoundaryClass::new(&x, PointSequence::new(d.clone(), p.sequence)?, cfg)?;
    let (row, set, tag) = if principal {
        let pp = principal_part_estimate(d, &x, &cls, cfg)?;
        let converged = pp.outcome == Outcome::Decided;
        let row = ReportRow::measured("principal-part", pp.set.points.len() as f64, converged, "boundary clusters")
            .with_data(json!({"radii": pp.radii, "escapes_to_infinity": pp.set.escapes_to_infinity}));
        (row, pp.set, "principal")
    } else {
        let set = impression_estimate(d, &x, &cls, cfg)?;
        let row = ReportRow::measured("impression", set.points.len() as f64, !set.points.is_empty(), "boundary clusters")
            .with_data(json!({"escapes_to_infinity": set.escapes_to_infinity, "probes": set.probes}));
        (row, set, "impression")
    };
    let points = set.points.into_iter().map(|w| PointRow::new(tag, w)).collect();
    Ok(TaskOutput { rows: vec![row], points })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Triple {
    x: CPoint,
    y: CPoint,
    #[serde(default)]
    w: Option<CPoint>,
    #[serde(default)]
    expect: Option<f64>,
    #[serde(default = "tight")]
    tol: f64,
}

fn tight() -> f64 {
    1e-9
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RayPair {
    a: Ray,
    b: Ray,
    #[serde(default = "default_pairs")]
    samples: usize,
    #[serde(default = "default_horizon")]
    horizon: f64,
    #[serde(default)]
    expect: Option<f64>,
    #[serde(default = "tight")]
    tol: f64,
}

fn default_pairs() -> usize {
    100
}

fn default_horizon() -> f64 {
    8.0
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GromovPayload {
    #[serde(default)]
    triples: Vec<Triple>,
    #[serde(default)]
    rays: Option<RayPair>,
}

fn gromov(d: &Domain, p: GromovPayload, cfg: &MetricConfig) -> Result<TaskOutput> {
    let mut rows = Vec::new();
    for (i, t) in p.triples.into_iter().enumerate() {
        let w = base_or_center(d, t.w)?;
        let g = gromov_product(d, &t.x, &t.y, &w, cfg)?;
        let key = format!("triple/{i:02}");
        rows.push(match t.expect {
            Some(e) => ReportRow::close(key, g, e, t.tol),
            None => ReportRow::measured(key, g, true, "Gromov product"),
        });
    }
    if let Some(r) = p.rays {
        use rand::Rng;
        let mut rng = crate::rng::seeded(cfg.seed, 0x6A0);
        let w = d.center();
        let mut vals = Vec::with_capacity(r.samples);
        for _ in 0..r.samples {
            let (t, s) = (rng.gen_range(0.0..r.horizon), rng.gen_range(0.0..r.horizon));
            vals.push(gromov_product(d, &r.a.at(t), &r.b.at(s), &w, cfg)?);
        }
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        rows.push(
            match r.expect {
                Some(e) => {
                    let err = (hi - e).abs().max((lo - e).abs());
                    ReportRow::check("rays", err <= r.tol, hi, r.tol - err, format!("{} sampled pairs", r.samples))
                }
                None => ReportRow::measured("rays", hi, true, format!("largest product over {} pairs", r.samples)),
            }
            .with_data(json!({"min": lo, "max": hi})),
        );
    }
    if rows.is_empty() {
        return Err(HoroError::InvalidConfig("gromov-product payload lists no triples or rays".into()));
    }
    Ok(TaskOutput::rows(rows))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeltaPayload {
    #[serde(default = "default_scales")]
    scales: Vec<f64>,
}

fn default_scales() -> Vec<f64> {
    vec![3.0, 6.0]
}

fn delta_growth(d: &Domain, scales: &[f64], cfg: &MetricConfig) -> Result<TaskOutput> {
    if scales.len() < 2 {
        return Ok(TaskOutput::default());
    }
    let first = delta_hyperbolicity_estimate(d, scales[0], cfg)?;
    let last = delta_hyperbolicity_estimate(d, scales[scales.len() - 1], cfg)?;
    Ok(TaskOutput::rows(vec![ReportRow::measured(
        "delta/growth",
        last / first,
        true,
        "ratio of the estimates at the largest and smallest scale",
    )]))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuasiPayload {
    curve: Curve,
    #[serde(default)]
    a: Option<f64>,
    #[serde(default)]
    b: Option<f64>,
    #[serde(default)]
    expect: Option<bool>,
}

fn quasi(d: &Domain, p: QuasiPayload, cfg: &MetricConfig) -> Result<TaskOutput> {
    let mut rows = Vec::new();
    if let (Some(a), Some(b)) = (p.a, p.b) {
        let v = quasi_geodesic_check(d, &p.curve, a, b, cfg)?;
        rows.push(ReportRow::verdict("check", &v, p.expect));
    }
    let fit = fit_quasi_geodesic(d, &p.curve, cfg)?;
    rows.push(ReportRow::measured("fit", fit.a + fit.b, true, format!("A = {}, B = {}", fit.a, fit.b)).with_data(&fit));
    Ok(TaskOutput::rows(rows))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClusterPayload {
    map: MapSpec,
    point: CPoint,
    #[serde(default)]
    expect: Option<Vec<CPoint>>,
    #[serde(default)]
    expect_escape: Option<bool>,
    #[serde(default = "cluster_tol")]
    tol: f64,
    #[serde(default)]
    e_limits: bool,
}

fn cluster_tol() -> f64 {
    1e-6
}

fn cluster(d: &Domain, p: ClusterPayload, cfg: &MetricConfig) -> Result<TaskOutput> {
    let cs = cluster_set_on(d, &p.map, &p.point, cfg)?;
    let mut rows = Vec::new();
    let data = json!({"points": cs.points, "escapes_to_infinity": cs.escapes_to_infinity, "probes": cs.probes});
    rows.push(
        match &p.expect {
            Some(e) => {
                let want = ClusterSet { points: e.clone(), escapes_to_infinity: false, probes: 0 };
                let gap = if cs.points.is_empty() { f64::INFINITY } else { cs.hausdorff(&want) };
                ReportRow::check("cluster-set", gap <= p.tol, gap, p.tol - gap, "Hausdorff distance to the expected set")
            }
            None => ReportRow::measured("cluster-set", cs.points.len() as f64, true, "finite cluster points"),
        }
        .with_data(data),
    );
    if let Some(e) = p.expect_escape {
        let ok = cs.escapes_to_infinity == e;
        rows.push(ReportRow::check("escape", ok, cs.escapes_to_infinity as u8 as f64, if ok { 0.0 } else { -1.0 }, "image norms blow up"));
    }
    let mut points: Vec<PointRow> = cs.points.iter().map(|w| PointRow::new("cluster", w.clone())).collect();
    if p.e_limits {
        let e = e_cluster_set(d, &p.map, &p.point, cfg)?;
        let excess = if e.points.is_empty() { 0.0 } else { e.excess_over(&cs) };
        let r = cfg.merge_radius();
        rows.push(ReportRow::check("e-cluster-subset", excess <= r, excess, r - excess, format!("{} E-limit probe families", e.probes)));
        points.extend(e.points.into_iter().map(|w| PointRow::new("e-cluster", w)));
    }
    Ok(TaskOutput { rows, points })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DenjoyPayload {
    map: MapSpec,
    #[serde(default)]
    start: Option<CPoint>,
    #[serde(default)]
    expect: Option<CPoint>,
    #[serde(default = "cluster_tol")]
    tol: f64,
}

fn denjoy(d: &Domain, p: DenjoyPayload, cfg: &MetricConfig) -> Result<TaskOutput> {
    let z0 = base_or_center(d, p.start)?;
    let r = denjoy_wolff_iterate(d, &p.map, &z0, cfg)?;
    let mut rows = Vec::new();
    let spread = r.limit_spread();
    if r.stagnated {
        rows.push(ReportRow::measured("target", f64::NAN, false, "precondition violated: an orbit stagnated in the interior"));
    } else {
        let miss = p.expect.as_ref().map_or(0.0, |e| r.target.points.iter().map(|q| q.dist(e)).fold(0.0, f64::max));
        let err = spread.max(miss);
        rows.push(
            ReportRow::check("target", r.target.is_singleton() && err <= p.tol, spread, p.tol - err, format!("{} orbits", r.orbits.len()))
                .with_data(json!({"points": r.target.points})),
        );
    }
    rows.push(ReportRow::verdict("invariance", &r.invariance, Some(true)));
    let summary: Vec<Value> = r
        .orbits
        .iter()
        .map(|o| json!({"start": o.start, "steps": o.steps, "depth": o.depth, "limit": o.limit}))
        .collect();
    rows.push(ReportRow::measured("orbits", r.orbits.len() as f64, !r.stagnated, "per-start summaries").with_data(summary));
    let points = r
        .orbits
        .iter()
        .enumerate()
        .flat_map(|(k, o)| o.path.iter().map(move |z| PointRow::new(&format!("orbit-{k}"), z.clone())))
        .collect();
    Ok(TaskOutput { rows, points })
}
