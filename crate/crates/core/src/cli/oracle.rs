//! Closed-form cross-checks gathered into one deterministic run.

use rand::Rng;
use serde_json::json;

use super::{ExperimentConfig, ReportRow, Task, TaskOutput};
use crate::config::MetricConfig;
use crate::error::Result;
use crate::gromov::{delta_hyperbolicity_estimate, gromov_product, seq_equiv_s, Ray};
use crate::horospheres::{
    bidisc_pool, bidisc_rule, canonical_form_bidisc, disc_horo_level, horosphere_pool, CoordPath, Outcome,
    PointSequence, PreparedHorosphere, SeqLabel,
};
use crate::maps_extension::{char_set, cluster_set, denjoy_wolff_iterate, isometry_defect, MapSpec};
use crate::metric_core::models::{cayley, siegel_to_parabolic};
use crate::metric_core::{ball_distance, disc_distance, parabolic_distance, right_half_plane_distance, siegel_distance, Domain};
use crate::point::{CPoint, C64};
use crate::rng::seeded;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub(super) fn plan(cfg: &ExperimentConfig) -> Result<Vec<Task>> {
    let jobs: Vec<fn(&MetricConfig) -> Result<TaskOutput>> = vec![
        disc_horospheres,
        ball_horospheres,
        distance_identities,
        bidisc_rules,
        canonical_forms,
        cayley_chain,
        gromov_zero,
        remark_triple,
        denjoy_examples,
        characteristic_sets,
        delta_contrast,
    ];
    Ok(jobs
        .into_iter()
        .map(|f| {
            let m = cfg.metric.clone();
            Box::new(move || f(&m)) as Task
        })
        .collect())
}

/// Limsup membership against a closed-form level function `level < R`.
/// Band points must sit within `tol` of the level set in `½ log` units.
fn membership_rows(
    group: &str,
    h: &PreparedHorosphere,
    pool: &[CPoint],
    radii: &[f64],
    level: impl Fn(&CPoint) -> f64,
    tol: f64,
) -> Result<Vec<ReportRow>> {
    let est: Vec<_> = pool.iter().map(|w| h.estimate(w)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for &r in radii {
        let (mut agree, mut wrong, mut band, mut far_band) = (0usize, 0usize, 0usize, 0usize);
        let mut worst = f64::INFINITY;
        for (w, e) in pool.iter().zip(&est) {
            let gap = 0.5 * (level(w) / r).ln();
            let v = h.verdict(e, r);
            if v.outcome == Outcome::Decided {
                if v.decision == (gap < 0.0) {
                    agree += 1;
                    worst = worst.min(gap.abs());
                } else {
                    wrong += 1;
                }
            } else {
                band += 1;
                if gap.abs() > 2.0 * tol {
                    far_band += 1;
                }
            }
        }
        rows.push(ReportRow::check(
            format!("{group}/R={r:.4}"),
            wrong == 0 && far_band == 0 && agree > 0,
            agree as f64 / (agree + wrong).max(1) as f64,
            worst,
            format!("{agree} agree, {wrong} disagree, {band} in the band ({far_band} away from the horosphere)"),
        ));
    }
    Ok(rows)
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}

fn disc_horospheres(cfg: &MetricConfig) -> Result<TaskOutput> {
    let d = Domain::UnitDisc;
    let p = c(0.6, 0.8);
    let seq = PointSequence::radial(d.clone(), CPoint::scalar(p))?;
    let h = PreparedHorosphere::new(&d.center(), &seq, cfg)?;
    let pool = horosphere_pool(&d, &[&seq], 200, cfg.seed, cfg)?;
    let rows = membership_rows("disc-horosphere", &h, &pool, &log_grid(0.05, 20.0, 10), |w| disc_horo_level(p, w[0]), cfg.tol)?;
    Ok(TaskOutput::rows(rows))
}

fn ball_horospheres(cfg: &MetricConfig) -> Result<TaskOutput> {
    let d = Domain::UnitBall(2);
    let p = CPoint::from_pairs(&[(0.0, 1.0), (0.0, 0.0)]);
    let seq = PointSequence::radial(d.clone(), p.clone())?;
    let h = PreparedHorosphere::new(&d.center(), &seq, cfg)?;
    let pool = horosphere_pool(&d, &[&seq], 200, cfg.seed, cfg)?;
    let level = |w: &CPoint| (c(1.0, 0.0) - w.inner(&p)).norm_sqr() / ((1.0 - w.norm()) * (1.0 + w.norm()));
    Ok(TaskOutput::rows(membership_rows("ball-horosphere", &h, &pool, &log_grid(0.05, 20.0, 5), level, cfg.tol)?))
}

fn distance_identities(cfg: &MetricConfig) -> Result<TaskOutput> {
    let ball = Domain::UnitBall(2);
    let mut rng = seeded(cfg.seed, 0x0A);
    let (mut siegel, mut parab, mut half) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let (z, w) = (ball.sample_point(&mut rng), ball.sample_point(&mut rng));
        let k = ball_distance(&z, &w);
        let (sz, sw) = (cayley(&z), cayley(&w));
        siegel = siegel.max((siegel_distance(&sz, &sw) - k).abs());
        parab = parab.max((parabolic_distance(&siegel_to_parabolic(&sz), &siegel_to_parabolic(&sw)) - k).abs());
        let (a, b) = (z[0] * 0.7, w[1] * 0.7);
        let f = |u: C64| (c(1.0, 0.0) - u) / (c(1.0, 0.0) + u);
        half = half.max((right_half_plane_distance(f(a), f(b)) - disc_distance(a, b)).abs());
    }
    let tol = 1e-9;
    Ok(TaskOutput::rows(vec![
        ReportRow::check("distances/siegel-vs-ball", siegel <= tol, siegel, tol - siegel, "200 pairs through the Cayley map"),
        ReportRow::check("distances/parabolic-vs-ball", parab <= tol, parab, tol - parab, "200 pairs through both maps"),
        ReportRow::check("distances/half-plane-vs-disc", half <= tol, half, tol - half, "200 pairs"),
        ReportRow::close("distances/disc-origin", disc_distance(c(0.0, 0.0), c(0.5, 0.0)), 0.5 * 3f64.ln(), 1e-15),
    ]))
}

fn bidisc_families() -> Vec<SeqLabel> {
    let one = c(1.0, 0.0);
    vec![
        SeqLabel::BidiscW1 { p1: one, p2: c(0.0, 1.0) },
        SeqLabel::BidiscW2 { p: one },
        SeqLabel::BidiscW3 { p: c(-1.0, 0.0) },
        SeqLabel::Interleaved { a: Box::new(SeqLabel::BidiscW3 { p: one }), b: Box::new(SeqLabel::BidiscW2 { p: one }) },
        SeqLabel::Coordinatewise {
            coords: vec![CoordPath { target: one, rate: 1.0, drift: 0.0 }, CoordPath { target: one, rate: 2.0, drift: 0.0 }],
        },
    ]
}

fn bidisc_rules(cfg: &MetricConfig) -> Result<TaskOutput> {
    let x = CPoint::zeros(2);
    let mut rows = Vec::new();
    for (i, label) in bidisc_families().into_iter().enumerate() {
        let seq = PointSequence::bidisc(label.clone())?;
        let (rule, _) = bidisc_rule(&seq, cfg)?;
        let h = PreparedHorosphere::new(&x, &seq, cfg)?;
        let anchors: Vec<C64> = rule.terms.iter().flat_map(|t| [t.p1, t.p2]).collect();
        let pool = bidisc_pool(&anchors, 200, cfg.seed + i as u64);
        let (mut agree, mut decided) = (0usize, 0usize);
        for w in &pool {
            let e = h.estimate(w)?;
            for &r in &cfg.r_grid {
                let v = h.verdict(&e, r);
                if v.outcome == Outcome::Decided {
                    decided += 1;
                    agree += (v.decision == rule.contains(w, r)) as usize;
                }
            }
        }
        let rate = agree as f64 / decided.max(1) as f64;
        rows.push(ReportRow::check(
            format!("bidisc-rule/{i:02}"),
            decided > 0 && rate >= 0.99,
            rate,
            rate - 0.99,
            format!("{agree} of {decided} decided samples agree with the product rule"),
        ));
    }
    Ok(TaskOutput::rows(rows))
}

fn canonical_forms(cfg: &MetricConfig) -> Result<TaskOutput> {
    let one = c(1.0, 0.0);
    let cases = [
        (bidisc_families()[3].clone(), SeqLabel::BidiscW1 { p1: one, p2: one }),
        (SeqLabel::BidiscW2 { p: c(0.0, -1.0) }, SeqLabel::BidiscW2 { p: c(0.0, -1.0) }),
        (
            SeqLabel::Coordinatewise {
                coords: vec![CoordPath { target: one, rate: 1.0, drift: 0.0 }, CoordPath { target: c(0.5, 0.0), rate: 1.0, drift: 0.0 }],
            },
            SeqLabel::BidiscW2 { p: one },
        ),
    ];
    let mut rows = Vec::new();
    for (i, (label, want)) in cases.into_iter().enumerate() {
        let form = canonical_form_bidisc(&PointSequence::bidisc(label)?, cfg)?;
        let got = form.representative.clone();
        let ok = form.outcome == Outcome::Decided && got.as_ref().is_some_and(|g| g.approx_eq(&want, 10.0 * cfg.tol));
        rows.push(
            ReportRow::check(format!("canonical/{i:02}"), ok, form.candidates.len() as f64, 0.0, format!("expected {}", want.short_name()))
                .with_data(json!({"name": got.as_ref().map(SeqLabel::short_name)})),
        );
    }
    Ok(TaskOutput::rows(rows))
}

fn cayley_chain(cfg: &MetricConfig) -> Result<TaskOutput> {
    let chain = MapSpec::compose(MapSpec::Cayley2, MapSpec::SiegelToParabolic);
    let iso = isometry_defect(&chain, &Domain::UnitBall(2), 1000, cfg)?;
    let back = cluster_set(&chain.inverse_spec(), &CPoint::zeros(2), cfg)?;
    let want = CPoint::from_pairs(&[(-1.0, 0.0), (0.0, 0.0)]);
    let gap = back.points.iter().map(|q| q.dist(&want)).fold(0.0, f64::max);
    let fwd = cluster_set(&MapSpec::Cayley2, &CPoint::from_pairs(&[(1.0, 0.0), (0.0, 0.0)]), cfg)?;
    Ok(TaskOutput::rows(vec![
        ReportRow::check("cayley/isometry", iso.max_defect < 1e-9, iso.max_defect, 1e-9 - iso.max_defect, "1000 ball pairs"),
        ReportRow::check("cayley/inverse-cluster", back.is_singleton() && gap <= 1e-6, gap, 1e-6 - gap, "cluster at (-1, 0)"),
        ReportRow::check("cayley/forward-escape", fwd.escapes_to_infinity, fwd.probes as f64, 0.0, "images leave every compact set"),
    ]))
}

fn gromov_zero(cfg: &MetricConfig) -> Result<TaskOutput> {
    let d = Domain::Polydisc(2);
    let f = Ray::new(d.clone(), CPoint::from_pairs(&[(1.0, 0.0), (0.0, 0.0)]), vec![1.0, 0.0], 0.0)?;
    let g = Ray::new(d.clone(), CPoint::from_pairs(&[(-1.0, 0.0), (0.0, 0.0)]), vec![1.0, 0.0], 0.0)?;
    let mut rng = seeded(cfg.seed, 0x60);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (t, s) = (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0));
        worst = worst.max(gromov_product(&d, &f.at(t), &g.at(s), &CPoint::zeros(2), cfg)?.abs());
    }
    Ok(TaskOutput::rows(vec![ReportRow::check("gromov/opposite-faces", worst < 1e-9, worst, 1e-9 - worst, "100 sampled (t, s)")]))
}

fn remark_triple(cfg: &MetricConfig) -> Result<TaskOutput> {
    let d = Domain::Polydisc(2);
    let face = |t1: f64, t2: f64| {
        let path = |t: f64| CoordPath { target: c(t, 0.0), rate: 1.0, drift: 0.0 };
        PointSequence::bidisc(SeqLabel::Coordinatewise { coords: vec![path(t1), path(t2)] })
    };
    let (a, b, e) = (face(1.0, 0.0)?, face(0.0, 1.0)?, face(-1.0, 0.0)?);
    let w = CPoint::zeros(2);
    Ok(TaskOutput::rows(vec![
        ReportRow::verdict("seq-equiv/ab", &seq_equiv_s(&d, &w, &a, &b, cfg)?, Some(true)),
        ReportRow::verdict("seq-equiv/bc", &seq_equiv_s(&d, &w, &b, &e, cfg)?, Some(true)),
        ReportRow::verdict("seq-equiv/ac", &seq_equiv_s(&d, &w, &a, &e, cfg)?, Some(false)),
    ]))
}

pub(crate) fn denjoy_cases() -> Vec<(Domain, MapSpec, CPoint)> {
    let half = MapSpec::DiscAutomorphism { a: c(-0.5, 0.0), theta: 0.0 };
    let phi = 2.0;
    vec![
        (Domain::UnitDisc, half.clone(), CPoint::real(1.0)),
        (
            Domain::UnitDisc,
            MapSpec::Composite(vec![MapSpec::rotation(-phi), half, MapSpec::rotation(phi)]),
            CPoint::scalar(C64::from_polar(1.0, phi)),
        ),
        (
            Domain::UnitBall(2),
            MapSpec::BallAutomorphism {
                a: CPoint::from_pairs(&[(-0.5, 0.0), (0.0, 0.0)]),
                phases: vec![std::f64::consts::PI, std::f64::consts::PI],
            },
            CPoint::from_pairs(&[(1.0, 0.0), (0.0, 0.0)]),
        ),
    ]
}

fn denjoy_examples(cfg: &MetricConfig) -> Result<TaskOutput> {
    let mut rows = Vec::new();
    for (i, (d, f, want)) in denjoy_cases().into_iter().enumerate() {
        let r = denjoy_wolff_iterate(&d, &f, &d.center(), cfg)?;
        let miss = r.target.points.iter().map(|q| q.dist(&want)).fold(r.limit_spread(), f64::max);
        rows.push(ReportRow::check(
            format!("denjoy/{i:02}/target"),
            !r.stagnated && r.target.is_singleton() && miss <= 1e-6,
            miss,
            1e-6 - miss,
            format!("{} orbits", r.orbits.len()),
        ));
        rows.push(ReportRow::verdict(format!("denjoy/{i:02}/invariance"), &r.invariance, Some(true)));
    }
    let rot = denjoy_wolff_iterate(&Domain::UnitDisc, &MapSpec::rotation(0.7), &CPoint::real(0.0), cfg)?;
    rows.push(ReportRow::check("denjoy/rotation-stagnates", rot.stagnated, rot.orbits.len() as f64, 0.0, "interior fixed point detected"));
    Ok(TaskOutput::rows(rows))
}

fn characteristic_sets(cfg: &MetricConfig) -> Result<TaskOutput> {
    let par = char_set(&Domain::ParabolicConvex, &CPoint::zeros(2), cfg)?;
    let line = par.real_dim() == 1 && {
        let b = &par.real_basis[0];
        b[0].norm() < 1e-9 && b[1].re.abs() < 1e-9 && par.extent[0].is_infinite()
    };
    let ball = char_set(&Domain::UnitBall(2), &CPoint::from_pairs(&[(1.0, 0.0), (0.0, 0.0)]), cfg)?;
    let disc = char_set(&Domain::UnitDisc, &CPoint::real(1.0), cfg)?;
    Ok(TaskOutput::rows(vec![
        ReportRow::check("char-set/parabolic", line, par.real_dim() as f64, 0.0, "the imaginary line in the second coordinate"),
        ReportRow::check("char-set/ball", ball.real_dim() == 0, ball.real_dim() as f64, 0.0, "a single point"),
        ReportRow::check("char-set/disc", disc.real_dim() == 0, disc.real_dim() as f64, 0.0, "a single point"),
    ]))
}

fn delta_contrast(cfg: &MetricConfig) -> Result<TaskOutput> {
    let disc = Domain::UnitDisc;
    let (a, b) = (delta_hyperbolicity_estimate(&disc, 3.0, cfg)?, delta_hyperbolicity_estimate(&disc, 6.0, cfg)?);
    let change = (b - a).abs() / a;
    let bi = Domain::Polydisc(2);
    let (p, q) = (delta_hyperbolicity_estimate(&bi, 3.0, cfg)?, delta_hyperbolicity_estimate(&bi, 6.0, cfg)?);
    Ok(TaskOutput::rows(vec![
        ReportRow::check("delta/disc-stable", change < 0.1, change, 0.1 - change, format!("scale 3: {a}, scale 6: {b}")),
        ReportRow::check("delta/bidisc-grows", q / p >= 1.5, q / p, q / p - 1.5, format!("scale 3: {p}, scale 6: {q}")),
    ]))
}
