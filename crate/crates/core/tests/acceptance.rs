//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Expected values come from closed forms
//! computed here, independently of the code under test.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use horokit::boundary_topology::{principal_part_estimate, BoundaryClass};
use horokit::cli::{run_experiment, Experiment, ExperimentConfig};
use horokit::gromov::{delta_hyperbolicity_estimate, gromov_product, seq_equiv_s, Ray};
use horokit::horospheres::properties::horosphere_property_suite;
use horokit::horospheres::{
    canonical_form_bidisc, horosphere_contains, rebase_factors, CoordPath, Horosphere, Outcome, PointSequence,
    PreparedHorosphere, SeqLabel,
};
use horokit::maps_extension::{cluster_set, denjoy_wolff_iterate, isometry_defect, MapSpec};
use horokit::metric_core::Domain;
use horokit::{CPoint, MetricConfig, C64};

type Outcome_ = (bool, String);

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn disc_sample(r: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(r.gen::<f64>().sqrt() * 0.999_999, TAU * r.gen::<f64>())
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}

fn criterion_1() -> Outcome_ {
    let start = Instant::now();
    let cfg = MetricConfig::default();
    let p = c(1.0, 0.0);
    let seq = PointSequence::radial(Domain::UnitDisc, CPoint::scalar(p)).unwrap();
    let mut r = rng(1);
    let (mut decided, mut wrong, mut undecided, mut far) = (0, 0, 0, 0);
    for radius in log_grid(0.05, 20.0, 20) {
        let h = Horosphere::new(CPoint::real(0.0), seq.clone(), radius).unwrap();
        // Euclidean horodisc: center p/(R+1), radius R/(R+1)
        let (center, rad) = (p / (radius + 1.0), radius / (radius + 1.0));
        for k in 0..500 {
            let z = if k % 2 == 0 {
                disc_sample(&mut r)
            } else {
                // points straddling the horocycle
                let q = center + C64::from_polar(rad * (1.0 + 0.05 * (r.gen::<f64>() - 0.5)), TAU * r.gen::<f64>());
                if q.norm() >= 1.0 { disc_sample(&mut r) } else { q }
            };
            let gap = (z - center).norm() - rad;
            let v = horosphere_contains(&h, &CPoint::scalar(z), &cfg).unwrap();
            if v.outcome == Outcome::Decided {
                decided += 1;
                if v.decision != (gap < 0.0) {
                    wrong += 1;
                }
            } else {
                undecided += 1;
                if gap.abs() > cfg.tol {
                    far += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        wrong == 0 && far == 0 && secs < 10.0,
        format!("{decided} decided, {wrong} wrong; {undecided} undecided, {far} farther than tol; {secs:.2} s"),
    )
}

/// `½ log` of the expected product level `max_j c_j |w_j − p_j|²/(1 − |w_j|²)`
/// with `c_j = lim min_k δ_k / δ_j`, `δ_j = 1 − |u_n^j|`.
struct Expected {
    p: [C64; 2],
    c: [f64; 2],
    canonical: SeqLabel,
}

impl Expected {
    fn contains(&self, w: &CPoint, radius: f64) -> bool {
        let part = |j: usize| {
            if self.c[j] == 0.0 {
                0.0
            } else {
                self.c[j] * (w[j] - self.p[j]).norm_sqr() / (1.0 - w[j].norm_sqr())
            }
        };
        part(0).max(part(1)) < radius
    }
}

fn path(target: C64, rate: f64, drift: f64) -> CoordPath {
    CoordPath { target, rate, drift }
}

/// Expected rule for a coordinatewise sequence `target_j (1 − n^{−rate_j})`.
fn expected_coordinatewise(a: &CoordPath, b: &CoordPath) -> Expected {
    let on_circle = |t: C64| (t.norm() - 1.0).abs() < 1e-12;
    let (a_on, b_on) = (on_circle(a.target), on_circle(b.target));
    let c = match (a_on, b_on) {
        (true, true) if a.rate == b.rate => [1.0, 1.0],
        // the coordinate approaching faster sets the normalization
        (true, true) if a.rate > b.rate => [1.0, 0.0],
        (true, true) => [0.0, 1.0],
        (true, false) => [1.0, 0.0],
        (false, true) => [0.0, 1.0],
        _ => unreachable!(),
    };
    let canonical = match c {
        [1.0, 1.0] => SeqLabel::BidiscW1 { p1: a.target, p2: b.target },
        [1.0, _] => SeqLabel::BidiscW2 { p: a.target },
        _ => SeqLabel::BidiscW3 { p: b.target },
    };
    Expected { p: [a.target, b.target], c, canonical }
}

fn bidisc_pool(e: &Expected, r: &mut ChaCha8Rng, count: usize) -> Vec<CPoint> {
    (0..count)
        .map(|_| {
            let coord = |j: usize, r: &mut ChaCha8Rng| {
                if r.gen::<f64>() < 0.4 || e.c[j] == 0.0 {
                    disc_sample(r)
                } else {
                    // near the anchor, across a range of horocycle levels
                    let eps = 10f64.powf(r.gen_range(-3.0..-0.3));
                    let z = e.p[j] * (1.0 - eps) * C64::from_polar(1.0, r.gen_range(-1.0..1.0) * (3.0 * eps).sqrt());
                    if z.norm() < 1.0 { z } else { disc_sample(r) }
                }
            };
            CPoint(vec![coord(0, r), coord(1, r)])
        })
        .collect()
}

fn criterion_2() -> Outcome_ {
    let start = Instant::now();
    let cfg = MetricConfig::default();
    let one = c(1.0, 0.0);
    let e = |t: f64| C64::from_polar(1.0, t);
    let mut cases: Vec<(SeqLabel, Expected)> = vec![
        (SeqLabel::BidiscW1 { p1: one, p2: c(0.0, 1.0) }, Expected { p: [one, c(0.0, 1.0)], c: [1.0, 1.0], canonical: SeqLabel::BidiscW1 { p1: one, p2: c(0.0, 1.0) } }),
        (SeqLabel::BidiscW1 { p1: e(2.0), p2: e(-0.7) }, Expected { p: [e(2.0), e(-0.7)], c: [1.0, 1.0], canonical: SeqLabel::BidiscW1 { p1: e(2.0), p2: e(-0.7) } }),
        (SeqLabel::BidiscW2 { p: one }, Expected { p: [one, one], c: [1.0, 0.0], canonical: SeqLabel::BidiscW2 { p: one } }),
        (SeqLabel::BidiscW2 { p: e(1.2) }, Expected { p: [e(1.2), one], c: [1.0, 0.0], canonical: SeqLabel::BidiscW2 { p: e(1.2) } }),
        (SeqLabel::BidiscW3 { p: one }, Expected { p: [one, one], c: [0.0, 1.0], canonical: SeqLabel::BidiscW3 { p: one } }),
        (SeqLabel::BidiscW3 { p: e(-2.5) }, Expected { p: [one, e(-2.5)], c: [0.0, 1.0], canonical: SeqLabel::BidiscW3 { p: e(-2.5) } }),
    ];
    let custom = [
        (path(one, 1.0, 0.0), path(c(0.0, 1.0), 1.0, 0.0)),
        (path(one, 1.0, 0.0), path(one, 2.0, 0.0)),
        (path(one, 2.0, 0.0), path(-one, 1.0, 0.0)),
        (path(e(0.3), 1.0, 0.0), path(c(0.5, 0.0), 1.0, 0.0)),
        (path(c(0.0, 0.3), 1.0, 0.0), path(-one, 1.0, 0.0)),
        (path(one, 1.0, 2.0), path(e(2.0), 1.0, -1.0)),
        (path(c(0.0, -1.0), 1.5, 0.0), path(one, 1.5, 0.0)),
        (path(one, 0.5, 0.0), path(c(0.0, 1.0), 1.0, 0.0)),
        (path(e(1.0), 1.0, 0.5), path(c(0.2, 0.0), 1.0, 0.0)),
        (path(e(-1.0), 1.0, 0.0), path(c(0.0, 0.0), 1.0, 0.0)),
    ];
    for (a, b) in custom {
        let exp = expected_coordinatewise(&a, &b);
        cases.push((SeqLabel::Coordinatewise { coords: vec![a, b] }, exp));
    }
    let mut r = rng(2);
    let (mut worst_rate, mut bad_forms) = (1.0f64, Vec::new());
    for (i, (label, exp)) in cases.iter().enumerate() {
        let seq = PointSequence::bidisc(label.clone()).unwrap();
        let h = PreparedHorosphere::new(&CPoint::zeros(2), &seq, &cfg).unwrap();
        let (mut agree, mut decided) = (0usize, 0usize);
        for w in bidisc_pool(exp, &mut r, 300) {
            let est = h.estimate(&w).unwrap();
            for &radius in &cfg.r_grid {
                let v = h.verdict(&est, radius);
                if v.outcome == Outcome::Decided {
                    decided += 1;
                    agree += (v.decision == exp.contains(&w, radius)) as usize;
                }
            }
        }
        worst_rate = worst_rate.min(agree as f64 / decided.max(1) as f64);
        let form = canonical_form_bidisc(&seq, &cfg).unwrap();
        // a drifting coordinate is still turning by drift/n at the deepest
        // window, so its anchor is only resolved to about drift/tail_start
        let ok = form.outcome == Outcome::Decided
            && form.representative.as_ref().is_some_and(|g| g.approx_eq(&exp.canonical, 1e-4));
        if !ok {
            bad_forms.push(i);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        worst_rate >= 0.99 && bad_forms.is_empty() && secs < 30.0,
        format!("{} families, worst agreement {:.4}, wrong canonical forms {:?}; {secs:.2} s", cases.len(), worst_rate, bad_forms),
    )
}

fn criterion_3() -> Outcome_ {
    let cfg = MetricConfig::default();
    let d = Domain::Polydisc(2);
    let x = CPoint::zeros(2);
    let one = c(1.0, 0.0);
    let inter = SeqLabel::Interleaved { a: Box::new(SeqLabel::BidiscW3 { p: one }), b: Box::new(SeqLabel::BidiscW2 { p: one }) };
    let pp = principal_part_estimate(&d, &x, &BoundaryClass::trusted(PointSequence::bidisc(inter).unwrap()), &cfg).unwrap();
    let corner = CPoint(vec![one, one]);
    let spread = pp.set.points.iter().map(|q| q.dist(&corner)).fold(0.0, f64::max);
    let ok_a = !pp.set.points.is_empty() && spread <= 1e-2;
    let w3 = principal_part_estimate(&d, &x, &BoundaryClass::trusted(PointSequence::bidisc(SeqLabel::BidiscW3 { p: one }).unwrap()), &cfg).unwrap();
    let off = w3.set.points.iter().map(|q| (q[1] - one).norm()).fold(0.0, f64::max);
    let mut bins = [false; 100];
    for q in &w3.set.points {
        if q[0].norm() <= 1.0 + 1e-9 {
            bins[(((q[0].re + 1.0) / 2.0 * 100.0) as usize).min(99)] = true;
        }
    }
    let cover = bins.iter().filter(|b| **b).count() as f64 / 100.0;
    (
        ok_a && off <= 1e-2 && cover >= 0.9,
        format!(
            "interleaved: {} clusters within {spread:.2e} of (1,1); W3(1): {} points, second coordinate off by {off:.2e}, Re c covers {cover:.2}",
            pp.set.points.len(),
            w3.set.points.len()
        ),
    )
}

fn criterion_4() -> Outcome_ {
    let cfg = MetricConfig::default();
    let d = Domain::Polydisc(2);
    let f = Ray::new(d.clone(), CPoint::from_pairs(&[(1.0, 0.0), (0.0, 0.0)]), vec![1.0, 0.0], 0.0).unwrap();
    let g = Ray::new(d.clone(), CPoint::from_pairs(&[(-1.0, 0.0), (0.0, 0.0)]), vec![1.0, 0.0], 0.0).unwrap();
    let mut r = rng(4);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (t, s) = (r.gen_range(0.0..12.0), r.gen_range(0.0..12.0));
        worst = worst.max(gromov_product(&d, &f.at(t), &g.at(s), &CPoint::zeros(2), &cfg).unwrap().abs());
    }
    (worst < 1e-9, format!("largest |product| {worst:.2e} over 100 pairs"))
}

fn criterion_5() -> Outcome_ {
    let cfg = MetricConfig::default();
    let d = Domain::Polydisc(2);
    let face = |t1: f64, t2: f64| {
        PointSequence::bidisc(SeqLabel::Coordinatewise { coords: vec![path(c(t1, 0.0), 1.0, 0.0), path(c(t2, 0.0), 1.0, 0.0)] })
            .unwrap()
    };
    let (a, b, e) = (face(1.0, 0.0), face(0.0, 1.0), face(-1.0, 0.0));
    let w = CPoint::zeros(2);
    let ab = seq_equiv_s(&d, &w, &a, &b, &cfg).unwrap();
    let bc = seq_equiv_s(&d, &w, &b, &e, &cfg).unwrap();
    let ac = seq_equiv_s(&d, &w, &a, &e, &cfg).unwrap();
    (
        ab.is_true() && bc.is_true() && ac.is_false() && ac.margin.abs() < 1e-6,
        format!("ab {}, bc {}, ac {} with product {:.3e} moving {:.1e} across doublings", ab.decision, bc.decision, ac.decision, ac.estimate, ac.margin),
    )
}

fn criterion_6() -> Outcome_ {
    let cfg = MetricConfig::default();
    let (d3, d6) = (
        delta_hyperbolicity_estimate(&Domain::UnitDisc, 3.0, &cfg).unwrap(),
        delta_hyperbolicity_estimate(&Domain::UnitDisc, 6.0, &cfg).unwrap(),
    );
    let (b3, b6) = (
        delta_hyperbolicity_estimate(&Domain::Polydisc(2), 3.0, &cfg).unwrap(),
        delta_hyperbolicity_estimate(&Domain::Polydisc(2), 6.0, &cfg).unwrap(),
    );
    let change = (d6 - d3).abs() / d3;
    let ideal = 0.5 * (1.0 + 2f64.sqrt()).ln();
    (
        change < 0.1 && b6 / b3 >= 1.5,
        format!("disc {d3:.4} -> {d6:.4} (ideal triangle {ideal:.4}), change {:.1}%; bidisc {b3:.3} -> {b6:.3}, ratio {:.2}", 100.0 * change, b6 / b3),
    )
}

fn criterion_7() -> Outcome_ {
    let cfg = MetricConfig::default();
    let chain = MapSpec::compose(MapSpec::Cayley2, MapSpec::SiegelToParabolic);
    let inv = chain.inverse_spec();
    let cs = cluster_set(&inv, &CPoint::zeros(2), &cfg).unwrap();
    let target = CPoint::from_pairs(&[(-1.0, 0.0), (0.0, 0.0)]);
    let gap = cs.points.iter().map(|q| q.dist(&target)).fold(f64::INFINITY, f64::min);
    // probes (1/n, 0) go back to ((1 − n)/(1 + n), 0)
    let probe = (1..=6)
        .map(|k| {
            let n = 10f64.powi(k);
            let back = inv.forward(&CPoint::from_pairs(&[(1.0 / n, 0.0), (0.0, 0.0)])).unwrap();
            back.dist(&CPoint::from_pairs(&[((1.0 - n) / (1.0 + n), 0.0), (0.0, 0.0)]))
        })
        .fold(0.0, f64::max);
    let iso = isometry_defect(&chain, &Domain::UnitBall(2), 1000, &cfg).unwrap();
    (
        cs.is_singleton() && gap <= 1e-6 && probe < 1e-12 && iso.max_defect < 1e-9,
        format!("cluster {:?} at {gap:.1e} from (-1,0); probe preimages off by {probe:.1e}; isometry defect {:.1e}", cs.points.len(), iso.max_defect),
    )
}

fn criterion_8() -> Outcome_ {
    let cfg = MetricConfig::default();
    let half = MapSpec::DiscAutomorphism { a: c(-0.5, 0.0), theta: 0.0 };
    let phi = 2.0;
    let cases = [
        (Domain::UnitDisc, half.clone(), CPoint::real(1.0)),
        (Domain::UnitDisc, MapSpec::Composite(vec![MapSpec::rotation(-phi), half, MapSpec::rotation(phi)]), CPoint::scalar(C64::from_polar(1.0, phi))),
        (
            Domain::UnitBall(2),
            MapSpec::BallAutomorphism { a: CPoint::from_pairs(&[(-0.5, 0.0), (0.0, 0.0)]), phases: vec![PI, PI] },
            CPoint::from_pairs(&[(1.0, 0.0), (0.0, 0.0)]),
        ),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for (d, f, want) in cases {
        let r = denjoy_wolff_iterate(&d, &f, &d.center(), &cfg).unwrap();
        let off = r.target.points.iter().map(|q| q.dist(&want)).fold(0.0, f64::max);
        let good = r.orbits.len() >= 5 && !r.stagnated && r.target.is_singleton() && r.limit_spread() <= 1e-6 && off <= 1e-6 && r.invariance.is_true();
        ok &= good;
        notes.push(format!("spread {:.1e}, off {:.1e}, invariance {}", r.limit_spread(), off, r.invariance.detail));
    }
    (ok, notes.join("; "))
}

fn criterion_9() -> Outcome_ {
    let base = MetricConfig { samples: 120, ..MetricConfig::default() };
    let one = c(1.0, 0.0);
    let configs: Vec<(PointSequence, CPoint, CPoint)> = vec![
        (PointSequence::radial(Domain::UnitDisc, CPoint::real(1.0)).unwrap(), CPoint::real(0.0), CPoint::real(0.5)),
        (PointSequence::radial(Domain::UnitDisc, CPoint::scalar(C64::from_polar(1.0, 2.0))).unwrap(), CPoint::real(0.3), CPoint::scalar(c(-0.2, 0.4))),
        (PointSequence::radial(Domain::UnitBall(2), CPoint::from_pairs(&[(1.0, 0.0), (0.0, 0.0)])).unwrap(), CPoint::zeros(2), CPoint::from_pairs(&[(0.3, 0.0), (0.0, 0.2)])),
        (PointSequence::radial(Domain::UnitBall(2), CPoint::from_pairs(&[(0.6, 0.0), (0.0, 0.8)])).unwrap(), CPoint::zeros(2), CPoint::from_pairs(&[(-0.4, 0.1), (0.0, 0.0)])),
        (PointSequence::bidisc(SeqLabel::BidiscW1 { p1: one, p2: c(0.0, 1.0) }).unwrap(), CPoint::zeros(2), CPoint::from_pairs(&[(0.2, 0.0), (0.0, -0.3)])),
        (PointSequence::bidisc(SeqLabel::BidiscW2 { p: one }).unwrap(), CPoint::zeros(2), CPoint::from_pairs(&[(0.5, 0.0), (0.0, 0.0)])),
        (PointSequence::bidisc(SeqLabel::BidiscW3 { p: -one }).unwrap(), CPoint::zeros(2), CPoint::from_pairs(&[(0.0, 0.0), (0.4, 0.4)])),
        (PointSequence::radial(Domain::UnitDisc, CPoint::scalar(c(0.0, -1.0))).unwrap(), CPoint::real(0.0), CPoint::scalar(c(0.0, -0.6))),
        (PointSequence::radial(Domain::UnitBall(3), CPoint::from_pairs(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)])).unwrap(), CPoint::zeros(3), CPoint::from_pairs(&[(0.1, 0.0), (0.0, 0.1), (0.0, 0.0)])),
        (PointSequence::bidisc(SeqLabel::BidiscW1 { p1: -one, p2: -one }).unwrap(), CPoint::zeros(2), CPoint::from_pairs(&[(-0.3, 0.0), (0.3, 0.0)])),
    ];
    let (mut failed, mut checked, mut violations) = (Vec::new(), 0usize, 0usize);
    for (k, (seq, x, y)) in configs.iter().enumerate() {
        let cfg = base.with_seed(100 + k as u64);
        let rep = horosphere_property_suite(x, seq, &cfg).unwrap();
        if !rep.passed() {
            failed.push(k);
        }
        let rb = rebase_factors(&seq.domain, x, y, seq, &cfg).unwrap();
        checked += rb.checked;
        violations += rb.violations;
        if !rb.within_bounds || rb.checked == 0 {
            failed.push(100 + k);
        }
    }
    (
        failed.is_empty() && violations == 0,
        format!("10 configurations, failing {failed:?}; rebase inclusions {checked} checked, {violations} violated"),
    )
}

fn criterion_10() -> Outcome_ {
    let cfg = ExperimentConfig::new(Experiment::OracleSuite);
    let a = run_experiment(&cfg).unwrap();
    let b = run_experiment(&cfg).unwrap();
    let (ja, jb) = (a.report.to_json(), b.report.to_json());
    (
        ja == jb && a.report.counts.fail == 0,
        format!("{} bytes, {} items, identical: {}", ja.len(), a.report.items.len(), ja == jb),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome_); 10] = [
        ("disc horosphere oracle", criterion_1),
        ("bidisc classification", criterion_2),
        ("interleaved principal part", criterion_3),
        ("Gromov product zero", criterion_4),
        ("non-transitivity of ~s", criterion_5),
        ("delta-hyperbolicity contrast", criterion_6),
        ("Cayley chain boundary behavior", criterion_7),
        ("Denjoy-Wolff", criterion_8),
        ("invariant suite", criterion_9),
        ("determinism", criterion_10),
    ];
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let tag = format!("{}", i + 1);
        if filter.as_ref().is_some_and(|s| s != &tag) {
            continue;
        }
        let (ok, detail) = f();
        println!("{} [{:>2}] {name}: {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
        failures += (!ok) as usize;
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
