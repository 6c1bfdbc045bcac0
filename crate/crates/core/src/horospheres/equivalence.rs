use rand::Rng;
use serde::{Deserialize, Serialize};

use super::bidisc::{canonical_form_bidisc, inclusion_radius};
use super::cluster::tail_clusters;
use super::horosphere::PreparedHorosphere;
use super::sequence::PointSequence;
use super::tail::{Outcome, TailWindows, Verdict};
use crate::config::MetricConfig;
use crate::error::{HoroError, Result};
use crate::metric_core::{distance, Domain};
use crate::point::CPoint;
use crate::rng::seeded;

/// Boundary limit of a sequence whose tail has a single cluster.
fn single_limit(seq: &PointSequence, cfg: &MetricConfig) -> Result<Option<CPoint>> {
    let w = TailWindows::for_sequence(seq, cfg)?;
    let (cl, stray) = tail_clusters(&w.points(seq)?, cfg.merge_radius());
    Ok((cl.len() == 1 && stray == 0).then(|| cl[0].limit.clone()))
}

/// Sample points near the tail limits of the given sequences plus uniform
/// points of the domain.
pub(crate) fn horosphere_pool(
    d: &Domain,
    seqs: &[&PointSequence],
    count: usize,
    seed: u64,
    cfg: &MetricConfig,
) -> Result<Vec<CPoint>> {
    let mut limits = Vec::new();
    for s in seqs {
        let w = TailWindows::for_sequence(s, cfg)?;
        let (cl, _) = tail_clusters(&w.points(s)?, cfg.merge_radius());
        limits.extend(cl.into_iter().map(|c| c.limit));
    }
    let mut rng = seeded(seed, 0xE9_0001);
    Ok((0..count)
        .map(|_| {
            if limits.is_empty() || rng.gen::<f64>() < 0.25 {
                d.sample_point(&mut rng)
            } else {
                let p = &limits[rng.gen_range(0..limits.len())];
                d.sample_near(p, 1e-3, 0.7, &mut rng)
            }
        })
        .collect())
}

/// Generic test: find, for every grid radius, `R'` within a factor `1e4`
/// such that the sampled parts of the two horospheres nest both ways.
fn rescaling_search(d: &Domain, x: &CPoint, a: &PointSequence, b: &PointSequence, cfg: &MetricConfig) -> Result<Verdict> {
    let pa = PreparedHorosphere::new(x, a, cfg)?;
    let pb = PreparedHorosphere::new(x, b, cfg)?;
    let pool = horosphere_pool(d, &[a, b], cfg.samples, cfg.seed, cfg)?;
    let mut la = Vec::new();
    let mut lb = Vec::new();
    for w in &pool {
        let ea = pa.estimate(w)?;
        let eb = pb.estimate(w)?;
        if ea.tail.converged && eb.tail.converged {
            la.push(ea.estimate());
            lb.push(eb.estimate());
        }
    }
    if la.len() < 10 {
        return Ok(Verdict::inconclusive(0.0, 0.0, format!("only {} pool points converged", la.len())));
    }
    let mut worst = f64::INFINITY;
    let mut worst_r = cfg.r_grid[0];
    for &r in &cfg.r_grid {
        let ratio = (inclusion_radius(&la, &lb, r, cfg.tol) / r).min(inclusion_radius(&lb, &la, r, cfg.tol) / r);
        if ratio < worst {
            worst = ratio;
            worst_r = r;
        }
    }
    let ok = worst >= 1e-4;
    Ok(Verdict::decided(
        ok,
        worst,
        worst.log10() + 4.0,
        format!("worst rescaling R'/R = {worst:.3e} at R = {worst_r} over {} pool points", la.len()),
    )
    .with_window(pa.window()))
}

/// Equivalence of two admissible sequences under mutual horosphere
/// inclusion up to rescaling.
pub fn sequences_equivalent(d: &Domain, x: &CPoint, a: &PointSequence, b: &PointSequence, cfg: &MetricConfig) -> Result<Verdict> {
    if &a.domain != d || &b.domain != d {
        return Err(HoroError::InvalidArgument("sequences live in a different domain".into()));
    }
    if a.label == b.label {
        return Ok(Verdict::decided(true, 1.0, 4.0, "identical sequences, R' = R"));
    }
    match d {
        Domain::UnitDisc | Domain::UnitBall(_) => {
            if let (Some(pa), Some(pb)) = (single_limit(a, cfg)?, single_limit(b, cfg)?) {
                let on_boundary = |p: &CPoint| 1.0 - p.norm() <= cfg.merge_radius();
                if on_boundary(&pa) && on_boundary(&pb) {
                    let gap = pa.dist(&pb);
                    let same = gap <= cfg.merge_radius();
                    return Ok(Verdict::decided(
                        same,
                        gap,
                        cfg.merge_radius() - gap,
                        format!("limit points {:?} and {:?}", pa.0, pb.0),
                    ));
                }
            }
        }
        Domain::Polydisc(2) => {
            let fa = canonical_form_bidisc(a, cfg);
            let fb = canonical_form_bidisc(b, cfg);
            if let (Ok(fa), Ok(fb)) = (fa, fb) {
                if let (Some(ra), Some(rb)) = (&fa.representative, &fb.representative) {
                    let same = ra.approx_eq(rb, cfg.merge_radius());
                    return Ok(Verdict::decided(
                        same,
                        if same { 1.0 } else { 0.0 },
                        if same { 1.0 } else { -1.0 },
                        format!("canonical forms {ra:?} and {rb:?}"),
                    ));
                }
            }
        }
        _ => {}
    }
    rescaling_search(d, x, a, b, cfg)
}

/// Base-change factors of a horosphere family with inclusion diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RebaseReport {
    pub alpha: f64,
    pub beta: f64,
    pub converged: bool,
    /// `K(x, y)`, the a priori bound on `|½ log α|` and `|½ log β|`.
    pub base_distance: f64,
    pub within_bounds: bool,
    pub checked: usize,
    pub violations: usize,
    /// Samples skipped because an estimate fell into the tolerance band or
    /// did not converge.
    pub banded: usize,
}

/// `α`, `β` with `E_y(αR) ⊂ E_x(R) ⊂ E_y(βR)`, checked on sampled points.
pub fn rebase_factors(d: &Domain, x: &CPoint, y: &CPoint, seq: &PointSequence, cfg: &MetricConfig) -> Result<RebaseReport> {
    if &seq.domain != d {
        return Err(HoroError::InvalidArgument("sequence lives in a different domain".into()));
    }
    let px = PreparedHorosphere::new(x, seq, cfg)?;
    let py = PreparedHorosphere::new(y, seq, cfg)?;
    let eb = py.estimate(x)?;
    let ea = px.estimate(y)?;
    let half_log_beta = eb.estimate();
    let half_log_alpha = -ea.estimate();
    let kxy = if d.has_closed_form() {
        distance(d, x, y)?
    } else {
        crate::metric_core::convex_distance_bounds(d, x, y, cfg)?.1
    };
    let within_bounds = half_log_beta.abs() <= kxy + cfg.tol && half_log_alpha.abs() <= kxy + cfg.tol;
    let (alpha, beta) = ((2.0 * half_log_alpha).exp(), (2.0 * half_log_beta).exp());
    let pool = horosphere_pool(d, &[seq], 100, cfg.seed ^ 0x5EED, cfg)?;
    let mut checked = 0;
    let mut violations = 0;
    let mut banded = 0;
    for w in &pool {
        let bx = px.estimate(w)?;
        let by = py.estimate(w)?;
        if !(bx.tail.converged && by.tail.converged) {
            banded += cfg.r_grid.len();
            continue;
        }
        let (bx, by) = (bx.estimate(), by.estimate());
        for &r in &cfg.r_grid {
            let tx = 0.5 * r.ln();
            checked += 1;
            // E_y(αR) ⊂ E_x(R)
            if by < tx + half_log_alpha - cfg.tol && bx >= tx + cfg.tol {
                violations += 1;
            }
            // E_x(R) ⊂ E_y(βR)
            if bx < tx - cfg.tol && by >= tx + half_log_beta + cfg.tol {
                violations += 1;
            }
        }
    }
    Ok(RebaseReport {
        alpha,
        beta,
        converged: ea.tail.converged && eb.tail.converged,
        base_distance: kxy,
        within_bounds,
        checked,
        violations,
        banded,
    })
}

impl Verdict {
    pub fn outcome_label(&self) -> &'static str {
        match self.outcome {
            Outcome::Decided if self.decision => "true",
            Outcome::Decided => "false",
            Outcome::Undecidable => "undecidable",
            Outcome::Inconclusive => "inconclusive",
        }
    }
}
