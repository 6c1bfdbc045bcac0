use rand::Rng;
use serde::{Deserialize, Serialize};

use super::cluster::{tail_clusters, TailCluster};
use super::sequence::{PointSequence, SeqLabel};
use super::tail::{Outcome, TailWindows};
use crate::config::MetricConfig;
use crate::error::{HoroError, Result};
use crate::metric_core::sampling::log_uniform;
use crate::metric_core::Domain;
use crate::point::{disc_defect, CPoint, C64};
use crate::rng::seeded;

/// Limit configuration of a sequence converging to a point of `∂D²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum BidiscCase {
    /// Only the first coordinate reaches the circle: `E = E_D(p, R) × D`.
    FaceZ1 { p: C64 },
    /// Only the second coordinate reaches the circle: `E = D × E_D(p, R)`.
    FaceZ2 { p: C64 },
    Corner { p1: C64, p2: C64, t1: f64, t2: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BidiscClass {
    pub t1: f64,
    pub t2: f64,
    pub case: BidiscCase,
}

/// One factor pair of a product horosphere rule:
/// `level(w) = ½ log max(c1 P(p1, w1), c2 P(p2, w2))` with
/// `P(p, ζ) = |ζ − p|²/(1 − |ζ|²)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleTerm {
    pub p1: C64,
    pub p2: C64,
    pub c1: f64,
    pub c2: f64,
}

impl RuleTerm {
    pub fn level(&self, w: &CPoint) -> f64 {
        let part = |c: f64, p: C64, z: C64| if c > 0.0 { c * (z - p).norm_sqr() / disc_defect(z) } else { 0.0 };
        0.5 * part(self.c1, self.p1, w[0]).max(part(self.c2, self.p2, w[1])).ln()
    }
}

/// A horosphere described by closed-form product terms; the level of an
/// intersection of horospheres is the max over its terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoroRule {
    pub terms: Vec<RuleTerm>,
}

impl HoroRule {
    pub fn level(&self, w: &CPoint) -> f64 {
        self.terms.iter().map(|t| t.level(w)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, w: &CPoint, radius: f64) -> bool {
        self.level(w) < 0.5 * radius.ln()
    }

    /// Rule of a canonical representative.
    pub fn of_canonical(label: &SeqLabel) -> Option<HoroRule> {
        let one = C64::new(1.0, 0.0);
        let term = match *label {
            SeqLabel::BidiscW1 { p1, p2 } => RuleTerm { p1, p2, c1: 1.0, c2: 1.0 },
            SeqLabel::BidiscW2 { p } => RuleTerm { p1: p, p2: one, c1: 1.0, c2: 0.0 },
            SeqLabel::BidiscW3 { p } => RuleTerm { p1: one, p2: p, c1: 0.0, c2: 1.0 },
            _ => return None,
        };
        Some(HoroRule { terms: vec![term] })
    }
}

impl BidiscClass {
    pub fn rule_term(&self) -> RuleTerm {
        let one = C64::new(1.0, 0.0);
        match self.case {
            BidiscCase::FaceZ1 { p } => RuleTerm { p1: p, p2: one, c1: 1.0, c2: 0.0 },
            BidiscCase::FaceZ2 { p } => RuleTerm { p1: one, p2: p, c1: 0.0, c2: 1.0 },
            BidiscCase::Corner { p1, p2, t1, t2 } => RuleTerm { p1, p2, c1: t2.min(1.0), c2: t1.min(1.0) },
        }
    }

    /// `½ log` of the rule value at `w` (the limsup for base point `0`).
    pub fn level(&self, w: &CPoint) -> f64 {
        self.rule_term().level(w)
    }

    pub fn contains(&self, w: &CPoint, radius: f64) -> bool {
        self.level(w) < 0.5 * radius.ln()
    }
}

/// `limsup` of a ratio from its three window maxima: a steady doubling
/// trend of more than 2^{±1/4} per window is read as divergence to `∞` or
/// decay to `0`; otherwise the last window's maximum is taken.
fn extrapolated_limsup(maxima: [f64; 3], doubling: bool) -> f64 {
    if doubling {
        let s1 = (maxima[1] / maxima[0]).log2();
        let s2 = (maxima[2] / maxima[1]).log2();
        if s1 > 0.25 && s2 > 0.25 {
            return f64::INFINITY;
        }
        if s1 < -0.25 && s2 < -0.25 {
            return 0.0;
        }
    }
    maxima[2]
}

fn unit_or_none(z: C64, tol: f64) -> Option<C64> {
    (1.0 - z.norm() <= tol).then(|| z / z.norm())
}

fn classify_cluster(cl: &TailCluster, points: &[Vec<CPoint>; 3], doubling: bool, cfg: &MetricConfig) -> Result<BidiscClass> {
    let band = cfg.merge_radius();
    let p = &cl.limit;
    match (unit_or_none(p[0], band), unit_or_none(p[1], band)) {
        (Some(q), None) => Ok(BidiscClass { t1: 0.0, t2: f64::INFINITY, case: BidiscCase::FaceZ1 { p: q } }),
        (None, Some(q)) => Ok(BidiscClass { t1: f64::INFINITY, t2: 0.0, case: BidiscCase::FaceZ2 { p: q } }),
        (Some(p1), Some(p2)) => {
            let mut r1 = [0.0; 3];
            let mut r2 = [0.0; 3];
            for k in 0..3 {
                for &i in &cl.members[k] {
                    let u = &points[k][i];
                    let ratio = disc_defect(u[0]) / disc_defect(u[1]);
                    r1[k] = f64::max(r1[k], ratio);
                    r2[k] = f64::max(r2[k], 1.0 / ratio);
                }
            }
            if r1.iter().any(|r| *r == 0.0) {
                return Err(HoroError::NonConvergent("a tail window misses a cluster".into()));
            }
            let t1 = extrapolated_limsup(r1, doubling);
            let t2 = extrapolated_limsup(r2, doubling);
            Ok(BidiscClass { t1, t2, case: BidiscCase::Corner { p1, p2, t1, t2 } })
        }
        (None, None) => Err(HoroError::Precondition("sequence does not approach the boundary of the bidisc".into())),
    }
}

struct BidiscTail {
    clusters: Vec<TailCluster>,
    points: [Vec<CPoint>; 3],
    doubling: bool,
}

fn bidisc_tail(seq: &PointSequence, cfg: &MetricConfig) -> Result<BidiscTail> {
    if seq.domain != Domain::Polydisc(2) {
        return Err(HoroError::InvalidArgument("bidisc operations need a sequence in the bidisc".into()));
    }
    cfg.validate()?;
    let windows = TailWindows::for_sequence(seq, cfg)?;
    let points = windows.points(seq)?;
    let (clusters, stray) = tail_clusters(&points, cfg.merge_radius());
    if stray > 0 {
        return Err(HoroError::NonConvergent(format!("{stray} tail points match no limit point")));
    }
    Ok(BidiscTail { clusters, points, doubling: seq.len().is_none() })
}

/// `T1`, `T2` and the limit configuration of a sequence converging to a
/// boundary point of the bidisc.
pub fn bidisc_classify(seq: &PointSequence, cfg: &MetricConfig) -> Result<BidiscClass> {
    let tail = bidisc_tail(seq, cfg)?;
    if tail.clusters.len() != 1 {
        return Err(HoroError::NonConvergent(format!("tail has {} limit points", tail.clusters.len())));
    }
    classify_cluster(&tail.clusters[0], &tail.points, tail.doubling, cfg)
}

/// Closed-form horosphere rule of an arbitrary bidisc sequence whose tail
/// splits into finitely many convergent subsequences: the max over the
/// subsequence rules.
pub fn bidisc_rule(seq: &PointSequence, cfg: &MetricConfig) -> Result<(HoroRule, Vec<BidiscClass>)> {
    let tail = bidisc_tail(seq, cfg)?;
    let classes = tail
        .clusters
        .iter()
        .map(|c| classify_cluster(c, &tail.points, tail.doubling, cfg))
        .collect::<Result<Vec<_>>>()?;
    let rule = HoroRule { terms: classes.iter().map(BidiscClass::rule_term).collect() };
    Ok((rule, classes))
}

/// Sample pool for comparing bidisc horospheres: each coordinate is either
/// uniform or close to one of the given circle points, at log-uniform depth.
pub(crate) fn bidisc_pool(anchors: &[C64], count: usize, seed: u64) -> Vec<CPoint> {
    let mut rng = seeded(seed, 0xB1D15C);
    let coord = |rng: &mut rand_chacha::ChaCha8Rng| -> C64 {
        if anchors.is_empty() || rng.gen::<f64>() < 0.3 {
            let r = rng.gen::<f64>().sqrt();
            C64::from_polar(r, std::f64::consts::TAU * rng.gen::<f64>())
        } else {
            let q = anchors[rng.gen_range(0..anchors.len())];
            let eps = log_uniform(rng, 1e-9, 1.0);
            let angle = (rng.gen::<f64>() * 2.0 - 1.0) * 2.0 * eps.sqrt();
            q * C64::from_polar(1.0 - eps, angle)
        }
    };
    (0..count).map(|_| CPoint(vec![coord(&mut rng), coord(&mut rng)])).collect()
}

/// Largest `R'` with `{level_a < ½ log R'} ⊂ {level_b < ½ log R}` on the
/// pool, ignoring pool points inside the tolerance band of `b`.
pub(crate) fn inclusion_radius(
    level_a: &[f64],
    level_b: &[f64],
    radius: f64,
    tol: f64,
) -> f64 {
    let thr = 0.5 * radius.ln();
    level_a
        .iter()
        .zip(level_b)
        .filter(|(_, lb)| **lb >= thr + tol)
        .map(|(la, _)| (2.0 * la).exp())
        .fold(f64::INFINITY, f64::min)
}

/// Whether two rules are equivalent on the pool: at every grid radius
/// each side fits into the other after rescaling by at most `1e4`.
pub(crate) fn rules_equivalent(a: &HoroRule, b: &HoroRule, pool: &[CPoint], cfg: &MetricConfig) -> (bool, f64) {
    let la: Vec<f64> = pool.iter().map(|w| a.level(w)).collect();
    let lb: Vec<f64> = pool.iter().map(|w| b.level(w)).collect();
    let mut worst = f64::INFINITY;
    for &r in &cfg.r_grid {
        let ab = inclusion_radius(&la, &lb, r, cfg.tol) / r;
        let ba = inclusion_radius(&lb, &la, r, cfg.tol) / r;
        worst = worst.min(ab).min(ba);
    }
    (worst >= 1e-4, worst)
}

/// Outcome of [`canonical_form_bidisc`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub representative: Option<SeqLabel>,
    pub outcome: Outcome,
    pub rule: HoroRule,
    /// Each candidate with the worst rescaling ratio found on the pool.
    pub candidates: Vec<(SeqLabel, f64)>,
}


/// The unique representative among `W1(p1,p2)`, `W2(p)`, `W3(p)` whose
/// horospheres are equivalent to those of `seq`.
pub fn canonical_form_bidisc(seq: &PointSequence, cfg: &MetricConfig) -> Result<CanonicalForm> {
    let (rule, classes) = bidisc_rule(seq, cfg)?;
    let mut firsts: Vec<C64> = Vec::new();
    let mut seconds: Vec<C64> = Vec::new();
    let mut candidates: Vec<SeqLabel> = Vec::new();
    for c in &classes {
        match c.case {
            BidiscCase::FaceZ1 { p } => {
                firsts.push(p);
                candidates.push(SeqLabel::BidiscW2 { p });
            }
            BidiscCase::FaceZ2 { p } => {
                seconds.push(p);
                candidates.push(SeqLabel::BidiscW3 { p });
            }
            BidiscCase::Corner { p1, p2, .. } => {
                firsts.push(p1);
                seconds.push(p2);
                candidates.extend([
                    SeqLabel::BidiscW1 { p1, p2 },
                    SeqLabel::BidiscW2 { p: p1 },
                    SeqLabel::BidiscW3 { p: p2 },
                ]);
            }
        }
    }
    for &a in &firsts {
        for &b in &seconds {
            candidates.push(SeqLabel::BidiscW1 { p1: a, p2: b });
        }
    }
    let mut unique: Vec<SeqLabel> = Vec::new();
    for c in candidates {
        if !unique.iter().any(|u| u.approx_eq(&c, cfg.merge_radius())) {
            unique.push(c);
        }
    }
    let anchors: Vec<C64> = firsts.iter().chain(&seconds).copied().collect();
    let pool = bidisc_pool(&anchors, 4 * cfg.samples, cfg.seed);
    let mut scored = Vec::new();
    let mut passing = Vec::new();
    for c in unique {
        let Some(cr) = HoroRule::of_canonical(&c) else { continue };
        let (ok, worst) = rules_equivalent(&rule, &cr, &pool, cfg);
        if ok {
            passing.push(c.clone());
        }
        scored.push((c, worst));
    }
    let (representative, outcome) = if passing.len() == 1 {
        (passing.pop(), Outcome::Decided)
    } else {
        (None, Outcome::Inconclusive)
    };
    Ok(CanonicalForm { representative, outcome, rule, candidates: scored })
}
