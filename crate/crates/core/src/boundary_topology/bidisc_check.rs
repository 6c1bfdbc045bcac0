use serde::{Deserialize, Serialize};

use super::{converges_h, BoundaryClass};
use crate::config::MetricConfig;
use crate::error::Result;
use crate::horospheres::{PointSequence, SeqLabel, Verdict};
use crate::metric_core::Domain;
use crate::point::{unimodular, CPoint, C64};

/// One closure relation: the constant list at `from` converges to `to`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureCheck {
    pub step: String,
    pub from: SeqLabel,
    pub to: SeqLabel,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologyReport {
    pub checks: Vec<ClosureCheck>,
    pub passed: bool,
}

/// Closure relations showing that every nonempty closed set of bidisc
/// boundary classes is the whole boundary: corner classes accumulate at
/// face classes (step A) and face classes at corner classes (B, and C by
/// swapping coordinates).
pub fn bidisc_topology_trivial_check(cfg: &MetricConfig) -> Result<TopologyReport> {
    let d = Domain::Polydisc(2);
    let x = CPoint::zeros(2);
    let one = C64::new(1.0, 0.0);
    let qs: Vec<C64> = [0.0, 1.0, 2.5, 4.0].iter().map(|&t| unimodular(t)).collect();
    let mut pairs: Vec<(&str, SeqLabel, SeqLabel)> = vec![
        ("A", SeqLabel::BidiscW1 { p1: one, p2: one }, SeqLabel::BidiscW2 { p: one }),
        ("A", SeqLabel::BidiscW1 { p1: one, p2: one }, SeqLabel::BidiscW3 { p: one }),
    ];
    for &q in &qs {
        pairs.push(("B", SeqLabel::BidiscW2 { p: one }, SeqLabel::BidiscW1 { p1: one, p2: q }));
        pairs.push(("C", SeqLabel::BidiscW3 { p: one }, SeqLabel::BidiscW1 { p1: q, p2: one }));
    }
    let mut checks = Vec::new();
    for (step, from, to) in pairs {
        let a = BoundaryClass::trusted(PointSequence::bidisc(from.clone())?);
        let b = BoundaryClass::trusted(PointSequence::bidisc(to.clone())?);
        let verdict = converges_h(&d, &x, &vec![a; 4], &b, cfg)?;
        checks.push(ClosureCheck { step: step.into(), from, to, verdict });
    }
    let passed = checks.iter().all(|c| c.verdict.is_true());
    Ok(TopologyReport { checks, passed })
}
