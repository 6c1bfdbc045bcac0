//! Sampled checks of the structural properties every horosphere family
//! must satisfy. Each check counts violations; points whose estimate falls
//! in the tolerance band are counted separately and never as violations.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::equivalence::horosphere_pool;
use super::horosphere::{HoroEstimate, PreparedHorosphere};
use super::sequence::PointSequence;
use super::tail::Outcome;
use crate::config::MetricConfig;
use crate::error::Result;
use crate::metric_core::{evaluate_distance, numeric::random_unit};
use crate::point::CPoint;
use crate::rng::seeded;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub checked: usize,
    pub violations: usize,
    pub banded: usize,
    pub detail: String,
}

impl PropertyCheck {
    fn new(name: &str) -> PropertyCheck {
        PropertyCheck { name: name.into(), checked: 0, violations: 0, banded: 0, detail: String::new() }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.checked > 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub domain: String,
    pub seed: u64,
    pub checks: Vec<PropertyCheck>,
    /// `(ρ, R)` pairs: below `R` no sampled point of the metric ball of
    /// radius `ρ` around the base belongs to the horosphere.
    pub escape_radii: Vec<(f64, f64)>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(PropertyCheck::passed)
    }

    pub fn check(&self, name: &str) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

const ESCAPE_RHOS: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

/// Runs openness, monotonicity, empty intersection, uniform escape and
/// midpoint convexity on points sampled near the sequence's limits.
pub fn horosphere_property_suite(x: &CPoint, seq: &PointSequence, cfg: &MetricConfig) -> Result<PropertyReport> {
    let d = &seq.domain;
    let h = PreparedHorosphere::new(x, seq, cfg)?;
    let pool = horosphere_pool(d, &[seq], cfg.samples, cfg.seed ^ 0x9A0B, cfg)?;
    let est: Vec<HoroEstimate> = pool.iter().map(|w| h.estimate(w)).collect::<Result<_>>()?;
    let mut rng = seeded(cfg.seed, 0x9A0C);

    // openness: a member with margin m keeps every point within K < m/2
    let mut open = PropertyCheck::new("openness");
    let r_mid = cfg.r_grid[cfg.r_grid.len() / 2];
    let mut tried = 0;
    for (w, e) in pool.iter().zip(&est) {
        let v = h.verdict(e, r_mid);
        if !v.is_true() || tried >= 40 {
            continue;
        }
        tried += 1;
        let reach = v.margin / 2.0;
        let delta = d.boundary_distance(w)?;
        for _ in 0..3 {
            let dir = CPoint::from_real(&random_unit(&mut rng, 2 * w.dim()));
            let mut step = delta * rng.gen_range(0.1..0.9);
            let mut near = None;
            for _ in 0..30 {
                let cand = &(w + &dir.scale(step));
                if d.contains(cand)? && evaluate_distance(d, w, cand, cfg)?.upper() < reach {
                    near = Some(cand.clone());
                    break;
                }
                step *= 0.5;
            }
            let Some(near) = near else { continue };
            open.checked += 1;
            let nv = h.contains(&near, r_mid)?;
            match nv.outcome {
                Outcome::Decided if !nv.decision => open.violations += 1,
                Outcome::Decided => {}
                _ => open.banded += 1,
            }
        }
    }
    open.detail = format!("R = {r_mid}, {tried} members perturbed");

    // monotonicity in R
    let mut mono = PropertyCheck::new("monotonicity");
    for e in &est {
        let vs: Vec<_> = cfg.r_grid.iter().map(|&r| h.verdict(e, r)).collect();
        for pair in vs.windows(2) {
            if pair[0].outcome != Outcome::Decided || pair[1].outcome != Outcome::Decided {
                mono.banded += 1;
                continue;
            }
            mono.checked += 1;
            if pair[0].decision && !pair[1].decision {
                mono.violations += 1;
            }
        }
    }

    // nothing belongs to every horosphere of a grid reaching 1e-6
    let mut empty = PropertyCheck::new("empty_intersection");
    let top = cfg.r_grid[cfg.r_grid.len() - 1];
    let steps = 12;
    let grid: Vec<f64> = (0..=steps).map(|k| top * (1e-6 / top).powf(k as f64 / steps as f64)).collect();
    for e in &est {
        empty.checked += 1;
        if grid.iter().all(|&r| h.verdict(e, r).is_true()) {
            empty.violations += 1;
        }
    }
    empty.detail = format!("grid from {top} down to 1e-6 in {} steps", steps + 1);

    // uniform escape from metric balls: R <= exp(-2ρ) leaves the ball
    let mut escape = PropertyCheck::new("uniform_escape");
    let mut inner = pool.clone();
    let mut inner_est = est.clone();
    for _ in 0..cfg.samples.min(200) {
        let w = d.sample_point(&mut rng);
        inner_est.push(h.estimate(&w)?);
        inner.push(w);
    }
    let kx: Vec<f64> = inner.iter().map(|w| evaluate_distance(d, x, w, cfg).map(|v| v.upper())).collect::<Result<_>>()?;
    let mut radii = Vec::new();
    let mut prev = f64::INFINITY;
    for &rho in &ESCAPE_RHOS {
        let r0 = (-2.0 * rho).exp();
        let mut observed = f64::INFINITY;
        for (e, k) in inner_est.iter().zip(&kx) {
            if *k > rho {
                continue;
            }
            observed = observed.min((2.0 * e.estimate()).exp());
            let v = h.verdict(e, r0);
            match v.outcome {
                Outcome::Decided => {
                    escape.checked += 1;
                    if v.decision {
                        escape.violations += 1;
                    }
                }
                _ => escape.banded += 1,
            }
        }
        if observed > prev * (1.0 + 1e-9) {
            escape.violations += 1;
        }
        prev = observed;
        radii.push((rho, observed));
    }
    escape.detail = "R0(ρ) = exp(-2ρ); observed radii non-increasing in ρ".into();

    // midpoints of members are members
    let mut convex = PropertyCheck::new("convexity");
    for &r in &cfg.r_grid {
        let members: Vec<&CPoint> =
            pool.iter().zip(&est).filter(|(_, e)| h.verdict(e, r).is_true()).map(|(w, _)| w).collect();
        if members.len() < 2 {
            continue;
        }
        for _ in 0..20 {
            let a = members[rng.gen_range(0..members.len())];
            let b = members[rng.gen_range(0..members.len())];
            let v = h.contains(&a.midpoint(b), r)?;
            match v.outcome {
                Outcome::Decided => {
                    convex.checked += 1;
                    if !v.decision {
                        convex.violations += 1;
                    }
                }
                _ => convex.banded += 1,
            }
        }
    }

    Ok(PropertyReport {
        domain: d.kind_name().into(),
        seed: cfg.seed,
        checks: vec![open, mono, empty, escape, convex],
        escape_radii: radii,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::horospheres::SeqLabel;
    use crate::metric_core::Domain;
    use crate::point::C64;

    #[test]
    fn disc_and_bidisc_pass() {
        let cfg = MetricConfig { samples: 120, ..MetricConfig::default() };
        let s = PointSequence::radial(Domain::UnitDisc, CPoint::real(1.0)).unwrap();
        let r = horosphere_property_suite(&CPoint::real(0.0), &s, &cfg).unwrap();
        assert!(r.passed(), "{r:#?}");
        let s = PointSequence::bidisc(SeqLabel::BidiscW1 { p1: C64::new(1.0, 0.0), p2: C64::new(0.0, 1.0) }).unwrap();
        let r = horosphere_property_suite(&CPoint::zeros(2), &s, &cfg).unwrap();
        assert!(r.passed(), "{r:#?}");
        let rs: Vec<f64> = r.escape_radii.iter().map(|p| p.1).collect();
        assert!(rs.windows(2).all(|w| w[1] <= w[0]));
    }
}
