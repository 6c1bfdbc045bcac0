use serde::{Deserialize, Serialize};

use super::sequence::PointSequence;
use super::tail::{TailEstimate, TailWindows, Verdict};
use crate::config::MetricConfig;
use crate::error::{HoroError, Result};
use crate::metric_core::{evaluate_distance, DistanceValue, Domain};
use crate::point::{disc_defect, CPoint, C64};

/// `E_x({u_n}, R)`: the points `w` with
/// `limsup_n K(w, u_n) − K(x, u_n) < ½ log R`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Horosphere {
    pub domain: Domain,
    pub base: CPoint,
    pub seq: PointSequence,
    pub radius: f64,
}

impl Horosphere {
    pub fn new(base: CPoint, seq: PointSequence, radius: f64) -> Result<Horosphere> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(HoroError::InvalidArgument("horosphere radius must be positive".into()));
        }
        if !seq.domain.contains(&base)? {
            return Err(HoroError::OutsideDomain);
        }
        Ok(Horosphere { domain: seq.domain.clone(), base, seq, radius })
    }

    pub fn threshold(&self) -> f64 {
        0.5 * self.radius.ln()
    }
}

/// Tail estimate of `K(w, u_n) − K(x, u_n)` with a bracket that is only
/// wider than a point when the distances themselves are bracketed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoroEstimate {
    pub tail: TailEstimate,
    pub lower: f64,
    pub upper: f64,
}

impl HoroEstimate {
    pub fn estimate(&self) -> f64 {
        self.tail.estimate
    }
}

/// A base point and sequence with the tail points and `K(x, u_n)` cached,
/// so that many membership queries share the work.
#[derive(Clone, Debug)]
pub struct PreparedHorosphere {
    pub base: CPoint,
    pub seq: PointSequence,
    windows: TailWindows,
    points: [Vec<CPoint>; 3],
    base_values: [Vec<DistanceValue>; 3],
    cfg: MetricConfig,
}

impl PreparedHorosphere {
    pub fn new(base: &CPoint, seq: &PointSequence, cfg: &MetricConfig) -> Result<PreparedHorosphere> {
        cfg.validate()?;
        let d = &seq.domain;
        if !d.contains(base)? {
            return Err(HoroError::OutsideDomain);
        }
        let windows = TailWindows::for_sequence(seq, cfg)?;
        let points = windows.points(seq)?;
        let mut base_values: [Vec<DistanceValue>; 3] = Default::default();
        for k in 0..3 {
            base_values[k] = points[k]
                .iter()
                .map(|u| evaluate_distance(d, base, u, cfg))
                .collect::<Result<Vec<_>>>()?;
        }
        Ok(PreparedHorosphere { base: base.clone(), seq: seq.clone(), windows, points, base_values, cfg: cfg.clone() })
    }

    pub fn domain(&self) -> &Domain {
        &self.seq.domain
    }

    pub fn config(&self) -> &MetricConfig {
        &self.cfg
    }

    pub fn window(&self) -> (usize, usize) {
        self.windows.last()
    }

    pub fn tail_points(&self) -> &[Vec<CPoint>; 3] {
        &self.points
    }

    pub fn base_values(&self) -> &[Vec<DistanceValue>; 3] {
        &self.base_values
    }

    /// Windowed limsup of `K(w, u_n) − K(x, u_n)`.
    pub fn estimate(&self, w: &CPoint) -> Result<HoroEstimate> {
        let d = self.domain();
        if !d.contains(w)? {
            return Err(HoroError::OutsideDomain);
        }
        let mut center: [Vec<f64>; 3] = Default::default();
        let mut lower = f64::NEG_INFINITY;
        let mut upper = f64::NEG_INFINITY;
        for k in 0..3 {
            for (u, bx) in self.points[k].iter().zip(&self.base_values[k]) {
                let kw = evaluate_distance(d, w, u, &self.cfg)?;
                center[k].push(kw.center() - bx.center());
                if k == 2 {
                    lower = lower.max(kw.lower() - bx.upper());
                    upper = upper.max(kw.upper() - bx.lower());
                }
            }
        }
        Ok(HoroEstimate { tail: TailEstimate::from_windows(&center, self.cfg.tol), lower, upper })
    }

    /// Membership of `w` in the horosphere of radius `radius`.
    pub fn contains(&self, w: &CPoint, radius: f64) -> Result<Verdict> {
        let e = self.estimate(w)?;
        Ok(self.verdict(&e, radius))
    }

    pub fn verdict(&self, e: &HoroEstimate, radius: f64) -> Verdict {
        Verdict::below_threshold(
            e.estimate(),
            e.lower,
            e.upper,
            0.5 * radius.ln(),
            e.tail.converged,
            self.cfg.tol,
            self.window(),
        )
    }

    /// Busemann value at `z`: the tail limit and whether it converged.
    pub fn busemann(&self, z: &CPoint) -> Result<(f64, bool)> {
        let e = self.estimate(z)?;
        Ok((e.estimate(), e.tail.limit_converged(self.cfg.tol)))
    }
}

pub fn horosphere_contains(h: &Horosphere, w: &CPoint, cfg: &MetricConfig) -> Result<Verdict> {
    PreparedHorosphere::new(&h.base, &h.seq, cfg)?.contains(w, h.radius)
}

/// Windowed limit of `K(z, u_n) − K(x, u_n)`; the flag is false when the
/// tail oscillates or has not stabilized.
pub fn busemann_value(d: &Domain, x: &CPoint, seq: &PointSequence, z: &CPoint, cfg: &MetricConfig) -> Result<(f64, bool)> {
    if &seq.domain != d {
        return Err(HoroError::InvalidArgument("sequence lives in a different domain".into()));
    }
    PreparedHorosphere::new(x, seq, cfg)?.busemann(z)
}

/// Euclidean center and radius of the disc horosphere `{|p − z|²/(1 − |z|²) < R}`.
pub fn disc_horosphere_closed_form(p: C64, radius: f64) -> Result<(C64, f64)> {
    if (p.norm() - 1.0).abs() > 1e-12 {
        return Err(HoroError::InvalidArgument("tangency point must be unimodular".into()));
    }
    if !(radius > 0.0) {
        return Err(HoroError::InvalidArgument("horosphere radius must be positive".into()));
    }
    Ok((p / (radius + 1.0), radius / (radius + 1.0)))
}

/// `|p − z|² / (1 − |z|²)`, the disc horosphere level of `z`.
pub fn disc_horo_level(p: C64, z: C64) -> f64 {
    (p - z).norm_sqr() / disc_defect(z)
}

/// Busemann function of the disc at base `0` for tangency point `p`.
pub fn disc_busemann(p: C64, z: C64) -> f64 {
    0.5 * disc_horo_level(p, z).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn radial_disc() -> PointSequence {
        PointSequence::radial(Domain::UnitDisc, CPoint::real(1.0)).unwrap()
    }

    #[test]
    fn disc_membership_examples() {
        let cfg = MetricConfig::default();
        let h = Horosphere::new(CPoint::real(0.0), radial_disc(), 1.0).unwrap();
        let v = horosphere_contains(&h, &CPoint::real(0.5), &cfg).unwrap();
        assert!(v.is_true());
        assert!((v.estimate - 0.5 * (1.0f64 / 3.0).ln()).abs() < 1e-6);
        let v = horosphere_contains(&h, &CPoint::real(0.0), &cfg).unwrap();
        assert!(!v.decision && !v.is_decided());
        assert!(v.margin.abs() < 1e-6);
    }

    #[test]
    fn face_horosphere_ignores_second_coordinate() {
        let cfg = MetricConfig::default();
        let seq = PointSequence::bidisc(super::super::SeqLabel::BidiscW2 { p: C64::new(1.0, 0.0) }).unwrap();
        let h = Horosphere::new(CPoint::zeros(2), seq, 1.0).unwrap();
        for w2 in [0.0, 0.5, 0.99] {
            let w = CPoint::from_pairs(&[(0.0, 0.0), (w2, 0.0)]);
            // first factor at w1 = 0 is exactly on the horocycle of level 1
            let v = horosphere_contains(&h, &w, &cfg).unwrap();
            assert!(!v.is_decided());
            let w = CPoint::from_pairs(&[(0.5, 0.0), (0.0, w2)]);
            assert!(horosphere_contains(&h, &w, &cfg).unwrap().is_true());
        }
    }

    #[test]
    fn closed_form_disc() {
        let (c, r) = disc_horosphere_closed_form(C64::new(1.0, 0.0), 1.0).unwrap();
        assert_eq!((c, r), (C64::new(0.5, 0.0), 0.5));
        let (c, r) = disc_horosphere_closed_form(C64::new(0.0, 1.0), 1.0).unwrap();
        let z = C64::new(0.0, 0.5);
        assert!((z - c).norm() < r);
        assert!(disc_horo_level(C64::new(0.0, 1.0), z) < 1.0);
        assert!(disc_horosphere_closed_form(C64::new(0.5, 0.0), 1.0).is_err());
    }

    #[test]
    fn busemann_matches_poisson_level() {
        let cfg = MetricConfig::default();
        let z = CPoint::from_pairs(&[(0.2, -0.6)]);
        let (v, ok) = busemann_value(&Domain::UnitDisc, &CPoint::real(0.0), &radial_disc(), &z, &cfg).unwrap();
        assert!(ok);
        assert!((v - disc_busemann(C64::new(1.0, 0.0), z[0])).abs() < 1e-8);
        let (v, ok) = busemann_value(&Domain::UnitDisc, &CPoint::real(0.0), &radial_disc(), &CPoint::real(0.0), &cfg).unwrap();
        assert!(ok && v.abs() < 1e-12);
    }
}
