use serde::{Deserialize, Serialize};

use crate::error::{HoroError, Result};
use crate::maps_extension::MapSpec;
use crate::metric_core::Domain;
use crate::point::{unimodular, CPoint, C64};

/// One coordinate of a [`SeqLabel::Coordinatewise`] sequence:
/// `target · (1 − n^{−rate}) · e^{i drift / n}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordPath {
    pub target: C64,
    #[serde(default = "one")]
    pub rate: f64,
    #[serde(default)]
    pub drift: f64,
}

fn one() -> f64 {
    1.0
}

impl CoordPath {
    fn at(&self, n: f64) -> C64 {
        self.target * (1.0 - n.powf(-self.rate)) * unimodular(self.drift / n)
    }
}

/// Canonical families of sequences, indexed from `n = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "label", content = "params", rename_all = "snake_case")]
pub enum SeqLabel {
    /// `c + (1 − 1/n)(p − c)` with `c` the domain center.
    Radial { p: CPoint },
    /// `(p1 (1 − 1/n), p2 (1 − 1/n))`.
    BidiscW1 { p1: C64, p2: C64 },
    /// `(p (1 − 1/n), 0)`.
    BidiscW2 { p: C64 },
    /// `(0, p (1 − 1/n))`.
    BidiscW3 { p: C64 },
    /// `u_{2n−1} = a_n`, `u_{2n} = b_n`.
    Interleaved { a: Box<SeqLabel>, b: Box<SeqLabel> },
    /// `c + (1 − 1/n)(q_{n mod k} − c)` over the listed boundary points.
    Cycling { targets: Vec<CPoint> },
    Coordinatewise { coords: Vec<CoordPath> },
    /// Tangential approach to `p` in the disc along the horocycle of the
    /// given level: `p/(L+1) + L/(L+1) · p · e^{i/√n}`.
    HorocycleApproach { p: C64, level: f64 },
    /// A finite list, e.g. an orbit.
    Explicit { points: Vec<CPoint> },
    /// Image of another sequence under a map.
    Mapped { map: MapSpec, inner: Box<SeqLabel> },
}

/// Short human-readable name of a complex number.
fn cname(z: C64) -> String {
    let clean = |x: f64| if x.abs() < 1e-9 { 0.0 } else { (x * 1e6).round() / 1e6 };
    let (re, im) = (clean(z.re), clean(z.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => format!("{re}"),
        (true, false) => format!("{im}i"),
        _ => format!("{re}{}{}i", if im < 0.0 { "-" } else { "+" }, im.abs()),
    }
}

impl SeqLabel {
    /// `BidiscW1(1, i)` style names; other families give their tag.
    pub fn short_name(&self) -> String {
        match self {
            SeqLabel::BidiscW1 { p1, p2 } => format!("BidiscW1({}, {})", cname(*p1), cname(*p2)),
            SeqLabel::BidiscW2 { p } => format!("BidiscW2({})", cname(*p)),
            SeqLabel::BidiscW3 { p } => format!("BidiscW3({})", cname(*p)),
            SeqLabel::Radial { p } => format!("Radial({})", p.0.iter().map(|z| cname(*z)).collect::<Vec<_>>().join(", ")),
            other => serde_json::to_value(other)
                .ok()
                .and_then(|v| v.get("label").and_then(|l| l.as_str()).map(str::to_owned))
                .unwrap_or_default(),
        }
    }

    /// Number of terms, `None` for infinite sequences.
    pub fn len(&self) -> Option<usize> {
        match self {
            SeqLabel::Explicit { points } => Some(points.len()),
            SeqLabel::Interleaved { a, b } => match (a.len(), b.len()) {
                (None, None) => None,
                (la, lb) => Some(2 * la.unwrap_or(usize::MAX).min(lb.unwrap_or(usize::MAX))),
            },
            SeqLabel::Mapped { inner, .. } => inner.len(),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Equality of canonical bidisc labels up to `tol` in their boundary
    /// points; other labels compare exactly.
    pub fn approx_eq(&self, other: &SeqLabel, tol: f64) -> bool {
        let near = |a: &C64, b: &C64| (a - b).norm() <= tol;
        match (self, other) {
            (SeqLabel::BidiscW1 { p1, p2 }, SeqLabel::BidiscW1 { p1: q1, p2: q2 }) => near(p1, q1) && near(p2, q2),
            (SeqLabel::BidiscW2 { p }, SeqLabel::BidiscW2 { p: q }) | (SeqLabel::BidiscW3 { p }, SeqLabel::BidiscW3 { p: q }) => {
                near(p, q)
            }
            (SeqLabel::Radial { p }, SeqLabel::Radial { p: q }) => p.dist(q) <= tol,
            (a, b) => a == b,
        }
    }

    /// The `n`-th term (`n ≥ 1`) relative to the domain center `c`.
    fn term(&self, c: &CPoint, n: usize) -> Result<CPoint> {
        let nf = n as f64;
        let t = 1.0 - 1.0 / nf;
        let zero = C64::new(0.0, 0.0);
        Ok(match self {
            SeqLabel::Radial { p } => c.lerp(p, t),
            SeqLabel::BidiscW1 { p1, p2 } => CPoint(vec![p1 * t, p2 * t]),
            SeqLabel::BidiscW2 { p } => CPoint(vec![p * t, zero]),
            SeqLabel::BidiscW3 { p } => CPoint(vec![zero, p * t]),
            SeqLabel::Interleaved { a, b } => {
                if n % 2 == 1 {
                    a.term(c, n.div_ceil(2))?
                } else {
                    b.term(c, n / 2)?
                }
            }
            SeqLabel::Cycling { targets } => {
                if targets.is_empty() {
                    return Err(HoroError::InvalidArgument("cycling sequence without targets".into()));
                }
                c.lerp(&targets[n % targets.len()], t)
            }
            SeqLabel::Coordinatewise { coords } => CPoint(coords.iter().map(|cp| cp.at(nf)).collect()),
            SeqLabel::HorocycleApproach { p, level } => {
                let center = p / (level + 1.0);
                let radius = level / (level + 1.0);
                let mut z = vec![center + p * radius * unimodular(1.0 / nf.sqrt())];
                z.resize(c.dim().max(1), zero);
                CPoint(z)
            }
            SeqLabel::Explicit { points } => points
                .get(n - 1)
                .cloned()
                .ok_or_else(|| HoroError::InvalidArgument(format!("index {n} past the end of a finite sequence")))?,
            SeqLabel::Mapped { map, inner } => {
                // centers live in the source domain; the map is applied last
                let src = map.backward(c).unwrap_or_else(|_| c.clone());
                map.forward(&inner.term(&src, n)?)?
            }
        })
    }
}

/// A sequence `{u_n}` in a domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSequence {
    pub domain: Domain,
    #[serde(flatten)]
    pub label: SeqLabel,
}

impl PointSequence {
    /// Builds the sequence and checks that its first terms and a far tail
    /// sample lie in the domain.
    pub fn new(domain: Domain, label: SeqLabel) -> Result<PointSequence> {
        let s = PointSequence { domain, label };
        let mut probe: Vec<usize> = (2..=17).collect();
        match s.len() {
            Some(l) => {
                probe.retain(|&n| n <= l);
                probe.push(l);
            }
            None => probe.extend([1000, 100_000]),
        }
        for n in probe {
            if n == 0 {
                continue;
            }
            let z = s.point(n)?;
            if !s.domain.contains(&z)? {
                return Err(HoroError::InvalidArgument(format!("term {n} of the sequence lies outside the domain")));
            }
        }
        Ok(s)
    }

    pub fn radial(domain: Domain, p: CPoint) -> Result<PointSequence> {
        PointSequence::new(domain, SeqLabel::Radial { p })
    }

    pub fn bidisc(label: SeqLabel) -> Result<PointSequence> {
        PointSequence::new(Domain::Polydisc(2), label)
    }

    pub fn len(&self) -> Option<usize> {
        self.label.len()
    }

    pub fn is_empty(&self) -> bool {
        self.label.is_empty()
    }

    pub fn point(&self, n: usize) -> Result<CPoint> {
        if n == 0 {
            return Err(HoroError::InvalidArgument("sequences are indexed from 1".into()));
        }
        let c = self.domain.center();
        let z = self.label.term(&c, n)?;
        z.check_dim(self.domain.dim())?;
        Ok(z)
    }

    pub fn points(&self, idx: &[usize]) -> Result<Vec<CPoint>> {
        idx.iter().map(|&n| self.point(n)).collect()
    }

    pub fn interleave(a: &PointSequence, b: &PointSequence) -> Result<PointSequence> {
        if a.domain != b.domain {
            return Err(HoroError::InvalidArgument("interleaved sequences must share a domain".into()));
        }
        PointSequence::new(
            a.domain.clone(),
            SeqLabel::Interleaved { a: Box::new(a.label.clone()), b: Box::new(b.label.clone()) },
        )
    }

    /// Pushes the sequence forward through `map`.
    pub fn mapped(&self, map: &MapSpec) -> Result<PointSequence> {
        let target = map.image_domain(&self.domain)?;
        PointSequence::new(target, SeqLabel::Mapped { map: map.clone(), inner: Box::new(self.label.clone()) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn canonical_families_match_definitions() {
        let w1 = PointSequence::bidisc(SeqLabel::BidiscW1 { p1: c(0.0, 1.0), p2: c(-1.0, 0.0) }).unwrap();
        assert_eq!(w1.point(4).unwrap(), CPoint(vec![c(0.0, 0.75), c(-0.75, 0.0)]));
        let w2 = PointSequence::bidisc(SeqLabel::BidiscW2 { p: c(1.0, 0.0) }).unwrap();
        assert_eq!(w2.point(2).unwrap(), CPoint(vec![c(0.5, 0.0), c(0.0, 0.0)]));
        let w3 = PointSequence::bidisc(SeqLabel::BidiscW3 { p: c(1.0, 0.0) }).unwrap();
        let inter = PointSequence::interleave(&w3, &w2).unwrap();
        for n in 1..20 {
            assert_eq!(inter.point(2 * n - 1).unwrap(), w3.point(n).unwrap());
            assert_eq!(inter.point(2 * n).unwrap(), w2.point(n).unwrap());
        }
    }

    #[test]
    fn rejects_sequences_leaving_the_domain() {
        let bad = SeqLabel::Coordinatewise { coords: vec![CoordPath { target: c(2.0, 0.0), rate: 1.0, drift: 0.0 }] };
        assert!(PointSequence::new(Domain::UnitDisc, bad).is_err());
        assert!(PointSequence::radial(Domain::UnitDisc, CPoint::real(1.0)).unwrap().point(0).is_err());
    }

    #[test]
    fn horocycle_approach_stays_on_level_set() {
        let s = PointSequence::new(Domain::UnitDisc, SeqLabel::HorocycleApproach { p: c(1.0, 0.0), level: 1.0 }).unwrap();
        for n in [1, 10, 1000, 100_000] {
            let z = s.point(n).unwrap()[0];
            let level = (c(1.0, 0.0) - z).norm_sqr() / (1.0 - z.norm_sqr());
            assert!((level - 1.0).abs() < 1e-6, "{n}: {level}");
        }
    }

    #[test]
    fn mapped_sequence_and_serde() {
        let s = PointSequence::radial(Domain::UnitBall(2), CPoint(vec![c(-1.0, 0.0), c(0.0, 0.0)])).unwrap();
        let chain = MapSpec::Composite(vec![MapSpec::Cayley2, MapSpec::SiegelToParabolic]);
        let m = s.mapped(&chain).unwrap();
        assert_eq!(m.domain, Domain::ParabolicConvex);
        assert!(m.point(1000).unwrap().dist(&CPoint::zeros(2)) < 1e-3);
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.contains("\"label\":\"mapped\""));
        assert_eq!(serde_json::from_str::<PointSequence>(&json).unwrap(), m);
    }

    #[test]
    fn finite_sequences_report_length() {
        let pts = vec![CPoint::real(0.1), CPoint::real(0.2), CPoint::real(0.3)];
        let s = PointSequence::new(Domain::UnitDisc, SeqLabel::Explicit { points: pts }).unwrap();
        assert_eq!(s.len(), Some(3));
        assert!(s.point(4).is_err());
    }
}
