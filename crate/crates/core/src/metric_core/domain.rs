use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::numeric::{circle_min, grid_golden_min, normalize, ray_exit, sphere_min};
use crate::error::{HoroError, Result};
use crate::point::{CPoint, C64};

/// Support-function description of a bounded convex body in `R^{2n}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum SupportShape {
    /// Axis-aligned ellipsoid `Σ ((x_i − c_i)/a_i)² < 1`.
    Ellipsoid { center: Vec<f64>, semi_axes: Vec<f64> },
    /// Interior of the convex hull of finitely many points.
    Hull { vertices: Vec<Vec<f64>> },
}

impl SupportShape {
    pub fn real_dim(&self) -> usize {
        match self {
            SupportShape::Ellipsoid { center, .. } => center.len(),
            SupportShape::Hull { vertices } => vertices.first().map_or(0, Vec::len),
        }
    }

    /// `h(u) = sup_{x ∈ D} ⟨x, u⟩`.
    pub fn support(&self, u: &[f64]) -> f64 {
        match self {
            SupportShape::Ellipsoid { center, semi_axes } => {
                let lin: f64 = center.iter().zip(u).map(|(c, x)| c * x).sum();
                let quad: f64 = semi_axes.iter().zip(u).map(|(a, x)| (a * x).powi(2)).sum();
                lin + quad.sqrt()
            }
            SupportShape::Hull { vertices } => vertices
                .iter()
                .map(|v| v.iter().zip(u).map(|(a, b)| a * b).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    fn centroid(&self) -> Vec<f64> {
        match self {
            SupportShape::Ellipsoid { center, .. } => center.clone(),
            SupportShape::Hull { vertices } => {
                let n = vertices.len() as f64;
                let mut c = vec![0.0; self.real_dim()];
                for v in vertices {
                    for (ci, vi) in c.iter_mut().zip(v) {
                        *ci += vi / n;
                    }
                }
                c
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let d = self.real_dim();
        if d == 0 || d % 2 != 0 {
            return Err(HoroError::InvalidArgument(
                "support shape must live in an even-dimensional real space".into(),
            ));
        }
        match self {
            SupportShape::Ellipsoid { semi_axes, .. } => {
                if semi_axes.len() != d || semi_axes.iter().any(|a| !(*a > 0.0)) {
                    return Err(HoroError::InvalidArgument("ellipsoid semi-axes must be positive".into()));
                }
            }
            SupportShape::Hull { vertices } => {
                if vertices.len() <= d || vertices.iter().any(|v| v.len() != d) {
                    return Err(HoroError::InvalidArgument(
                        "hull needs more than dim vertices of equal length".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// A model domain in `C^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DomainRepr", into = "DomainRepr")]
pub enum Domain {
    UnitDisc,
    Polydisc(usize),
    UnitBall(usize),
    /// `{x ∈ R^{2n} : ⟨x, normal⟩ < offset}` with a unit normal.
    RealHalfSpace { normal: Vec<f64>, offset: f64 },
    /// `{Re w1 > |w2|²}`.
    SiegelH2,
    /// `{Re z1 > 2 (Re z2)²}`.
    ParabolicConvex,
    SampledConvex(SupportShape),
}

#[derive(Serialize, Deserialize)]
struct DomainRepr {
    kind: String,
    dim: usize,
    #[serde(default)]
    params: Value,
}

impl TryFrom<DomainRepr> for Domain {
    type Error = HoroError;

    fn try_from(r: DomainRepr) -> Result<Domain> {
        let bad = |m: &str| HoroError::InvalidConfig(format!("domain {}: {m}", r.kind));
        let d = match r.kind.as_str() {
            "unit_disc" => Domain::UnitDisc,
            "polydisc" => Domain::Polydisc(r.dim),
            "unit_ball" => Domain::UnitBall(r.dim),
            "real_half_space" => {
                let normal: Vec<f64> = serde_json::from_value(r.params["normal"].clone())
                    .map_err(|e| bad(&e.to_string()))?;
                let offset = r.params["offset"].as_f64().ok_or_else(|| bad("missing offset"))?;
                Domain::half_space(normal, offset)?
            }
            "siegel_h2" => Domain::SiegelH2,
            "parabolic_convex" => Domain::ParabolicConvex,
            "sampled_convex" => {
                let shape: SupportShape =
                    serde_json::from_value(r.params.clone()).map_err(|e| bad(&e.to_string()))?;
                Domain::sampled_convex(shape)?
            }
            other => return Err(HoroError::InvalidConfig(format!("unknown domain kind {other}"))),
        };
        if d.dim() != r.dim || r.dim == 0 {
            return Err(bad(&format!("dim {} does not match kind (expected {})", r.dim, d.dim())));
        }
        Ok(d)
    }
}

impl From<Domain> for DomainRepr {
    fn from(d: Domain) -> DomainRepr {
        let params = match &d {
            Domain::RealHalfSpace { normal, offset } => json!({ "normal": normal, "offset": offset }),
            Domain::SampledConvex(shape) => serde_json::to_value(shape).unwrap_or(Value::Null),
            _ => json!({}),
        };
        DomainRepr { kind: d.kind_name().to_string(), dim: d.dim(), params }
    }
}

/// Budget for support-function minimization on sampled convex bodies.
const SPHERE_CLOUD: usize = 1024;
const SPHERE_SEED: u64 = 0xD0_4A1;

impl Domain {
    pub fn half_space(normal: Vec<f64>, offset: f64) -> Result<Domain> {
        if normal.is_empty() || normal.len() % 2 != 0 {
            return Err(HoroError::InvalidArgument("half-space normal must have even length".into()));
        }
        let n = normal.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(n > 0.0) || !offset.is_finite() {
            return Err(HoroError::InvalidArgument("half-space normal must be nonzero".into()));
        }
        Ok(Domain::RealHalfSpace {
            normal: normal.iter().map(|x| x / n).collect(),
            offset: offset / n,
        })
    }

    pub fn sampled_convex(shape: SupportShape) -> Result<Domain> {
        shape.validate()?;
        let d = Domain::SampledConvex(shape);
        if d.closure_margin(&d.center()) <= 0.0 {
            return Err(HoroError::InvalidArgument("support shape has empty interior".into()));
        }
        Ok(d)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Domain::UnitDisc => "unit_disc",
            Domain::Polydisc(_) => "polydisc",
            Domain::UnitBall(_) => "unit_ball",
            Domain::RealHalfSpace { .. } => "real_half_space",
            Domain::SiegelH2 => "siegel_h2",
            Domain::ParabolicConvex => "parabolic_convex",
            Domain::SampledConvex(_) => "sampled_convex",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::UnitDisc => 1,
            Domain::Polydisc(n) | Domain::UnitBall(n) => *n,
            Domain::RealHalfSpace { normal, .. } => normal.len() / 2,
            Domain::SiegelH2 | Domain::ParabolicConvex => 2,
            Domain::SampledConvex(s) => s.real_dim() / 2,
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, Domain::RealHalfSpace { .. } | Domain::SiegelH2 | Domain::ParabolicConvex)
    }

    /// Whether [`super::distance`] has an exact formula for this kind.
    pub fn has_closed_form(&self) -> bool {
        !matches!(self, Domain::SampledConvex(_))
    }

    /// Canonical interior point.
    pub fn center(&self) -> CPoint {
        match self {
            Domain::SiegelH2 | Domain::ParabolicConvex => {
                CPoint(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)])
            }
            Domain::RealHalfSpace { normal, offset } => {
                CPoint::from_real(&normal.iter().map(|x| x * (offset - 1.0)).collect::<Vec<_>>())
            }
            Domain::SampledConvex(s) => CPoint::from_real(&s.centroid()),
            _ => CPoint::zeros(self.dim()),
        }
    }

    pub fn check_point(&self, z: &CPoint) -> Result<()> {
        z.check_dim(self.dim())?;
        if !z.is_finite() {
            return Err(HoroError::InvalidArgument("non-finite coordinates".into()));
        }
        Ok(())
    }

    /// Signed defining quantity: positive exactly on the open domain, zero
    /// on the boundary.
    pub fn closure_margin(&self, z: &CPoint) -> f64 {
        match self {
            Domain::UnitDisc | Domain::UnitBall(_) => 1.0 - z.norm(),
            Domain::Polydisc(_) => 1.0 - z.0.iter().map(|c| c.norm()).fold(0.0, f64::max),
            Domain::RealHalfSpace { normal, offset } => {
                offset - normal.iter().zip(z.to_real()).map(|(a, b)| a * b).sum::<f64>()
            }
            Domain::SiegelH2 => z[0].re - z[1].norm_sqr(),
            Domain::ParabolicConvex => z[0].re - 2.0 * z[1].re * z[1].re,
            Domain::SampledConvex(shape) => sampled_gap(shape, z).1,
        }
    }

    pub fn contains(&self, z: &CPoint) -> Result<bool> {
        self.check_point(z)?;
        Ok(self.closure_margin(z) > 0.0)
    }

    /// Euclidean distance from an interior point to the boundary.
    pub fn boundary_distance(&self, z: &CPoint) -> Result<f64> {
        self.require_inside(z)?;
        Ok(self.nearest_boundary(z).1)
    }

    /// Nearest boundary point of an interior point.
    pub fn nearest_boundary_point(&self, z: &CPoint) -> Result<CPoint> {
        self.require_inside(z)?;
        Ok(self.nearest_boundary(z).0)
    }

    fn require_inside(&self, z: &CPoint) -> Result<()> {
        if !self.contains(z)? {
            return Err(HoroError::OutsideDomain);
        }
        Ok(())
    }

    fn nearest_boundary(&self, z: &CPoint) -> (CPoint, f64) {
        match self {
            Domain::UnitDisc | Domain::UnitBall(_) => {
                let r = z.norm();
                let p = if r > 0.0 {
                    z.scale(1.0 / r)
                } else {
                    let mut e = CPoint::zeros(self.dim());
                    e.0[0] = C64::new(1.0, 0.0);
                    e
                };
                (p, 1.0 - r)
            }
            Domain::Polydisc(_) => {
                let (j, r) = z
                    .0
                    .iter()
                    .enumerate()
                    .map(|(j, c)| (j, c.norm()))
                    .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
                let mut p = z.clone();
                p.0[j] = if r > 0.0 { z[j] / r } else { C64::new(1.0, 0.0) };
                (p, 1.0 - r)
            }
            Domain::RealHalfSpace { normal, .. } => {
                let gap = self.closure_margin(z);
                let x: Vec<f64> = z.to_real().iter().zip(normal).map(|(a, n)| a + gap * n).collect();
                (CPoint::from_real(&x), gap)
            }
            Domain::SiegelH2 => {
                let a0 = z[0].re;
                let m = z[1].norm();
                let f = |rho: f64| (rho * rho - a0).powi(2) + (rho - m).powi(2);
                let hi = m + a0.abs().sqrt() + 1.0;
                let (rho, v) = grid_golden_min(f, 0.0, hi, 400, 1e-15);
                let phase = if m > 0.0 { z[1] / m } else { C64::new(1.0, 0.0) };
                let p = CPoint(vec![C64::new(rho * rho, z[0].im), phase * rho]);
                (p, v.max(0.0).sqrt())
            }
            Domain::ParabolicConvex => {
                let a0 = z[0].re;
                let c0 = z[1].re;
                let f = |c: f64| (2.0 * c * c - a0).powi(2) + (c - c0).powi(2);
                let hi = c0.abs() + (a0.abs() / 2.0).sqrt() + 1.0;
                let (c, v) = grid_golden_min(f, -hi, hi, 800, 1e-15);
                let p = CPoint(vec![C64::new(2.0 * c * c, z[0].im), C64::new(c, z[1].im)]);
                (p, v.max(0.0).sqrt())
            }
            Domain::SampledConvex(shape) => {
                let (u, gap) = sampled_gap(shape, z);
                let x: Vec<f64> = z.to_real().iter().zip(&u).map(|(a, n)| a + gap * n).collect();
                (CPoint::from_real(&x), gap)
            }
        }
    }

    /// Euclidean distance from `z` to the boundary inside the complex line
    /// `z + C v`; `+∞` when the line never meets the boundary.
    pub fn directional_boundary_distance(&self, z: &CPoint, v: &CPoint) -> Result<f64> {
        self.check_point(v)?;
        let vn = v.norm();
        if vn == 0.0 {
            return Err(HoroError::ZeroDirection);
        }
        self.require_inside(z)?;
        let vh = v.scale(1.0 / vn);
        Ok(match self {
            Domain::UnitDisc => 1.0 - z.norm(),
            Domain::Polydisc(_) => z
                .0
                .iter()
                .zip(&vh.0)
                .filter(|(_, vj)| vj.norm() > 0.0)
                .map(|(zj, vj)| (1.0 - zj.norm()) / vj.norm())
                .fold(f64::INFINITY, f64::min),
            Domain::UnitBall(_) => {
                let s = z.inner(&vh).norm();
                let defect = (1.0 - z.norm()) * (1.0 + z.norm());
                defect / ((defect + s * s).sqrt() + s)
            }
            Domain::RealHalfSpace { normal, .. } => {
                let a = CPoint::from_real(normal);
                let va = vh.inner(&a).norm();
                if va == 0.0 {
                    f64::INFINITY
                } else {
                    self.closure_margin(z) / va
                }
            }
            Domain::SiegelH2 => {
                let r = self.closure_margin(z);
                let v2n = vh[1].norm_sqr();
                let beta = vh[1] * z[1].conj() - vh[0] * 0.5;
                if v2n < 1e-300 {
                    r / vh[0].norm()
                } else {
                    let b2 = beta.norm_sqr();
                    let radius = ((r + b2 / v2n) / v2n).sqrt();
                    let center = b2.sqrt() / v2n;
                    radius - center
                }
            }
            Domain::ParabolicConvex => {
                let a0 = z[0].re;
                let c0 = z[1].re;
                let exit = |theta: f64| {
                    let zeta = C64::from_polar(1.0, theta);
                    let l1 = (zeta * vh[0]).re;
                    let l2 = (zeta * vh[1]).re;
                    // a0 + ρ l1 − 2 (c0 + ρ l2)² > 0
                    let qa = -2.0 * l2 * l2;
                    let qb = l1 - 4.0 * c0 * l2;
                    let qc = a0 - 2.0 * c0 * c0;
                    positive_root(qa, qb, qc)
                };
                circle_min(exit, 256, 1e-13).1
            }
            Domain::SampledConvex(shape) => {
                let exit = |theta: f64| {
                    let e = vh.cscale(C64::from_polar(1.0, theta)).to_real();
                    sampled_ray_exit(shape, z, &e)
                };
                circle_min(exit, 96, 1e-10).1
            }
        })
    }

    /// Euclidean exit distance of the real ray `z + t e` (`e` a unit vector
    /// of `R^{2n}`); `+∞` if the ray stays inside.
    pub(crate) fn ray_exit(&self, z: &CPoint, e: &[f64]) -> f64 {
        match self {
            Domain::SampledConvex(shape) => sampled_ray_exit(shape, z, e),
            _ => {
                let x = z.to_real();
                let at = |t: f64| {
                    CPoint::from_real(&x.iter().zip(e).map(|(a, b)| a + t * b).collect::<Vec<_>>())
                };
                let start = 1e-3 * self.closure_margin(z).abs().max(1e-6);
                ray_exit(|t| self.closure_margin(&at(t)) > 0.0, start, 1e9)
            }
        }
    }

    /// `sup_{x ∈ D} ⟨x, u⟩` for a unit vector `u ∈ R^{2n}`; `+∞` when the
    /// functional is unbounded on the domain.
    pub fn support(&self, u: &[f64]) -> f64 {
        let uc = CPoint::from_real(u);
        let un = uc.norm();
        match self {
            Domain::UnitDisc | Domain::UnitBall(_) => un,
            Domain::Polydisc(_) => uc.0.iter().map(|c| c.norm()).sum(),
            Domain::RealHalfSpace { normal, offset } => {
                let dot: f64 = normal.iter().zip(u).map(|(a, b)| a * b).sum();
                if (dot - un).abs() <= 1e-12 * un.max(1.0) && dot > 0.0 {
                    offset * dot
                } else {
                    f64::INFINITY
                }
            }
            Domain::SiegelH2 => {
                let alpha = -uc[0].re;
                if alpha > 0.0 && uc[0].im.abs() <= 1e-12 * un {
                    uc[1].norm_sqr() / (4.0 * alpha)
                } else {
                    f64::INFINITY
                }
            }
            Domain::ParabolicConvex => {
                let alpha = -uc[0].re;
                if alpha > 0.0 && uc[0].im.abs() <= 1e-12 * un && uc[1].im.abs() <= 1e-12 * un {
                    uc[1].re * uc[1].re / (8.0 * alpha)
                } else {
                    f64::INFINITY
                }
            }
            Domain::SampledConvex(shape) => shape.support(u),
        }
    }

    /// Outward unit normals (in `R^{2n}`) of supporting hyperplanes at a
    /// boundary point: the extreme rays of the normal cone, plus pairwise
    /// bisectors when the cone has several.
    pub fn supporting_normals(&self, p: &CPoint) -> Result<Vec<Vec<f64>>> {
        self.check_point(p)?;
        let scale = 1.0 + p.norm();
        if self.closure_margin(p).abs() > 1e-7 * scale {
            return Err(HoroError::InvalidArgument("point is not on the boundary".into()));
        }
        let mut out: Vec<Vec<f64>> = match self {
            Domain::UnitDisc | Domain::UnitBall(_) => vec![p.normalized()?.to_real()],
            Domain::Polydisc(n) => {
                let rmax = p.0.iter().map(|c| c.norm()).fold(0.0, f64::max);
                (0..*n)
                    .filter(|&j| (p[j].norm() - rmax).abs() <= 1e-9)
                    .map(|j| {
                        let mut e = CPoint::zeros(*n);
                        e.0[j] = p[j] / p[j].norm();
                        e.to_real()
                    })
                    .collect()
            }
            Domain::RealHalfSpace { normal, .. } => vec![normal.clone()],
            Domain::SiegelH2 => {
                let mut g = vec![-1.0, 0.0, 2.0 * p[1].re, 2.0 * p[1].im];
                normalize(&mut g);
                vec![g]
            }
            Domain::ParabolicConvex => {
                let mut g = vec![-1.0, 0.0, 4.0 * p[1].re, 0.0];
                normalize(&mut g);
                vec![g]
            }
            Domain::SampledConvex(shape) => {
                let f = |u: &[f64]| {
                    shape.support(u) - u.iter().zip(p.to_real()).map(|(a, b)| a * b).sum::<f64>()
                };
                vec![sphere_min(&f, shape.real_dim(), SPHERE_CLOUD, SPHERE_SEED).0]
            }
        };
        let extreme = out.len();
        for i in 0..extreme {
            for j in (i + 1)..extreme {
                let mut m: Vec<f64> = out[i].iter().zip(&out[j]).map(|(a, b)| a + b).collect();
                normalize(&mut m);
                out.push(m);
            }
        }
        Ok(out)
    }
}

/// Positive root of `a ρ² + b ρ + c = 0` with `c > 0`, i.e. where the
/// quadratic first turns non-positive; `+∞` if it never does.
fn positive_root(a: f64, b: f64, c: f64) -> f64 {
    if a.abs() < 1e-300 {
        return if b < 0.0 { -c / b } else { f64::INFINITY };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return f64::INFINITY;
    }
    let sq = disc.sqrt();
    // stable pair of roots
    let q = -0.5 * (b + b.signum() * sq);
    let mut roots = [q / a, if q != 0.0 { c / q } else { f64::INFINITY }];
    roots.sort_by(f64::total_cmp);
    roots.into_iter().find(|r| *r > 0.0).unwrap_or(f64::INFINITY)
}

/// `min_u h(u) − ⟨z, u⟩` and its minimizer.
fn sampled_gap(shape: &SupportShape, z: &CPoint) -> (Vec<f64>, f64) {
    let x = z.to_real();
    let f = |u: &[f64]| shape.support(u) - u.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
    let (u, v) = sphere_min(&f, shape.real_dim(), SPHERE_CLOUD, SPHERE_SEED);
    (u, v)
}

/// Exit distance of the ray `z + t e` from a sampled convex body:
/// `min_{⟨e,u⟩ > 0} (h(u) − ⟨z,u⟩) / ⟨e,u⟩`.
fn sampled_ray_exit(shape: &SupportShape, z: &CPoint, e: &[f64]) -> f64 {
    let x = z.to_real();
    let f = |u: &[f64]| {
        let eu: f64 = u.iter().zip(e).map(|(a, b)| a * b).sum();
        if eu <= 1e-9 {
            return f64::MAX;
        }
        (shape.support(u) - u.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>()) / eu
    };
    sphere_min(&f, shape.real_dim(), 256, SPHERE_SEED).1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn membership_examples() {
        assert!(Domain::UnitDisc.contains(&CPoint::real(0.0)).unwrap());
        assert!(!Domain::UnitDisc.contains(&CPoint::real(1.0)).unwrap());
        // 1 > 2·0.5² = 0.5
        let z = CPoint(vec![c(1.0, 0.0), c(0.5, 0.0)]);
        assert!(Domain::ParabolicConvex.contains(&z).unwrap());
        assert!(!Domain::ParabolicConvex.contains(&CPoint(vec![c(0.4, 3.0), c(0.5, 7.0)])).unwrap());
        assert_eq!(
            Domain::UnitBall(2).contains(&CPoint::real(0.1)),
            Err(HoroError::DimensionMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn canonical_centers_are_members() {
        let domains = [
            Domain::UnitDisc,
            Domain::Polydisc(3),
            Domain::UnitBall(2),
            Domain::half_space(vec![1.0, 0.0, 0.0, 0.0], 1.0).unwrap(),
            Domain::SiegelH2,
            Domain::ParabolicConvex,
            Domain::sampled_convex(SupportShape::Ellipsoid {
                center: vec![0.1, 0.0, 0.0, 0.2],
                semi_axes: vec![1.0, 2.0, 0.5, 1.0],
            })
            .unwrap(),
        ];
        for d in domains {
            assert!(d.contains(&d.center()).unwrap(), "{d:?}");
        }
    }

    #[test]
    fn boundary_distance_examples() {
        assert_eq!(Domain::UnitDisc.boundary_distance(&CPoint::real(0.0)).unwrap(), 1.0);
        let z = CPoint(vec![c(0.6, 0.0), c(0.0, 0.0)]);
        assert!((Domain::UnitBall(2).boundary_distance(&z).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(
            Domain::UnitDisc.boundary_distance(&CPoint::real(1.2)),
            Err(HoroError::OutsideDomain)
        );
    }

    /// Brute force over a dense sample of `{Re w1 = |w2|²}`: boundary points
    /// `(ρ² + i b, ρ e^{iφ})`.
    #[test]
    fn siegel_boundary_distance_matches_dense_boundary_sample() {
        let z = CPoint(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let mut best = f64::INFINITY;
        for i in 0..=400 {
            let rho = 1.5 * i as f64 / 400.0;
            for k in 0..16 {
                let phi = std::f64::consts::TAU * k as f64 / 16.0;
                for j in -20..=20 {
                    let b = j as f64 * 0.05;
                    let q = CPoint(vec![c(rho * rho, b), C64::from_polar(rho, phi)]);
                    best = best.min(z.dist(&q));
                }
            }
        }
        let d = Domain::SiegelH2.boundary_distance(&z).unwrap();
        // minimizer ρ² = 1/2 gives √3/2
        assert!((d - 0.75f64.sqrt()).abs() < 1e-10, "{d}");
        assert!(d <= best + 1e-12 && best - d < 1e-4, "{d} vs {best}");
    }

    #[test]
    fn parabolic_boundary_distance_brute_force() {
        let z = CPoint(vec![c(0.7, 0.3), c(0.2, -1.0)]);
        let mut best = f64::INFINITY;
        for i in -20000..=20000 {
            let cc = i as f64 * 1e-4;
            best = best.min(((2.0 * cc * cc - 0.7).powi(2) + (cc - 0.2).powi(2)).sqrt());
        }
        let d = Domain::ParabolicConvex.boundary_distance(&z).unwrap();
        assert!((d - best).abs() < 1e-7, "{d} {best}");
        let p = Domain::ParabolicConvex.nearest_boundary_point(&z).unwrap();
        assert!(Domain::ParabolicConvex.closure_margin(&p).abs() < 1e-12);
    }

    #[test]
    fn directional_distance_examples() {
        let z = CPoint::zeros(2);
        let v = CPoint(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(Domain::UnitDisc.directional_boundary_distance(&CPoint::real(0.0), &CPoint::real(1.0)).unwrap(), 1.0);
        assert_eq!(Domain::Polydisc(2).directional_boundary_distance(&z, &v).unwrap(), 1.0);
        let h = Domain::half_space(vec![1.0, 0.0, 0.0, 0.0], 1.0).unwrap();
        assert_eq!(h.directional_boundary_distance(&z, &v).unwrap(), 1.0);
        let w = CPoint(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(h.directional_boundary_distance(&z, &w).unwrap().is_infinite());
        assert_eq!(
            Domain::UnitDisc.directional_boundary_distance(&CPoint::real(0.0), &CPoint::real(0.0)),
            Err(HoroError::ZeroDirection)
        );
    }

    /// 1-D root finding along each real ray of the complex line, compared
    /// with the closed forms.
    #[test]
    fn directional_distance_against_root_finding() {
        let cases = [
            (Domain::Polydisc(2), CPoint(vec![c(0.3, 0.1), c(-0.5, 0.2)]), CPoint(vec![c(1.0, 0.5), c(0.3, -0.2)])),
            (Domain::UnitBall(2), CPoint(vec![c(0.3, 0.1), c(-0.5, 0.2)]), CPoint(vec![c(1.0, 0.5), c(0.3, -0.2)])),
            (Domain::SiegelH2, CPoint(vec![c(1.2, 0.4), c(0.3, -0.5)]), CPoint(vec![c(0.4, 1.0), c(0.7, 0.2)])),
            (Domain::SiegelH2, CPoint(vec![c(1.2, 0.4), c(0.3, -0.5)]), CPoint(vec![c(0.4, 1.0), c(0.0, 0.0)])),
            (Domain::ParabolicConvex, CPoint(vec![c(1.0, 0.4), c(0.3, -0.5)]), CPoint(vec![c(0.2, 1.0), c(0.7, 0.2)])),
        ];
        for (d, z, v) in cases {
            let vh = v.normalized().unwrap();
            let brute = (0..2000)
                .map(|k| {
                    let th = std::f64::consts::TAU * k as f64 / 2000.0;
                    let e = vh.cscale(C64::from_polar(1.0, th));
                    ray_exit(|t| d.closure_margin(&(&z + &e.scale(t))) > 0.0, 1e-3, 1e6)
                })
                .fold(f64::INFINITY, f64::min);
            let got = d.directional_boundary_distance(&z, &v).unwrap();
            assert!(got <= brute + 1e-9 && brute - got < 1e-5, "{d:?}: {got} vs {brute}");
        }
    }

    #[test]
    fn sampled_ball_matches_unit_ball() {
        let ball = Domain::sampled_convex(SupportShape::Ellipsoid {
            center: vec![0.0; 4],
            semi_axes: vec![1.0; 4],
        })
        .unwrap();
        let z = CPoint(vec![c(0.3, -0.2), c(0.1, 0.4)]);
        let exact = Domain::UnitBall(2).boundary_distance(&z).unwrap();
        assert!((ball.boundary_distance(&z).unwrap() - exact).abs() < 1e-6);
        let v = CPoint(vec![c(0.0, 1.0), c(0.5, 0.0)]);
        let exact_v = Domain::UnitBall(2).directional_boundary_distance(&z, &v).unwrap();
        let got_v = ball.directional_boundary_distance(&z, &v).unwrap();
        assert!((got_v - exact_v).abs() < 1e-4, "{got_v} vs {exact_v}");
        assert!(!ball.contains(&CPoint(vec![c(0.8, 0.0), c(0.0, 0.7)])).unwrap());
    }

    #[test]
    fn support_functions_agree_with_sampled_maxima() {
        let u = [-0.8, 0.0, 0.6, 0.0];
        // Siegel: sup of −0.8 a + 0.6 Re w2 over a > |w2|² is 0.36/3.2
        assert!((Domain::SiegelH2.support(&u) - 0.36 / 3.2).abs() < 1e-15);
        assert!((Domain::ParabolicConvex.support(&u) - 0.36 / 6.4).abs() < 1e-15);
        assert!(Domain::SiegelH2.support(&[0.0, 1.0, 0.0, 0.0]).is_infinite());
        assert!((Domain::Polydisc(2).support(&[0.6, 0.0, 0.0, 0.8]) - 1.4).abs() < 1e-15);
    }

    #[test]
    fn serde_roundtrip_descriptor() {
        let d = Domain::half_space(vec![0.0, 0.0, 3.0, 4.0], 5.0).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.contains("\"kind\":\"real_half_space\""));
        let back: Domain = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        let bad = r#"{"kind":"unit_disc","dim":3,"params":{}}"#;
        assert!(serde_json::from_str::<Domain>(bad).is_err());
    }
}
