use super::closed_form::right_half_plane_distance;
use super::domain::Domain;
use super::numeric::random_unit;
use super::quadrature::adaptive_simpson;
use crate::config::MetricConfig;
use crate::error::Result;
use crate::point::{CPoint, C64};
use crate::rng::seeded;

const MAX_INTERVALS: usize = 4096;

/// Length of the segment `[z, w]` under `|v| / δ(γ(t), v)`.
pub(crate) fn segment_upper(d: &Domain, z: &CPoint, w: &CPoint, cfg: &MetricConfig) -> Result<f64> {
    let v = w - z;
    let len = v.norm();
    let integrand = |t: f64| match d.directional_boundary_distance(&z.lerp(w, t), &v) {
        Ok(delta) => len / delta,
        Err(_) => f64::NAN,
    };
    adaptive_simpson(integrand, 0.0, 1.0, 0.01 * cfg.tol, MAX_INTERVALS)
}

/// Exact distance of the supporting half-space `{⟨x, u⟩ < h}` between `z`
/// and `w`; `None` when the functional is unbounded on the domain.
fn half_space_bound(d: &Domain, u: &[f64], z: &CPoint, w: &CPoint) -> Option<f64> {
    let h = d.support(u);
    if !h.is_finite() {
        return None;
    }
    let a = CPoint::from_real(u);
    let eta = |p: &CPoint| C64::new(h, 0.0) - p.inner(&a);
    let (ez, ew) = (eta(z), eta(w));
    if !(ez.re > 0.0 && ew.re > 0.0) {
        return None;
    }
    Some(right_half_plane_distance(ez, ew))
}

/// Best lower bound over a sampled family of supporting half-spaces.
pub(crate) fn half_space_lower(d: &Domain, z: &CPoint, w: &CPoint, cfg: &MetricConfig) -> f64 {
    let mut normals: Vec<Vec<f64>> = Vec::new();
    let push_at = |p: &CPoint, normals: &mut Vec<Vec<f64>>| {
        if let Ok(ns) = d.supporting_normals(p) {
            normals.extend(ns);
        }
    };
    for q in [z, w] {
        if let Ok(p) = d.nearest_boundary_point(q) {
            push_at(&p, &mut normals);
        }
    }
    let v = w - z;
    let mid = z.midpoint(w);
    let dim = 2 * d.dim();
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    if let Ok(vh) = v.normalized() {
        for rot in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)] {
            dirs.push(vh.cscale(rot).to_real());
        }
    }
    let mut rng = seeded(cfg.seed, 0xB0_0D5);
    let budget = cfg.samples.min(128);
    match d {
        Domain::SampledConvex(_) => {
            for _ in 0..budget {
                normals.push(random_unit(&mut rng, dim));
            }
        }
        _ => {
            for _ in 0..budget {
                dirs.push(random_unit(&mut rng, dim));
            }
        }
    }
    for e in &dirs {
        let t = d.ray_exit(&mid, e);
        if t.is_finite() {
            let p = CPoint::from_real(&mid.to_real().iter().zip(e).map(|(a, b)| a + t * b).collect::<Vec<_>>());
            push_at(&p, &mut normals);
        }
    }
    normals
        .iter()
        .filter_map(|u| half_space_bound(d, u, z, w))
        .fold(0.0, f64::max)
}
