//! Exact invariant distances. Every formula is arranged as
//! `K = log(1 + ρ) − ½ log(1 − ρ²)` with `1 − ρ²` computed from a product of
//! defects, which keeps full relative precision near the boundary.

use super::domain::Domain;
use super::models::parabolic_to_siegel;
use crate::error::{HoroError, Result};
use crate::point::{disc_defect, CPoint, C64};

/// `atanh ρ` given `ρ` and an independently computed `q = 1 − ρ²`.
fn from_rho_q(rho: f64, q: f64) -> f64 {
    if rho <= 0.0 {
        return 0.0;
    }
    rho.min(1.0).ln_1p() - 0.5 * q.ln()
}

/// Poincaré distance on the unit disc.
pub fn disc_distance(z: C64, w: C64) -> f64 {
    let num = (z - w).norm();
    if num == 0.0 {
        return 0.0;
    }
    let den = (C64::new(1.0, 0.0) - z.conj() * w).norm();
    let q = disc_defect(z) * disc_defect(w) / (den * den);
    from_rho_q(num / den, q)
}

pub fn polydisc_distance(z: &CPoint, w: &CPoint) -> f64 {
    z.0.iter()
        .zip(&w.0)
        .map(|(a, b)| disc_distance(*a, *b))
        .fold(0.0, f64::max)
}

pub fn ball_distance(z: &CPoint, w: &CPoint) -> f64 {
    let diff = z.dist(w);
    if diff == 0.0 {
        return 0.0;
    }
    let n = z.dim();
    let mut wedge = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            wedge += (z[i] * w[j] - z[j] * w[i]).norm_sqr();
        }
    }
    let den = (C64::new(1.0, 0.0) - z.inner(w)).norm_sqr();
    let rho2 = ((diff * diff - wedge).max(0.0) / den).min(1.0);
    let dz = (1.0 - z.norm()) * (1.0 + z.norm());
    let dw = (1.0 - w.norm()) * (1.0 + w.norm());
    from_rho_q(rho2.sqrt(), dz * dw / den)
}

/// Distance on the right half-plane `{Re η > 0}`.
pub fn right_half_plane_distance(a: C64, b: C64) -> f64 {
    let num = (a - b).norm();
    if num == 0.0 {
        return 0.0;
    }
    let den = (a + b.conj()).norm();
    from_rho_q(num / den, 4.0 * a.re * b.re / (den * den))
}

/// The complex coordinate `η = c − Σ z_j conj(a_j)` that maps
/// `{⟨x, n⟩ < c}` onto `{Re η > 0} × C^{n−1}`.
pub fn half_space_coordinate(normal: &[f64], offset: f64, z: &CPoint) -> C64 {
    let a = CPoint::from_real(normal);
    C64::new(offset, 0.0) - z.inner(&a)
}

/// Distance on `{Re w1 > |w2|²}` from the defining defects `r = Re w1 − |w2|²`
/// supplied by the caller.
fn siegel_core(z: &CPoint, w: &CPoint, rz: f64, rw: f64) -> f64 {
    if z == w {
        return 0.0;
    }
    let x = z[0] + w[0].conj() - z[1] * w[1].conj() * 2.0;
    let m = (z[1] - w[1]).norm_sqr();
    let x2 = x.norm_sqr();
    let num = (rz - rw).powi(2) + m * m + 2.0 * m * (rz + rw) + x.im * x.im;
    let rho = (num.max(0.0) / x2).sqrt();
    from_rho_q(rho, 4.0 * rz * rw / x2)
}

pub fn siegel_distance(z: &CPoint, w: &CPoint) -> f64 {
    siegel_core(z, w, z[0].re - z[1].norm_sqr(), w[0].re - w[1].norm_sqr())
}

pub fn parabolic_distance(z: &CPoint, w: &CPoint) -> f64 {
    let rz = z[0].re - 2.0 * z[1].re * z[1].re;
    let rw = w[0].re - 2.0 * w[1].re * w[1].re;
    siegel_core(&parabolic_to_siegel(z), &parabolic_to_siegel(w), rz, rw)
}

/// Dispatches on the domain kind. Membership is the caller's job.
pub(crate) fn exact_distance(d: &Domain, z: &CPoint, w: &CPoint) -> Result<f64> {
    Ok(match d {
        Domain::UnitDisc => disc_distance(z[0], w[0]),
        Domain::Polydisc(_) => polydisc_distance(z, w),
        Domain::UnitBall(_) => ball_distance(z, w),
        Domain::RealHalfSpace { normal, offset } => right_half_plane_distance(
            half_space_coordinate(normal, *offset, z),
            half_space_coordinate(normal, *offset, w),
        ),
        Domain::SiegelH2 => siegel_distance(z, w),
        Domain::ParabolicConvex => parabolic_distance(z, w),
        Domain::SampledConvex(_) => {
            return Err(HoroError::Unsupported { op: "distance", kind: d.kind_name().into() })
        }
    })
}
