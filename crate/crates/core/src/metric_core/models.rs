//! Explicit biholomorphisms between the model domains.

use crate::point::{CPoint, C64};

/// Generalized Cayley transform `B² → H²`,
/// `(z1, z2) ↦ ((1 + z1)/(1 − z1), z2/(1 − z1))`.
pub fn cayley(z: &CPoint) -> CPoint {
    let one = C64::new(1.0, 0.0);
    let d = one - z[0];
    CPoint(vec![(one + z[0]) / d, z[1] / d])
}

pub fn cayley_inverse(w: &CPoint) -> CPoint {
    let one = C64::new(1.0, 0.0);
    let d = w[0] + one;
    CPoint(vec![(w[0] - one) / d, w[1] * 2.0 / d])
}

/// Differential of [`cayley_inverse`] at `w` applied to `v`.
pub fn cayley_inverse_differential(w: &CPoint, v: &CPoint) -> CPoint {
    let d = w[0] + 1.0;
    let d2 = d * d;
    CPoint(vec![v[0] * 2.0 / d2, v[1] * 2.0 / d - w[1] * v[0] * 2.0 / d2])
}

/// `H² → {Re z1 > 2 (Re z2)²}`, `(w1, w2) ↦ (w1 + w2², w2)`.
pub fn siegel_to_parabolic(w: &CPoint) -> CPoint {
    CPoint(vec![w[0] + w[1] * w[1], w[1]])
}

pub fn parabolic_to_siegel(z: &CPoint) -> CPoint {
    CPoint(vec![z[0] - z[1] * z[1], z[1]])
}

pub fn parabolic_to_siegel_differential(z: &CPoint, v: &CPoint) -> CPoint {
    CPoint(vec![v[0] - z[1] * v[1] * 2.0, v[1]])
}

/// The involutive ball automorphism exchanging `0` and `a` (`|a| < 1`).
pub fn ball_involution(a: &CPoint, z: &CPoint) -> CPoint {
    let a2 = a.norm_sqr();
    if a2 == 0.0 {
        return z.scale(-1.0);
    }
    let za = z.inner(a);
    let s = (1.0 - a2).sqrt();
    let denom = C64::new(1.0, 0.0) - za;
    let coef = za / a2;
    CPoint(
        a.0.iter()
            .zip(&z.0)
            .map(|(&aj, &zj)| {
                let p = aj * coef;
                let q = zj - p;
                (aj - p - q * s) / denom
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &CPoint, b: &CPoint, tol: f64) -> bool {
        a.dist(b) < tol
    }

    #[test]
    fn cayley_roundtrip_and_image() {
        let z = CPoint::from_pairs(&[(0.3, -0.2), (0.1, 0.5)]);
        let w = cayley(&z);
        assert!(w[0].re > w[1].norm_sqr());
        assert!(close(&cayley_inverse(&w), &z, 1e-14));
        let p = siegel_to_parabolic(&w);
        assert!(p[0].re > 2.0 * p[1].re * p[1].re);
        assert!(close(&parabolic_to_siegel(&p), &w, 1e-14));
    }

    #[test]
    fn cayley_differential_matches_finite_difference() {
        let w = CPoint::from_pairs(&[(1.4, 0.3), (0.2, -0.4)]);
        let v = CPoint::from_pairs(&[(0.3, 0.1), (-0.2, 0.5)]);
        let h = 1e-7;
        let fd = (&cayley_inverse(&(&w + &v.scale(h))) - &cayley_inverse(&w)).scale(1.0 / h);
        assert!(close(&fd, &cayley_inverse_differential(&w, &v), 1e-6));
    }

    #[test]
    fn ball_involution_swaps_zero_and_a() {
        let a = CPoint::from_pairs(&[(0.3, 0.1), (-0.2, 0.4)]);
        assert!(close(&ball_involution(&a, &CPoint::zeros(2)), &a, 1e-15));
        assert!(ball_involution(&a, &a).norm() < 1e-15);
        let z = CPoint::from_pairs(&[(0.1, 0.6), (0.2, -0.1)]);
        assert!(close(&ball_involution(&a, &ball_involution(&a, &z)), &z, 1e-14));
    }
}
