use std::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HoroError, Result};

pub type C64 = Complex64;

/// A point of `C^n`. Serialized as a list of `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CPoint(pub Vec<C64>);

impl CPoint {
    pub fn new(coords: Vec<C64>) -> Self {
        CPoint(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        CPoint(vec![C64::new(0.0, 0.0); dim])
    }

    /// One-dimensional point from a complex scalar.
    pub fn scalar(z: C64) -> Self {
        CPoint(vec![z])
    }

    pub fn real(x: f64) -> Self {
        CPoint(vec![C64::new(x, 0.0)])
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        CPoint(pairs.iter().map(|&(re, im)| C64::new(re, im)).collect())
    }

    /// Interprets `x` as `(Re z_1, Im z_1, Re z_2, ...)`.
    pub fn from_real(x: &[f64]) -> Self {
        CPoint(x.chunks(2).map(|c| C64::new(c[0], c[1])).collect())
    }

    pub fn to_real(&self) -> Vec<f64> {
        self.0.iter().flat_map(|c| [c.re, c.im]).collect()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[C64] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian product `Σ z_j conj(w_j)`.
    pub fn inner(&self, other: &CPoint) -> C64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b.conj()).sum()
    }

    /// Real inner product of the underlying `R^{2n}` vectors.
    pub fn real_dot(&self, other: &CPoint) -> f64 {
        self.inner(other).re
    }

    pub fn dist(&self, other: &CPoint) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, s: f64) -> CPoint {
        CPoint(self.0.iter().map(|c| c * s).collect())
    }

    pub fn cscale(&self, s: C64) -> CPoint {
        CPoint(self.0.iter().map(|c| c * s).collect())
    }

    /// `(1 − t)·self + t·other`.
    pub fn lerp(&self, other: &CPoint, t: f64) -> CPoint {
        CPoint(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a * (1.0 - t) + b * t)
                .collect(),
        )
    }

    pub fn midpoint(&self, other: &CPoint) -> CPoint {
        self.lerp(other, 0.5)
    }

    pub fn normalized(&self) -> Result<CPoint> {
        let n = self.norm();
        if n == 0.0 {
            return Err(HoroError::ZeroDirection);
        }
        Ok(self.scale(1.0 / n))
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(HoroError::DimensionMismatch {
                expected,
                got: self.dim(),
            });
        }
        Ok(())
    }
}

impl Index<usize> for CPoint {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl Add for &CPoint {
    type Output = CPoint;
    fn add(self, rhs: &CPoint) -> CPoint {
        CPoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &CPoint {
    type Output = CPoint;
    fn sub(self, rhs: &CPoint) -> CPoint {
        CPoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<f64> for &CPoint {
    type Output = CPoint;
    fn mul(self, rhs: f64) -> CPoint {
        self.scale(rhs)
    }
}

impl From<C64> for CPoint {
    fn from(z: C64) -> Self {
        CPoint::scalar(z)
    }
}

impl From<Vec<C64>> for CPoint {
    fn from(v: Vec<C64>) -> Self {
        CPoint(v)
    }
}

/// `(1 − |z|)(1 + |z|)`, the disc defect without cancellation in `1 − |z|²`.
pub(crate) fn disc_defect(z: C64) -> f64 {
    let r = z.norm();
    (1.0 - r) * (1.0 + r)
}

/// Unimodular complex number `e^{iθ}`.
pub fn unimodular(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_roundtrip_and_inner() {
        let z = CPoint::from_pairs(&[(1.0, 2.0), (-0.5, 0.25)]);
        assert_eq!(CPoint::from_real(&z.to_real()), z);
        let w = CPoint::from_pairs(&[(0.0, 1.0), (2.0, 0.0)]);
        let h = z.inner(&w);
        // (1+2i)(-i) + (-0.5+0.25i)(2) = 2 - i - 1 + 0.5i
        assert!((h - C64::new(1.0, -0.5)).norm() < 1e-15);
        assert!((z.real_dot(&w) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_direction_rejected() {
        assert_eq!(CPoint::zeros(2).normalized(), Err(HoroError::ZeroDirection));
    }
}
