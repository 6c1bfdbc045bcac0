use rand::Rng;

use super::domain::{Domain, SupportShape};
use super::numeric::random_unit;
use crate::point::{unimodular, CPoint, C64};

fn disc_uniform(rng: &mut impl Rng, radius: f64) -> C64 {
    C64::from_polar(radius * rng.gen::<f64>().sqrt(), std::f64::consts::TAU * rng.gen::<f64>())
}

/// Depth `ε` log-uniform in `[lo, hi]`.
pub(crate) fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + (hi.ln() - lo.ln()) * rng.gen::<f64>()).exp()
}

impl Domain {
    /// A random interior point. Bounded kinds are sampled uniformly (or close
    /// to it); unbounded kinds within a fixed window around the center.
    pub fn sample_point(&self, rng: &mut impl Rng) -> CPoint {
        match self {
            Domain::UnitDisc => CPoint::scalar(disc_uniform(rng, 1.0)),
            Domain::Polydisc(n) => CPoint((0..*n).map(|_| disc_uniform(rng, 1.0)).collect()),
            Domain::UnitBall(n) => {
                let dir = random_unit(rng, 2 * n);
                let r = rng.gen::<f64>().powf(1.0 / (2 * n) as f64);
                CPoint::from_real(&dir).scale(r)
            }
            Domain::RealHalfSpace { normal, offset } => {
                let x: Vec<f64> = (0..normal.len()).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect();
                let dot: f64 = x.iter().zip(normal).map(|(a, b)| a * b).sum();
                let depth = log_uniform(rng, 1e-3, 3.0);
                // slide along the normal to the chosen depth below the wall
                let shift = offset - depth - dot;
                CPoint::from_real(&x.iter().zip(normal).map(|(a, n)| a + shift * n).collect::<Vec<_>>())
            }
            Domain::SiegelH2 => {
                let w2 = disc_uniform(rng, 1.0);
                let s = log_uniform(rng, 1e-3, 3.0);
                CPoint(vec![C64::new(w2.norm_sqr() + s, rng.gen::<f64>() * 4.0 - 2.0), w2])
            }
            Domain::ParabolicConvex => {
                let z2 = C64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 4.0 - 2.0);
                let s = log_uniform(rng, 1e-3, 3.0);
                CPoint(vec![C64::new(2.0 * z2.re * z2.re + s, rng.gen::<f64>() * 4.0 - 2.0), z2])
            }
            Domain::SampledConvex(shape) => {
                let dim = shape.real_dim();
                let bounds: Vec<(f64, f64)> = (0..dim)
                    .map(|i| {
                        let mut e = vec![0.0; dim];
                        e[i] = 1.0;
                        let hi = shape.support(&e);
                        e[i] = -1.0;
                        (-shape.support(&e), hi)
                    })
                    .collect();
                loop {
                    let x: Vec<f64> = bounds.iter().map(|(lo, hi)| lo + (hi - lo) * rng.gen::<f64>()).collect();
                    let z = CPoint::from_real(&x);
                    if inside_shape(shape, &x) && self.closure_margin(&z) > 0.0 {
                        return z;
                    }
                }
            }
        }
    }

    /// A random interior point close to the boundary point `p`, at a
    /// log-uniform depth in `[depth_lo, depth_hi]` along the segment from the
    /// center and with a tangential jitter of the same order.
    pub fn sample_near(&self, p: &CPoint, depth_lo: f64, depth_hi: f64, rng: &mut impl Rng) -> CPoint {
        let c = self.center();
        for _ in 0..64 {
            let eps = log_uniform(rng, depth_lo, depth_hi);
            let base = c.lerp(p, 1.0 - eps);
            let jitter = CPoint::from_real(&random_unit(rng, 2 * self.dim())).scale(eps * rng.gen::<f64>());
            let z = &base + &jitter;
            if self.closure_margin(&z) > 0.0 {
                return z;
            }
        }
        c.lerp(p, 1.0 - depth_hi)
    }
}

/// Cheap exact membership for the shapes whose interior is explicit.
fn inside_shape(shape: &SupportShape, x: &[f64]) -> bool {
    match shape {
        SupportShape::Ellipsoid { center, semi_axes } => {
            x.iter().zip(center).zip(semi_axes).map(|((xi, ci), ai)| ((xi - ci) / ai).powi(2)).sum::<f64>() < 1.0
        }
        SupportShape::Hull { .. } => true,
    }
}

/// `e^{iθ}` for a uniform angle.
#[allow(dead_code)]
pub(crate) fn random_phase(rng: &mut impl Rng) -> C64 {
    unimodular(std::f64::consts::TAU * rng.gen::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn samples_are_interior() {
        let mut rng = seeded(3, 0);
        let domains = [
            Domain::UnitDisc,
            Domain::Polydisc(2),
            Domain::UnitBall(3),
            Domain::half_space(vec![0.0, 1.0, 1.0, 0.0], 0.5).unwrap(),
            Domain::SiegelH2,
            Domain::ParabolicConvex,
        ];
        for d in domains {
            for _ in 0..200 {
                let z = d.sample_point(&mut rng);
                assert!(d.contains(&z).unwrap(), "{d:?} {z:?}");
            }
        }
        let p = CPoint::from_pairs(&[(1.0, 0.0), (0.0, 0.0)]);
        for _ in 0..200 {
            let z = Domain::UnitBall(2).sample_near(&p, 1e-4, 1e-1, &mut rng);
            assert!(Domain::UnitBall(2).contains(&z).unwrap());
            assert!(z.dist(&p) < 0.25);
        }
    }
}
