use super::domain::Domain;
use crate::error::Result;
use crate::point::CPoint;

/// `½ log(1 + |w−z|/δ(w)) + ½ log(1 + |w−z|/δ(z))`, the variable part of the
/// boundary upper estimate (no additive constant).
pub fn boundary_estimate_upper(d: &Domain, z: &CPoint, w: &CPoint) -> Result<f64> {
    let dz = d.boundary_distance(z)?;
    let dw = d.boundary_distance(w)?;
    let gap = z.dist(w);
    Ok(0.5 * (gap / dw).ln_1p() + 0.5 * (gap / dz).ln_1p())
}

/// `−½ log δ(z)`, the variable part of the boundary lower estimate.
pub fn boundary_estimate_lower(d: &Domain, x: &CPoint, z: &CPoint) -> Result<f64> {
    d.boundary_distance(x)?;
    Ok(-0.5 * d.boundary_distance(z)?.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_plug_in_values() {
        let d = Domain::UnitDisc;
        let v = boundary_estimate_upper(&d, &CPoint::real(0.9), &CPoint::real(0.99)).unwrap();
        assert!((v - (0.5 * 10f64.ln() + 0.5 * 1.9f64.ln())).abs() < 1e-12);
        let z = CPoint::real(0.4);
        assert_eq!(boundary_estimate_upper(&d, &z, &z).unwrap(), 0.0);
        let l = boundary_estimate_lower(&d, &CPoint::real(0.0), &CPoint::real(0.999)).unwrap();
        assert!((l + 0.5 * 0.001f64.ln()).abs() < 1e-9);
    }
}
