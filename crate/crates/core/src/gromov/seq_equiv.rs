use super::gromov_product;
use crate::config::MetricConfig;
use crate::error::{HoroError, Result};
use crate::horospheres::{Outcome, PointSequence, TailWindows, Verdict};
use crate::metric_core::Domain;
use crate::point::CPoint;

/// Per window, the smallest of the given products.
fn window_minima(values: &[Vec<f64>; 3]) -> [f64; 3] {
    std::array::from_fn(|k| values[k].iter().cloned().fold(f64::INFINITY, f64::min))
}

fn escapes(m: &[f64; 3], gap: f64) -> bool {
    m[1] - m[0] > gap && m[2] - m[1] > gap
}

/// Equivalence by divergence of `(a_n, b_n)_w`: true when the window minima
/// grow across both doublings, false when they settle within `tol`. The
/// margin is the change over the last doubling.
pub fn seq_equiv_s(d: &Domain, w: &CPoint, a: &PointSequence, b: &PointSequence, cfg: &MetricConfig) -> Result<Verdict> {
    if &a.domain != d || &b.domain != d {
        return Err(HoroError::InvalidArgument("sequences live in a different domain".into()));
    }
    if a.len().is_some() || b.len().is_some() {
        return Err(HoroError::Precondition("sequences tending to infinity must be infinite".into()));
    }
    let win = TailWindows::for_sequence(a, cfg)?;
    let gap = 10.0 * cfg.tol;
    // diagonal products (s_n, s_2n)_w must grow
    for (name, s) in [("first", a), ("second", b)] {
        let diag: [Vec<f64>; 3] = std::array::from_fn(|k| {
            win.indices[k].iter().map(|&n| gromov_product(d, &s.point(n)?, &s.point(2 * n)?, w, cfg)).collect::<Result<Vec<_>>>()
        })
        .try_map_result()?;
        let m = window_minima(&diag);
        if !escapes(&m, gap) {
            return Ok(Verdict::inconclusive(m[2], m[2] - m[1], format!("{name} sequence does not tend to infinity: {m:?}"))
                .with_window(win.last()));
        }
    }
    let prods: [Vec<f64>; 3] = std::array::from_fn(|k| {
        win.indices[k].iter().map(|&n| gromov_product(d, &a.point(n)?, &b.point(n)?, w, cfg)).collect::<Result<Vec<_>>>()
    })
    .try_map_result()?;
    let m = window_minima(&prods);
    let spread = prods[2].iter().cloned().fold(f64::NEG_INFINITY, f64::max) - m[2];
    let detail = format!("window minima of (a_n, b_n)_w: {m:?}");
    let v = if escapes(&m, gap) {
        Verdict::decided(true, m[2], m[2] - m[1], detail)
    } else if (m[2] - m[1]).abs() <= cfg.tol && (m[1] - m[0]).abs() <= cfg.tol && spread <= cfg.tol {
        Verdict::decided(false, m[2], m[2] - m[1], detail)
    } else {
        let mut v = Verdict::inconclusive(m[2], m[2] - m[1], detail);
        v.outcome = Outcome::Inconclusive;
        v
    };
    Ok(v.with_window(win.last()))
}

trait TryMapResult<T> {
    fn try_map_result(self) -> Result<[T; 3]>;
}

impl<T> TryMapResult<T> for [Result<T>; 3] {
    fn try_map_result(self) -> Result<[T; 3]> {
        let [a, b, c] = self;
        Ok([a?, b?, c?])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::horospheres::{CoordPath, SeqLabel};
    use crate::point::C64;

    fn face(t1: f64, t2: f64) -> PointSequence {
        let path = |t: f64| CoordPath { target: C64::new(t, 0.0), rate: 1.0, drift: 0.0 };
        PointSequence::new(Domain::Polydisc(2), SeqLabel::Coordinatewise { coords: vec![path(t1), path(t2)] }).unwrap()
    }

    #[test]
    fn remark_triple_is_not_transitive() {
        let cfg = MetricConfig::default();
        let d = Domain::Polydisc(2);
        let w = CPoint::zeros(2);
        let (a, b, c) = (face(1.0, 0.0), face(0.0, 1.0), face(-1.0, 0.0));
        assert!(seq_equiv_s(&d, &w, &a, &b, &cfg).unwrap().is_true());
        assert!(seq_equiv_s(&d, &w, &b, &c, &cfg).unwrap().is_true());
        let v = seq_equiv_s(&d, &w, &a, &c, &cfg).unwrap();
        assert!(v.is_false() && v.margin.abs() < 1e-6, "{v:?}");
    }

    #[test]
    fn diagonal_in_the_disc() {
        let cfg = MetricConfig::default();
        let s = PointSequence::radial(Domain::UnitDisc, CPoint::real(1.0)).unwrap();
        assert!(seq_equiv_s(&Domain::UnitDisc, &CPoint::real(0.0), &s, &s, &cfg).unwrap().is_true());
    }
}
