use crate::error::{HoroError, Result};

/// Adaptive Simpson quadrature with per-interval error control.
///
/// Intervals are refined until the local Richardson estimate falls below
/// their share of `tol`; fails once more than `max_intervals` are in play.
pub(crate) fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, max_intervals: usize) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    struct Piece {
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    }
    let simpson = |fa: f64, fm: f64, fb: f64, h: f64| h / 6.0 * (fa + 4.0 * fm + fb);
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let mut stack = vec![Piece { a, b, fa, fm, fb, whole: simpson(fa, fm, fb, b - a), tol, depth: 0 }];
    let mut total = 0.0;
    let mut used = 1usize;
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let (lm, rm) = (0.5 * (p.a + m), 0.5 * (m + p.b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(p.fa, flm, p.fm, m - p.a);
        let right = simpson(p.fm, frm, p.fb, p.b - m);
        let err = left + right - p.whole;
        if !err.is_finite() {
            return Err(HoroError::Quadrature(used));
        }
        if err.abs() <= 15.0 * p.tol || p.depth >= 48 {
            total += left + right + err / 15.0;
            continue;
        }
        used += 1;
        if used > max_intervals {
            return Err(HoroError::Quadrature(max_intervals));
        }
        let t = 0.5 * p.tol;
        stack.push(Piece { a: p.a, b: m, fa: p.fa, fm: flm, fb: p.fm, whole: left, tol: t, depth: p.depth + 1 });
        stack.push(Piece { a: m, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: right, tol: t, depth: p.depth + 1 });
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_smooth_and_peaked_functions() {
        let v = adaptive_simpson(|x| x.sin(), 0.0, std::f64::consts::PI, 1e-12, 10_000).unwrap();
        assert!((v - 2.0).abs() < 1e-10);
        // ∫_0^{0.999} dx/(1−x²) = atanh(0.999)
        let v = adaptive_simpson(|x| 1.0 / (1.0 - x * x), 0.0, 0.999, 1e-10, 10_000).unwrap();
        assert!((v - 0.999f64.atanh()).abs() < 1e-8);
    }

    #[test]
    fn reports_budget_exhaustion() {
        let r = adaptive_simpson(|x| (1.0 / x).sin(), 1e-9, 1.0, 1e-14, 8);
        assert_eq!(r, Err(HoroError::Quadrature(8)));
    }
}
