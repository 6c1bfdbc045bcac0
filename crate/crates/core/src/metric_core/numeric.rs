//! Small deterministic optimizers used by the boundary-distance routines.

use rand::Rng;

use crate::rng::seeded;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[a, b]`.
pub(crate) fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iter = 0;
    while (b - a).abs() > xtol && iter < 200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
        iter += 1;
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    let mut best = (x, fx);
    for (xx, ff) in [(c, fc), (d, fd)] {
        if ff < best.1 {
            best = (xx, ff);
        }
    }
    best
}

/// Global minimum on `[a, b]`: uniform grid scan, then golden refinement of
/// the best bracket.
pub(crate) fn grid_golden_min(f: impl Fn(f64) -> f64, a: f64, b: f64, grid: usize, xtol: f64) -> (f64, f64) {
    let h = (b - a) / grid as f64;
    let mut best_i = 0;
    let mut best_f = f64::INFINITY;
    for i in 0..=grid {
        let v = f(a + h * i as f64);
        if v < best_f {
            best_f = v;
            best_i = i;
        }
    }
    let lo = a + h * best_i.saturating_sub(1) as f64;
    let hi = (a + h * (best_i + 1) as f64).min(b);
    let (x, fx) = golden_min(&f, lo, hi, xtol);
    if fx <= best_f {
        (x, fx)
    } else {
        (a + h * best_i as f64, best_f)
    }
}

/// Periodic variant on `[0, 2π)`.
pub(crate) fn circle_min(f: impl Fn(f64) -> f64, grid: usize, xtol: f64) -> (f64, f64) {
    let tau = std::f64::consts::TAU;
    let h = tau / grid as f64;
    let mut best_i = 0;
    let mut best_f = f64::INFINITY;
    for i in 0..grid {
        let v = f(h * i as f64);
        if v < best_f {
            best_f = v;
            best_i = i;
        }
    }
    let center = h * best_i as f64;
    let (x, fx) = golden_min(&f, center - h, center + h, xtol);
    if fx <= best_f {
        (x.rem_euclid(tau), fx)
    } else {
        (center, best_f)
    }
}

/// Largest `t` in `[0, cap]` with `inside(t)`, assuming `inside(0)` and
/// that the feasible set is an interval. Returns `+∞` if `inside(cap)`.
pub(crate) fn ray_exit(inside: impl Fn(f64) -> bool, start: f64, cap: f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = start;
    while inside(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > cap {
            return f64::INFINITY;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi.max(1e-300) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Minimizes `f` over the unit sphere of `R^dim`. Deterministic: a seeded
/// direction cloud followed by a shrinking-step local search from the best
/// few starts.
pub(crate) fn sphere_min(f: &dyn Fn(&[f64]) -> f64, dim: usize, cloud: usize, seed: u64) -> (Vec<f64>, f64) {
    if dim == 2 {
        let (t, v) = circle_min(|t| f(&[t.cos(), t.sin()]), cloud.max(64), 1e-13);
        return (vec![t.cos(), t.sin()], v);
    }
    let mut rng = seeded(seed, 0x5_0fe4e);
    let mut starts: Vec<(Vec<f64>, f64)> = Vec::with_capacity(cloud + 2 * dim);
    for i in 0..dim {
        for s in [1.0, -1.0] {
            let mut u = vec![0.0; dim];
            u[i] = s;
            let v = f(&u);
            starts.push((u, v));
        }
    }
    for _ in 0..cloud {
        let u = random_unit(&mut rng, dim);
        let v = f(&u);
        starts.push((u, v));
    }
    starts.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut best = starts[0].clone();
    for (u0, v0) in starts.into_iter().take(4) {
        let (u, v) = local_sphere_search(f, u0, v0, &mut rng);
        if v < best.1 {
            best = (u, v);
        }
    }
    best
}

fn local_sphere_search(
    f: &dyn Fn(&[f64]) -> f64,
    mut u: Vec<f64>,
    mut val: f64,
    rng: &mut impl Rng,
) -> (Vec<f64>, f64) {
    let dim = u.len();
    let mut step = 0.2;
    while step > 1e-12 {
        let mut improved = false;
        for _ in 0..(4 * dim) {
            let d = random_unit(rng, dim);
            for s in [step, -step] {
                let mut cand: Vec<f64> = u.iter().zip(&d).map(|(a, b)| a + s * b).collect();
                normalize(&mut cand);
                let v = f(&cand);
                if v < val {
                    val = v;
                    u = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (u, val)
}

pub(crate) fn random_unit(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            normalize(&mut v);
            return v;
        }
    }
}

pub(crate) fn normalize(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}
