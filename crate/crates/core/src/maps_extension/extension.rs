use serde::{Deserialize, Serialize};

use super::MapSpec;
use crate::boundary_topology::{e_limit, BoundaryClass, ClusterSet};
use crate::config::MetricConfig;
use crate::error::{HoroError, Result};
use crate::horospheres::cluster::greedy_clusters;
use crate::horospheres::{Horosphere, Outcome, PointSequence, PreparedHorosphere, SeqLabel, Verdict};
use crate::metric_core::numeric::{normalize, random_unit};
use crate::metric_core::{evaluate_distance, Domain};
use crate::point::{CPoint, C64};
use crate::rng::seeded;

/// Largest discrepancy `|K(F z, F w) − K(z, w)|` over sampled pairs. With
/// bracketed distances on either side only the amount by which the two
/// brackets fail to overlap counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsometryReport {
    pub pairs: usize,
    pub max_defect: f64,
    pub exact: bool,
}

pub fn isometry_defect(map: &MapSpec, source: &Domain, pairs: usize, cfg: &MetricConfig) -> Result<IsometryReport> {
    let target = map.image_domain(source)?;
    let mut rng = seeded(cfg.seed, 0x150);
    let mut max_defect = 0.0f64;
    for _ in 0..pairs {
        let (z, w) = (source.sample_point(&mut rng), source.sample_point(&mut rng));
        let a = evaluate_distance(source, &z, &w, cfg)?;
        let b = evaluate_distance(&target, &map.forward(&z)?, &map.forward(&w)?, cfg)?;
        let gap = (a.lower() - b.upper()).max(b.lower() - a.upper()).max(0.0);
        let defect = if source.has_closed_form() && target.has_closed_form() { (a.center() - b.center()).abs() } else { gap };
        max_defect = max_defect.max(defect);
    }
    Ok(IsometryReport {
        pairs,
        max_defect,
        exact: source.has_closed_form() && target.has_closed_form(),
    })
}

/// Compares membership of sampled `w` in `E_x({u_n}, R)` with membership of
/// `F(w)` in `E_{F(x)}({F(u_n)}, R)` at every grid radius. Band outcomes on
/// either side are left out.
pub fn pushforward_horosphere_check(map: &MapSpec, h: &Horosphere, cfg: &MetricConfig) -> Result<Verdict> {
    let d = &h.domain;
    let pushed = h.seq.mapped(map)?;
    let src = PreparedHorosphere::new(&h.base, &h.seq, cfg)?;
    let dst = PreparedHorosphere::new(&map.forward(&h.base)?, &pushed, cfg)?;
    let pool = crate::horospheres::horosphere_pool(d, &[&h.seq], cfg.samples.min(200), cfg.seed ^ 0x9F, cfg)?;
    let mut radii = cfg.r_grid.clone();
    if !radii.iter().any(|r| (r - h.radius).abs() < 1e-12) {
        radii.push(h.radius);
    }
    let (mut agree, mut disagree, mut banded) = (0usize, 0usize, 0usize);
    let mut worst = f64::INFINITY;
    for w in &pool {
        let (ea, eb) = (src.estimate(w)?, dst.estimate(&map.forward(w)?)?);
        worst = worst.min(-(ea.estimate() - eb.estimate()).abs());
        for &r in &radii {
            let (va, vb) = (src.verdict(&ea, r), dst.verdict(&eb, r));
            if va.outcome != Outcome::Decided || vb.outcome != Outcome::Decided {
                banded += 1;
            } else if va.decision == vb.decision {
                agree += 1;
            } else {
                disagree += 1;
            }
        }
    }
    let detail = format!("{agree} agreeing, {disagree} disagreeing, {banded} in the band; largest estimate gap {:.2e}", -worst);
    if agree == 0 {
        return Ok(Verdict::inconclusive(0.0, worst, detail));
    }
    Ok(Verdict::decided(disagree == 0, agree as f64 / (agree + disagree) as f64, worst, detail).with_window(src.window()))
}

/// Probe families converging to a boundary point: radial, cone (jitter of
/// the order of the depth) and tangential (jitter of the order of its
/// square root). Each family lists its points from shallow to deep.
fn probe_families(d: &Domain, p: &CPoint, seed: u64) -> Vec<(bool, Vec<CPoint>)> {
    let mut rng = seeded(seed, 0xC1);
    let c = d.center();
    let depths: Vec<f64> = (1..=28).map(|k| 0.3f64.powi(k)).collect();
    let mut out = Vec::new();
    for fam in 0..9 {
        let u = CPoint::from_real(&random_unit(&mut rng, 2 * d.dim()));
        let (tangential, scale) = match fam {
            0 => (false, 0.0),
            1..=4 => (false, 0.5),
            _ => (true, 0.5),
        };
        let pts: Vec<CPoint> = depths
            .iter()
            .map(|&eps| {
                let jitter = if tangential { eps.sqrt() } else { eps };
                &c.lerp(p, 1.0 - eps) + &u.scale(scale * jitter * (c.dist(p) + 1.0))
            })
            .filter(|z| d.closure_margin(z) > 0.0)
            .collect();
        if pts.len() >= 8 {
            out.push((tangential, pts));
        }
    }
    out
}

fn cluster_images(images: &[CPoint], cfg: &MetricConfig) -> ClusterSet {
    let escapes = images.iter().any(|w| w.norm() > 1e6);
    let finite: Vec<CPoint> = images.iter().filter(|w| w.norm() <= 1e6).cloned().collect();
    ClusterSet {
        points: greedy_clusters(&finite, cfg.merge_radius()).into_iter().map(|c| c.center).collect(),
        escapes_to_infinity: escapes,
        probes: images.len(),
    }
}

/// Images of the deepest probe points, clustered.
fn deepest_images(map: &MapSpec, fams: &[(bool, Vec<CPoint>)]) -> Result<Vec<CPoint>> {
    fams.iter()
        .map(|(_, pts)| map.forward(pts.last().unwrap()).or_else(|_| Ok(CPoint(vec![C64::new(f64::INFINITY, 0.0)]))))
        .map(|r: Result<CPoint>| r.map(|w| if w.is_finite() { w } else { CPoint(vec![C64::new(1e300, 0.0)]) }))
        .collect()
}

fn require_boundary(d: &Domain, p: &CPoint) -> Result<()> {
    d.check_point(p)?;
    if d.closure_margin(p).abs() > 1e-9 * (1.0 + p.norm()) {
        return Err(HoroError::InvalidArgument("point is not on the boundary".into()));
    }
    Ok(())
}

/// Cluster set of the map at a boundary point of its source domain.
pub fn cluster_set(map: &MapSpec, p: &CPoint, cfg: &MetricConfig) -> Result<ClusterSet> {
    let d = map
        .source_domain()
        .ok_or_else(|| HoroError::InvalidArgument("the map does not determine its source domain".into()))?;
    cluster_set_on(&d, map, p, cfg)
}

pub fn cluster_set_on(d: &Domain, map: &MapSpec, p: &CPoint, cfg: &MetricConfig) -> Result<ClusterSet> {
    require_boundary(d, p)?;
    let fams = probe_families(d, p, cfg.seed);
    Ok(cluster_images(&deepest_images(map, &fams)?, cfg))
}

/// Cluster set restricted to the probe families that E-converge to `p`,
/// i.e. are eventually inside every horosphere of the radial class at `p`.
pub fn e_cluster_set(d: &Domain, map: &MapSpec, p: &CPoint, cfg: &MetricConfig) -> Result<ClusterSet> {
    require_boundary(d, p)?;
    let x = d.center();
    let target = BoundaryClass::trusted(PointSequence::radial(d.clone(), p.clone())?);
    let fams = probe_families(d, p, cfg.seed);
    let mut kept = Vec::new();
    for fam in &fams {
        // judged on the part of the family the tail window resolves
        let shallow: Vec<CPoint> =
            fam.1.iter().filter(|z| d.boundary_distance(z).map_or(false, |b| b >= 1e-3)).cloned().collect();
        if shallow.len() < 4 {
            continue;
        }
        let seq = PointSequence::new(d.clone(), SeqLabel::Explicit { points: shallow })?;
        if e_limit(d, &x, &seq, &target, cfg)?.is_true() {
            kept.push(fam.clone());
        }
    }
    Ok(cluster_images(&deepest_images(map, &kept)?, cfg))
}

/// `Ch(p)`: the boundary points on every complex supporting hyperplane
/// through `p`, described by a real basis of its affine hull and the
/// sampled extent along each basis direction (`+∞` when unbounded).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharSet {
    pub point: CPoint,
    /// Complex directions common to all supporting hyperplanes.
    pub complex_kernel: Vec<CPoint>,
    pub real_basis: Vec<CPoint>,
    pub extent: Vec<f64>,
    pub samples: Vec<CPoint>,
}

impl CharSet {
    pub fn real_dim(&self) -> usize {
        self.real_basis.len()
    }
}

/// Orthonormal complex basis of the vectors orthogonal to all of `normals`.
fn complex_complement(normals: &[CPoint], n: usize) -> Vec<CPoint> {
    let mut basis: Vec<CPoint> = Vec::new();
    let project_out = |v: &CPoint, span: &[CPoint]| {
        span.iter().fold(v.clone(), |acc, b| &acc - &b.cscale(acc.inner(b)))
    };
    let mut span: Vec<CPoint> = Vec::new();
    for v in normals {
        let r = project_out(v, &span);
        if r.norm() > 1e-9 {
            span.push(r.scale(1.0 / r.norm()));
        }
    }
    for j in 0..n {
        let mut e = CPoint::zeros(n);
        e.0[j] = C64::new(1.0, 0.0);
        let all: Vec<CPoint> = span.iter().chain(&basis).cloned().collect();
        let r = project_out(&e, &all);
        if r.norm() > 1e-9 {
            basis.push(r.scale(1.0 / r.norm()));
        }
    }
    basis
}

/// Largest `t ≤ cap` with `p + t v` in the closure, by bisection from 0.
fn closure_reach(d: &Domain, p: &CPoint, v: &CPoint, cap: f64, tol: f64) -> f64 {
    let inside = |t: f64| d.closure_margin(&(p + &v.scale(t))) >= -tol;
    if inside(cap) {
        return f64::INFINITY;
    }
    if !inside(tol) {
        return 0.0;
    }
    let (mut lo, mut hi) = (tol, cap);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub fn char_set(d: &Domain, p: &CPoint, cfg: &MetricConfig) -> Result<CharSet> {
    let normals: Vec<CPoint> = d.supporting_normals(p)?.iter().map(|v| CPoint::from_real(v)).collect();
    let kernel = complex_complement(&normals, d.dim());
    let cap = 1e3;
    let band = 1e-9;
    let mut rng = seeded(cfg.seed, 0xC4);
    let mut samples = vec![p.clone()];
    let mut dirs: Vec<CPoint> = Vec::new();
    for b in &kernel {
        for k in 0..16 {
            dirs.push(b.cscale(C64::from_polar(1.0, std::f64::consts::PI * k as f64 / 8.0)));
        }
    }
    if kernel.len() > 1 {
        for _ in 0..32 {
            let coef: Vec<f64> = random_unit(&mut rng, 2 * kernel.len());
            let v = kernel.iter().enumerate().fold(CPoint::zeros(d.dim()), |acc, (i, b)| {
                &acc + &b.cscale(C64::new(coef[2 * i], coef[2 * i + 1]))
            });
            dirs.push(v);
        }
    }
    // real directions along which the set extends
    let mut reach: Vec<(CPoint, f64)> = Vec::new();
    for v in dirs {
        let t = closure_reach(d, p, &v, cap, band);
        if t > 1e-3 {
            let shown = if t.is_finite() { t } else { 1.0 };
            samples.push(p + &v.scale(shown));
            reach.push((v, t));
        }
    }
    // real Gram-Schmidt on the reachable directions
    let mut real_basis: Vec<CPoint> = Vec::new();
    let mut extent = Vec::new();
    for (v, t) in &reach {
        let mut r = v.to_real();
        for b in &real_basis {
            let bb = b.to_real();
            let dot: f64 = r.iter().zip(&bb).map(|(a, c)| a * c).sum();
            for (ri, bi) in r.iter_mut().zip(&bb) {
                *ri -= dot * bi;
            }
        }
        let n = r.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 1e-6 {
            normalize(&mut r);
            real_basis.push(CPoint::from_real(&r));
            extent.push(*t);
        }
    }
    Ok(CharSet { point: p.clone(), complex_kernel: kernel, real_basis, extent, samples })
}
