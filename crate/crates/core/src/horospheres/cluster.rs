use crate::point::CPoint;

/// A group of nearby points with its running mean.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCluster {
    pub center: CPoint,
    pub members: Vec<usize>,
}

/// Greedy single-pass clustering with a fixed merge radius; each point
/// joins the first cluster whose current center is within `radius`.
pub fn greedy_clusters(points: &[CPoint], radius: f64) -> Vec<PointCluster> {
    let mut out: Vec<PointCluster> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        match out.iter_mut().find(|c| c.center.dist(p) <= radius) {
            Some(c) => {
                let k = c.members.len() as f64;
                c.center = c.center.scale(k / (k + 1.0));
                c.center = &c.center + &p.scale(1.0 / (k + 1.0));
                c.members.push(i);
            }
            None => out.push(PointCluster { center: p.clone(), members: vec![i] }),
        }
    }
    out
}


/// A convergent subsequence detected in the three tail windows.
#[derive(Clone, Debug, PartialEq)]
pub struct TailCluster {
    pub limit: CPoint,
    /// Positions (within each window) of the members.
    pub members: [Vec<usize>; 3],
}

/// Clusters the last window and assigns the earlier windows' points to the
/// nearest cluster within `radius`; returns the clusters and the number of
/// earlier points that matched none (nonzero signals an unstable tail).
pub fn tail_clusters(points: &[Vec<CPoint>; 3], radius: f64) -> (Vec<TailCluster>, usize) {
    let last = greedy_clusters(&points[2], radius);
    let mut out: Vec<TailCluster> = last
        .iter()
        .map(|c| TailCluster { limit: c.center.clone(), members: [Vec::new(), Vec::new(), c.members.clone()] })
        .collect();
    let mut stray = 0;
    for k in 0..2 {
        for (i, p) in points[k].iter().enumerate() {
            let best = out
                .iter()
                .enumerate()
                .map(|(j, c)| (j, c.limit.dist(p)))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((j, dist)) if dist <= radius => out[j].members[k].push(i),
                _ => stray += 1,
            }
        }
    }
    (out, stray)
}
