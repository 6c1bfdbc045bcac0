use serde::{Deserialize, Serialize};

use crate::error::{HoroError, Result};

/// Evaluation budget shared by every tail-asymptotic estimator.
///
/// Limsups are estimated over three windows `[N0, N0+L)`, `[2N0, 2N0+L)`,
/// `[4N0, 4N0+L)`; an estimate is converged when both doublings move it by
/// less than `tol`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricConfig {
    pub tail_start: usize,
    pub tail_len: usize,
    pub tol: f64,
    pub r_grid: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            tail_start: 25_000,
            tail_len: 16,
            tol: 1e-3,
            r_grid: vec![0.05, 0.2, 1.0, 5.0, 20.0],
            samples: 400,
            seed: 7,
        }
    }
}

impl MetricConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tail_start < 1 {
            return Err(HoroError::InvalidConfig("tail_start must be >= 1".into()));
        }
        if self.tail_len < 8 {
            return Err(HoroError::InvalidConfig("tail_len must be >= 8".into()));
        }
        if !(self.tol > 0.0) {
            return Err(HoroError::InvalidConfig("tol must be > 0".into()));
        }
        if self.r_grid.is_empty() {
            return Err(HoroError::InvalidConfig("r_grid is empty".into()));
        }
        if self.r_grid.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(HoroError::InvalidConfig("r_grid must be positive".into()));
        }
        if self.r_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HoroError::InvalidConfig("r_grid must be strictly increasing".into()));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        MetricConfig { seed, ..self.clone() }
    }

    pub fn with_r_grid(&self, r_grid: Vec<f64>) -> Self {
        MetricConfig { r_grid, ..self.clone() }
    }

    /// Window start indices for the three doublings.
    pub fn window_starts(&self) -> [usize; 3] {
        [self.tail_start, 2 * self.tail_start, 4 * self.tail_start]
    }

    /// Merge radius for Euclidean cluster detection.
    pub fn merge_radius(&self) -> f64 {
        10.0 * self.tol
    }

    /// Indices at which a tested sequence is probed against a horosphere.
    /// They stay well below the horosphere's own tail so that the limsup
    /// estimator resolves the probe points.
    pub fn probe_indices(&self) -> Vec<usize> {
        let lo = (self.tail_start / 400).max(8);
        let hi = (self.tail_start / 50).max(lo + 8);
        let steps = 8;
        (0..steps)
            .map(|k| {
                let f = k as f64 / (steps - 1) as f64;
                (lo as f64 * (hi as f64 / lo as f64).powf(f)).round() as usize
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        MetricConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_fields() {
        let base = MetricConfig::default();
        let bad = [
            MetricConfig { tail_start: 0, ..base.clone() },
            MetricConfig { tail_len: 4, ..base.clone() },
            MetricConfig { tol: 0.0, ..base.clone() },
            MetricConfig { r_grid: vec![1.0, 0.5], ..base.clone() },
            MetricConfig { r_grid: vec![-1.0], ..base.clone() },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn probe_indices_increase_below_tail() {
        let cfg = MetricConfig::default();
        let idx = cfg.probe_indices();
        assert!(idx.windows(2).all(|w| w[0] <= w[1]));
        assert!(*idx.last().unwrap() < cfg.tail_start);
    }
}
