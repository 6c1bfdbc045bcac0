use serde::{Deserialize, Serialize};

use super::sequence::PointSequence;
use crate::config::MetricConfig;
use crate::error::{HoroError, Result};
use crate::point::CPoint;

/// The three index windows used by every tail estimator.
#[derive(Clone, Debug, PartialEq)]
pub struct TailWindows {
    pub indices: [Vec<usize>; 3],
}

impl TailWindows {
    /// `[N0, N0+L)`, `[2N0, 2N0+L)`, `[4N0, 4N0+L)` for infinite sequences;
    /// three consecutive windows ending at the last term for finite ones.
    pub fn for_sequence(seq: &PointSequence, cfg: &MetricConfig) -> Result<TailWindows> {
        match seq.len() {
            None => {
                let [a, b, c] = cfg.window_starts();
                let w = |s: usize| (s..s + cfg.tail_len).collect::<Vec<_>>();
                Ok(TailWindows { indices: [w(a), w(b), w(c)] })
            }
            Some(l) => {
                let w = cfg.tail_len.min(l / 3);
                if w < 4 {
                    return Err(HoroError::InvalidArgument(format!(
                        "finite sequence of length {l} is too short for tail estimation"
                    )));
                }
                let s = l - 3 * w + 1;
                let win = |k: usize| (s + k * w..s + (k + 1) * w).collect::<Vec<_>>();
                Ok(TailWindows { indices: [win(0), win(1), win(2)] })
            }
        }
    }

    pub fn last(&self) -> (usize, usize) {
        (self.indices[2][0], self.indices[2].len())
    }

    pub fn points(&self, seq: &PointSequence) -> Result<[Vec<CPoint>; 3]> {
        Ok([
            seq.points(&self.indices[0])?,
            seq.points(&self.indices[1])?,
            seq.points(&self.indices[2])?,
        ])
    }
}

/// Windowed limsup estimate of a tail quantity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    /// Running maximum per window.
    pub maxima: [f64; 3],
    /// Running minimum per window (oscillation diagnostics).
    pub minima: [f64; 3],
    pub estimate: f64,
    pub converged: bool,
}

impl TailEstimate {
    pub fn from_windows(values: &[Vec<f64>; 3], tol: f64) -> TailEstimate {
        let max = |v: &Vec<f64>| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = |v: &Vec<f64>| v.iter().copied().fold(f64::INFINITY, f64::min);
        let maxima = [max(&values[0]), max(&values[1]), max(&values[2])];
        let minima = [min(&values[0]), min(&values[1]), min(&values[2])];
        let converged = maxima.iter().all(|m| m.is_finite())
            && (maxima[1] - maxima[0]).abs() < tol
            && (maxima[2] - maxima[1]).abs() < tol;
        TailEstimate { maxima, minima, estimate: maxima[2], converged }
    }

    /// Spread of the last window, zero for a convergent tail.
    pub fn oscillation(&self) -> f64 {
        self.maxima[2] - self.minima[2]
    }

    /// A limit (not only a limsup) is supported by the data.
    pub fn limit_converged(&self, tol: f64) -> bool {
        self.converged && self.oscillation() <= tol
    }

    /// Escape trend of the windows: minima increase by more than `gap` at
    /// each doubling.
    pub fn escaping(&self, gap: f64) -> bool {
        self.minima[1] - self.minima[0] > gap && self.minima[2] - self.minima[1] > gap
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Decided,
    /// The estimate sits within the tolerance band of the threshold, or the
    /// tail did not stabilize.
    Undecidable,
    /// A search ran out of budget without a certificate either way.
    Inconclusive,
}

/// A boolean decision from tail-asymptotic data, with its diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub decision: bool,
    pub outcome: Outcome,
    pub estimate: f64,
    /// `threshold − estimate`; positive on the "true" side.
    pub margin: f64,
    pub converged: bool,
    pub window: (usize, usize),
    pub detail: String,
}

impl Verdict {
    /// Decision for "estimate lies below threshold". With a bracket
    /// `[lower, upper]` around the estimate both ends must clear the band.
    pub fn below_threshold(
        est: f64,
        lower: f64,
        upper: f64,
        threshold: f64,
        converged: bool,
        tol: f64,
        window: (usize, usize),
    ) -> Verdict {
        let margin = threshold - est;
        let clearly_below = upper < threshold - tol;
        let clearly_above = lower > threshold + tol;
        let (decision, outcome) = if converged && clearly_below {
            (true, Outcome::Decided)
        } else if converged && clearly_above {
            (false, Outcome::Decided)
        } else {
            (false, Outcome::Undecidable)
        };
        Verdict { decision, outcome, estimate: est, margin, converged, window, detail: String::new() }
    }

    pub fn decided(decision: bool, estimate: f64, margin: f64, detail: impl Into<String>) -> Verdict {
        Verdict {
            decision,
            outcome: Outcome::Decided,
            estimate,
            margin,
            converged: true,
            window: (0, 0),
            detail: detail.into(),
        }
    }

    pub fn inconclusive(estimate: f64, margin: f64, detail: impl Into<String>) -> Verdict {
        Verdict {
            decision: false,
            outcome: Outcome::Inconclusive,
            estimate,
            margin,
            converged: false,
            window: (0, 0),
            detail: detail.into(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Verdict {
        self.detail = detail.into();
        self
    }

    pub fn with_window(mut self, window: (usize, usize)) -> Verdict {
        self.window = window;
        self
    }

    pub fn is_decided(&self) -> bool {
        self.outcome == Outcome::Decided
    }

    pub fn is_true(&self) -> bool {
        self.is_decided() && self.decision
    }

    pub fn is_false(&self) -> bool {
        self.is_decided() && !self.decision
    }
}
