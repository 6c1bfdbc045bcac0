//! Numerical toolkit for sequence horospheres on model domains of `C^n`.
//!
//! All invariant distances use the `½ log` normalization, so that on the unit
//! disc `K(0, r) = ½ log((1 + r)/(1 − r)) = atanh(r)` and the disc horosphere
//! `{z : |p − z|² / (1 − |z|²) < R}` is the `½ log R` sublevel set of the
//! Busemann function of any sequence converging to `p`.
//!
//! Module map:
//! - [`metric_core`]: domains, boundary distances, closed-form distances and
//!   certified brackets on convex domains.
//! - [`horospheres`]: point sequences, horosphere membership by windowed
//!   limsup, admissibility, equivalence and the bidisc classification.
//! - [`boundary_topology`]: horosphere-topology convergence, E-limits,
//!   impressions and principal parts.
//! - [`gromov`]: Gromov products, rays, quasi-geodesics and thin triangles.
//! - [`maps_extension`]: explicit biholomorphisms, cluster sets, `Ch(p)` and
//!   Denjoy–Wolff iteration.
//! - [`cli`]: the batch experiment runner behind the `horokit` binary.

pub mod boundary_topology;
pub mod cli;
pub mod config;
pub mod error;
pub mod gromov;
pub mod horospheres;
pub mod maps_extension;
pub mod metric_core;
pub mod point;
mod rng;

pub use config::MetricConfig;
pub use error::{HoroError, Result};
pub use point::{CPoint, C64};
