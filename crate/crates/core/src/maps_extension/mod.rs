//! Explicit biholomorphisms acting on horospheres and boundary points,
//! cluster sets, and Denjoy–Wolff iteration.

mod dynamics;
mod extension;
mod map_spec;

pub use dynamics::{denjoy_wolff_iterate, DenjoyReport, OrbitSummary};
pub use extension::{
    char_set, cluster_set, cluster_set_on, e_cluster_set, isometry_defect, pushforward_horosphere_check, CharSet,
    IsometryReport,
};
pub use map_spec::MapSpec;
