//! Sequence horospheres, admissibility, Busemann values, equivalence and the
//! bidisc classification.

mod admissibility;
mod bidisc;
pub(crate) mod cluster;
mod equivalence;
mod horosphere;
pub mod properties;
mod sequence;
mod tail;

pub use admissibility::is_admissible;
pub(crate) use admissibility::witness_candidates;
pub use bidisc::{
    bidisc_classify, bidisc_rule, canonical_form_bidisc, BidiscCase, BidiscClass, CanonicalForm, HoroRule, RuleTerm,
};
pub(crate) use bidisc::bidisc_pool;
pub use equivalence::{rebase_factors, sequences_equivalent, RebaseReport};
pub(crate) use equivalence::horosphere_pool;
pub use horosphere::{
    busemann_value, disc_busemann, disc_horo_level, disc_horosphere_closed_form, horosphere_contains, HoroEstimate,
    Horosphere, PreparedHorosphere,
};
pub use sequence::{CoordPath, PointSequence, SeqLabel};
pub use tail::{Outcome, TailEstimate, TailWindows, Verdict};
