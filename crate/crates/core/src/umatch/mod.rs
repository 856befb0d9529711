//! Proper U-match decompositions `R · M = D · C`, in full and compressed form.

mod compressed;
mod full;
mod matching;
mod oracle;

pub use compressed::{
    clearing_filter, decompose_compressed, ClearingFilter, CompressedUmatch, DecomposeOptions,
    OpCounters,
};
pub use full::{decompose_full, invert_upper_unitriangular, FullUmatch};
pub use matching::MatchingArray;
pub use oracle::{matching_rank_oracle, pareto_pairs};
