//! Colouring discrepancy of Steiner triple systems.
//!
//! For an `r`-colouring `χ` of all 3-subsets of `[n]` and a labelled STS `S`,
//! `disc(S, χ) = max_c |#{T ∈ S : χ(T) = c} − |S|/r|`. This crate enumerates
//! and constructs systems, evaluates discrepancies exactly (as numerators
//! over `r`), and searches for colourings minimising the worst case over a
//! family of systems, exactly for small orders and by annealing otherwise.

pub mod anneal;
pub mod bitset;
pub mod colourings;
pub mod discrepancy;
pub mod error;
pub mod search;
pub mod seed;
pub mod stats;
pub mod sts;
pub mod types;

pub use bitset::TripleSet;
pub use colourings::{
    build_cut_colouring, closed_form_disc, conjectured_delta2, cut_colouring_of_size, verify_blue_count_identity,
    Delta2Formula, Twelfths,
};
pub use discrepancy::{disc_on_system, max_disc_over_systems};
pub use error::{Error, Result};
pub use seed::{derive_seed, DEFAULT_SEED};
pub use sts::{LabelledFamily, Provenance};
pub use types::{rank_triple, unrank_triple, Colouring, Order, ScaledDiscrepancy, SteinerSystem, Triple};
