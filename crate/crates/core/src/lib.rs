//! Antichain saturation in the Boolean lattice.
//!
//! A family `F ⊆ 2^[n]` is *k-antichain saturated* when it contains no
//! antichain of `k` pairwise-incomparable sets, but adding any absent set
//! creates one. This crate computes the minimum size `sat(n, k)` of such a
//! family, constructs minimum families together with a witness cover by
//! `k - 1` skipless chains, and verifies saturation of arbitrary families.
//!
//! The building blocks are exposed as well:
//!
//! * [`lattice`]: subsets of `[n]` as bit words, families, layers, shadows,
//!   colexicographic order and the mirror map.
//! * [`matching`]: maximum bipartite matching, Hall deficiency witnesses and
//!   the matching number `ν` of a single-layer family.
//! * [`pathcover`]: minimum-cost vertex-disjoint path covers of layered
//!   subset graphs, the engine behind skipless chain covers.
//! * [`chains`]: Dilworth width with dual certificates, symmetric chain
//!   decompositions and skipless chain covers.
//! * [`colex`]: colex segments, cascade and r-expansions of integers into
//!   binomial sums, the closed form for `ν` of a colex segment, and the
//!   layer quota sequence `c_t`.
//! * [`saturation`]: `sat(n, k)` values, minimum saturated families,
//!   saturation verification, greedy saturation and a brute-force oracle.
//!
//! Everything is deterministic: canonical orders are fixed, randomized
//! operations take explicit seeds, and all arithmetic is overflow-checked.

pub mod chains;
pub mod colex;
pub mod error;
pub mod lattice;
pub mod matching;
pub mod pathcover;
pub mod saturation;

pub use chains::{dilworth, layer_matching, skipless_cover, symmetric_chain_decomposition};
pub use chains::{Chain, ChainCover};
pub use colex::{
    binomial, c_sequence, cascade, colex_segment, nu_colex, r_expansion, shadow_size_colex,
    t_expansion_shift, CSequence, CascadeExpansion, RExpansion,
};
pub use error::Error;
pub use lattice::{colex_compare, shadow, ElementSet, Family};
pub use matching::{hall_deficiency, max_matching, nu, BipartiteGraph, Matching};
pub use pathcover::{min_path_cover, LayeredCoverInstance};
pub use saturation::{
    construct_saturated, greedy_saturate, is_k_antichain_saturated,
    is_k_antichain_saturated_with, oracle_min_sat, sat_value, AddOrder, Culprit, LayerQuota,
    SatProfile, SatStatus, SaturationReport,
};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
