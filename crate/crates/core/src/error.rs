//! Error type shared by all modules.

use crate::lattice::Family;

/// Errors reported by lattice, matching, chain and saturation operations.
///
/// The variants split into three groups that callers typically map to
/// different exit paths: invalid input (preconditions, mismatched
/// universes), capacity limits (universe width, overflow, instance size)
/// and honest negative results that carry certificates (infeasible path
/// covers, failed construction invariants).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Universe size outside the supported range `0..=63`.
    #[error("universe size {0} exceeds the supported maximum of 63")]
    UniverseTooLarge(u32),

    /// Element outside `[1, n]` for the universe it was used with.
    #[error("element {element} outside universe [1, {universe}]")]
    ElementOutOfRange { element: u32, universe: u32 },

    /// Two values with different universe sizes were combined.
    #[error("universe sizes differ: {0} vs {1}")]
    UniverseMismatch(u32, u32),

    /// Layer index outside `[0, n]`.
    #[error("layer {layer} outside [0, {universe}]")]
    LayerOutOfRange { layer: u32, universe: u32 },

    /// An operation required all member sets to have one cardinality.
    #[error("family is not confined to a single layer")]
    MixedLayers,

    /// A precondition documented on the operation was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A sequence of sets is not strictly increasing under inclusion.
    #[error("sets do not form a chain: position {0} does not strictly contain its predecessor")]
    NotAChain(usize),

    /// Chains passed as a cover share a set.
    #[error("chains are not disjoint: a set appears twice")]
    OverlappingChains,

    /// Binomial or size arithmetic left the 64-bit range.
    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),

    /// The requested object does not fit in the supported universe or
    /// exceeds the enumeration budget.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// No path cover with the requested number of paths exists. The cut
    /// lists required vertices whose covering demands cannot be met
    /// simultaneously; it is a vertex set separating the demands in the
    /// residual flow network.
    #[error("no cover with {target} paths exists; {} required vertices form a blocking cut", cut.len())]
    InfeasibleTarget { target: usize, cut: Family },

    /// A constructed family failed its own verification. This is never
    /// silently repaired; the report describes the failure.
    #[error("construction invariant violated: {0}")]
    ConstructionInvariant(String),
}
