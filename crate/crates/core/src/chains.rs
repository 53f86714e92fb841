//! Chains, chain covers, Dilworth certificates, and symmetric chain
//! decompositions of the subset lattice.

use crate::error::Error;
use crate::lattice::{ElementSet, Family};
use crate::matching::{max_matching, BipartiteGraph, Matching};
use crate::pathcover::{min_path_cover, LayeredCoverInstance};
use crate::Result;

/// Largest universe for which a full symmetric chain decomposition is
/// materialized.
const SCD_BUDGET: u32 = 22;
/// Largest family size accepted by the quadratic comparability scan.
pub(crate) const COMPARABILITY_BUDGET: usize = 8192;

/// A nonempty sequence of sets, each strictly containing its predecessor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    sets: Vec<ElementSet>,
}

impl Chain {
    /// Validates strict inclusion between consecutive sets and a shared
    /// universe.
    pub fn new(sets: Vec<ElementSet>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::Precondition("chain needs at least one set".into()));
        }
        for i in 1..sets.len() {
            if sets[i].universe() != sets[0].universe() {
                return Err(Error::UniverseMismatch(
                    sets[0].universe(),
                    sets[i].universe(),
                ));
            }
            if !sets[i - 1].is_proper_subset_of(&sets[i]) {
                return Err(Error::NotAChain(i));
            }
        }
        Ok(Self { sets })
    }

    pub fn sets(&self) -> &[ElementSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// True when every step adds exactly one element.
    pub fn is_skipless(&self) -> bool {
        self.sets
            .windows(2)
            .all(|w| w[1].cardinality() == w[0].cardinality() + 1)
    }

    /// Smallest set of the chain.
    pub fn bottom(&self) -> &ElementSet {
        &self.sets[0]
    }

    /// Largest set of the chain.
    pub fn top(&self) -> &ElementSet {
        &self.sets[self.sets.len() - 1]
    }
}

/// A sequence of pairwise-disjoint chains over one universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCover {
    universe_size: u32,
    chains: Vec<Chain>,
}

impl ChainCover {
    /// Validates the shared universe and pairwise disjointness.
    pub fn new(universe_size: u32, chains: Vec<Chain>) -> Result<Self> {
        let mut words: Vec<u64> = Vec::new();
        for chain in &chains {
            if chain.bottom().universe() != universe_size {
                return Err(Error::UniverseMismatch(
                    universe_size,
                    chain.bottom().universe(),
                ));
            }
            words.extend(chain.sets().iter().map(|s| s.word()));
        }
        let total = words.len();
        words.sort_unstable();
        words.dedup();
        if words.len() != total {
            return Err(Error::OverlappingChains);
        }
        Ok(Self {
            universe_size,
            chains,
        })
    }

    pub fn universe_size(&self) -> u32 {
        self.universe_size
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// Total number of sets across all chains.
    pub fn set_count(&self) -> usize {
        self.chains.iter().map(Chain::len).sum()
    }

    /// All covered sets as one family.
    pub fn union_family(&self) -> Result<Family> {
        Family::from_sets(
            self.universe_size,
            self.chains.iter().flat_map(|c| c.sets().iter().copied()),
        )
    }
}

/// Dilworth duality on a family ordered by inclusion: the width, a
/// maximum antichain attaining it, and a partition into that many chains.
/// The two certificates are checked against each other on every call.
pub fn dilworth(f: &Family) -> Result<(usize, Family, ChainCover)> {
    if f.is_empty() {
        return Err(Error::Precondition(
            "width of the empty family is undefined".into(),
        ));
    }
    if f.len() > COMPARABILITY_BUDGET {
        return Err(Error::Capacity(format!(
            "comparability graph on {} sets exceeds the budget of {COMPARABILITY_BUDGET}",
            f.len()
        )));
    }
    let sets = f.members();
    let adjacency: Vec<Vec<usize>> = sets
        .iter()
        .map(|x| {
            sets.iter()
                .enumerate()
                .filter(|(_, y)| x.is_proper_subset_of(y))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    let graph = BipartiteGraph::new(sets.len(), sets.len(), adjacency)?;
    let matching = max_matching(&graph);
    let width = sets.len() - matching.len();

    // Chain partition: matched pairs are successor links.
    let mut next = vec![usize::MAX; sets.len()];
    let mut has_predecessor = vec![false; sets.len()];
    for &(u, v) in &matching.pairs {
        next[u] = v;
        has_predecessor[v] = true;
    }
    let mut chains = Vec::with_capacity(width);
    for (head, &covered) in has_predecessor.iter().enumerate() {
        if covered {
            continue;
        }
        let mut members = Vec::new();
        let mut i = head;
        loop {
            members.push(sets[i]);
            if next[i] == usize::MAX {
                break;
            }
            i = next[i];
        }
        chains.push(Chain::new(members)?);
    }
    let partition = ChainCover::new(f.universe(), chains)?;

    // Maximum antichain from the alternating-reachability vertex cover.
    let mut match_l = vec![None; sets.len()];
    let mut match_r = vec![None; sets.len()];
    for &(u, v) in &matching.pairs {
        match_l[u] = Some(v);
        match_r[v] = Some(u);
    }
    let mut left_reached = vec![false; sets.len()];
    let mut right_reached = vec![false; sets.len()];
    let mut queue: std::collections::VecDeque<usize> = (0..sets.len())
        .filter(|&u| {
            if match_l[u].is_none() {
                left_reached[u] = true;
            }
            match_l[u].is_none()
        })
        .collect();
    while let Some(u) = queue.pop_front() {
        for &v in &graph.adjacency()[u] {
            if right_reached[v] {
                continue;
            }
            right_reached[v] = true;
            if let Some(w) = match_r[v] {
                if !left_reached[w] {
                    left_reached[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let antichain = Family::from_sets(
        f.universe(),
        (0..sets.len())
            .filter(|&x| left_reached[x] && !right_reached[x])
            .map(|x| sets[x]),
    )?;

    verify_dilworth_certificates(f, width, &antichain, &partition)?;
    Ok((width, antichain, partition))
}

fn verify_dilworth_certificates(
    f: &Family,
    width: usize,
    antichain: &Family,
    partition: &ChainCover,
) -> Result<()> {
    if antichain.len() != width || partition.len() != width {
        return Err(Error::ConstructionInvariant(format!(
            "certificate sizes {} and {} disagree with width {width}",
            antichain.len(),
            partition.len()
        )));
    }
    let members = antichain.members();
    for (i, x) in members.iter().enumerate() {
        if !f.contains(x) {
            return Err(Error::ConstructionInvariant(
                "antichain leaves the family".into(),
            ));
        }
        for y in &members[i + 1..] {
            if x.is_subset_of(y) || y.is_subset_of(x) {
                return Err(Error::ConstructionInvariant(format!(
                    "comparable certificate members {x} and {y}"
                )));
            }
        }
    }
    if &partition.union_family()? != f {
        return Err(Error::ConstructionInvariant(
            "chain partition does not cover the family exactly".into(),
        ));
    }
    Ok(())
}

/// Unmatched bracket positions of a word: element `i` is an opening
/// bracket when absent and a closing bracket when present. Returns the
/// positions (1-based, ascending) whose brackets stay unmatched, and
/// how many of them are closing (these always come first).
fn unmatched_positions(word: u64, n: u32) -> (Vec<u32>, usize) {
    let mut unmatched_closers: Vec<u32> = Vec::new();
    let mut open_stack: Vec<u32> = Vec::new();
    for i in 1..=n {
        if word >> (i - 1) & 1 == 1 {
            if open_stack.pop().is_none() {
                unmatched_closers.push(i);
            }
        } else {
            open_stack.push(i);
        }
    }
    let closers = unmatched_closers.len();
    unmatched_closers.extend(open_stack);
    (unmatched_closers, closers)
}

/// Partition of all of `2^[n]` into `C(n, floor(n/2))` skipless symmetric
/// chains by the bracket-matching rule: matched element pairs are frozen
/// and the unmatched positions fill with elements left to right.
///
/// `n = 0` yields the degenerate single chain containing only the empty
/// set.
pub fn symmetric_chain_decomposition(n: u32) -> Result<ChainCover> {
    if n > SCD_BUDGET {
        return Err(Error::Capacity(format!(
            "decomposition of 2^[{n}] exceeds the budget of n <= {SCD_BUDGET}"
        )));
    }
    let mut chains = Vec::new();
    for word in 0..1u64 << n {
        let (unmatched, closers) = unmatched_positions(word, n);
        if closers > 0 {
            // Not a chain bottom: some unmatched position already holds
            // an element.
            continue;
        }
        let mut sets = Vec::with_capacity(unmatched.len() + 1);
        let mut w = word;
        sets.push(ElementSet::from_word(n, w)?);
        for &p in &unmatched {
            w |= 1 << (p - 1);
            sets.push(ElementSet::from_word(n, w)?);
        }
        chains.push(Chain::new(sets)?);
    }
    chains.sort_by_key(|c| (c.bottom().cardinality(), c.bottom().word()));
    ChainCover::new(n, chains)
}

/// An inclusion matching between full layers `s` and `r` of `[n]`,
/// saturating the smaller layer. Pair `(i, j)` links the i-th set of
/// layer `s` to the j-th set of layer `r`, both in colex order.
///
/// Valid ranges: `s < r <= ceil(n/2)` or `s > r >= floor(n/2)`; these are
/// the bands where consecutive layer sizes are monotone, realized by
/// composing symmetric chain decomposition segments.
pub fn layer_matching(n: u32, s: u32, r: u32) -> Result<Matching> {
    let toward_middle_up = s < r && r <= n.div_ceil(2);
    let toward_middle_down = s > r && r >= n / 2;
    if s > n || r > n || !(toward_middle_up || toward_middle_down) {
        return Err(Error::Precondition(format!(
            "layers s={s}, r={r} of [{n}] are outside both monotone bands"
        )));
    }
    let scd = symmetric_chain_decomposition(n)?;
    let layer_s = Family::full_layer(n, s)?;
    let layer_r = Family::full_layer(n, r)?;
    let rank = |layer: &Family, word: u64| {
        layer
            .members()
            .binary_search_by_key(&word, |m| m.word())
            .expect("full layer contains every word of its cardinality")
    };
    let lo = s.min(r);
    let hi = s.max(r);
    let mut pairs = Vec::new();
    for chain in scd.chains() {
        let bottom = chain.bottom().cardinality();
        if bottom > lo || chain.top().cardinality() < hi {
            continue;
        }
        let set_s = &chain.sets()[(s - bottom) as usize];
        let set_r = &chain.sets()[(r - bottom) as usize];
        pairs.push((rank(&layer_s, set_s.word()), rank(&layer_r, set_r.word())));
    }
    pairs.sort_unstable();
    Ok(Matching { pairs })
}

/// Re-covers the union of the input chains by exactly as many pairwise
/// disjoint skipless chains, possibly passing through extra sets. Inputs
/// that are already skipless are returned unchanged.
pub fn skipless_cover(cover: &ChainCover) -> Result<ChainCover> {
    if cover.chains().iter().all(Chain::is_skipless) {
        return Ok(cover.clone());
    }
    let union = cover.union_family()?;
    let instance = LayeredCoverInstance::new(union.clone(), cover.len())?;
    let chains = min_path_cover(&instance)?;
    let result = ChainCover::new(cover.universe_size(), chains)?;

    if result.len() != cover.len() {
        return Err(Error::ConstructionInvariant(format!(
            "cover came back with {} chains instead of {}",
            result.len(),
            cover.len()
        )));
    }
    if let Some(broken) = result.chains().iter().find(|c| !c.is_skipless()) {
        return Err(Error::ConstructionInvariant(format!(
            "chain starting at {} skips a layer",
            broken.bottom()
        )));
    }
    let covered = result.union_family()?;
    if union.iter().any(|s| !covered.contains(s)) {
        return Err(Error::ConstructionInvariant(
            "cover misses an input set".into(),
        ));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex::{binomial, colex_segment};
    use rand::{Rng, SeedableRng};

    fn set(universe: u32, elements: &[u32]) -> ElementSet {
        ElementSet::from_elements(universe, elements).unwrap()
    }

    #[test]
    fn chain_validation() {
        assert!(Chain::new(vec![]).is_err());
        let gappy = Chain::new(vec![set(3, &[1]), set(3, &[1, 2, 3])]).unwrap();
        assert!(!gappy.is_skipless());
        let skipless = Chain::new(vec![set(3, &[1]), set(3, &[1, 3]), set(3, &[1, 2, 3])]).unwrap();
        assert!(skipless.is_skipless());
        assert!(Chain::new(vec![set(3, &[1]), set(3, &[2, 3])]).is_err());
        assert!(Chain::new(vec![set(3, &[1]), set(3, &[1])]).is_err());
    }

    #[test]
    fn cover_rejects_overlap() {
        let a = Chain::new(vec![set(3, &[1])]).unwrap();
        let b = Chain::new(vec![set(3, &[1]), set(3, &[1, 2])]).unwrap();
        assert!(matches!(
            ChainCover::new(3, vec![a, b]),
            Err(Error::OverlappingChains)
        ));
    }

    #[test]
    fn dilworth_on_a_single_chain() {
        let f = Family::from_sets(4, [set(4, &[1]), set(4, &[1, 2]), set(4, &[1, 2, 4])]).unwrap();
        let (width, antichain, partition) = dilworth(&f).unwrap();
        assert_eq!(width, 1);
        assert_eq!(antichain.len(), 1);
        assert_eq!(partition.len(), 1);
        assert_eq!(partition.chains()[0].len(), 3);
    }

    #[test]
    fn dilworth_on_a_full_layer() {
        let f = Family::full_layer(4, 2).unwrap();
        let (width, antichain, _) = dilworth(&f).unwrap();
        assert_eq!(width, 6);
        assert_eq!(antichain, f);
    }

    #[test]
    fn dilworth_rejects_empty() {
        assert!(dilworth(&Family::new(3).unwrap()).is_err());
    }

    #[test]
    fn wide_antichain_in_two_stacked_colex_segments() {
        let upper = colex_segment(261, 5).unwrap().embed(12).unwrap();
        let lower = colex_segment(219, 4).unwrap().embed(12).unwrap();
        let f = upper.union(&lower).unwrap();
        assert_eq!(f.len(), 480);
        let (width, antichain, partition) = dilworth(&f).unwrap();
        assert!(width >= 262, "width {width}");
        assert_eq!(antichain.len(), width);
        assert_eq!(partition.len(), width);
    }

    #[test]
    fn scd_smallest_cases() {
        let one = symmetric_chain_decomposition(1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.chains()[0].sets().len(), 2);

        let two = symmetric_chain_decomposition(2).unwrap();
        let words: Vec<Vec<u64>> = two
            .chains()
            .iter()
            .map(|c| c.sets().iter().map(|s| s.word()).collect())
            .collect();
        assert_eq!(words, vec![vec![0b00, 0b01, 0b11], vec![0b10]]);

        let four = symmetric_chain_decomposition(4).unwrap();
        assert_eq!(four.len(), 6);

        let degenerate = symmetric_chain_decomposition(0).unwrap();
        assert_eq!(degenerate.len(), 1);
        assert_eq!(degenerate.chains()[0].sets().len(), 1);
        assert!(degenerate.chains()[0].bottom().is_empty());
    }

    #[test]
    fn scd_structure_up_to_sixteen() {
        for n in 1..=16u32 {
            let scd = symmetric_chain_decomposition(n).unwrap();
            assert_eq!(
                scd.len() as u64,
                binomial(n as u64, n as u64 / 2).unwrap(),
                "chain count at n={n}"
            );
            assert_eq!(scd.set_count() as u64, 1u64 << n, "coverage at n={n}");
            for chain in scd.chains() {
                assert!(chain.is_skipless());
                assert_eq!(
                    chain.bottom().cardinality() + chain.top().cardinality(),
                    n,
                    "symmetry at n={n}"
                );
            }
        }
    }

    #[test]
    fn layer_matching_examples() {
        let m = layer_matching(4, 1, 2).unwrap();
        assert_eq!(m.len(), 4);
        let layer1 = Family::full_layer(4, 1).unwrap();
        let layer2 = Family::full_layer(4, 2).unwrap();
        let mut seen_right = vec![false; layer2.len()];
        for &(i, j) in &m.pairs {
            assert!(layer1.members()[i].is_subset_of(&layer2.members()[j]));
            assert!(!seen_right[j]);
            seen_right[j] = true;
        }

        let m = layer_matching(5, 3, 2).unwrap();
        assert_eq!(m.len(), 10);
        let layer3 = Family::full_layer(5, 3).unwrap();
        let layer2 = Family::full_layer(5, 2).unwrap();
        for &(i, j) in &m.pairs {
            assert!(layer2.members()[j].is_subset_of(&layer3.members()[i]));
        }

        assert_eq!(layer_matching(3, 0, 1).unwrap().len(), 1);

        assert!(layer_matching(4, 2, 1).is_err());
        assert!(layer_matching(6, 2, 4).is_err());
        assert!(layer_matching(4, 2, 2).is_err());
    }

    #[test]
    fn skipless_cover_fills_a_gap() {
        let input = ChainCover::new(
            2,
            vec![Chain::new(vec![set(2, &[]), set(2, &[1, 2])]).unwrap()],
        )
        .unwrap();
        let out = skipless_cover(&input).unwrap();
        assert_eq!(out.len(), 1);
        let sets = out.chains()[0].sets();
        assert_eq!(sets.len(), 3);
        assert_eq!(sets[1].cardinality(), 1);
    }

    #[test]
    fn skipless_cover_identity_on_skipless_input() {
        let input = ChainCover::new(
            3,
            vec![
                Chain::new(vec![set(3, &[1]), set(3, &[1, 2])]).unwrap(),
                Chain::new(vec![set(3, &[3])]).unwrap(),
            ],
        )
        .unwrap();
        let out = skipless_cover(&input).unwrap();
        assert_eq!(&out, &input);
    }

    #[test]
    fn skipless_cover_reroutes_two_chains() {
        let input = ChainCover::new(
            3,
            vec![
                Chain::new(vec![set(3, &[]), set(3, &[1, 2, 3])]).unwrap(),
                Chain::new(vec![set(3, &[1]), set(3, &[1, 3])]).unwrap(),
            ],
        )
        .unwrap();
        let out = skipless_cover(&input).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out.chains().iter().all(Chain::is_skipless));
        let covered = out.union_family().unwrap();
        for s in &input.union_family().unwrap() {
            assert!(covered.contains(s));
        }
    }

    #[test]
    fn skipless_cover_at_dilworth_width_always_succeeds() {
        // Random families in 2^[8], each covered at its exact width: the
        // flow must always find skipless chains without extra paths.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        for round in 0..1000 {
            let density = 0.02 + 0.3 * (round % 10) as f64 / 10.0;
            let members = (0..256u64)
                .filter(|_| rng.gen_bool(density))
                .map(|w| ElementSet::from_word(8, w).unwrap());
            let f = Family::from_sets(8, members).unwrap();
            if f.is_empty() {
                continue;
            }
            let (width, _, partition) = dilworth(&f).unwrap();
            let out = skipless_cover(&partition).unwrap();
            assert_eq!(out.len(), width, "round {round}");
            assert!(out.chains().iter().all(Chain::is_skipless));
            let covered = out.union_family().unwrap();
            assert!(f.iter().all(|s| covered.contains(s)), "round {round}");
        }
    }

    #[test]
    fn lowering_the_target_below_width_is_infeasible() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        for _ in 0..200 {
            let members = (0..128u64)
                .filter(|_| rng.gen_bool(0.12))
                .map(|w| ElementSet::from_word(7, w).unwrap());
            let f = Family::from_sets(7, members).unwrap();
            if f.len() < 2 {
                continue;
            }
            let (width, _, _) = dilworth(&f).unwrap();
            if width < 2 {
                continue;
            }
            let feasible = LayeredCoverInstance::new(f.clone(), width).unwrap();
            assert!(min_path_cover(&feasible).is_ok());
            let infeasible = LayeredCoverInstance::new(f.clone(), width - 1).unwrap();
            assert!(matches!(
                min_path_cover(&infeasible),
                Err(Error::InfeasibleTarget { .. })
            ));
            checked += 1;
        }
        assert!(checked > 50);
    }
}
