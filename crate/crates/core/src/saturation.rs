//! Antichain saturation: values, minimum constructions, verification,
//! greedy completion, and a brute-force oracle.
//!
//! A family is k-antichain saturated when it contains no k pairwise
//! incomparable sets but adding any missing set creates k of them. The
//! saturation number is the least size of such a family; above the
//! threshold `n >= 2*ell + 1` it is linear in `n` with coefficients read
//! off the quota sequence `c_t`.

use std::collections::HashMap;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use rand::seq::SliceRandom;
use rand::SeedableRng;

use crate::chains::{
    dilworth, skipless_cover, symmetric_chain_decomposition, Chain, ChainCover,
    COMPARABILITY_BUDGET,
};
use crate::colex::{binomial, c_sequence, r_expansion};
use crate::error::Error;
use crate::lattice::{next_same_cardinality, ElementSet, Family};
use crate::matching::augment_to_maximum;
use crate::Result;

/// Most candidate sets one verification scan may enumerate.
const CANDIDATE_BUDGET: u64 = 1 << 22;

/// How a saturation value relates to the true minimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SatStatus {
    /// `n` is below the threshold where proper saturated families exist;
    /// the only saturated family is the full power set.
    FullPowerset,
    /// The formula is only known to bound the minimum from below.
    LowerBound,
    /// Exact by the half-full special case, valid from `n >= ell + 1`.
    ExactNicecase,
    /// Exact by the general theorem, valid from `n >= 2*ell + 1`.
    Exact,
}

/// The saturation value for one `(n, k)` together with the quantities it
/// is computed from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatProfile {
    pub k: u64,
    pub n: u32,
    /// Smallest `j` with `C(j, floor(j/2)) >= k - 1`.
    pub ell: u32,
    /// Quotas `c_0..c_{floor(ell/2)}`.
    pub c: Vec<u64>,
    pub value: u64,
    pub status: SatStatus,
}

/// The saturation number (or its best known bound) for `n >= 1, k >= 1`.
///
/// `k = 1` yields 0 by convention: the empty family is the unique
/// 1-antichain saturated family.
pub fn sat_value(n: u32, k: u64) -> Result<SatProfile> {
    if n == 0 {
        return Err(Error::Precondition("saturation needs n >= 1".into()));
    }
    if n > crate::lattice::MAX_UNIVERSE {
        return Err(Error::UniverseTooLarge(n));
    }
    if k == 0 {
        return Err(Error::Precondition(
            "every family contains 0 incomparable sets; k >= 1 required".into(),
        ));
    }
    if k == 1 {
        return Ok(SatProfile {
            k,
            n,
            ell: 0,
            c: vec![0],
            value: 0,
            status: SatStatus::Exact,
        });
    }
    let seq = c_sequence(k)?;
    let (ell, c) = (seq.ell, seq.c);
    let half = ell / 2;
    let nicecase = binomial(ell as u64, half as u64)? == k - 1;
    if n < ell || (nicecase && n == ell) {
        return Ok(SatProfile {
            k,
            n,
            ell,
            c,
            value: 1u64 << n,
            status: SatStatus::FullPowerset,
        });
    }
    let sum_c: i128 = c.iter().map(|&v| v as i128).sum();
    let span = n as i128 - 1 - 2 * half as i128;
    let value = 2 * sum_c + (k as i128 - 1) * span;
    let value = u64::try_from(value)
        .map_err(|_| Error::Overflow("saturation value exceeds 64 bits"))?;
    let status = if n > 2 * ell {
        SatStatus::Exact
    } else if nicecase {
        SatStatus::ExactNicecase
    } else {
        SatStatus::LowerBound
    };
    Ok(SatProfile {
        k,
        n,
        ell,
        c,
        value,
        status,
    })
}

/// Why a family fails to be saturated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Culprit {
    /// A missing set whose addition keeps the family k-antichain free.
    Addable(ElementSet),
    /// An antichain of size at least `k` inside the family.
    WideAntichain(Family),
}

/// One row of the per-layer quota comparison: counts at layer `t` and its
/// mirror layer `n - t` against the quota `c_t` (with `c_t = k - 1` past
/// `floor(ell/2)`). Meaningful for proper saturated families with
/// `n >= ell`; populated regardless, as a diagnostic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerQuota {
    pub layer: u32,
    pub quota: u64,
    pub lower_count: u64,
    pub upper_count: u64,
    pub satisfied: bool,
}

/// The verdict of a saturation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationReport {
    pub is_saturated: bool,
    /// Largest antichain inside the family.
    pub width: usize,
    /// Present exactly when not saturated.
    pub culprit: Option<Culprit>,
    /// Member count per cardinality, indexed `0..=n`.
    pub layer_profile: Vec<u64>,
    /// Quota comparison for layers `0..=floor(n/2)`.
    pub c_check: Vec<LayerQuota>,
}

/// Inclusion comparabilities of a family plus a maximum matching on the
/// split digraph, kept warm so single-set additions probe in linear time.
struct ComparabilityIndex {
    sets: Vec<ElementSet>,
    word_index: HashMap<u64, usize>,
    /// For each set, the indices of its proper supersets.
    up: Vec<Vec<usize>>,
    /// For each set, the indices of its proper subsets.
    down: Vec<Vec<usize>>,
    match_l: Vec<Option<usize>>,
    match_r: Vec<Option<usize>>,
    matching_size: usize,
}

impl ComparabilityIndex {
    fn build(f: &Family) -> Result<Self> {
        if f.len() > COMPARABILITY_BUDGET {
            return Err(Error::Capacity(format!(
                "comparability graph on {} sets exceeds the budget of {COMPARABILITY_BUDGET}",
                f.len()
            )));
        }
        let sets: Vec<ElementSet> = f.members().to_vec();
        let word_index = sets.iter().enumerate().map(|(i, s)| (s.word(), i)).collect();
        let mut up = vec![Vec::new(); sets.len()];
        let mut down = vec![Vec::new(); sets.len()];
        for (i, x) in sets.iter().enumerate() {
            for (j, y) in sets.iter().enumerate().skip(i + 1) {
                // Canonical order sorts by cardinality, so only x < y can
                // ever be a proper subset relation here.
                if x.is_proper_subset_of(y) {
                    up[i].push(j);
                    down[j].push(i);
                }
            }
        }
        let mut index = Self {
            sets,
            word_index,
            up,
            down,
            match_l: Vec::new(),
            match_r: Vec::new(),
            matching_size: 0,
        };
        index.match_l = vec![None; index.sets.len()];
        index.match_r = vec![None; index.sets.len()];
        index.matching_size =
            augment_to_maximum(&index.up, &mut index.match_l, &mut index.match_r);
        Ok(index)
    }

    fn width(&self) -> usize {
        self.sets.len() - self.matching_size
    }

    fn contains(&self, word: u64) -> bool {
        self.word_index.contains_key(&word)
    }

    /// Supersets and subsets of a set not in the family.
    fn relations_of(&self, word: u64) -> (Vec<usize>, Vec<usize>) {
        let mut ups = Vec::new();
        let mut downs = Vec::new();
        for (j, y) in self.sets.iter().enumerate() {
            let yw = y.word();
            if word & !yw == 0 && word != yw {
                ups.push(j);
            } else if yw & !word == 0 && word != yw {
                downs.push(j);
            }
        }
        (ups, downs)
    }

    /// Whether adding the set with the given relations raises the maximum
    /// matching of the split digraph. The kept matching must be maximum;
    /// then the answer is exact because any augmenting path in the grown
    /// graph starts at the new left copy or ends at the new right copy.
    fn addition_raises_matching(&self, ups: &[usize], downs: &[usize]) -> bool {
        let count = self.sets.len();
        let mut down_mask = vec![false; count];
        for &u in downs {
            down_mask[u] = true;
        }

        // Forward: alternating search from the new left copy; the new
        // right copy and every unmatched right are free endpoints.
        let mut visited_l = vec![false; count];
        let mut visited_r = vec![false; count];
        let mut stack: Vec<usize> = Vec::new();
        for &v in ups {
            if self.match_r[v].is_none() {
                return true;
            }
            if !visited_r[v] {
                visited_r[v] = true;
                stack.push(self.match_r[v].expect("matched"));
            }
        }
        while let Some(u) = stack.pop() {
            if visited_l[u] {
                continue;
            }
            visited_l[u] = true;
            if down_mask[u] {
                // Edge to the new right copy, which is free.
                return true;
            }
            for &v in &self.up[u] {
                if visited_r[v] {
                    continue;
                }
                visited_r[v] = true;
                match self.match_r[v] {
                    None => return true,
                    Some(w) => stack.push(w),
                }
            }
        }

        // Backward: alternating search from the new right copy toward a
        // free left copy.
        let mut visited_l = vec![false; count];
        let mut stack: Vec<usize> = downs.to_vec();
        while let Some(u) = stack.pop() {
            if visited_l[u] {
                continue;
            }
            visited_l[u] = true;
            match self.match_l[u] {
                None => return true,
                Some(v) => {
                    for &w in &self.down[v] {
                        if !visited_l[w] {
                            stack.push(w);
                        }
                    }
                }
            }
        }
        false
    }

    /// Appends the set (which must not be present) and restores matching
    /// maximality.
    fn commit(&mut self, set: ElementSet) {
        let (ups, downs) = self.relations_of(set.word());
        let id = self.sets.len();
        for &u in &downs {
            self.up[u].push(id);
        }
        for &v in &ups {
            self.down[v].push(id);
        }
        self.up.push(ups);
        self.down.push(downs);
        self.word_index.insert(set.word(), id);
        self.sets.push(set);
        self.match_l.push(None);
        self.match_r.push(None);
        self.matching_size =
            augment_to_maximum(&self.up, &mut self.match_l, &mut self.match_r);
    }
}

fn quota_rows(f: &Family, k: u64, profile: &[u64]) -> Result<Vec<LayerQuota>> {
    if k < 2 {
        return Ok(Vec::new());
    }
    let n = f.universe();
    let seq = c_sequence(k)?;
    let half = (seq.ell / 2) as usize;
    let mut rows = Vec::with_capacity(n as usize / 2 + 1);
    for t in 0..=n / 2 {
        let quota = seq.c[(t as usize).min(half)];
        let lower_count = profile[t as usize];
        let upper_count = profile[(n - t) as usize];
        rows.push(LayerQuota {
            layer: t,
            quota,
            lower_count,
            upper_count,
            satisfied: lower_count >= quota && upper_count >= quota,
        });
    }
    Ok(rows)
}

/// First set absent from the family in canonical order.
fn first_missing(f: &Family) -> Result<Option<ElementSet>> {
    let n = f.universe();
    for t in 0..=n {
        let layer_count = binomial(n as u64, t as u64)?;
        let mut word = if t == 0 { 0 } else { (1u64 << t) - 1 };
        let mut in_layer = f.iter().filter(|s| s.cardinality() == t);
        for _ in 0..layer_count {
            match in_layer.next() {
                Some(s) if s.word() == word => {}
                Some(s) => {
                    debug_assert!(s.word() > word);
                    return Ok(Some(ElementSet::from_word(n, word)?));
                }
                None => return Ok(Some(ElementSet::from_word(n, word)?)),
            }
            word = next_same_cardinality(word);
        }
    }
    Ok(None)
}

/// Checks k-antichain saturation, choosing the parallel scan when the
/// crate is built with the `parallel` feature.
pub fn is_k_antichain_saturated(f: &Family, k: u64) -> Result<SaturationReport> {
    is_k_antichain_saturated_with(f, k, cfg!(feature = "parallel"))
}

/// Checks k-antichain saturation with an explicit scan mode.
///
/// The width comes from the split-graph matching. When it already reaches
/// `k` the report carries a maximum antichain. Otherwise every set absent
/// from the family is probed in canonical order, skipping layers that
/// already hold `k - 1` members (any addition there completes a
/// k-antichain), and the first addable set is reported.
pub fn is_k_antichain_saturated_with(f: &Family, k: u64, parallel: bool) -> Result<SaturationReport> {
    if k == 0 {
        return Err(Error::Precondition(
            "every family contains 0 incomparable sets; k >= 1 required".into(),
        ));
    }
    let n = f.universe();
    let layer_profile = f.layer_counts();
    let c_check = quota_rows(f, k, &layer_profile)?;
    let report = |width: usize, culprit: Option<Culprit>| SaturationReport {
        is_saturated: culprit.is_none(),
        width,
        culprit,
        layer_profile: layer_profile.clone(),
        c_check: c_check.clone(),
    };

    if f.is_empty() {
        let culprit = if k == 1 {
            // Any addition creates a 1-antichain, so nothing is addable.
            None
        } else {
            Some(Culprit::Addable(ElementSet::empty(n)?))
        };
        return Ok(report(0, culprit));
    }

    let index = ComparabilityIndex::build(f)?;
    let width = index.width();
    if width as u64 >= k {
        let (_, antichain, _) = dilworth(f)?;
        return Ok(report(width, Some(Culprit::WideAntichain(antichain))));
    }
    if f.len() as u128 == 1u128 << n {
        return Ok(report(width, None));
    }
    if (width as u64) < k - 1 {
        // Adding one set grows the width by at most one, so everything
        // missing is addable.
        let missing = first_missing(f)?.expect("proper subfamily has a missing set");
        return Ok(report(width, Some(Culprit::Addable(missing))));
    }

    // Width is exactly k - 1: a missing set is addable exactly when its
    // arrival raises the matching, keeping the width at k - 1.
    let mut scanned: u64 = 0;
    for t in 0..=n {
        if layer_profile[t as usize] >= k - 1 {
            continue;
        }
        let layer_count = binomial(n as u64, t as u64)?;
        scanned += layer_count;
        if scanned > CANDIDATE_BUDGET {
            return Err(Error::Capacity(format!(
                "saturation scan over layer {t} of [{n}] exceeds the candidate budget"
            )));
        }
        let mut candidates = Vec::with_capacity((layer_count - layer_profile[t as usize]) as usize);
        let mut word = if t == 0 { 0 } else { (1u64 << t) - 1 };
        for _ in 0..layer_count {
            if !index.contains(word) {
                candidates.push(word);
            }
            word = next_same_cardinality(word);
        }
        let probe = |w: u64| {
            let (ups, downs) = index.relations_of(w);
            index.addition_raises_matching(&ups, &downs)
        };
        #[cfg(feature = "parallel")]
        let hit = if parallel {
            candidates.par_iter().find_first(|&&w| probe(w)).copied()
        } else {
            candidates.iter().find(|&&w| probe(w)).copied()
        };
        #[cfg(not(feature = "parallel"))]
        let hit = {
            let _ = parallel;
            candidates.iter().find(|&&w| probe(w)).copied()
        };
        if let Some(w) = hit {
            let culprit = Culprit::Addable(ElementSet::from_word(n, w)?);
            return Ok(report(width, Some(culprit)));
        }
    }
    Ok(report(width, None))
}

/// The order in which greedy saturation tries missing sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AddOrder {
    /// Ascending cardinality, colex within a layer.
    Canonical,
    /// A reproducible random permutation.
    Shuffled { seed: u64 },
}

/// Adds missing sets in the given order, each one only if the family
/// stays k-antichain free, until nothing more fits. The input must be
/// k-antichain free; a single pass is exhaustive because sets rejected
/// once can never become addable again.
pub fn greedy_saturate(f: &Family, k: u64, order: AddOrder) -> Result<Family> {
    if k == 0 {
        return Err(Error::Precondition(
            "every family contains 0 incomparable sets; k >= 1 required".into(),
        ));
    }
    let n = f.universe();
    if 1u64 << n > CANDIDATE_BUDGET {
        return Err(Error::Capacity(format!(
            "greedy saturation enumerates 2^{n} candidate sets"
        )));
    }
    let mut index = ComparabilityIndex::build(f)?;
    if index.width() as u64 >= k {
        return Err(Error::Precondition(format!(
            "family already contains an antichain of size {}",
            index.width()
        )));
    }
    let mut candidates: Vec<u64> = (0..1u64 << n).filter(|&w| !index.contains(w)).collect();
    match order {
        AddOrder::Canonical => candidates.sort_by_key(|&w| (w.count_ones(), w)),
        AddOrder::Shuffled { seed } => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            candidates.shuffle(&mut rng);
        }
    }
    let mut layer_counts = f.layer_counts();
    for w in candidates {
        let t = w.count_ones() as usize;
        if layer_counts[t] >= k - 1 {
            // A full quota of pairwise-incomparable sets already sits on
            // this layer; adding here completes a k-antichain.
            continue;
        }
        let addable = if (index.width() as u64) < k - 1 {
            true
        } else {
            let (ups, downs) = index.relations_of(w);
            index.addition_raises_matching(&ups, &downs)
        };
        if addable {
            index.commit(ElementSet::from_word(n, w)?);
            layer_counts[t] += 1;
        }
    }
    Family::from_sets(n, index.sets)
}

/// Exhaustive minimum saturation search for tiny universes: families are
/// enumerated by ascending size, so the first saturated one is minimum.
pub fn oracle_min_sat(n: u32, k: u64) -> Result<(u64, Family)> {
    if n > 4 {
        return Err(Error::Capacity(format!(
            "oracle enumerates 2^(2^{n}) families; n <= 4 required"
        )));
    }
    if k == 0 {
        return Err(Error::Precondition(
            "every family contains 0 incomparable sets; k >= 1 required".into(),
        ));
    }
    if k == 1 {
        return Ok((0, Family::new(n)?));
    }
    let universe_size = 1u32 << n;
    let full_mask: u64 = if universe_size == 64 {
        u64::MAX
    } else {
        (1u64 << universe_size) - 1
    };
    let width_at_most = |family: &Family, bound: u64| -> Result<bool> {
        if family.is_empty() {
            return Ok(bound >= 1 || true);
        }
        let (width, _, _) = dilworth(family)?;
        Ok(width as u64 <= bound)
    };
    for size in 0..=universe_size {
        let mut mask: u64 = if size == 0 { 0 } else { (1u64 << size) - 1 };
        let count = binomial(universe_size as u64, size as u64)?;
        for _ in 0..count {
            // A saturated family must contain both the empty set and the
            // full set: each is comparable to everything, so it can
            // always be added without creating an antichain.
            let has_extremes = mask & 1 == 1 && mask >> (universe_size - 1) & 1 == 1;
            if mask == 0 || has_extremes {
                let members = (0..universe_size)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| ElementSet::from_word(n, i as u64))
                    .collect::<Result<Vec<_>>>()?;
                let family = Family::from_sets(n, members)?;
                if width_at_most(&family, k - 1)? && saturated_by_definition(&family, k)? {
                    return Ok((size as u64, family));
                }
            }
            if mask == full_mask || size == 0 {
                break;
            }
            mask = next_same_cardinality(mask);
        }
    }
    unreachable!("greedy completion guarantees a saturated family exists");
}

/// Literal definition check: no missing set can be added while keeping
/// the width below k.
fn saturated_by_definition(family: &Family, k: u64) -> Result<bool> {
    let n = family.universe();
    for w in 0..1u64 << n {
        let x = ElementSet::from_word(n, w)?;
        if family.contains(&x) {
            continue;
        }
        let grown = family.with_set(x)?;
        let (width, _, _) = dilworth(&grown)?;
        if (width as u64) < k {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds a minimum k-antichain saturated family in `2^[n]` along with a
/// witness partition into `k - 1` skipless chains.
///
/// Supported exactly where the value is known exact: `n >= 2*ell + 1` in
/// general, or `n >= ell + 1` when `k - 1 = C(ell, floor(ell/2))`. The
/// result is re-verified; a verification failure is reported as an error,
/// never repaired.
pub fn construct_saturated(n: u32, k: u64) -> Result<(Family, ChainCover)> {
    if k < 2 {
        return Err(Error::Precondition(
            "construction needs k >= 2; k = 1 saturates the empty family".into(),
        ));
    }
    let profile = sat_value(n, k)?;
    if !matches!(profile.status, SatStatus::Exact | SatStatus::ExactNicecase) {
        return Err(Error::Precondition(format!(
            "no known minimum construction for n={n}, k={k} (needs n >= 2*ell+1 = {}, or n >= ell+1 = {} in the half-full case)",
            2 * profile.ell + 1,
            profile.ell + 1
        )));
    }
    let ell = profile.ell;
    let nicecase = binomial(ell as u64, (ell / 2) as u64)? == k - 1;
    let cover = if nicecase {
        nicecase_cover(n, ell)?
    } else {
        general_cover(n, ell, k)?
    };
    let family = cover.union_family()?;

    if family.len() as u64 != profile.value {
        return Err(Error::ConstructionInvariant(format!(
            "construction for n={n}, k={k} has {} sets, expected {}",
            family.len(),
            profile.value
        )));
    }
    if cover.len() as u64 != k - 1 {
        return Err(Error::ConstructionInvariant(format!(
            "witness has {} chains, expected {}",
            cover.len(),
            k - 1
        )));
    }
    if let Some(broken) = cover.chains().iter().find(|c| !c.is_skipless()) {
        return Err(Error::ConstructionInvariant(format!(
            "witness chain starting at {} skips a layer",
            broken.bottom()
        )));
    }
    let report = is_k_antichain_saturated(&family, k)?;
    if !report.is_saturated {
        return Err(Error::ConstructionInvariant(format!(
            "construction for n={n}, k={k} fails verification: width {}, culprit {:?}",
            report.width, report.culprit
        )));
    }
    Ok((family, cover))
}

/// The half-full construction: `k - 1 = C(ell, h)` with `h = floor(ell/2)`.
///
/// Each symmetric chain of `2^[ell]` through the layer-h set `X` becomes
/// one witness chain: its lower half up to `X`, then `M(X)` (the chain's
/// next set when `ell` is odd, `X` itself when even), then `M(X)` with
/// the tail `[ell+1, j]` attached one element at a time, and finally the
/// complements of the lower half of the chain through `[ell] \ M(X)`,
/// descending. The map `X -> [ell] \ M(X)` permutes layer `h`, so the
/// chains partition the family.
fn nicecase_cover(n: u32, ell: u32) -> Result<ChainCover> {
    let h = ell / 2;
    let odd = ell % 2 == 1;
    let scd = symmetric_chain_decomposition(ell)?;
    // Every symmetric chain passes through layer h; find each chain from
    // its layer-h member.
    let mut chain_at_h: HashMap<u64, usize> = HashMap::new();
    for (i, chain) in scd.chains().iter().enumerate() {
        let bottom = chain.bottom().cardinality();
        chain_at_h.insert(chain.sets()[(h - bottom) as usize].word(), i);
    }
    let full_n = ElementSet::full(n)?.word();
    let mut chains = Vec::with_capacity(scd.len());
    for chain in scd.chains() {
        let bottom = chain.bottom().cardinality();
        let x_pos = (h - bottom) as usize;
        let mut words: Vec<u64> = chain.sets()[..=x_pos].iter().map(|s| s.word()).collect();
        let m_word = if odd {
            let m = chain.sets()[x_pos + 1].word();
            words.push(m);
            m
        } else {
            chain.sets()[x_pos].word()
        };
        for j in ell + 1..=n {
            let tail = ((1u64 << (j - ell)) - 1) << ell;
            words.push(m_word | tail);
        }
        let y_word = !m_word & ((1u64 << ell) - 1);
        let y_chain = &scd.chains()[chain_at_h[&y_word]];
        let y_pos = (h - y_chain.bottom().cardinality()) as usize;
        for s in y_chain.sets()[..y_pos].iter().rev() {
            words.push(full_n & !s.word());
        }
        chains.push(Chain::new(
            words
                .into_iter()
                .map(|w| ElementSet::from_word(n, w))
                .collect::<Result<Vec<_>>>()?,
        )?);
    }
    ChainCover::new(n, chains)
}

/// The general construction for `n >= 2*ell + 1`: split `k - 1` into the
/// `floor(ell/2)`-expansion, cover each block by truncated symmetric
/// chains tagged with marker elements, append the mirror image of every
/// chain, and let the skipless cover fill the middle layers with the
/// fewest extra sets.
fn general_cover(n: u32, ell: u32, k: u64) -> Result<ChainCover> {
    let h = ell / 2;
    let expansion = r_expansion(k - 1, h)?;
    let mut raw_chains: Vec<Vec<u64>> = Vec::new();
    let mut markers: u64 = 0;
    for &(a, r) in expansion.terms() {
        let scd = symmetric_chain_decomposition(a as u32)?;
        let mut block_chains = 0u64;
        for chain in scd.chains() {
            let bottom = chain.bottom().cardinality();
            if bottom > r {
                continue;
            }
            let top = chain.top().cardinality();
            let last = (top.min(r) - bottom) as usize;
            raw_chains.push(
                chain.sets()[..=last]
                    .iter()
                    .map(|s| s.word() | markers)
                    .collect(),
            );
            block_chains += 1;
        }
        debug_assert_eq!(block_chains, binomial(a, r as u64)?);
        markers |= 1 << a;
    }
    debug_assert_eq!(raw_chains.len() as u64, k - 1);

    let mut chains = Vec::with_capacity(raw_chains.len());
    for words in raw_chains {
        let mut sets: Vec<ElementSet> = words
            .iter()
            .map(|&w| ElementSet::from_word(n, w))
            .collect::<Result<Vec<_>>>()?;
        // Every set here lives in [ell] with at most floor(ell/2)
        // elements, so with n >= 2*ell+1 it sits inside its own mirror
        // and the mirrored tail extends the chain upward.
        for s in words.iter().rev() {
            sets.push(ElementSet::from_word(n, *s)?.mirror());
        }
        chains.push(Chain::new(sets)?);
    }
    skipless_cover(&ChainCover::new(n, chains)?)
}
