//! Subsets of `[n]` and families thereof.
//!
//! A set lives in a universe `[n] = {1, .., n}` with `n <= 63`, so one
//! machine word holds any set and subset tests are single instructions.
//! Families keep their members in the canonical order: ascending by
//! cardinality, ties broken by colex. All outputs of this crate are
//! byte-reproducible because every collection is kept canonical.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;
use crate::Result;

/// Largest supported universe size: one `u64` word per set.
pub const MAX_UNIVERSE: u32 = 63;

/// Guard for operations that materialize many sets at once.
pub(crate) const ENUMERATION_BUDGET: u64 = 1 << 24;

/// A subset of `[n]`, stored as a bit word: bit `i - 1` is set exactly
/// when element `i` is in the set.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ElementSet {
    word: u64,
    universe: u32,
}

impl ElementSet {
    /// The empty set over `[n]`.
    pub fn empty(universe: u32) -> Result<Self> {
        if universe > MAX_UNIVERSE {
            return Err(Error::UniverseTooLarge(universe));
        }
        Ok(Self { word: 0, universe })
    }

    /// The full set `[n]`.
    pub fn full(universe: u32) -> Result<Self> {
        let mut s = Self::empty(universe)?;
        s.word = mask(universe);
        Ok(s)
    }

    /// Builds a set from a bit word, rejecting bits outside the universe.
    pub fn from_word(universe: u32, word: u64) -> Result<Self> {
        if universe > MAX_UNIVERSE {
            return Err(Error::UniverseTooLarge(universe));
        }
        if word & !mask(universe) != 0 {
            let element = 64 - word.leading_zeros();
            return Err(Error::ElementOutOfRange { element, universe });
        }
        Ok(Self { word, universe })
    }

    /// Builds a set from 1-based elements.
    pub fn from_elements(universe: u32, elements: &[u32]) -> Result<Self> {
        let mut s = Self::empty(universe)?;
        for &e in elements {
            if e < 1 || e > universe {
                return Err(Error::ElementOutOfRange {
                    element: e,
                    universe,
                });
            }
            s.word |= 1 << (e - 1);
        }
        Ok(s)
    }

    /// The underlying bit word.
    pub fn word(&self) -> u64 {
        self.word
    }

    /// The universe size `n`.
    pub fn universe(&self) -> u32 {
        self.universe
    }

    /// Number of elements.
    pub fn cardinality(&self) -> u32 {
        self.word.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.word == 0
    }

    /// Membership test for a 1-based element.
    pub fn contains(&self, element: u32) -> bool {
        element >= 1 && element <= self.universe && self.word >> (element - 1) & 1 == 1
    }

    /// This set plus one element.
    pub fn with(&self, element: u32) -> Result<Self> {
        if element < 1 || element > self.universe {
            return Err(Error::ElementOutOfRange {
                element,
                universe: self.universe,
            });
        }
        Ok(Self {
            word: self.word | 1 << (element - 1),
            universe: self.universe,
        })
    }

    /// This set minus one element.
    pub fn without(&self, element: u32) -> Result<Self> {
        if element < 1 || element > self.universe {
            return Err(Error::ElementOutOfRange {
                element,
                universe: self.universe,
            });
        }
        Ok(Self {
            word: self.word & !(1 << (element - 1)),
            universe: self.universe,
        })
    }

    /// Iterates over the elements in ascending order (1-based).
    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        let mut word = self.word;
        std::iter::from_fn(move || {
            if word == 0 {
                None
            } else {
                let e = word.trailing_zeros() + 1;
                word &= word - 1;
                Some(e)
            }
        })
    }

    /// `self ⊆ other`. Panics if the universes differ.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        assert_eq!(self.universe, other.universe, "universe mismatch");
        self.word & !other.word == 0
    }

    /// `self ⊊ other`. Panics if the universes differ.
    pub fn is_proper_subset_of(&self, other: &Self) -> bool {
        self.is_subset_of(other) && self.word != other.word
    }

    /// Set union. Panics if the universes differ.
    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.universe, other.universe, "universe mismatch");
        Self {
            word: self.word | other.word,
            universe: self.universe,
        }
    }

    /// `[n] \ self`.
    pub fn complement(&self) -> Self {
        Self {
            word: !self.word & mask(self.universe),
            universe: self.universe,
        }
    }

    /// The mirror map `A -> {i in [n] : n + 1 - i not in A}`.
    ///
    /// This is an order-reversing involution sending cardinality `c` to
    /// `n - c`. It reflects the complement: element `i` survives exactly
    /// when the reflected position `n + 1 - i` is absent from `A`.
    pub fn mirror(&self) -> Self {
        let n = self.universe;
        if n == 0 {
            return *self;
        }
        let reflected = self.word.reverse_bits() >> (64 - n);
        Self {
            word: !reflected & mask(n),
            universe: n,
        }
    }

    /// Reinterprets the set inside a larger universe.
    pub fn embed(&self, universe: u32) -> Result<Self> {
        if universe < self.universe {
            return Err(Error::UniverseMismatch(self.universe, universe));
        }
        Self::from_word(universe, self.word)
    }

    /// Canonical order: ascending cardinality, then colex.
    fn canonical_key(&self) -> (u32, u64) {
        (self.cardinality(), self.word)
    }
}

/// Colex comparison: `A < B` iff the largest element of the symmetric
/// difference lies in `B`. On equal-cardinality sets this is the usual
/// colexicographic order; on a single word it coincides with numeric
/// order of the words.
pub fn colex_compare(a: &ElementSet, b: &ElementSet) -> Result<Ordering> {
    if a.universe() != b.universe() {
        return Err(Error::UniverseMismatch(a.universe(), b.universe()));
    }
    Ok(a.word().cmp(&b.word()))
}

impl Ord for ElementSet {
    /// Canonical total order: ascending cardinality, ties by colex.
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_key().cmp(&other.canonical_key())
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ElementSet {
    /// Comma-separated elements; `-` for the empty set.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "-");
        }
        let mut first = true;
        for e in self.elements() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}/{}", self, self.universe)
    }
}

fn mask(n: u32) -> u64 {
    if n == 0 {
        0
    } else {
        u64::MAX >> (64 - n)
    }
}

/// A deduplicated collection of sets over one universe, kept in the
/// canonical (cardinality, colex) order. The empty family is valid at any
/// universe size.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Family {
    universe: u32,
    members: Vec<ElementSet>,
}

impl Family {
    /// The empty family over `[n]`.
    pub fn new(universe: u32) -> Result<Self> {
        if universe > MAX_UNIVERSE {
            return Err(Error::UniverseTooLarge(universe));
        }
        Ok(Self {
            universe,
            members: Vec::new(),
        })
    }

    /// Builds a family from arbitrary sets: validates the shared universe,
    /// sorts canonically and removes duplicates.
    pub fn from_sets(universe: u32, sets: impl IntoIterator<Item = ElementSet>) -> Result<Self> {
        let mut f = Self::new(universe)?;
        let mut members: Vec<ElementSet> = Vec::new();
        for s in sets {
            if s.universe() != universe {
                return Err(Error::UniverseMismatch(universe, s.universe()));
            }
            members.push(s);
        }
        members.sort();
        members.dedup();
        f.members = members;
        Ok(f)
    }

    /// All `2^n` subsets of `[n]`.
    pub fn full_powerset(universe: u32) -> Result<Self> {
        if universe > MAX_UNIVERSE {
            return Err(Error::UniverseTooLarge(universe));
        }
        if 1u64 << universe > ENUMERATION_BUDGET {
            return Err(Error::Capacity(format!(
                "power set of [{universe}] has 2^{universe} sets"
            )));
        }
        let mut members: Vec<ElementSet> = (0..1u64 << universe)
            .map(|word| ElementSet { word, universe })
            .collect();
        members.sort();
        Ok(Self { universe, members })
    }

    /// All `C(n, t)` subsets of `[n]` with cardinality `t`, in colex order.
    pub fn full_layer(universe: u32, t: u32) -> Result<Self> {
        if universe > MAX_UNIVERSE {
            return Err(Error::UniverseTooLarge(universe));
        }
        if t > universe {
            return Err(Error::LayerOutOfRange {
                layer: t,
                universe,
            });
        }
        let count = crate::colex::binomial(universe as u64, t as u64)?;
        if count > ENUMERATION_BUDGET {
            return Err(Error::Capacity(format!(
                "layer {t} of [{universe}] has {count} sets"
            )));
        }
        let mut members = Vec::with_capacity(count as usize);
        let mut word = if t == 0 { 0 } else { (1u64 << t) - 1 };
        for _ in 0..count {
            members.push(ElementSet {
                word,
                universe,
            });
            word = next_same_cardinality(word);
        }
        Ok(Self { universe, members })
    }

    pub fn universe(&self) -> u32 {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in canonical order.
    pub fn members(&self) -> &[ElementSet] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ElementSet> {
        self.members.iter()
    }

    /// Membership test (binary search over the canonical order).
    pub fn contains(&self, set: &ElementSet) -> bool {
        set.universe() == self.universe && self.members.binary_search(set).is_ok()
    }

    /// The members of cardinality `t`, order preserved.
    pub fn layer(&self, t: u32) -> Result<Family> {
        if t > self.universe {
            return Err(Error::LayerOutOfRange {
                layer: t,
                universe: self.universe,
            });
        }
        Ok(Self {
            universe: self.universe,
            members: self
                .members
                .iter()
                .copied()
                .filter(|s| s.cardinality() == t)
                .collect(),
        })
    }

    /// Member count per cardinality, indexed `0..=n`.
    pub fn layer_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.universe as usize + 1];
        for s in &self.members {
            counts[s.cardinality() as usize] += 1;
        }
        counts
    }

    /// This family plus one set.
    pub fn with_set(&self, set: ElementSet) -> Result<Family> {
        if set.universe() != self.universe {
            return Err(Error::UniverseMismatch(self.universe, set.universe()));
        }
        let mut members = self.members.clone();
        if let Err(pos) = members.binary_search(&set) {
            members.insert(pos, set);
        }
        Ok(Self {
            universe: self.universe,
            members,
        })
    }

    /// Union with another family over the same universe.
    pub fn union(&self, other: &Family) -> Result<Family> {
        if other.universe() != self.universe {
            return Err(Error::UniverseMismatch(self.universe, other.universe()));
        }
        Self::from_sets(
            self.universe,
            self.members.iter().chain(other.members.iter()).copied(),
        )
    }

    /// Reinterprets every member inside a larger universe.
    pub fn embed(&self, universe: u32) -> Result<Family> {
        let members = self
            .members
            .iter()
            .map(|s| s.embed(universe))
            .collect::<Result<Vec<_>>>()?;
        Self::from_sets(universe, members)
    }
}

impl<'a> IntoIterator for &'a Family {
    type Item = &'a ElementSet;
    type IntoIter = std::slice::Iter<'a, ElementSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// The shadow: all sets obtained by deleting one element from a member.
///
/// Requires a single-layer family of cardinality `t >= 1`; the result is
/// the deduplicated layer `t - 1` reachable from the input.
pub fn shadow(a: &Family) -> Result<Family> {
    let Some(first) = a.members().first() else {
        return Family::new(a.universe());
    };
    let t = first.cardinality();
    if a.iter().any(|s| s.cardinality() != t) {
        return Err(Error::MixedLayers);
    }
    if t == 0 {
        return Err(Error::Precondition(
            "shadow of the empty set is undefined".into(),
        ));
    }
    let mut sets = Vec::with_capacity(a.len() * t as usize);
    for s in a {
        for e in s.elements() {
            sets.push(s.without(e)?);
        }
    }
    Family::from_sets(a.universe(), sets)
}

/// Gosper's hack: the next larger word with the same number of set bits.
pub(crate) fn next_same_cardinality(word: u64) -> u64 {
    if word == 0 {
        return 0;
    }
    let c = word & word.wrapping_neg();
    let r = word + c;
    (((r ^ word) >> 2) / c) | r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(universe: u32, elements: &[u32]) -> ElementSet {
        ElementSet::from_elements(universe, elements).unwrap()
    }

    #[test]
    fn layer_of_full_powerset() {
        let f = Family::full_powerset(2).unwrap();
        let l1 = f.layer(1).unwrap();
        assert_eq!(l1.members(), &[set(2, &[1]), set(2, &[2])]);
        // No sets of the requested size: empty family, not an error.
        let f = Family::from_sets(4, [set(4, &[1]), set(4, &[1, 2])]).unwrap();
        assert!(f.layer(3).unwrap().is_empty());
        assert!(f.layer(5).is_err());
    }

    #[test]
    fn shadow_small_cases() {
        let a = Family::from_sets(3, [set(3, &[1, 2]), set(3, &[1, 3])]).unwrap();
        let expected = Family::from_sets(3, [set(3, &[1]), set(3, &[2]), set(3, &[3])]).unwrap();
        assert_eq!(shadow(&a).unwrap(), expected);

        let single = Family::from_sets(2, [set(2, &[1])]).unwrap();
        assert_eq!(shadow(&single).unwrap().members(), &[set(2, &[])]);

        let mixed = Family::from_sets(3, [set(3, &[1]), set(3, &[1, 2])]).unwrap();
        assert!(matches!(shadow(&mixed), Err(Error::MixedLayers)));

        let zero = Family::from_sets(3, [set(3, &[])]).unwrap();
        assert!(matches!(shadow(&zero), Err(Error::Precondition(_))));
    }

    #[test]
    fn shadow_of_full_layer_is_full_layer_below() {
        for n in 1..=12 {
            for t in 1..=n {
                let layer = Family::full_layer(n, t).unwrap();
                assert_eq!(
                    shadow(&layer).unwrap(),
                    Family::full_layer(n, t - 1).unwrap(),
                    "n={n} t={t}"
                );
            }
        }
    }

    #[test]
    fn colex_compare_examples() {
        let a = set(5, &[1, 2, 4]);
        let b = set(5, &[1, 3, 4]);
        assert_eq!(colex_compare(&a, &b).unwrap(), Ordering::Less);
        assert_eq!(colex_compare(&a, &a).unwrap(), Ordering::Equal);
        let c = set(5, &[2, 3, 4]);
        let d = set(5, &[1, 2, 5]);
        assert_eq!(colex_compare(&c, &d).unwrap(), Ordering::Less);
        let other = set(6, &[1]);
        assert!(colex_compare(&a, &other).is_err());
    }

    #[test]
    fn colex_sorts_each_layer_totally() {
        for n in 1..=8 {
            for t in 0..=n {
                let layer = Family::full_layer(n, t).unwrap();
                let mut words: Vec<u64> = layer.iter().map(|s| s.word()).collect();
                let sorted = words.clone();
                words.sort();
                // full_layer already emits colex order, which is word order.
                assert_eq!(words, sorted);
                words.dedup();
                assert_eq!(words.len(), layer.len());
            }
        }
    }

    #[test]
    fn mirror_examples() {
        assert_eq!(set(4, &[]).mirror(), set(4, &[1, 2, 3, 4]));
        assert_eq!(set(5, &[1]).mirror(), set(5, &[1, 2, 3, 4]));
        let a = set(6, &[2, 5]);
        assert_eq!(a.mirror().mirror(), a);
    }

    #[test]
    fn small_sets_sit_inside_their_mirror() {
        // For A ⊆ [ℓ] and n ≥ 2ℓ+1, A ⊆ mirror(A): exhaustive for ℓ ≤ 5.
        for ell in 0u32..=5 {
            let n = 2 * ell + 1;
            for word in 0..1u64 << ell {
                let a = ElementSet::from_word(n, word).unwrap();
                assert!(a.is_subset_of(&a.mirror()), "A={a} n={n}");
            }
        }
    }

    #[test]
    fn canonical_family_order() {
        let f = Family::from_sets(
            3,
            [
                set(3, &[1, 2, 3]),
                set(3, &[3]),
                set(3, &[1, 2]),
                set(3, &[]),
                set(3, &[3]),
            ],
        )
        .unwrap();
        let words: Vec<u64> = f.iter().map(|s| s.word()).collect();
        assert_eq!(words, vec![0b000, 0b100, 0b011, 0b111]);
    }

    #[test]
    fn element_set_display_round_trip() {
        assert_eq!(set(5, &[1, 3, 5]).to_string(), "1,3,5");
        assert_eq!(set(5, &[]).to_string(), "-");
    }

    proptest! {
        #[test]
        fn mirror_reverses_inclusion(a_word in 0u64..4096, b_word in 0u64..4096) {
            let n = 12;
            let a = ElementSet::from_word(n, a_word & b_word).unwrap();
            let b = ElementSet::from_word(n, b_word).unwrap();
            prop_assert!(a.is_subset_of(&b));
            prop_assert!(b.mirror().is_subset_of(&a.mirror()));
        }

        #[test]
        fn mirror_cardinality(word in 0u64..4096) {
            let a = ElementSet::from_word(12, word).unwrap();
            prop_assert_eq!(a.mirror().cardinality(), 12 - a.cardinality());
        }
    }
}
