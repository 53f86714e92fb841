//! Colex initial segments, cascade notation, r-expansions, and the
//! closed-form shadow matching number.
//!
//! The cascade notation writes `m = C(a_r, r) + C(a_{r-1}, r-1) + ...`
//! greedily with strictly decreasing `a_i`; it is the bookkeeping behind
//! shadow sizes of colex segments and the recursion that produces the
//! per-layer lower bounds `c_t`. The r-expansion is a coarser greedy
//! decomposition whose parts are all at least half full, used to split a
//! target family size into symmetric-chain-coverable blocks.

use crate::error::Error;
use crate::lattice::{next_same_cardinality, ElementSet, Family, ENUMERATION_BUDGET};
use crate::Result;

/// `C(n, k)` with overflow detection; `0` when `k > n`.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    binomial_saturating(n, k)
        .ok_or(Error::Overflow("binomial coefficient exceeds 64 bits"))
}

/// `C(n, k)` as `None` on overflow, for comparisons against a cap.
fn binomial_saturating(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 1..=k {
        // Exact at every step: the running value is C(n - k + i, i).
        r = r * (n - k + i) as u128 / i as u128;
        if r > u64::MAX as u128 {
            return None;
        }
    }
    Some(r as u64)
}

/// True when `C(n, k) <= cap`, treating overflow as larger than any cap.
fn binomial_at_most(n: u64, k: u64, cap: u64) -> bool {
    matches!(binomial_saturating(n, k), Some(v) if v <= cap)
}

/// Largest `a >= i` with `C(a, i) <= m`, for `m >= 1`.
fn max_base_with_binomial_at_most(i: u32, m: u64) -> u64 {
    let i = i as u64;
    if i == 1 {
        return m;
    }
    let mut lo = i;
    let mut hi = i + 1;
    while binomial_at_most(hi, i, m) {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if binomial_at_most(mid, i, m) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// The r-cascade notation of a positive integer: terms `(a_i, i)` with
/// `i` descending consecutively from `r`, the `a_i` strictly decreasing,
/// `a_i >= i`, and `m = sum C(a_i, i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CascadeExpansion {
    terms: Vec<(u64, u32)>,
}

impl CascadeExpansion {
    /// Validates the cascade invariants.
    pub fn new(terms: Vec<(u64, u32)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Precondition("cascade needs at least one term".into()));
        }
        for (j, &(a, i)) in terms.iter().enumerate() {
            if i == 0 || a < i as u64 {
                return Err(Error::Precondition(format!(
                    "cascade term C({a}, {i}) out of range"
                )));
            }
            if j > 0 {
                let (prev_a, prev_i) = terms[j - 1];
                if i + 1 != prev_i || a >= prev_a {
                    return Err(Error::Precondition(format!(
                        "cascade terms C({prev_a}, {prev_i}), C({a}, {i}) not descending"
                    )));
                }
            }
        }
        Ok(Self { terms })
    }

    /// Terms `(a_i, i)` with `i` descending from `r`.
    pub fn terms(&self) -> &[(u64, u32)] {
        &self.terms
    }

    /// Reconstructs `m = sum C(a_i, i)`.
    pub fn value(&self) -> Result<u64> {
        let mut total: u64 = 0;
        for &(a, i) in &self.terms {
            total = total
                .checked_add(binomial(a, i as u64)?)
                .ok_or(Error::Overflow("cascade value exceeds 64 bits"))?;
        }
        Ok(total)
    }
}

/// Greedy r-cascade notation of `m >= 1`.
pub fn cascade(m: u64, r: u32) -> Result<CascadeExpansion> {
    if m == 0 || r == 0 {
        return Err(Error::Precondition(format!(
            "cascade needs m >= 1 and r >= 1, got m={m}, r={r}"
        )));
    }
    let mut terms = Vec::new();
    let mut rem = m;
    let mut i = r;
    while rem > 0 {
        let a = max_base_with_binomial_at_most(i, rem);
        terms.push((a, i));
        rem -= binomial(a, i as u64)?;
        i -= 1;
    }
    let expansion = CascadeExpansion::new(terms)?;
    debug_assert_eq!(expansion.value()?, m);
    Ok(expansion)
}

/// The first `m` sets of layer `t` in colex order.
///
/// The universe is auto-sized from the cascade of `m` to `a_r + 1`, the
/// smallest bound beyond which the segment's structure no longer depends
/// on the ambient universe.
pub fn colex_segment(m: u64, t: u32) -> Result<Family> {
    if m == 0 {
        return Family::new(t.min(crate::lattice::MAX_UNIVERSE));
    }
    if t == 0 {
        if m > 1 {
            return Err(Error::Capacity(format!("layer 0 holds one set, not {m}")));
        }
        return Family::from_sets(0, [ElementSet::empty(0)?]);
    }
    let expansion = cascade(m, t)?;
    let a_r = expansion.terms()[0].0;
    let universe = a_r + 1;
    if universe > crate::lattice::MAX_UNIVERSE as u64 {
        return Err(Error::Capacity(format!(
            "colex segment of size {m} at layer {t} needs universe {universe}"
        )));
    }
    if m > ENUMERATION_BUDGET {
        return Err(Error::Capacity(format!(
            "colex segment of size {m} exceeds the enumeration budget"
        )));
    }
    let universe = universe as u32;
    let mut members = Vec::with_capacity(m as usize);
    let mut word = (1u64 << t) - 1;
    for _ in 0..m {
        members.push(ElementSet::from_word(universe, word)?);
        word = next_same_cardinality(word);
    }
    Family::from_sets(universe, members)
}

/// `|shadow(colex_segment(m, r))|` from the cascade closed form
/// `sum C(a_i, i - 1)`.
pub fn shadow_size_colex(m: u64, r: u32) -> Result<u64> {
    let expansion = cascade(m, r)?;
    let mut total: u64 = 0;
    for &(a, i) in expansion.terms() {
        total = total
            .checked_add(binomial(a, i as u64 - 1)?)
            .ok_or(Error::Overflow("shadow size exceeds 64 bits"))?;
    }
    Ok(total)
}

/// The shadow matching number of the colex segment of size `m` at layer
/// `r`, in closed form.
///
/// With cascade terms `(a_i, i)`: if every term satisfies
/// `i <= ceil(a_i / 2)` the value is `sum C(a_i, i - 1)`. Otherwise let
/// `j` be maximal with `j > ceil(a_j / 2)`; terms above `j` contribute
/// `C(a_i, i - 1)` and terms from `j` down contribute `C(a_i, i)`.
pub fn nu_colex(m: u64, r: u32) -> Result<u64> {
    let expansion = cascade(m, r)?;
    // Terms are stored with i descending, so the first violating term in
    // list order has the maximal index j.
    let cutoff = expansion
        .terms()
        .iter()
        .position(|&(a, i)| 2 * i as u64 > a + 1);
    let mut total: u64 = 0;
    for (pos, &(a, i)) in expansion.terms().iter().enumerate() {
        let contribution = match cutoff {
            Some(c) if pos >= c => binomial(a, i as u64)?,
            _ => binomial(a, i as u64 - 1)?,
        };
        total = total
            .checked_add(contribution)
            .ok_or(Error::Overflow("matching number exceeds 64 bits"))?;
    }
    Ok(total)
}

/// An r-expansion: terms `(a_{r_j}, r_j)` with both coordinates strictly
/// decreasing and every part at least half full (`r_j <= ceil(a_{r_j}/2)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RExpansion {
    terms: Vec<(u64, u32)>,
}

impl RExpansion {
    /// Validates the three structural invariants.
    pub fn new(terms: Vec<(u64, u32)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Precondition(
                "expansion needs at least one term".into(),
            ));
        }
        for (j, &(a, r)) in terms.iter().enumerate() {
            if r == 0 || a < 2 * r as u64 - 1 {
                return Err(Error::Precondition(format!(
                    "expansion term C({a}, {r}) is less than half full"
                )));
            }
            if j > 0 {
                let (prev_a, prev_r) = terms[j - 1];
                if r >= prev_r || a >= prev_a {
                    return Err(Error::Precondition(format!(
                        "expansion terms C({prev_a}, {prev_r}), C({a}, {r}) not descending"
                    )));
                }
            }
        }
        Ok(Self { terms })
    }

    /// Terms `(a_{r_j}, r_j)` with `r_j` strictly descending.
    pub fn terms(&self) -> &[(u64, u32)] {
        &self.terms
    }

    /// Reconstructs `m = sum C(a_{r_j}, r_j)`.
    pub fn value(&self) -> Result<u64> {
        let mut total: u64 = 0;
        for &(a, r) in &self.terms {
            total = total
                .checked_add(binomial(a, r as u64)?)
                .ok_or(Error::Overflow("expansion value exceeds 64 bits"))?;
        }
        Ok(total)
    }
}

/// The r-expansion of `m >= C(2r - 1, r)`.
///
/// Greedy like the cascade, but after each remainder the next index drops
/// to the largest `j` below the previous one with `C(2j - 1, j)` still at
/// most the remainder, keeping every part at least half full.
pub fn r_expansion(m: u64, r: u32) -> Result<RExpansion> {
    if r == 0 {
        return Err(Error::Precondition("expansion needs r >= 1".into()));
    }
    let threshold = binomial(2 * r as u64 - 1, r as u64)?;
    if m < threshold {
        return Err(Error::Precondition(format!(
            "expansion needs m >= C(2r-1, r) = {threshold}, got m={m}"
        )));
    }
    let mut terms = Vec::new();
    let mut rem = m;
    let mut r_j = r;
    loop {
        let a = max_base_with_binomial_at_most(r_j, rem);
        terms.push((a, r_j));
        rem -= binomial(a, r_j as u64)?;
        if rem == 0 {
            break;
        }
        // Largest next index whose half-full threshold still fits.
        r_j = (1..r_j)
            .rev()
            .find(|&j| binomial_at_most(2 * j as u64 - 1, j as u64, rem))
            .expect("remainder >= 1 admits index 1");
    }
    let expansion = RExpansion::new(terms)?;
    debug_assert_eq!(expansion.value()?, m);
    Ok(expansion)
}

/// Rewrites an r-expansion of `m` into the t-expansion of the shifted sum
/// `m' = C(a_{r_1}, t) + C(a_{r_2}, t-1) + ... + C(a_{r_i}, t-(i-1)) +
/// (unchanged tail)`, where `i` is the largest index with
/// `r_i + (i - 1) >= t`.
///
/// `t = r` returns the expansion unchanged. The rewrite requires a
/// nonempty unchanged tail (`i < s`); when even the last term shifts, the
/// caller must handle that branch by other means and this returns a
/// precondition error.
pub fn t_expansion_shift(exp: &RExpansion, t: u32) -> Result<RExpansion> {
    let terms = exp.terms();
    let r = terms[0].1;
    if t == 0 || t > r {
        return Err(Error::Precondition(format!(
            "shift target t={t} outside 1..={r}"
        )));
    }
    if t == r {
        return Ok(exp.clone());
    }
    let s = terms.len();
    // Largest 1-based index i with r_i + (i - 1) >= t; i = 1 always
    // qualifies because r_1 = r >= t.
    let i = (1..=s)
        .rev()
        .find(|&i| terms[i - 1].1 as u64 + (i as u64 - 1) >= t as u64)
        .expect("index 1 always qualifies");
    if i == s {
        return Err(Error::Precondition(
            "shift consumes every term; no unchanged tail remains".into(),
        ));
    }
    let mut shifted: Vec<(u64, u32)> = Vec::with_capacity(s);
    for (pos, &(a, r_j)) in terms.iter().enumerate() {
        if pos < i {
            shifted.push((a, t - pos as u32));
        } else {
            shifted.push((a, r_j));
        }
    }
    RExpansion::new(shifted)
}

/// The layer quota sequence for k-antichain saturation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CSequence {
    /// The antichain size bound.
    pub k: u64,
    /// Smallest `j` with `C(j, floor(j/2)) >= k - 1`.
    pub ell: u32,
    /// Quotas `c_0..c_{floor(ell/2)}`: `c_{floor(ell/2)} = k - 1` and
    /// `c_t = nu_colex(c_{t+1}, t+1)` going down.
    pub c: Vec<u64>,
}

/// Computes `ell` and the descending quota recursion for `k >= 2`.
pub fn c_sequence(k: u64) -> Result<CSequence> {
    if k < 2 {
        return Err(Error::Precondition(format!(
            "quota sequence needs k >= 2, got {k}"
        )));
    }
    let target = k - 1;
    let mut ell: u32 = 0;
    while !matches!(binomial_saturating(ell as u64, ell as u64 / 2), Some(v) if v >= target) {
        ell += 1;
    }
    let half = ell / 2;
    let mut c = vec![0u64; half as usize + 1];
    c[half as usize] = target;
    for t in (0..half).rev() {
        c[t as usize] = nu_colex(c[t as usize + 1], t + 1)?;
    }
    Ok(CSequence { k, ell, c })
}
