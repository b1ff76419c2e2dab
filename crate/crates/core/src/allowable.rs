//! Allowable families `(E_j)` with `E_j ⊆ {k, k+1, …}` and at most `f(k)` sets.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// `f(k) = (4k³)^k`, exactly.
///
/// # Panics
///
/// If `k == 0`.
pub fn admissibility_budget(k: usize) -> BigUint {
    assert!(k >= 1, "admissibility budget is defined for k >= 1");
    let base = BigUint::from(4u32) * BigUint::from(k).pow(3);
    base.pow(k as u32)
}

/// The admissibility function `f`.
#[derive(Clone, Copy, Default)]
pub enum Budget {
    /// `f(k) = (4k³)^k`.
    #[default]
    Tsirelson,
    /// `f(k) = k`, the classical Schreier-type count.
    Linear,
    Custom(fn(usize) -> BigUint),
}

impl fmt::Debug for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Tsirelson => write!(f, "Tsirelson"),
            Budget::Linear => write!(f, "Linear"),
            Budget::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl PartialEq for Budget {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Budget::Tsirelson, Budget::Tsirelson) | (Budget::Linear, Budget::Linear) => true,
            (Budget::Custom(a), Budget::Custom(b)) => core::ptr::fn_addr_eq(*a, *b),
            _ => false,
        }
    }
}

impl Budget {
    pub fn value(&self, k: usize) -> BigUint {
        match self {
            Budget::Tsirelson => admissibility_budget(k),
            Budget::Linear => BigUint::from(k),
            Budget::Custom(f) => f(k),
        }
    }

    /// Whether `count` sets are permitted at `k`.
    pub fn allows(&self, k: usize, count: usize) -> bool {
        if k == 0 {
            return false;
        }
        match self {
            // f(k) ≥ 4k³, so the big power is only needed when 4k³ < count.
            Budget::Tsirelson if (k as u128).saturating_pow(3).saturating_mul(4) >= count as u128 => {
                true
            }
            Budget::Linear => k >= count,
            _ => self.value(k) >= BigUint::from(count),
        }
    }

    /// `min(f(k), limit)`.
    pub fn cap(&self, k: usize, limit: usize) -> usize {
        if self.allows(k, limit) {
            limit
        } else {
            self.value(k).to_usize().unwrap_or(limit).min(limit)
        }
    }

    /// `f(k)` as a float (saturating to infinity).
    pub fn value_f64(&self, k: usize) -> f64 {
        self.value(k).to_f64().unwrap_or(f64::INFINITY)
    }
}

/// A family of disjoint index sets together with its admissibility index `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AllowableFamily {
    pub k: usize,
    pub sets: Vec<Vec<usize>>,
}

impl AllowableFamily {
    /// Sorts every set and orders the sets by their least element.
    /// Does not check admissibility; see [`is_allowable`].
    pub fn new(k: usize, sets: Vec<Vec<usize>>) -> Self {
        let mut sets: Vec<Vec<usize>> = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        sets.sort();
        AllowableFamily { k, sets }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn union(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.sets.iter().flatten().cloned().collect();
        all.sort_unstable();
        all
    }
}

impl fmt::Display for AllowableFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} {{", self.k)?;
        for (j, s) in self.sets.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (i, e) in s.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", e)?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

/// Checks every invariant of an allowable family under `f(k) = (4k³)^k`.
pub fn is_allowable(family: &AllowableFamily) -> bool {
    is_allowable_with(family, &Budget::Tsirelson)
}

pub fn is_allowable_with(family: &AllowableFamily, budget: &Budget) -> bool {
    if family.k == 0 || !budget.allows(family.k, family.sets.len()) {
        return false;
    }
    let mut seen = BTreeSet::new();
    let mut prev_min = 0;
    for s in &family.sets {
        let Some(&min) = s.first() else {
            return false;
        };
        if min < family.k || min <= prev_min && prev_min != 0 {
            return false;
        }
        prev_min = min;
        if s.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        for &e in s {
            if !seen.insert(e) {
                return false;
            }
        }
    }
    true
}

/// Controls for [`enumerate_allowable`].
#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationOptions {
    /// Largest accepted support.
    pub cap: usize,
    /// Restrict to one admissibility index.
    pub k: Option<usize>,
    pub budget: Budget,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            cap: 12,
            k: None,
            budget: Budget::Tsirelson,
        }
    }
}

/// Sorted, deduplicated support; rejects empty supports, index 0 and supports over `cap`.
pub fn normalize_support(support: &[usize], cap: usize) -> Result<Vec<usize>> {
    let mut s = support.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.is_empty() {
        return Err(Error::Empty);
    }
    if s[0] == 0 {
        return Err(Error::ZeroIndex);
    }
    if s.len() > cap {
        return Err(Error::SupportTooLarge { size: s.len(), cap });
    }
    Ok(s)
}

/// Every allowable family that partitions a tail `support ∩ {k, …}`, each once.
///
/// Tails are visited from the longest; within a tail, partitions appear in
/// restricted-growth order. Each family carries the least `k` that produces
/// its tail and admits its number of sets; partitions admitted by no such `k`
/// are skipped. With `opts.k` set only that index is used.
///
/// Families that leave part of a tail uncovered, or that use indices outside
/// the support, are omitted: in the recursions every norm is monotone under
/// enlarging a set, so they never attain a supremum.
pub fn enumerate_allowable(support: &[usize], opts: &EnumerationOptions) -> Result<AllowableIter> {
    let support = normalize_support(support, opts.cap)?;
    let mut tails = Vec::new();
    match opts.k {
        Some(0) => return Err(Error::ZeroIndex),
        Some(k) => {
            let start = support.partition_point(|&e| e < k);
            if start < support.len() {
                tails.push(Tail {
                    elems: support[start..].to_vec(),
                    k_lo: k,
                    k_hi: k,
                });
            }
        }
        None => {
            for j in 0..support.len() {
                tails.push(Tail {
                    elems: support[j..].to_vec(),
                    k_lo: if j == 0 { 1 } else { support[j - 1] + 1 },
                    k_hi: support[j],
                });
            }
        }
    }
    Ok(AllowableIter {
        budget: opts.budget,
        tails,
        tail: 0,
        rgs: None,
        max_blocks: 0,
    })
}

struct Tail {
    elems: Vec<usize>,
    k_lo: usize,
    k_hi: usize,
}

impl Tail {
    /// Least `k` in `k_lo..=k_hi` admitting `count` sets.
    fn least_k(&self, budget: &Budget, count: usize) -> Option<usize> {
        (self.k_lo..=self.k_hi).find(|&k| budget.allows(k, count))
    }
}

/// Iterator returned by [`enumerate_allowable`].
pub struct AllowableIter {
    budget: Budget,
    tails: Vec<Tail>,
    tail: usize,
    rgs: Option<Vec<usize>>,
    max_blocks: usize,
}

impl Iterator for AllowableIter {
    type Item = AllowableFamily;

    fn next(&mut self) -> Option<AllowableFamily> {
        loop {
            let tail = self.tails.get(self.tail)?;
            let m = tail.elems.len();
            let advanced = match self.rgs.as_mut() {
                None => {
                    self.max_blocks = self.budget.cap(tail.k_hi, m);
                    self.rgs = Some(vec![0; m]);
                    true
                }
                Some(a) => next_rgs(a, self.max_blocks),
            };
            if !advanced || self.max_blocks == 0 {
                self.tail += 1;
                self.rgs = None;
                continue;
            }
            let a = self.rgs.as_ref().expect("set above");
            let sets = blocks_of(a, &tail.elems);
            if let Some(k) = tail.least_k(&self.budget, sets.len()) {
                return Some(AllowableFamily::new(k, sets));
            }
        }
    }
}

/// Advances a restricted-growth string to the next one with at most
/// `max_blocks` distinct values, in lexicographic order.
pub(crate) fn next_rgs(a: &mut [usize], max_blocks: usize) -> bool {
    let m = a.len();
    if m < 2 {
        return false;
    }
    let mut prefix_max = vec![0; m];
    for i in 1..m {
        prefix_max[i] = prefix_max[i - 1].max(a[i - 1]);
    }
    for i in (1..m).rev() {
        if a[i] <= prefix_max[i] && a[i] + 1 < max_blocks {
            a[i] += 1;
            for v in a.iter_mut().skip(i + 1) {
                *v = 0;
            }
            return true;
        }
    }
    false
}

pub(crate) fn blocks_of(a: &[usize], elems: &[usize]) -> Vec<Vec<usize>> {
    let count = a.iter().max().map_or(0, |m| m + 1);
    let mut sets = vec![Vec::new(); count];
    for (&b, &e) in a.iter().zip(elems) {
        sets[b].push(e);
    }
    sets
}

/// All partitions of `elems` into exactly `blocks` nonempty sets, as block-index strings.
pub(crate) fn partitions_with_blocks(m: usize, blocks: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m == 0 || blocks == 0 || blocks > m {
        return out;
    }
    let mut a = vec![0; m];
    loop {
        if a.iter().max().map_or(0, |x| x + 1) == blocks {
            out.push(a.clone());
        }
        if !next_rgs(&mut a, blocks) {
            break;
        }
    }
    out
}

/// Number of set partitions of an `m`-set (Bell number), for sizing checks.
pub fn bell_number(m: usize) -> BigUint {
    let mut row = vec![BigUint::one()];
    for _ in 0..m {
        let mut next = vec![row.last().cloned().unwrap_or_default()];
        for v in &row {
            let last = next.last().cloned().unwrap_or_default();
            next.push(last + v);
        }
        row = next;
    }
    row[0].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_table() {
        assert_eq!(admissibility_budget(1), BigUint::from(4u32));
        assert_eq!(admissibility_budget(2), BigUint::from(1024u32));
        assert_eq!(admissibility_budget(3), BigUint::from(1_259_712u32));
        let b = Budget::Tsirelson;
        assert!(b.allows(1, 4) && !b.allows(1, 5));
        assert!(b.allows(2, 1024) && !b.allows(2, 1025));
        assert_eq!(b.cap(1, 7), 4);
        assert_eq!(b.cap(2, 7), 7);
    }

    #[test]
    fn allowable_examples() {
        assert!(!is_allowable(&AllowableFamily::new(2, vec![vec![1]])));
        assert!(!is_allowable(&AllowableFamily::new(1, vec![vec![1], vec![1, 2]])));
        let five = (1..=5).map(|i| vec![i]).collect();
        assert!(!is_allowable(&AllowableFamily::new(1, five)));
        let four = (1..=4).map(|i| vec![i]).collect();
        assert!(is_allowable(&AllowableFamily::new(1, four)));
        assert!(!is_allowable(&AllowableFamily::new(1, vec![vec![]])));
    }

    #[test]
    fn small_enumerations() {
        let opts = EnumerationOptions::default();
        let fams: Vec<_> = enumerate_allowable(&[1], &opts).unwrap().collect();
        assert_eq!(fams, vec![AllowableFamily::new(1, vec![vec![1]])]);

        let fams: Vec<_> = enumerate_allowable(&[2, 3], &opts).unwrap().collect();
        assert_eq!(
            fams,
            vec![
                AllowableFamily::new(1, vec![vec![2, 3]]),
                AllowableFamily::new(1, vec![vec![2], vec![3]]),
                AllowableFamily::new(3, vec![vec![3]]),
            ]
        );

        let k1 = EnumerationOptions {
            k: Some(1),
            ..EnumerationOptions::default()
        };
        assert_eq!(enumerate_allowable(&[1, 2, 3], &k1).unwrap().count(), 5);
    }

    #[test]
    fn budget_binds_at_k_one() {
        let k1 = EnumerationOptions {
            k: Some(1),
            ..EnumerationOptions::default()
        };
        // B_5 = 52 partitions, one of which has five blocks.
        assert_eq!(enumerate_allowable(&[1, 2, 3, 4, 5], &k1).unwrap().count(), 51);
        let from2: Vec<_> = enumerate_allowable(&[2, 3, 4, 5, 6], &k1).unwrap().collect();
        assert_eq!(from2.len(), 51);
        // Without a fixed k the five-block partition of {2..6} is admitted at k = 2.
        let all: Vec<_> = enumerate_allowable(&[2, 3, 4, 5, 6], &EnumerationOptions::default())
            .unwrap()
            .collect();
        assert!(all.iter().any(|f| f.len() == 5 && f.k == 2));
    }

    #[test]
    fn rejects_large_support() {
        let s: Vec<usize> = (1..=13).collect();
        assert_eq!(
            enumerate_allowable(&s, &EnumerationOptions::default()).err(),
            Some(Error::SupportTooLarge { size: 13, cap: 12 })
        );
    }

    #[test]
    fn bell_numbers() {
        let expect = [1u32, 1, 2, 5, 15, 52, 203];
        for (m, &b) in expect.iter().enumerate() {
            assert_eq!(bell_number(m), BigUint::from(b));
        }
        assert_eq!(partitions_with_blocks(4, 2).len(), 7);
    }
}
