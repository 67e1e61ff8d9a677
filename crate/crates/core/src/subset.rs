//! Ground sets and k-subsets.
//!
//! Subsets of `X = {1, ..., n}` are bitmasks: bit `i - 1` stands for element
//! `i`. Comparing masks as integers gives the colexicographic order, which is
//! the order used to index every map and weight function.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_N: usize = 31;

/// A subset of the ground set, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    /// Builds a subset from 1-based elements. Elements must lie in `1..=n`.
    pub fn from_elements(elements: &[usize], n: usize) -> Result<Subset> {
        let mut mask = 0u32;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
            if mask & (1 << (e - 1)) != 0 {
                return Err(Error::MalformedSubset(alloc::format!("duplicate element {e}")));
            }
            mask |= 1 << (e - 1);
        }
        Ok(Subset(mask))
    }

    /// Like [`Subset::from_elements`] but also requires a strictly increasing list.
    pub fn from_sorted(elements: &[usize], n: usize) -> Result<Subset> {
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedSubset(alloc::format!("{elements:?} is not strictly increasing")));
        }
        Subset::from_elements(elements, n)
    }

    /// The full ground set `{1..n}`.
    pub fn full(n: usize) -> Subset {
        if n >= 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << n) - 1)
        }
    }

    pub fn singleton(element: usize) -> Subset {
        Subset(1 << (element - 1))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, element: usize) -> bool {
        (1..=32).contains(&element) && self.0 & (1 << (element - 1)) != 0
    }

    #[inline]
    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    /// Complement inside `{1..n}`.
    #[inline]
    pub fn complement(self, n: usize) -> Subset {
        Subset::full(n).difference(self)
    }

    #[inline]
    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn insert(self, element: usize) -> Subset {
        Subset(self.0 | (1 << (element - 1)))
    }

    pub fn remove(self, element: usize) -> Subset {
        Subset(self.0 & !(1 << (element - 1)))
    }

    /// Smallest element, if any.
    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Elements in increasing order.
    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    pub fn elements(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// 0/1 indicator vector of length `n`.
    pub fn indicator(self, n: usize) -> Vec<i64> {
        (1..=n).map(|i| i64::from(self.contains(i))).collect()
    }
}

/// Iterator over the elements of a [`Subset`].
#[derive(Clone)]
pub struct Elements(u32);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(i as usize + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elements {}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (idx, e) in self.iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The ground set `X = {1, ..., n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::GroundSetSize(n));
        }
        Ok(GroundSet { n })
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn full(self) -> Subset {
        Subset::full(self.n)
    }

    pub fn contains(self, element: usize) -> bool {
        (1..=self.n).contains(&element)
    }
}

/// Binomial coefficient, 0 when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

fn check_kn(k: usize, n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::GroundSetSize(n));
    }
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    Ok(())
}

/// Colexicographic rank of a k-subset.
///
/// With 0-based elements `e_0 < e_1 < ... < e_{k-1}` the rank is
/// `sum_j C(e_j, j + 1)`.
pub fn ksubset_rank(subset: Subset, k: usize, n: usize) -> Result<usize> {
    check_kn(k, n)?;
    if subset.len() != k {
        return Err(Error::MalformedSubset(alloc::format!("{subset} does not have {k} elements")));
    }
    if !subset.is_subset_of(Subset::full(n)) {
        let element = subset.difference(Subset::full(n)).min().unwrap_or(0);
        return Err(Error::ElementOutOfRange { element, n });
    }
    Ok(rank_unchecked(subset))
}

#[inline]
pub(crate) fn rank_unchecked(subset: Subset) -> usize {
    subset.iter().enumerate().map(|(j, e)| binomial(e - 1, j + 1)).sum()
}

/// Inverse of [`ksubset_rank`].
pub fn ksubset_unrank(rank: usize, k: usize, n: usize) -> Result<Subset> {
    check_kn(k, n)?;
    if rank >= binomial(n, k) {
        return Err(Error::RankOutOfRange { rank, k, n });
    }
    let mut r = rank;
    let mut mask = 0u32;
    let mut top = n;
    for j in (1..=k).rev() {
        // largest e with C(e, j) <= r
        let mut e = top - 1;
        while binomial(e, j) > r {
            e -= 1;
        }
        mask |= 1 << e;
        r -= binomial(e, j);
        top = e;
    }
    Ok(Subset(mask))
}

/// All k-subsets of `{1..n}` in colex (= rank) order.
pub fn ksubsets(k: usize, n: usize) -> KSubsets {
    let limit = if n >= 32 { u64::MAX } else { 1u64 << n };
    let first = if k == 0 { 0 } else { (1u64 << k) - 1 };
    KSubsets { next: (k <= n).then_some(first), limit }
}

/// Iterator produced by [`ksubsets`], based on Gosper's hack.
pub struct KSubsets {
    next: Option<u64>,
    limit: u64,
}

impl Iterator for KSubsets {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let current = self.next?;
        if current >= self.limit {
            self.next = None;
            return None;
        }
        self.next = if current == 0 {
            None
        } else {
            let c = current & current.wrapping_neg();
            let r = current + c;
            Some((((r ^ current) >> 2) / c) | r)
        };
        Some(Subset(current as u32))
    }
}

/// Every subset of `{1..n}`, in increasing mask order.
pub fn all_subsets(n: usize) -> impl Iterator<Item = Subset> {
    (0..(1u64 << n)).map(|m| Subset(m as u32))
}

/// Parses `"{1,2,3}"`, `"1 2 3"` or `"1,2,3"`.
pub fn parse_subset(text: &str, n: usize) -> Result<Subset> {
    let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
    let mut elements = Vec::new();
    for token in inner.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let e: usize = token.parse().map_err(|_| Error::MalformedSubset(String::from(text)))?;
        elements.push(e);
    }
    Subset::from_elements(&elements, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(elements: &[usize]) -> Subset {
        Subset::from_elements(elements, 12).unwrap()
    }

    #[test]
    fn smallest_set_has_rank_zero() {
        for n in 2..8 {
            for k in 1..=n {
                let first: Vec<usize> = (1..=k).collect();
                assert_eq!(ksubset_rank(set(&first), k, n).unwrap(), 0);
            }
        }
    }

    #[test]
    fn colex_order_for_two_of_four() {
        let listed: Vec<Subset> = (0..6).map(|r| ksubset_unrank(r, 2, 4).unwrap()).collect();
        let expected = [set(&[1, 2]), set(&[1, 3]), set(&[2, 3]), set(&[1, 4]), set(&[2, 4]), set(&[3, 4])];
        assert_eq!(listed, expected);
        assert_eq!(ksubset_unrank(ksubset_rank(set(&[1, 2]), 2, 4).unwrap(), 2, 4).unwrap(), set(&[1, 2]));
    }

    #[test]
    fn rank_matches_sorted_enumeration() {
        // independent oracle: filter all masks by popcount, keep ascending order
        for n in 1..=12 {
            for k in 1..=n {
                let oracle: Vec<Subset> = all_subsets(n).filter(|s| s.len() == k).collect();
                assert_eq!(oracle.len(), binomial(n, k));
                let gosper: Vec<Subset> = ksubsets(k, n).collect();
                assert_eq!(gosper, oracle);
                for (r, s) in oracle.iter().enumerate() {
                    assert_eq!(ksubset_rank(*s, k, n).unwrap(), r);
                    assert_eq!(ksubset_unrank(r, k, n).unwrap(), *s);
                }
            }
        }
    }

    #[test]
    fn rank_errors() {
        assert!(ksubset_unrank(6, 2, 4).is_err());
        assert!(ksubset_rank(set(&[1, 2, 3]), 2, 4).is_err());
        assert!(ksubset_rank(set(&[1, 5]), 2, 4).is_err());
        assert!(Subset::from_elements(&[0], 4).is_err());
        assert!(Subset::from_elements(&[2, 2], 4).is_err());
        assert!(Subset::from_sorted(&[3, 2], 4).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(31, 15), 300_540_195);
    }

    #[test]
    fn parse_and_display() {
        let s = parse_subset("{1, 3,4}", 5).unwrap();
        assert_eq!(s, set(&[1, 3, 4]));
        assert_eq!(alloc::format!("{s}"), "{1,3,4}");
        assert!(parse_subset("1 x", 5).is_err());
    }

    proptest! {
        #[test]
        fn unrank_rank_roundtrip(n in 1usize..=20, k_seed in 0usize..100, r_seed in 0usize..1_000_000) {
            let k = 1 + k_seed % n;
            let r = r_seed % binomial(n, k);
            let s = ksubset_unrank(r, k, n).unwrap();
            prop_assert_eq!(s.len(), k);
            prop_assert_eq!(ksubset_rank(s, k, n).unwrap(), r);
        }
    }
}
