//! Splits of the ground set.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::subset::{GroundSet, Subset, MAX_N};

/// A bipartition `{A, B}` of `X = {1..n}`.
///
/// Stored canonically through the block that does not contain 1, so two
/// descriptions of the same bipartition compare equal.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Split {
    n: u8,
    block: Subset,
}

impl Split {
    /// Builds the split `{A, X \ A}`. Either block may be given.
    pub fn new(block: Subset, n: usize) -> Result<Split> {
        GroundSet::new(n)?;
        if !block.is_subset_of(Subset::full(n)) {
            return Err(Error::InvalidSplit(alloc::format!("{block} is not inside {{1..{n}}}")));
        }
        if block.is_empty() || block == Subset::full(n) {
            return Err(Error::InvalidSplit(alloc::format!("{block} leaves an empty block")));
        }
        let block = if block.contains(1) { block.complement(n) } else { block };
        Ok(Split { n: n as u8, block })
    }

    /// Builds a split from two explicit blocks, which must partition X.
    pub fn from_blocks(a: Subset, b: Subset, n: usize) -> Result<Split> {
        if !a.is_disjoint(b) || a.union(b) != Subset::full(n) {
            return Err(Error::InvalidSplit(alloc::format!("{a} and {b} do not partition {{1..{n}}}")));
        }
        Split::new(a, n)
    }

    /// The trivial split `{{a}, X \ {a}}`.
    pub fn trivial(a: usize, n: usize) -> Result<Split> {
        if a == 0 || a > n {
            return Err(Error::ElementOutOfRange { element: a, n });
        }
        Split::new(Subset::singleton(a), n)
    }

    pub fn n(self) -> usize {
        self.n as usize
    }

    /// The canonical block, the one not containing 1.
    pub fn block_a(self) -> Subset {
        self.block
    }

    /// The block containing 1.
    pub fn block_b(self) -> Subset {
        self.block.complement(self.n())
    }

    pub fn blocks(self) -> [Subset; 2] {
        [self.block_a(), self.block_b()]
    }

    pub fn min_block_size(self) -> usize {
        let a = self.block.len();
        a.min(self.n() - a)
    }

    pub fn max_block_size(self) -> usize {
        let a = self.block.len();
        a.max(self.n() - a)
    }

    pub fn is_trivial(self) -> bool {
        self.min_block_size() == 1
    }

    /// For a trivial split, the isolated element.
    pub fn trivial_element(self) -> Option<usize> {
        if self.block.len() == 1 {
            self.block.min()
        } else if self.n() - self.block.len() == 1 {
            self.block_b().min()
        } else {
            None
        }
    }

    /// `S(i)`, the block containing `i`.
    pub fn restriction(self, i: usize) -> Result<Subset> {
        if i == 0 || i > self.n() {
            return Err(Error::ElementOutOfRange { element: i, n: self.n() });
        }
        Ok(if self.block.contains(i) { self.block_a() } else { self.block_b() })
    }

    /// `true` if `K` meets both blocks.
    #[inline]
    pub fn separates(self, k_subset: Subset) -> bool {
        !k_subset.is_disjoint(self.block) && !k_subset.is_subset_of(self.block)
    }

    /// All splits of `{1..n}`, trivial ones included, in canonical order.
    pub fn all(n: usize) -> Vec<Split> {
        assert!((2..=MAX_N).contains(&n));
        // blocks not containing 1 are the nonempty subsets of {2..n}
        (1u32..(1u32 << (n - 1))).map(|m| Split { n: n as u8, block: Subset(m << 1) }).collect()
    }

    /// All nontrivial splits of `{1..n}` in canonical order.
    pub fn all_nontrivial(n: usize) -> Vec<Split> {
        Split::all(n).into_iter().filter(|s| !s.is_trivial()).collect()
    }

    /// Parses `"1 2 | 3 4"`; element lists may also use commas.
    pub fn parse(text: &str, n: usize) -> Result<Split> {
        let (left, right) =
            text.split_once('|').ok_or_else(|| Error::InvalidSplit(alloc::format!("missing '|' in {text:?}")))?;
        let a = crate::subset::parse_subset(left, n)?;
        let b = crate::subset::parse_subset(right, n)?;
        Split::from_blocks(a, b, n)
    }
}

fn write_block(f: &mut fmt::Formatter<'_>, block: Subset) -> fmt::Result {
    for (idx, e) in block.iter().enumerate() {
        if idx > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

/// Formats as `"1 4 | 2 3"`, the block containing 1 first.
impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_block(f, self.block_b())?;
        f.write_str(" | ")?;
        write_block(f, self.block_a())
    }
}

impl fmt::Debug for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A set of splits on a common ground set, kept sorted and deduplicated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SplitSystem {
    splits: Vec<Split>,
}

impl SplitSystem {
    pub fn new(mut splits: Vec<Split>) -> Result<Self> {
        if let Some(first) = splits.first() {
            let n = first.n();
            if let Some(other) = splits.iter().find(|s| s.n() != n) {
                return Err(Error::DimensionMismatch { k1: 0, n1: n, k2: 0, n2: other.n() });
            }
        }
        splits.sort();
        splits.dedup();
        Ok(SplitSystem { splits })
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    pub fn len(&self) -> usize {
        self.splits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.splits.is_empty()
    }

    pub fn contains(&self, split: &Split) -> bool {
        self.splits.binary_search(split).is_ok()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Split> {
        self.splits.iter()
    }
}

impl<'a> IntoIterator for &'a SplitSystem {
    type Item = &'a Split;
    type IntoIter = core::slice::Iter<'a, Split>;

    fn into_iter(self) -> Self::IntoIter {
        self.splits.iter()
    }
}

/// Splits with strictly positive weights.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightedSplitSystem {
    weights: BTreeMap<Split, Rational>,
}

impl WeightedSplitSystem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a system from pairs; splits must be distinct and weights positive.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Split, Rational)>) -> Result<Self> {
        let mut system = Self::new();
        for (split, weight) in pairs {
            if system.weights.contains_key(&split) {
                return Err(Error::InvalidSplit(alloc::format!("split {split} listed twice")));
            }
            system.insert(split, weight)?;
        }
        Ok(system)
    }

    /// Inserts or replaces the weight of `split`.
    pub fn insert(&mut self, split: Split, weight: Rational) -> Result<()> {
        if !weight.is_positive() {
            return Err(Error::NonPositiveWeight(split));
        }
        if let Some((first, _)) = self.weights.iter().next() {
            if first.n() != split.n() {
                return Err(Error::DimensionMismatch { k1: 0, n1: first.n(), k2: 0, n2: split.n() });
            }
        }
        self.weights.insert(split, weight);
        Ok(())
    }

    pub fn weight(&self, split: &Split) -> Option<&Rational> {
        self.weights.get(split)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Pairs in canonical split order.
    pub fn iter(&self) -> impl Iterator<Item = (&Split, &Rational)> {
        self.weights.iter()
    }

    pub fn split_system(&self) -> SplitSystem {
        SplitSystem { splits: self.weights.keys().copied().collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sub(e: &[usize]) -> Subset {
        Subset::from_elements(e, 8).unwrap()
    }

    #[test]
    fn canonical_form_ignores_block_order() {
        let s = Split::from_blocks(sub(&[2, 3]), sub(&[1, 4]), 4).unwrap();
        let t = Split::from_blocks(sub(&[1, 4]), sub(&[2, 3]), 4).unwrap();
        assert_eq!(s, t);
        assert_eq!(s.block_a(), sub(&[2, 3]));
        assert!(!s.block_a().contains(1));
    }

    #[test]
    fn restriction_picks_block() {
        let s = Split::from_blocks(sub(&[2, 3]), sub(&[1, 4]), 4).unwrap();
        assert_eq!(s.restriction(2).unwrap(), sub(&[2, 3]));
        assert_eq!(s.restriction(1).unwrap(), sub(&[1, 4]));
        assert_eq!(s.restriction(3).unwrap(), s.restriction(2).unwrap());
        assert!(s.restriction(5).is_err());
    }

    #[test]
    fn triviality() {
        assert!(Split::trivial(3, 5).unwrap().is_trivial());
        assert_eq!(Split::trivial(1, 5).unwrap().trivial_element(), Some(1));
        assert_eq!(Split::trivial(4, 5).unwrap().trivial_element(), Some(4));
        assert!(!Split::new(sub(&[1, 2]), 5).unwrap().is_trivial());
        assert_eq!(Split::all(5).len(), 15);
        assert_eq!(Split::all_nontrivial(5).len(), 10);
        assert_eq!(Split::all_nontrivial(6).len(), 25);
    }

    #[test]
    fn rejects_bad_blocks() {
        assert!(Split::new(Subset::EMPTY, 4).is_err());
        assert!(Split::new(Subset::full(4), 4).is_err());
        assert!(Split::from_blocks(sub(&[1, 2]), sub(&[2, 3, 4]), 4).is_err());
        assert!(Split::parse("1 2 3 4", 4).is_err());
    }

    #[test]
    fn parse_and_display_round_trip() {
        let s = Split::parse("3 4 | 1 2 5", 5).unwrap();
        assert_eq!(alloc::format!("{s}"), "1 2 5 | 3 4");
        assert_eq!(Split::parse(&alloc::format!("{s}"), 5).unwrap(), s);
    }

    #[test]
    fn weighted_system_requires_positive_weights() {
        let s = Split::trivial(1, 4).unwrap();
        assert!(WeightedSplitSystem::from_pairs([(s, crate::rational::int(0))]).is_err());
        assert!(WeightedSplitSystem::from_pairs([(s, crate::rational::int(1)), (s, crate::rational::int(2))]).is_err());
    }

    proptest! {
        #[test]
        fn canonicalization_is_idempotent(n in 2usize..10, mask in 1u32..u32::MAX) {
            let full = Subset::full(n);
            let a = Subset(mask).intersection(full);
            prop_assume!(!a.is_empty() && a != full);
            let s = Split::new(a, n).unwrap();
            let t = Split::new(a.complement(n), n).unwrap();
            prop_assert_eq!(s, t);
            prop_assert_eq!(Split::new(s.block_a(), n).unwrap(), s);
        }
    }
}
