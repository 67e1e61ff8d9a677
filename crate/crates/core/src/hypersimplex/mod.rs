//! The hypersimplex `Δ(k, n)`, its splits, and regular subdivisions.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::dissimilarity::WeightFunction;
use crate::error::{Error, Result};
use crate::lp::{maximize, LpOutcome};
use crate::rational::{int, Rational};
use crate::subset::{all_subsets, binomial, ksubsets, Subset};

mod faces;
pub mod oracle;
mod refinement;
mod subdivision;
mod weak;

pub use faces::{face_lattice, normalized_volume, tight_span_poset, Face, FacePoset};
pub use refinement::{common_refinement, is_coherent_sum, Refinement};
pub use subdivision::{regular_subdivision, AffineLift, Cell, Halfspace, Subdivision};
pub use weak::{geometric_weak_compatibility, FractionalPoint};

pub(crate) use subdivision::check_kn;
pub(crate) use subdivision::reduced_row as subdivision_row;

/// All vertices of `Δ(k, n)` as k-subsets, in rank order.
pub fn hypersimplex_vertices(k: usize, n: usize) -> Result<Vec<Subset>> {
    check_kn(k, n)?;
    Ok(ksubsets(k, n).collect())
}

/// Normalized volume of `Δ(k, n)` (an Eulerian number).
pub fn hypersimplex_volume(k: usize, n: usize) -> BigInt {
    let mut total = BigInt::zero();
    for j in 0..k {
        let term = BigInt::from(binomial(n, j)) * num_traits::pow(BigInt::from(k - j), n - 1);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// The hyperplane `Σ_{i ∈ A} x_i = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetHyperplane {
    subset: Subset,
    n: usize,
}

impl SubsetHyperplane {
    /// `A` must be a nonempty proper subset of `{1..n}`.
    pub fn new(subset: Subset, n: usize) -> Result<Self> {
        crate::subset::GroundSet::new(n)?;
        if subset.is_empty() || subset == Subset::full(n) || !subset.is_subset_of(Subset::full(n)) {
            return Err(Error::MalformedSubset(alloc::format!("{subset} is not a nonempty proper subset")));
        }
        Ok(SubsetHyperplane { subset, n })
    }

    pub fn subset(self) -> Subset {
        self.subset
    }

    pub fn n(self) -> usize {
        self.n
    }
}

/// `true` iff `H_A` cuts `Δ(k, n)` into two cells, i.e. `2 <= |A| <= n - k`.
pub fn is_split_defining_subset(subset: Subset, k: usize, n: usize) -> Result<bool> {
    SubsetHyperplane::new(subset, n)?;
    check_kn(k, n)?;
    Ok(split_defining(subset, k, n))
}

#[inline]
pub(crate) fn split_defining(subset: Subset, k: usize, n: usize) -> bool {
    let a = subset.len();
    a >= 2 && a + k <= n
}

/// A split of `Δ(k, n)` given by the `(A, B, μ)`-hyperplane
/// `μ Σ_A x = (k - μ) Σ_B x`, equivalently `Σ_A x = k - μ`.
///
/// Stored with `1 ∈ B`; `(A, B, μ)` and `(B, A, k - μ)` are the same split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HsSplit {
    a: Subset,
    mu: usize,
    k: usize,
    n: usize,
}

impl HsSplit {
    /// Validates `1 <= μ <= k - 1` and `k - μ + 1 <= |A| <= n - μ - 1`.
    pub fn new(a: Subset, mu: usize, k: usize, n: usize) -> Result<Self> {
        check_kn(k, n)?;
        SubsetHyperplane::new(a, n)?;
        if mu == 0 || mu >= k {
            return Err(Error::InvalidSplit(alloc::format!("mu = {mu} outside 1..{k}")));
        }
        let size = a.len();
        if size + mu < k + 1 || size + mu + 1 > n {
            return Err(Error::InvalidSplit(alloc::format!("|A| = {size} violates the bounds for mu = {mu}")));
        }
        Ok(if a.contains(1) { HsSplit { a: a.complement(n), mu: k - mu, k, n } } else { HsSplit { a, mu, k, n } })
    }

    /// `S_A`, the split cut out by `H_A`; that is the `(X \ A, A, 1)`-hyperplane.
    pub fn from_subset(subset: Subset, k: usize, n: usize) -> Result<Self> {
        if !is_split_defining_subset(subset, k, n)? {
            return Err(Error::NotSplitDefining(subset));
        }
        HsSplit::new(subset.complement(n), 1, k, n)
    }

    pub fn a(self) -> Subset {
        self.a
    }

    pub fn b(self) -> Subset {
        self.a.complement(self.n)
    }

    pub fn mu(self) -> usize {
        self.mu
    }

    pub fn k(self) -> usize {
        self.k
    }

    pub fn n(self) -> usize {
        self.n
    }

    /// Right-hand side of `Σ_A x = k - μ`.
    pub fn level(self) -> usize {
        self.k - self.mu
    }
}

impl fmt::Display for HsSplit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a(), self.b(), self.mu)
    }
}

/// All splits of `Δ(k, n)`, each listed once.
pub fn enumerate_hypersimplex_splits(k: usize, n: usize) -> Vec<HsSplit> {
    let mut out = Vec::new();
    if k < 2 || k >= n {
        return out;
    }
    for a in all_subsets(n).filter(|a| !a.contains(1) && !a.is_empty()) {
        for mu in 1..k {
            if let Ok(s) = HsSplit::new(a, mu, k, n) {
                out.push(s);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Compatibility of two hypersimplex splits: their hyperplanes do not meet
/// in the relative interior of `Δ(k, n)`.
pub fn hs_splits_compatible(s1: HsSplit, s2: HsSplit) -> Result<bool> {
    if s1.k != s2.k || s1.n != s2.n {
        return Err(Error::DimensionMismatch { k1: s1.k, n1: s1.n, k2: s2.k, n2: s2.n });
    }
    let k = s1.k as i64;
    let (mu, nu) = (s1.mu as i64, s2.mu as i64);
    let (a, b, c, d) = (s1.a(), s1.b(), s2.a(), s2.b());
    let size = |x: Subset, y: Subset| x.intersection(y).len() as i64;
    Ok(size(a, c) <= k - mu - nu || size(a, d) <= nu - mu || size(b, c) <= mu - nu || size(b, d) <= mu + nu - k)
}

/// Compatibility of `S_A` and `S_B` in closed form.
pub fn subset_splits_compatible(a: Subset, b: Subset, k: usize, n: usize) -> bool {
    a.is_subset_of(b) || b.is_subset_of(a) || a.union(b).len() + k >= n + 2 || (k == 2 && a.is_disjoint(b))
}

/// `true` iff all hyperplanes `H_A` of the family meet in the relative
/// interior of `Δ(k, n)`, decided by an exact linear program.
pub fn hyperplanes_meet_interior(family: &[Subset], k: usize, n: usize) -> Result<bool> {
    check_kn(k, n)?;
    for &a in family {
        SubsetHyperplane::new(a, n)?;
    }
    // variables: x (n), t, s (n), r (n); maximize t
    let vars = 3 * n + 1;
    let t = n;
    let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
    let zero_row = || alloc::vec![Rational::zero(); vars];
    for i in 0..n {
        let mut lower = zero_row();
        lower[i] = Rational::one();
        lower[t] = -Rational::one();
        lower[n + 1 + i] = -Rational::one();
        rows.push((lower, Rational::zero()));
        let mut upper = zero_row();
        upper[i] = Rational::one();
        upper[t] = Rational::one();
        upper[2 * n + 1 + i] = Rational::one();
        rows.push((upper, Rational::one()));
    }
    let mut sum = zero_row();
    for v in sum.iter_mut().take(n) {
        *v = Rational::one();
    }
    rows.push((sum, int(k as i64)));
    for &a in family {
        let mut row = zero_row();
        for i in a.iter() {
            row[i - 1] = Rational::one();
        }
        rows.push((row, Rational::one()));
    }
    let mut objective = zero_row();
    objective[t] = Rational::one();
    Ok(match maximize(&objective, &rows) {
        LpOutcome::Optimal { value, .. } => value.is_positive(),
        LpOutcome::Unbounded => unreachable!("t <= 1/2 on the cube"),
        LpOutcome::Infeasible => false,
    })
}

/// Weight function of the split `S_A`: `k` on vertices with `A ∩ K = ∅`, else 0.
pub fn split_weight_function(subset: Subset, k: usize, n: usize) -> Result<WeightFunction> {
    if !is_split_defining_subset(subset, k, n)? {
        return Err(Error::NotSplitDefining(subset));
    }
    Ok(subset_weight(subset, k, n))
}

pub(crate) fn subset_weight(subset: Subset, k: usize, n: usize) -> WeightFunction {
    WeightFunction::from_fn(k, n, |v| if v.is_disjoint(subset) { int(k as i64) } else { Rational::zero() })
        .expect("valid (k, n)")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(e: &[usize]) -> Subset {
        Subset::from_elements(e, 10).unwrap()
    }

    #[test]
    fn vertex_counts() {
        assert_eq!(hypersimplex_vertices(2, 4).unwrap().len(), 6);
        assert_eq!(hypersimplex_vertices(3, 6).unwrap().len(), 20);
        let simplex = hypersimplex_vertices(1, 5).unwrap();
        assert_eq!(simplex, (1..=5).map(Subset::singleton).collect::<Vec<_>>());
        assert!(hypersimplex_vertices(4, 4).is_err());
    }

    #[test]
    fn volumes_are_eulerian_numbers() {
        assert_eq!(hypersimplex_volume(1, 5), BigInt::from(1));
        assert_eq!(hypersimplex_volume(2, 4), BigInt::from(4));
        assert_eq!(hypersimplex_volume(2, 5), BigInt::from(11));
        assert_eq!(hypersimplex_volume(3, 6), BigInt::from(66));
    }

    #[test]
    fn split_defining_subsets() {
        assert!(is_split_defining_subset(sub(&[1, 2]), 2, 5).unwrap());
        assert!(!is_split_defining_subset(sub(&[1, 2, 3, 4]), 3, 6).unwrap());
        for n in 3..8 {
            for k in 1..n {
                assert!(!is_split_defining_subset(sub(&[1]), k, n).unwrap());
            }
        }
        assert!(is_split_defining_subset(Subset::EMPTY, 2, 5).is_err());
        assert!(is_split_defining_subset(Subset::full(5), 2, 5).is_err());
    }

    #[test]
    fn split_enumeration() {
        let splits = enumerate_hypersimplex_splits(2, 4);
        assert_eq!(splits.len(), 3);
        assert!(splits.iter().all(|s| s.mu() == 1 && s.a().len() == 2));
        assert!(enumerate_hypersimplex_splits(1, 5).is_empty());
        for n in 4..8 {
            for k in 2..n {
                let all = enumerate_hypersimplex_splits(k, n);
                for a in all_subsets(n).filter(|a| split_defining(*a, k, n)) {
                    assert!(all.contains(&HsSplit::from_subset(a, k, n).unwrap()));
                }
            }
        }
    }

    #[test]
    fn pair_compatibility_examples() {
        let (a, b, c) = (sub(&[1, 2]), sub(&[1, 2, 3]), sub(&[3, 4]));
        assert!(subset_splits_compatible(a, b, 3, 6));
        assert!(!subset_splits_compatible(a, c, 3, 6));
        assert!(subset_splits_compatible(a, c, 2, 6));
        let s = |x| HsSplit::from_subset(x, 3, 6).unwrap();
        assert!(hs_splits_compatible(s(a), s(b)).unwrap());
        assert!(!hs_splits_compatible(s(a), s(c)).unwrap());
        let t = HsSplit::from_subset(a, 2, 6).unwrap();
        assert!(hs_splits_compatible(s(a), t).is_err());
    }

    #[test]
    fn general_condition_matches_closed_form() {
        for n in 4..=7 {
            for k in 2..n {
                let defining: Vec<Subset> = all_subsets(n).filter(|a| split_defining(*a, k, n)).collect();
                for &a in &defining {
                    for &b in &defining {
                        let general = hs_splits_compatible(
                            HsSplit::from_subset(a, k, n).unwrap(),
                            HsSplit::from_subset(b, k, n).unwrap(),
                        )
                        .unwrap();
                        assert_eq!(general, subset_splits_compatible(a, b, k, n), "{a} {b} k={k} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn compatibility_is_representation_independent() {
        for s in enumerate_hypersimplex_splits(3, 7) {
            for t in enumerate_hypersimplex_splits(3, 7) {
                let flipped = HsSplit { a: s.b(), mu: 3 - s.mu, k: 3, n: 7 };
                assert_eq!(hs_splits_compatible(s, t).unwrap(), hs_splits_compatible(flipped, t).unwrap());
            }
        }
    }

    #[test]
    fn split_weight_values() {
        let w = split_weight_function(sub(&[3, 4]), 2, 4).unwrap();
        for v in ksubsets(2, 4) {
            let expected = if v == sub(&[1, 2]) { int(2) } else { int(0) };
            assert_eq!(w.get(v), &expected);
        }
        let w = split_weight_function(sub(&[1, 2, 3]), 3, 6).unwrap();
        assert_eq!(w.get(sub(&[4, 5, 6])), &int(3));
        assert_eq!(w.get(sub(&[1, 4, 5])), &int(0));
        assert!(split_weight_function(sub(&[1, 2, 3, 4]), 3, 6).is_err());
    }

    #[test]
    fn interior_meeting_examples() {
        assert!(hyperplanes_meet_interior(&[sub(&[1, 2])], 2, 4).unwrap());
        assert!(!hyperplanes_meet_interior(&[sub(&[1])], 2, 4).unwrap());
        assert!(hyperplanes_meet_interior(&[sub(&[1, 2]), sub(&[3, 4])], 3, 6).unwrap());
        assert!(!hyperplanes_meet_interior(&[sub(&[1, 2]), sub(&[1, 2, 3])], 3, 6).unwrap());
    }
}
