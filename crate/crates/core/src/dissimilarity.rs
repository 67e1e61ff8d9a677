//! k-dissimilarity maps and weight functions on hypersimplex vertices.

use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::split::Split;
use crate::subset::{binomial, ksubset_rank, ksubsets, rank_unchecked, GroundSet, Subset};

/// A rational function on the k-subsets of `{1..n}`, indexed by colex rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KDissimilarityMap {
    n: usize,
    k: usize,
    values: Vec<Rational>,
}

fn check_map_kn(k: usize, n: usize) -> Result<()> {
    GroundSet::new(n)?;
    if k < 2 || k >= n {
        return Err(Error::KOutOfRange { k, n });
    }
    Ok(())
}

fn check_len(len: usize, k: usize, n: usize) -> Result<()> {
    let expected = binomial(n, k);
    if len != expected {
        return Err(Error::LengthMismatch { expected, got: len });
    }
    Ok(())
}

impl KDissimilarityMap {
    /// Requires `2 <= k < n` and exactly `C(n, k)` values in rank order.
    pub fn new(k: usize, n: usize, values: Vec<Rational>) -> Result<Self> {
        check_map_kn(k, n)?;
        check_len(values.len(), k, n)?;
        Ok(KDissimilarityMap { n, k, values })
    }

    pub fn zero(k: usize, n: usize) -> Result<Self> {
        Self::from_fn(k, n, |_| Rational::zero())
    }

    pub fn constant(k: usize, n: usize, c: Rational) -> Result<Self> {
        Self::from_fn(k, n, |_| c.clone())
    }

    /// Evaluates `f` on every k-subset in rank order.
    pub fn from_fn(k: usize, n: usize, f: impl FnMut(Subset) -> Rational) -> Result<Self> {
        check_map_kn(k, n)?;
        Ok(KDissimilarityMap { n, k, values: ksubsets(k, n).map(f).collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `D(K)`. Panics if `K` is not a k-subset of `{1..n}`.
    pub fn get(&self, subset: Subset) -> &Rational {
        debug_assert_eq!(subset.len(), self.k);
        &self.values[rank_unchecked(subset)]
    }

    pub fn try_get(&self, subset: Subset) -> Result<&Rational> {
        Ok(&self.values[ksubset_rank(subset, self.k, self.n)?])
    }

    /// Replaces the value at rank `rank`.
    pub fn set_rank(&mut self, rank: usize, value: Rational) {
        self.values[rank] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (Subset, &Rational)> {
        ksubsets(self.k, self.n).zip(self.values.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let values = self.values.iter().map(|v| v * factor).collect();
        KDissimilarityMap { values, ..*self }
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, other: &Self, factor: &Rational) -> Result<Self> {
        self.same_shape(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b * factor).collect();
        Ok(KDissimilarityMap { values, ..*self })
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::DimensionMismatch { k1: self.k, n1: self.n, k2: other.k, n2: other.n });
        }
        Ok(())
    }

    /// Weight function on the vertices of the hypersimplex (`w_D = -D`).
    pub fn to_weight(&self) -> WeightFunction {
        weight_of(self)
    }
}

impl Add for &KDissimilarityMap {
    type Output = KDissimilarityMap;

    /// Panics on mismatched shapes; use [`KDissimilarityMap::add_scaled`] to get an error.
    fn add(self, rhs: Self) -> KDissimilarityMap {
        self.add_scaled(rhs, &Rational::one()).expect("maps of different shape")
    }
}

impl Sub for &KDissimilarityMap {
    type Output = KDissimilarityMap;

    fn sub(self, rhs: Self) -> KDissimilarityMap {
        self.add_scaled(rhs, &-Rational::one()).expect("maps of different shape")
    }
}

/// Heights on the vertices of `Δ(k, n)`, indexed by colex rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightFunction {
    n: usize,
    k: usize,
    heights: Vec<Rational>,
}

impl WeightFunction {
    /// Requires `1 <= k < n` and `C(n, k)` heights.
    pub fn new(k: usize, n: usize, heights: Vec<Rational>) -> Result<Self> {
        GroundSet::new(n)?;
        if k == 0 || k >= n {
            return Err(Error::KOutOfRange { k, n });
        }
        check_len(heights.len(), k, n)?;
        Ok(WeightFunction { n, k, heights })
    }

    pub fn from_fn(k: usize, n: usize, f: impl FnMut(Subset) -> Rational) -> Result<Self> {
        let heights = ksubsets(k, n).map(f).collect();
        Self::new(k, n, heights)
    }

    pub fn zero(k: usize, n: usize) -> Result<Self> {
        Self::from_fn(k, n, |_| Rational::zero())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn heights(&self) -> &[Rational] {
        &self.heights
    }

    pub fn get(&self, vertex: Subset) -> &Rational {
        &self.heights[rank_unchecked(vertex)]
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let heights = self.heights.iter().map(|v| v * factor).collect();
        WeightFunction { heights, ..*self }
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, other: &Self, factor: &Rational) -> Result<Self> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::DimensionMismatch { k1: self.k, n1: self.n, k2: other.k, n2: other.n });
        }
        let heights = self.heights.iter().zip(&other.heights).map(|(a, b)| a + b * factor).collect();
        Ok(WeightFunction { heights, ..*self })
    }

    /// Inverse of [`weight_of`]; needs `k >= 2`.
    pub fn to_map(&self) -> Result<KDissimilarityMap> {
        KDissimilarityMap::new(self.k, self.n, self.heights.iter().map(Neg::neg).collect())
    }
}

/// `w_D(K) = -D(K)`.
pub fn weight_of(map: &KDissimilarityMap) -> WeightFunction {
    WeightFunction { n: map.n, k: map.k, heights: map.values.iter().map(Neg::neg).collect() }
}

/// The split k-dissimilarity `δ^k_S`: 1 on k-subsets meeting both blocks, 0 otherwise.
pub fn split_dissimilarity(split: Split, k: usize) -> Result<KDissimilarityMap> {
    KDissimilarityMap::from_fn(k, split.n(), |s| if split.separates(s) { Rational::one() } else { Rational::zero() })
}

/// `S(i)`, the block of `split` containing `i`.
pub fn split_restriction(split: Split, i: usize) -> Result<Subset> {
    split.restriction(i)
}

/// `Σ_S λ_S δ^k_S` over the given pairs, on `{1..n}`.
pub fn weighted_split_sum<'a>(
    k: usize,
    n: usize,
    terms: impl IntoIterator<Item = (&'a Split, &'a Rational)>,
) -> Result<KDissimilarityMap> {
    let mut out = KDissimilarityMap::zero(k, n)?;
    for (split, weight) in terms {
        if split.n() != n {
            return Err(Error::DimensionMismatch { k1: k, n1: n, k2: k, n2: split.n() });
        }
        for (value, s) in out.values.iter_mut().zip(ksubsets(k, n)) {
            if split.separates(s) {
                *value += weight;
            }
        }
    }
    Ok(out)
}
