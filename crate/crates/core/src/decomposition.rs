//! Split indices and the split decomposition of a k-dissimilarity map.
//!
//! For a split-defining block `A`, the split `S_A` of `Δ(k, n)` is induced by
//! `w_{S_A}(K) = k` if `A ∩ K = ∅` and 0 otherwise, which is `k` times the
//! convex piecewise-linear function `max(0, 1 - Σ_A x)` on the vertices. The
//! coherency index of `w` with respect to `w_{S_A}` is therefore governed by
//! how much `Σ_w` bends along `H_A`:
//!
//! * if a maximal cell of `Σ_w` crosses `H_A`, the index is 0;
//! * otherwise `H_A` is a union of walls, and the index is `1/k` times the
//!   smallest bend, where the bend seen from a cell `C` on the side
//!   `Σ_A x <= 1` with a facet on `H_A` is
//!   `min (w(v) - ℓ_C(v)) / (|A ∩ v| - 1)` over vertices `v` beyond `H_A`.
//!
//! Subtracting `λ w_{S_A}` for `λ` up to that value keeps the lift convex,
//! and by more than that it breaks convexity across the flattest wall.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::dissimilarity::{split_dissimilarity, weight_of, weighted_split_sum, KDissimilarityMap, WeightFunction};
use crate::error::{Error, Result};
use crate::hypersimplex::{regular_subdivision, split_defining, Subdivision};
use crate::linalg::rank;
use crate::rational::{frac, int, Rational};
use crate::split::{Split, SplitSystem, WeightedSplitSystem};
use crate::subset::{binomial, ksubsets, Subset};

/// Coherency index of `w` with respect to the split weight `w_{S_A}`: the
/// largest `λ >= 0` with `(w - λ w_{S_A}) + λ w_{S_A}` coherent.
pub fn coherency_index(weights: &WeightFunction, subset: Subset) -> Result<Rational> {
    if !crate::hypersimplex::is_split_defining_subset(subset, weights.k(), weights.n())? {
        return Err(Error::NotSplitDefining(subset));
    }
    Ok(index_in(&regular_subdivision(weights), weights, subset))
}

/// Coherency index read off an already computed `Σ_w`.
pub(crate) fn index_in(subdivision: &Subdivision, weights: &WeightFunction, subset: Subset) -> Rational {
    let (k, n) = (subdivision.k(), subdivision.n());
    let mut best: Option<Rational> = None;
    let all: Vec<Subset> = ksubsets(k, n).collect();
    for cell in subdivision.cells() {
        let sizes = cell.vertices().iter().map(|v| v.intersection(subset).len());
        let (mut low, mut high) = (false, false);
        let mut on_wall = Vec::new();
        for (size, &v) in sizes.zip(cell.vertices()) {
            match size {
                0 => low = true,
                1 => on_wall.push(v),
                _ => high = true,
            }
        }
        if low && high {
            return Rational::zero();
        }
        if high || on_wall.len() + 1 < n {
            continue;
        }
        let rows: Vec<Vec<i128>> = on_wall.iter().map(|&v| crate::hypersimplex::subdivision_row(v, n)).collect();
        if rank(&rows, n).expect("0/1 rows") + 1 < n {
            continue;
        }
        let lift = cell.lift().expect("regular subdivision cells carry lifts");
        for &v in &all {
            let overlap = v.intersection(subset).len();
            if overlap >= 2 {
                let bend = (weights.get(v) - lift.evaluate(v)) / int(overlap as i64 - 1);
                if best.as_ref().is_none_or(|b| bend < *b) {
                    best = Some(bend);
                }
            }
        }
    }
    best.unwrap_or_else(Rational::zero) / int(k as i64)
}

/// Coherency index of `w_{δ^k_S}` along one of its split-defining blocks.
///
/// For `k = 2` both blocks bend along the same hyperplane and the
/// contributions add up to 1; for larger `k` each block contributes `1/k`.
fn unit_index(k: usize) -> Rational {
    if k == 2 {
        Rational::one()
    } else {
        frac(1, k as i64)
    }
}

fn defining_blocks(split: Split, k: usize) -> impl Iterator<Item = Subset> {
    let n = split.n();
    split.blocks().into_iter().filter(move |b| split_defining(*b, k, n))
}

/// Computes split indices of a fixed map, sharing one subdivision.
pub struct SplitIndexer {
    map: KDissimilarityMap,
    weights: WeightFunction,
    subdivision: Option<Subdivision>,
}

impl SplitIndexer {
    /// Uses the four-point isolation index for `k = 2` and the subdivision
    /// engine otherwise.
    pub fn new(map: &KDissimilarityMap) -> Self {
        if map.k() == 2 {
            SplitIndexer { map: map.clone(), weights: weight_of(map), subdivision: None }
        } else {
            Self::geometric(map)
        }
    }

    /// Always uses the subdivision engine.
    pub fn geometric(map: &KDissimilarityMap) -> Self {
        let weights = weight_of(map);
        let subdivision = Some(regular_subdivision(&weights));
        SplitIndexer { map: map.clone(), weights, subdivision }
    }

    pub fn map(&self) -> &KDissimilarityMap {
        &self.map
    }

    /// `α_S^D` for a nontrivial split.
    pub fn index(&self, split: Split) -> Result<Rational> {
        if split.n() != self.map.n() {
            return Err(Error::DimensionMismatch {
                k1: self.map.k(),
                n1: self.map.n(),
                k2: self.map.k(),
                n2: split.n(),
            });
        }
        if split.is_trivial() {
            return Err(Error::TrivialSplit(split));
        }
        let Some(subdivision) = &self.subdivision else {
            return isolation_index(&self.map, split);
        };
        let k = self.map.k();
        let unit = unit_index(k);
        Ok(defining_blocks(split, k)
            .map(|b| index_in(subdivision, &self.weights, b) / &unit)
            .min()
            .unwrap_or_else(Rational::zero))
    }
}

/// Split index `α_S^D` of a nontrivial split, computed geometrically.
///
/// It is the minimum over the split-defining blocks `B` of `S` of the
/// coherency index of `w_D` along `H_B`, normalized so that `δ^k_S` itself has
/// index 1. Splits with no split-defining block (both blocks smaller than
/// `k`) have index 0, since `δ^k_S` is then constant.
pub fn nontrivial_split_index(map: &KDissimilarityMap, split: Split) -> Result<Rational> {
    if split.is_trivial() {
        return Err(Error::TrivialSplit(split));
    }
    SplitIndexer::geometric(map).index(split)
}

fn pair(map: &KDissimilarityMap, x: usize, y: usize) -> Rational {
    if x == y {
        Rational::zero()
    } else {
        map.get(Subset::singleton(x).insert(y)).clone()
    }
}

fn four_point_term(map: &KDissimilarityMap, a: usize, a2: usize, b: usize, b2: usize) -> Rational {
    let s1 = pair(map, a, b) + pair(map, a2, b2);
    let s2 = pair(map, a, b2) + pair(map, a2, b);
    let s3 = pair(map, a, a2) + pair(map, b, b2);
    let top = s1.max(s2).max(s3);
    (top - pair(map, a, a2) - pair(map, b, b2)) / int(2)
}

/// Bandelt–Dress isolation index of a split for `k = 2`, with `a = a'` and
/// `b = b'` allowed and `d(x, x) = 0`.
///
/// On metrics this coincides with [`isolation_index`]; on arbitrary maps the
/// degenerate quadruples can make it smaller.
pub fn bandelt_dress_isolation_index(map: &KDissimilarityMap, split: Split) -> Result<Rational> {
    if map.k() != 2 {
        return Err(Error::RequiresKTwo(map.k()));
    }
    if split.is_trivial() {
        return Err(Error::TrivialSplit(split));
    }
    let (a_block, b_block) = (split.block_a().elements(), split.block_b().elements());
    let mut best: Option<Rational> = None;
    for &a in &a_block {
        for &a2 in &a_block {
            for &b in &b_block {
                for &b2 in &b_block {
                    let t = four_point_term(map, a, a2, b, b2);
                    if best.as_ref().is_none_or(|x| t < *x) {
                        best = Some(t);
                    }
                }
            }
        }
    }
    Ok(best.expect("nonempty blocks"))
}

/// Four-point isolation index for `k = 2`: as
/// [`bandelt_dress_isolation_index`] but over `a != a'` and `b != b'` only.
///
/// This equals the geometric split index for every `k = 2` map.
pub fn isolation_index(map: &KDissimilarityMap, split: Split) -> Result<Rational> {
    if map.k() != 2 {
        return Err(Error::RequiresKTwo(map.k()));
    }
    if split.is_trivial() {
        return Err(Error::TrivialSplit(split));
    }
    let (a_block, b_block) = (split.block_a().elements(), split.block_b().elements());
    let mut best: Option<Rational> = None;
    for (i, &a) in a_block.iter().enumerate() {
        for &a2 in &a_block[i + 1..] {
            for (j, &b) in b_block.iter().enumerate() {
                for &b2 in &b_block[j + 1..] {
                    let t = four_point_term(map, a, a2, b, b2);
                    if best.as_ref().is_none_or(|x| t < *x) {
                        best = Some(t);
                    }
                }
            }
        }
    }
    Ok(best.expect("both blocks have two elements"))
}

/// Trivial split index of element `a`:
/// `½ min D(L+a+b) + D(L+a+c) - D(L+b+c)` over `L` of size `k - 2` avoiding
/// `a` and distinct `b, c` outside `L ∪ {a}`.
///
/// Meant for maps already free of nontrivial splits; the value may be negative.
pub fn trivial_split_index_paper(map: &KDissimilarityMap, a: usize) -> Result<Rational> {
    let (k, n) = (map.k(), map.n());
    if a == 0 || a > n {
        return Err(Error::ElementOutOfRange { element: a, n });
    }
    if n < k + 1 {
        return Err(Error::GroundSetTooSmall { n, k, required: k + 1 });
    }
    let rest = Subset::full(n).remove(a);
    let mut best: Option<Rational> = None;
    for l in ksubsets(k - 2, n).filter(|l| l.is_subset_of(rest)) {
        let others: Vec<usize> = rest.difference(l).elements();
        let with_a = l.insert(a);
        for (i, &b) in others.iter().enumerate() {
            for &c in &others[i + 1..] {
                let t = map.get(with_a.insert(b)) + map.get(with_a.insert(c)) - map.get(l.insert(b).insert(c));
                if best.as_ref().is_none_or(|x| t < *x) {
                    best = Some(t);
                }
            }
        }
    }
    Ok(best.expect("n >= k + 1 leaves two candidates") / int(2))
}

/// Projection of `D` onto the span of the trivial split maps `δ^k_{S_a}`.
///
/// Returns the coefficients `c_1, ..., c_n` and the remainder
/// `D - Σ_a c_a δ^k_{S_a}`, which is orthogonal to every `δ^k_{S_a}`.
pub fn trivial_projection(map: &KDissimilarityMap) -> (Vec<Rational>, KDissimilarityMap) {
    let (k, n) = (map.k(), map.n());
    // Gram matrix alpha I + beta J with alpha = C(n-2, k-1), beta = C(n-2, k-2)
    let alpha = int(binomial(n - 2, k - 1) as i64);
    let beta = int(binomial(n - 2, k - 2) as i64);
    let mut moments = alloc::vec![Rational::zero(); n];
    for (s, v) in map.iter() {
        for a in s.iter() {
            moments[a - 1] += v;
        }
    }
    let total: Rational = moments.iter().sum();
    let shift = &beta * &total / (&alpha + &beta * int(n as i64));
    let coefficients: Vec<Rational> = moments.iter().map(|m| (m - &shift) / &alpha).collect();
    let remainder = KDissimilarityMap::from_fn(k, n, |s| {
        let fitted: Rational = s.iter().map(|a| &coefficients[a - 1]).sum();
        map.get(s) - fitted
    })
    .expect("same shape");
    (coefficients, remainder)
}

/// How trivial split indices are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TrivialMode {
    /// The closed formula of [`trivial_split_index_paper`], evaluated on the
    /// map with nontrivial parts removed.
    #[default]
    Paper,
    /// Exact coordinates from [`trivial_projection`].
    Projection,
}

/// `D = D₀ + Σ_S α_S δ^k_S + Σ_a α_a δ^k_{S_a}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitDecomposition {
    /// Nontrivial splits with positive index.
    pub nontrivial: WeightedSplitSystem,
    /// `α_a` for `a = 1..n`, stored at `a - 1`.
    pub trivial: Vec<Rational>,
    pub residual: KDissimilarityMap,
    pub source: KDissimilarityMap,
    pub mode: TrivialMode,
}

impl SplitDecomposition {
    /// Assembles a decomposition from precomputed nontrivial indices.
    ///
    /// Zero indices are dropped; negative ones are rejected.
    pub fn assemble(
        map: &KDissimilarityMap,
        indices: impl IntoIterator<Item = (Split, Rational)>,
        mode: TrivialMode,
    ) -> Result<Self> {
        let mut nontrivial = WeightedSplitSystem::new();
        for (split, alpha) in indices {
            if alpha.is_negative() {
                return Err(Error::NonPositiveWeight(split));
            }
            if !alpha.is_zero() {
                nontrivial.insert(split, alpha)?;
            }
        }
        let (k, n) = (map.k(), map.n());
        let stripped = map.add_scaled(&weighted_split_sum(k, n, nontrivial.iter())?, &-Rational::one())?;
        let (trivial, residual) = match mode {
            TrivialMode::Projection => trivial_projection(&stripped),
            TrivialMode::Paper => {
                let trivial: Vec<Rational> =
                    (1..=n).map(|a| trivial_split_index_paper(&stripped, a)).collect::<Result<_>>()?;
                let residual = KDissimilarityMap::from_fn(k, n, |s| {
                    stripped.get(s) - s.iter().map(|a| &trivial[a - 1]).sum::<Rational>()
                })?;
                (trivial, residual)
            }
        };
        Ok(SplitDecomposition { nontrivial, trivial, residual, source: map.clone(), mode })
    }

    /// `residual + Σ α_S δ_S + Σ α_a δ_{S_a}`; equals `source` exactly.
    pub fn recompose(&self) -> KDissimilarityMap {
        let (k, n) = (self.source.k(), self.source.n());
        let splits = weighted_split_sum(k, n, self.nontrivial.iter()).expect("same ground set");
        KDissimilarityMap::from_fn(k, n, |s| {
            self.residual.get(s) + splits.get(s) + s.iter().map(|a| &self.trivial[a - 1]).sum::<Rational>()
        })
        .expect("same shape")
    }

    /// Splits with positive index, trivial ones included.
    pub fn support(&self) -> SplitSystem {
        let n = self.source.n();
        let mut splits: Vec<Split> = self.nontrivial.iter().map(|(s, _)| *s).collect();
        for (i, alpha) in self.trivial.iter().enumerate() {
            if alpha.is_positive() {
                splits.push(Split::trivial(i + 1, n).expect("element in range"));
            }
        }
        SplitSystem::new(splits).expect("same ground set")
    }
}

/// Split decomposition with the closed trivial-index formula.
pub fn split_decompose(map: &KDissimilarityMap) -> SplitDecomposition {
    split_decompose_with(map, TrivialMode::Paper)
}

/// Split decomposition with a chosen trivial-index mode.
pub fn split_decompose_with(map: &KDissimilarityMap, mode: TrivialMode) -> SplitDecomposition {
    let indexer = SplitIndexer::new(map);
    let indices = Split::all_nontrivial(map.n())
        .into_iter()
        .map(|s| (s, indexer.index(s).expect("nontrivial split on the same ground set")));
    SplitDecomposition::assemble(map, indices, mode).expect("split indices are nonnegative")
}

/// `true` iff every nontrivial split index and every trivial index (closed
/// formula) is exactly zero.
pub fn is_split_prime(map: &KDissimilarityMap) -> bool {
    let indexer = SplitIndexer::new(map);
    Split::all_nontrivial(map.n()).into_iter().all(|s| indexer.index(s).expect("nontrivial").is_zero())
        && (1..=map.n()).all(|a| trivial_split_index_paper(map, a).expect("element in range").is_zero())
}

/// `S_D`, the splits with positive index.
pub fn support_splits(map: &KDissimilarityMap) -> SplitSystem {
    split_decompose(map).support()
}

/// `δ^k_S` scaled by `weight`, a convenience for building test maps.
pub fn weighted_split_map(split: Split, k: usize, weight: &Rational) -> Result<KDissimilarityMap> {
    Ok(split_dissimilarity(split, k)?.scale(weight))
}
