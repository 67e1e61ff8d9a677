//! Recovering a tree from its k-dissimilarity map.

#![allow(clippy::result_large_err)]

use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use super::{k_dissimilarity_from_tree, tree_from_weighted_splits, PhyloTree};
use crate::compatibility::splits_compatible;
use crate::decomposition::{trivial_projection, SplitIndexer};
use crate::dissimilarity::{weighted_split_sum, KDissimilarityMap};
use crate::rational::Rational;
use crate::split::{Split, WeightedSplitSystem};
use crate::subset::Subset;

/// Pipeline stage at which reconstruction stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReconstructionStage {
    Size,
    Compatibility,
    Remainder,
    Positivity,
    Assembly,
    Verification,
}

impl fmt::Display for ReconstructionStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReconstructionStage::Size => "size",
            ReconstructionStage::Compatibility => "compatibility",
            ReconstructionStage::Remainder => "remainder",
            ReconstructionStage::Positivity => "positivity",
            ReconstructionStage::Assembly => "assembly",
            ReconstructionStage::Verification => "verification",
        })
    }
}

/// Why a map is not the k-dissimilarity map of a tree, with a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReconstructionFailure {
    /// Splits are only recoverable for `n >= 2k - 1`.
    GroundSetTooSmall { n: usize, k: usize },
    /// Two support splits are not compatible.
    IncompatibleSupport(Split, Split),
    /// The map minus its split part is not a combination of trivial splits.
    NonzeroRemainder { subset: Subset, value: Rational },
    /// A pendant weight is zero or negative.
    NonPositivePendant { element: usize, weight: Rational },
    /// The splits could not be assembled into a tree.
    Assembly(crate::Error),
    /// The assembled tree does not reproduce the map.
    Mismatch { subset: Subset, expected: Rational, got: Rational },
}

impl ReconstructionFailure {
    pub fn stage(&self) -> ReconstructionStage {
        match self {
            ReconstructionFailure::GroundSetTooSmall { .. } => ReconstructionStage::Size,
            ReconstructionFailure::IncompatibleSupport(..) => ReconstructionStage::Compatibility,
            ReconstructionFailure::NonzeroRemainder { .. } => ReconstructionStage::Remainder,
            ReconstructionFailure::NonPositivePendant { .. } => ReconstructionStage::Positivity,
            ReconstructionFailure::Assembly(_) => ReconstructionStage::Assembly,
            ReconstructionFailure::Mismatch { .. } => ReconstructionStage::Verification,
        }
    }
}

impl fmt::Display for ReconstructionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReconstructionFailure::GroundSetTooSmall { n, k } => {
                write!(f, "n = {n} is below 2k - 1 = {} for k = {k}", 2 * k - 1)
            }
            ReconstructionFailure::IncompatibleSupport(s, t) => {
                write!(f, "support splits {s} and {t} are incompatible")
            }
            ReconstructionFailure::NonzeroRemainder { subset, value } => {
                write!(f, "remainder is {value} on {subset}")
            }
            ReconstructionFailure::NonPositivePendant { element, weight } => {
                write!(f, "pendant weight of leaf {element} is {weight}")
            }
            ReconstructionFailure::Assembly(e) => write!(f, "{e}"),
            ReconstructionFailure::Mismatch { subset, expected, got } => {
                write!(f, "tree gives {got} on {subset}, map has {expected}")
            }
        }
    }
}

/// Reconstructs the tree `T` with `D = D^k_T`, or explains why none exists.
pub fn reconstruct_tree(map: &KDissimilarityMap) -> Result<PhyloTree, ReconstructionFailure> {
    check_size(map)?;
    let indexer = SplitIndexer::new(map);
    let indices = Split::all_nontrivial(map.n()).into_iter().map(|s| {
        let alpha = indexer.index(s).expect("nontrivial split on the same ground set");
        (s, alpha)
    });
    reconstruct_from_indices(map, indices)
}

fn check_size(map: &KDissimilarityMap) -> Result<(), ReconstructionFailure> {
    let (k, n) = (map.k(), map.n());
    if n + 1 < 2 * k {
        return Err(ReconstructionFailure::GroundSetTooSmall { n, k });
    }
    Ok(())
}

/// Reconstruction from precomputed nontrivial split indices.
pub fn reconstruct_from_indices(
    map: &KDissimilarityMap,
    indices: impl IntoIterator<Item = (Split, Rational)>,
) -> Result<PhyloTree, ReconstructionFailure> {
    check_size(map)?;
    let (k, n) = (map.k(), map.n());
    let support: Vec<(Split, Rational)> = indices.into_iter().filter(|(_, a)| !a.is_zero()).collect();
    for (i, (s, _)) in support.iter().enumerate() {
        for (t, _) in &support[i + 1..] {
            if !splits_compatible(*s, *t).expect("same ground set") {
                return Err(ReconstructionFailure::IncompatibleSupport(*s, *t));
            }
        }
    }
    let mut system =
        WeightedSplitSystem::from_pairs(support.iter().cloned()).map_err(ReconstructionFailure::Assembly)?;
    let split_part = weighted_split_sum(k, n, system.iter()).expect("same ground set");
    let residual = map.add_scaled(&split_part, &-Rational::one()).expect("same shape");
    let (pendants, remainder) = trivial_projection(&residual);
    if let Some((subset, value)) = remainder.iter().find(|(_, v)| !v.is_zero()) {
        return Err(ReconstructionFailure::NonzeroRemainder { subset, value: value.clone() });
    }
    for (i, c) in pendants.iter().enumerate() {
        if !c.is_positive() {
            return Err(ReconstructionFailure::NonPositivePendant { element: i + 1, weight: c.clone() });
        }
        let trivial = Split::trivial(i + 1, n).expect("element in range");
        system.insert(trivial, c.clone()).map_err(ReconstructionFailure::Assembly)?;
    }
    let tree = tree_from_weighted_splits(&system).map_err(ReconstructionFailure::Assembly)?;
    let rebuilt = k_dissimilarity_from_tree(&tree, k).map_err(ReconstructionFailure::Assembly)?;
    if let Some(((subset, expected), (_, got))) = map.iter().zip(rebuilt.iter()).find(|((_, a), (_, b))| a != b) {
        return Err(ReconstructionFailure::Mismatch { subset, expected: expected.clone(), got: got.clone() });
    }
    Ok(tree)
}

/// The tree realizing `D`, if there is one.
pub fn is_tree_realizable(map: &KDissimilarityMap) -> Option<PhyloTree> {
    reconstruct_tree(map).ok()
}
