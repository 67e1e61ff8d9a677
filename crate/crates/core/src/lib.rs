//! Exact split decomposition of k-dissimilarity maps.
//!
//! A k-dissimilarity map assigns a value to every k-element subset of
//! `X = {1, ..., n}`. Identifying k-subsets with the vertices of the
//! hypersimplex `Δ(k, n)`, every such map induces a regular subdivision of
//! `Δ(k, n)`, and the splits of that subdivision yield a canonical
//! decomposition of the map into split k-dissimilarities plus a split-prime
//! remainder. This crate computes that decomposition with exact rational
//! arithmetic, decides k-weak compatibility of split systems, and
//! reconstructs phylogenetic trees from their k-dissimilarity maps.
//!
//! The crate is `no_std` and only needs `alloc`. JSON file formats, parallel
//! drivers and the command-line front end live in the companion `ksplit`
//! crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod bitset;
pub mod compatibility;
mod dd;
pub mod decomposition;
pub mod dissimilarity;
mod error;
pub mod hypersimplex;
mod linalg;
pub mod lp;
pub mod rational;
pub mod split;
pub mod subset;
pub mod trees;

pub use crate::dissimilarity::{weight_of, KDissimilarityMap, WeightFunction};
pub use crate::error::{Error, Result};
pub use crate::rational::Rational;
pub use crate::split::{Split, SplitSystem, WeightedSplitSystem};
pub use crate::subset::{binomial, ksubset_rank, ksubset_unrank, GroundSet, Subset};
