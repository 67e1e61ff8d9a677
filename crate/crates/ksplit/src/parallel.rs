//! Parallel split-index drivers.
//!
//! Indices are computed on a bounded rayon pool and collected in the
//! canonical split order, so results do not depend on the worker count.

use ksplit_core::decomposition::{SplitDecomposition, SplitIndexer, TrivialMode};
use ksplit_core::trees::{reconstruct_from_indices, PhyloTree, ReconstructionFailure};
use ksplit_core::{KDissimilarityMap, Rational, Split};
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

/// A pool with `jobs` workers; `0` lets rayon choose.
pub fn pool(jobs: usize) -> ThreadPool {
    ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool")
}

/// `α_S^D` for every nontrivial split, in canonical order.
pub fn split_indices(map: &KDissimilarityMap, jobs: usize) -> Vec<(Split, Rational)> {
    let indexer = SplitIndexer::new(map);
    let splits = Split::all_nontrivial(map.n());
    pool(jobs).install(|| {
        splits.par_iter().map(|&s| (s, indexer.index(s).expect("nontrivial split on the same ground set"))).collect()
    })
}

/// Split decomposition with indices computed in parallel.
pub fn decompose(map: &KDissimilarityMap, mode: TrivialMode, jobs: usize) -> ksplit_core::Result<SplitDecomposition> {
    SplitDecomposition::assemble(map, split_indices(map, jobs), mode)
}

/// Tree reconstruction with indices computed in parallel.
#[allow(clippy::result_large_err)]
pub fn reconstruct(map: &KDissimilarityMap, jobs: usize) -> Result<PhyloTree, ReconstructionFailure> {
    reconstruct_from_indices(map, split_indices(map, jobs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ksplit_core::decomposition::split_decompose_with;
    use ksplit_core::rational::frac;

    #[test]
    fn worker_count_does_not_change_results() {
        let map = KDissimilarityMap::from_fn(3, 6, |s| frac((s.0 as i64 * 37) % 11, 1 + (s.0 as i64 % 3))).unwrap();
        let serial = split_decompose_with(&map, TrivialMode::Paper);
        for jobs in [1, 2, 4] {
            assert_eq!(decompose(&map, TrivialMode::Paper, jobs).unwrap(), serial, "jobs = {jobs}");
        }
    }
}
