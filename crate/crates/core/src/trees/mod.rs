//! Phylogenetic trees and their k-dissimilarity maps.
//!
//! Leaves are the vertices `0..n` and carry the labels `1..=n`; internal
//! vertices follow. Trees are unrooted.

mod newick;
mod reconstruct;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::compatibility::splits_compatible;
use crate::dissimilarity::{weighted_split_sum, KDissimilarityMap};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::split::{Split, WeightedSplitSystem};
use crate::subset::{Subset, MAX_N};

pub use newick::{emit_newick, parse_newick};
pub use reconstruct::{
    is_tree_realizable, reconstruct_from_indices, reconstruct_tree, ReconstructionFailure, ReconstructionStage,
};

/// A weighted edge between two vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Rational,
}

/// An unrooted tree with leaves labelled `1..=n`, no degree-2 vertices and
/// positive edge weights.
#[derive(Clone, Debug)]
pub struct PhyloTree {
    n: usize,
    edges: Vec<Edge>,
    /// `(neighbour, edge index)` per vertex.
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl PhyloTree {
    /// Builds a tree on `n` labelled leaves (vertices `0..n`) from its edges.
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        let invalid = |msg: alloc::string::String| Err(Error::InvalidTree(msg));
        if !(2..=MAX_N).contains(&n) {
            return Err(Error::GroundSetSize(n));
        }
        let vertices = edges.len() + 1;
        if vertices < n {
            return invalid(format!("{} edges cannot connect {n} leaves", edges.len()));
        }
        let mut adjacency = alloc::vec![Vec::new(); vertices];
        for (i, e) in edges.iter().enumerate() {
            if e.u >= vertices || e.v >= vertices || e.u == e.v {
                return invalid(format!("edge {}-{} is out of range or a loop", e.u, e.v));
            }
            if !e.weight.is_positive() {
                return invalid(format!("edge {}-{} has non-positive weight {}", e.u, e.v, e.weight));
            }
            adjacency[e.u].push((e.v, i));
            adjacency[e.v].push((e.u, i));
        }
        for (x, nbrs) in adjacency.iter().enumerate() {
            match (x < n, nbrs.len()) {
                (true, 1) => {}
                (true, d) => return invalid(format!("leaf {} has degree {d}", x + 1)),
                (false, d) if d >= 3 => {}
                (false, d) => return invalid(format!("internal vertex {x} has degree {d}")),
            }
        }
        let tree = PhyloTree { n, edges, adjacency };
        if tree.preorder().len() != vertices {
            return invalid("tree is not connected".into());
        }
        Ok(tree)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbours(&self, vertex: usize) -> impl Iterator<Item = (usize, &Rational)> {
        self.adjacency[vertex].iter().map(|&(w, e)| (w, &self.edges[e].weight))
    }

    /// Internal edges, i.e. edges not incident to a leaf.
    pub fn internal_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.u >= self.n && e.v >= self.n).count()
    }

    /// Vertices in depth-first order from leaf 1, with parent and parent edge.
    fn preorder(&self) -> Vec<(usize, Option<(usize, usize)>)> {
        let mut seen = alloc::vec![false; self.adjacency.len()];
        let mut order = Vec::with_capacity(self.adjacency.len());
        let mut stack = alloc::vec![(0usize, None)];
        seen[0] = true;
        while let Some((v, parent)) = stack.pop() {
            order.push((v, parent));
            for &(w, e) in self.adjacency[v].iter().rev() {
                if !seen[w] {
                    seen[w] = true;
                    stack.push((w, Some((v, e))));
                }
            }
        }
        order
    }

    /// Leaves below each vertex when the tree hangs from leaf 1, and the
    /// parent edge of each vertex.
    fn clusters(&self) -> (Vec<Subset>, Vec<Option<(usize, usize)>>) {
        let order = self.preorder();
        let mut below = alloc::vec![Subset::default(); self.adjacency.len()];
        let mut parent = alloc::vec![None; self.adjacency.len()];
        for &(v, p) in order.iter().rev() {
            if v < self.n && v != 0 {
                below[v] = below[v].insert(v + 1);
            }
            parent[v] = p;
            if let Some((u, _)) = p {
                below[u] = below[u].union(below[v]);
            }
        }
        (below, parent)
    }

    /// `true` iff both trees have the same splits with the same weights.
    pub fn is_isomorphic(&self, other: &PhyloTree) -> bool {
        self.n == other.n && tree_splits(self) == tree_splits(other)
    }
}

/// One split per edge, weighted by the edge length.
pub fn tree_splits(tree: &PhyloTree) -> WeightedSplitSystem {
    let (below, parent) = tree.clusters();
    let mut system = WeightedSplitSystem::new();
    for (v, p) in parent.iter().enumerate() {
        if let Some((_, e)) = p {
            let split = Split::new(below[v], tree.n).expect("edge clusters are proper");
            system.insert(split, tree.edges[*e].weight.clone()).expect("edge weights are positive");
        }
    }
    system
}

/// `D^k_T(K)`: total length of the subtree spanned by `K`.
///
/// Computed from Steiner subtrees and checked against
/// `Σ_e l(e) δ^k_{S_e}`.
pub fn k_dissimilarity_from_tree(tree: &PhyloTree, k: usize) -> Result<KDissimilarityMap> {
    let n = tree.n;
    if k < 2 || k >= n {
        return Err(Error::KOutOfRange { k, n });
    }
    let order = tree.preorder();
    let mut parent = alloc::vec![None; tree.vertex_count()];
    let mut depth = alloc::vec![0usize; tree.vertex_count()];
    for &(v, p) in &order {
        parent[v] = p;
        if let Some((u, _)) = p {
            depth[v] = depth[u] + 1;
        }
    }
    let steiner = KDissimilarityMap::from_fn(k, n, |subset| {
        let mut used = alloc::vec![false; tree.edges.len()];
        let mut members = subset.iter().map(|a| a - 1);
        let anchor = members.next().expect("k >= 2");
        for leaf in members {
            // walk both ends up to their meeting point
            let (mut x, mut y) = (anchor, leaf);
            while x != y {
                if depth[x] < depth[y] {
                    core::mem::swap(&mut x, &mut y);
                }
                let (up, e) = parent[x].expect("non-root vertex");
                used[e] = true;
                x = up;
            }
        }
        used.iter().zip(&tree.edges).filter(|(u, _)| **u).map(|(_, e)| &e.weight).sum()
    })?;
    let splits = tree_splits(tree);
    let by_splits = weighted_split_sum(k, n, splits.iter())?;
    assert_eq!(steiner, by_splits, "Steiner lengths disagree with the split sum");
    Ok(steiner)
}

/// The tree whose edges are the given splits with their weights.
///
/// The splits must be pairwise compatible and contain every trivial split.
pub fn tree_from_weighted_splits(system: &WeightedSplitSystem) -> Result<PhyloTree> {
    let splits: Vec<(Split, Rational)> = system.iter().map(|(s, w)| (*s, w.clone())).collect();
    let Some(n) = splits.first().map(|(s, _)| s.n()) else {
        return Err(Error::MissingTrivialSplit(1));
    };
    for (i, (s, _)) in splits.iter().enumerate() {
        for (t, _) in &splits[i + 1..] {
            if !splits_compatible(*s, *t)? {
                return Err(Error::IncompatibleSplits(*s, *t));
            }
        }
    }
    let weights: BTreeMap<Split, Rational> = splits.iter().cloned().collect();
    let mut pendant = Vec::with_capacity(n);
    for a in 1..=n {
        let t = Split::trivial(a, n)?;
        pendant.push(weights.get(&t).cloned().ok_or(Error::MissingTrivialSplit(a))?);
    }
    if n == 2 {
        return PhyloTree::new(2, alloc::vec![Edge { u: 0, v: 1, weight: pendant[0].clone() }]);
    }
    // hang everything from leaf 1; vertex n is the centre of the initial star
    let centre = n;
    let mut parent: Vec<usize> = (0..n).map(|_| centre).collect();
    parent.push(usize::MAX);
    let mut weight: Vec<Rational> = pendant.clone();
    weight.push(Rational::zero());
    let mut below: Vec<Subset> = (0..n).map(|v| Subset::singleton(v + 1)).collect();
    below.push(Subset::full(n).remove(1));
    below[0] = Subset::default();

    let mut internal: Vec<(Split, Rational)> = splits.into_iter().filter(|(s, _)| !s.is_trivial()).collect();
    internal.sort_by_key(|(s, _)| core::cmp::Reverse(s.block_a().len()));
    for (split, w) in internal {
        let block = split.block_a();
        // the smallest cluster containing the block is where it attaches
        let host = (n..parent.len())
            .filter(|&v| block.is_subset_of(below[v]))
            .min_by_key(|&v| below[v].len())
            .expect("the centre contains every block avoiding 1");
        let children: Vec<usize> = (0..parent.len()).filter(|&c| parent[c] == host && c != 0).collect();
        let moved: Vec<usize> = children.iter().copied().filter(|&c| below[c].is_subset_of(block)).collect();
        let covered = moved.iter().fold(Subset::default(), |u, &c| u.union(below[c]));
        if covered != block || moved.len() < 2 {
            return Err(Error::InvalidTree(format!("split {split} does not fit the tree")));
        }
        let fresh = parent.len();
        parent.push(host);
        weight.push(w);
        below.push(block);
        for c in moved {
            parent[c] = fresh;
        }
    }
    let mut edges = Vec::with_capacity(parent.len() - 1);
    edges.push(Edge { u: 0, v: centre, weight: pendant[0].clone() });
    for v in 1..parent.len() {
        if v != centre {
            edges.push(Edge { u: parent[v], v, weight: weight[v].clone() });
        }
    }
    PhyloTree::new(n, edges)
}

/// A random tree on `n` leaves, deterministic per seed.
///
/// Leaves `4..=n` are attached one at a time to the 3-leaf star, each to a
/// uniformly chosen edge (subdividing it) or internal vertex. Weights are
/// `lo + (hi - lo) j / 24` for uniform `j` in `1..=24`.
pub fn random_tree(n: usize, seed: u64, lo: &Rational, hi: &Rational) -> Result<PhyloTree> {
    if !(2..=MAX_N).contains(&n) {
        return Err(Error::GroundSetSize(n));
    }
    if lo.is_negative() || hi < lo || !hi.is_positive() {
        return Err(Error::EmptyRange);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| lo + (hi - lo) * int(rng.gen_range(1..=24)) / int(24);
    if n == 2 {
        let weight = draw(&mut rng);
        return PhyloTree::new(2, alloc::vec![Edge { u: 0, v: 1, weight }]);
    }
    // vertex ids: leaves 0..n, internal vertices n.. in creation order
    let mut links: Vec<(usize, usize)> = (0..3).map(|leaf| (leaf, n)).collect();
    let mut internal = alloc::vec![n];
    for leaf in 3..n {
        let choice = rng.gen_range(0..links.len() + internal.len());
        if choice < links.len() {
            let (u, v) = links[choice];
            let mid = n + internal.len();
            internal.push(mid);
            links[choice] = (u, mid);
            links.push((mid, v));
            links.push((leaf, mid));
        } else {
            links.push((leaf, internal[choice - links.len()]));
        }
    }
    let edges = links.into_iter().map(|(u, v)| Edge { u, v, weight: draw(&mut rng) }).collect();
    PhyloTree::new(n, edges)
}
