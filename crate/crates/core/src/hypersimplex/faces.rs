//! Face lattices, volumes and the tight-span poset of a subdivision.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::dissimilarity::WeightFunction;
use crate::linalg::{determinant, rank, with_fallback};
use crate::subset::{ksubsets, Subset};

use super::subdivision::{reduced_row, regular_subdivision, Cell, Subdivision};

/// A face of a subdivision, given by its vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<Subset>,
}

/// Interior faces of a regular subdivision ordered by inclusion.
///
/// Reversing the order gives the face poset of the tight span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacePoset {
    pub faces: Vec<Face>,
    /// Covering pairs `(smaller, larger)` as indices into `faces`.
    pub covers: Vec<(usize, usize)>,
}

impl FacePoset {
    /// Dimension of the dual complex: `n - 1` minus the smallest face dimension.
    pub fn dual_dimension(&self, n: usize) -> Option<usize> {
        self.faces.iter().map(|f| n - 1 - f.dim).max()
    }

    /// Interior faces of dimension `n - 2`.
    pub fn walls(&self, n: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim + 2 == n)
    }

    /// `true` if the Hasse diagram is connected.
    pub fn is_connected(&self) -> bool {
        if self.faces.is_empty() {
            return true;
        }
        let mut parent: Vec<usize> = (0..self.faces.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(a, b) in &self.covers {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let root = find(&mut parent, 0);
        (0..self.faces.len()).all(|i| find(&mut parent, i) == root)
    }
}

fn affine_dim(vertices: &[Subset], n: usize) -> usize {
    let rows: Vec<Vec<i128>> = vertices.iter().map(|&v| reduced_row(v, n)).collect();
    rank(&rows, n).expect("0/1 rows") - 1
}

fn cell_faces(cell: &Cell, n: usize) -> BTreeSet<Vec<usize>> {
    let mut faces = BTreeSet::new();
    let vertices = cell.ranks();
    if vertices.len() == n {
        for mask in 1u32..(1u32 << n) {
            faces.insert((0..n).filter(|i| mask & (1 << i) != 0).map(|i| vertices[i]).collect());
        }
        return faces;
    }
    let facets: Vec<&[usize]> = cell.facet_vertex_ranks().collect();
    let mut frontier = alloc::vec![vertices.to_vec()];
    faces.insert(vertices.to_vec());
    while let Some(face) = frontier.pop() {
        for facet in &facets {
            let meet: Vec<usize> = face.iter().copied().filter(|r| facet.binary_search(r).is_ok()).collect();
            if !meet.is_empty() && meet.len() < face.len() && faces.insert(meet.clone()) {
                frontier.push(meet);
            }
        }
    }
    faces
}

/// All faces of all maximal cells, each listed once, sorted by dimension
/// and then by vertex list.
pub fn face_lattice(subdivision: &Subdivision) -> Vec<Face> {
    let (k, n) = (subdivision.k(), subdivision.n());
    let all: Vec<Subset> = ksubsets(k, n).collect();
    let mut unique = BTreeSet::new();
    for cell in subdivision.cells() {
        unique.extend(cell_faces(cell, n));
    }
    let mut faces: Vec<Face> = unique
        .into_iter()
        .map(|ranks| {
            let vertices: Vec<Subset> = ranks.iter().map(|&r| all[r]).collect();
            Face { dim: affine_dim(&vertices, n), vertices }
        })
        .collect();
    faces.sort();
    faces
}

fn simplex_volume(vertices: &[Subset], n: usize) -> BigInt {
    let rows: Vec<Vec<i128>> = vertices.iter().map(|&v| reduced_row(v, n)).collect();
    let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    with_fallback(|| determinant(&rows).map(BigInt::from), || determinant(&big)).abs()
}

/// Pulling triangulation of a face, as vertex lists of simplices.
fn triangulate(face: &[Subset], dim: usize, facets: &[Vec<Subset>], n: usize) -> Vec<Vec<Subset>> {
    if face.len() == dim + 1 {
        return alloc::vec![face.to_vec()];
    }
    let apex = face[0];
    let mut sub_faces: BTreeSet<Vec<Subset>> = BTreeSet::new();
    for facet in facets {
        let meet: Vec<Subset> = face.iter().copied().filter(|v| facet.contains(v)).collect();
        if meet.len() >= dim && !meet.contains(&apex) && affine_dim(&meet, n) + 1 == dim {
            sub_faces.insert(meet);
        }
    }
    let mut out = Vec::new();
    for sub in sub_faces {
        for mut simplex in triangulate(&sub, dim - 1, facets, n) {
            simplex.push(apex);
            out.push(simplex);
        }
    }
    out
}

/// Normalized volume of a cell in the lattice of the affine hull.
pub(crate) fn cell_volume(cell: &Cell, n: usize) -> BigInt {
    if cell.is_simplex(n) {
        return simplex_volume(cell.vertices(), n);
    }
    let all = cell.vertices();
    let ranks = cell.ranks();
    let facets: Vec<Vec<Subset>> = cell
        .facet_vertex_ranks()
        .map(|f| f.iter().map(|r| all[ranks.binary_search(r).expect("facet vertex")]).collect())
        .collect();
    triangulate(all, n - 1, &facets, n).iter().map(|s| simplex_volume(s, n)).sum()
}

/// Sum of the normalized volumes of the maximal cells.
pub fn normalized_volume(subdivision: &Subdivision) -> BigInt {
    let n = subdivision.n();
    subdivision.cells().iter().map(|c| cell_volume(c, n)).fold(BigInt::zero(), |a, b| a + b)
}

fn is_interior(vertices: &[Subset], n: usize) -> bool {
    let (mut all, mut any) = (Subset::full(n), Subset::EMPTY);
    for &v in vertices {
        all = all.intersection(v);
        any = any.union(v);
    }
    all.is_empty() && any == Subset::full(n)
}

/// Poset of interior faces of `Σ_w` (faces not inside the boundary of the
/// hypersimplex), with covering relations.
pub fn tight_span_poset(weights: &WeightFunction) -> FacePoset {
    let subdivision = regular_subdivision(weights);
    let n = subdivision.n();
    let faces: Vec<Face> = face_lattice(&subdivision).into_iter().filter(|f| is_interior(&f.vertices, n)).collect();
    let mut covers = Vec::new();
    for (i, low) in faces.iter().enumerate() {
        for (j, high) in faces.iter().enumerate() {
            if high.dim == low.dim + 1 && low.vertices.iter().all(|v| high.vertices.binary_search(v).is_ok()) {
                covers.push((i, j));
            }
        }
    }
    FacePoset { faces, covers }
}
