//! Regular subdivisions of the hypersimplex.
//!
//! Points live in reduced coordinates `y = (x_1, ..., x_{n-1})`, which is a
//! unimodular chart of the affine hull `Σx = k`. Lower facets of the lifted
//! point set are found by gift wrapping: an initial lower facet is obtained
//! by tilting a horizontal support plane, and neighbours are reached by
//! rotating a support plane around each ridge.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::bitset::BitSet;
use crate::dd::extreme_rays;
use crate::dissimilarity::WeightFunction;
use crate::error::{Error, Result};
use crate::linalg::{dot, nullspace, primitive, rank, with_fallback, Int};
use crate::rational::{common_denominator, Rational};
use crate::subset::{binomial, ksubsets, rank_unchecked, Subset};

/// Inequality `normal . (x_1, ..., x_{n-1}) + offset >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
}

impl Halfspace {
    /// Coefficients on all `n` coordinates (the last one is always zero).
    pub fn full_normal(&self) -> Vec<BigInt> {
        let mut v = self.normal.clone();
        v.push(BigInt::from(0));
        v
    }

    pub fn evaluate(&self, vertex: Subset) -> BigInt {
        let mut acc = self.offset.clone();
        for i in vertex.iter() {
            if i <= self.normal.len() {
                acc += &self.normal[i - 1];
            }
        }
        acc
    }

    pub fn evaluate_point(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::from_integer(self.offset.clone());
        for (c, x) in self.normal.iter().zip(point) {
            acc += Rational::from_integer(c.clone()) * x;
        }
        acc
    }
}

/// The affine function `coeffs . y + constant` whose graph supports a cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineLift {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

impl AffineLift {
    pub fn evaluate(&self, vertex: Subset) -> Rational {
        let mut acc = self.constant.clone();
        for i in vertex.iter() {
            if i <= self.coeffs.len() {
                acc += &self.coeffs[i - 1];
            }
        }
        acc
    }
}

/// A full-dimensional cell: its vertices and facet inequalities.
#[derive(Clone, Debug)]
pub struct Cell {
    ranks: Vec<usize>,
    vertices: Vec<Subset>,
    facets: Vec<(Halfspace, Vec<usize>)>,
    lift: Option<AffineLift>,
}

impl Cell {
    /// Vertex ranks, increasing.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Vertices as k-subsets, in rank order.
    pub fn vertices(&self) -> &[Subset] {
        &self.vertices
    }

    /// Facet inequalities, each valid on the cell.
    pub fn facets(&self) -> impl Iterator<Item = &Halfspace> {
        self.facets.iter().map(|(h, _)| h)
    }

    /// Ranks of the vertices on each facet.
    pub fn facet_vertex_ranks(&self) -> impl Iterator<Item = &[usize]> {
        self.facets.iter().map(|(_, v)| v.as_slice())
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    /// Supporting affine function, present for cells of regular subdivisions.
    pub fn lift(&self) -> Option<&AffineLift> {
        self.lift.as_ref()
    }

    pub fn is_simplex(&self, n: usize) -> bool {
        self.ranks.len() == n
    }

    pub fn contains_rank(&self, rank: usize) -> bool {
        self.ranks.binary_search(&rank).is_ok()
    }
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.ranks == other.ranks
    }
}

impl Eq for Cell {}

/// A polytopal subdivision of `Δ(k, n)` given by its maximal cells.
#[derive(Clone, Debug)]
pub struct Subdivision {
    k: usize,
    n: usize,
    cells: Vec<Cell>,
}

impl PartialEq for Subdivision {
    /// Equality of maximal cells; lower-dimensional faces are derived data.
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.n == other.n && self.cells == other.cells
    }
}

impl Eq for Subdivision {}

impl Subdivision {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Maximal cells sorted by their vertex-rank lists.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.cells.len() == 1
    }

    /// Vertex sets of the maximal cells, canonical order.
    pub fn cell_vertex_sets(&self) -> Vec<Vec<Subset>> {
        self.cells.iter().map(|c| c.vertices.clone()).collect()
    }

    /// Builds a subdivision from maximal-cell vertex sets, computing facets.
    ///
    /// Every set must be a full-dimensional set of hypersimplex vertices.
    /// Whether the cells actually tile `Δ(k, n)` is not checked here.
    pub fn from_cells(k: usize, n: usize, cells: Vec<Vec<Subset>>) -> Result<Subdivision> {
        check_kn(k, n)?;
        let mut built = Vec::with_capacity(cells.len());
        for vertices in cells {
            let mut ranks = Vec::with_capacity(vertices.len());
            for v in &vertices {
                ranks.push(crate::subset::ksubset_rank(*v, k, n)?);
            }
            ranks.sort_unstable();
            ranks.dedup();
            built.push(cell_from_ranks(k, n, ranks, None)?);
        }
        Ok(Subdivision::assemble(k, n, built))
    }

    pub(crate) fn assemble(k: usize, n: usize, mut cells: Vec<Cell>) -> Subdivision {
        cells.sort_by(|a, b| a.ranks.cmp(&b.ranks));
        cells.dedup_by(|a, b| a.ranks == b.ranks);
        Subdivision { k, n, cells }
    }

    /// The trivial subdivision consisting of `Δ(k, n)` itself.
    pub fn trivial(k: usize, n: usize) -> Result<Subdivision> {
        check_kn(k, n)?;
        let ranks: Vec<usize> = (0..binomial(n, k)).collect();
        Ok(Subdivision { k, n, cells: vec![cell_from_ranks(k, n, ranks, None)?] })
    }
}

pub(crate) fn check_kn(k: usize, n: usize) -> Result<()> {
    crate::subset::GroundSet::new(n)?;
    if k == 0 || k >= n {
        return Err(Error::KOutOfRange { k, n });
    }
    Ok(())
}

/// Row `(y, 1)` of a vertex in reduced coordinates.
pub(crate) fn reduced_row<T: Int>(vertex: Subset, n: usize) -> Vec<T> {
    let mut row = vec![T::zero(); n];
    for i in vertex.iter() {
        if i < n {
            row[i - 1] = T::one();
        }
    }
    row[n - 1] = T::one();
    row
}

/// Evaluates `phi . (y, 1)` at a vertex; `phi` has length `n`.
#[inline]
pub(crate) fn eval_affine<T: Int>(phi: &[T], vertex: Subset, n: usize) -> Option<T> {
    let mut acc = phi[n - 1].clone();
    for i in vertex.iter() {
        if i < n && !phi[i - 1].is_zero() {
            acc = acc.add(&phi[i - 1])?;
        }
    }
    Some(acc)
}

/// Facets of the cell spanned by `vertices` (full-dimensional), as affine
/// functions of length `n` together with the indices of the vertices on them.
pub(crate) fn facets_of<T: Int>(vertices: &[Subset], n: usize) -> Option<Vec<(Vec<T>, Vec<usize>)>> {
    let rows: Vec<Vec<T>> = vertices.iter().map(|&v| reduced_row(v, n)).collect();
    if vertices.len() == n {
        let mut out = Vec::with_capacity(n);
        for u in 0..n {
            let others: Vec<Vec<T>> = (0..n).filter(|&j| j != u).map(|j| rows[j].clone()).collect();
            let mut phi = nullspace(&others, n)?.pop().expect("simplex facet");
            if dot(&rows[u], &phi)?.signum() < 0 {
                phi = phi.iter().map(|x| x.neg()).collect::<Option<Vec<T>>>()?;
            }
            out.push((phi, (0..n).filter(|&j| j != u).collect()));
        }
        return Some(out);
    }
    let rays = extreme_rays(&rows, n)?;
    Some(rays.into_iter().map(|r| (r.direction, r.zeros.iter().collect())).collect())
}

fn to_halfspace<T: Int>(phi: &[T]) -> Halfspace {
    let n = phi.len();
    Halfspace { normal: phi[..n - 1].iter().map(Int::to_big).collect(), offset: phi[n - 1].to_big() }
}

pub(crate) fn cell_from_ranks(k: usize, n: usize, ranks: Vec<usize>, lift: Option<AffineLift>) -> Result<Cell> {
    let all: Vec<Subset> = ksubsets(k, n).collect();
    let vertices: Vec<Subset> = ranks.iter().map(|&r| all[r]).collect();
    let rows: Vec<Vec<i128>> = vertices.iter().map(|&v| reduced_row(v, n)).collect();
    if rank(&rows, n).expect("0/1 rows") < n {
        return Err(Error::InvalidCell(alloc::format!(
            "cell with {} vertices is not full-dimensional",
            vertices.len()
        )));
    }
    let facets = with_fallback(
        || facets_of::<i128>(&vertices, n).map(|fs| convert_facets(fs, &ranks)),
        || facets_of::<BigInt>(&vertices, n).map(|fs| convert_facets(fs, &ranks)),
    );
    Ok(Cell { ranks, vertices, facets, lift })
}

fn convert_facets<T: Int>(facets: Vec<(Vec<T>, Vec<usize>)>, ranks: &[usize]) -> Vec<(Halfspace, Vec<usize>)> {
    let mut out: Vec<(Halfspace, Vec<usize>)> = facets
        .into_iter()
        .map(|(phi, idx)| (to_halfspace(&phi), idx.into_iter().map(|i| ranks[i]).collect()))
        .collect();
    out.sort_by(|a, b| a.1.cmp(&b.1));
    out
}

/// Regular subdivision induced by lifting vertex `K` to height `w(K)` and
/// projecting the lower faces.
pub fn regular_subdivision(weights: &WeightFunction) -> Subdivision {
    let (k, n) = (weights.k(), weights.n());
    let scale = Rational::from_integer(common_denominator(weights.heights()));
    let scaled: Vec<BigInt> = weights.heights().iter().map(|h| (h * &scale).to_integer()).collect();
    let vertices: Vec<Subset> = ksubsets(k, n).collect();
    let raw = with_fallback(
        || {
            let small: Option<Vec<i128>> = scaled.iter().map(|h| h.try_into().ok()).collect();
            wrap::<i128>(&vertices, n, &small?).map(export)
        },
        || wrap::<BigInt>(&vertices, n, &scaled).map(export),
    );
    let cells = raw
        .into_iter()
        .map(|(ranks, lift, facets)| {
            let lift = AffineLift { coeffs: lift.0.iter().map(|c| c / &scale).collect(), constant: &lift.1 / &scale };
            let facets = facets
                .into_iter()
                .map(|(phi, idx)| (to_halfspace(&phi), idx.into_iter().map(|i| ranks[i]).collect()))
                .collect::<Vec<(Halfspace, Vec<usize>)>>();
            let vertices = ranks.iter().map(|&r| vertices[r]).collect();
            let mut facets = facets;
            facets.sort_by(|a, b| a.1.cmp(&b.1));
            Cell { ranks, vertices, facets, lift: Some(lift) }
        })
        .collect();
    Subdivision::assemble(k, n, cells)
}

type RawCell<T> = (Vec<usize>, Vec<T>, Vec<(Vec<T>, Vec<usize>)>);
type ExportedCell = (Vec<usize>, (Vec<Rational>, Rational), Vec<(Vec<BigInt>, Vec<usize>)>);

fn export<T: Int>(cells: Vec<RawCell<T>>) -> Vec<ExportedCell> {
    cells
        .into_iter()
        .map(|(ranks, lift, facets)| {
            let m = lift.len();
            let den = lift[m - 1].to_big();
            let coeffs = lift[..m - 2].iter().map(|a| Rational::new(a.to_big(), den.clone())).collect();
            let constant = Rational::new(lift[m - 2].to_big(), den);
            let facets = facets.into_iter().map(|(phi, idx)| (phi.iter().map(Int::to_big).collect(), idx)).collect();
            (ranks, (coeffs, constant), facets)
        })
        .collect()
}

/// Slack `den * h(v) - (a . y + b)` of a lift `(a, b, den)`.
fn slack<T: Int>(lift: &[T], h: &T, v: Subset, n: usize) -> Option<T> {
    let den = &lift[n];
    den.mul(h)?.sub(&eval_affine(&lift[..n], v, n)?)
}

/// `q * lift + p * phi` on the affine part, `q * den` for the denominator.
fn tilt<T: Int>(lift: &[T], phi: &[T], p: &T, q: &T) -> Option<Vec<T>> {
    let n = phi.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        out.push(q.mul(&lift[i])?.add(&p.mul(&phi[i])?)?);
    }
    out.push(q.mul(&lift[n])?);
    primitive(&mut out);
    Some(out)
}

fn tight_set<T: Int>(lift: &[T], vertices: &[Subset], heights: &[T], n: usize) -> Option<Vec<usize>> {
    let mut out = Vec::new();
    for (i, (&v, h)) in vertices.iter().zip(heights).enumerate() {
        if slack(lift, h, v, n)?.is_zero() {
            out.push(i);
        }
    }
    Some(out)
}

/// Minimum of `num_i / den_i` over candidate pairs with positive denominators.
fn min_ratio<T: Int>(pairs: impl Iterator<Item = (T, T)>) -> Option<Option<(T, T)>> {
    let mut best: Option<(T, T)> = None;
    for (p, q) in pairs {
        let better = match &best {
            None => true,
            Some((bp, bq)) => p.mul(bq)? < bp.mul(&q)?,
        };
        if better {
            best = Some((p, q));
        }
    }
    Some(best)
}

fn wrap<T: Int>(vertices: &[Subset], n: usize, heights: &[T]) -> Option<Vec<RawCell<T>>> {
    // initial lower facet
    let hmin = heights.iter().min().expect("nonempty").clone();
    let mut lift = vec![T::zero(); n + 1];
    lift[n - 1] = hmin;
    lift[n] = T::one();
    let mut tight = tight_set(&lift, vertices, heights, n)?;
    loop {
        let rows: Vec<Vec<T>> = tight.iter().map(|&i| reduced_row(vertices[i], n)).collect();
        if rank(&rows, n)? == n {
            break;
        }
        let mut phi = nullspace(&rows, n)?.swap_remove(0);
        let values: Vec<T> = vertices.iter().map(|&v| eval_affine(&phi, v, n)).collect::<Option<_>>()?;
        if !values.iter().any(|v| v.signum() > 0) {
            phi = phi.iter().map(Int::neg).collect::<Option<_>>()?;
        }
        let mut candidates = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            let f = eval_affine(&phi, v, n)?;
            if f.signum() > 0 {
                candidates.push((slack(&lift, &heights[i], v, n)?, f));
            }
        }
        let (p, q) = min_ratio(candidates.into_iter())?.expect("phi positive somewhere");
        lift = tilt(&lift, &phi, &p, &q)?;
        tight = tight_set(&lift, vertices, heights, n)?;
    }

    let total = vertices.len();
    let mut seen: BTreeMap<BitSet, ()> = BTreeMap::new();
    let mut queue: VecDeque<(Vec<usize>, Vec<T>)> = VecDeque::new();
    seen.insert(BitSet::from_indices(total, tight.iter().copied()), ());
    queue.push_back((tight, lift));
    let mut cells = Vec::new();
    while let Some((ranks, lift)) = queue.pop_front() {
        let cell_vertices: Vec<Subset> = ranks.iter().map(|&r| vertices[r]).collect();
        let facets = facets_of::<T>(&cell_vertices, n)?;
        for (phi, _) in &facets {
            let mut candidates = Vec::new();
            for (i, &v) in vertices.iter().enumerate() {
                let f = eval_affine(phi, v, n)?;
                if f.signum() < 0 {
                    candidates.push((slack(&lift, &heights[i], v, n)?, f.neg()?));
                }
            }
            let Some((p, q)) = min_ratio(candidates.into_iter())? else {
                continue;
            };
            let minus_p = p.neg()?;
            let next = tilt(&lift, phi, &minus_p, &q)?;
            let next_tight = tight_set(&next, vertices, heights, n)?;
            let key = BitSet::from_indices(total, next_tight.iter().copied());
            if seen.insert(key, ()).is_none() {
                queue.push_back((next_tight, next));
            }
        }
        cells.push((ranks, lift, facets));
    }
    Some(cells)
}

/// Rank of a vertex within `Δ(k, n)`.
pub(crate) fn vertex_rank(v: Subset) -> usize {
    rank_unchecked(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn sets(cells: &[&[&[usize]]]) -> Vec<Vec<Subset>> {
        let mut out: Vec<Vec<Subset>> = cells
            .iter()
            .map(|c| {
                let mut v: Vec<Subset> = c.iter().map(|e| Subset::from_elements(e, 8).unwrap()).collect();
                v.sort();
                v
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn constant_weight_is_trivial() {
        let w = WeightFunction::from_fn(2, 5, |_| int(7)).unwrap();
        let s = regular_subdivision(&w);
        assert!(s.is_trivial());
        assert_eq!(s.cells()[0].ranks().len(), 10);
        // Δ(2,5) has 2n = 10 facets
        assert_eq!(s.cells()[0].facet_count(), 10);
    }

    #[test]
    fn quartet_split() {
        let w = WeightFunction::from_fn(2, 4, |s| {
            let a = Subset::from_elements(&[1, 2], 4).unwrap();
            if s.is_subset_of(a) || s.is_disjoint(a) {
                int(0)
            } else {
                int(-1)
            }
        })
        .unwrap();
        let s = regular_subdivision(&w);
        let mut got = s.cell_vertex_sets();
        for c in got.iter_mut() {
            c.sort();
        }
        got.sort();
        let expected =
            sets(&[&[&[1, 2], &[1, 3], &[1, 4], &[2, 3], &[2, 4]], &[&[3, 4], &[1, 3], &[1, 4], &[2, 3], &[2, 4]]]);
        assert_eq!(got, expected);
    }

    #[test]
    fn lifts_support_cells() {
        let w = WeightFunction::from_fn(3, 6, |s| int((s.0 as i64 * 37) % 11)).unwrap();
        let s = regular_subdivision(&w);
        for cell in s.cells() {
            let lift = cell.lift().unwrap();
            for (r, v) in ksubsets(3, 6).enumerate() {
                let value = lift.evaluate(v);
                if cell.contains_rank(r) {
                    assert_eq!(&value, w.get(v));
                } else {
                    assert!(&value < w.get(v));
                }
            }
        }
    }
}
