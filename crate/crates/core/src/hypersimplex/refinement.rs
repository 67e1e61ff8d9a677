//! Common refinements and coherent sums.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::dd::extreme_rays;
use crate::dissimilarity::WeightFunction;
use crate::error::{Error, Result};
use crate::linalg::{rank, with_fallback, Int};
use crate::rational::{int, Rational};
use crate::subset::Subset;

use super::subdivision::{cell_from_ranks, regular_subdivision, vertex_rank, Cell, Halfspace, Subdivision};

/// Result of [`common_refinement`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refinement {
    Refined(Subdivision),
    /// Some full-dimensional intersection has this vertex, which is not a
    /// vertex of the hypersimplex.
    NotRefinable(Vec<Rational>),
}

impl Refinement {
    pub fn subdivision(&self) -> Option<&Subdivision> {
        match self {
            Refinement::Refined(s) => Some(s),
            Refinement::NotRefinable(_) => None,
        }
    }
}

enum Meet {
    Empty,
    Cell(Vec<Subset>),
    Fractional(Vec<Rational>),
}

fn separated(c1: &Cell, c2: &Cell) -> bool {
    c1.facets().any(|h| c2.vertices().iter().all(|&v| h.evaluate(v) <= BigInt::from(0)))
}

fn meet<T: Int>(c1: &Cell, c2: &Cell, k: usize, n: usize) -> Option<Meet> {
    let convert = |h: &Halfspace| -> Option<Vec<T>> {
        let mut row: Vec<T> = h.normal.iter().map(T::from_big).collect::<Option<_>>()?;
        row.push(T::from_big(&h.offset)?);
        Some(row)
    };
    let mut rows: Vec<Vec<T>> = Vec::new();
    for h in c1.facets().chain(c2.facets()) {
        rows.push(convert(h)?);
    }
    let mut positive = alloc::vec![T::zero(); n];
    positive[n - 1] = T::one();
    rows.push(positive);
    let rays = extreme_rays(&rows, n)?;
    let directions: Vec<Vec<T>> = rays.into_iter().map(|r| r.direction).collect();
    if rank(&directions, n)? < n {
        return Some(Meet::Empty);
    }
    let mut vertices = Vec::with_capacity(directions.len());
    for dir in &directions {
        let t = dir[n - 1].to_big();
        debug_assert!(t > BigInt::from(0), "bounded intersection");
        let coords: Vec<Rational> = dir[..n - 1].iter().map(|c| Rational::new(c.to_big(), t.clone())).collect();
        let last = int(k as i64) - coords.iter().sum::<Rational>();
        let mut point = coords;
        point.push(last);
        let is_vertex = point.iter().all(|x| x.is_zero() || *x == int(1));
        if !is_vertex {
            return Some(Meet::Fractional(point));
        }
        let mask = point.iter().enumerate().filter(|(_, x)| !x.is_zero()).fold(0u32, |m, (i, _)| m | (1 << i));
        vertices.push(Subset(mask));
    }
    vertices.sort();
    Some(Meet::Cell(vertices))
}

/// Common refinement of two subdivisions of the same hypersimplex.
///
/// Only full-dimensional intersections of maximal cells are formed; a
/// fractional vertex of any of them means the refinement does not exist.
pub fn common_refinement(s1: &Subdivision, s2: &Subdivision) -> Result<Refinement> {
    let (k, n) = (s1.k(), s1.n());
    if k != s2.k() || n != s2.n() {
        return Err(Error::DimensionMismatch { k1: k, n1: n, k2: s2.k(), n2: s2.n() });
    }
    let mut cells = Vec::new();
    for c1 in s1.cells() {
        for c2 in s2.cells() {
            if separated(c1, c2) || separated(c2, c1) {
                continue;
            }
            let m = with_fallback(|| meet::<i128>(c1, c2, k, n), || meet::<BigInt>(c1, c2, k, n));
            match m {
                Meet::Empty => {}
                Meet::Fractional(point) => return Ok(Refinement::NotRefinable(point)),
                Meet::Cell(vertices) => {
                    let ranks: Vec<usize> = vertices.iter().map(|&v| vertex_rank(v)).collect();
                    cells.push(cell_from_ranks(k, n, ranks, None)?);
                }
            }
        }
    }
    Ok(Refinement::Refined(Subdivision::assemble(k, n, cells)))
}

/// `true` iff `Σ_{w1 + w2}` is the common refinement of `Σ_{w1}` and `Σ_{w2}`.
pub fn is_coherent_sum(w1: &WeightFunction, w2: &WeightFunction) -> Result<bool> {
    let sum = w1.add_scaled(w2, &int(1))?;
    let refined = common_refinement(&regular_subdivision(w1), &regular_subdivision(w2))?;
    Ok(match refined {
        Refinement::Refined(s) => s == regular_subdivision(&sum),
        Refinement::NotRefinable(_) => false,
    })
}
