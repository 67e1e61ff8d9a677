//! Weak compatibility of hyperplane families, decided on the faces of the
//! hypersimplex.
//!
//! A family of split hyperplanes `H_A` is weakly compatible unless some face
//! `F` of `Δ(k, n)` and some subfamily meet in a single point that is not a
//! vertex. Faces are given by a set `U` of free coordinates, a set `O` fixed
//! to 1 and the rest fixed to 0. If the point has all free coordinates in
//! `(0, 1)`, every hyperplane through it restricts to `Σ_{A ∩ U} x = 1` with
//! `A ∩ O = ∅` and `|A ∩ U| >= 2`, so it suffices to solve square systems of
//! `|U| - 1` such rows plus `Σ_U x = k - |O|`.
//!
//! The search is exponential in `n` and meant for small ground sets.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::solve_square;
use crate::rational::{int, Rational};
use crate::subset::{all_subsets, Subset};

use super::{check_kn, split_defining};

/// A non-vertex point cut out by a face and a subfamily of hyperplanes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalPoint {
    /// The point in `R^n`.
    pub point: Vec<Rational>,
    /// Coordinates left free on the face.
    pub free: Subset,
    /// Coordinates fixed to 1.
    pub ones: Subset,
    /// Coordinates fixed to 0.
    pub zeros: Subset,
    /// Blocks `A` of the hyperplanes used.
    pub hyperplanes: Vec<Subset>,
}

/// Returns `None` if the family is weakly compatible and otherwise a
/// certificate point. Every member must be split-defining.
pub fn geometric_weak_compatibility(family: &[Subset], k: usize, n: usize) -> Result<Option<FractionalPoint>> {
    check_kn(k, n)?;
    let mut members: Vec<Subset> = Vec::with_capacity(family.len());
    for &a in family {
        super::SubsetHyperplane::new(a, n)?;
        if !split_defining(a, k, n) {
            return Err(Error::NotSplitDefining(a));
        }
        members.push(a);
    }
    members.sort();
    members.dedup();

    for free in all_subsets(n).filter(|u| u.len() >= 2) {
        let size = free.len();
        let relevant: Vec<Subset> = members.iter().copied().filter(|a| a.intersection(free).len() >= 2).collect();
        if relevant.len() + 1 < size {
            continue;
        }
        let mut chosen: Vec<usize> = (0..size - 1).collect();
        loop {
            let used: Vec<Subset> = chosen.iter().map(|&i| relevant[i]).collect();
            if let Some(found) = try_face(free, &used, k, n) {
                return Ok(Some(found));
            }
            if !next_combination(&mut chosen, relevant.len()) {
                break;
            }
        }
    }
    Ok(None)
}

fn try_face(free: Subset, used: &[Subset], k: usize, n: usize) -> Option<FractionalPoint> {
    let coords: Vec<usize> = free.elements();
    let size = coords.len();
    let covered = used.iter().fold(free, |acc, a| acc.union(*a));
    let available = Subset::full(n).difference(covered);
    let mut matrix: Vec<Vec<i128>> =
        used.iter().map(|a| coords.iter().map(|&i| i128::from(a.contains(i))).collect()).collect();
    matrix.push(alloc::vec![1; size]);
    for s in 1..size {
        if s > k || k - s > available.len() {
            continue;
        }
        let mut rhs = alloc::vec![1i128; size - 1];
        rhs.push(s as i128);
        let (numerators, den) = solve_square(&matrix, &rhs).expect("small integers")?;
        if !numerators.iter().all(|x| *x > 0 && *x < den) {
            continue;
        }
        let ones = available.iter().take(k - s).fold(Subset::EMPTY, |acc, i| acc.insert(i));
        let mut point = alloc::vec![Rational::zero(); n];
        for i in ones.iter() {
            point[i - 1] = int(1);
        }
        for (&i, x) in coords.iter().zip(&numerators) {
            point[i - 1] = Rational::new((*x).into(), den.into());
        }
        return Some(FractionalPoint {
            point,
            free,
            ones,
            zeros: Subset::full(n).difference(free).difference(ones),
            hyperplanes: used.to_vec(),
        });
    }
    None
}

/// Advances an increasing index tuple to the next combination of `0..total`.
pub(crate) fn next_combination(c: &mut [usize], total: usize) -> bool {
    let r = c.len();
    for i in (0..r).rev() {
        if c[i] < total - r + i {
            c[i] += 1;
            for j in i + 1..r {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
