//! Double description: extreme rays of a pointed polyhedral cone.

use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::linalg::{combine, dot, nullspace, primitive, rank, Int};

/// An extreme ray with the set of constraint rows it satisfies with equality.
pub(crate) struct Ray<T> {
    pub direction: Vec<T>,
    pub zeros: BitSet,
}

/// Extreme rays of `{z in R^m : row . z >= 0 for every row}`.
///
/// The rows must span `R^m` (the cone is pointed). Returns `None` on integer
/// overflow and an empty list if the rows do not have full rank.
pub(crate) fn extreme_rays<T: Int>(rows: &[Vec<T>], m: usize) -> Option<Vec<Ray<T>>> {
    let count = rows.len();
    // greedy choice of a row basis
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut chosen: Vec<Vec<T>> = Vec::with_capacity(m);
    for (i, row) in rows.iter().enumerate() {
        if basis.len() == m {
            break;
        }
        chosen.push(row.clone());
        if rank(&chosen, m)? == chosen.len() {
            basis.push(i);
        } else {
            chosen.pop();
        }
    }
    if basis.len() < m {
        return Some(Vec::new());
    }

    let mut rays: Vec<Ray<T>> = Vec::with_capacity(m);
    for j in 0..m {
        let others: Vec<Vec<T>> = (0..m).filter(|&i| i != j).map(|i| rows[basis[i]].clone()).collect();
        let mut dir = nullspace(&others, m)?.pop().expect("one-dimensional kernel");
        if dot(&rows[basis[j]], &dir)?.signum() < 0 {
            dir = dir.iter().map(|x| x.neg()).collect::<Option<Vec<T>>>()?;
        }
        let zeros = BitSet::from_indices(count, (0..m).filter(|&i| i != j).map(|i| basis[i]));
        rays.push(Ray { direction: dir, zeros });
    }

    let mut in_basis = BitSet::new(count);
    for &b in &basis {
        in_basis.insert(b);
    }
    for i in (0..count).filter(|&i| !in_basis.contains(i)) {
        let values: Vec<T> = rays.iter().map(|r| dot(&rows[i], &r.direction)).collect::<Option<_>>()?;
        let positive: Vec<usize> = (0..rays.len()).filter(|&r| values[r].signum() > 0).collect();
        let negative: Vec<usize> = (0..rays.len()).filter(|&r| values[r].signum() < 0).collect();
        if negative.is_empty() {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.zeros.insert(i);
                }
            }
            continue;
        }
        let mut created = Vec::new();
        for &p in &positive {
            for &q in &negative {
                let common = rays[p].zeros.intersection(&rays[q].zeros);
                if common.count() + 2 < m {
                    continue;
                }
                let adjacent =
                    (0..rays.len()).filter(|&r| r != p && r != q).all(|r| !common.is_subset_of(&rays[r].zeros));
                if !adjacent {
                    continue;
                }
                let mut dir = combine(&values[p], &rays[q].direction, &values[q], &rays[p].direction)?;
                primitive(&mut dir);
                let mut zeros = common;
                zeros.insert(i);
                created.push(Ray { direction: dir, zeros });
            }
        }
        let mut next = Vec::with_capacity(rays.len() + created.len());
        for (mut r, v) in rays.into_iter().zip(&values) {
            match v.signum() {
                1 => next.push(r),
                0 => {
                    r.zeros.insert(i);
                    next.push(r);
                }
                _ => {}
            }
        }
        next.extend(created);
        rays = next;
    }
    Some(rays)
}
