//! Exact linear programming over the rationals.
//!
//! A dense two-phase simplex method with Bland's rule, meant for the small
//! feasibility questions that arise on hypersimplex faces.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Outcome of [`maximize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, point: Vec<Rational> },
}

/// Maximizes `objective . x` subject to `equalities` (rows `(a, b)` meaning
/// `a . x = b`) and `x >= 0`.
pub fn maximize(objective: &[Rational], equalities: &[(Vec<Rational>, Rational)]) -> LpOutcome {
    let vars = objective.len();
    let m = equalities.len();
    // tableau columns: original vars, artificials, rhs
    let width = vars + m + 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m + 1);
    for (i, (a, b)) in equalities.iter().enumerate() {
        let flip = b.is_negative();
        let mut row = vec![Rational::zero(); width];
        for (j, v) in a.iter().enumerate() {
            row[j] = if flip { -v } else { v.clone() };
        }
        row[vars + i] = Rational::one();
        row[width - 1] = if flip { -b } else { b.clone() };
        t.push(row);
    }
    let mut basis: Vec<usize> = (vars..vars + m).collect();

    // phase one: minimize the sum of artificials, i.e. maximize its negative
    let mut cost = vec![Rational::zero(); width];
    for c in &mut cost[vars..vars + m] {
        *c = -Rational::one();
    }
    if !run(&mut t, &mut basis, &cost, vars + m) {
        unreachable!("phase one is bounded");
    }
    let infeasibility: Rational =
        basis.iter().zip(&t).filter(|(&b, _)| b >= vars).map(|(_, row)| row[width - 1].clone()).sum();
    if !infeasibility.is_zero() {
        return LpOutcome::Infeasible;
    }
    // drive remaining zero-level artificials out of the basis
    for r in 0..m {
        if basis[r] >= vars {
            if let Some(j) = (0..vars).find(|&j| !t[r][j].is_zero()) {
                pivot(&mut t, &mut basis, r, j);
            }
        }
    }

    let mut cost = vec![Rational::zero(); width];
    cost[..vars].clone_from_slice(objective);
    if !run(&mut t, &mut basis, &cost, vars) {
        return LpOutcome::Unbounded;
    }
    let mut point = vec![Rational::zero(); vars];
    for (r, &b) in basis.iter().enumerate() {
        if b < vars {
            point[b] = t[r][width - 1].clone();
        }
    }
    let value = objective.iter().zip(&point).map(|(c, x)| c * x).sum();
    LpOutcome::Optimal { value, point }
}

fn pivot(t: &mut [Vec<Rational>], basis: &mut [usize], r: usize, c: usize) {
    let p = t[r][c].clone();
    for v in t[r].iter_mut() {
        *v /= &p;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && !row[c].is_zero() {
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
    }
    basis[r] = c;
}

/// Primal simplex on the columns `0..usable`. Returns `false` if unbounded.
fn run(t: &mut [Vec<Rational>], basis: &mut [usize], cost: &[Rational], usable: usize) -> bool {
    let width = cost.len();
    loop {
        // reduced cost of column j: c_j - c_B . column_j
        let entering = (0..usable).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut reduced = cost[j].clone();
            for (row, &b) in t.iter().zip(basis.iter()) {
                if !row[j].is_zero() && !cost[b].is_zero() {
                    reduced -= &cost[b] * &row[j];
                }
            }
            reduced.is_positive()
        });
        let Some(c) = entering else {
            return true;
        };
        let mut best: Option<(usize, Rational)> = None;
        for (r, row) in t.iter().enumerate() {
            if row[c].is_positive() {
                let ratio = &row[width - 1] / &row[c];
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && basis[r] < basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
        }
        let Some((r, _)) = best else {
            return false;
        };
        pivot(t, basis, r, c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn small_program() {
        // max x + y, x + 2y + s1 = 4, 3x + y + s2 = 6
        let obj = [int(1), int(1), int(0), int(0)];
        let eqs = [
            (alloc::vec![int(1), int(2), int(1), int(0)], int(4)),
            (alloc::vec![int(3), int(1), int(0), int(1)], int(6)),
        ];
        match maximize(&obj, &eqs) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, frac(14, 5));
                assert_eq!(point[0], frac(8, 5));
                assert_eq!(point[1], frac(6, 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let eqs = [(alloc::vec![int(1), int(1)], int(-1))];
        assert_eq!(maximize(&[int(0), int(0)], &eqs), LpOutcome::Infeasible);
        let eqs = [(alloc::vec![int(1), int(-1)], int(0))];
        assert_eq!(maximize(&[int(1), int(0)], &eqs), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let eqs = [(alloc::vec![int(1), int(1)], int(2)), (alloc::vec![int(2), int(2)], int(4))];
        match maximize(&[int(1), int(0)], &eqs) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, int(2)),
            other => panic!("{other:?}"),
        }
    }
}
