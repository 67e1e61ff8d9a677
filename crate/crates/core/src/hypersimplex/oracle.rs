//! Brute-force lower hull, used to cross-check the subdivision engine.
//!
//! Every affinely independent set of `n` vertices determines one affine
//! function through its lifted points; those that stay below all other
//! lifted vertices support lower facets, whose tight sets are the maximal
//! cells. Cost grows like `C(C(n, k), n)`, so this is for `n <= 6`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::dissimilarity::WeightFunction;
use crate::rational::Rational;
use crate::subset::{ksubsets, Subset};

use super::weak::next_combination;

/// Solves `m x = rhs` over the rationals; `None` if singular.
fn gauss_solve(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let size = m.len();
    for c in 0..size {
        let p = (c..size).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        rhs.swap(c, p);
        let (pivot, pivot_rhs) = (m[c].clone(), rhs[c].clone());
        for (r, (row, b)) in m.iter_mut().zip(rhs.iter_mut()).enumerate() {
            if r != c && !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x -= &f * p;
                }
                *b -= &f * &pivot_rhs;
            }
        }
    }
    Some((0..size).map(|i| &rhs[i] / &m[i][i]).collect())
}

fn row(v: Subset, n: usize) -> Vec<Rational> {
    let mut r: Vec<Rational> = (1..n).map(|i| if v.contains(i) { Rational::one() } else { Rational::zero() }).collect();
    r.push(Rational::one());
    r
}

/// Maximal cells of `Σ_w`, each sorted, in canonical order.
pub fn brute_force_cells(weights: &WeightFunction) -> Vec<Vec<Subset>> {
    let (k, n) = (weights.k(), weights.n());
    let vertices: Vec<Subset> = ksubsets(k, n).collect();
    let rows: Vec<Vec<Rational>> = vertices.iter().map(|&v| row(v, n)).collect();
    let mut cells = BTreeSet::new();
    let mut pick: Vec<usize> = (0..n).collect();
    loop {
        let m: Vec<Vec<Rational>> = pick.iter().map(|&i| rows[i].clone()).collect();
        let rhs: Vec<Rational> = pick.iter().map(|&i| weights.heights()[i].clone()).collect();
        if let Some(coeffs) = gauss_solve(m, rhs) {
            let values: Vec<Rational> = rows.iter().map(|r| r.iter().zip(&coeffs).map(|(a, b)| a * b).sum()).collect();
            if values.iter().zip(weights.heights()).all(|(l, h)| l <= h) {
                let tight: Vec<Subset> = values
                    .iter()
                    .zip(weights.heights())
                    .zip(&vertices)
                    .filter(|((l, h), _)| l == h)
                    .map(|(_, &v)| v)
                    .collect();
                cells.insert(tight);
            }
        }
        if !next_combination(&mut pick, vertices.len()) {
            break;
        }
    }
    cells.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersimplex::regular_subdivision;
    use crate::rational::int;
    use proptest::prelude::*;

    #[test]
    fn constant_weight_has_one_cell() {
        let w = WeightFunction::from_fn(2, 4, |_| int(3)).unwrap();
        assert_eq!(brute_force_cells(&w).len(), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn engine_matches_brute_force(
            n in 4usize..=6,
            k_seed in 0usize..10,
            seed in proptest::collection::vec(-3i64..=3, 20),
        ) {
            let k = 1 + k_seed % (n - 1);
            let w = WeightFunction::from_fn(k, n, |s| int(seed[crate::subset::rank_unchecked(s) % 20])).unwrap();
            prop_assert_eq!(regular_subdivision(&w).cell_vertex_sets(), brute_force_cells(&w));
        }
    }
}
