//! Fraction-free integer linear algebra.
//!
//! The geometry runs first over checked `i128` and falls back to `BigInt`
//! when an intermediate value overflows. Every routine is written against
//! the small [`Int`] trait and reports overflow as `None`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) trait Int: Clone + Ord + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Exact division; the caller guarantees divisibility.
    fn div_exact(&self, o: &Self) -> Self;
    /// Non-negative gcd.
    fn gcd(&self, o: &Self) -> Self;
    fn signum(&self) -> i32;
    fn is_zero(&self) -> bool {
        self.signum() == 0
    }
    fn abs(&self) -> Option<Self> {
        if self.signum() < 0 {
            self.neg()
        } else {
            Some(self.clone())
        }
    }
}

impl Int for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.unsigned_abs(), o.unsigned_abs());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        // gcd of two i128 magnitudes fits unless both are i128::MIN
        a.min(i128::MAX as u128) as i128
    }
    fn signum(&self) -> i32 {
        i128::signum(*self) as i32
    }
}

impl Int for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn signum(&self) -> i32 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
}

/// Dot product.
pub(crate) fn dot<T: Int>(a: &[T], b: &[T]) -> Option<T> {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc.add(&x.mul(y)?)?;
        }
    }
    Some(acc)
}

/// Divides a vector by the gcd of its entries. Zero vectors are unchanged.
pub(crate) fn primitive<T: Int>(v: &mut [T]) {
    let mut g = T::zero();
    for x in v.iter() {
        g = g.gcd(x);
    }
    if !g.is_zero() && g != T::one() {
        for x in v.iter_mut() {
            *x = x.div_exact(&g);
        }
    }
}

/// `a * u - b * v`, entrywise.
pub(crate) fn combine<T: Int>(a: &T, u: &[T], b: &T, v: &[T]) -> Option<Vec<T>> {
    u.iter().zip(v).map(|(x, y)| a.mul(x)?.sub(&b.mul(y)?)).collect()
}

/// Fraction-free Gauss-Jordan reduction. Returns the reduced rows and the
/// pivot column of each. Every pivot column is zero outside its pivot row.
pub(crate) fn reduce<T: Int>(rows: &[Vec<T>], width: usize) -> Option<(Vec<Vec<T>>, Vec<usize>)> {
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let (pv, f) = (m[r][c].clone(), m[i][c].clone());
                let mut row = combine(&pv, &m[i], &f, &m[r])?;
                primitive(&mut row);
                m[i] = row;
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Some((m, pivots))
}

pub(crate) fn rank<T: Int>(rows: &[Vec<T>], width: usize) -> Option<usize> {
    Some(reduce(rows, width)?.1.len())
}

/// Integer basis of the right null space `{z : rows * z = 0}`.
pub(crate) fn nullspace<T: Int>(rows: &[Vec<T>], width: usize) -> Option<Vec<Vec<T>>> {
    let (m, pivots) = reduce(rows, width)?;
    let mut basis = Vec::new();
    for f in (0..width).filter(|c| !pivots.contains(c)) {
        let mut scale = T::one();
        for (row, &c) in m.iter().zip(&pivots) {
            let p = row[c].abs()?;
            let g = scale.gcd(&p);
            scale = scale.mul(&p.div_exact(&g))?;
        }
        let mut z = vec![T::zero(); width];
        z[f] = scale.clone();
        for (row, &c) in m.iter().zip(&pivots) {
            // row[c] * z_c + row[f] * scale = 0
            z[c] = row[f].mul(&scale.div_exact(&row[c]))?.neg()?;
        }
        primitive(&mut z);
        basis.push(z);
    }
    Some(basis)
}

/// Determinant of a square matrix by Bareiss elimination.
pub(crate) fn determinant<T: Int>(matrix: &[Vec<T>]) -> Option<T> {
    let n = matrix.len();
    let mut m = matrix.to_vec();
    let mut sign = 1;
    let mut prev = T::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Some(T::zero());
        };
        if p != c {
            m.swap(p, c);
            sign = -sign;
        }
        for i in c + 1..n {
            for j in c + 1..n {
                let v = m[c][c].mul(&m[i][j])?.sub(&m[i][c].mul(&m[c][j])?)?;
                m[i][j] = v.div_exact(&prev);
            }
        }
        prev = m[c][c].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        det.neg()
    } else {
        Some(det)
    }
}

/// Solves a square system by Cramer's rule. Returns `(numerators, denominator)`
/// with a positive denominator, or `None` inside `Some` when singular.
pub(crate) fn solve_square<T: Int>(matrix: &[Vec<T>], rhs: &[T]) -> Option<Option<(Vec<T>, T)>> {
    let n = matrix.len();
    let mut det = determinant(matrix)?;
    if det.is_zero() {
        return Some(None);
    }
    let mut numerators = Vec::with_capacity(n);
    for j in 0..n {
        let replaced: Vec<Vec<T>> = matrix
            .iter()
            .zip(rhs)
            .map(|(row, b)| {
                let mut r = row.clone();
                r[j] = b.clone();
                r
            })
            .collect();
        numerators.push(determinant(&replaced)?);
    }
    if det.signum() < 0 {
        det = det.neg()?;
        for x in numerators.iter_mut() {
            *x = x.neg()?;
        }
    }
    Some(Some((numerators, det)))
}

/// Runs `f` over `i128`, retrying over `BigInt` if it overflowed.
pub(crate) fn with_fallback<R>(small: impl FnOnce() -> Option<R>, big: impl FnOnce() -> Option<R>) -> R {
    match small() {
        Some(r) => r,
        None => big().expect("arbitrary precision arithmetic cannot overflow"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i128]]) -> Vec<Vec<i128>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn nullspace_of_rank_deficient_matrix() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let ns = nullspace(&a, 3).unwrap();
        assert_eq!(ns.len(), 1);
        for row in &a {
            assert_eq!(dot(row, &ns[0]).unwrap(), 0);
        }
        assert_eq!(rank(&a, 3).unwrap(), 2);
    }

    #[test]
    fn determinant_and_solve() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(determinant(&a).unwrap(), 18);
        let (x, d) = solve_square(&a, &[3, 5, 5]).unwrap().unwrap();
        for (row, b) in a.iter().zip([3i128, 5, 5]) {
            assert_eq!(dot(row, &x).unwrap(), b * d);
        }
        let singular = m(&[&[1, 2], &[2, 4]]);
        assert!(solve_square(&singular, &[1, 2]).unwrap().is_none());
    }

    #[test]
    fn i128_overflow_is_reported() {
        let big = i128::MAX / 2;
        assert!(big.mul(&3).is_none());
        let r = with_fallback(|| big.mul(&3).map(|v| v.to_big()), || Some(BigInt::from(big) * 3));
        assert_eq!(r, BigInt::from(big) * 3);
    }

    #[test]
    fn bigint_matches_i128() {
        let a = m(&[&[3, -1, 4, 1], &[5, 9, -2, 6], &[5, 3, 5, -8]]);
        let big: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let ns_small = nullspace(&a, 4).unwrap();
        let ns_big = nullspace(&big, 4).unwrap();
        let converted: Vec<Vec<BigInt>> = ns_small.iter().map(|r| r.iter().map(|x| x.to_big()).collect()).collect();
        assert_eq!(converted, ns_big);
    }
}
