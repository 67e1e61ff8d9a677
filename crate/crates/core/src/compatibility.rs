//! Compatibility, weak compatibility and k-weak compatibility of splits.
//!
//! A split system is k-weakly compatible iff the family of its
//! split-defining blocks admits none of three forbidden configurations:
//!
//! * kind A, a star: points `i_0, ..., i_3` and sets `A_1, A_2, A_3` with
//!   `i_m ∈ A_l ⟺ m ∈ {0, l}` and at least `k - 2` elements outside the sets;
//! * kind B, an odd cycle of length `2ν + 1` with `1 <= ν < k`, where each
//!   set holds two consecutive points, and `k - ν` elements outside;
//! * kind C, a cycle of length `7 <= ν < 3k`, `ν ≢ 0 (mod 3)`, where each set
//!   holds three consecutive points, and `k - ⌊ν/3⌋` elements outside.
//!
//! Each configuration yields a face of `Δ(k, n)` meeting the hyperplanes of
//! its sets in a single non-vertex point, see [`witness_point`].

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::hypersimplex::{check_kn, split_defining};
use crate::rational::{frac, int, Rational};
use crate::split::{Split, SplitSystem};
use crate::subset::Subset;

/// `true` iff one of the four block intersections is empty.
pub fn splits_compatible(s1: Split, s2: Split) -> Result<bool> {
    if s1.n() != s2.n() {
        return Err(Error::DimensionMismatch { k1: 0, n1: s1.n(), k2: 0, n2: s2.n() });
    }
    Ok(s1.blocks().iter().any(|a| s2.blocks().iter().any(|c| a.is_disjoint(*c))))
}

/// `true` iff the splits are pairwise compatible.
pub fn is_compatible_system(system: &SplitSystem) -> bool {
    let splits = system.splits();
    splits
        .iter()
        .enumerate()
        .all(|(i, &s)| splits[i + 1..].iter().all(|&t| splits_compatible(s, t).expect("common ground set")))
}

/// The three forbidden configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WitnessKind {
    A,
    B,
    C,
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessKind::A => "A",
            WitnessKind::B => "B",
            WitnessKind::C => "C",
        })
    }
}

/// A forbidden configuration found in a family of blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenWitness {
    pub kind: WitnessKind,
    /// `ν` for kinds B and C.
    pub nu: Option<usize>,
    /// `i_0, ..., i_3` for kind A and `i_1, ..., i_L` for the cycles.
    pub points: Vec<usize>,
    /// The sets `A_l`; for split systems `A_l = S_l(i_0)` resp. `S_l(i_l)`.
    pub sets: Vec<Subset>,
    /// Number of elements outside the union of the sets.
    pub complement_size: usize,
    pub k: usize,
    pub n: usize,
}

impl ForbiddenWitness {
    /// The splits `{A_l, X \ A_l}`.
    pub fn splits(&self) -> Vec<Split> {
        self.sets.iter().map(|&a| Split::new(a, self.n).expect("proper nonempty block")).collect()
    }

    fn cycle_width(&self) -> usize {
        match self.kind {
            WitnessKind::A => 0,
            WitnessKind::B => 2,
            WitnessKind::C => 3,
        }
    }

    /// Lower bound on the complement size required by the kind.
    fn required_complement(&self) -> Option<usize> {
        let needed = match (self.kind, self.nu) {
            (WitnessKind::A, None) => 2,
            (WitnessKind::B, Some(nu)) => nu,
            (WitnessKind::C, Some(nu)) => nu / 3,
            _ => return None,
        };
        Some(self.k.saturating_sub(needed))
    }

    /// Rechecks the membership pattern and the cardinality bound.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidWitness(msg.to_string()));
        let (k, n) = (self.k, self.n);
        if k < 2 || k >= n {
            return Err(Error::KOutOfRange { k, n });
        }
        let len = match (self.kind, self.nu) {
            (WitnessKind::A, None) => 3,
            (WitnessKind::B, Some(nu)) if (1..k).contains(&nu) => 2 * nu + 1,
            (WitnessKind::C, Some(nu)) if nu >= 7 && nu < 3 * k && nu % 3 != 0 => nu,
            _ => return bad("ν out of range for the kind"),
        };
        let point_count = if self.kind == WitnessKind::A { 4 } else { len };
        if self.sets.len() != len || self.points.len() != point_count {
            return bad("wrong number of points or sets");
        }
        let mut seen = Subset::default();
        for &p in &self.points {
            if p == 0 || p > n || seen.contains(p) {
                return bad("points must be distinct elements of the ground set");
            }
            seen = seen.insert(p);
        }
        for (l, set) in self.sets.iter().enumerate() {
            for (m, &p) in self.points.iter().enumerate() {
                let expected = match self.kind {
                    WitnessKind::A => m == 0 || m == l + 1,
                    _ => (m + len - l) % len < self.cycle_width(),
                };
                if set.contains(p) != expected {
                    return bad("membership pattern violated");
                }
            }
        }
        let union = self.sets.iter().fold(Subset::default(), |u, s| u.union(*s));
        let outside = n - union.len();
        if outside != self.complement_size {
            return bad("complement size does not match the sets");
        }
        if outside < self.required_complement().expect("kind and ν checked") {
            return bad("too few elements outside the sets");
        }
        Ok(())
    }
}

/// Outcome of a weak-compatibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeakCompatibility {
    Compatible,
    Forbidden(ForbiddenWitness),
}

impl WeakCompatibility {
    pub fn is_compatible(&self) -> bool {
        matches!(self, WeakCompatibility::Compatible)
    }

    pub fn witness(&self) -> Option<&ForbiddenWitness> {
        match self {
            WeakCompatibility::Compatible => None,
            WeakCompatibility::Forbidden(w) => Some(w),
        }
    }
}

fn from_option(found: Option<ForbiddenWitness>) -> WeakCompatibility {
    found.map_or(WeakCompatibility::Compatible, WeakCompatibility::Forbidden)
}

/// Blocks of the splits in a system, in split order, without repetition.
fn blocks_of(system: &SplitSystem) -> Vec<Subset> {
    let mut blocks: Vec<Subset> = Vec::new();
    for s in system.iter() {
        for b in s.blocks() {
            if !blocks.contains(&b) {
                blocks.push(b);
            }
        }
    }
    blocks
}

/// The split-defining blocks of a system: the family whose hypersimplex
/// splits decide k-weak compatibility.
pub fn split_defining_blocks(system: &SplitSystem, k: usize) -> Vec<Subset> {
    let Some(first) = system.splits().first() else {
        return Vec::new();
    };
    let n = first.n();
    blocks_of(system).into_iter().filter(|b| split_defining(*b, k, n)).collect()
}

/// Classic weak compatibility: no distinct `i_0, ..., i_3` and splits
/// `S_1, S_2, S_3` with `S_l(i_0) = S_l(i_m) ⟺ m = l`.
pub fn is_weakly_compatible_classic(system: &SplitSystem) -> WeakCompatibility {
    let Some(first) = system.splits().first() else {
        return WeakCompatibility::Compatible;
    };
    let n = first.n();
    if n < 4 {
        return WeakCompatibility::Compatible;
    }
    from_option(find_star(&blocks_of(system), 2, n, 0))
}

/// Decides k-weak compatibility of a split system.
pub fn is_k_weakly_compatible(system: &SplitSystem, k: usize) -> Result<WeakCompatibility> {
    let Some(first) = system.splits().first() else {
        if k < 2 {
            return Err(Error::KOutOfRange { k, n: 0 });
        }
        return Ok(WeakCompatibility::Compatible);
    };
    let n = first.n();
    check_kn(k, n)?;
    if k < 2 {
        return Err(Error::KOutOfRange { k, n });
    }
    Ok(from_option(search(&split_defining_blocks(system, k), k, n)))
}

/// Decides weak compatibility of the hypersimplex splits `S_A`, `A ∈ M`.
pub fn family_weakly_compatible(family: &[Subset], k: usize, n: usize) -> Result<WeakCompatibility> {
    check_kn(k, n)?;
    if k < 2 {
        return Err(Error::KOutOfRange { k, n });
    }
    let mut members: Vec<Subset> = Vec::new();
    for &a in family {
        crate::hypersimplex::SubsetHyperplane::new(a, n)?;
        if !split_defining(a, k, n) {
            return Err(Error::NotSplitDefining(a));
        }
        if !members.contains(&a) {
            members.push(a);
        }
    }
    Ok(from_option(search(&members, k, n)))
}

fn search(family: &[Subset], k: usize, n: usize) -> Option<ForbiddenWitness> {
    if n >= 4 {
        if let Some(w) = find_star(family, k, n, k - 2) {
            return Some(w);
        }
    }
    for nu in 1..k {
        if let Some(w) = find_cycle(family, k, n, WitnessKind::B, nu) {
            return Some(w);
        }
    }
    for nu in (7..3 * k).filter(|nu| nu % 3 != 0) {
        if let Some(w) = find_cycle(family, k, n, WitnessKind::C, nu) {
            return Some(w);
        }
    }
    None
}

fn find_star(family: &[Subset], k: usize, n: usize, bound: usize) -> Option<ForbiddenWitness> {
    for i0 in 1..=n {
        let around: Vec<Subset> = family.iter().copied().filter(|a| a.contains(i0)).collect();
        for (x, &a1) in around.iter().enumerate() {
            for (y, &a2) in around.iter().enumerate().skip(x + 1) {
                for &a3 in &around[y + 1..] {
                    let union = a1.union(a2).union(a3);
                    if n - union.len() < bound {
                        continue;
                    }
                    let only = |a: Subset, b: Subset, c: Subset| a.difference(b.union(c)).min();
                    if let (Some(i1), Some(i2), Some(i3)) = (only(a1, a2, a3), only(a2, a1, a3), only(a3, a1, a2)) {
                        return Some(ForbiddenWitness {
                            kind: WitnessKind::A,
                            nu: None,
                            points: alloc::vec![i0, i1, i2, i3],
                            sets: alloc::vec![a1, a2, a3],
                            complement_size: n - union.len(),
                            k,
                            n,
                        });
                    }
                }
            }
        }
    }
    None
}

/// Depth-first search for a cycle of `len` points and `len` sets in which
/// set `l` holds exactly the points `l, ..., l + width - 1` (mod `len`).
struct CycleSearch<'a> {
    family: &'a [Subset],
    n: usize,
    len: usize,
    width: usize,
    bound: usize,
    points: Vec<usize>,
    sets: Vec<Option<Subset>>,
}

#[derive(Clone, Copy)]
enum Step {
    Point(usize),
    Set(usize),
}

impl CycleSearch<'_> {
    fn holds(&self, l: usize, m: usize) -> bool {
        (m + self.len - l) % self.len < self.width
    }

    fn steps(&self) -> Vec<Step> {
        // each set is chosen before its last point, which is drawn from it
        let mut steps: Vec<Step> = (0..self.width - 1).map(Step::Point).collect();
        for l in 0..self.len {
            steps.push(Step::Set(l));
            if l + self.width - 1 < self.len {
                steps.push(Step::Point(l + self.width - 1));
            }
        }
        steps
    }

    fn point_fits(&self, m: usize, p: usize) -> bool {
        if m > 0 && p <= self.points[0] {
            return false;
        }
        if self.points.iter().enumerate().any(|(j, &q)| j != m && q == p) {
            return false;
        }
        self.sets.iter().enumerate().all(|(l, s)| s.is_none_or(|s| s.contains(p) == self.holds(l, m)))
    }

    fn set_fits(&self, l: usize, a: Subset) -> bool {
        if self.points.iter().enumerate().any(|(m, &p)| p != 0 && a.contains(p) != self.holds(l, m)) {
            return false;
        }
        let union = self.sets.iter().flatten().fold(a, |u, s| u.union(*s));
        self.n - union.len() >= self.bound
    }

    fn run(&mut self, steps: &[Step]) -> bool {
        let Some((&step, rest)) = steps.split_first() else {
            return true;
        };
        match step {
            Step::Point(m) => {
                let candidates: Vec<usize> = if m + 1 < self.width {
                    (1..=self.n).collect()
                } else {
                    self.sets[m + 1 - self.width].expect("assigned before").elements()
                };
                for p in candidates {
                    if self.point_fits(m, p) {
                        self.points[m] = p;
                        if self.run(rest) {
                            return true;
                        }
                        self.points[m] = 0;
                    }
                }
            }
            Step::Set(l) => {
                for &a in self.family {
                    if self.set_fits(l, a) {
                        self.sets[l] = Some(a);
                        if self.run(rest) {
                            return true;
                        }
                        self.sets[l] = None;
                    }
                }
            }
        }
        false
    }
}

fn find_cycle(family: &[Subset], k: usize, n: usize, kind: WitnessKind, nu: usize) -> Option<ForbiddenWitness> {
    let (len, width, bound) = match kind {
        WitnessKind::B => (2 * nu + 1, 2, k - nu),
        WitnessKind::C => (nu, 3, k - nu / 3),
        WitnessKind::A => unreachable!("stars are searched separately"),
    };
    if len > n || family.len() < len {
        return None;
    }
    let mut search =
        CycleSearch { family, n, len, width, bound, points: alloc::vec![0; len], sets: alloc::vec![None; len] };
    let steps = search.steps();
    if !search.run(&steps) {
        return None;
    }
    let sets: Vec<Subset> = search.sets.into_iter().map(|s| s.expect("complete")).collect();
    let union = sets.iter().fold(Subset::default(), |u, s| u.union(*s));
    Some(ForbiddenWitness { kind, nu: Some(nu), points: search.points, sets, complement_size: n - union.len(), k, n })
}

/// The non-vertex point cut out by a witness: coordinates 1 on a set `B` of
/// outside elements (minus one element `m` for the cycles), `½` resp. `⅓`
/// on the witness points and `x_m` chosen so that the coordinates sum to `k`.
pub fn witness_point(witness: &ForbiddenWitness) -> Result<Vec<Rational>> {
    witness.validate()?;
    let (k, n) = (witness.k, witness.n);
    let union = witness.sets.iter().fold(Subset::default(), |u, s| u.union(*s));
    let outside = Subset::full(n).difference(union).elements();
    let mut x = alloc::vec![int(0); n];
    let (share, ones) = match witness.kind {
        WitnessKind::A => (frac(1, 2), k - 2),
        WitnessKind::B => (frac(1, 2), k - witness.nu.expect("validated")),
        WitnessKind::C => (frac(1, 3), k - witness.nu.expect("validated") / 3),
    };
    for &p in &witness.points {
        x[p - 1] = share.clone();
    }
    for &b in &outside[..ones] {
        x[b - 1] = int(1);
    }
    if witness.kind != WitnessKind::A {
        // the remaining mass sits on m, the first chosen outside element
        let m = outside[0];
        x[m - 1] = int(0);
        let total: Rational = x.iter().sum();
        x[m - 1] = int(k as i64) - total;
    }
    Ok(x)
}

/// Checks that `x` lies in `Δ(k, n)`, on every hyperplane `Σ_A x = 1` of the
/// witness, and is not a vertex.
pub fn validate_witness_point(witness: &ForbiddenWitness, x: &[Rational]) -> bool {
    use num_traits::{One, Zero};
    let zero = Rational::zero();
    let one = Rational::one();
    x.len() == witness.n
        && x.iter().all(|v| *v >= zero && *v <= one)
        && x.iter().sum::<Rational>() == int(witness.k as i64)
        && witness.sets.iter().all(|a| a.iter().map(|i| &x[i - 1]).sum::<Rational>() == one)
        && x.iter().any(|v| *v != zero && *v != one)
}
