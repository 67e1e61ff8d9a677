//! Acceptance criteria 1 to 9, one pass/fail line each.
//!
//! Runs without the libtest harness so that every line is printed even when
//! output capture is on. The process exits with status 1 if any criterion
//! fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use ksplit_core::compatibility::{
    is_k_weakly_compatible, is_weakly_compatible_classic, split_defining_blocks, validate_witness_point, witness_point,
};
use ksplit_core::decomposition::{
    bandelt_dress_isolation_index, nontrivial_split_index, split_decompose_with, trivial_projection,
    trivial_split_index_paper, SplitIndexer, TrivialMode,
};
use ksplit_core::dissimilarity::split_dissimilarity;
use ksplit_core::hypersimplex::{
    common_refinement, geometric_weak_compatibility, hs_splits_compatible, hyperplanes_meet_interior,
    is_split_defining_subset, regular_subdivision, subset_splits_compatible, HsSplit, Refinement, Subdivision,
};
use ksplit_core::rational::{frac, int};
use ksplit_core::subset::{all_subsets, ksubsets};
use ksplit_core::trees::{
    is_tree_realizable, k_dissimilarity_from_tree, random_tree, reconstruct_tree, tree_splits, PhyloTree,
};
use ksplit_core::{weight_of, KDissimilarityMap, Rational, Split, SplitSystem, Subset, WeightFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(condition: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

fn weight_range() -> (Rational, Rational) {
    (frac(1, 3), frac(7, 2))
}

fn tree(n: usize, seed: u64) -> PhyloTree {
    let (lo, hi) = weight_range();
    random_tree(n, seed, &lo, &hi).expect("valid tree parameters")
}

/// Grid of criterion 1: (k, n) with 200 seeds each.
fn tree_grid() -> Vec<(usize, usize, u64)> {
    let configs = (4..=10).map(|n| (2, n)).chain((5..=8).map(|n| (3, n)));
    configs.flat_map(|(k, n)| (0..200u64).map(move |seed| (k, n, seed))).collect()
}

fn criterion_1() -> Outcome {
    let grid = tree_grid();
    grid.par_iter().try_for_each(|&(k, n, seed)| {
        let t = tree(n, seed);
        let d = k_dissimilarity_from_tree(&t, k).map_err(|e| e.to_string())?;
        let rebuilt = reconstruct_tree(&d).map_err(|f| format!("k={k} n={n} seed={seed}: {f}"))?;
        ensure(rebuilt.is_isomorphic(&t), || format!("k={k} n={n} seed={seed}: tree differs"))
    })?;
    Ok(format!("{} trees reconstructed exactly", grid.len()))
}

/// A metric with values in `[12, 24]`, so the triangle inequality holds.
fn random_metric(n: usize, rng: &mut ChaCha8Rng) -> KDissimilarityMap {
    KDissimilarityMap::from_fn(2, n, |_| int(12) + frac(rng.gen_range(0..=72), 6)).expect("k = 2 < n")
}

fn criterion_2() -> Outcome {
    let cases: Vec<(usize, u64)> = (0..500u64).map(|i| (4 + (i % 4) as usize, i)).collect();
    let compared: usize = cases
        .par_iter()
        .map(|&(n, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let map = random_metric(n, &mut rng);
            let mut count = 0;
            for s in Split::all_nontrivial(n) {
                let geometric = nontrivial_split_index(&map, s).map_err(|e| e.to_string())?;
                let four_point = bandelt_dress_isolation_index(&map, s).map_err(|e| e.to_string())?;
                ensure(geometric == four_point, || format!("n={n} seed={seed} {s}: {geometric} != {four_point}"))?;
                count += 1;
            }
            Ok(count)
        })
        .collect::<Result<Vec<usize>, String>>()?
        .into_iter()
        .sum();
    Ok(format!("500 metrics, {compared} split indices equal"))
}

/// Every system of at most `max` nontrivial splits of `{1..n}`.
fn small_systems(n: usize, max: usize) -> Vec<SplitSystem> {
    fn rec(all: &[Split], start: usize, max: usize, chosen: &mut Vec<Split>, out: &mut Vec<SplitSystem>) {
        out.push(SplitSystem::new(chosen.clone()).expect("same ground set"));
        if chosen.len() == max {
            return;
        }
        for i in start..all.len() {
            chosen.push(all[i]);
            rec(all, i + 1, max, chosen, out);
            chosen.pop();
        }
    }
    let mut out = Vec::new();
    rec(&Split::all_nontrivial(n), 0, max, &mut Vec::new(), &mut out);
    out
}

fn random_systems(n: usize, count: u64) -> Vec<SplitSystem> {
    let all = Split::all_nontrivial(n);
    (0..count)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let size = rng.gen_range(2..=6);
            SplitSystem::new((0..size).map(|_| all[rng.gen_range(0..all.len())]).collect()).expect("same ground set")
        })
        .collect()
}

/// Systems of criterion 3: exhaustive for n in 4..=6, random at n = 7.
fn compatibility_grid() -> Vec<(usize, SplitSystem)> {
    let mut grid: Vec<(usize, SplitSystem)> =
        (4..=6).flat_map(|n| small_systems(n, 4).into_iter().map(move |s| (n, s))).collect();
    grid.extend(random_systems(7, 400).into_iter().map(|s| (7, s)));
    grid
}

fn criterion_3() -> Outcome {
    let grid = compatibility_grid();
    let negatives: usize = grid
        .par_iter()
        .map(|(n, system)| {
            let mut negatives = 0;
            for k in [2, 3] {
                let verdict = is_k_weakly_compatible(system, k).map_err(|e| e.to_string())?;
                let oracle = geometric_weak_compatibility(&split_defining_blocks(system, k), k, *n)
                    .map_err(|e| e.to_string())?;
                ensure(verdict.is_compatible() == oracle.is_none(), || {
                    format!("k={k} {system:?}: checker and oracle differ")
                })?;
                if let Some(w) = verdict.witness() {
                    negatives += 1;
                    w.validate().map_err(|e| format!("k={k} {system:?}: {e}"))?;
                    let x = witness_point(w).map_err(|e| e.to_string())?;
                    ensure(validate_witness_point(w, &x), || {
                        format!("k={k} {system:?}: witness point off a hyperplane")
                    })?;
                }
            }
            Ok(negatives)
        })
        .collect::<Result<Vec<usize>, String>>()?
        .into_iter()
        .sum();
    Ok(format!("{} systems x k in {{2,3}} agree, {negatives} witness points validated", grid.len()))
}

/// The two halves of `Δ(k, n)` cut by `Σ_A x = 1`, built combinatorially.
fn hyperplane_split(a: Subset, k: usize, n: usize) -> Subdivision {
    let vertices: Vec<Subset> = ksubsets(k, n).collect();
    let low = vertices.iter().copied().filter(|v| v.intersection(a).len() <= 1).collect();
    let high = vertices.iter().copied().filter(|v| !v.intersection(a).is_empty()).collect();
    Subdivision::from_cells(k, n, vec![low, high]).expect("full-dimensional halves")
}

fn criterion_4() -> Outcome {
    let mut count = 0;
    for n in 4..=7 {
        for k in [2, 3] {
            for s in Split::all_nontrivial(n) {
                let actual = regular_subdivision(&weight_of(&split_dissimilarity(s, k).map_err(|e| e.to_string())?));
                let (a, b) = (s.block_a(), s.block_b());
                let predicted = if a.len().min(b.len()) >= k {
                    match common_refinement(&hyperplane_split(a, k, n), &hyperplane_split(b, k, n)) {
                        Ok(Refinement::Refined(r)) => r,
                        other => return Err(format!("k={k} {s}: H_A and H_B do not refine: {other:?}")),
                    }
                } else if a.len().max(b.len()) >= k {
                    let defining = if a.len() < k { a } else { b };
                    hyperplane_split(defining, k, n)
                } else {
                    Subdivision::trivial(k, n).map_err(|e| e.to_string())?
                };
                ensure(actual.cell_vertex_sets() == predicted.cell_vertex_sets(), || {
                    format!("k={k} {s}: cells differ")
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} split subdivisions match"))
}

fn subset_weight(a: Subset, k: usize, n: usize) -> WeightFunction {
    WeightFunction::from_fn(k, n, |v| if v.is_disjoint(a) { int(k as i64) } else { int(0) }).expect("valid (k, n)")
}

fn criterion_5() -> Outcome {
    let mut singles = 0;
    let mut pairs = 0usize;
    for n in 4..=7 {
        for k in [2, 3] {
            let proper: Vec<Subset> = all_subsets(n).filter(|a| !a.is_empty() && a.len() < n).collect();
            for &a in &proper {
                let predicate = is_split_defining_subset(a, k, n).map_err(|e| e.to_string())?;
                let cells = regular_subdivision(&subset_weight(a, k, n)).len();
                let interior = hyperplanes_meet_interior(&[a], k, n).map_err(|e| e.to_string())?;
                ensure(predicate == (cells == 2) && predicate == interior, || {
                    format!("k={k} n={n} A={a}: predicate {predicate}, cells {cells}, interior {interior}")
                })?;
                singles += 1;
            }
            let defining: Vec<Subset> =
                proper.into_iter().filter(|a| is_split_defining_subset(*a, k, n).unwrap()).collect();
            let subdivisions: Vec<Subdivision> =
                defining.iter().map(|&a| regular_subdivision(&subset_weight(a, k, n))).collect();
            let checked = (0..defining.len())
                .into_par_iter()
                .map(|i| {
                    for j in i + 1..defining.len() {
                        let (a, b) = (defining[i], defining[j]);
                        let predicate = subset_splits_compatible(a, b, k, n);
                        let general = hs_splits_compatible(
                            HsSplit::from_subset(a, k, n).map_err(|e| e.to_string())?,
                            HsSplit::from_subset(b, k, n).map_err(|e| e.to_string())?,
                        )
                        .map_err(|e| e.to_string())?;
                        let interior = hyperplanes_meet_interior(&[a, b], k, n).map_err(|e| e.to_string())?;
                        let refined_cells = match common_refinement(&subdivisions[i], &subdivisions[j]) {
                            Ok(Refinement::Refined(r)) => r.len(),
                            _ => 0,
                        };
                        // at k = 2 the blocks of one split give the same hyperplane
                        let same = subdivisions[i].cell_vertex_sets() == subdivisions[j].cell_vertex_sets();
                        let engine = refined_cells == if same { 2 } else { 3 };
                        let separate = same || !interior;
                        ensure(predicate == general && predicate == separate && predicate == engine, || {
                            format!(
                                "k={k} n={n} A={a} B={b}: closed form {predicate}, general {general}, \
                                 interior {interior}, refinement cells {refined_cells}"
                            )
                        })?;
                    }
                    Ok(defining.len() - i - 1)
                })
                .collect::<Result<Vec<usize>, String>>()?;
            pairs += checked.into_iter().sum::<usize>();
        }
    }
    Ok(format!("{singles} hyperplanes and {pairs} pairs agree with engine and LP"))
}

fn random_map(k: usize, n: usize, rng: &mut ChaCha8Rng) -> KDissimilarityMap {
    KDissimilarityMap::from_fn(k, n, |_| frac(rng.gen_range(-20..=20), rng.gen_range(1..=6))).expect("k < n")
}

fn criterion_6() -> Outcome {
    let cases: Vec<(usize, usize, u64)> = (0..300u64)
        .map(|i| {
            let k = 2 + (i % 2) as usize;
            let n = k + 1 + ((i / 2) as usize % (7 - k));
            (k, n, i)
        })
        .collect();
    cases.par_iter().try_for_each(|&(k, n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = random_map(k, n, &mut rng);
        for mode in [TrivialMode::Paper, TrivialMode::Projection] {
            let d = split_decompose_with(&map, mode);
            ensure(d.recompose() == map, || format!("k={k} n={n} seed={seed} {mode:?}: recomposition differs"))?;
            let residual = SplitIndexer::new(&d.residual);
            for s in Split::all_nontrivial(n) {
                let alpha = residual.index(s).map_err(|e| e.to_string())?;
                ensure(alpha == int(0), || format!("k={k} n={n} seed={seed} {mode:?} {s}: residual index {alpha}"))?;
            }
        }
        Ok::<(), String>(())
    })?;
    Ok("300 maps recompose exactly with split-prime residuals in both trivial modes".into())
}

fn criterion_7() -> Outcome {
    let grid = tree_grid();
    let tree_checks: usize = grid
        .par_iter()
        .filter(|(k, _, _)| *k == 2)
        .map(|&(_, n, seed)| {
            let system = tree_splits(&tree(n, seed)).split_system();
            for k in 2..n {
                let verdict = is_k_weakly_compatible(&system, k).map_err(|e| e.to_string())?;
                ensure(verdict.is_compatible(), || format!("tree n={n} seed={seed} not {k}-weakly compatible"))?;
            }
            Ok(n - 2)
        })
        .collect::<Result<Vec<usize>, String>>()?
        .into_iter()
        .sum();
    let systems = compatibility_grid();
    let monotone: usize = systems
        .par_iter()
        .map(|(n, system)| {
            let top = n / 2;
            let verdicts: Vec<bool> = (2..=top)
                .map(|k| is_k_weakly_compatible(system, k).map(|v| v.is_compatible()))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let classic = is_weakly_compatible_classic(system).is_compatible();
            for (i, &passes) in verdicts.iter().enumerate() {
                if passes {
                    let k = i + 2;
                    ensure(verdicts[..i].iter().all(|&v| v) && classic, || {
                        format!("{system:?} passes at k={k} but fails below")
                    })?;
                }
            }
            Ok(verdicts.len())
        })
        .collect::<Result<Vec<usize>, String>>()?
        .into_iter()
        .sum();
    Ok(format!("{tree_checks} tree checks pass, {monotone} monotonicity checks pass (k <= n/2)"))
}

fn criterion_8() -> Outcome {
    let cases: Vec<u64> = (0..200).collect();
    let rejected: usize = cases
        .par_iter()
        .map(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = rng.gen_range(2..=3);
            let n = rng.gen_range(2 * k..=8);
            let t = tree(n, seed);
            let mut d = k_dissimilarity_from_tree(&t, k).map_err(|e| e.to_string())?;
            let rank = rng.gen_range(0..d.values().len());
            let epsilon = frac(rng.gen_range(1..=6), 3);
            let bumped = &d.values()[rank] + &epsilon;
            d.set_rank(rank, bumped);
            let subset = ksplit_core::ksubset_unrank(rank, k, n).map_err(|e| e.to_string())?;
            let weight = tree_splits(&t).weight(&Split::new(subset, n).map_err(|e| e.to_string())?).cloned();
            let absorbed = k == 2 && weight.is_some_and(|w| w >= &epsilon / int(2));
            let realizable = is_tree_realizable(&d).is_some();
            ensure(realizable == absorbed, || format!("seed={seed} k={k} n={n} {subset}: realizable = {realizable}"))?;
            Ok(usize::from(!realizable))
        })
        .collect::<Result<Vec<usize>, String>>()?
        .into_iter()
        .sum();
    ensure(rejected >= 100, || format!("only {rejected} perturbed maps rejected"))?;
    Ok(format!("{rejected} perturbed maps rejected, the rest are cherry-edge shortenings"))
}

fn criterion_9() -> Outcome {
    let star = k_dissimilarity_from_tree(
        &PhyloTree::new(5, (0..5).map(|v| ksplit_core::trees::Edge { u: v, v: 5, weight: int(1) }).collect())
            .map_err(|e| e.to_string())?,
        3,
    )
    .map_err(|e| e.to_string())?;
    ensure(star.values().iter().all(|v| *v == int(3)), || "unit star map is not constant 3".into())?;
    for a in 1..=5 {
        let closed = trivial_split_index_paper(&star, a).map_err(|e| e.to_string())?;
        ensure(closed == frac(3, 2), || format!("closed-formula index of {a} is {closed}"))?;
    }
    let (coefficients, remainder) = trivial_projection(&star);
    ensure(coefficients.iter().all(|c| *c == int(1)), || format!("projection coefficients {coefficients:?}"))?;
    ensure(remainder.is_zero(), || "projection remainder is nonzero".into())?;
    Ok("closed formula gives 3/2, projection gives 1 with zero remainder".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("tree round trip", criterion_1),
        ("k=2 four-point oracle", criterion_2),
        ("weak compatibility oracle", criterion_3),
        ("split subdivision trichotomy", criterion_4),
        ("split-defining and pair compatibility cross-checks", criterion_5),
        ("decomposition identity and idempotence", criterion_6),
        ("tree systems and monotonicity in k", criterion_7),
        ("perturbed tree maps", criterion_8),
        ("unit star trivial indices", criterion_9),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let message = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {message}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
