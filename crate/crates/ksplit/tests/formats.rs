//! File format round trips and report shapes.

use ksplit::formats::{
    parse_map, parse_splits, write_map, write_splits, DecompositionReport, MapFile, ReconstructionReport, SplitFile,
    SubdivisionDump, WitnessReport,
};
use ksplit::parallel;
use ksplit_core::compatibility::is_k_weakly_compatible;
use ksplit_core::decomposition::{split_decompose_with, TrivialMode};
use ksplit_core::hypersimplex::oracle::brute_force_cells;
use ksplit_core::hypersimplex::regular_subdivision;
use ksplit_core::rational::frac;
use ksplit_core::trees::{k_dissimilarity_from_tree, random_tree, reconstruct_tree};
use ksplit_core::{weight_of, KDissimilarityMap, Split, SplitSystem};
use proptest::prelude::*;
use serde_json::{json, Value};

fn map_strategy() -> impl Strategy<Value = KDissimilarityMap> {
    (2usize..=3, 0usize..=3).prop_flat_map(|(k, extra)| {
        let n = k + 1 + extra;
        let len = ksplit_core::binomial(n, k);
        prop::collection::vec((-50i64..=50, 1i64..=9), len).prop_map(move |values| {
            KDissimilarityMap::new(k, n, values.into_iter().map(|(p, q)| frac(p, q)).collect()).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn map_files_round_trip(map in map_strategy()) {
        prop_assert_eq!(parse_map(&write_map(&map)).unwrap(), map);
    }

    #[test]
    fn split_files_round_trip(n in 4usize..=8, picks in prop::collection::vec((any::<prop::sample::Index>(), prop::option::of(1i64..20)), 1..6)) {
        let all = Split::all(n);
        let splits = picks.iter().map(|(i, w)| (*i.get(&all), w.map(|w| frac(w, 3)))).collect();
        // every split names all of X, so the inferred n is exact
        let file = SplitFile { n, splits };
        prop_assert_eq!(parse_splits(&write_splits(&file), None).unwrap(), file);
    }

    #[test]
    fn subdivision_dump_matches_oracle(map in map_strategy()) {
        prop_assume!(map.n() <= 5);
        let w = weight_of(&map);
        let engine = SubdivisionDump::from_subdivision(&regular_subdivision(&w));
        let oracle = SubdivisionDump::from_cells(map.k(), map.n(), &brute_force_cells(&w));
        prop_assert_eq!(serde_json::to_string(&engine).unwrap(), serde_json::to_string(&oracle).unwrap());
    }
}

#[test]
fn map_file_layout() {
    let map = KDissimilarityMap::from_fn(2, 3, |s| frac(s.0 as i64, 2)).unwrap();
    let value: Value = serde_json::from_str(&write_map(&map)).unwrap();
    assert_eq!(
        value,
        json!({"n": 3, "k": 2, "entries": [
            {"subset": [1, 2], "value": "3/2"},
            {"subset": [1, 3], "value": "5/2"},
            {"subset": [2, 3], "value": "3"}
        ]})
    );
    let extra = r#"{"n":3,"k":2,"entries":[],"note":1}"#;
    assert!(serde_json::from_str::<MapFile>(extra).is_err());
}

#[test]
fn decomposition_report_layout() {
    let split = Split::parse("1 2 | 3 4 5 6", 6).unwrap();
    let map = ksplit_core::decomposition::weighted_split_map(split, 3, &frac(5, 2)).unwrap();
    let d = split_decompose_with(&map, TrivialMode::Paper);
    let value = serde_json::to_value(DecompositionReport::from_decomposition(&d)).unwrap();
    assert_eq!(value["nontrivial"], json!([{"split": "1 2 | 3 4 5 6", "alpha": "5/2"}]));
    assert_eq!(value["trivial"], json!({"1": "0", "2": "0", "3": "0", "4": "0", "5": "0", "6": "0"}));
    assert_eq!(value["residual_zero"], json!(true));
    assert_eq!(value["residual"]["entries"].as_array().unwrap().len(), 20);
}

#[test]
fn witness_report_layout() {
    let splits = parse_splits("1 2 | 3 4\n1 3 | 2 4\n1 4 | 2 3\n", None).unwrap();
    let system = SplitSystem::new(splits.splits()).unwrap();
    let verdict = is_k_weakly_compatible(&system, 2).unwrap();
    let report = WitnessReport::from_witness(verdict.witness().unwrap()).unwrap();
    let value = serde_json::to_value(&report).unwrap();
    assert_eq!(value["kind"], "A");
    assert!(value.get("nu").is_none());
    assert_eq!(value["complement_size"], 0);
    assert_eq!(value["point"], json!(["1/2", "1/2", "1/2", "1/2"]));
    assert_eq!(value["splits"].as_array().unwrap().len(), 3);
}

#[test]
fn reconstruction_report_extends_decomposition_report() {
    let tree = random_tree(6, 3, &frac(1, 2), &frac(5, 1)).unwrap();
    let map = k_dissimilarity_from_tree(&tree, 3).unwrap();
    let d = parallel::decompose(&map, TrivialMode::Projection, 2).unwrap();
    let report = ReconstructionReport::new(&d, &reconstruct_tree(&map));
    let value = serde_json::to_value(&report).unwrap();
    let keys: Vec<&String> = value.as_object().unwrap().keys().collect();
    for key in ["nontrivial", "trivial", "residual_zero", "residual", "tree", "verified"] {
        assert!(keys.iter().any(|k| *k == key), "missing {key}");
    }
    assert_eq!(value["verified"], json!(true));
    assert!(value.get("failure").is_none());
    assert!(parallel::reconstruct(&map, 3).unwrap().is_isomorphic(&tree));
}
