//! JSON and text file formats.
//!
//! Rationals are written as `"p"` or `"p/q"` strings. Subsets and k-subsets
//! are ascending lists of 1-based elements.

use ksplit_core::compatibility::{witness_point, ForbiddenWitness};
use ksplit_core::decomposition::SplitDecomposition;
use ksplit_core::hypersimplex::{FacePoset, Subdivision};
use ksplit_core::rational::parse_rational;
use ksplit_core::subset::MAX_N;
use ksplit_core::trees::{emit_newick, PhyloTree, ReconstructionFailure};
use ksplit_core::{binomial, KDissimilarityMap, Rational, Split, Subset};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

/// Errors raised while reading a file format.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] ksplit_core::Error),
    #[error("{0}")]
    Invalid(String),
    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<FormatError>,
    },
}

pub type Result<T> = std::result::Result<T, FormatError>;

fn invalid(message: impl Into<String>) -> FormatError {
    FormatError::Invalid(message.into())
}

/// One `{"subset": [...], "value": "p/q"}` record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEntry {
    pub subset: Vec<usize>,
    pub value: String,
}

/// The dissimilarity map file `{"n", "k", "entries"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub n: usize,
    pub k: usize,
    pub entries: Vec<MapEntry>,
}

impl MapFile {
    /// Entries in colex order of their subsets.
    pub fn from_map(map: &KDissimilarityMap) -> Self {
        let entries = map.iter().map(|(s, v)| MapEntry { subset: s.elements(), value: v.to_string() }).collect();
        MapFile { n: map.n(), k: map.k(), entries }
    }

    /// Validates every entry and requires each k-subset exactly once.
    pub fn to_map(&self) -> Result<KDissimilarityMap> {
        let (n, k) = (self.n, self.k);
        if n == 0 || n > MAX_N {
            return Err(invalid(format!("n = {n} is out of range 1..={MAX_N}")));
        }
        if k == 0 || k > n {
            return Err(invalid(format!("k = {k} is out of range 1..={n}")));
        }
        let expected = binomial(n, k);
        let mut values: Vec<Option<Rational>> = vec![None; expected];
        for entry in &self.entries {
            if entry.subset.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid(format!("subset {:?} is not strictly ascending", entry.subset)));
            }
            if entry.subset.len() != k {
                return Err(invalid(format!("subset {:?} does not have {k} elements", entry.subset)));
            }
            let subset = Subset::from_sorted(&entry.subset, n)?;
            let rank = ksplit_core::ksubset_rank(subset, k, n)?;
            if values[rank].is_some() {
                return Err(invalid(format!("duplicate entry for subset {:?}", entry.subset)));
            }
            values[rank] = Some(parse_rational(&entry.value)?);
        }
        let mut out = Vec::with_capacity(expected);
        for (rank, value) in values.into_iter().enumerate() {
            match value {
                Some(v) => out.push(v),
                None => {
                    let missing = ksplit_core::ksubset_unrank(rank, k, n)?;
                    return Err(invalid(format!("missing entry for subset {:?}", missing.elements())));
                }
            }
        }
        Ok(KDissimilarityMap::new(k, n, out)?)
    }
}

pub fn parse_map(text: &str) -> Result<KDissimilarityMap> {
    serde_json::from_str::<MapFile>(text)?.to_map()
}

pub fn write_map(map: &KDissimilarityMap) -> String {
    to_json(&MapFile::from_map(map))
}

/// A split file: one split per line, optionally weighted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitFile {
    pub n: usize,
    pub splits: Vec<(Split, Option<Rational>)>,
}

impl SplitFile {
    pub fn splits(&self) -> Vec<Split> {
        self.splits.iter().map(|(s, _)| *s).collect()
    }
}

fn parse_elements(text: &str) -> Result<Vec<usize>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| invalid(format!("bad element {t:?}"))))
        .collect()
}

fn parse_split_line(line: &str) -> Result<(Vec<usize>, Vec<usize>, Option<Rational>)> {
    let (body, weight) = match line.split_once(':') {
        Some((b, w)) => (b, Some(parse_rational(w)?)),
        None => (line, None),
    };
    let (left, right) = body.split_once('|').ok_or_else(|| invalid("missing '|'"))?;
    Ok((parse_elements(left)?, parse_elements(right)?, weight))
}

/// Parses a split file. Blank lines and `#` comments are skipped.
///
/// Without `n` the ground set size is the largest element mentioned.
pub fn parse_splits(text: &str, n: Option<usize>) -> Result<SplitFile> {
    let mut raw = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parsed = parse_split_line(line).map_err(|e| FormatError::Line { line: idx + 1, source: Box::new(e) })?;
        raw.push((idx + 1, parsed));
    }
    if raw.is_empty() {
        return Err(invalid("split file contains no splits"));
    }
    let inferred = raw.iter().flat_map(|(_, (a, b, _))| a.iter().chain(b.iter()).copied()).max().unwrap_or(0);
    let n = n.unwrap_or(inferred);
    let mut splits = Vec::with_capacity(raw.len());
    for (line, (a, b, weight)) in raw {
        let at = |e: ksplit_core::Error| FormatError::Line { line, source: Box::new(e.into()) };
        let split =
            Split::from_blocks(Subset::from_elements(&a, n).map_err(at)?, Subset::from_elements(&b, n).map_err(at)?, n)
                .map_err(at)?;
        splits.push((split, weight));
    }
    Ok(SplitFile { n, splits })
}

pub fn write_splits(file: &SplitFile) -> String {
    let mut out = String::new();
    for (split, weight) in &file.splits {
        match weight {
            Some(w) => out.push_str(&format!("{split} : {w}\n")),
            None => out.push_str(&format!("{split}\n")),
        }
    }
    out
}

/// The subdivision dump `{"k", "n", "cells"}` with cells canonically sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionDump {
    pub k: usize,
    pub n: usize,
    pub cells: Vec<Vec<Vec<usize>>>,
}

impl SubdivisionDump {
    /// Vertices inside a cell and cells themselves sorted lexicographically.
    pub fn from_cells(k: usize, n: usize, cells: &[Vec<Subset>]) -> Self {
        let mut cells: Vec<Vec<Vec<usize>>> = cells
            .iter()
            .map(|cell| {
                let mut vs: Vec<Vec<usize>> = cell.iter().map(|v| v.elements()).collect();
                vs.sort();
                vs
            })
            .collect();
        cells.sort();
        SubdivisionDump { k, n, cells }
    }

    pub fn from_subdivision(subdivision: &Subdivision) -> Self {
        Self::from_cells(subdivision.k(), subdivision.n(), &subdivision.cell_vertex_sets())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetNode {
    pub id: usize,
    pub dim: usize,
    pub vertices: Vec<Vec<usize>>,
}

/// The face poset dump `{"nodes", "covers"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetDump {
    pub nodes: Vec<PosetNode>,
    pub covers: Vec<[usize; 2]>,
}

impl PosetDump {
    pub fn from_poset(poset: &FacePoset) -> Self {
        let nodes = poset
            .faces
            .iter()
            .enumerate()
            .map(|(id, f)| PosetNode { id, dim: f.dim, vertices: f.vertices.iter().map(|v| v.elements()).collect() })
            .collect();
        let mut covers: Vec<[usize; 2]> = poset.covers.iter().map(|&(lo, hi)| [lo, hi]).collect();
        covers.sort();
        PosetDump { nodes, covers }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitEntry {
    pub split: String,
    pub alpha: String,
}

/// Trivial indices keyed `"1"`, `"2"`, ... in numeric order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialIndices(pub Vec<Rational>);

impl Serialize for TrivialIndices {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (i, v) in self.0.iter().enumerate() {
            map.serialize_entry(&(i + 1).to_string(), &v.to_string())?;
        }
        map.end()
    }
}

/// `{"nontrivial", "trivial", "residual_zero", "residual"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub nontrivial: Vec<SplitEntry>,
    pub trivial: TrivialIndices,
    pub residual_zero: bool,
    pub residual: MapFile,
}

impl DecompositionReport {
    pub fn from_decomposition(d: &SplitDecomposition) -> Self {
        DecompositionReport {
            nontrivial: d
                .nontrivial
                .iter()
                .map(|(s, a)| SplitEntry { split: s.to_string(), alpha: a.to_string() })
                .collect(),
            trivial: TrivialIndices(d.trivial.clone()),
            residual_zero: d.residual.is_zero(),
            residual: MapFile::from_map(&d.residual),
        }
    }
}

/// `{"kind", "nu"?, "points", "splits", "complement_size", "point"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<usize>,
    pub points: Vec<usize>,
    pub splits: Vec<String>,
    pub complement_size: usize,
    pub point: Vec<String>,
}

impl WitnessReport {
    pub fn from_witness(witness: &ForbiddenWitness) -> Result<Self> {
        let point = witness_point(witness)?;
        Ok(WitnessReport {
            kind: witness.kind.to_string(),
            nu: witness.nu,
            points: witness.points.clone(),
            splits: witness.splits().iter().map(|s| s.to_string()).collect(),
            complement_size: witness.complement_size,
            point: point.iter().map(|x| x.to_string()).collect(),
        })
    }
}

/// Outcome of `check-compat`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibilityReport {
    pub compatible: bool,
    pub k: usize,
    pub n: usize,
    pub witness: Option<WitnessReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailureReport {
    pub stage: String,
    pub reason: String,
}

impl FailureReport {
    pub fn from_failure(failure: &ReconstructionFailure) -> Self {
        FailureReport { stage: failure.stage().to_string(), reason: failure.to_string() }
    }
}

/// The decomposition report extended by `"tree"` and `"verified"`.
///
/// On failure `tree` is null and `failure` names the stage and reason.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReconstructionReport {
    #[serde(flatten)]
    pub decomposition: DecompositionReport,
    pub tree: Option<String>,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureReport>,
}

impl ReconstructionReport {
    pub fn new(
        decomposition: &SplitDecomposition,
        outcome: &std::result::Result<PhyloTree, ReconstructionFailure>,
    ) -> Self {
        let decomposition = DecompositionReport::from_decomposition(decomposition);
        match outcome {
            Ok(tree) => {
                ReconstructionReport { decomposition, tree: Some(emit_newick(tree)), verified: true, failure: None }
            }
            Err(f) => ReconstructionReport {
                decomposition,
                tree: None,
                verified: false,
                failure: Some(FailureReport::from_failure(f)),
            },
        }
    }
}

/// Outcome of `tree-test`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeTestReport {
    pub realizable: bool,
    pub tree: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureReport>,
}

impl TreeTestReport {
    pub fn new(outcome: &std::result::Result<PhyloTree, ReconstructionFailure>) -> Self {
        match outcome {
            Ok(tree) => TreeTestReport { realizable: true, tree: Some(emit_newick(tree)), failure: None },
            Err(f) => TreeTestReport { realizable: false, tree: None, failure: Some(FailureReport::from_failure(f)) },
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report types serialize infallibly");
    out.push('\n');
    out
}
