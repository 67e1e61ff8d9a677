//! The `ksplit` command-line front end.
//!
//! Exit codes: 0 on success, 1 on a domain failure (the machine-readable
//! reason is printed on standard output), 2 on usage or parse errors.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use ksplit_core::compatibility::is_k_weakly_compatible;
use ksplit_core::decomposition::{SplitDecomposition, TrivialMode};
use ksplit_core::hypersimplex::{regular_subdivision, tight_span_poset};
use ksplit_core::rational::parse_rational;
use ksplit_core::trees::{emit_newick, k_dissimilarity_from_tree, parse_newick, random_tree, reconstruct_from_indices};
use ksplit_core::{weight_of, KDissimilarityMap, SplitSystem};

use crate::formats::{
    parse_map, parse_splits, to_json, write_map, CompatibilityReport, DecompositionReport, PosetDump,
    ReconstructionReport, SubdivisionDump, TreeTestReport, WitnessReport,
};
use crate::parallel;

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest ground set accepted without `--force` at `k = 2`.
pub const MAX_N_K2: usize = 12;
/// Largest ground set accepted without `--force` at `k >= 3`.
pub const MAX_N_K3: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "ksplit", version, about = "Exact split decomposition of k-dissimilarity maps")]
pub struct Cli {
    /// Worker threads for split-index computation (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output to a file instead of standard output.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TrivialModeArg {
    Paper,
    Projection,
}

impl From<TrivialModeArg> for TrivialMode {
    fn from(arg: TrivialModeArg) -> Self {
        match arg {
            TrivialModeArg::Paper => TrivialMode::Paper,
            TrivialModeArg::Projection => TrivialMode::Projection,
        }
    }
}

/// Options shared by commands that read a dissimilarity map.
#[derive(clap::Args, Debug)]
pub struct MapInput {
    /// Dissimilarity map file, or `-` for standard input.
    pub input: PathBuf,
    /// Expected k; must match the file.
    #[arg(long)]
    pub k: Option<usize>,
    /// Skip the ground set size guard.
    #[arg(long)]
    pub force: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Split decomposition report of a map.
    Decompose {
        #[command(flatten)]
        map: MapInput,
        #[arg(long, value_enum, default_value_t = TrivialModeArg::Paper)]
        trivial_mode: TrivialModeArg,
    },
    /// k-weak compatibility of a split file.
    CheckCompat {
        /// Split file, or `-` for standard input.
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Ground set size; defaults to the largest element mentioned.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Regular subdivision of the hypersimplex induced by a map.
    Subdivide {
        #[command(flatten)]
        map: MapInput,
    },
    /// Face poset of the tight span of a map.
    Tightspan {
        #[command(flatten)]
        map: MapInput,
    },
    /// k-dissimilarity map of a Newick tree.
    TreeDiss {
        /// Newick file, or `-` for standard input.
        input: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Decide whether a map comes from a tree.
    TreeTest {
        #[command(flatten)]
        map: MapInput,
    },
    /// Reconstruct the tree of a map, with its decomposition report.
    Reconstruct {
        #[command(flatten)]
        map: MapInput,
        #[arg(long, value_enum, default_value_t = TrivialModeArg::Projection)]
        trivial_mode: TrivialModeArg,
    },
    /// Random phylogenetic tree in Newick format.
    GenTree {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Smallest edge weight.
        #[arg(long, default_value = "1")]
        lo: String,
        /// Largest edge weight.
        #[arg(long, default_value = "10")]
        hi: String,
    },
}

/// Text to emit and the exit code to return.
struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn success(text: String) -> Self {
        Outcome { text, code: EXIT_SUCCESS }
    }

    fn domain(text: String, ok: bool) -> Self {
        Outcome { text, code: if ok { EXIT_SUCCESS } else { EXIT_FAILURE } }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = !e.use_stderr();
            let sink: &mut dyn Write = if informational { stdout } else { stderr };
            let _ = write!(sink, "{}", e.render());
            return if informational { EXIT_SUCCESS } else { EXIT_USAGE };
        }
    };
    let outcome = match execute(&cli) {
        Ok(outcome) => outcome,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            return EXIT_USAGE;
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &outcome.text).with_context(|| format!("cannot write {}", path.display())),
        None => stdout.write_all(outcome.text.as_bytes()).context("cannot write to standard output"),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e:#}");
        return EXIT_USAGE;
    }
    outcome.code
}

fn read_input(path: &Path) -> anyhow::Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).context("cannot read standard input")?;
        Ok(text)
    } else {
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
    }
}

/// Refuses ground sets whose enumeration would be impractical.
pub fn check_size(n: usize, k: usize, force: bool) -> anyhow::Result<()> {
    let limit = if k == 2 { MAX_N_K2 } else { MAX_N_K3 };
    if n > limit && !force {
        bail!("n = {n} exceeds the limit {limit} for k = {k}; pass --force to proceed");
    }
    Ok(())
}

fn load_map(input: &MapInput) -> anyhow::Result<KDissimilarityMap> {
    let text = read_input(&input.input)?;
    let map = parse_map(&text).with_context(|| format!("cannot parse map {}", input.input.display()))?;
    if let Some(k) = input.k {
        if k != map.k() {
            bail!("--k {k} does not match k = {} in {}", map.k(), input.input.display());
        }
    }
    check_size(map.n(), map.k(), input.force)?;
    Ok(map)
}

/// Maps that admit a split decomposition: `2 <= k < n`.
fn require_decomposable(map: &KDissimilarityMap) -> anyhow::Result<()> {
    if map.k() < 2 || map.k() >= map.n() {
        bail!("split decomposition needs 2 <= k < n, got k = {} and n = {}", map.k(), map.n());
    }
    Ok(())
}

fn execute(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Decompose { map, trivial_mode } => {
            let map = load_map(map)?;
            require_decomposable(&map)?;
            let decomposition = parallel::decompose(&map, (*trivial_mode).into(), cli.jobs)?;
            Ok(Outcome::success(to_json(&DecompositionReport::from_decomposition(&decomposition))))
        }
        Command::CheckCompat { input, k, n } => {
            let text = read_input(input)?;
            let file = parse_splits(&text, *n).with_context(|| format!("cannot parse splits {}", input.display()))?;
            if *k < 1 || *k > file.n {
                bail!("--k {k} is out of range 1..={}", file.n);
            }
            let system = SplitSystem::new(file.splits())?;
            let verdict = is_k_weakly_compatible(&system, *k)?;
            let witness = verdict.witness().map(WitnessReport::from_witness).transpose()?;
            let report = CompatibilityReport { compatible: verdict.is_compatible(), k: *k, n: file.n, witness };
            Ok(Outcome::domain(to_json(&report), report.compatible))
        }
        Command::Subdivide { map } => {
            let map = load_map(map)?;
            let subdivision = regular_subdivision(&weight_of(&map));
            Ok(Outcome::success(to_json(&SubdivisionDump::from_subdivision(&subdivision))))
        }
        Command::Tightspan { map } => {
            let map = load_map(map)?;
            Ok(Outcome::success(to_json(&PosetDump::from_poset(&tight_span_poset(&weight_of(&map))))))
        }
        Command::TreeDiss { input, k } => {
            let text = read_input(input)?;
            let tree = parse_newick(&text).with_context(|| format!("cannot parse tree {}", input.display()))?;
            if *k < 2 || *k >= tree.n() {
                bail!("--k {k} is out of range 2..{} for a tree with {} leaves", tree.n(), tree.n());
            }
            Ok(Outcome::success(write_map(&k_dissimilarity_from_tree(&tree, *k)?)))
        }
        Command::TreeTest { map } => {
            let map = load_map(map)?;
            require_decomposable(&map)?;
            let outcome = parallel::reconstruct(&map, cli.jobs);
            Ok(Outcome::domain(to_json(&TreeTestReport::new(&outcome)), outcome.is_ok()))
        }
        Command::Reconstruct { map, trivial_mode } => {
            let map = load_map(map)?;
            require_decomposable(&map)?;
            let indices = parallel::split_indices(&map, cli.jobs);
            let decomposition = SplitDecomposition::assemble(&map, indices.iter().cloned(), (*trivial_mode).into())?;
            let outcome = reconstruct_from_indices(&map, indices);
            Ok(Outcome::domain(to_json(&ReconstructionReport::new(&decomposition, &outcome)), outcome.is_ok()))
        }
        Command::GenTree { n, seed, lo, hi } => {
            let lo = parse_rational(lo).map_err(|e| anyhow!("--lo: {e}"))?;
            let hi = parse_rational(hi).map_err(|e| anyhow!("--hi: {e}"))?;
            let tree = random_tree(*n, *seed, &lo, &hi)?;
            Ok(Outcome::success(format!("{}\n", emit_newick(&tree))))
        }
    }
}
