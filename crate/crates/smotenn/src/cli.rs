//! Command-line front end.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use smotenn_core::eval::CvConfig;
use smotenn_core::knn::{recall_at_k, PointSet, SpillTreeIndex};
use smotenn_core::{compute_imbalance, Engine, IndexConfig, Method, MinMaxScaler, ResampleSpec, RngStream};

use crate::bench::{self, BenchConfig};
use crate::engine;
use crate::error::{Error, Result};
use crate::fixtures::fixture_groups;
use crate::ingest;
use crate::output::{self, ClassCounts, FileDigest, OutputFormat, RunManifest, Sidecar};
use crate::report::{self, ReportFormat};

#[derive(Debug, Parser)]
#[command(name = "smotenn", version, about = "Hybrid resampling for imbalanced binary datasets")]
pub struct Cli {
    /// Worker threads (default: all logical cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Resample a dataset and write it with a provenance sidecar and manifest.
    Resample(ResampleCmd),
    /// Cross-validated comparison of methods, or rank statistics of fixture matrices.
    Bench(BenchCmd),
    /// Build a spill tree over a dataset and report its shape and recall.
    IndexStats(IndexStatsCmd),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EngineArg {
    Exact,
    Spilltree,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Keel,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ReportArg {
    Md,
    Json,
}

impl From<ReportArg> for ReportFormat {
    fn from(r: ReportArg) -> Self {
        match r {
            ReportArg::Md => ReportFormat::Markdown,
            ReportArg::Json => ReportFormat::Json,
        }
    }
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

fn parse_bench_method(s: &str) -> std::result::Result<Option<Method>, String> {
    if s.eq_ignore_ascii_case("none") {
        Ok(None)
    } else {
        parse_method(s).map(Some)
    }
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    #[arg(long, value_enum, default_value = "exact")]
    pub engine: EngineArg,
    /// Spill band as a fraction of the projected spread.
    #[arg(long, default_value_t = 0.1)]
    pub tau: f64,
    /// Balance factor: spill only if both children hold at most rho * n points.
    #[arg(long, default_value_t = 0.7)]
    pub rho: f64,
    #[arg(long, default_value_t = 32)]
    pub leaf_size: usize,
    /// Backtrack at spill nodes too (exact search).
    #[arg(long)]
    pub backtrack: bool,
}

impl IndexArgs {
    fn config(&self) -> IndexConfig {
        IndexConfig { tau: self.tau, rho: self.rho, leaf_size: self.leaf_size, defeatist_search: !self.backtrack }
    }

    fn engine(&self) -> Engine {
        match self.engine {
            EngineArg::Exact => Engine::Exact,
            EngineArg::Spilltree => Engine::SpillTree(self.config()),
        }
    }
}

#[derive(Debug, Args)]
pub struct MethodArgs {
    /// Oversampling amount per minority sample.
    #[arg(long = "n", default_value_t = 1)]
    pub n: usize,
    /// Majority samples kept by undersampling, as a multiple of the minority count.
    #[arg(long = "p", default_value_t = 1.0)]
    pub p: f64,
    /// ENN stops once majority / minority falls to this ratio.
    #[arg(long, default_value_t = 1.0)]
    pub target_ir: f64,
    #[arg(long, default_value_t = 1)]
    pub partitions: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub index: IndexArgs,
}

impl MethodArgs {
    fn spec(&self, method: Method, k: usize) -> ResampleSpec {
        ResampleSpec {
            method,
            k,
            n_oversample: self.n,
            p_ratio: self.p,
            target_ir: self.target_ir,
            seed: self.seed,
            engine: self.index.engine(),
            partitions: self.partitions,
            fixed_u: None,
        }
    }
}

#[derive(Debug, Args)]
pub struct ResampleCmd {
    #[arg(long, value_parser = parse_method, default_value = "smotenn")]
    pub method: Method,
    #[arg(long = "k", default_value_t = 5)]
    pub k: usize,
    #[command(flatten)]
    pub common: MethodArgs,
    /// Output file format.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
    /// Class column of CSV input (default: last column).
    #[arg(long)]
    pub label_column: Option<String>,
    /// Class value to treat as the minority in CSV input.
    #[arg(long)]
    pub minority_value: Option<String>,
    /// Input dataset (`.dat` is read as KEEL, anything else as CSV).
    pub input: PathBuf,
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchCmd {
    /// Directory of `.dat` / `.csv` datasets.
    pub data_dir: Option<PathBuf>,
    /// Rank published score matrices instead of running cross-validation.
    #[arg(long, conflicts_with = "data_dir")]
    pub fixtures: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', value_parser = parse_bench_method, default_value = "none,smote,smotenn")]
    pub methods: Vec<Option<Method>>,
    /// Neighbourhood sizes; each adds one row per dataset.
    #[arg(long = "k", value_delimiter = ',', default_value = "5")]
    pub k: Vec<usize>,
    #[command(flatten)]
    pub common: MethodArgs,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    /// Neighbours used by the k-NN classifier.
    #[arg(long, default_value_t = 5)]
    pub classifier_k: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "md")]
    pub report: ReportArg,
    #[arg(long)]
    pub label_column: Option<String>,
    /// Where to write the g-mean matrix CSV.
    #[arg(long)]
    pub matrix_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IndexStatsCmd {
    pub input: PathBuf,
    #[arg(long = "k", default_value_t = 5)]
    pub k: usize,
    #[arg(long, default_value_t = 0.1)]
    pub tau: f64,
    #[arg(long, default_value_t = 0.7)]
    pub rho: f64,
    #[arg(long, default_value_t = 32)]
    pub leaf_size: usize,
    #[arg(long)]
    pub backtrack: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "md")]
    pub report: ReportArg,
    #[arg(long)]
    pub label_column: Option<String>,
}

/// Parses `args` and runs the command; returns the process exit status.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    let pool = engine::thread_pool(cli.threads)?;
    match cli.command {
        Command::Resample(cmd) => resample(cmd, &pool),
        Command::Bench(cmd) => bench(cmd, &pool),
        Command::IndexStats(cmd) => index_stats(cmd),
    }
}

fn resample(cmd: ResampleCmd, pool: &rayon::ThreadPool) -> Result<()> {
    let spec = cmd.common.spec(cmd.method, cmd.k);
    spec.validate()?;
    let mut timings = BTreeMap::new();

    let t = Instant::now();
    let input_bytes = std::fs::read(&cmd.input).map_err(Error::io(&cmd.input))?;
    let data = ingest::read_dataset(&cmd.input, cmd.label_column.as_deref(), cmd.minority_value.as_deref())?;
    timings.insert("ingest", t.elapsed().as_secs_f64() * 1e3);
    let before = compute_imbalance(&data.dataset)?;

    let t = Instant::now();
    let scaler = MinMaxScaler::from_columns(data.columns.clone());
    let normalized = scaler.transform(&data.dataset);
    timings.insert("normalize", t.elapsed().as_secs_f64() * 1e3);

    let t = Instant::now();
    let (result, blocks) = engine::run(&normalized, &spec, pool)?;
    timings.insert("resample", t.elapsed().as_secs_f64() * 1e3);

    let t = Instant::now();
    let format = match cmd.format {
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Keel => OutputFormat::Keel,
    };
    let rows = output::output_rows(&data, &result, &scaler);
    let body = output::render(format, &data, &rows)?;
    output::write_file(&cmd.output, &body)?;
    let sidecar_path = output::companion_path(&cmd.output, "provenance");
    let sidecar = serde_json::to_vec_pretty(&Sidecar::new(&result))?;
    output::write_file(&sidecar_path, &sidecar)?;
    timings.insert("write", t.elapsed().as_secs_f64() * 1e3);

    let after = ClassCounts::of(&result.output);
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        spec,
        threads: pool.current_num_threads(),
        input: FileDigest::of_bytes(&cmd.input, &input_bytes),
        outputs: vec![FileDigest::of_bytes(&cmd.output, &body), FileDigest::of_bytes(&sidecar_path, &sidecar)],
        counts_before: ClassCounts::of(&data.dataset),
        counts_after: after,
        timings_ms: timings,
        blocks,
    };
    let manifest_path = output::companion_path(&cmd.output, "manifest");
    output::write_file(&manifest_path, &serde_json::to_vec_pretty(&manifest)?)?;

    println!("before: minority {} majority {} IR {:.3}", before.minority_count, before.majority_count, before.ir);
    let ir = after.ir.map_or_else(|| "undefined".to_string(), |ir| format!("{ir:.3}"));
    println!(
        "after:  minority {} majority {} IR {ir} (synthetic {}, removed {})",
        after.minority,
        after.majority,
        result.synthetic_count,
        result.removed_ids.len()
    );
    Ok(())
}

fn print_stdout(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).map_err(Error::io("<stdout>"))?;
    Ok(())
}

fn bench(cmd: BenchCmd, pool: &rayon::ThreadPool) -> Result<()> {
    let format: ReportFormat = cmd.report.into();
    if let Some(dir) = &cmd.fixtures {
        for (name, matrix) in fixture_groups(dir)? {
            let report = matrix.rank_report(cmd.alpha)?;
            print_stdout(&report::render(&name, &report, format)?)?;
            print_stdout("\n")?;
        }
        return Ok(());
    }
    let dir =
        cmd.data_dir.as_ref().ok_or_else(|| Error::Config("bench needs a dataset directory or --fixtures".into()))?;
    if cmd.methods.is_empty() || cmd.k.is_empty() {
        return Err(Error::Config("bench needs at least one method and one K".into()));
    }
    for (m, &k) in cmd.methods.iter().flatten().zip(cmd.k.iter().cycle()) {
        cmd.common.spec(*m, k).validate()?;
    }
    let cfg = BenchConfig {
        methods: cmd.methods.clone(),
        ks: cmd.k.clone(),
        spec: cmd.common.spec(Method::Smotenn, cmd.k[0]),
        cv: CvConfig { folds: cmd.folds, classifier_k: cmd.classifier_k, engine: cmd.common.index.engine() },
        label_column: cmd.label_column.clone(),
    };
    let outcome = bench::run(dir, &cfg, pool)?;
    for f in &outcome.failures {
        eprintln!("failed: {} K={} {}: {}", f.dataset, f.k, f.method, f.error);
    }
    let csv = outcome.matrix.write_csv()?;
    match &cmd.matrix_out {
        Some(path) => output::write_file(path, &csv)?,
        None => print_stdout(std::str::from_utf8(&csv).unwrap_or_default())?,
    }
    println!("{} of {} cells succeeded", outcome.cells - outcome.failures.len(), outcome.cells);
    if outcome.matrix.len() >= 2 {
        let report = outcome.matrix.rank_report(cmd.alpha)?;
        print_stdout(&report::render(&dir.display().to_string(), &report, format)?)?;
    } else {
        eprintln!("fewer than two complete rows; rank statistics skipped");
    }
    Ok(())
}

#[derive(serde::Serialize)]
struct IndexReport {
    dataset: String,
    config: IndexConfig,
    k: usize,
    recall: f64,
    stats: smotenn_core::knn::IndexStats,
}

fn index_stats(cmd: IndexStatsCmd) -> Result<()> {
    let config = IndexConfig { tau: cmd.tau, rho: cmd.rho, leaf_size: cmd.leaf_size, defeatist_search: !cmd.backtrack };
    config.validate()?;
    let data = ingest::read_dataset(&cmd.input, cmd.label_column.as_deref(), None)?;
    let dataset = MinMaxScaler::from_columns(data.columns.clone()).transform(&data.dataset);
    let tree = SpillTreeIndex::build(PointSet::from_dataset(&dataset), config, &RngStream::new(cmd.seed, 0))?;
    let k = cmd.k.min(dataset.len() - 1);
    let recall = recall_at_k(&tree, &dataset, k)?;
    let report = IndexReport { dataset: dataset.name().to_string(), config, k, recall, stats: tree.stats() };
    let text = match cmd.report {
        ReportArg::Json => serde_json::to_string_pretty(&report)? + "\n",
        ReportArg::Md => {
            let s = &report.stats;
            let hist: Vec<String> = s.depth_histogram.iter().map(usize::to_string).collect();
            format!(
                "## Index statistics: {}\n\n| Quantity | Value |\n|---|---:|\n| points | {} |\n| nodes | {} |\n| max depth | {} |\n\
                 | leaves | {} (size {}..{}, mean {:.1}) |\n| overlap fraction | {:.4} |\n| replication | {:.3} |\n\
                 | recall@{} | {:.4} |\n\nLeaves per depth: {}\n",
                report.dataset,
                s.point_count,
                s.node_count,
                s.max_depth,
                s.leaf_count,
                s.leaf_min,
                s.leaf_max,
                s.leaf_mean,
                s.overlap_fraction,
                s.replication,
                k,
                recall,
                hist.join(" ")
            )
        }
    };
    print_stdout(&text)
}
