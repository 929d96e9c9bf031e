//! Command-line driver: build artifacts from a catalog, then rank, export and
//! query them.
//!
//! A build directory holds:
//!
//! * `build.conf`: format version and the configuration used,
//! * `pairs.bin`: raw pair measures (unless disabled),
//! * `tree.tsv`: the spanning tree with vertex ids,
//! * `centrality.tsv`: the report ranked by total centrality,
//! * `distributions.tsv`: the same values in vertex order.
//!
//! Exit codes: 0 success, 2 usage, 3 invalid data, 4 computation failure.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use animst_core::centrality::EigenConfig;
use animst_core::report::{self, Measure, ReportRow};
use animst_core::{dot, mst, pipeline, query::TreeIndex};
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub mod config;

use config::{ConfigFile, PipelineConfig};

pub const MANIFEST: &str = "build.conf";
pub const PAIR_CACHE: &str = "pairs.bin";
pub const TREE: &str = "tree.tsv";
pub const REPORT: &str = "centrality.tsv";
pub const DISTRIBUTIONS: &str = "distributions.tsv";
const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] animst_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_computation() => 4,
            CliError::Core(_) => 3,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "animst",
    version,
    about = "Similarity spanning trees for item catalogs"
)]
pub struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic catalog.
    Generate(GenerateArgs),
    /// Compute pair distances, the spanning tree and centralities.
    Build(BuildArgs),
    /// Write the tree as a Graphviz file.
    ExportDot(ExportDotArgs),
    /// Highest-ranked items by one centrality.
    Top(TopArgs),
    /// Items next to (or within a few hops of) an item.
    Recommend(RecommendArgs),
    /// The tree path between two items.
    Path(PathArgs),
    /// Per-item centrality table in item order.
    Distributions(ArtifactArgs),
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// key=value configuration file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n_categories: Option<usize>,
    #[arg(long)]
    pub eigen_tol: Option<f64>,
    #[arg(long)]
    pub eigen_max_iter: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the raw pair cache (on/off).
    #[arg(long, value_parser = config::parse_switch)]
    pub pair_cache: Option<bool>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<PipelineConfig> {
        let file = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let mut cfg = file.apply(PipelineConfig::default());
        if let Some(v) = self.n_categories {
            cfg.n_categories = v;
        }
        if let Some(v) = self.eigen_tol {
            cfg.eigen_tol = v;
        }
        if let Some(v) = self.eigen_max_iter {
            cfg.eigen_max_iter = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.pair_cache {
            cfg.pair_cache = v;
        }
        if cfg.n_categories == 0 {
            return Err(CliError::Usage("n_categories must be positive".into()));
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub k: usize,
    /// Output file (default: standard output).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    pub input: PathBuf,
    #[arg(long, short)]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct ArtifactArgs {
    /// Build directory.
    #[arg(long, short)]
    pub artifacts: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExportDotArgs {
    #[command(flatten)]
    pub artifacts: ArtifactArgs,
    #[arg(long, short)]
    pub out: PathBuf,
    /// Add item titles to node labels.
    #[arg(long)]
    pub titles: bool,
}

#[derive(Debug, Args)]
pub struct TopArgs {
    #[command(flatten)]
    pub artifacts: ArtifactArgs,
    /// degree, eigenvector, betweenness, closeness or total.
    #[arg(long, default_value = "total")]
    pub by: String,
    #[arg(short, default_value_t = 3)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct RecommendArgs {
    #[command(flatten)]
    pub artifacts: ArtifactArgs,
    pub id: String,
    /// List the k nearest items by hops instead of the direct neighbors.
    #[arg(short)]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PathArgs {
    #[command(flatten)]
    pub artifacts: ArtifactArgs,
    pub from: String,
    pub to: String,
}

/// Parses arguments, runs the command and maps errors to exit codes.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(err, "{}", e.render());
            return ExitCode::from(code);
        }
    };
    match run(cli, out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    if let Some(workers) = cli.workers {
        // Only the first call in a process can size the global pool.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }
    match cli.command {
        Command::Generate(a) => cmd_generate(&a, out),
        Command::Build(a) => cmd_build(&a, out),
        Command::ExportDot(a) => cmd_export_dot(&a),
        Command::Top(a) => cmd_top(&a, out),
        Command::Recommend(a) => cmd_recommend(&a, out),
        Command::Path(a) => cmd_path(&a, out),
        Command::Distributions(a) => cmd_distributions(&a, out),
    }
}

fn io_err(path: &Path, e: io::Error) -> CliError {
    CliError::Core(animst_core::Error::Io {
        path: path.to_owned(),
        source: e,
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| io_err(path, e))
}

fn emit(out: &mut dyn Write, text: std::fmt::Arguments<'_>) -> Result<()> {
    out.write_fmt(text)
        .map_err(|e| CliError::Core(animst_core::Error::Stream(e)))
}

pub fn cmd_generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = args.config.resolve()?;
    let catalog = animst_core::generate_synthetic(args.k, cfg.seed, cfg.n_categories)?;
    match &args.out {
        Some(path) => catalog.save(path)?,
        None => catalog.write_to(&mut *out)?,
    }
    Ok(())
}

pub fn cmd_build(args: &BuildArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = args.config.resolve()?;
    let catalog = animst_core::load_catalog(&args.input, cfg.n_categories)?;
    fs::create_dir_all(&args.out_dir).map_err(|e| io_err(&args.out_dir, e))?;

    let cache = args.out_dir.join(PAIR_CACHE);
    if !cfg.pair_cache && cache.exists() {
        fs::remove_file(&cache).map_err(|e| io_err(&cache, e))?;
    }
    let build_config = pipeline::BuildConfig {
        eigen: EigenConfig {
            tol: cfg.eigen_tol,
            max_iter: cfg.eigen_max_iter,
        },
    };
    let built = pipeline::build(&catalog, &build_config, cfg.pair_cache.then_some(&*cache))?;

    let ids = catalog.ids();
    let titles: Vec<String> = catalog.records().iter().map(|r| r.title.clone()).collect();
    let rows = report::rows(&built.report, &ids, &titles);

    mst::save_tree(&args.out_dir.join(TREE), &built.tree, &ids)?;
    write_file(&args.out_dir.join(REPORT), |w| {
        report::write_report(w, &rows)
    })?;
    write_file(&args.out_dir.join(DISTRIBUTIONS), |w| {
        report::write_distributions(w, &rows)
    })?;
    write_file(&args.out_dir.join(MANIFEST), |w| {
        writeln!(w, "format_version={FORMAT_VERSION}")?;
        writeln!(w, "k={}", catalog.size())?;
        cfg.write(w)?;
        Ok(())
    })?;

    emit(out, format_args!("k\t{}\n", catalog.size()))?;
    emit(
        out,
        format_args!("edges_considered\t{}\n", built.pairs_considered),
    )?;
    emit(
        out,
        format_args!("mst_total_weight\t{}\n", built.tree.total_weight()),
    )?;
    emit(out, format_args!("eigenvalue\t{}\n", built.report.lambda))?;
    for (rank, row) in report::top(&rows, Measure::Total, 3).iter().enumerate() {
        emit(
            out,
            format_args!(
                "top{}\t{}\t{}\t{}\n",
                rank + 1,
                row.id,
                row.title,
                row.centrality.total
            ),
        )?;
    }
    Ok(())
}

fn write_file(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<File>) -> animst_core::Result<()>,
) -> Result<()> {
    let mut w = create(path)?;
    body(&mut w)?;
    w.flush().map_err(|e| io_err(path, e))
}

fn load_index(dir: &Path) -> Result<TreeIndex> {
    let (tree, ids) = mst::load_tree(&dir.join(TREE))?;
    Ok(TreeIndex::new(tree, ids)?)
}

fn load_rows(dir: &Path) -> Result<Vec<ReportRow>> {
    let path = dir.join(REPORT);
    let file = File::open(&path).map_err(|e| io_err(&path, e))?;
    Ok(report::read_report(io::BufReader::new(file))?)
}

pub fn cmd_export_dot(args: &ExportDotArgs) -> Result<()> {
    let dir = &args.artifacts.artifacts;
    let index = load_index(dir)?;
    let titles = if args.titles {
        let mut rows = load_rows(dir)?;
        rows.sort_by_key(|r| r.index);
        let titles: Vec<String> = rows.into_iter().map(|r| r.title).collect();
        if titles.len() != index.ids().len() {
            return Err(CliError::Core(animst_core::Error::NotATree(
                "report and tree disagree on item count".into(),
            )));
        }
        Some(titles)
    } else {
        None
    };
    write_file(&args.out, |w| {
        dot::write_dot(w, index.tree(), index.ids(), titles.as_deref())
    })
}

fn row_line(out: &mut dyn Write, rank: usize, row: &ReportRow, value: f64) -> Result<()> {
    emit(
        out,
        format_args!("{rank}\t{}\t{}\t{value}\n", row.id, row.title),
    )
}

pub fn cmd_top(args: &TopArgs, out: &mut dyn Write) -> Result<()> {
    let measure: Measure = args
        .by
        .parse()
        .map_err(|e: animst_core::Error| CliError::Usage(e.to_string()))?;
    let rows = load_rows(&args.artifacts.artifacts)?;
    for (rank, row) in report::top(&rows, measure, args.n).iter().enumerate() {
        row_line(out, rank + 1, row, measure.value(&row.centrality))?;
    }
    Ok(())
}

pub fn cmd_distributions(args: &ArtifactArgs, out: &mut dyn Write) -> Result<()> {
    let rows = load_rows(&args.artifacts)?;
    report::write_distributions(&mut *out, &rows)?;
    Ok(())
}

pub fn cmd_recommend(args: &RecommendArgs, out: &mut dyn Write) -> Result<()> {
    let index = load_index(&args.artifacts.artifacts)?;
    match args.k {
        None => {
            for n in index.neighbors(&args.id)? {
                emit(out, format_args!("{}\t1\t{}\n", n.id, n.delta))?;
            }
        }
        Some(k) => {
            for n in index.k_nearest(&args.id, k)? {
                emit(out, format_args!("{}\t{}\n", n.id, n.hops))?;
            }
        }
    }
    Ok(())
}

pub fn cmd_path(args: &PathArgs, out: &mut dyn Write) -> Result<()> {
    let index = load_index(&args.artifacts.artifacts)?;
    let path = index.path(&args.from, &args.to)?;
    let walks = if path.hops == 1 { "walk" } else { "walks" };
    if path.via.is_empty() {
        emit(out, format_args!("{} {walks}\n", path.hops))
    } else {
        emit(
            out,
            format_args!("{} {walks} via {}\n", path.hops, path.via.join(", ")),
        )
    }
}
