//! Experiment orchestration: configs, algorithm/parameter sweeps, and
//! plot-ready result files.
//!
//! A run is a grid of (algorithm, p) cells. Within one p, every algorithm
//! is evaluated on the same cascade worlds (common random numbers), so
//! summary comparisons — in particular the descent against its initializer
//! — are exact rather than Monte-Carlo noisy. Everything is deterministic
//! given the config and master seed.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffusion::sample_outreach;
use crate::error::{Error, Result};
use crate::graph::{census, generate_sbm, load_graph, LoadReport, SocialGraph};
use crate::metrics::{
    beta_fairness, efficiency, equality_gap, equity_gap, equity_score, maxmin_value,
    mutual_fairness, DiscreteDistribution2D,
};
use crate::rng::{stream, tag};
use crate::seeding::{
    s3d_iterate, select_degree, select_fair_degree, select_fair_greedy, select_greedy, S3DParams,
    Seedset,
};

/// Seed-selection strategies the runner knows about, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "bas_d")]
    BasD,
    #[serde(rename = "bas_g")]
    BasG,
    #[serde(rename = "hrt_d")]
    HrtD,
    #[serde(rename = "hrt_g")]
    HrtG,
    #[serde(rename = "s3d_d")]
    S3dD,
    #[serde(rename = "s3d_g")]
    S3dG,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::BasD,
        Algorithm::BasG,
        Algorithm::HrtD,
        Algorithm::HrtG,
        Algorithm::S3dD,
        Algorithm::S3dG,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::BasD => "bas_d",
            Algorithm::BasG => "bas_g",
            Algorithm::HrtD => "hrt_d",
            Algorithm::HrtG => "hrt_g",
            Algorithm::S3dD => "s3d_d",
            Algorithm::S3dG => "s3d_g",
        }
    }

    /// The baseline a descent variant is initialized from.
    pub fn initializer(self) -> Option<Algorithm> {
        match self {
            Algorithm::S3dD => Some(Algorithm::BasD),
            Algorithm::S3dG => Some(Algorithm::BasG),
            _ => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s.trim())
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SbmSpec {
    pub n1: usize,
    pub n2: usize,
    pub p_in: f64,
    pub p_out: f64,
    #[serde(default)]
    pub seed: u64,
}

/// Where the graph comes from: edge/attribute files or a synthetic SBM.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DatasetSpec {
    Files { edges: PathBuf, attributes: PathBuf },
    Sbm { sbm: SbmSpec },
}

impl DatasetSpec {
    pub fn label(&self) -> String {
        match self {
            DatasetSpec::Files { edges, .. } => edges
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "dataset".into()),
            DatasetSpec::Sbm { sbm } => format!("sbm-{}-{}", sbm.n1, sbm.n2),
        }
    }

    pub fn load(&self) -> Result<(SocialGraph, Option<LoadReport>)> {
        match self {
            DatasetSpec::Files { edges, attributes } => {
                let (g, report) = load_graph(edges, attributes)?;
                Ok((g, Some(report)))
            }
            DatasetSpec::Sbm { sbm } => {
                let g = generate_sbm(sbm.n1, sbm.n2, sbm.p_in, sbm.p_out, sbm.seed)?;
                Ok((g, None))
            }
        }
    }
}

fn default_p_values() -> Vec<f64> {
    vec![0.1]
}

fn default_algorithms() -> Vec<Algorithm> {
    vec![Algorithm::BasD, Algorithm::BasG]
}

fn default_beta() -> f64 {
    0.8
}

fn default_realizations() -> u32 {
    1000
}

fn default_iterations() -> usize {
    500
}

fn default_master_seed() -> u64 {
    42
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Everything a run needs. Every field except `dataset` and `k` has a
/// default; command-line flags override fields one for one.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset: Option<DatasetSpec>,
    pub k: Option<usize>,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_p_values")]
    pub p_values: Vec<f64>,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_realizations")]
    pub realizations: u32,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default = "default_master_seed")]
    pub master_seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// p at which sweep seed selection happens (seeds stay fixed over the
    /// grid); defaults to the first entry of the grid.
    #[serde(default)]
    pub selection_p: Option<f64>,
    /// Cap on concurrent experiment cells; default lets the pool decide.
    #[serde(default)]
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(DatasetSpec, usize)> {
        let dataset = self
            .dataset
            .clone()
            .ok_or_else(|| Error::Config("no dataset configured".into()))?;
        let k = self
            .k
            .ok_or_else(|| Error::Config("no seed budget k configured".into()))?;
        if k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("algorithm list is empty".into()));
        }
        if self.p_values.is_empty() {
            return Err(Error::Config("p_values is empty".into()));
        }
        for &p in &self.p_values {
            if !(0.0..=1.0).contains(&p) || p.is_nan() {
                return Err(Error::InvalidProbability(p));
            }
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidBeta(self.beta));
        }
        if self.realizations == 0 {
            return Err(Error::ZeroRealizations);
        }
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        Ok((dataset, k))
    }

    /// Requested algorithms plus the baselines the descent variants are
    /// initialized from, deduplicated, in canonical order.
    pub fn resolved_algorithms(&self) -> Vec<Algorithm> {
        let mut wanted: Vec<Algorithm> = Vec::new();
        for &a in &self.algorithms {
            if let Some(init) = a.initializer() {
                wanted.push(init);
            }
            wanted.push(a);
        }
        Algorithm::ALL
            .into_iter()
            .filter(|a| wanted.contains(a))
            .collect()
    }
}

/// One line of summary.csv.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ResultRow {
    pub dataset: String,
    pub algorithm: String,
    pub p: f64,
    pub k: usize,
    pub beta: f64,
    pub mutual_fairness: f64,
    pub beta_fairness: f64,
    pub efficiency: f64,
    pub equity_gap: f64,
    pub equality_gap: f64,
    pub maxmin_value: f64,
    pub fairness_mean: f64,
    /// Twice the standard error of the per-realization fairness statistic.
    pub fairness_err2: f64,
    pub efficiency_mean: f64,
    pub efficiency_err2: f64,
}

#[derive(Debug, Clone, Serialize)]
struct SeedsFile {
    algorithm: String,
    k: usize,
    p: f64,
    beta: f64,
    seed_ids: Vec<String>,
    score_beta_fairness: f64,
    master_seed: u64,
}

/// Outcome of `run_experiment`: rows in cell order plus the output dir.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub rows: Vec<ResultRow>,
    pub output_dir: PathBuf,
}

fn mean_and_2se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, 2.0 * (var / n as f64).sqrt())
}

fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        Some(w) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?
            .install(f)),
        None => Ok(f()),
    }
}

/// Select seeds for one algorithm at one p. The `cell_seed` drives both
/// selection and evaluation so that all algorithms at the same p share
/// cascade worlds.
fn select_seeds(
    g: &SocialGraph,
    algo: Algorithm,
    k: usize,
    p: f64,
    cfg: &ExperimentConfig,
    cell_seed: u64,
) -> Result<Seedset> {
    match algo {
        Algorithm::BasD => select_degree(g, k),
        Algorithm::BasG => select_greedy(g, k, p, cfg.realizations, cell_seed),
        Algorithm::HrtD => select_fair_degree(g, k),
        Algorithm::HrtG => select_fair_greedy(g, k, p, cfg.realizations, cell_seed),
        Algorithm::S3dD | Algorithm::S3dG => {
            let initial = select_seeds(g, algo.initializer().unwrap(), k, p, cfg, cell_seed)?;
            let params = S3DParams {
                iterations: cfg.iterations,
                realizations: cfg.realizations,
                evaluation_realizations: cfg.realizations,
                master_seed: cell_seed,
                ..S3DParams::new(cfg.beta, cell_seed)?
            };
            Ok(s3d_iterate(g, &initial, p, &params)?.seedset)
        }
    }
}

struct CellOutput {
    row: ResultRow,
    files: Vec<(String, Vec<u8>)>,
}

fn run_cell(
    g: &SocialGraph,
    dataset: &str,
    algo: Algorithm,
    p_index: usize,
    p: f64,
    k: usize,
    cfg: &ExperimentConfig,
) -> Result<CellOutput> {
    let cell_seed = stream(cfg.master_seed, tag::CELL, p_index as u64);
    let seeds = select_seeds(g, algo, k, p, cfg, cell_seed)?;
    let outreach = sample_outreach(g, seeds.nodes(), p, cfg.realizations, cell_seed)?;
    let dist = DiscreteDistribution2D::from_outreach(&outreach);

    let fairness_samples: Vec<f64> = outreach
        .samples()
        .iter()
        .map(|s| 1.0 - (s.x1 - s.x2).abs())
        .collect();
    let efficiency_samples: Vec<f64> = outreach
        .samples()
        .iter()
        .map(|s| 1.0 - (s.x1 + s.x2 - 2.0).abs() / 2.0)
        .collect();
    let (fairness_mean, fairness_err2) = mean_and_2se(&fairness_samples);
    let (efficiency_mean, efficiency_err2) = mean_and_2se(&efficiency_samples);

    let score_beta = beta_fairness(&dist, cfg.beta)?;
    let row = ResultRow {
        dataset: dataset.to_string(),
        algorithm: algo.name().to_string(),
        p,
        k,
        beta: cfg.beta,
        mutual_fairness: mutual_fairness(&dist),
        beta_fairness: score_beta,
        efficiency: efficiency(&dist),
        equity_gap: equity_gap(&dist),
        equality_gap: equality_gap(g, seeds.nodes())?,
        maxmin_value: maxmin_value(&dist),
        fairness_mean,
        fairness_err2,
        efficiency_mean,
        efficiency_err2,
    };

    let mut files = Vec::new();
    let mut buf = Vec::new();
    outreach.write_csv(&mut buf)?;
    files.push((format!("outreach_{algo}_{p}.csv"), buf));
    let mut buf = Vec::new();
    outreach.histogram().write_csv(&mut buf)?;
    files.push((format!("hist_{algo}_{p}.csv"), buf));
    let seeds_file = SeedsFile {
        algorithm: algo.name().to_string(),
        k,
        p,
        beta: cfg.beta,
        seed_ids: seeds.external_ids(g),
        score_beta_fairness: score_beta,
        master_seed: cfg.master_seed,
    };
    let mut buf = serde_json::to_vec_pretty(&seeds_file)?;
    buf.push(b'\n');
    files.push((format!("seeds_{algo}_{p}.json"), buf));

    Ok(CellOutput { row, files })
}

#[derive(Serialize)]
struct MetaFile<'a> {
    version: &'a str,
    config: &'a ExperimentConfig,
    dataset: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    load_report: Option<LoadReportMeta>,
    node_count: usize,
    edge_count: usize,
    cross_edge_fraction: f64,
}

#[derive(Serialize)]
struct LoadReportMeta {
    self_loops_dropped: usize,
    duplicate_edges_dropped: usize,
}

/// Run the full (algorithm, p) grid and write all result files.
///
/// Outputs per cell: `outreach_<algo>_<p>.csv`, `hist_<algo>_<p>.csv`,
/// `seeds_<algo>_<p>.json`; plus `summary.csv` and `meta.json` per run.
/// Byte-identical across reruns of the same config.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunSummary> {
    let (dataset, k) = cfg.validate()?;
    let (graph, load_report) = dataset.load()?;
    let label = dataset.label();
    let algorithms = cfg.resolved_algorithms();

    let cells: Vec<(Algorithm, usize, f64)> = algorithms
        .iter()
        .flat_map(|&a| {
            cfg.p_values
                .iter()
                .enumerate()
                .map(move |(i, &p)| (a, i, p))
        })
        .collect();

    let outputs: Vec<CellOutput> = with_pool(cfg.workers, || {
        cells
            .par_iter()
            .map(|&(algo, p_index, p)| run_cell(&graph, &label, algo, p_index, p, k, cfg))
            .collect::<Result<Vec<_>>>()
    })??;

    std::fs::create_dir_all(&cfg.output_dir)?;
    for out in &outputs {
        for (name, bytes) in &out.files {
            std::fs::write(cfg.output_dir.join(name), bytes)?;
        }
    }

    let rows: Vec<ResultRow> = outputs.into_iter().map(|o| o.row).collect();
    let mut writer = csv::Writer::from_path(cfg.output_dir.join("summary.csv"))?;
    for row in &rows {
        writer.serialize(row)?;
    }
    writer.flush()?;

    let c = census(&graph);
    let meta = MetaFile {
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        dataset: label,
        load_report: load_report.map(|r| LoadReportMeta {
            self_loops_dropped: r.self_loops_dropped,
            duplicate_edges_dropped: r.duplicate_edges_dropped,
        }),
        node_count: c.node_count,
        edge_count: c.edge_count,
        cross_edge_fraction: c.cross_edge_fraction,
    };
    let mut out = BufWriter::new(File::create(cfg.output_dir.join("meta.json"))?);
    serde_json::to_writer_pretty(&mut out, &meta)?;
    writeln!(out)?;
    out.flush()?;

    Ok(RunSummary {
        rows,
        output_dir: cfg.output_dir.clone(),
    })
}

/// One grid point of a fairness-vs-p sweep.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub mutual_fairness: f64,
    pub equity_score: f64,
    pub equity_gap: f64,
    pub efficiency: f64,
}

/// Fairness and equity as functions of p, seeds held fixed.
///
/// Seeds come from the first configured algorithm at `selection_p` (default:
/// the first grid point); each grid point then samples outreach with its own
/// world stream. Writes `sweep.csv`.
pub fn sweep_p(cfg: &ExperimentConfig, grid: &[f64]) -> Result<Vec<SweepRow>> {
    let (dataset, k) = cfg.validate()?;
    if grid.is_empty() {
        return Err(Error::Config("sweep grid is empty".into()));
    }
    for &p in grid {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(Error::InvalidProbability(p));
        }
    }
    let (graph, _) = dataset.load()?;
    let algo = cfg.algorithms[0];
    let selection_p = cfg.selection_p.unwrap_or(grid[0]);
    if !(0.0..=1.0).contains(&selection_p) {
        return Err(Error::InvalidProbability(selection_p));
    }
    // fixed stream index outside the per-grid-point range
    let selection_seed = stream(cfg.master_seed, tag::CELL, u64::MAX);
    let seeds = select_seeds(&graph, algo, k, selection_p, cfg, selection_seed)?;

    let rows: Vec<SweepRow> = with_pool(cfg.workers, || {
        grid.par_iter()
            .enumerate()
            .map(|(i, &p)| -> Result<SweepRow> {
                let world_seed = stream(cfg.master_seed, tag::CELL, i as u64);
                let outreach =
                    sample_outreach(&graph, seeds.nodes(), p, cfg.realizations, world_seed)?;
                let dist = DiscreteDistribution2D::from_outreach(&outreach);
                Ok(SweepRow {
                    p,
                    mutual_fairness: mutual_fairness(&dist),
                    equity_score: equity_score(&dist),
                    equity_gap: equity_gap(&dist),
                    efficiency: efficiency(&dist),
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;

    std::fs::create_dir_all(&cfg.output_dir)?;
    let mut writer = csv::Writer::from_path(cfg.output_dir.join("sweep.csv"))?;
    for row in &rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(rows)
}

/// One algorithm's point in the fairness-efficiency plane.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ComparePoint {
    pub algorithm: String,
    pub efficiency: f64,
    pub efficiency_err2: f64,
    pub mutual_fairness: f64,
    pub fairness_err2: f64,
}

/// Scatter data comparing all configured algorithms at the first p.
/// Writes `compare.csv` and `compare.json`.
pub fn compare_algorithms(cfg: &ExperimentConfig) -> Result<Vec<ComparePoint>> {
    if cfg.algorithms.len() < 2 {
        return Err(Error::Config(
            "algorithm comparison needs at least two algorithms".into(),
        ));
    }
    let mut single = cfg.clone();
    single.p_values = vec![cfg.p_values.first().copied().unwrap_or(0.1)];
    let summary = run_experiment(&single)?;
    let points: Vec<ComparePoint> = summary
        .rows
        .iter()
        .map(|r| ComparePoint {
            algorithm: r.algorithm.clone(),
            efficiency: r.efficiency_mean,
            efficiency_err2: r.efficiency_err2,
            mutual_fairness: r.fairness_mean,
            fairness_err2: r.fairness_err2,
        })
        .collect();

    let mut writer = csv::Writer::from_path(cfg.output_dir.join("compare.csv"))?;
    for point in &points {
        writer.serialize(point)?;
    }
    writer.flush()?;
    let mut out = BufWriter::new(File::create(cfg.output_dir.join("compare.json"))?);
    serde_json::to_writer_pretty(&mut out, &points)?;
    writeln!(out)?;
    out.flush()?;
    Ok(points)
}

/// Snapshot every file in a directory (for reproducibility checks).
pub fn snapshot_dir(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>> {
    let mut map = BTreeMap::new();
    for entry in std::fs::read_dir(dir)? {
        let entry = entry?;
        if entry.file_type()?.is_file() {
            map.insert(
                entry.file_name().to_string_lossy().into_owned(),
                std::fs::read(entry.path())?,
            );
        }
    }
    Ok(map)
}
