use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fairspread::cli::{
    compare_algorithms, run_experiment, sweep_p, Algorithm, DatasetSpec, ExperimentConfig, SbmSpec,
};
use fairspread::Error;

#[derive(Parser)]
#[command(
    name = "fairspread",
    version,
    about = "Fairness-aware influence maximization: cascade simulation, optimal-transport fairness metrics, seed selection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured (algorithm, p) grid and write result files
    Run(CommonArgs),
    /// Tabulate fairness and equity against p with seeds held fixed
    Sweep(SweepArgs),
    /// Emit fairness-efficiency scatter data across algorithms
    Compare(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; the flags below override its fields one for one
    #[arg(long)]
    config: Option<PathBuf>,
    /// Edge file: one "u v" pair per line, '#' comments allowed
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Attribute file: "node,group" rows with group in {1,2}
    #[arg(long)]
    attrs: Option<PathBuf>,
    /// Synthetic SBM dataset: "n1,n2,p_in,p_out[,seed]"
    #[arg(long, conflicts_with_all = ["dataset", "attrs"])]
    sbm: Option<String>,
    /// Comma-separated algorithms: bas_d,bas_g,hrt_d,hrt_g,s3d_d,s3d_g
    #[arg(long, value_delimiter = ',')]
    algo: Option<Vec<String>>,
    /// Seed budget
    #[arg(long)]
    k: Option<usize>,
    /// Comma-separated conduction probabilities
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    /// Fairness weight of the descent objective
    #[arg(long)]
    beta: Option<f64>,
    /// Monte-Carlo realizations per estimate
    #[arg(long = "R")]
    realizations: Option<u32>,
    /// Descent iterations
    #[arg(long)]
    iters: Option<usize>,
    /// Master RNG seed
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker-thread cap for experiment cells
    #[arg(long)]
    workers: Option<usize>,
    /// p used for seed selection in sweeps
    #[arg(long)]
    selection_p: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// p grid for the sweep; defaults to the config's p_values
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
}

fn parse_sbm(text: &str) -> Result<DatasetSpec, Error> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 && parts.len() != 5 {
        return Err(Error::Config(format!(
            "--sbm expects n1,n2,p_in,p_out[,seed], got '{text}'"
        )));
    }
    let bad = |field: &str| Error::Config(format!("--sbm: cannot parse {field} in '{text}'"));
    Ok(DatasetSpec::Sbm {
        sbm: SbmSpec {
            n1: parts[0].parse().map_err(|_| bad("n1"))?,
            n2: parts[1].parse().map_err(|_| bad("n2"))?,
            p_in: parts[2].parse().map_err(|_| bad("p_in"))?,
            p_out: parts[3].parse().map_err(|_| bad("p_out"))?,
            seed: if parts.len() == 5 {
                parts[4].parse().map_err(|_| bad("seed"))?
            } else {
                0
            },
        },
    })
}

fn build_config(args: &CommonArgs) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => serde_json::from_str("{}")?,
    };
    match (&args.dataset, &args.attrs) {
        (Some(edges), Some(attributes)) => {
            cfg.dataset = Some(DatasetSpec::Files {
                edges: edges.clone(),
                attributes: attributes.clone(),
            });
        }
        (None, None) => {}
        _ => {
            return Err(Error::Config(
                "--dataset and --attrs must be given together".into(),
            ))
        }
    }
    if let Some(sbm) = &args.sbm {
        cfg.dataset = Some(parse_sbm(sbm)?);
    }
    if let Some(names) = &args.algo {
        cfg.algorithms = names
            .iter()
            .map(|n| n.parse::<Algorithm>())
            .collect::<Result<Vec<_>, _>>()?;
    }
    if let Some(k) = args.k {
        cfg.k = Some(k);
    }
    if let Some(p) = &args.p {
        cfg.p_values = p.clone();
    }
    if let Some(beta) = args.beta {
        cfg.beta = beta;
    }
    if let Some(r) = args.realizations {
        cfg.realizations = r;
    }
    if let Some(iters) = args.iters {
        cfg.iterations = iters;
    }
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }
    if let Some(workers) = args.workers {
        cfg.workers = Some(workers);
    }
    if let Some(sp) = args.selection_p {
        cfg.selection_p = Some(sp);
    }
    Ok(cfg)
}

/// 2 for configuration problems, 3 for data problems.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_)
        | Error::UnknownAlgorithm(_)
        | Error::InvalidBeta(_)
        | Error::InvalidProbability(_)
        | Error::ZeroRealizations
        | Error::SeedBudgetTooLarge { .. }
        | Error::Json(_) => 2,
        _ => 3,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run(args) => {
            let cfg = build_config(&args)?;
            let summary = run_experiment(&cfg)?;
            eprintln!(
                "wrote {} result rows to {}",
                summary.rows.len(),
                summary.output_dir.display()
            );
        }
        Command::Sweep(args) => {
            let cfg = build_config(&args.common)?;
            let grid = args.grid.clone().unwrap_or_else(|| cfg.p_values.clone());
            let rows = sweep_p(&cfg, &grid)?;
            eprintln!(
                "wrote sweep.csv with {} grid points to {}",
                rows.len(),
                cfg.output_dir.display()
            );
        }
        Command::Compare(args) => {
            let cfg = build_config(&args)?;
            let points = compare_algorithms(&cfg)?;
            eprintln!(
                "wrote compare.csv/compare.json with {} points to {}",
                points.len(),
                cfg.output_dir.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
