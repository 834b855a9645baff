mod commands;
mod datasets;
mod gml;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use datasets::{DataError, Dataset};
use output::{Format, RunConfig};

pub const DEFAULT_SEED: u64 = 20240601;

/// Nonparametric spectral graph analysis: GraField kernels, regularized
/// spectra, clustering and spatial regression.
#[derive(Debug, Parser)]
#[command(name = "grafield", version)]
struct Cli {
    /// Output format for tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Directory for the report and tables; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Dataset directory used by `fetch`.
    #[arg(long, global = true, env = "GRAFIELD_DATA", default_value = "data")]
    data_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GraphInput {
    /// Edge list (`u v [w]`) or Matrix Market file.
    pub input: PathBuf,
    /// Keep only the largest connected component.
    #[arg(long)]
    pub largest_component: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorName {
    Laplacian,
    Centered,
    Modularity,
    Rw,
    Reg1,
    Reg2,
    Pagerank,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OperatorArgs {
    #[arg(long, value_enum, default_value_t = OperatorName::Laplacian)]
    pub operator: OperatorName,
    /// Regularization: a number or laplace|kt|perks|minimax|stein. Default 0.5.
    #[arg(long)]
    pub tau: Option<String>,
    /// PageRank teleport probability.
    #[arg(long, default_value_t = 0.15)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Auto,
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    Mle,
    Laplace,
    Kt,
    Perks,
    Minimax,
    Stein,
    GoodTuring,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dims {
    KMinusOne,
    K,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeWeightName {
    Binary,
    Gaussian,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// GraField kernel matrix and graph entropy.
    Grafield {
        #[command(flatten)]
        graph: GraphInput,
        /// Smooth both measures with this τ policy before forming the kernel.
        #[arg(long)]
        tau: Option<String>,
    },
    /// Leading eigenvalues and eigenfunctions of a shift operator.
    Spectrum {
        #[command(flatten)]
        graph: GraphInput,
        #[command(flatten)]
        op: OperatorArgs,
        /// Number of nontrivial pairs.
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[arg(long, value_enum, default_value_t = Solver::Auto)]
        solver: Solver,
    },
    /// KL or diffusion-map coordinates per vertex.
    Embed {
        #[command(flatten)]
        graph: GraphInput,
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, default_value_t = 2)]
        dims: usize,
        /// Diffusion time; plain KL coordinates when absent.
        #[arg(long)]
        t: Option<u32>,
    },
    /// Spectral clustering, optionally scored against ground truth.
    Cluster {
        #[command(flatten)]
        graph: GraphInput,
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long)]
        k: usize,
        /// `vertex,label` CSV with the true classes.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        #[arg(long)]
        row_normalize: bool,
        #[arg(long, value_enum, default_value_t = Dims::KMinusOne)]
        dims: Dims,
    },
    /// Spectral lasso regression on a spatial table.
    Regress {
        /// CSV with x, y, the response and the covariates.
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "zinc")]
        response: String,
        #[arg(long, value_delimiter = ',', default_value = "ffreq,dist.m,soil")]
        covariates: Vec<String>,
        /// Covariates expanded into indicator columns.
        #[arg(long, value_delimiter = ',')]
        one_hot: Vec<String>,
        #[arg(long)]
        log_y: bool,
        #[arg(long, default_value_t = 25)]
        k: usize,
        #[arg(long, value_enum, default_value_t = OperatorName::Reg1)]
        operator: OperatorName,
        /// A number or laplace|kt|perks|minimax|stein, resolved on the spatial graph. Default 0.5.
        #[arg(long)]
        tau: Option<String>,
        /// `auto` for cross-validation, or a fixed penalty.
        #[arg(long, default_value = "auto")]
        lambda: String,
        #[arg(long, value_enum, default_value_t = EdgeWeightName::Binary)]
        edge_weight: EdgeWeightName,
        /// Gaussian bandwidth; the coverage radius when absent.
        #[arg(long)]
        bandwidth: Option<f64>,
    },
    /// Vertex probability estimates.
    Smooth {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long, value_enum, default_value_t = Estimator::Mle)]
        estimator: Estimator,
        /// Overrides the τ implied by the estimator.
        #[arg(long)]
        tau: Option<f64>,
    },
    /// Download and convert a benchmark dataset into the data directory.
    Fetch {
        #[arg(value_enum)]
        dataset: Dataset,
        /// Local copy of the upstream file instead of a download.
        #[arg(long)]
        from: Option<PathBuf>,
        /// Ground-truth CSV for datasets supplied by hand.
        #[arg(long)]
        labels: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Grafield { .. } => "grafield",
            Command::Spectrum { .. } => "spectrum",
            Command::Embed { .. } => "embed",
            Command::Cluster { .. } => "cluster",
            Command::Regress { .. } => "regress",
            Command::Smooth { .. } => "smooth",
            Command::Fetch { .. } => "fetch",
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let artifacts = match &cli.command {
        Command::Grafield { graph, tau } => commands::grafield(graph, tau.as_deref())?,
        Command::Spectrum { graph, op, top, solver } => commands::spectrum(graph, op, *top, *solver)?,
        Command::Embed { graph, op, dims, t } => commands::embed(graph, op, *dims, *t)?,
        Command::Cluster { graph, op, k, labels, restarts, max_iter, row_normalize, dims } => {
            let opts = commands::ClusterArgs {
                k: *k,
                labels: labels.as_deref(),
                restarts: *restarts,
                max_iter: *max_iter,
                row_normalize: *row_normalize,
                dims: *dims,
                seed: cli.seed,
            };
            commands::cluster(graph, op, &opts)?
        }
        Command::Regress {
            data,
            response,
            covariates,
            one_hot,
            log_y,
            k,
            operator,
            tau,
            lambda,
            edge_weight,
            bandwidth,
        } => {
            let args = commands::RegressArgs {
                data,
                response,
                covariates,
                one_hot,
                log_y: *log_y,
                k: *k,
                operator: *operator,
                tau: tau.as_deref(),
                lambda,
                edge_weight: *edge_weight,
                bandwidth: *bandwidth,
                seed: cli.seed,
            };
            commands::regress(&args)?
        }
        Command::Smooth { graph, estimator, tau } => commands::smooth(graph, *estimator, *tau)?,
        Command::Fetch { dataset, from, labels } => datasets::fetch(&datasets::FetchRequest {
            dataset: *dataset,
            dir: &cli.data_dir,
            from: from.as_deref(),
            labels: labels.as_deref(),
        })?,
    };
    let config = RunConfig {
        command: cli.command.name().to_string(),
        format: cli.format,
        seed: cli.seed,
        args: serde_json::to_value(&cli.command)?,
    };
    output::emit(&config, artifacts, cli.out.as_deref())
}

/// 2 validation, 3 data or I/O, 4 numerical.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<grafield::Error>() {
            return match e.kind() {
                grafield::ErrorKind::Validation => 2,
                grafield::ErrorKind::Data => 3,
                grafield::ErrorKind::Numerical => 4,
            };
        }
        if cause.is::<DataError>() || cause.is::<std::io::Error>() || cause.is::<csv::Error>() {
            return 3;
        }
    }
    2
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
