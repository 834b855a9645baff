//! One function per subcommand. Each returns the report and tables; writing
//! is left to the caller.

use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde_json::{json, Map, Value};

use grafield::cluster::EmbeddingDims;
use grafield::io::{align_labels, read_graph, read_labels};
use grafield::regression::{parse_spatial_csv, EdgeWeight};
use grafield::spectral::{
    diffusion_coords, operator_spectrum_with, OperatorKind, SolverMethod, SpectralDecomposition,
};
use grafield::{
    algebraic_connectivity, choose_k_spectral_gap, empirical_grafield, good_turing_pmf, graph_entropy,
    misclassification, network_pmf_mle, smooth_network_pmf, smooth_vertex_pmf, spectral_cluster,
    spectral_regression, vertex_pmf_mle, ClusterOptions, Graph, KMeansOptions, LambdaPolicy,
    RegressionOptions, TauPolicy,
};

use crate::output::{Artifacts, Cell, Table};
use crate::{Dims, EdgeWeightName, Estimator, GraphInput, OperatorArgs, OperatorName, Solver};

const DEFAULT_TAU: f64 = 0.5;
/// Leading eigenvalues scanned by the spectral-gap rule.
const GAP_SCAN: usize = 10;

fn load(input: &GraphInput) -> Result<(Graph, Value)> {
    let full = read_graph(&input.input).with_context(|| format!("reading {}", input.input.display()))?;
    let mut info = Map::new();
    info.insert("vertices".into(), json!(full.n()));
    info.insert("edges".into(), json!(full.edge_count()));
    let g = if input.largest_component {
        let lcc = full.largest_component()?;
        info.insert("largest_component".into(), json!(lcc.n()));
        info.insert("largest_component_edges".into(), json!(lcc.edge_count()));
        lcc
    } else {
        full
    };
    Ok((g, Value::Object(info)))
}

fn parse_tau(text: &str) -> Result<TauPolicy> {
    Ok(TauPolicy::from_str(text)?)
}

fn operator(g: &Graph, name: OperatorName, tau: Option<&str>, alpha: f64) -> Result<OperatorKind> {
    let tau = match (name, tau) {
        (OperatorName::Reg1 | OperatorName::Reg2, Some(text)) => Some(parse_tau(text)?.resolve(g)?),
        (OperatorName::Reg1 | OperatorName::Reg2, None) => Some(DEFAULT_TAU),
        (_, Some(_)) => bail!(grafield::Error::Invalid(format!("--tau applies only to reg1 and reg2, not {name:?}"))),
        (_, None) => None,
    };
    let label = serde_json::to_value(name)?.as_str().expect("operator name").to_string();
    Ok(OperatorKind::from_name(&label, tau, Some(alpha))?)
}

fn vertex_column(g: &Graph) -> Vec<Cell> {
    g.labels().iter().map(|l| Cell::from(l.as_str())).collect()
}

fn phi_table(name: &str, g: &Graph, dec: &SpectralDecomposition, prefix: &str) -> Table {
    let cols: Vec<String> = (1..=dec.len()).map(|k| format!("{prefix}{k}")).collect();
    let mut header = vec!["vertex"];
    header.extend(cols.iter().map(String::as_str));
    let mut t = Table::new(name, &header);
    for (x, label) in vertex_column(g).into_iter().enumerate() {
        let mut row = vec![label];
        row.extend((0..dec.len()).map(|k| Cell::from(dec.phi()[(x, k)])));
        t.push(row);
    }
    t
}

fn gap_suggestion(g: &Graph, kind: OperatorKind) -> Option<usize> {
    let m = GAP_SCAN.min(g.n().saturating_sub(1));
    let dec = operator_spectrum_with(g, kind, m, SolverMethod::Auto).ok()?;
    choose_k_spectral_gap(dec.eigenvalues()).ok()
}

pub fn grafield(input: &GraphInput, tau: Option<&str>) -> Result<Artifacts> {
    let (g, info) = load(input)?;
    let (p, joint, estimator) = match tau {
        Some(text) => {
            let policy = parse_tau(text)?;
            (smooth_vertex_pmf(&g, policy)?, smooth_network_pmf(&g, policy)?, policy.to_string())
        }
        None => (vertex_pmf_mle(&g)?, network_pmf_mle(&g)?, "mle".to_string()),
    };
    let field = empirical_grafield(&joint, &p)?;
    let mut header = vec!["vertex"];
    header.extend(g.labels().iter().map(String::as_str));
    let mut t = Table::new("grafield", &header);
    for (x, label) in vertex_column(&g).into_iter().enumerate() {
        let mut row = vec![label];
        row.extend((0..g.n()).map(|y| Cell::from(field.value(x, y))));
        t.push(row);
    }
    let mut a = Artifacts::default();
    a.set("graph", info);
    a.set("estimator", estimator);
    a.set("entropy", graph_entropy(&field));
    a.tables.push(t);
    Ok(a)
}

pub fn spectrum(input: &GraphInput, op: &OperatorArgs, top: usize, solver: Solver) -> Result<Artifacts> {
    let (g, info) = load(input)?;
    let kind = operator(&g, op.operator, op.tau.as_deref(), op.alpha)?;
    let method = match solver {
        Solver::Auto => SolverMethod::Auto,
        Solver::Dense => SolverMethod::Dense,
        Solver::Lanczos => SolverMethod::Lanczos,
    };
    let dec = operator_spectrum_with(&g, kind, top, method)?;
    let mut values = Table::new("eigenvalues", &["k", "eigenvalue"]);
    for (k, l) in dec.eigenvalues().iter().enumerate() {
        values.push(vec![(k + 1).into(), (*l).into()]);
    }
    let mut a = Artifacts::default();
    a.set("graph", info);
    a.set("operator", kind);
    a.set("trivial_eigenvalue", dec.trivial_eigenvalue());
    if dec.len() >= 2 {
        a.set("k_suggested", choose_k_spectral_gap(dec.eigenvalues())?);
    }
    if !matches!(kind, OperatorKind::PageRank { .. } | OperatorKind::Modularity) && !dec.is_empty() {
        a.set("algebraic_connectivity", algebraic_connectivity(&dec)?);
    }
    a.tables.push(values);
    a.tables.push(phi_table("phi", &g, &dec, "phi"));
    Ok(a)
}

pub fn embed(input: &GraphInput, op: &OperatorArgs, dims: usize, t: Option<u32>) -> Result<Artifacts> {
    let (g, info) = load(input)?;
    let kind = operator(&g, op.operator, op.tau.as_deref(), op.alpha)?;
    let dec = operator_spectrum_with(&g, kind, dims, SolverMethod::Auto)?;
    let table = match t {
        Some(t) => {
            let coords = diffusion_coords(&dec, t, dec.len())?;
            let cols: Vec<String> = (1..=dec.len()).map(|k| format!("d{k}")).collect();
            let mut header = vec!["vertex"];
            header.extend(cols.iter().map(String::as_str));
            let mut table = Table::new("embedding", &header);
            for (x, label) in vertex_column(&g).into_iter().enumerate() {
                let mut row = vec![label];
                row.extend((0..dec.len()).map(|k| Cell::from(coords[(x, k)])));
                table.push(row);
            }
            table
        }
        None => phi_table("embedding", &g, &dec, "phi"),
    };
    let mut a = Artifacts::default();
    a.set("graph", info);
    a.set("operator", kind);
    a.set("diffusion_time", t);
    a.set("eigenvalues", dec.eigenvalues());
    a.tables.push(table);
    Ok(a)
}

pub struct ClusterArgs<'a> {
    pub k: usize,
    pub labels: Option<&'a Path>,
    pub restarts: usize,
    pub max_iter: usize,
    pub row_normalize: bool,
    pub dims: Dims,
    pub seed: u64,
}

pub fn cluster(input: &GraphInput, op: &OperatorArgs, args: &ClusterArgs<'_>) -> Result<Artifacts> {
    let (g, info) = load(input)?;
    let kind = operator(&g, op.operator, op.tau.as_deref(), op.alpha)?;
    let truth = match args.labels {
        Some(path) => Some(align_labels(&g, &read_labels(path)?)?),
        None => None,
    };
    let opts = ClusterOptions {
        k: args.k,
        operator: kind,
        kmeans: KMeansOptions { restarts: args.restarts, max_iter: args.max_iter, seed: args.seed },
        row_normalize: args.row_normalize,
        dims: match args.dims {
            Dims::KMinusOne => EmbeddingDims::KMinusOne,
            Dims::K => EmbeddingDims::K,
        },
    };
    let fit = spectral_cluster(&g, &opts)?;
    let mut t = Table::new("labels", &["vertex", "cluster"]);
    for (label, c) in vertex_column(&g).into_iter().zip(&fit.labels) {
        t.push(vec![label, (*c).into()]);
    }
    let mut a = Artifacts::default();
    a.set("graph", info);
    a.set("operator", kind);
    a.set("k", args.k);
    a.set("wcss", fit.wcss);
    a.set("seed", fit.seed);
    a.set("restarts", fit.restarts);
    a.set("eigenvalues", &fit.eigenvalues);
    a.set("k_suggested", gap_suggestion(&g, kind));
    if let Some(truth) = truth {
        a.set("misclassification", misclassification(&fit.labels, &truth)?);
    }
    a.tables.push(t);
    Ok(a)
}

pub struct RegressArgs<'a> {
    pub data: &'a Path,
    pub response: &'a str,
    pub covariates: &'a [String],
    pub one_hot: &'a [String],
    pub log_y: bool,
    pub k: usize,
    pub operator: OperatorName,
    pub tau: Option<&'a str>,
    pub lambda: &'a str,
    pub edge_weight: EdgeWeightName,
    pub bandwidth: Option<f64>,
    pub seed: u64,
}

pub fn regress(args: &RegressArgs<'_>) -> Result<Artifacts> {
    let text = std::fs::read_to_string(args.data).with_context(|| format!("reading {}", args.data.display()))?;
    let covariates: Vec<&str> = args.covariates.iter().map(String::as_str).collect();
    let one_hot: Vec<&str> = args.one_hot.iter().map(String::as_str).collect();
    let data = parse_spatial_csv(&text, args.response, &covariates, &one_hot, args.log_y)?;

    let lambda = match args.lambda {
        "auto" => LambdaPolicy::auto(args.seed),
        s => LambdaPolicy::Fixed {
            lambda: s
                .parse()
                .map_err(|_| grafield::Error::Invalid(format!("--lambda must be `auto` or a number, got {s:?}")))?,
        },
    };
    let (kind, tau) = match args.operator {
        OperatorName::Reg1 | OperatorName::Reg2 => {
            let label = serde_json::to_value(args.operator)?.as_str().expect("name").to_string();
            let policy = match args.tau {
                Some(text) => parse_tau(text)?,
                None => TauPolicy::Fixed(DEFAULT_TAU),
            };
            // τ is resolved on the spatial graph inside the fit.
            (OperatorKind::from_name(&label, Some(DEFAULT_TAU), None)?, Some(policy))
        }
        OperatorName::Laplacian | OperatorName::Centered | OperatorName::Rw | OperatorName::Modularity => {
            if args.tau.is_some() {
                bail!(grafield::Error::Invalid("--tau applies only to reg1 and reg2".into()));
            }
            let label = serde_json::to_value(args.operator)?.as_str().expect("name").to_string();
            (OperatorKind::from_name(&label, None, None)?, None)
        }
        OperatorName::Pagerank => bail!(grafield::Error::Invalid("pagerank has no regression basis".into())),
    };
    let mut opts = RegressionOptions::new(args.k, kind, lambda);
    opts.tau = tau;
    opts.edge_weight = match args.edge_weight {
        EdgeWeightName::Binary => EdgeWeight::Binary,
        EdgeWeightName::Gaussian => EdgeWeight::Gaussian { bandwidth: args.bandwidth },
    };
    let fit = spectral_regression(&data, &opts)?;

    let mut coef = Table::new("coefficients", &["name", "beta"]);
    let mut by_name = Map::new();
    for (name, b) in fit.names.iter().zip(&fit.beta) {
        coef.push(vec![name.as_str().into(), (*b).into()]);
        by_name.insert(name.clone(), json!(b));
    }
    let cols: Vec<String> = (1..=fit.basis.ncols()).map(|k| format!("phi{k}")).collect();
    let mut header = vec!["row"];
    header.extend(cols.iter().map(String::as_str));
    let mut basis = Table::new("basis", &header);
    for i in 0..fit.basis.nrows() {
        let mut row = vec![Cell::from(i + 1)];
        row.extend((0..fit.basis.ncols()).map(|k| Cell::from(fit.basis[(i, k)])));
        basis.push(row);
    }

    let mut a = Artifacts::default();
    a.set("rows", data.len());
    a.set("response", args.response);
    a.set("log_response", args.log_y);
    a.set("operator", fit.operator);
    a.set("minimax_tau", fit.minimax_tau);
    a.set("r2", fit.r2);
    a.set("cv_r2", fit.cv_r2);
    a.set("lambda", fit.lambda);
    a.set("intercept", fit.intercept);
    a.set("nonzero", fit.selected.len());
    a.set("objective", fit.objective);
    a.set("beta", Value::Object(by_name));
    a.tables.push(coef);
    a.tables.push(basis);
    Ok(a)
}

pub fn smooth(input: &GraphInput, estimator: Estimator, tau: Option<f64>) -> Result<Artifacts> {
    let (g, info) = load(input)?;
    let mut a = Artifacts::default();
    let probs = if estimator == Estimator::GoodTuring {
        if tau.is_some() {
            bail!(grafield::Error::Invalid("--tau does not apply to good-turing".into()));
        }
        let gt = good_turing_pmf(&g)?;
        a.set("raw_total", gt.raw_total);
        let fallback: Vec<&str> = gt.fallback.iter().map(|&i| g.label(i)).collect();
        a.set("fallback", fallback);
        gt.pmf.probs().to_vec()
    } else {
        let policy = match (tau, estimator) {
            (Some(t), _) => TauPolicy::Fixed(t),
            (None, Estimator::Mle) => TauPolicy::Fixed(0.0),
            (None, Estimator::Laplace) => TauPolicy::Laplace,
            (None, Estimator::Kt) => TauPolicy::KrichevskyTrofimov,
            (None, Estimator::Perks) => TauPolicy::Perks,
            (None, Estimator::Minimax) => TauPolicy::Minimax,
            (None, Estimator::Stein) => TauPolicy::SteinDataDriven,
            (None, Estimator::GoodTuring) => unreachable!("handled above"),
        };
        let resolved = policy.resolve(&g)?;
        a.set("tau", resolved);
        smooth_vertex_pmf(&g, TauPolicy::Fixed(resolved))?.probs().to_vec()
    };
    let mut t = Table::new("pmf", &["vertex", "degree", "p"]);
    for (i, label) in vertex_column(&g).into_iter().enumerate() {
        t.push(vec![label, g.degree(i).into(), probs[i].into()]);
    }
    a.set("graph", info);
    a.set("estimator", estimator);
    a.tables.push(t);
    Ok(a)
}
