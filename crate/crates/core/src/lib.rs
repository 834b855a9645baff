//! Nonparametric spectral analysis of weighted undirected graphs.
//!
//! A graph is turned into a pair of probability measures (vertex and edge),
//! the ratio of which is the GraField kernel. Expanding the centered kernel
//! in a piecewise-constant basis on the vertex quantile grid gives the
//! G-matrix; its generalized eigenpairs are the Karhunen–Loève basis of the
//! graph. Different bases and different probability estimators reproduce
//! the normalized Laplacian, the modularity matrix, the random-walk
//! operator, the regularized Laplacians and PageRank.
//!
//! ```
//! use grafield::{load_graph, network_pmf_mle, vertex_pmf_mle, empirical_grafield};
//!
//! let g = load_graph([("1", "2", 2.0), ("2", "3", 3.0), ("2", "4", 3.0), ("3", "4", 3.0)])?;
//! let p = vertex_pmf_mle(&g)?;
//! let pj = network_pmf_mle(&g)?;
//! let c = empirical_grafield(&pj, &p)?;
//! assert!((c.value(0, 1) - 22.0 / 8.0).abs() < 1e-14);
//! # Ok::<(), grafield::Error>(())
//! ```

pub mod cluster;
pub mod error;
pub mod field;
pub mod generators;
pub mod graph;
pub mod io;
pub mod pmf;
pub mod regression;
pub mod smoothing;
pub mod spectral;

pub use cluster::{
    algebraic_connectivity, choose_k_spectral_gap, kmeans, misclassification, spectral_cluster,
    ClusterOptions, ClusterResult, KMeansOptions,
};
pub use error::{Error, ErrorKind, Result};
pub use field::{empirical_grafield, graph_entropy, GraFieldMatrix};
pub use graph::{load_graph, Graph};
pub use pmf::{network_pmf_mle, vertex_pmf_mle, Estimator, NetworkEstimator, NetworkPmf, VertexPmf};
pub use regression::{
    build_spatial_graph, lasso_solve, spectral_regression, LambdaPolicy, LassoOptions, LassoResult,
    RegressionFit, RegressionOptions, SpatialDataset,
};
pub use smoothing::{
    good_turing_pmf, resolve_tau, smooth_network_pmf, smooth_transition, smooth_vertex_pmf,
    stationary_distribution, stein_tau, GoodTuring, TauPolicy, TransitionMatrix, TransitionMode,
};
pub use spectral::{
    build_basis, diffusion_coords, diffusion_distance, g_matrix, gft, operator_spectrum,
    shift_operator, solve_spectrum, BasisFamily, BasisKind, GMatrix, OperatorKind,
    ShiftOperator, SpectralDecomposition,
};
