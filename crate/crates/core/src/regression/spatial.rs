//! Point sets with a response and covariates, and the coverage-radius graph
//! built on them.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq)]
pub struct SpatialDataset {
    coords: Vec<[f64; 2]>,
    y: Vec<f64>,
    x: DMatrix<f64>,
    names: Vec<String>,
}

impl SpatialDataset {
    pub fn new(coords: Vec<[f64; 2]>, y: Vec<f64>, x: DMatrix<f64>, names: Vec<String>) -> Result<Self> {
        let n = coords.len();
        if y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: y.len() });
        }
        if x.nrows() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.nrows() });
        }
        if names.len() != x.ncols() {
            return Err(Error::DimensionMismatch { expected: x.ncols(), found: names.len() });
        }
        if coords.iter().flatten().chain(&y).chain(x.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("spatial dataset".into()));
        }
        check_duplicates(&coords)?;
        Ok(SpatialDataset { coords, y, x, names })
    }

    pub fn coords(&self) -> &[[f64; 2]] {
        &self.coords
    }

    pub fn response(&self) -> &[f64] {
        &self.y
    }

    pub fn covariates(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn covariate_names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn check_duplicates(coords: &[[f64; 2]]) -> Result<()> {
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            if distance(coords[i], coords[j]) <= 1e-9 {
                return Err(Error::Invalid(format!(
                    "rows {} and {} share the location ({}, {}); duplicate points distort the neighbourhood graph",
                    i + 1,
                    j + 1,
                    coords[i][0],
                    coords[i][1]
                )));
            }
        }
    }
    Ok(())
}

/// Weight attached to an edge of the spatial graph.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
#[serde(tag = "weights", rename_all = "kebab-case")]
pub enum EdgeWeight {
    #[default]
    Binary,
    /// `exp(−d² / (2h²))`; `h` defaults to the coverage radius.
    Gaussian { bandwidth: Option<f64> },
}

/// Largest nearest-neighbour distance of the point set.
pub fn coverage_radius(coords: &[[f64; 2]]) -> Result<f64> {
    if coords.len() < 2 {
        return Err(Error::Invalid("need at least two points".into()));
    }
    let mut r: f64 = 0.0;
    for i in 0..coords.len() {
        let nn = (0..coords.len())
            .filter(|&j| j != i)
            .map(|j| distance(coords[i.min(j)], coords[i.max(j)]))
            .fold(f64::INFINITY, f64::min);
        r = r.max(nn);
    }
    Ok(r)
}

/// Unit-weight graph joining every pair within the coverage radius, so each
/// point has at least one neighbour. Vertices are labelled by row (`1..=n`).
pub fn build_spatial_graph(coords: &[[f64; 2]]) -> Result<Graph> {
    build_spatial_graph_weighted(coords, EdgeWeight::Binary)
}

pub fn build_spatial_graph_weighted(coords: &[[f64; 2]], weight: EdgeWeight) -> Result<Graph> {
    if coords.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("coordinates".into()));
    }
    let r = coverage_radius(coords)?;
    check_duplicates(coords)?;
    let h = match weight {
        EdgeWeight::Gaussian { bandwidth } => bandwidth.unwrap_or(r),
        EdgeWeight::Binary => 0.0,
    };
    let mut edges = Vec::new();
    let mut touched = BTreeSet::new();
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            let d = distance(coords[i], coords[j]);
            if d <= r {
                let w = match weight {
                    EdgeWeight::Binary => 1.0,
                    EdgeWeight::Gaussian { .. } => (-d * d / (2.0 * h * h)).exp(),
                };
                edges.push((i, j, w));
                touched.insert(i);
                touched.insert(j);
            }
        }
    }
    debug_assert_eq!(touched.len(), coords.len());
    let labels = (1..=coords.len()).map(|i| i.to_string()).collect();
    Graph::from_indexed(labels, &edges)
}

/// Reads a spatial table from CSV with a header row.
///
/// `x`/`y` columns hold the coordinates. Every name in `one_hot` must also
/// be listed in `covariates` and is expanded into indicator columns for all
/// levels but the first (sorted) level.
pub fn parse_spatial_csv(
    text: &str,
    response: &str,
    covariates: &[&str],
    one_hot: &[&str],
    log_response: bool,
) -> Result<SpatialDataset> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Parse { line: 1, message: e.to_string() })?
        .iter()
        .map(|h| h.to_string())
        .collect();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Invalid(format!("column {name:?} not found in header {header:?}")))
    };
    let (cx, cy, cr) = (col("x")?, col("y")?, col(response)?);
    let cov_idx: Vec<usize> = covariates.iter().map(|c| col(c)).collect::<Result<_>>()?;
    for h in one_hot {
        if !covariates.contains(h) {
            return Err(Error::Invalid(format!("one-hot column {h:?} is not a covariate")));
        }
    }

    let mut rows: Vec<csv::StringRecord> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        rows.push(rec.map_err(|e| Error::Parse { line: i + 2, message: e.to_string() })?);
    }
    let num = |row: usize, c: usize| -> Result<f64> {
        let s = &rows[row][c];
        s.parse::<f64>()
            .map_err(|_| Error::Parse { line: row + 2, message: format!("{:?} in column {} is not a number", s, header[c]) })
    };

    let n = rows.len();
    let mut coords = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        coords.push([num(i, cx)?, num(i, cy)?]);
        let v = num(i, cr)?;
        if log_response && !(v > 0.0) {
            return Err(Error::Invalid(format!("row {}: log of nonpositive response {v}", i + 1)));
        }
        y.push(if log_response { v.ln() } else { v });
    }

    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut names = Vec::new();
    for (name, &c) in covariates.iter().zip(&cov_idx) {
        if one_hot.contains(name) {
            let levels: BTreeSet<String> = (0..n).map(|i| rows[i][c].to_string()).collect();
            for level in levels.iter().skip(1) {
                columns.push((0..n).map(|i| if &rows[i][c] == level { 1.0 } else { 0.0 }).collect());
                names.push(format!("{name}={level}"));
            }
        } else {
            columns.push((0..n).map(|i| num(i, c)).collect::<Result<_>>()?);
            names.push(name.to_string());
        }
    }
    let x = DMatrix::from_fn(n, columns.len(), |i, j| columns[j][i]);
    SpatialDataset::new(coords, y, x, names)
}
