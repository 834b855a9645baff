//! Weighted undirected graphs.
//!
//! A [`Graph`] keeps a symmetric adjacency structure in row-sorted sparse form
//! together with its degrees `d_i = Σ_j A(i, j)` and total edge mass
//! `N = Σ_i d_i`. Dense matrices are materialized on demand through
//! [`Graph::adjacency`]. Self-loops are stored once on the diagonal, so they
//! count once in `d_x` and once in `N`.
//!
//! Vertices carry their original labels. When every label parses as an
//! integer the vertices are ordered numerically, otherwise by first
//! appearance in the edge list.

use std::collections::{BTreeMap, HashMap, VecDeque};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    labels: Vec<String>,
    neighbors: Vec<Vec<(usize, f64)>>,
    degrees: Vec<f64>,
    total: f64,
}

/// Builds a validated graph from `(u, v, weight)` triples.
///
/// Duplicate edges are summed. Each undirected edge is stored in both
/// triangle positions.
pub fn load_graph<I, S>(edges: I) -> Result<Graph>
where
    I: IntoIterator<Item = (S, S, f64)>,
    S: AsRef<str>,
{
    let edges: Vec<(String, String, f64)> = edges
        .into_iter()
        .map(|(u, v, w)| (u.as_ref().to_string(), v.as_ref().to_string(), w))
        .collect();
    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }

    let mut seen: Vec<String> = Vec::new();
    let mut known: HashMap<String, ()> = HashMap::new();
    for (u, v, _) in &edges {
        for label in [u, v] {
            if known.insert(label.clone(), ()).is_none() {
                seen.push(label.clone());
            }
        }
    }
    let numeric: Option<Vec<i64>> = seen.iter().map(|s| s.trim().parse::<i64>().ok()).collect();
    if let Some(values) = numeric {
        let mut order: Vec<usize> = (0..seen.len()).collect();
        order.sort_by_key(|&i| values[i]);
        seen = order.into_iter().map(|i| seen[i].clone()).collect();
    }
    let index: HashMap<&str, usize> = seen.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();

    let mut indexed = Vec::with_capacity(edges.len());
    for (u, v, w) in &edges {
        check_weight(u, v, *w)?;
        indexed.push((index[u.as_str()], index[v.as_str()], *w));
    }
    Graph::from_indexed(seen, &indexed)
}

fn check_weight(u: &str, v: &str, w: f64) -> Result<()> {
    if !w.is_finite() {
        return Err(Error::NonFinite(format!("weight of edge ({u}, {v})")));
    }
    if w < 0.0 {
        return Err(Error::NegativeWeight { u: u.to_string(), v: v.to_string(), weight: w });
    }
    Ok(())
}

impl Graph {
    /// Builds a graph over `labels.len()` vertices from 0-based index triples.
    /// Vertices that appear in no edge are kept (they are isolated).
    pub fn from_indexed(labels: Vec<String>, edges: &[(usize, usize, f64)]) -> Result<Graph> {
        let n = labels.len();
        if n == 0 || edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];
        for &(u, v, w) in edges {
            if u >= n {
                return Err(Error::InvalidVertex(u));
            }
            if v >= n {
                return Err(Error::InvalidVertex(v));
            }
            check_weight(&labels[u], &labels[v], w)?;
            *rows[u].entry(v).or_insert(0.0) += w;
            if u != v {
                *rows[v].entry(u).or_insert(0.0) += w;
            }
        }
        let neighbors: Vec<Vec<(usize, f64)>> =
            rows.into_iter().map(|r| r.into_iter().collect()).collect();
        Ok(Self::assemble(labels, neighbors))
    }

    /// Builds a graph from a dense symmetric nonnegative matrix, labelling
    /// vertices `1..=n`.
    pub fn from_dense(a: &DMatrix<f64>) -> Result<Graph> {
        let n = a.nrows();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if a.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: a.ncols() });
        }
        let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let mut neighbors = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                let w = a[(i, j)];
                if w != a[(j, i)] {
                    return Err(Error::Invalid(format!("matrix is not symmetric at ({}, {})", i + 1, j + 1)));
                }
                check_weight(&labels[i], &labels[j], w)?;
                if w != 0.0 {
                    neighbors[i].push((j, w));
                }
            }
        }
        Ok(Self::assemble(labels, neighbors))
    }

    fn assemble(labels: Vec<String>, neighbors: Vec<Vec<(usize, f64)>>) -> Graph {
        let degrees: Vec<f64> = neighbors.iter().map(|r| r.iter().map(|&(_, w)| w).sum()).collect();
        let total = degrees.iter().sum();
        Graph { labels, neighbors, degrees, total }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> f64 {
        self.degrees[i]
    }

    /// Total edge mass `N = Σ_{x,y} A(x, y)`.
    pub fn total_mass(&self) -> f64 {
        self.total
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Row `i` of the adjacency as sorted `(column, weight)` pairs.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.neighbors[i]
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        let row = &self.neighbors[i];
        match row.binary_search_by_key(&j, |&(c, _)| c) {
            Ok(pos) => row[pos].1,
            Err(_) => 0.0,
        }
    }

    /// Number of distinct undirected vertex pairs (including loops) with a
    /// stored entry.
    pub fn edge_count(&self) -> usize {
        self.neighbors
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().filter(|&&(j, _)| j >= i).count())
            .sum()
    }

    /// Dense adjacency matrix.
    pub fn adjacency(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut a = DMatrix::zeros(n, n);
        for (i, row) in self.neighbors.iter().enumerate() {
            for &(j, w) in row {
                a[(i, j)] = w;
            }
        }
        a
    }

    /// Sparse product `A x`.
    pub fn adjacency_mul(&self, x: &[f64]) -> Vec<f64> {
        self.neighbors.iter().map(|row| row.iter().map(|&(j, w)| w * x[j]).sum()).collect()
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.degrees[i] == 0.0).collect()
    }

    /// First isolated vertex as an error, if any.
    pub fn require_no_isolated(&self) -> Result<()> {
        match self.isolated_vertices().first() {
            Some(&i) => Err(Error::IsolatedVertex { vertex: self.labels[i].clone() }),
            None => Ok(()),
        }
    }

    /// True when every degree is a whole number.
    pub fn has_integer_degrees(&self) -> bool {
        self.degrees.iter().all(|d| (d - d.round()).abs() < 1e-9)
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &(u, w) in &self.neighbors[v] {
                    if w > 0.0 && comp[u] == usize::MAX {
                        comp[u] = id;
                        members.push(u);
                        queue.push_back(u);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// Subgraph induced by `vertices` (0-based), keeping labels.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut remap = vec![usize::MAX; self.n()];
        for (new, &old) in vertices.iter().enumerate() {
            if old >= self.n() {
                return Err(Error::InvalidVertex(old));
            }
            remap[old] = new;
        }
        let labels = vertices.iter().map(|&v| self.labels[v].clone()).collect();
        let mut edges = Vec::new();
        for &old in vertices {
            for &(j, w) in &self.neighbors[old] {
                if remap[j] != usize::MAX && j >= old {
                    edges.push((remap[old], remap[j], w));
                }
            }
        }
        Graph::from_indexed(labels, &edges)
    }

    /// Largest connected component (ties broken toward the component holding
    /// the smallest vertex index).
    pub fn largest_component(&self) -> Result<Graph> {
        let comps = self.connected_components();
        let best = comps
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| a.len().cmp(&b.len()).then(ib.cmp(ia)))
            .map(|(_, c)| c.clone())
            .unwrap_or_default();
        self.induced_subgraph(&best)
    }

    /// Same graph with every weight multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Graph> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Invalid(format!("scale factor must be positive, got {c}")));
        }
        let neighbors = self
            .neighbors
            .iter()
            .map(|row| row.iter().map(|&(j, w)| (j, w * c)).collect())
            .collect();
        Ok(Self::assemble(self.labels.clone(), neighbors))
    }
}
