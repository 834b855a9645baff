//! Small deterministic graph families and seeded random graphs, used by the
//! test suites and the synthetic benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

fn numbered(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

/// Four-vertex weighted communication network with weights 2, 3, 3, 3 on
/// the edges 1–2, 2–3, 2–4, 3–4. It is the induced subgraph of the weighted
/// karate club on members 1, 9, 31, 33.
pub fn weighted_quartet() -> Graph {
    Graph::from_indexed(numbered(4), &[(0, 1, 2.0), (1, 2, 3.0), (1, 3, 3.0), (2, 3, 3.0)])
        .expect("static graph")
}

/// Unit-weight complete graph `K_n` (no loops).
pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, 1.0));
        }
    }
    Graph::from_indexed(numbered(n), &edges).expect("n >= 2")
}

/// Star with one hub (vertex 1) and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|j| (0, j, 1.0)).collect();
    Graph::from_indexed(numbered(leaves + 1), &edges).expect("leaves >= 1")
}

/// Path `1 – 2 – … – n`.
pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
    Graph::from_indexed(numbered(n), &edges).expect("n >= 2")
}

/// Cycle on `n` vertices.
pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
    Graph::from_indexed(numbered(n), &edges).expect("n >= 3")
}

/// Two disjoint `K_size` cliques, optionally joined by a single edge between
/// vertex `size` and vertex `size + 1`.
pub fn two_cliques(size: usize, bridge: bool) -> Graph {
    let mut edges = Vec::new();
    for block in 0..2 {
        let off = block * size;
        for i in 0..size {
            for j in i + 1..size {
                edges.push((off + i, off + j, 1.0));
            }
        }
    }
    if bridge {
        edges.push((size - 1, size, 1.0));
    }
    Graph::from_indexed(numbered(2 * size), &edges).expect("size >= 2")
}

/// Erdős–Rényi style graph with uniform weights in `[0.5, 3)`. May contain
/// isolated vertices; the vertex set is always `1..=n`.
pub fn random_weighted(n: usize, density: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < density {
                edges.push((i, j, rng.random_range(0.5..3.0)));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, n - 1, 1.0));
    }
    Graph::from_indexed(numbered(n), &edges).expect("valid random graph")
}

/// Connected weighted graph: a random spanning tree plus extra random edges.
/// A triangle on the first three vertices keeps it non-bipartite.
pub fn random_connected(n: usize, density: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        let parent = rng.random_range(0..v);
        edges.push((parent, v, rng.random_range(0.5..3.0)));
    }
    if n >= 3 {
        edges.push((0, 1, 1.0));
        edges.push((1, 2, 1.0));
        edges.push((0, 2, 1.0));
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < density {
                edges.push((i, j, rng.random_range(0.5..3.0)));
            }
        }
    }
    Graph::from_indexed(numbered(n), &edges).expect("valid random graph")
}

/// A planted two-block graph with dangling vertices.
#[derive(Debug, Clone)]
pub struct PlantedPartition {
    pub graph: Graph,
    /// Block id (1 or 2) for every vertex.
    pub truth: Vec<usize>,
}

/// Two-block stochastic block model on `core` vertices (split evenly) with
/// edge probabilities `p_in` / `p_out`, plus `pendants` extra vertices of
/// degree one, each attached to a uniformly random core vertex and labelled
/// with that vertex's block. Core vertices left isolated by the draw are tied
/// to a random member of their own block so that every degree is positive.
pub fn planted_partition_with_pendants(
    core: usize,
    p_in: f64,
    p_out: f64,
    pendants: usize,
    seed: u64,
) -> PlantedPartition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = core / 2;
    let block = |v: usize| if v < half { 1 } else { 2 };
    let mut edges = Vec::new();
    let mut degree = vec![0usize; core];
    for i in 0..core {
        for j in i + 1..core {
            let p = if block(i) == block(j) { p_in } else { p_out };
            if rng.random::<f64>() < p {
                edges.push((i, j, 1.0));
                degree[i] += 1;
                degree[j] += 1;
            }
        }
    }
    for v in 0..core {
        if degree[v] == 0 {
            let (lo, hi) = if block(v) == 1 { (0, half) } else { (half, core) };
            let mut u = rng.random_range(lo..hi);
            while u == v {
                u = rng.random_range(lo..hi);
            }
            edges.push((v, u, 1.0));
            degree[v] += 1;
            degree[u] += 1;
        }
    }
    let mut truth: Vec<usize> = (0..core).map(block).collect();
    for k in 0..pendants {
        let anchor = rng.random_range(0..core);
        edges.push((core + k, anchor, 1.0));
        truth.push(block(anchor));
    }
    let graph = Graph::from_indexed(numbered(core + pendants), &edges).expect("valid planted graph");
    PlantedPartition { graph, truth }
}
