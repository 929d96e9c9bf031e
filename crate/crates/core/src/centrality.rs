//! Vertex centralities on a spanning tree.
//!
//! All distances are unweighted hop counts. On a tree every pair of vertices
//! is joined by exactly one path, which lets betweenness and closeness be
//! computed from subtree sizes in linear time; the generic per-source sweeps
//! are kept alongside as a cross-check.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mst::SpanningTree;

/// `deg(v) / (k - 1)`.
pub fn degree_centrality(tree: &SpanningTree) -> Vec<f64> {
    let denom = (tree.vertex_count() - 1) as f64;
    (0..tree.vertex_count())
        .map(|v| tree.degree(v) as f64 / denom)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenConfig {
    /// Bound on `‖R·e − λ·e‖`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for EigenConfig {
    fn default() -> Self {
        EigenConfig {
            tol: 1e-10,
            max_iter: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenvector {
    /// Unit-norm, nonnegative.
    pub vector: Vec<f64>,
    pub lambda: f64,
    pub residual: f64,
    pub iterations: usize,
}

fn adjacency_times(tree: &SpanningTree, x: &[f64], out: &mut [f64]) {
    for (v, slot) in out.iter_mut().enumerate() {
        *slot = tree.neighbors(v).iter().map(|&(n, _)| x[n]).sum();
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Dominant eigenpair of the adjacency matrix.
///
/// Power iteration runs on `R + I`: a tree is bipartite, so `R` has both `λ`
/// and `-λ` in its spectrum and the unshifted iteration would oscillate.
/// Stops once the residual on `R` itself is within `tol`.
pub fn eigenvector_centrality(tree: &SpanningTree, config: &EigenConfig) -> Result<Eigenvector> {
    let k = tree.vertex_count();
    let mut x = vec![1.0 / (k as f64).sqrt(); k];
    let mut rx = vec![0.0; k];
    let mut residual = f64::INFINITY;
    for iteration in 0..=config.max_iter {
        adjacency_times(tree, &x, &mut rx);
        let lambda: f64 = x.iter().zip(&rx).map(|(a, b)| a * b).sum();
        residual = rx
            .iter()
            .zip(&x)
            .map(|(r, a)| (r - lambda * a).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= config.tol {
            return Ok(Eigenvector {
                vector: x,
                lambda,
                residual,
                iterations: iteration,
            });
        }
        for (a, r) in x.iter_mut().zip(&rx) {
            *a += r;
        }
        let scale = norm(&x);
        x.iter_mut().for_each(|a| *a /= scale);
    }
    Err(Error::NoConvergence {
        iterations: config.max_iter,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Betweenness {
    /// Unordered pairs `{s, t}`, `s ≠ v ≠ t`, whose path passes through `v`.
    pub raw: u64,
    /// `2·raw / (k² − 3k + 2)`; 0 when `k = 2`.
    pub normalized: f64,
}

/// Rooted at vertex 0: BFS order, parents and subtree sizes.
fn subtree_sizes(tree: &SpanningTree) -> (Vec<usize>, Vec<usize>, Vec<u64>) {
    let (parent, order) = tree.bfs(0);
    let mut size = vec![1u64; tree.vertex_count()];
    for &v in order.iter().skip(1).rev() {
        size[parent[v]] += size[v];
    }
    (order, parent, size)
}

pub fn freeman_normalize(raw: f64, k: usize) -> f64 {
    let k = k as f64;
    let denom = k * k - 3.0 * k + 2.0;
    if denom > 0.0 {
        2.0 * raw / denom
    } else {
        0.0
    }
}

/// Betweenness from subtree sizes: removing `v` splits the tree into
/// components of sizes `n_a`, and every pair drawn from two different
/// components routes through `v`, giving `Σ_{a<b} n_a·n_b`.
pub fn betweenness_centrality(tree: &SpanningTree) -> Vec<Betweenness> {
    let k = tree.vertex_count();
    let (_, parent, size) = subtree_sizes(tree);
    (0..k)
        .map(|v| {
            let mut sum = 0u64;
            let mut sum_sq = 0u64;
            let mut add = |n: u64| {
                sum += n;
                sum_sq += n * n;
            };
            for &(n, _) in tree.neighbors(v) {
                if parent[n] == v && n != v {
                    add(size[n]);
                }
            }
            if v != 0 {
                add(k as u64 - size[v]);
            }
            let raw = (sum * sum - sum_sq) / 2;
            Betweenness {
                raw,
                normalized: freeman_normalize(raw as f64, k),
            }
        })
        .collect()
}

/// Brandes' algorithm for unweighted undirected graphs, counting each
/// unordered pair once. Fractional when shortest paths are not unique.
pub fn brandes_betweenness(adjacency: &[Vec<usize>]) -> Vec<f64> {
    let n = adjacency.len();
    let per_source = |s: usize| {
        let mut stack = Vec::with_capacity(n);
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut sigma = vec![0.0f64; n];
        let mut dist = vec![-1i64; n];
        sigma[s] = 1.0;
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in &adjacency[v] {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    pred[w].push(v);
                }
            }
        }
        let mut delta = vec![0.0f64; n];
        while let Some(w) = stack.pop() {
            for &v in &pred[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
        }
        delta[s] = 0.0;
        delta
    };
    let mut total = (0..n).into_par_iter().map(per_source).reduce(
        || vec![0.0; n],
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    );
    total.iter_mut().for_each(|b| *b /= 2.0);
    total
}

/// `(k − 1) / Σ_u hops(v, u)`, in linear time by rerooting: moving the root
/// from a parent `p` to its child `c` brings `size(c)` vertices one hop closer
/// and pushes the other `k − size(c)` one hop away.
pub fn closeness_centrality(tree: &SpanningTree) -> Vec<f64> {
    let k = tree.vertex_count();
    let (order, parent, size) = subtree_sizes(tree);
    let mut farness = vec![0u64; k];
    farness[0] = tree.hop_distances(0).iter().map(|&d| d as u64).sum();
    for &v in order.iter().skip(1) {
        farness[v] = farness[parent[v]] + k as u64 - 2 * size[v];
    }
    farness.iter().map(|&f| (k - 1) as f64 / f as f64).collect()
}

/// Closeness from one BFS per source.
pub fn closeness_by_bfs(tree: &SpanningTree) -> Vec<f64> {
    let k = tree.vertex_count();
    (0..k)
        .into_par_iter()
        .map(|v| {
            let farness: usize = tree.hop_distances(v).iter().sum();
            (k - 1) as f64 / farness as f64
        })
        .collect()
}

pub fn total_centrality(degree: f64, eigen: f64, betweenness: f64, closeness: f64) -> f64 {
    (degree * degree + eigen * eigen + betweenness * betweenness + closeness * closeness).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexCentrality {
    pub degree: f64,
    pub eigenvector: f64,
    pub betweenness_raw: u64,
    pub betweenness: f64,
    pub closeness: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityReport {
    /// Indexed by vertex.
    pub vertices: Vec<VertexCentrality>,
    pub lambda: f64,
    pub eigen_residual: f64,
}

impl CentralityReport {
    pub fn compute(tree: &SpanningTree, eigen: &EigenConfig) -> Result<Self> {
        let degree = degree_centrality(tree);
        let ev = eigenvector_centrality(tree, eigen)?;
        let betweenness = betweenness_centrality(tree);
        let closeness = closeness_centrality(tree);
        let vertices = (0..tree.vertex_count())
            .map(|v| VertexCentrality {
                degree: degree[v],
                eigenvector: ev.vector[v],
                betweenness_raw: betweenness[v].raw,
                betweenness: betweenness[v].normalized,
                closeness: closeness[v],
                total: total_centrality(
                    degree[v],
                    ev.vector[v],
                    betweenness[v].normalized,
                    closeness[v],
                ),
            })
            .collect();
        Ok(CentralityReport {
            vertices,
            lambda: ev.lambda,
            eigen_residual: ev.residual,
        })
    }

    /// Vertex indices by descending total centrality, ties by index.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by(|&a, &b| {
            self.vertices[b]
                .total
                .total_cmp(&self.vertices[a].total)
                .then(a.cmp(&b))
        });
        order
    }
}
