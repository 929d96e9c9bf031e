//! Kruskal's minimum spanning tree and the tree representation shared by the
//! centrality and query modules.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::disjoint_set::DisjointSet;
use crate::error::{Error, Result};
use crate::similarity::SimilarityVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedEdge {
    pub u: u32,
    pub v: u32,
    pub w: f64,
}

impl WeightedEdge {
    /// Orders the endpoints so that `u < v`.
    pub fn new(a: u32, b: u32, w: f64) -> Self {
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        WeightedEdge { u, v, w }
    }

    /// Total order by `(w, u, v)`.
    pub fn kruskal_order(&self, other: &Self) -> Ordering {
        self.w
            .total_cmp(&other.w)
            .then(self.u.cmp(&other.u))
            .then(self.v.cmp(&other.v))
    }

    fn validate(&self, k: usize) -> Result<()> {
        if self.u >= self.v || self.v as usize >= k || !self.w.is_finite() || self.w < 0.0 {
            return Err(Error::InvalidEdge {
                u: self.u,
                v: self.v,
                w: self.w,
                k,
            });
        }
        Ok(())
    }
}

impl From<&SimilarityVector> for WeightedEdge {
    fn from(s: &SimilarityVector) -> Self {
        WeightedEdge {
            u: s.i,
            v: s.j,
            w: s.delta,
        }
    }
}

/// A spanning tree on vertices `0..k`.
///
/// Edges are kept in `(u, v)` order; neighbor lists are sorted by vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    k: usize,
    edges: Vec<WeightedEdge>,
    adjacency: Vec<Vec<(usize, f64)>>,
    total_weight: f64,
}

impl SpanningTree {
    /// Validates that `edges` form a spanning tree on `k` vertices.
    pub fn from_edges(k: usize, edges: Vec<WeightedEdge>) -> Result<Self> {
        if k < 2 {
            return Err(Error::NotATree(format!("{k} vertices")));
        }
        if edges.len() != k - 1 {
            return Err(Error::NotATree(format!(
                "{} edges for {k} vertices",
                edges.len()
            )));
        }
        let mut ds = DisjointSet::with_singletons(k);
        let mut total = 0.0;
        for e in &edges {
            e.validate(k)?;
            if !ds.union(e.u as usize, e.v as usize) {
                return Err(Error::NotATree(format!("cycle through ({}, {})", e.u, e.v)));
            }
            total += e.w;
        }
        Ok(Self::assemble(k, edges, total))
    }

    fn assemble(k: usize, mut edges: Vec<WeightedEdge>, total_weight: f64) -> Self {
        edges.sort_by_key(|e| (e.u, e.v));
        let mut adjacency = vec![Vec::new(); k];
        for e in &edges {
            adjacency[e.u as usize].push((e.v as usize, e.w));
            adjacency[e.v as usize].push((e.u as usize, e.w));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(n, _)| n);
        }
        SpanningTree {
            k,
            edges,
            adjacency,
            total_weight,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    /// Sum of edge weights, accumulated in Kruskal acceptance order.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Neighbor lists without weights.
    pub fn unweighted_adjacency(&self) -> Vec<Vec<usize>> {
        self.adjacency
            .iter()
            .map(|l| l.iter().map(|&(n, _)| n).collect())
            .collect()
    }

    /// BFS parents from `root` (the root is its own parent) and visit order.
    pub fn bfs(&self, root: usize) -> (Vec<usize>, Vec<usize>) {
        let mut parent = vec![usize::MAX; self.k];
        let mut order = Vec::with_capacity(self.k);
        let mut queue = VecDeque::new();
        parent[root] = root;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(n, _) in &self.adjacency[v] {
                if parent[n] == usize::MAX {
                    parent[n] = v;
                    queue.push_back(n);
                }
            }
        }
        (parent, order)
    }

    /// Hop counts from `source` to every vertex.
    pub fn hop_distances(&self, source: usize) -> Vec<usize> {
        let (parent, order) = self.bfs(source);
        let mut dist = vec![0; self.k];
        for &v in order.iter().skip(1) {
            dist[v] = dist[parent[v]] + 1;
        }
        dist
    }

    /// Vertices on the unique path, both endpoints included.
    pub fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let (parent, _) = self.bfs(to);
        let mut path = vec![from];
        let mut v = from;
        while v != to {
            v = parent[v];
            path.push(v);
        }
        path
    }
}

/// Minimum spanning tree by Kruskal's algorithm.
///
/// Edges are sorted by `(w, u, v)`, so the result is independent of input
/// order even when weights tie.
pub fn kruskal(k: usize, edges: impl IntoIterator<Item = WeightedEdge>) -> Result<SpanningTree> {
    if k < 2 {
        return Err(Error::CatalogTooSmall(k));
    }
    let mut edges: Vec<WeightedEdge> = edges.into_iter().collect();
    for e in &edges {
        e.validate(k)?;
    }
    edges.par_sort_unstable_by(WeightedEdge::kruskal_order);

    let mut sets = DisjointSet::with_singletons(k);
    let mut chosen = Vec::with_capacity(k - 1);
    let mut total = 0.0;
    for e in edges {
        if sets.find_set(e.u as usize) != sets.find_set(e.v as usize) {
            sets.union(e.u as usize, e.v as usize);
            total += e.w;
            chosen.push(e);
            if chosen.len() == k - 1 {
                break;
            }
        }
    }
    if chosen.len() != k - 1 {
        return Err(Error::NotConnected {
            components: sets.set_count(),
        });
    }
    Ok(SpanningTree::assemble(k, chosen, total))
}

const TREE_MAGIC: &str = "animst-tree";
const TREE_VERSION: u32 = 1;

/// Writes a tree with vertex labels as tab-separated text:
///
/// ```text
/// animst-tree    1
/// k              <k>
/// total_weight   <w>
/// vertex         <index>  <label>     (k lines, index order)
/// edge           <u>  <v>  <w>        (k-1 lines, (u, v) order)
/// ```
///
/// Floats use the shortest representation that parses back exactly.
pub fn write_tree(mut out: impl Write, tree: &SpanningTree, labels: &[String]) -> Result<()> {
    assert_eq!(labels.len(), tree.k, "one label per vertex");
    writeln!(out, "{TREE_MAGIC}\t{TREE_VERSION}")?;
    writeln!(out, "k\t{}", tree.k)?;
    writeln!(out, "total_weight\t{}", tree.total_weight)?;
    for (i, label) in labels.iter().enumerate() {
        writeln!(out, "vertex\t{i}\t{label}")?;
    }
    for e in &tree.edges {
        writeln!(out, "edge\t{}\t{}\t{}", e.u, e.v, e.w)?;
    }
    Ok(())
}

pub fn save_tree(path: &Path, tree: &SpanningTree, labels: &[String]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_tree(&mut out, tree, labels)?;
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn read_tree(input: impl BufRead) -> Result<(SpanningTree, Vec<String>)> {
    let bad = |m: String| Error::format("tree file", m);
    let mut lines = input.lines();
    let mut next = |what: &str| -> Result<String> {
        lines
            .next()
            .transpose()?
            .ok_or_else(|| bad(format!("missing {what}")))
    };
    fn field<T: std::str::FromStr>(line: &str, key: &str) -> Result<T> {
        line.strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('\t'))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::format("tree file", format!("expected {key}, got {line:?}")))
    }

    let version: u32 = field(&next("header")?, TREE_MAGIC)?;
    if version != TREE_VERSION {
        return Err(bad(format!("unsupported version {version}")));
    }
    let k: usize = field(&next("k")?, "k")?;
    let total_weight: f64 = field(&next("total_weight")?, "total_weight")?;

    let mut labels = Vec::with_capacity(k);
    for i in 0..k {
        let line = next("vertex")?;
        let mut parts = line.splitn(3, '\t');
        match (
            parts.next(),
            parts.next().map(str::parse::<usize>),
            parts.next(),
        ) {
            (Some("vertex"), Some(Ok(idx)), Some(label)) if idx == i => {
                labels.push(label.to_owned())
            }
            _ => return Err(bad(format!("bad vertex line {line:?}"))),
        }
    }
    let mut edges = Vec::with_capacity(k.saturating_sub(1));
    for _ in 1..k {
        let line = next("edge")?;
        let parts: Vec<&str> = line.split('\t').collect();
        let parsed = match parts.as_slice() {
            ["edge", u, v, w] => u
                .parse()
                .ok()
                .zip(v.parse().ok())
                .zip(w.parse().ok())
                .map(|((u, v), w)| WeightedEdge { u, v, w }),
            _ => None,
        };
        edges.push(parsed.ok_or_else(|| bad(format!("bad edge line {line:?}")))?);
    }
    let tree = SpanningTree::from_edges(k, edges)?;
    if (tree.total_weight - total_weight).abs() > 1e-9 {
        return Err(bad(format!(
            "total_weight {total_weight} disagrees with edges ({})",
            tree.total_weight
        )));
    }
    Ok((
        SpanningTree {
            total_weight,
            ..tree
        },
        labels,
    ))
}

pub fn load_tree(path: &Path) -> Result<(SpanningTree, Vec<String>)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_tree(BufReader::new(file))
}
