//! End-to-end build: pair measures, spanning tree, centralities.

use std::path::Path;

use rayon::prelude::*;

use crate::centrality::{CentralityReport, EigenConfig};
use crate::dataset::Catalog;
use crate::error::Result;
use crate::mst::{kruskal, SpanningTree, WeightedEdge};
use crate::pair_cache;
use crate::similarity::{compute_raw_pairs, NormalizationStats, RawPairs, SimilarityVector};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BuildConfig {
    pub eigen: EigenConfig,
}

#[derive(Debug, Clone)]
pub struct BuildOutput {
    pub pairs_considered: usize,
    pub stats: NormalizationStats,
    pub tree: SpanningTree,
    pub report: CentralityReport,
}

/// Fused distances of all raw pairs as graph edges.
pub fn fused_edges(raw: &RawPairs) -> Vec<WeightedEdge> {
    raw.pairs
        .par_iter()
        .map(|p| WeightedEdge {
            u: p.i,
            v: p.j,
            w: SimilarityVector::from_raw(p, &raw.stats).delta,
        })
        .collect()
}

/// Runs the whole pipeline, writing raw pairs to `pair_cache_path` if given.
pub fn build(
    catalog: &Catalog,
    config: &BuildConfig,
    pair_cache_path: Option<&Path>,
) -> Result<BuildOutput> {
    let raw = compute_raw_pairs(catalog)?;
    if let Some(path) = pair_cache_path {
        pair_cache::save(path, &raw)?;
    }
    let pairs_considered = raw.pairs.len();
    let stats = raw.stats;
    let edges = fused_edges(&raw);
    drop(raw);
    let tree = kruskal(catalog.size(), edges)?;
    let report = CentralityReport::compute(&tree, &config.eigen)?;
    Ok(BuildOutput {
        pairs_considered,
        stats,
        tree,
        report,
    })
}

/// Rebuilds the spanning tree from a pair cache without touching the catalog.
pub fn tree_from_cache(path: &Path) -> Result<SpanningTree> {
    let raw = pair_cache::load(path)?;
    kruskal(raw.k, fused_edges(&raw))
}
