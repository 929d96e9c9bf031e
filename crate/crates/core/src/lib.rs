//! Minimum-spanning-tree analytics over item catalogs.
//!
//! Items carry a crew set, a vote histogram and a topic set. Every pair of
//! items gets a fused distance from three normalized measures, Kruskal's
//! algorithm reduces the complete distance graph to a spanning tree, and
//! centralities on that tree rank how significant each item is. The tree
//! also answers neighbor and path queries for recommendations.

pub mod centrality;
pub mod dataset;
pub mod disjoint_set;
pub mod dot;
pub mod error;
pub mod mst;
pub mod pair_cache;
pub mod pipeline;
pub mod query;
pub mod report;
pub mod similarity;

pub use centrality::{CentralityReport, EigenConfig, VertexCentrality};
pub use dataset::{generate_synthetic, load_catalog, AnimeRecord, Catalog, DEFAULT_CATEGORIES};
pub use disjoint_set::DisjointSet;
pub use error::{Error, Result};
pub use mst::{kruskal, SpanningTree, WeightedEdge};
pub use pipeline::{build, BuildConfig, BuildOutput};
pub use query::{PathResult, TreeIndex};
pub use report::Measure;
pub use similarity::{NormalizationStats, SimilarityVector};
