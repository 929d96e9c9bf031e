//! Recommendation lookups on a labeled spanning tree.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::mst::SpanningTree;

#[derive(Debug, Clone, PartialEq)]
pub struct Neighbor {
    pub id: String,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathResult {
    pub from: String,
    pub to: String,
    pub hops: usize,
    /// Intermediate vertices, excluding both endpoints.
    pub via: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nearby {
    pub id: String,
    pub hops: usize,
}

/// A spanning tree whose vertices carry item ids.
#[derive(Debug, Clone)]
pub struct TreeIndex {
    tree: SpanningTree,
    ids: Vec<String>,
    lookup: HashMap<String, usize>,
}

impl TreeIndex {
    pub fn new(tree: SpanningTree, ids: Vec<String>) -> Result<Self> {
        if ids.len() != tree.vertex_count() {
            return Err(Error::format(
                "tree labels",
                format!("{} ids for {} vertices", ids.len(), tree.vertex_count()),
            ));
        }
        let mut lookup = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if lookup.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        Ok(TreeIndex { tree, ids, lookup })
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.lookup
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownId(id.to_owned()))
    }

    /// Tree-adjacent items, closest first (ties by id).
    pub fn neighbors(&self, id: &str) -> Result<Vec<Neighbor>> {
        let v = self.index_of(id)?;
        let mut out: Vec<Neighbor> = self
            .tree
            .neighbors(v)
            .iter()
            .map(|&(n, w)| Neighbor {
                id: self.ids[n].clone(),
                delta: w,
            })
            .collect();
        out.sort_by(|a, b| a.delta.total_cmp(&b.delta).then_with(|| a.id.cmp(&b.id)));
        Ok(out)
    }

    pub fn path(&self, from: &str, to: &str) -> Result<PathResult> {
        let a = self.index_of(from)?;
        let b = self.index_of(to)?;
        let vertices = self.tree.path(a, b);
        let hops = vertices.len() - 1;
        let via = if hops > 1 {
            vertices[1..hops]
                .iter()
                .map(|&v| self.ids[v].clone())
                .collect()
        } else {
            Vec::new()
        };
        Ok(PathResult {
            from: from.to_owned(),
            to: to.to_owned(),
            hops,
            via,
        })
    }

    /// Every other item ordered by `(hops, id)`.
    pub fn by_hops(&self, id: &str) -> Result<Vec<Nearby>> {
        let v = self.index_of(id)?;
        let dist = self.tree.hop_distances(v);
        let mut out: Vec<Nearby> = (0..self.ids.len())
            .filter(|&u| u != v)
            .map(|u| Nearby {
                id: self.ids[u].clone(),
                hops: dist[u],
            })
            .collect();
        out.sort_by(|a, b| a.hops.cmp(&b.hops).then_with(|| a.id.cmp(&b.id)));
        Ok(out)
    }

    /// The `n` items fewest hops away.
    pub fn k_nearest(&self, id: &str, n: usize) -> Result<Vec<Nearby>> {
        let mut all = self.by_hops(id)?;
        all.truncate(n);
        Ok(all)
    }
}
