/// Disjoint-set forest with path compression and union by rank.
///
/// Elements are dense indices registered in order by [`DisjointSet::make_set`].
#[derive(Debug, Clone, Default)]
pub struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
    sets: usize,
}

impl DisjointSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// `n` singleton sets `0..n`.
    pub fn with_singletons(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            rank: vec![0; n],
            sets: n,
        }
    }

    /// Registers the next element as a singleton and returns it.
    pub fn make_set(&mut self) -> usize {
        let v = self.parent.len();
        self.parent.push(v);
        self.rank.push(0);
        self.sets += 1;
        v
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Number of disjoint sets.
    pub fn set_count(&self) -> usize {
        self.sets
    }

    /// Representative of `v`'s set.
    ///
    /// Panics if `v` was never registered.
    pub fn find_set(&mut self, v: usize) -> usize {
        assert!(
            v < self.parent.len(),
            "find_set on unregistered element {v} (have {})",
            self.parent.len()
        );
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = v;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Merges the sets of `u` and `v`; false if they were already joined.
    pub fn union(&mut self, u: usize, v: usize) -> bool {
        let a = self.find_set(u);
        let b = self.find_set(v);
        if a == b {
            return false;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            std::cmp::Ordering::Less => self.parent[a] = b,
            std::cmp::Ordering::Greater => self.parent[b] = a,
            std::cmp::Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
        self.sets -= 1;
        true
    }
}
