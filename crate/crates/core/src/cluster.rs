//! Grouping live cells into clusters.
//!
//! Two cells belong to the same cluster when a chain of cells links them
//! with every hop at Chebyshev distance at most `radius`. Radius 1 is plain
//! 8-connectivity; radius 2 also joins cells that share a dead neighbour and
//! can therefore still interact.

use rustc_hash::FxHashMap;

use crate::engine::{BoundingBox, Cell, Pattern};

/// One cluster, cells in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    pub cells: Vec<Cell>,
    pub bbox: BoundingBox,
}

impl Cluster {
    pub fn population(&self) -> usize {
        self.cells.len()
    }

    pub fn to_pattern(&self, generation: u64) -> Pattern {
        Pattern::with_generation(self.cells.iter().copied(), generation)
    }
}

struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Clusters of `pattern` at the given linking radius, ordered by their first
/// cell in row-major order.
pub fn clusters(pattern: &Pattern, radius: i64) -> Vec<Cluster> {
    let cells = pattern.cells();
    let index: FxHashMap<Cell, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut sets = DisjointSet::new(cells.len());
    for (i, &c) in cells.iter().enumerate() {
        // Only look "forward" in row-major order; the reverse hop is the
        // same pair.
        for dy in 0..=radius {
            let lo = if dy == 0 { 1 } else { -radius };
            for dx in lo..=radius {
                let (Some(x), Some(y)) = (c.x.checked_add(dx), c.y.checked_add(dy)) else {
                    continue;
                };
                if let Some(&j) = index.get(&Cell { x, y }) {
                    sets.union(i, j);
                }
            }
        }
    }

    let mut by_root: FxHashMap<usize, usize> = FxHashMap::default();
    let mut out: Vec<Vec<Cell>> = Vec::new();
    for (i, &c) in cells.iter().enumerate() {
        let root = sets.find(i);
        let slot = *by_root.entry(root).or_insert_with(|| {
            out.push(Vec::new());
            out.len() - 1
        });
        out[slot].push(c);
    }
    out.into_iter()
        .map(|cells| {
            let bbox = Pattern::new(cells.iter().copied())
                .bounding_box()
                .expect("clusters are non-empty");
            Cluster { cells, bbox }
        })
        .collect()
}
