//! Enumeration of special bowtie-free graphs up to isomorphism.
//!
//! Special graphs are generated in two stages: a disjoint union of K4s and
//! chimneys, then a set of cross edges between distinct blocks, each of which
//! must avoid closing a triangle. Isomorphic duplicates are rejected.

use std::collections::BTreeMap;

use crate::graph::{triangle_counts, Graph, Vertex};
use crate::search::are_isomorphic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum BlockShape {
    K4,
    Chimney(u32),
}

impl BlockShape {
    fn size(self) -> u32 {
        match self {
            BlockShape::K4 => 4,
            BlockShape::Chimney(h) => h + 2,
        }
    }

    fn shapes_of_size(size: u32) -> Vec<BlockShape> {
        match size {
            0..=3 => vec![],
            4 => vec![BlockShape::K4, BlockShape::Chimney(2)],
            m => vec![BlockShape::Chimney(m - 2)],
        }
    }
}

/// Non-increasing block sequences whose sizes sum to `n`.
fn block_multisets(n: u32) -> Vec<Vec<BlockShape>> {
    fn go(
        rest: u32,
        max: Option<BlockShape>,
        cur: &mut Vec<BlockShape>,
        out: &mut Vec<Vec<BlockShape>>,
    ) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for size in 4..=rest {
            for shape in BlockShape::shapes_of_size(size) {
                if max.is_some_and(|m| shape > m) {
                    continue;
                }
                cur.push(shape);
                go(rest - size, Some(shape), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, None, &mut Vec::new(), &mut out);
    out
}

/// Lays blocks out on consecutive ids. Returns the graph and each vertex's block index.
fn layout(blocks: &[BlockShape]) -> (Graph, Vec<usize>) {
    let mut g = Graph::empty();
    let mut owner = Vec::new();
    let mut start = 0;
    for (i, b) in blocks.iter().enumerate() {
        let piece = match b {
            BlockShape::K4 => Graph::complete(4),
            BlockShape::Chimney(h) => Graph::chimney(*h),
        };
        for v in piece.vertices() {
            g.insert_vertex(v + start);
            owner.push(i);
        }
        for (u, v) in piece.edges() {
            g.insert_edge(u + start, v + start);
        }
        start += b.size();
    }
    (g, owner)
}

/// Cheap isomorphism invariant used to bucket candidates.
fn invariant(g: &Graph) -> Invariant {
    let tri = triangle_counts(g);
    let mut inv: Vec<_> = g
        .vertices()
        .map(|v| {
            let mut nd: Vec<_> = g.neighbors(v).map(|w| g.degree(w)).collect();
            nd.sort_unstable();
            (g.degree(v), tri[&v], nd)
        })
        .collect();
    inv.sort_unstable();
    inv
}

type Invariant = Vec<(usize, usize, Vec<usize>)>;

/// Accumulates graphs, keeping the first representative of each isomorphism class.
#[derive(Default)]
pub(crate) struct IsoClasses {
    buckets: BTreeMap<Invariant, Vec<usize>>,
    graphs: Vec<Graph>,
}

impl IsoClasses {
    /// Inserts `g` unless an isomorphic graph is already present.
    pub(crate) fn insert(&mut self, g: Graph) -> bool {
        let bucket = self.buckets.entry(invariant(&g)).or_default();
        if bucket
            .iter()
            .any(|&i| are_isomorphic(&self.graphs[i], &g).is_some())
        {
            return false;
        }
        bucket.push(self.graphs.len());
        self.graphs.push(g);
        true
    }

    pub(crate) fn into_graphs(self) -> Vec<Graph> {
        self.graphs
    }
}

/// All special bowtie-free graphs on exactly `n` vertices, one per
/// isomorphism class, on vertex ids `0..n`.
///
/// Output order is deterministic: block multisets in ascending order, then
/// cross-edge sets in depth-first order (fewest cross edges first within a
/// branch). Intended for small `n`; the number of cross-edge sets grows
/// quickly once three or more blocks are present.
pub fn enumerate_special(n: u32) -> Vec<Graph> {
    if n == 0 {
        return vec![Graph::empty()];
    }
    let mut classes = IsoClasses::default();
    for blocks in block_multisets(n) {
        let (base, owner) = layout(&blocks);
        let candidates: Vec<(Vertex, Vertex)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| owner[u as usize] != owner[v as usize])
            .collect();
        let mut g = base;
        extend_cross_edges(&mut g, &candidates, 0, &mut classes);
    }
    classes.into_graphs()
}

fn extend_cross_edges(
    g: &mut Graph,
    candidates: &[(Vertex, Vertex)],
    i: usize,
    classes: &mut IsoClasses,
) {
    if i == candidates.len() {
        classes.insert(g.clone());
        return;
    }
    extend_cross_edges(g, candidates, i + 1, classes);
    let (u, v) = candidates[i];
    if g.common_neighbors(u, v).is_empty() {
        g.insert_edge(u, v);
        extend_cross_edges(g, candidates, i + 1, classes);
        g.remove_edge(u, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::is_special;

    /// Brute-force oracle: every labelled graph on `n` vertices, filtered and deduplicated.
    fn brute_force(n: u32) -> Vec<Graph> {
        let pairs: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let mut classes = IsoClasses::default();
        for mask in 0u64..1 << pairs.len() {
            let g = Graph::new(
                0..n,
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, e)| *e),
            )
            .unwrap();
            if is_special(&g) {
                classes.insert(g);
            }
        }
        classes.into_graphs()
    }

    fn same_classes(a: &[Graph], b: &[Graph]) -> bool {
        a.len() == b.len()
            && a.iter()
                .all(|g| b.iter().any(|h| are_isomorphic(g, h).is_some()))
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_special(0), vec![Graph::empty()]);
        for n in 1..=3 {
            assert!(enumerate_special(n).is_empty());
        }
        let four = enumerate_special(4);
        assert_eq!(four.len(), 2);
        assert_eq!(four[0], Graph::complete(4));
        assert_eq!(four[1], Graph::chimney(2));
    }

    #[test]
    fn matches_brute_force_up_to_six() {
        for n in 0..=6 {
            assert!(
                same_classes(&enumerate_special(n), &brute_force(n)),
                "n = {n}"
            );
        }
    }

    #[test]
    fn eight_vertices_are_special_and_distinct() {
        let all = enumerate_special(8);
        assert!(all.iter().all(is_special));
        for (i, g) in all.iter().enumerate() {
            for h in &all[i + 1..] {
                assert!(are_isomorphic(g, h).is_none());
            }
        }
        // two blocks of size four plus a single chimney of height six
        assert!(all.len() > 4);
    }
}
