//! Backtracking search for induced embeddings and isomorphisms.
//!
//! Source vertices are assigned in a fixed order (seeded vertices first, then
//! ascending id) and candidates are tried in ascending id, so the sequence of
//! embeddings produced is deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use crate::graph::{triangle_counts, Embedding, Graph, Vertex};

struct Search<'a> {
    source: &'a Graph,
    target: &'a Graph,
    order: Vec<Vertex>,
    src_tri: BTreeMap<Vertex, usize>,
    tgt_tri: BTreeMap<Vertex, usize>,
    exact: bool,
    map: BTreeMap<Vertex, Vertex>,
    used: BTreeSet<Vertex>,
}

impl Search<'_> {
    fn admissible(&self, x: Vertex, w: Vertex) -> bool {
        if self.used.contains(&w) {
            return false;
        }
        let (dx, dw) = (self.source.degree(x), self.target.degree(w));
        let (tx, tw) = (self.src_tri[&x], self.tgt_tri[&w]);
        let degrees_ok = if self.exact {
            dx == dw && tx == tw
        } else {
            dx <= dw && tx <= tw
        };
        degrees_ok
            && self
                .map
                .iter()
                .all(|(&y, &fy)| self.source.has_edge(x, y) == self.target.has_edge(w, fy))
    }

    fn candidates(&self, x: Vertex) -> Vec<Vertex> {
        // A mapped neighbour pins the image to its neighbourhood.
        let anchor = self
            .source
            .neighbors(x)
            .find_map(|y| self.map.get(&y).copied());
        match anchor {
            Some(fy) => self.target.neighbors(fy).collect(),
            None => self.target.vertices().collect(),
        }
    }

    fn run<F>(&mut self, depth: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&Embedding) -> ControlFlow<()>,
    {
        if depth == self.order.len() {
            return visit(&Embedding(self.map.clone()));
        }
        let x = self.order[depth];
        for w in self.candidates(x) {
            if !self.admissible(x, w) {
                continue;
            }
            self.map.insert(x, w);
            self.used.insert(w);
            let flow = self.run(depth + 1, visit);
            self.map.remove(&x);
            self.used.remove(&w);
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Calls `visit` on every induced embedding of `source` into `target` that
/// extends `seed`, in deterministic order, until `visit` breaks.
///
/// An invalid seed (not a partial induced isomorphism) yields nothing.
pub fn for_each_embedding<F>(source: &Graph, target: &Graph, seed: Option<&Embedding>, mut visit: F)
where
    F: FnMut(&Embedding) -> ControlFlow<()>,
{
    for_each_embedding_impl(source, target, seed, false, &mut visit);
}

fn for_each_embedding_impl<F>(
    source: &Graph,
    target: &Graph,
    seed: Option<&Embedding>,
    exact: bool,
    visit: &mut F,
) where
    F: FnMut(&Embedding) -> ControlFlow<()>,
{
    if source.vertex_count() > target.vertex_count() {
        return;
    }
    let seed = seed.cloned().unwrap_or_default();
    if !seed.domain().iter().all(|&v| source.contains_vertex(v))
        || !seed.is_partial_isomorphism(source, target)
    {
        return;
    }
    let mut search = Search {
        source,
        target,
        order: source
            .vertices()
            .filter(|v| seed.get(*v).is_none())
            .collect(),
        src_tri: triangle_counts(source),
        tgt_tri: triangle_counts(target),
        exact,
        used: seed.image(),
        map: seed.0,
    };
    let _ = search.run(0, visit);
}

/// All induced embeddings of `source` into `target` extending `seed`.
pub fn find_embeddings(source: &Graph, target: &Graph, seed: Option<&Embedding>) -> Vec<Embedding> {
    let mut out = Vec::new();
    for_each_embedding(source, target, seed, |e| {
        out.push(e.clone());
        ControlFlow::Continue(())
    });
    out
}

/// The first induced embedding extending `seed`, if any.
pub fn first_embedding(
    source: &Graph,
    target: &Graph,
    seed: Option<&Embedding>,
) -> Option<Embedding> {
    let mut found = None;
    for_each_embedding(source, target, seed, |e| {
        found = Some(e.clone());
        ControlFlow::Break(())
    });
    found
}

fn sorted_degrees(g: &Graph) -> Vec<usize> {
    let mut d: Vec<_> = g.vertices().map(|v| g.degree(v)).collect();
    d.sort_unstable();
    d
}

/// An isomorphism `g → h` extending `seed`, if one exists.
pub fn isomorphism_extending(g: &Graph, h: &Graph, seed: Option<&Embedding>) -> Option<Embedding> {
    if g.vertex_count() != h.vertex_count()
        || g.edge_count() != h.edge_count()
        || sorted_degrees(g) != sorted_degrees(h)
    {
        return None;
    }
    let mut found = None;
    for_each_embedding_impl(g, h, seed, true, &mut |e: &Embedding| {
        found = Some(e.clone());
        ControlFlow::Break(())
    });
    found
}

/// An isomorphism `g → h`, if one exists.
pub fn are_isomorphic(g: &Graph, h: &Graph) -> Option<Embedding> {
    isomorphism_extending(g, h, None)
}

/// All automorphisms of `g` extending `seed`.
pub fn automorphisms(g: &Graph, seed: Option<&Embedding>) -> Vec<Embedding> {
    let mut out = Vec::new();
    for_each_embedding_impl(g, g, seed, true, &mut |e: &Embedding| {
        out.push(e.clone());
        ControlFlow::Continue(())
    });
    out
}
