//! Recognition and decomposition of special bowtie-free graphs.
//!
//! A bowtie-free graph is *special* when every vertex lies in a K4 or in a
//! chimney (two or more triangles freely glued along one edge). Deleting the
//! edges that lie in no triangle splits a special graph into vertex-disjoint
//! K4s and chimneys; the deleted edges are the *cross edges*.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::dot::to_dot;
use crate::error::{Error, Result};
use crate::graph::{
    edge, ensure_bowtie_free, triangles_at, triangles_of, Edge, Embedding, Graph, Vertex,
};

/// Triangles glued along a base edge, with pairwise non-adjacent tips.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chimney {
    pub base: [Vertex; 2],
    pub tips: Vec<Vertex>,
}

impl Chimney {
    pub fn height(&self) -> usize {
        self.tips.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Block {
    K4 { vertices: [Vertex; 4] },
    Chimney(Chimney),
}

impl Block {
    pub fn vertices(&self) -> Vec<Vertex> {
        match self {
            Block::K4 { vertices } => vertices.to_vec(),
            Block::Chimney(c) => {
                let mut vs: Vec<_> = c.base.iter().chain(&c.tips).copied().collect();
                vs.sort_unstable();
                vs
            }
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        match self {
            Block::K4 { vertices } => vertices.contains(&v),
            Block::Chimney(c) => c.base.contains(&v) || c.tips.contains(&v),
        }
    }

    /// Edges of the block, sorted.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = match self {
            Block::K4 { vertices: q } => (0..4)
                .flat_map(|i| (i + 1..4).map(move |j| (q[i], q[j])))
                .collect::<Vec<_>>(),
            Block::Chimney(c) => {
                let [a, b] = c.base;
                let mut e = vec![edge(a, b)];
                for &t in &c.tips {
                    e.push(edge(a, t));
                    e.push(edge(b, t));
                }
                e
            }
        };
        out.sort_unstable();
        out
    }
}

/// Structural role of a vertex in a special graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexRole {
    InK4,
    Base,
    Tip,
}

/// Blocks ordered by least vertex, plus the sorted cross edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Decomposition {
    pub blocks: Vec<Block>,
    pub cross_edges: Vec<[Vertex; 2]>,
}

impl Decomposition {
    /// Rebuilds the host graph from blocks and cross edges.
    pub fn reassemble(&self) -> Graph {
        let mut g = Graph::empty();
        for b in &self.blocks {
            for v in b.vertices() {
                g.insert_vertex(v);
            }
            for (u, v) in b.edges() {
                g.insert_edge(u, v);
            }
        }
        for [u, v] in &self.cross_edges {
            g.insert_edge(*u, *v);
        }
        g
    }

    pub fn block_of(&self, v: Vertex) -> Option<&Block> {
        self.blocks.iter().find(|b| b.contains(v))
    }

    pub fn role(&self, v: Vertex) -> Option<VertexRole> {
        Some(match self.block_of(v)? {
            Block::K4 { .. } => VertexRole::InK4,
            Block::Chimney(c) if c.base.contains(&v) => VertexRole::Base,
            Block::Chimney(_) => VertexRole::Tip,
        })
    }

    pub fn cross_edge_set(&self) -> BTreeSet<Edge> {
        self.cross_edges.iter().map(|[u, v]| (*u, *v)).collect()
    }

    /// DOT rendering with cross edges dashed.
    pub fn to_dot(&self) -> String {
        to_dot(&self.reassemble(), &self.cross_edge_set())
    }
}

/// True iff `v` lies in a 4-clique of `g`.
fn in_k4(g: &Graph, v: Vertex) -> bool {
    triangles_at(g, v).iter().any(|t| {
        let [a, b, c] = t.vertices();
        g.common_neighbors(a, b)
            .into_iter()
            .any(|w| w != c && g.has_edge(w, c))
    })
}

/// True iff `v` lies in an induced chimney of `g`.
fn in_chimney(g: &Graph, v: Vertex) -> bool {
    let has_non_adjacent_pair = |tips: &[Vertex]| {
        tips.iter()
            .enumerate()
            .any(|(i, &s)| tips[i + 1..].iter().any(|&t| !g.has_edge(s, t)))
    };
    // v as a base vertex
    let as_base = g
        .neighbors(v)
        .any(|w| has_non_adjacent_pair(&g.common_neighbors(v, w)));
    // v as a tip over the opposite edge of one of its triangles
    let as_tip = || {
        triangles_at(g, v).iter().any(|t| {
            let [a, b] = others(t.vertices(), v);
            g.common_neighbors(a, b)
                .into_iter()
                .any(|s| s != v && !g.has_edge(s, v))
        })
    };
    as_base || as_tip()
}

fn others(tri: [Vertex; 3], v: Vertex) -> [Vertex; 2] {
    let mut rest = tri.into_iter().filter(|&x| x != v);
    [rest.next().unwrap(), rest.next().unwrap()]
}

/// Vertices lying in neither a K4 nor a chimney, ascending.
pub fn bad_vertices(g: &Graph) -> Vec<Vertex> {
    g.vertices()
        .filter(|&v| !in_k4(g, v) && !in_chimney(g, v))
        .collect()
}

/// Checks specialness, reporting the first failing vertex or a bowtie.
pub fn ensure_special(g: &Graph) -> Result<()> {
    ensure_bowtie_free(g)?;
    match bad_vertices(g).first() {
        Some(&vertex) => Err(Error::NotSpecial { vertex }),
        None => Ok(()),
    }
}

/// True iff `g` is bowtie-free and every vertex lies in a K4 or a chimney.
pub fn is_special(g: &Graph) -> bool {
    ensure_special(g).is_ok()
}

/// Edges of `g` lying in no triangle, sorted.
pub fn edges_in_no_triangle(g: &Graph) -> Vec<Edge> {
    g.edges()
        .filter(|&(u, v)| g.common_neighbors(u, v).is_empty())
        .collect()
}

/// Splits a special graph into K4 blocks, maximal chimneys and cross edges.
pub fn decompose(g: &Graph) -> Result<Decomposition> {
    ensure_special(g)?;
    let cross = edges_in_no_triangle(g);
    let mut core = g.clone();
    for &(u, v) in &cross {
        core.remove_edge(u, v);
    }

    let mut seen = BTreeSet::new();
    let mut blocks = Vec::new();
    for start in core.vertices() {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            for w in core.neighbors(comp[i]) {
                if seen.insert(w) {
                    comp.push(w);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        blocks.push(classify_component(&core, &comp)?);
    }

    Ok(Decomposition {
        blocks,
        cross_edges: cross.into_iter().map(|(u, v)| [u, v]).collect(),
    })
}

fn classify_component(core: &Graph, comp: &[Vertex]) -> Result<Block> {
    let set: BTreeSet<_> = comp.iter().copied().collect();
    let sub = core.induced(&set);
    if comp.len() == 4 && sub.edge_count() == 6 {
        return Ok(Block::K4 {
            vertices: [comp[0], comp[1], comp[2], comp[3]],
        });
    }
    // Otherwise a chimney: exactly one edge in two or more triangles.
    let bases: Vec<_> = sub
        .edges()
        .filter(|&(u, v)| sub.common_neighbors(u, v).len() >= 2)
        .collect();
    match bases.as_slice() {
        [(a, b)] => {
            let tips: Vec<_> = comp.iter().copied().filter(|v| v != a && v != b).collect();
            let shape_ok = sub.edge_count() == 1 + 2 * tips.len()
                && tips
                    .iter()
                    .all(|&t| sub.has_edge(*a, t) && sub.has_edge(*b, t));
            if shape_ok {
                return Ok(Block::Chimney(Chimney {
                    base: [*a, *b],
                    tips,
                }));
            }
            Err(Error::NotSpecial { vertex: comp[0] })
        }
        _ => Err(Error::NotSpecial { vertex: comp[0] }),
    }
}

/// Structural role of `v` in the decomposition of `g`.
pub fn classify_vertex(g: &Graph, v: Vertex) -> Result<VertexRole> {
    if !g.contains_vertex(v) {
        return Err(Error::UnknownVertex(v));
    }
    Ok(decompose(g)?
        .role(v)
        .expect("decomposition covers every vertex"))
}

/// Extends a bowtie-free graph to a special one containing it as an induced
/// subgraph.
///
/// Bad vertices are handled in ascending order: a vertex in no triangle gets
/// a fresh K4 attached at it; otherwise its lexicographically least triangle
/// is completed to a K4 with one fresh vertex. Fresh ids are allocated above
/// the current maximum, so the returned embedding is the identity.
pub fn specialize(g: &Graph) -> Result<(Graph, Embedding)> {
    ensure_bowtie_free(g)?;
    let mut h = g.clone();
    for v in bad_vertices(g) {
        if in_k4(&h, v) || in_chimney(&h, v) {
            continue;
        }
        match triangles_at(&h, v).first() {
            None => {
                let f = h.fresh_vertex();
                let q = [v, f, f + 1, f + 2];
                for i in 0..4 {
                    for j in i + 1..4 {
                        h.insert_edge(q[i], q[j]);
                    }
                }
            }
            Some(t) => {
                let u = h.fresh_vertex();
                for w in t.vertices() {
                    h.insert_edge(u, w);
                }
            }
        }
    }
    Ok((h, Embedding::identity(g.vertices())))
}

/// Per-edge triangle counts for the edges of `g`.
pub fn edge_triangle_counts(g: &Graph) -> BTreeMap<Edge, usize> {
    let mut counts: BTreeMap<Edge, usize> = g.edges().map(|e| (e, 0)).collect();
    for t in triangles_of(g) {
        for e in t.edges() {
            *counts.get_mut(&e).unwrap() += 1;
        }
    }
    counts
}
