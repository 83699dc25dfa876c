//! Finite simple undirected graphs over integer vertex ids.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex identifier.
pub type Vertex = u32;

/// An unordered vertex pair, stored with `0 < 1`.
pub type Edge = (Vertex, Vertex);

/// Normalise an unordered pair.
#[inline]
pub fn edge(u: Vertex, v: Vertex) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A finite simple undirected graph.
///
/// Graphs are values: constructions return new graphs rather than mutating
/// their inputs. Vertex ids are arbitrary and kept as given.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: BTreeMap<Vertex, BTreeSet<Vertex>>,
}

impl Graph {
    /// The graph with no vertices.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a graph, rejecting self-loops, duplicate edges and dangling endpoints.
    pub fn new(
        vertices: impl IntoIterator<Item = Vertex>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        let mut g = Graph::empty();
        for v in vertices {
            if g.adj.insert(v, BTreeSet::new()).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex {v}")));
            }
        }
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            if !g.adj.contains_key(&u) || !g.adj.contains_key(&v) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has an endpoint that is not a listed vertex"
                )));
            }
            if !g.adj.get_mut(&u).unwrap().insert(v) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
            g.adj.get_mut(&v).unwrap().insert(u);
        }
        Ok(g)
    }

    /// Builds a graph from an edge list; vertices are the edge endpoints.
    pub fn from_edges(edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut g = Graph::empty();
        for (u, v) in edges {
            g.insert_edge(u, v);
        }
        g
    }

    /// The complete graph on `0..n`.
    pub fn complete(n: u32) -> Self {
        let mut g = Graph::empty();
        for v in 0..n {
            g.insert_vertex(v);
        }
        for u in 0..n {
            for v in u + 1..n {
                g.insert_edge(u, v);
            }
        }
        g
    }

    /// A cycle on `0..n` (`n >= 3`).
    pub fn cycle(n: u32) -> Self {
        Graph::from_edges((0..n).map(|i| edge(i, (i + 1) % n)))
    }

    /// A chimney of the given height: base `0, 1`, tips `2..height + 2`.
    pub fn chimney(height: u32) -> Self {
        let mut g = Graph::from_edges([(0, 1)]);
        for t in 2..height + 2 {
            g.insert_edge(0, t);
            g.insert_edge(1, t);
        }
        g
    }

    /// Two triangles sharing one vertex: centre `0`, triangles `0 1 2` and `0 3 4`.
    pub fn bowtie() -> Self {
        Graph::from_edges([(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])
    }

    pub(crate) fn insert_vertex(&mut self, v: Vertex) {
        self.adj.entry(v).or_default();
    }

    pub(crate) fn insert_edge(&mut self, u: Vertex, v: Vertex) {
        debug_assert_ne!(u, v, "self-loop");
        self.adj.entry(u).or_default().insert(v);
        self.adj.entry(v).or_default().insert(u);
    }

    pub(crate) fn remove_edge(&mut self, u: Vertex, v: Vertex) {
        if let Some(n) = self.adj.get_mut(&u) {
            n.remove(&v);
        }
        if let Some(n) = self.adj.get_mut(&v) {
            n.remove(&u);
        }
    }

    /// Returns a copy with an extra edge. Both endpoints are added if missing.
    pub fn with_edge(&self, u: Vertex, v: Vertex) -> Self {
        let mut g = self.clone();
        g.insert_edge(u, v);
        g
    }

    /// Returns a copy without the given edge.
    pub fn without_edge(&self, u: Vertex, v: Vertex) -> Self {
        let mut g = self.clone();
        g.remove_edge(u, v);
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj.get(&u).is_some_and(|n| n.contains(&v))
    }

    /// Vertices in ascending order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, n)| n.range(u + 1..).map(move |&v| (u, v)))
    }

    /// Neighbours of `v` in ascending order (empty for unknown vertices).
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.get(&v).into_iter().flat_map(|n| n.iter().copied())
    }

    pub fn neighbor_set(&self, v: Vertex) -> Option<&BTreeSet<Vertex>> {
        self.adj.get(&v)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    /// Largest vertex id, if any.
    pub fn max_vertex(&self) -> Option<Vertex> {
        self.adj.keys().next_back().copied()
    }

    /// First id strictly above every existing vertex.
    pub fn fresh_vertex(&self) -> Vertex {
        self.max_vertex().map_or(0, |m| m + 1)
    }

    /// Common neighbours of `u` and `v`, ascending.
    pub fn common_neighbors(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        match (self.adj.get(&u), self.adj.get(&v)) {
            (Some(a), Some(b)) => a.intersection(b).copied().collect(),
            _ => Vec::new(),
        }
    }

    /// The subgraph induced on `keep`; unknown ids are ignored.
    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> Graph {
        let adj = self
            .adj
            .iter()
            .filter(|(v, _)| keep.contains(v))
            .map(|(&v, n)| (v, n.intersection(keep).copied().collect()))
            .collect();
        Graph { adj }
    }

    /// Renames vertices through `f`, which must be injective on the vertex set.
    pub fn relabel(&self, f: impl Fn(Vertex) -> Vertex) -> Graph {
        let adj: BTreeMap<_, _> = self
            .adj
            .iter()
            .map(|(&v, n)| (f(v), n.iter().map(|&w| f(w)).collect()))
            .collect();
        debug_assert_eq!(adj.len(), self.adj.len(), "relabelling is not injective");
        Graph { adj }
    }

    /// Renames vertices to `0..n` preserving order. Returns the graph and the renaming.
    pub fn compacted(&self) -> (Graph, Embedding) {
        let map: BTreeMap<Vertex, Vertex> = self.vertices().zip(0..).collect();
        (self.relabel(|v| map[&v]), Embedding(map))
    }

    /// Canonical compact JSON text.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialisation is infallible")
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        serde_json::from_str(text).map_err(|e| Error::InvalidGraph(e.to_string()))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.vertices().collect::<Vec<_>>())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphRepr {
    vertices: Vec<Vertex>,
    edges: Vec<[Vertex; 2]>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr {
            vertices: self.vertices().collect(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(d)?;
        if let Some([u, v]) = repr.edges.iter().find(|[u, v]| u >= v) {
            return Err(serde::de::Error::custom(format!(
                "edge [{u}, {v}] must satisfy u < v"
            )));
        }
        Graph::new(repr.vertices, repr.edges.into_iter().map(|[u, v]| (u, v)))
            .map_err(serde::de::Error::custom)
    }
}

/// Three vertices inducing a triangle, sorted ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triangle(pub [Vertex; 3]);

impl Triangle {
    pub fn new(a: Vertex, b: Vertex, c: Vertex) -> Self {
        let mut t = [a, b, c];
        t.sort_unstable();
        Triangle(t)
    }

    pub fn vertices(&self) -> [Vertex; 3] {
        self.0
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    pub fn edges(&self) -> [Edge; 3] {
        let [a, b, c] = self.0;
        [(a, b), (a, c), (b, c)]
    }

    /// Number of vertices shared with `other`.
    pub fn overlap(&self, other: &Triangle) -> usize {
        self.0.iter().filter(|v| other.contains(**v)).count()
    }
}

/// All triangles of `g`, in lexicographic order.
pub fn triangles_of(g: &Graph) -> Vec<Triangle> {
    let mut out = Vec::new();
    for (u, v) in g.edges() {
        for w in g.neighbor_set(v).unwrap().range(v + 1..) {
            if g.has_edge(u, *w) {
                out.push(Triangle([u, v, *w]));
            }
        }
    }
    out
}

/// Triangles of `g` containing `v`, in lexicographic order.
pub fn triangles_at(g: &Graph, v: Vertex) -> Vec<Triangle> {
    let Some(n) = g.neighbor_set(v) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for &a in n {
        for &b in n.range(a + 1..) {
            if g.has_edge(a, b) {
                out.push(Triangle::new(v, a, b));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Number of triangles through each vertex.
pub fn triangle_counts(g: &Graph) -> BTreeMap<Vertex, usize> {
    let mut counts: BTreeMap<Vertex, usize> = g.vertices().map(|v| (v, 0)).collect();
    for t in triangles_of(g) {
        for v in t.0 {
            *counts.get_mut(&v).unwrap() += 1;
        }
    }
    counts
}

/// A bowtie found in a graph: triangles `centre a b` and `centre u v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BowtieWitness {
    pub centre: Vertex,
    pub left: [Vertex; 2],
    pub right: [Vertex; 2],
}

impl BowtieWitness {
    /// `[centre, a, b, u, v]`.
    pub fn vertices(&self) -> [Vertex; 5] {
        [
            self.centre,
            self.left[0],
            self.left[1],
            self.right[0],
            self.right[1],
        ]
    }
}

/// The first pair of triangles (lexicographically) meeting in exactly one vertex.
pub fn find_bowtie(g: &Graph) -> Option<BowtieWitness> {
    let tris = triangles_of(g);
    for (i, s) in tris.iter().enumerate() {
        for t in &tris[i + 1..] {
            if s.overlap(t) == 1 {
                let centre = *s.0.iter().find(|v| t.contains(**v)).unwrap();
                let other = |tri: &Triangle| {
                    let mut rest = tri.0.iter().copied().filter(|&v| v != centre);
                    [rest.next().unwrap(), rest.next().unwrap()]
                };
                return Some(BowtieWitness {
                    centre,
                    left: other(s),
                    right: other(t),
                });
            }
        }
    }
    None
}

/// True iff two triangles of `g` share exactly one vertex.
pub fn contains_bowtie(g: &Graph) -> bool {
    find_bowtie(g).is_some()
}

/// Fails with [`Error::ContainsBowtie`] when `g` has a bowtie.
pub fn ensure_bowtie_free(g: &Graph) -> Result<()> {
    match find_bowtie(g) {
        Some(w) => Err(Error::ContainsBowtie {
            witness: w.vertices(),
        }),
        None => Ok(()),
    }
}

/// An injective vertex map from a source graph into a target graph.
///
/// Whether the map is an induced embedding depends on the graphs involved;
/// see [`Embedding::is_induced`].
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Embedding(pub BTreeMap<Vertex, Vertex>);

impl Embedding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identity(vertices: impl IntoIterator<Item = Vertex>) -> Self {
        Embedding(vertices.into_iter().map(|v| (v, v)).collect())
    }

    pub fn get(&self, v: Vertex) -> Option<Vertex> {
        self.0.get(&v).copied()
    }

    /// Image of `v`; panics when `v` is outside the domain.
    pub fn apply(&self, v: Vertex) -> Vertex {
        self.0[&v]
    }

    pub fn insert(&mut self, from: Vertex, to: Vertex) {
        self.0.insert(from, to);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.0.iter().map(|(&a, &b)| (a, b))
    }

    pub fn domain(&self) -> BTreeSet<Vertex> {
        self.0.keys().copied().collect()
    }

    pub fn image(&self) -> BTreeSet<Vertex> {
        self.0.values().copied().collect()
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.0.len()
    }

    /// Inverse map; `None` when not injective.
    pub fn inverse(&self) -> Option<Embedding> {
        let inv: BTreeMap<_, _> = self.iter().map(|(a, b)| (b, a)).collect();
        (inv.len() == self.len()).then_some(Embedding(inv))
    }

    /// `other ∘ self`, defined where both maps are.
    pub fn then(&self, other: &Embedding) -> Embedding {
        Embedding(
            self.iter()
                .filter_map(|(a, b)| other.get(b).map(|c| (a, c)))
                .collect(),
        )
    }

    /// True iff the map is an injective, edge- and non-edge-preserving map
    /// from `source` into `target`, defined on all of `source`.
    pub fn is_induced(&self, source: &Graph, target: &Graph) -> bool {
        self.len() == source.vertex_count()
            && source
                .vertices()
                .all(|v| self.get(v).is_some_and(|w| target.contains_vertex(w)))
            && self.is_partial_isomorphism(source, target)
    }

    /// True iff the map is injective and preserves edges and non-edges on its domain.
    pub fn is_partial_isomorphism(&self, source: &Graph, target: &Graph) -> bool {
        if !self.is_injective() {
            return false;
        }
        let pairs: Vec<_> = self.iter().collect();
        pairs.iter().enumerate().all(|(i, &(a, fa))| {
            source.contains_vertex(a)
                && target.contains_vertex(fa)
                && pairs[i + 1..]
                    .iter()
                    .all(|&(b, fb)| source.has_edge(a, b) == target.has_edge(fa, fb))
        })
    }
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

impl FromIterator<(Vertex, Vertex)> for Embedding {
    fn from_iter<I: IntoIterator<Item = (Vertex, Vertex)>>(iter: I) -> Self {
        Embedding(iter.into_iter().collect())
    }
}

/// Parses a JSON object of `"id": id` pairs.
pub fn embedding_from_json(text: &str) -> Result<Embedding> {
    serde_json::from_str(text).map_err(|e| Error::InvalidMap(e.to_string()))
}
