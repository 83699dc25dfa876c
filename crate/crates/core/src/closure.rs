//! Special edges and the algebraic closure operator inside a special graph.
//!
//! An edge is special when it lies in at least two triangles. The closure of
//! a vertex set `A` is `A` together with both endpoints of every special edge
//! that lies in a triangle meeting `A`. It is evaluated inside the given
//! finite special graph; embedding that graph into a larger special graph can
//! only raise chimney heights, which leaves base edges, tip triangles and K4
//! blocks (and hence the closure) unchanged.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{triangles_at, Edge, Graph, Triangle, Vertex};
use crate::structure::{edge_triangle_counts, ensure_special};

/// Edges of a special graph that lie in two or more triangles, sorted.
pub fn special_edges(g: &Graph) -> Result<Vec<Edge>> {
    ensure_special(g)?;
    Ok(special_edges_unchecked(g))
}

fn special_edges_unchecked(g: &Graph) -> Vec<Edge> {
    edge_triangle_counts(g)
        .into_iter()
        .filter(|&(_, c)| c >= 2)
        .map(|(e, _)| e)
        .collect()
}

/// Why a vertex belongs to a closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Provenance {
    /// The vertex was in the input set.
    Input,
    /// Endpoint of `special_edge`, which lies in `triangle` through input vertex `seed`.
    SpecialEdge {
        seed: Vertex,
        triangle: [Vertex; 3],
        special_edge: [Vertex; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureResult {
    pub input: Vec<Vertex>,
    pub closure: Vec<Vertex>,
    /// First rule that added each closure vertex.
    pub provenance: BTreeMap<Vertex, Provenance>,
}

impl ClosureResult {
    pub fn closure_set(&self) -> BTreeSet<Vertex> {
        self.closure.iter().copied().collect()
    }
}

/// Algebraic closure of `a` in the special graph `g`.
pub fn acl(g: &Graph, a: &BTreeSet<Vertex>) -> Result<ClosureResult> {
    ensure_special(g)?;
    if let Some(&v) = a.iter().find(|v| !g.contains_vertex(**v)) {
        return Err(Error::UnknownVertex(v));
    }
    let special: BTreeSet<Edge> = special_edges_unchecked(g).into_iter().collect();
    let mut provenance: BTreeMap<Vertex, Provenance> =
        a.iter().map(|&v| (v, Provenance::Input)).collect();
    for &seed in a {
        let tris: Vec<Triangle> = triangles_at(g, seed);
        for t in tris {
            for e in t.edges() {
                if !special.contains(&e) {
                    continue;
                }
                for v in [e.0, e.1] {
                    provenance.entry(v).or_insert(Provenance::SpecialEdge {
                        seed,
                        triangle: t.vertices(),
                        special_edge: [e.0, e.1],
                    });
                }
            }
        }
    }
    Ok(ClosureResult {
        input: a.iter().copied().collect(),
        closure: provenance.keys().copied().collect(),
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge;

    fn set(vs: &[Vertex]) -> BTreeSet<Vertex> {
        vs.iter().copied().collect()
    }

    fn two_k4s_with_bridge() -> Graph {
        let mut g = Graph::complete(4);
        for u in 4..8 {
            for v in u + 1..8 {
                g.insert_edge(u, v);
            }
        }
        g.with_edge(3, 4)
    }

    #[test]
    fn special_edge_examples() {
        assert_eq!(special_edges(&Graph::chimney(2)).unwrap(), vec![(0, 1)]);
        assert_eq!(special_edges(&Graph::complete(4)).unwrap().len(), 6);
        let two = special_edges(&two_k4s_with_bridge()).unwrap();
        assert_eq!(two.len(), 12);
        assert!(!two.contains(&edge(3, 4)));
        assert!(matches!(
            special_edges(&Graph::complete(3)),
            Err(Error::NotSpecial { .. })
        ));
    }

    #[test]
    fn singleton_closures() {
        let k4 = Graph::complete(4);
        assert_eq!(acl(&k4, &set(&[2])).unwrap().closure, vec![0, 1, 2, 3]);
        let c = Graph::chimney(3);
        assert_eq!(acl(&c, &set(&[3])).unwrap().closure, vec![0, 1, 3]);
        assert_eq!(acl(&c, &set(&[1])).unwrap().closure, vec![0, 1]);
        assert!(acl(&c, &set(&[])).unwrap().closure.is_empty());
    }

    #[test]
    fn provenance_records_rule() {
        let r = acl(&Graph::chimney(2), &set(&[2])).unwrap();
        assert_eq!(r.provenance[&2], Provenance::Input);
        assert_eq!(
            r.provenance[&0],
            Provenance::SpecialEdge {
                seed: 2,
                triangle: [0, 1, 2],
                special_edge: [0, 1]
            }
        );
    }

    #[test]
    fn closure_errors() {
        assert_eq!(
            acl(&Graph::complete(4), &set(&[9])),
            Err(Error::UnknownVertex(9))
        );
        assert!(acl(&Graph::complete(3), &set(&[0])).is_err());
    }
}
