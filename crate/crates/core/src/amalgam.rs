//! Free amalgamation and disjoint union.
//!
//! The free amalgam of `left` and `right` over `base` glues the two copies of
//! `base` together and adds no edges between the remaining parts. The result
//! keeps the vertex ids of `left`; vertices of `right` outside the image of
//! `base` receive fresh ids above the maximum of `left`, in ascending order of
//! their `right` ids.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{find_bowtie, triangles_of, Embedding, Graph, Vertex};
use crate::structure::{bad_vertices, is_special};

/// A span `left ← base → right` of induced embeddings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmalgamSpec {
    pub base: Graph,
    pub left: Graph,
    pub right: Graph,
    pub embed_left: Embedding,
    pub embed_right: Embedding,
}

impl AmalgamSpec {
    /// Validates that both maps are induced embeddings of `base`.
    pub fn new(
        base: Graph,
        left: Graph,
        right: Graph,
        embed_left: Embedding,
        embed_right: Embedding,
    ) -> Result<Self> {
        if !embed_left.is_induced(&base, &left) {
            return Err(Error::InvalidMap(
                "left map is not an induced embedding of the base".into(),
            ));
        }
        if !embed_right.is_induced(&base, &right) {
            return Err(Error::InvalidMap(
                "right map is not an induced embedding of the base".into(),
            ));
        }
        Ok(AmalgamSpec {
            base,
            left,
            right,
            embed_left,
            embed_right,
        })
    }

    /// The span with `left` and `right` exchanged.
    pub fn swapped(&self) -> AmalgamSpec {
        AmalgamSpec {
            base: self.base.clone(),
            left: self.right.clone(),
            right: self.left.clone(),
            embed_left: self.embed_right.clone(),
            embed_right: self.embed_left.clone(),
        }
    }
}

/// The amalgam together with the inclusions of both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Amalgam {
    pub graph: Graph,
    pub left: Embedding,
    pub right: Embedding,
}

/// Free amalgam of `spec.left` and `spec.right` over `spec.base`.
///
/// No specialness checks are made, so amalgams outside the special class
/// (which may contain bowties) are produced as-is.
pub fn free_amalgam(spec: &AmalgamSpec) -> Amalgam {
    let mut graph = spec.left.clone();
    let from_base = spec
        .embed_right
        .inverse()
        .expect("embedding is injective")
        .then(&spec.embed_left);
    let mut right = from_base;
    let mut next = graph.fresh_vertex();
    for v in spec.right.vertices() {
        if right.get(v).is_none() {
            right.insert(v, next);
            graph.insert_vertex(next);
            next += 1;
        }
    }
    for (u, v) in spec.right.edges() {
        graph.insert_edge(right.apply(u), right.apply(v));
    }
    Amalgam {
        graph,
        left: Embedding::identity(spec.left.vertices()),
        right,
    }
}

/// Disjoint union; `h` is shifted above the largest id of `g`.
pub fn disjoint_union(g: &Graph, h: &Graph) -> Amalgam {
    free_amalgam(&AmalgamSpec {
        base: Graph::empty(),
        left: g.clone(),
        right: h.clone(),
        embed_left: Embedding::new(),
        embed_right: Embedding::new(),
    })
}

/// A condition that failed during amalgam verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub violation: ViolationKind,
    pub witness: Vec<Vertex>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// One of base, left or right is not special; witness is the offending vertex of that input.
    InputsNotSpecial,
    /// The amalgam contains a bowtie; witness is `[centre, a, b, u, v]`.
    OutputContainsBowtie,
    /// Some vertex of the amalgam lies in no K4 or chimney.
    OutputNotSpecial,
    /// A triangle of the amalgam lies in neither side.
    TriangleNotLocal,
}

/// Outcome of [`check_special_amalgam`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AmalgamCheck {
    Verified(Amalgam),
    Rejected {
        amalgam: Amalgam,
        violations: Vec<Violation>,
    },
}

impl AmalgamCheck {
    pub fn is_verified(&self) -> bool {
        matches!(self, AmalgamCheck::Verified(_))
    }

    pub fn amalgam(&self) -> &Amalgam {
        match self {
            AmalgamCheck::Verified(a) | AmalgamCheck::Rejected { amalgam: a, .. } => a,
        }
    }

    pub fn violations(&self) -> &[Violation] {
        match self {
            AmalgamCheck::Verified(_) => &[],
            AmalgamCheck::Rejected { violations, .. } => violations,
        }
    }
}

/// Forms the free amalgam and checks it against the special class.
///
/// Verification succeeds only when all three inputs are special and the
/// amalgam is bowtie-free, special, and has every triangle inside the image
/// of one side. Otherwise every failed condition is reported with a witness.
pub fn check_special_amalgam(spec: &AmalgamSpec) -> AmalgamCheck {
    let amalgam = free_amalgam(spec);
    let mut violations = Vec::new();

    if let Some(w) = find_bowtie(&amalgam.graph) {
        violations.push(Violation {
            violation: ViolationKind::OutputContainsBowtie,
            witness: w.vertices().to_vec(),
        });
    }
    for g in [&spec.base, &spec.left, &spec.right] {
        if !is_special(g) {
            let witness = match find_bowtie(g) {
                Some(w) => w.vertices().to_vec(),
                None => bad_vertices(g).into_iter().take(1).collect(),
            };
            violations.push(Violation {
                violation: ViolationKind::InputsNotSpecial,
                witness,
            });
            break;
        }
    }
    if let Some(&v) = bad_vertices(&amalgam.graph).first() {
        violations.push(Violation {
            violation: ViolationKind::OutputNotSpecial,
            witness: vec![v],
        });
    }
    let (left_img, right_img) = (amalgam.left.image(), amalgam.right.image());
    for t in triangles_of(&amalgam.graph) {
        let inside = |img: &BTreeSet<Vertex>| t.vertices().iter().all(|v| img.contains(v));
        if !inside(&left_img) && !inside(&right_img) {
            violations.push(Violation {
                violation: ViolationKind::TriangleNotLocal,
                witness: t.vertices().to_vec(),
            });
            break;
        }
    }

    if violations.is_empty() {
        AmalgamCheck::Verified(amalgam)
    } else {
        AmalgamCheck::Rejected {
            amalgam,
            violations,
        }
    }
}
