//! Constructive combinatorics of bowtie-free graphs.
//!
//! A *bowtie* is a pair of triangles sharing exactly one vertex. This crate
//! recognises and decomposes special bowtie-free graphs, extends arbitrary
//! bowtie-free graphs to special ones, forms free amalgams, computes the
//! algebraic closure operator, extends partial automorphisms through the
//! necklace construction, builds finite approximants of the universal
//! bowtie-free graph, and generates and checks the witness showing that graph
//! is not finitely homogenisable.

pub mod amalgam;
pub mod closure;
pub mod dot;
pub mod enumerate;
pub mod eppa;
mod error;
pub mod gen;
pub mod graph;
pub mod search;
pub mod structure;
mod union_find;
pub mod universal;

pub use amalgam::{check_special_amalgam, disjoint_union, free_amalgam, AmalgamCheck, AmalgamSpec};
pub use closure::{acl, special_edges, ClosureResult};
pub use enumerate::enumerate_special;
pub use eppa::{
    amalgamate_1systems, close_system, cycle_profile, necklace, necklace_order, CycleProfile,
    NecklaceResult, OneSystem, PartialAutomorphism,
};
pub use error::{Error, Result};
pub use graph::{contains_bowtie, triangles_of, Embedding, Graph, Triangle, Vertex};
pub use search::{are_isomorphic, find_embeddings};
pub use structure::{
    classify_vertex, decompose, is_special, specialize, Block, Chimney, Decomposition, VertexRole,
};
pub use universal::{
    build_approximant, check_extension_property, homogenisability_witness, verify_witness,
    Approximant, Witness, WitnessConfig,
};
