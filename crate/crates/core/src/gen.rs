//! Seeded random generators for special graphs, special extensions and
//! partial automorphisms. Used by the property and acceptance tests.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::eppa::PartialAutomorphism;
use crate::graph::{Embedding, Graph, Vertex};
use crate::search::for_each_embedding;
use crate::structure::{decompose, Block};

/// Adds a K4 or a chimney (height 2..=max_height) on fresh ids.
fn add_block<R: Rng>(rng: &mut R, g: &mut Graph, room: u32) -> Vec<Vertex> {
    let start = g.fresh_vertex();
    let max_height = room.saturating_sub(2).clamp(2, 4);
    let piece = if rng.gen_bool(0.4) {
        Graph::complete(4)
    } else {
        Graph::chimney(rng.gen_range(2..=max_height))
    };
    for v in piece.vertices() {
        g.insert_vertex(v + start);
    }
    for (u, v) in piece.edges() {
        g.insert_edge(u + start, v + start);
    }
    piece.vertices().map(|v| v + start).collect()
}

/// Adds, with probability `density` each, cross edges touching `fresh` that
/// close no triangle.
fn add_cross_edges<R: Rng>(rng: &mut R, g: &mut Graph, fresh: &BTreeSet<Vertex>, density: f64) {
    let mut candidates: Vec<(Vertex, Vertex)> = g
        .vertices()
        .flat_map(|u| g.vertices().filter(move |&v| u < v).map(move |v| (u, v)))
        .filter(|&(u, v)| (fresh.contains(&u) || fresh.contains(&v)) && !g.has_edge(u, v))
        .collect();
    candidates.shuffle(rng);
    for (u, v) in candidates {
        if rng.gen_bool(density) && g.common_neighbors(u, v).is_empty() {
            g.insert_edge(u, v);
        }
    }
}

/// A random special graph with `4..=max_vertices` vertices on ids `0..`.
pub fn random_special<R: Rng>(rng: &mut R, max_vertices: u32) -> Graph {
    random_special_extension(rng, &Graph::empty(), max_vertices.max(4))
}

/// A random special graph containing `base` (special) as an induced subgraph
/// on the same ids, with at most `max_vertices` vertices. New vertices are
/// extra tips on chimneys of `base`, new blocks, and cross edges with at
/// least one new endpoint.
pub fn random_special_extension<R: Rng>(rng: &mut R, base: &Graph, max_vertices: u32) -> Graph {
    let mut g = base.clone();
    let mut fresh = BTreeSet::new();
    let bases: Vec<[Vertex; 2]> = decompose(base)
        .map(|d| {
            d.blocks
                .into_iter()
                .filter_map(|b| match b {
                    Block::Chimney(c) => Some(c.base),
                    Block::K4 { .. } => None,
                })
                .collect()
        })
        .unwrap_or_default();
    let floor = if base.is_empty() {
        4
    } else {
        base.vertex_count() as u32
    };
    let target = rng.gen_range(floor..=max_vertices.max(floor));
    loop {
        let room = target.saturating_sub(g.vertex_count() as u32);
        if room == 0 || (g.vertex_count() >= 4 && rng.gen_bool(0.15)) {
            break;
        }
        if !bases.is_empty() && (room < 4 || rng.gen_bool(0.3)) {
            let [a, b] = *bases.choose(rng).unwrap();
            let t = g.fresh_vertex();
            g.insert_edge(a, t);
            g.insert_edge(b, t);
            fresh.insert(t);
        } else if room >= 4 {
            fresh.extend(add_block(rng, &mut g, room));
        } else {
            break;
        }
    }
    let density = rng.gen_range(0.05..0.4);
    add_cross_edges(rng, &mut g, &fresh, density);
    g
}

/// Renames the vertices of `g` to a random injective set of ids below
/// `4 * |V| + 8`. Returns the renamed graph and the renaming.
pub fn shuffle_ids<R: Rng>(rng: &mut R, g: &Graph) -> (Graph, Embedding) {
    let pool = 4 * g.vertex_count() as Vertex + 8;
    let mut ids: Vec<Vertex> = (0..pool).collect();
    ids.shuffle(rng);
    let map: Embedding = g.vertices().zip(ids).collect();
    (g.relabel(|v| map.apply(v)), map)
}

/// A random special induced subgraph of the special graph `g`, chosen block
/// by block: whole K4s, and chimney bases with at least two of their tips.
pub fn random_special_subset<R: Rng>(rng: &mut R, g: &Graph) -> BTreeSet<Vertex> {
    let Ok(d) = decompose(g) else {
        return BTreeSet::new();
    };
    let mut out = BTreeSet::new();
    for block in &d.blocks {
        if !rng.gen_bool(0.5) {
            continue;
        }
        match block {
            Block::K4 { vertices } => out.extend(vertices),
            Block::Chimney(c) => {
                let mut tips = c.tips.clone();
                tips.shuffle(rng);
                let keep = rng.gen_range(2..=tips.len());
                out.extend(c.base);
                out.extend(&tips[..keep]);
            }
        }
    }
    out
}

/// A random partial automorphism of the special graph `g` whose domain and
/// range are special: a random special subset mapped by one of (up to
/// `limit`) induced embeddings of it back into `g`.
pub fn random_partial_automorphism<R: Rng>(
    rng: &mut R,
    g: &Graph,
    limit: usize,
) -> PartialAutomorphism {
    let mut domain = BTreeSet::new();
    for _ in 0..8 {
        domain = random_special_subset(rng, g);
        if !domain.is_empty() {
            break;
        }
    }
    let sub = g.induced(&domain);
    let mut options = Vec::new();
    for_each_embedding(&sub, g, None, |e| {
        options.push(e.clone());
        if options.len() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    let map = options
        .choose(rng)
        .cloned()
        .unwrap_or_else(|| Embedding::identity(domain.iter().copied()));
    PartialAutomorphism::new(g.clone(), map).expect("induced embedding is a partial automorphism")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::is_special;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_graphs_are_special() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = random_special(&mut rng, 8);
            assert!(is_special(&a));
            assert!(a.vertex_count() <= 8 && a.vertex_count() >= 4);
            let b = random_special_extension(&mut rng, &a, 12);
            assert!(is_special(&b), "{b:?}");
            assert_eq!(b.induced(&a.vertices().collect()), a);
        }
    }

    #[test]
    fn partial_maps_have_special_ends() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let g = random_special(&mut rng, 12);
            let p = random_partial_automorphism(&mut rng, &g, 200);
            assert!(is_special(&p.domain_graph()));
            assert!(is_special(&p.range_graph()));
        }
    }
}
