//! Partial automorphisms of special graphs and their extension to total
//! automorphisms of larger special graphs.
//!
//! The necklace construction strings together `n + 1` copies ("beads") of the
//! host, gluing the range of the partial map in each bead to its domain in
//! the next; shifting one bead along is then a partial automorphism
//! extending the original map. A second copy of the string is then glued end
//! to end with the first, which closes the shift up into a total automorphism.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::amalgam::{free_amalgam, AmalgamSpec};
use crate::closure::acl;
use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Embedding, Graph, Vertex};
use crate::search::for_each_embedding;
use crate::structure::{
    decompose, edge_triangle_counts, ensure_special, is_special, Block, Decomposition,
};
use crate::union_find::UnionFind;

/// An isomorphism between two induced subgraphs of a host graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialAutomorphism {
    #[serde(rename = "graph")]
    host: Graph,
    map: Embedding,
}

impl PartialAutomorphism {
    pub fn new(host: Graph, map: Embedding) -> Result<Self> {
        if let Some((a, b)) = map
            .iter()
            .find(|&(a, b)| !host.contains_vertex(a) || !host.contains_vertex(b))
        {
            let v = if host.contains_vertex(a) { b } else { a };
            return Err(Error::UnknownVertex(v));
        }
        if !map.is_partial_isomorphism(&host, &host) {
            return Err(Error::InvalidMap(
                "map is not an isomorphism between induced subgraphs".into(),
            ));
        }
        Ok(PartialAutomorphism { host, map })
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn map(&self) -> &Embedding {
        &self.map
    }

    pub fn domain(&self) -> BTreeSet<Vertex> {
        self.map.domain()
    }

    pub fn range(&self) -> BTreeSet<Vertex> {
        self.map.image()
    }

    pub fn domain_graph(&self) -> Graph {
        self.host.induced(&self.domain())
    }

    pub fn range_graph(&self) -> Graph {
        self.host.induced(&self.range())
    }

    /// True iff the map is defined on every vertex of the host.
    pub fn is_total(&self) -> bool {
        self.map.len() == self.host.vertex_count()
    }
}

/// Orbit structure of a partial automorphism.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleProfile {
    /// Orbits that return to their start, each listed from its least vertex.
    pub complete_cycles: Vec<Vec<Vertex>>,
    /// Maximal orbits `a, p(a), p²(a), …` from a vertex outside the range to one outside the domain.
    pub partial_chains: Vec<Vec<Vertex>>,
}

impl CycleProfile {
    pub fn cycle_vertices(&self) -> BTreeSet<Vertex> {
        self.complete_cycles.iter().flatten().copied().collect()
    }
}

pub fn cycle_profile(p: &PartialAutomorphism) -> CycleProfile {
    profile_of_map(&p.map)
}

fn profile_of_map(map: &Embedding) -> CycleProfile {
    let range = map.image();
    let mut seen = BTreeSet::new();
    let mut profile = CycleProfile::default();
    for start in map.domain() {
        if range.contains(&start) {
            continue;
        }
        let mut chain = vec![start];
        let mut cur = start;
        while let Some(next) = map.get(cur) {
            chain.push(next);
            cur = next;
        }
        seen.extend(chain.iter().copied());
        profile.partial_chains.push(chain);
    }
    for start in map.domain() {
        if seen.contains(&start) {
            continue;
        }
        let mut cycle = vec![start];
        let mut cur = map.apply(start);
        while cur != start {
            cycle.push(cur);
            cur = map.apply(cur);
        }
        seen.extend(cycle.iter().copied());
        profile.complete_cycles.push(cycle);
    }
    profile
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Least `n >= 1` divisible by every complete-cycle length and larger than
/// every partial-chain length (counted in vertices).
pub fn necklace_order(profile: &CycleProfile) -> usize {
    let lcm = profile
        .complete_cycles
        .iter()
        .map(Vec::len)
        .fold(1, |acc, len| acc / gcd(acc, len) * len);
    let longest = profile
        .partial_chains
        .iter()
        .map(Vec::len)
        .max()
        .unwrap_or(0);
    lcm * (longest / lcm + 1)
}

/// A special graph `extended` containing the host, with a total automorphism
/// extending the partial map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NecklaceResult {
    #[serde(rename = "graph")]
    pub extended: Graph,
    pub automorphism: Embedding,
    pub inclusion: Embedding,
    #[serde(rename = "n")]
    pub order_n: usize,
}

fn claim(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InternalClaimViolated(what()))
    }
}

/// Item index for `(half, bead, vertex position)`; ordered lexicographically.
#[derive(Clone, Copy)]
struct Beads {
    n: usize,
    m: usize,
}

impl Beads {
    fn item(&self, half: usize, bead: usize, pos: usize) -> usize {
        (half * (self.n + 1) + bead) * self.m + pos
    }

    fn items(&self) -> usize {
        2 * (self.n + 1) * self.m
    }
}

/// Extends `p` to an automorphism of a special supergraph of its host.
///
/// The host, domain and range must all be special (see [`close_system`]).
/// The construction checks its own intermediate claims and reports
/// [`Error::InternalClaimViolated`] if any fails.
pub fn necklace(p: &PartialAutomorphism) -> Result<NecklaceResult> {
    let g = &p.host;
    ensure_special(g).map_err(|e| Error::PreconditionFailed(format!("host: {e}")))?;
    ensure_special(&p.domain_graph())
        .map_err(|e| Error::PreconditionFailed(format!("domain: {e}")))?;
    ensure_special(&p.range_graph())
        .map_err(|e| Error::PreconditionFailed(format!("range: {e}")))?;

    let profile = cycle_profile(p);
    let identity = Embedding::identity(g.vertices());
    if p.map.iter().all(|(u, v)| u == v) {
        return Ok(NecklaceResult {
            extended: g.clone(),
            automorphism: identity.clone(),
            inclusion: identity,
            order_n: 1,
        });
    }
    if p.is_total() {
        return Ok(NecklaceResult {
            extended: g.clone(),
            automorphism: p.map.clone(),
            inclusion: identity,
            order_n: necklace_order(&profile),
        });
    }

    let n = necklace_order(&profile);
    let verts: Vec<Vertex> = g.vertices().collect();
    let pos: BTreeMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let beads = Beads { n, m: verts.len() };

    // One half: bead i's copy of p(u) is bead i+1's copy of u.
    let mut half_uf = UnionFind::new(beads.items());
    for half in 0..2 {
        for bead in 0..n {
            for (u, pu) in p.map.iter() {
                half_uf.union(
                    beads.item(half, bead, pos[&pu]),
                    beads.item(half, bead + 1, pos[&u]),
                );
            }
        }
    }

    // Each bead is glued injectively.
    for bead in 0..=n {
        let roots: BTreeSet<_> = (0..beads.m)
            .map(|i| half_uf.find(beads.item(0, bead, i)))
            .collect();
        claim(roots.len() == beads.m, || {
            format!("bead {bead} collapsed under gluing")
        })?;
    }

    // The end beads meet exactly in the complete cycles,
    // and the n-fold shift fixes that overlap.
    let cycle_points = profile.cycle_vertices();
    let bead_roots = |uf: &mut UnionFind, bead: usize| -> BTreeMap<usize, usize> {
        (0..beads.m)
            .map(|i| (uf.find(beads.item(0, bead, i)), i))
            .collect()
    };
    let first = bead_roots(&mut half_uf, 0);
    let second = bead_roots(&mut half_uf, 1);
    let last = bead_roots(&mut half_uf, n);
    let overlap: BTreeSet<Vertex> = first
        .iter()
        .filter(|(r, _)| last.contains_key(r))
        .map(|(_, &i)| verts[i])
        .collect();
    claim(overlap == cycle_points, || {
        format!("first and last beads meet in {overlap:?}, complete cycles are {cycle_points:?}")
    })?;
    let overlap_second: BTreeSet<usize> = second
        .keys()
        .filter(|r| last.contains_key(r))
        .copied()
        .collect();
    let overlap_first: BTreeSet<usize> = first
        .keys()
        .filter(|r| last.contains_key(r))
        .copied()
        .collect();
    claim(overlap_first == overlap_second, || {
        "beads 0 and 1 meet bead n in different sets".into()
    })?;
    for (&r, &i) in &first {
        if let Some(&j) = last.get(&r) {
            claim(i == j, || {
                format!("shift^{n} moves overlap vertex {}", verts[i])
            })?;
        }
    }

    let half_graph = quotient(g, &verts, &beads, &mut half_uf, 0);
    let ends: BTreeSet<usize> = first.keys().chain(last.keys()).copied().collect();
    let ends_graph = half_graph.induced(&ends.iter().map(|&r| r as Vertex).collect());
    claim(is_special(&ends_graph), || {
        "induced subgraph on the end beads is not special".into()
    })?;

    // Close the necklace: bead 0 of one half is bead n of the other.
    let mut uf = half_uf.clone();
    for i in 0..beads.m {
        uf.union(beads.item(0, 0, i), beads.item(1, n, i));
        uf.union(beads.item(0, n, i), beads.item(1, 0, i));
    }
    let half_classes = |uf: &mut UnionFind, half: usize| -> BTreeSet<usize> {
        (0..=n)
            .flat_map(|b| (0..beads.m).map(move |i| beads.item(half, b, i)))
            .map(|x| uf.find(x))
            .collect()
    };
    let before = half_classes(&mut half_uf, 0).len();
    for half in 0..2 {
        let after = half_classes(&mut uf, half).len();
        claim(after == before, || {
            format!("closing the necklace merged vertices of half {half}")
        })?;
    }
    let shared = half_classes(&mut uf, 0)
        .intersection(&half_classes(&mut uf, 1))
        .count();
    claim(shared == ends.len(), || {
        format!(
            "halves share {shared} vertices, end beads have {}",
            ends.len()
        )
    })?;

    // Name classes: the first bead of the first half keeps the host ids.
    let mut roots: BTreeSet<usize> = BTreeSet::new();
    for x in 0..beads.items() {
        roots.insert(uf.find(x));
    }
    let mut name: BTreeMap<usize, Vertex> = BTreeMap::new();
    for (i, &v) in verts.iter().enumerate() {
        name.insert(uf.find(beads.item(0, 0, i)), v);
    }
    let mut next = g.fresh_vertex();
    for r in roots {
        name.entry(r).or_insert_with(|| {
            next += 1;
            next - 1
        });
    }

    let mut extended = Graph::empty();
    for &v in name.values() {
        extended.insert_vertex(v);
    }
    let mut automorphism = Embedding::new();
    for half in 0..2 {
        for bead in 0..=n {
            for (u, v) in g.edges() {
                let a = name[&uf.find(beads.item(half, bead, pos[&u]))];
                let b = name[&uf.find(beads.item(half, bead, pos[&v]))];
                extended.insert_edge(a, b);
            }
            if bead == n {
                continue;
            }
            for i in 0..beads.m {
                let from = name[&uf.find(beads.item(half, bead, i))];
                let to = name[&uf.find(beads.item(half, bead + 1, i))];
                if let Some(prev) = automorphism.get(from) {
                    claim(prev == to, || {
                        format!("shift maps {from} to both {prev} and {to}")
                    })?;
                }
                automorphism.insert(from, to);
            }
        }
    }

    let inclusion = identity;
    claim(automorphism.len() == extended.vertex_count(), || {
        "shift is not total".into()
    })?;
    claim(automorphism.is_induced(&extended, &extended), || {
        "shift is not an automorphism of the necklace".into()
    })?;
    claim(inclusion.is_induced(g, &extended), || {
        "host is not induced in the necklace".into()
    })?;
    claim(
        p.map.iter().all(|(u, pu)| automorphism.get(u) == Some(pu)),
        || "shift does not extend the partial map".into(),
    )?;
    claim(is_special(&extended), || "necklace is not special".into())?;

    Ok(NecklaceResult {
        extended,
        automorphism,
        inclusion,
        order_n: n,
    })
}

/// Graph on the class roots of one half.
fn quotient(g: &Graph, verts: &[Vertex], beads: &Beads, uf: &mut UnionFind, half: usize) -> Graph {
    let pos: BTreeMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut q = Graph::empty();
    for bead in 0..=beads.n {
        for i in 0..beads.m {
            q.insert_vertex(uf.find(beads.item(half, bead, i)) as Vertex);
        }
        for (u, v) in g.edges() {
            let a = uf.find(beads.item(half, bead, pos[&u])) as Vertex;
            let b = uf.find(beads.item(half, bead, pos[&v])) as Vertex;
            q.insert_edge(a, b);
        }
    }
    q
}

/// Extends `p` so that its domain and range become special.
///
/// The map is first extended to an isomorphism between the closures of its
/// domain and range that respects blocks (K4 vertices, bases and tips keep
/// their roles and special edges go to special edges). Chimneys that then
/// carry fewer than two tips are completed with unused tips of the host,
/// adding fresh tips to the host when none fit.
pub fn close_system(p: &PartialAutomorphism) -> Result<PartialAutomorphism> {
    let host = &p.host;
    let dec = decompose(host)?;
    if is_special(&p.domain_graph()) && is_special(&p.range_graph()) {
        return Ok(p.clone());
    }

    let dom_closure = acl(host, &p.domain())?.closure_set();
    let ran_closure = acl(host, &p.range())?.closure_set();
    let blocking = || blocking_vertex(host, &dec, p);
    if dom_closure.len() != ran_closure.len() {
        return Err(Error::NotExtendable { vertex: blocking() });
    }

    let special: BTreeSet<Edge> = edge_triangle_counts(host)
        .into_iter()
        .filter(|&(_, c)| c >= 2)
        .map(|(e, _)| e)
        .collect();
    let dom_graph = host.induced(&dom_closure);
    let ran_graph = host.induced(&ran_closure);
    let mut closed = None;
    for_each_embedding(&dom_graph, &ran_graph, Some(&p.map), |q| {
        let respects_blocks = q.iter().all(|(u, v)| dec.role(u) == dec.role(v))
            && dom_graph.edges().all(|(u, w)| {
                special.contains(&(u, w)) == special.contains(&edge(q.apply(u), q.apply(w)))
            });
        if respects_blocks {
            closed = Some(q.clone());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    let Some(mut q) = closed else {
        return Err(Error::NotExtendable { vertex: blocking() });
    };

    let mut host = host.clone();
    for block in &dec.blocks {
        let Block::Chimney(c) = block else { continue };
        let [a, b] = c.base;
        let (Some(qa), Some(qb)) = (q.get(a), q.get(b)) else {
            continue;
        };
        let image_base = edge(qa, qb);
        let image_block = dec
            .blocks
            .iter()
            .find_map(|blk| match blk {
                Block::Chimney(d) if edge(d.base[0], d.base[1]) == image_base => Some(d),
                _ => None,
            })
            .ok_or(Error::NotExtendable { vertex: a })?;
        while c.tips.iter().filter(|t| q.get(**t).is_some()).count() < 2 {
            let domain = q.domain();
            let range = q.image();
            let free_x: Vec<Vertex> = c
                .tips
                .iter()
                .copied()
                .filter(|t| !domain.contains(t))
                .collect();
            let free_y: Vec<Vertex> = image_block
                .tips
                .iter()
                .copied()
                .filter(|t| !range.contains(t))
                .collect();
            let fits = |host: &Graph, x: Vertex, y: Vertex| {
                q.iter()
                    .all(|(u, v)| host.has_edge(x, u) == host.has_edge(y, v))
            };
            let pair = free_x
                .iter()
                .flat_map(|&x| free_y.iter().map(move |&y| (x, y)))
                .find(|&(x, y)| fits(&host, x, y));
            let (x, y) = match pair {
                Some(pair) => pair,
                None => {
                    let x = host.fresh_vertex();
                    host.insert_edge(x, a);
                    host.insert_edge(x, b);
                    let y = match free_y.iter().copied().find(|&y| fits(&host, x, y)) {
                        Some(y) => y,
                        None => {
                            let y = host.fresh_vertex();
                            host.insert_edge(y, qa);
                            host.insert_edge(y, qb);
                            y
                        }
                    };
                    (x, y)
                }
            };
            q.insert(x, y);
        }
    }

    let out = PartialAutomorphism::new(host, q)
        .map_err(|e| Error::InternalClaimViolated(format!("closed map: {e}")))?;
    claim(is_special(&out.host), || {
        "extended host is not special".into()
    })?;
    claim(
        is_special(&out.domain_graph()) && is_special(&out.range_graph()),
        || "closed map does not have special domain and range".into(),
    )?;
    Ok(out)
}

/// First domain vertex whose closure cannot match its image's closure.
fn blocking_vertex(host: &Graph, dec: &Decomposition, p: &PartialAutomorphism) -> Vertex {
    let size = |v: Vertex| {
        acl(host, &[v].into_iter().collect())
            .map(|r| r.closure.len())
            .ok()
    };
    p.map
        .iter()
        .find(|&(u, v)| dec.role(u) != dec.role(v) || size(u) != size(v))
        .or_else(|| p.map.iter().next())
        .map_or(0, |(u, _)| u)
}

/// A special graph with a total automorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneSystem {
    #[serde(rename = "graph")]
    pub structure: Graph,
    pub automorphism: Embedding,
}

impl OneSystem {
    pub fn new(structure: Graph, automorphism: Embedding) -> Result<Self> {
        if !automorphism.is_induced(&structure, &structure) {
            return Err(Error::InvalidMap(
                "not an automorphism of the structure".into(),
            ));
        }
        Ok(OneSystem {
            structure,
            automorphism,
        })
    }
}

/// True iff `e` maps `from` into `to` and commutes with their automorphisms.
fn is_system_embedding(e: &Embedding, from: &OneSystem, to: &OneSystem) -> bool {
    e.is_induced(&from.structure, &to.structure)
        && from
            .structure
            .vertices()
            .all(|v| e.get(from.automorphism.apply(v)) == to.automorphism.get(e.apply(v)))
}

/// Amalgamates two 1-systems over a common one.
///
/// The structures are freely amalgamated and the automorphism is the union
/// of the two side automorphisms. With an empty base this is the disjoint
/// union of systems.
pub fn amalgamate_1systems(
    base: &OneSystem,
    left: &OneSystem,
    right: &OneSystem,
    embed_left: &Embedding,
    embed_right: &Embedding,
) -> Result<(OneSystem, Embedding, Embedding)> {
    for (name, s) in [("base", base), ("left", left), ("right", right)] {
        ensure_special(&s.structure)
            .map_err(|e| Error::PreconditionFailed(format!("{name}: {e}")))?;
    }
    if !is_system_embedding(embed_left, base, left)
        || !is_system_embedding(embed_right, base, right)
    {
        return Err(Error::PreconditionFailed(
            "system embeddings must be induced and commute with the automorphisms".into(),
        ));
    }
    let amalgam = free_amalgam(&AmalgamSpec {
        base: base.structure.clone(),
        left: left.structure.clone(),
        right: right.structure.clone(),
        embed_left: embed_left.clone(),
        embed_right: embed_right.clone(),
    });
    let mut aut = Embedding::new();
    for (side, inc) in [(left, &amalgam.left), (right, &amalgam.right)] {
        for (v, w) in side.automorphism.iter() {
            let (from, to) = (inc.apply(v), inc.apply(w));
            if aut.get(from).is_some_and(|prev| prev != to) {
                return Err(Error::InternalClaimViolated(format!(
                    "automorphisms disagree at {from}"
                )));
            }
            aut.insert(from, to);
        }
    }
    let system = OneSystem::new(amalgam.graph, aut)
        .map_err(|e| Error::InternalClaimViolated(format!("combined map: {e}")))?;
    Ok((system, amalgam.left, amalgam.right))
}
