//! Finite approximants of the universal bowtie-free graph and the witness
//! that it is not finitely homogenisable.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amalgam::{free_amalgam, AmalgamSpec};
use crate::enumerate::enumerate_special;
use crate::error::{Error, Result};
use crate::graph::{Embedding, Graph, Vertex};
use crate::search::{automorphisms, find_embeddings, first_embedding, isomorphism_extending};
use crate::structure::is_special;

/// A special graph `base` sitting inside a special graph `extension` on a
/// subset of its vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionPair {
    pub base: Graph,
    pub extension: Graph,
}

impl ExtensionPair {
    /// Every embedding of the base extends to the extension.
    pub fn is_trivial(&self) -> bool {
        self.base.vertex_count() == self.extension.vertex_count()
    }
}

/// All pairs `A ⊆ B` with `B` special on at most `cap` vertices and `A` a
/// special induced subgraph of `B`, one per orbit of `Aut(B)` on subsets.
pub fn extension_pairs(cap: u32) -> Vec<ExtensionPair> {
    let mut pairs = Vec::new();
    for size in 1..=cap {
        for b in enumerate_special(size) {
            let autos = automorphisms(&b, None);
            let verts: Vec<Vertex> = b.vertices().collect();
            let mut seen: BTreeSet<BTreeSet<Vertex>> = BTreeSet::new();
            for mask in 0u64..1 << verts.len() {
                let subset: BTreeSet<Vertex> = verts
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                if seen.contains(&subset) {
                    continue;
                }
                let a = b.induced(&subset);
                if !is_special(&a) {
                    continue;
                }
                for f in &autos {
                    seen.insert(subset.iter().map(|&v| f.apply(v)).collect());
                }
                pairs.push(ExtensionPair {
                    base: a,
                    extension: b.clone(),
                });
            }
        }
    }
    pairs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproximantConfig {
    pub cap: u32,
    pub budget: usize,
    pub seed: u64,
}

/// A requirement handled while building: `embedding` maps the base of
/// `pair` into the graph current at `step`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub step: usize,
    pub pair: usize,
    pub embedding: Embedding,
    /// True when satisfying it took an amalgamation step.
    pub amalgamated: bool,
}

/// A prefix `G_0 ⊆ G_1 ⊆ …` of a Fraïssé chain of special graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Approximant {
    pub config: ApproximantConfig,
    pub snapshots: Vec<Graph>,
    #[serde(rename = "final")]
    pub final_graph: Graph,
    pub ledger: Vec<LedgerEntry>,
}

impl Approximant {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("approximant serialisation is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidGraph(e.to_string()))
    }
}

/// Embeddings of `a` into `g` whose image meets `fresh` (all of them when
/// `fresh` is `None`).
fn embeddings_touching(a: &Graph, g: &Graph, fresh: Option<&BTreeSet<Vertex>>) -> Vec<Embedding> {
    let Some(fresh) = fresh else {
        return find_embeddings(a, g, None);
    };
    let mut found = BTreeSet::new();
    for x in a.vertices() {
        for &w in fresh {
            let seed: Embedding = [(x, w)].into_iter().collect();
            found.extend(find_embeddings(a, g, Some(&seed)));
        }
    }
    found.into_iter().collect()
}

/// Builds an approximant starting from K4.
///
/// Requirements (an extension pair plus an embedding of its base into the
/// current graph) are queued round-robin over pairs and first-in first-out
/// over embeddings; the seed only shuffles embeddings found at the same
/// step. Each step takes the oldest requirement; if it is already met it is
/// logged, otherwise the current graph is freely amalgamated with the
/// pair's extension over the embedded base. Building stops after `budget`
/// amalgamation steps or when no requirement is pending.
pub fn build_approximant(cap: u32, budget: usize, seed: u64) -> Result<Approximant> {
    if cap < 4 {
        return Err(Error::PreconditionFailed(format!(
            "cap must be at least 4, got {cap}"
        )));
    }
    let config = ApproximantConfig { cap, budget, seed };
    let pairs = extension_pairs(cap);
    let active: Vec<usize> = (0..pairs.len())
        .filter(|&i| !pairs[i].is_trivial())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut current = Graph::complete(4);
    let mut snapshots = vec![current.clone()];
    let mut ledger = Vec::new();
    let mut queue: VecDeque<(usize, Embedding)> = VecDeque::new();

    let mut enqueue =
        |g: &Graph, fresh: Option<&BTreeSet<Vertex>>, queue: &mut VecDeque<(usize, Embedding)>| {
            let mut batches: Vec<(usize, Vec<Embedding>)> = active
                .iter()
                .map(|&i| {
                    let mut batch = embeddings_touching(&pairs[i].base, g, fresh);
                    // The empty base only asks for a copy of the extension once.
                    if fresh.is_some() && pairs[i].base.is_empty() {
                        batch.clear();
                    }
                    batch.shuffle(&mut rng);
                    (i, batch)
                })
                .collect();
            let rounds = batches.iter().map(|(_, b)| b.len()).max().unwrap_or(0);
            for r in 0..rounds {
                for (i, batch) in &mut batches {
                    if let Some(e) = batch.get_mut(r) {
                        queue.push_back((*i, std::mem::take(e)));
                    }
                }
            }
        };
    enqueue(&current, None, &mut queue);

    let mut steps = 0;
    while steps < budget {
        let Some((pair_id, emb)) = queue.pop_front() else {
            break;
        };
        let pair = &pairs[pair_id];
        if first_embedding(&pair.extension, &current, Some(&emb)).is_some() {
            ledger.push(LedgerEntry {
                step: steps,
                pair: pair_id,
                embedding: emb,
                amalgamated: false,
            });
            continue;
        }
        let amalgam = free_amalgam(&AmalgamSpec {
            base: pair.base.clone(),
            left: current.clone(),
            right: pair.extension.clone(),
            embed_left: emb.clone(),
            embed_right: Embedding::identity(pair.base.vertices()),
        });
        ledger.push(LedgerEntry {
            step: steps,
            pair: pair_id,
            embedding: emb,
            amalgamated: true,
        });
        steps += 1;
        let fresh: BTreeSet<Vertex> = amalgam
            .graph
            .vertices()
            .filter(|v| !current.contains_vertex(*v))
            .collect();
        current = amalgam.graph;
        if !is_special(&current) {
            return Err(Error::InternalClaimViolated(format!(
                "amalgamation step {steps} left the special class"
            )));
        }
        snapshots.push(current.clone());
        enqueue(&current, Some(&fresh), &mut queue);
    }

    Ok(Approximant {
        config,
        snapshots,
        final_graph: current,
        ledger,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnextendedEmbedding {
    pub pair: usize,
    pub embedding: Embedding,
}

/// How well a snapshot's embeddings extend into the final graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub snapshot: usize,
    pub cap: u32,
    pub pairs: usize,
    pub embeddings_checked: usize,
    pub extended: usize,
    pub unextended: Vec<UnextendedEmbedding>,
}

/// For every extension pair with at most `cap` vertices and every embedding
/// of its base into the chosen snapshot, checks whether the embedding
/// extends to the pair's extension inside the final graph.
pub fn check_extension_property(
    approx: &Approximant,
    snapshot_index: usize,
    cap: u32,
) -> Result<ExtensionReport> {
    let snapshot = approx.snapshots.get(snapshot_index).ok_or_else(|| {
        Error::PreconditionFailed(format!(
            "snapshot {snapshot_index} out of range (0..{})",
            approx.snapshots.len()
        ))
    })?;
    let pairs = extension_pairs(cap);
    let jobs: Vec<(usize, Embedding)> = pairs
        .iter()
        .enumerate()
        .flat_map(|(i, p)| {
            find_embeddings(&p.base, snapshot, None)
                .into_iter()
                .map(move |e| (i, e))
        })
        .collect();
    let results: Vec<bool> = jobs
        .par_iter()
        .map(|(i, e)| first_embedding(&pairs[*i].extension, &approx.final_graph, Some(e)).is_some())
        .collect();
    let unextended: Vec<_> = jobs
        .iter()
        .zip(&results)
        .filter(|(_, ok)| !**ok)
        .map(|((pair, embedding), _)| UnextendedEmbedding {
            pair: *pair,
            embedding: embedding.clone(),
        })
        .collect();
    Ok(ExtensionReport {
        snapshot: snapshot_index,
        cap,
        pairs: pairs.len(),
        embeddings_checked: jobs.len(),
        extended: jobs.len() - unextended.len(),
        unextended,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessConfig {
    pub k: usize,
}

/// Height-2 chimneys `H_1 … H_{k+1}` whose bases form two cycles
/// `a_1 … a_{k+1}` and `b_1 … b_{k+1}`, plus a chimney `Ĥ` with base
/// `â, b̂` attached by `a_k â`, `â b_1`, `b_k b̂` and `b̂ a_1`.
///
/// Index `i` in the vectors is chimney `H_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witness {
    pub k: usize,
    pub graph: Graph,
    pub a: Vec<Vertex>,
    pub b: Vec<Vertex>,
    pub t: Vec<Vertex>,
    pub a_hat: Vertex,
    pub b_hat: Vertex,
    pub t_hat: Vertex,
    pub u: Vec<Vertex>,
    pub v: Vec<Vertex>,
}

impl Witness {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serialisation is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidGraph(e.to_string()))
    }

    /// Base plus all tips of the chimney with base `a, b`.
    fn chimney_at(&self, a: Vertex, b: Vertex) -> BTreeSet<Vertex> {
        let mut vs: BTreeSet<Vertex> = self.graph.common_neighbors(a, b).into_iter().collect();
        vs.insert(a);
        vs.insert(b);
        vs
    }
}

pub fn homogenisability_witness(cfg: WitnessConfig) -> Result<Witness> {
    let k = cfg.k;
    if k < 3 {
        return Err(Error::InvalidK { k });
    }
    let chimney_count = (k + 1) as Vertex;
    let mut g = Graph::empty();
    let (mut a, mut b, mut t) = (Vec::new(), Vec::new(), Vec::new());
    let add_chimney = |g: &mut Graph, first: Vertex| {
        let (x, y, t1, t2) = (first, first + 1, first + 2, first + 3);
        for (u, v) in [(x, y), (x, t1), (y, t1), (x, t2), (y, t2)] {
            g.insert_edge(u, v);
        }
        (x, y, t1)
    };
    for i in 0..chimney_count {
        let (x, y, tip) = add_chimney(&mut g, 4 * i);
        a.push(x);
        b.push(y);
        t.push(tip);
    }
    for i in 0..=k {
        let j = (i + 1) % (k + 1);
        g.insert_edge(a[i], a[j]);
        g.insert_edge(b[i], b[j]);
    }
    let (a_hat, b_hat, t_hat) = add_chimney(&mut g, 4 * chimney_count);
    g.insert_edge(a[k - 1], a_hat);
    g.insert_edge(a_hat, b[0]);
    g.insert_edge(b[k - 1], b_hat);
    g.insert_edge(b_hat, a[0]);

    let u = t.clone();
    let mut v = t.clone();
    v[k] = t_hat;
    let w = Witness {
        k,
        graph: g,
        a,
        b,
        t,
        a_hat,
        b_hat,
        t_hat,
        u,
        v,
    };
    if !is_special(&w.graph) {
        return Err(Error::InternalClaimViolated(
            "witness graph is not special".into(),
        ));
    }
    Ok(w)
}

/// Outcome of the `(k-1)`-subset check for one index set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetCheck {
    /// 1-based chimney indices.
    pub indices: Vec<usize>,
    pub isomorphism: Option<Embedding>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub note: &'static str,
    pub k: usize,
    pub names_distinct: bool,
    /// (a) the witness graph is special.
    pub special: bool,
    /// (b) per index subset: a partial isomorphism fixing the chosen tips
    /// and sending `t_{k+1}` to `t̂`.
    pub subsets: Vec<SubsetCheck>,
    pub subsets_pass: bool,
    /// (c) an automorphism fixing every `a_i, b_i, t_i` (`i ≤ k`) and
    /// sending `t_{k+1}` to `t̂`, if one exists.
    pub forbidden_automorphism: Option<Embedding>,
    pub no_automorphism: bool,
    pub passed: bool,
}

const WITNESS_NOTE: &str = "finite surrogate: checks are decided by exhaustive search inside the witness graph, not inside the countable universal graph";

/// Checks the witness by exhaustive search.
pub fn verify_witness(w: &Witness) -> WitnessReport {
    let k = w.k;
    let shapes_ok = k >= 1
        && [w.a.len(), w.b.len(), w.t.len(), w.u.len(), w.v.len()]
            .iter()
            .all(|&l| l == k + 1);
    let mut names: Vec<Vertex> = Vec::new();
    if shapes_ok {
        names.extend(w.a.iter().chain(&w.b).chain(&w.t));
    }
    names.extend([w.a_hat, w.b_hat, w.t_hat]);
    let names_distinct = shapes_ok
        && names.iter().collect::<BTreeSet<_>>().len() == names.len()
        && names.iter().all(|v| w.graph.contains_vertex(*v));
    let special = is_special(&w.graph);

    let mut subsets = Vec::new();
    let mut forbidden_automorphism = None;
    if names_distinct {
        let chimneys: Vec<BTreeSet<Vertex>> =
            (0..=k).map(|i| w.chimney_at(w.a[i], w.b[i])).collect();
        let hat = w.chimney_at(w.a_hat, w.b_hat);
        subsets = (0..k)
            .into_par_iter()
            .map(|skip| {
                let chosen: Vec<usize> = (0..k).filter(|&i| i != skip).collect();
                let mut dom: BTreeSet<Vertex> = chimneys[k].clone();
                let mut ran: BTreeSet<Vertex> = hat.clone();
                let mut seed = Embedding::new();
                for &i in &chosen {
                    dom.extend(&chimneys[i]);
                    ran.extend(&chimneys[i]);
                    seed.insert(w.t[i], w.t[i]);
                }
                seed.insert(w.t[k], w.t_hat);
                let isomorphism = isomorphism_extending(
                    &w.graph.induced(&dom),
                    &w.graph.induced(&ran),
                    Some(&seed),
                );
                SubsetCheck {
                    indices: chosen.iter().map(|i| i + 1).collect(),
                    isomorphism,
                }
            })
            .collect();

        let mut seed = Embedding::new();
        for i in 0..k {
            for x in [w.a[i], w.b[i], w.t[i]] {
                seed.insert(x, x);
            }
        }
        seed.insert(w.t[k], w.t_hat);
        forbidden_automorphism = isomorphism_extending(&w.graph, &w.graph, Some(&seed));
    }
    let subsets_pass = names_distinct && subsets.iter().all(|s| s.isomorphism.is_some());
    let no_automorphism = names_distinct && forbidden_automorphism.is_none();
    WitnessReport {
        note: WITNESS_NOTE,
        k,
        names_distinct,
        special,
        passed: names_distinct && special && subsets_pass && no_automorphism,
        subsets,
        subsets_pass,
        forbidden_automorphism,
        no_automorphism,
    }
}

/// Groups ledger entries by pair id; handy for summaries.
pub fn ledger_counts(approx: &Approximant) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for e in &approx.ledger {
        *counts.entry(e.pair).or_insert(0) += 1;
    }
    counts
}
