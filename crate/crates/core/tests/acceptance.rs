//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bowtie_lab::gen::{
    random_partial_automorphism, random_special, random_special_extension, shuffle_ids,
};
use bowtie_lab::graph::Edge;
use bowtie_lab::search::{first_embedding, for_each_embedding};
use bowtie_lab::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn all_pairs(n: u32) -> Vec<Edge> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect()
}

fn graph_from_mask(n: u32, mask: u64) -> Graph {
    let edges = all_pairs(n)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, e)| e);
    Graph::new(0..n, edges).unwrap()
}

fn subsets(items: &[Vertex], size: usize) -> Vec<Vec<Vertex>> {
    if size == 0 {
        return vec![vec![]];
    }
    if items.len() < size {
        return vec![];
    }
    let mut out = subsets(&items[1..], size);
    for mut rest in subsets(&items[1..], size - 1) {
        rest.insert(0, items[0]);
        out.push(rest);
    }
    out
}

// Oracles.

/// Scans every 5-subset for a centre with two disjoint neighbour pairs that are edges.
fn oracle_bowtie(g: &Graph) -> bool {
    let vs: Vec<Vertex> = g.vertices().collect();
    subsets(&vs, 5).iter().any(|s| {
        (0..5).any(|c| {
            let o: Vec<Vertex> = (0..5).filter(|&i| i != c).map(|i| s[i]).collect();
            let centre = s[c];
            [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)]
                .iter()
                .any(|&(p, q, r, t)| {
                    let tri = |x: Vertex, y: Vertex| {
                        g.has_edge(centre, x) && g.has_edge(centre, y) && g.has_edge(x, y)
                    };
                    tri(o[p], o[q]) && tri(o[r], o[t])
                })
        })
    })
}

/// Per centre, looks for two triangles through it with disjoint other ends.
fn oracle_bowtie_local(g: &Graph) -> bool {
    g.vertices().any(|c| {
        let nb: Vec<Vertex> = g.neighbors(c).collect();
        let pairs: Vec<(Vertex, Vertex)> = subsets(&nb, 2)
            .into_iter()
            .filter(|p| g.has_edge(p[0], p[1]))
            .map(|p| (p[0], p[1]))
            .collect();
        pairs.iter().any(|&(a, b)| {
            pairs
                .iter()
                .any(|&(x, y)| a != x && a != y && b != x && b != y)
        })
    })
}

fn oracle_special(g: &Graph) -> bool {
    if oracle_bowtie_local(g) {
        return false;
    }
    let vs: Vec<Vertex> = g.vertices().collect();
    let mut good = BTreeSet::new();
    for q in subsets(&vs, 4) {
        if all_pairs(4)
            .iter()
            .all(|&(i, j)| g.has_edge(q[i as usize], q[j as usize]))
        {
            good.extend(q);
        }
    }
    for (x, y) in g.edges() {
        let common: Vec<Vertex> = vs
            .iter()
            .copied()
            .filter(|&z| g.has_edge(x, z) && g.has_edge(y, z))
            .collect();
        for &z in &common {
            for &w in &common {
                if z != w && !g.has_edge(z, w) {
                    good.extend([x, y, z, w]);
                }
            }
        }
    }
    vs.iter().all(|v| good.contains(v))
}

fn oracle_acl(g: &Graph, a: &BTreeSet<Vertex>) -> BTreeSet<Vertex> {
    let vs: Vec<Vertex> = g.vertices().collect();
    let in_triangles = |x: Vertex, y: Vertex| {
        vs.iter()
            .filter(|&&z| g.has_edge(x, z) && g.has_edge(y, z))
            .count()
    };
    let mut out = a.clone();
    for &s in a {
        for (x, y) in g.edges() {
            let special = in_triangles(x, y) >= 2;
            let meets = x == s || y == s || (g.has_edge(s, x) && g.has_edge(s, y));
            let forms_triangle = in_triangles(x, y) >= 1;
            if special && meets && forms_triangle {
                out.extend([x, y]);
            }
        }
    }
    out
}

fn triangles_local(amalgam: &bowtie_lab::amalgam::Amalgam) -> bool {
    let (l, r) = (amalgam.left.image(), amalgam.right.image());
    let g = &amalgam.graph;
    let vs: Vec<Vertex> = g.vertices().collect();
    subsets(&vs, 3).iter().all(|t| {
        let is_tri = g.has_edge(t[0], t[1]) && g.has_edge(t[0], t[2]) && g.has_edge(t[1], t[2]);
        !is_tri || t.iter().all(|v| l.contains(v)) || t.iter().all(|v| r.contains(v))
    })
}

// Criteria.

fn criterion_1() -> Outcome {
    let mut mismatches = 0;
    let mut count = 0;
    for mask in 0u64..1 << 15 {
        let g = graph_from_mask(6, mask);
        count += 1;
        let expected = oracle_bowtie(&g);
        if contains_bowtie(&g) != expected || oracle_bowtie_local(&g) != expected {
            mismatches += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..500 {
        let g = graph_from_mask(7, rng.gen_range(0..1u64 << 21));
        count += 1;
        let expected = oracle_bowtie(&g);
        if contains_bowtie(&g) != expected || oracle_bowtie_local(&g) != expected {
            mismatches += 1;
        }
    }
    outcome(
        mismatches == 0,
        format!("{count} graphs, {mismatches} mismatches"),
    )
}

fn verify_amalgam(spec: &AmalgamSpec) -> bool {
    let check = check_special_amalgam(spec);
    check.is_verified()
        && oracle_special(&check.amalgam().graph)
        && triangles_local(check.amalgam())
}

fn criterion_2() -> Outcome {
    let graphs: Vec<Graph> = (0..=6).flat_map(enumerate_special).collect();
    let mut jobs = Vec::new();
    for a in &graphs {
        for b1 in &graphs {
            for b2 in &graphs {
                if a.vertex_count() <= b1.vertex_count() && a.vertex_count() <= b2.vertex_count() {
                    jobs.push((a, b1, b2));
                }
            }
        }
    }
    let (total, failed) = jobs
        .par_iter()
        .map(|&(a, b1, b2)| {
            let (mut total, mut failed) = (0usize, 0usize);
            let lefts = find_embeddings(a, b1, None);
            let rights = find_embeddings(a, b2, None);
            for l in &lefts {
                for r in &rights {
                    let spec =
                        AmalgamSpec::new(a.clone(), b1.clone(), b2.clone(), l.clone(), r.clone())
                            .unwrap();
                    total += 1;
                    failed += usize::from(!verify_amalgam(&spec));
                }
            }
            (total, failed)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut random_total, mut random_failed) = (0, 0);
    for _ in 0..1000 {
        let a = random_special(&mut rng, 8);
        let b1 = random_special_extension(&mut rng, &a, 12);
        let b2 = random_special_extension(&mut rng, &a, 12);
        let (b2, _) = shuffle_ids(&mut rng, &b2);
        let mut options = Vec::new();
        for_each_embedding(&a, &b2, None, |e| {
            options.push(e.clone());
            if options.len() >= 32 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        let right = options
            .choose(&mut rng)
            .expect("base embeds into its extension")
            .clone();
        let spec =
            AmalgamSpec::new(a.clone(), b1, b2, Embedding::identity(a.vertices()), right).unwrap();
        random_total += 1;
        random_failed += usize::from(!verify_amalgam(&spec));
    }
    outcome(
        failed == 0 && random_failed == 0,
        format!(
            "{} graphs, {total} exhaustive amalgams ({failed} failed), {random_total} random ({random_failed} failed)",
            graphs.len()
        ),
    )
}

fn criterion_3() -> Outcome {
    let v: Embedding = [(0, 0)].into_iter().collect();
    let tri = Graph::complete(3);
    let spec =
        AmalgamSpec::new(Graph::new([0], []).unwrap(), tri.clone(), tri, v.clone(), v).unwrap();
    let a = free_amalgam(&spec);
    let iso = are_isomorphic(&a.graph, &Graph::bowtie()).is_some();
    let bowtie =
        contains_bowtie(&a.graph) && oracle_bowtie(&a.graph) && oracle_bowtie_local(&a.graph);
    outcome(
        iso && bowtie,
        format!("isomorphic to bowtie: {iso}, contains bowtie: {bowtie}"),
    )
}

fn criterion_4() -> Outcome {
    let (mut total, mut failed, mut largest_ratio) = (0, 0, 0.0f64);
    for n in 0..=6u32 {
        let bits = n * n.saturating_sub(1) / 2;
        let results: Vec<(bool, f64)> = (0u64..1 << bits)
            .into_par_iter()
            .filter_map(|mask| {
                let g = graph_from_mask(n, mask);
                if oracle_bowtie(&g) {
                    return None;
                }
                let ok_and_ratio = match specialize(&g) {
                    Ok((s, e)) => {
                        let ids: BTreeSet<Vertex> = g.vertices().collect();
                        let ok = oracle_special(&s)
                            && e.is_induced(&g, &s)
                            && s.induced(&ids) == g
                            && s.vertex_count() <= 4 * n as usize;
                        (ok, s.vertex_count() as f64 / n.max(1) as f64)
                    }
                    Err(_) => (false, 0.0),
                };
                Some(ok_and_ratio)
            })
            .collect();
        total += results.len();
        failed += results.iter().filter(|r| !r.0).count();
        largest_ratio = results.iter().map(|r| r.1).fold(largest_ratio, f64::max);
    }
    outcome(
        failed == 0,
        format!("{total} bowtie-free graphs, {failed} failed, max |S|/|G| = {largest_ratio:.2}"),
    )
}

fn necklace_run() -> (Vec<String>, usize, usize, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut outputs, mut nontrivial, mut failures) = (Vec::new(), 0, Vec::new());
    let mut systems = 0;
    while nontrivial < 200 {
        let g = random_special(&mut rng, 12);
        let p = random_partial_automorphism(&mut rng, &g, 256);
        systems += 1;
        if !p.map().iter().all(|(u, v)| u == v) && !p.is_total() {
            nontrivial += 1;
        }
        match necklace(&p) {
            Ok(r) => {
                let k = &r.extended;
                let extends = p.map().iter().all(|(u, v)| {
                    r.automorphism.get(r.inclusion.apply(u)) == Some(r.inclusion.apply(v))
                });
                let ok = r.automorphism.len() == k.vertex_count()
                    && r.automorphism.is_induced(k, k)
                    && extends
                    && oracle_special(k)
                    && r.inclusion.is_induced(&g, k);
                if !ok {
                    failures.push(format!("system {systems}: postcondition"));
                }
                outputs.push(serde_json::to_string(&r).unwrap());
            }
            Err(e) => failures.push(format!("system {systems}: {e}")),
        }
    }
    (outputs, systems, nontrivial, failures)
}

fn criterion_5() -> Outcome {
    let (_, systems, nontrivial, failures) = necklace_run();
    outcome(
        failures.is_empty(),
        format!(
            "{systems} systems ({nontrivial} with a non-identity partial map), failures: {:?}",
            failures
        ),
    )
}

fn criterion_6() -> Outcome {
    let (mut checked, mut failed) = (0usize, Vec::new());
    for n in 0..=8 {
        for g in enumerate_special(n) {
            let vs: Vec<Vertex> = g.vertices().collect();
            let d = decompose(&g).unwrap();
            let single = |v: Vertex| acl(&g, &[v].into()).unwrap().closure_set();
            for &v in &vs {
                let expect = match d.role(v).unwrap() {
                    VertexRole::InK4 => 4,
                    VertexRole::Tip => 3,
                    VertexRole::Base => 2,
                };
                if single(v).len() != expect
                    || classify_vertex(&g, v).unwrap() != d.role(v).unwrap()
                {
                    failed.push(format!("{g:?} singleton {v}"));
                }
            }
            for size in 0..=3 {
                for sub in subsets(&vs, size) {
                    let a: BTreeSet<Vertex> = sub.into_iter().collect();
                    let c = acl(&g, &a).unwrap().closure_set();
                    checked += 1;
                    let union: BTreeSet<Vertex> = a.iter().flat_map(|&v| single(v)).collect();
                    let monotone = a.iter().all(|&v| {
                        let mut smaller = a.clone();
                        smaller.remove(&v);
                        acl(&g, &smaller).unwrap().closure_set().is_subset(&c)
                    });
                    let idempotent_local = c
                        .iter()
                        .all(|&v| single(v).iter().all(|w| oracle_acl(&g, &c).contains(w)));
                    let ok = c == oracle_acl(&g, &a)
                        && a.is_subset(&c)
                        && union == c
                        && monotone
                        && idempotent_local
                        && c.len() <= 4 * a.len();
                    if !ok {
                        failed.push(format!("{g:?} {a:?}"));
                    }
                }
            }
        }
    }
    outcome(
        failed.is_empty(),
        format!(
            "{checked} (graph, A) pairs, failures: {:?}",
            failed.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn approximant_run() -> Result<(String, String, Approximant)> {
    let approx = build_approximant(4, 200, 7)?;
    let report = check_extension_property(&approx, 0, 4)?;
    Ok((
        approx.to_json(),
        serde_json::to_string(&report).unwrap(),
        approx,
    ))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let (_, _, approx) = match approximant_run() {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let built = start.elapsed();
    let report = check_extension_property(&approx, 0, 4).unwrap();
    let embeds = enumerate_special(4)
        .iter()
        .all(|h| first_embedding(h, &approx.final_graph, None).is_some());
    let ok = report.unextended.is_empty() && embeds && built < Duration::from_secs(300);
    outcome(
        ok,
        format!(
            "{} snapshots, final |V| = {}, snapshot 0: {} embeddings checked, {} unextended; all 4-vertex special graphs embed: {embeds}",
            approx.snapshots.len(),
            approx.final_graph.vertex_count(),
            report.embeddings_checked,
            report.unextended.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for k in [3, 4] {
        let w = match homogenisability_witness(WitnessConfig { k }) {
            Ok(w) => w,
            Err(e) => return outcome(false, format!("k = {k}: {e}")),
        };
        let r = verify_witness(&w);
        let subsets_valid = r.subsets.len() == k
            && r.subsets.iter().all(|s| {
                s.isomorphism.as_ref().is_some_and(|f| {
                    f.get(w.t[k]) == Some(w.t_hat)
                        && s.indices
                            .iter()
                            .all(|&i| f.get(w.t[i - 1]) == Some(w.t[i - 1]))
                })
            });
        let shape = match k {
            3 => w.graph.vertex_count() == 20 && w.graph.edge_count() == 37,
            _ => w.graph.vertex_count() == 4 * (k + 2),
        };
        let pass = r.passed && subsets_valid && oracle_special(&w.graph) && shape;
        ok &= pass;
        details.push(format!(
            "k = {k}: |V| = {}, |E| = {}, special {}, subsets {}/{}, no automorphism {}",
            w.graph.vertex_count(),
            w.graph.edge_count(),
            r.special,
            r.subsets.iter().filter(|s| s.isomorphism.is_some()).count(),
            r.subsets.len(),
            r.no_automorphism
        ));
    }
    outcome(ok, details.join("; "))
}

fn criterion_9() -> Outcome {
    let (first, ..) = necklace_run();
    let (second, ..) = necklace_run();
    let necklaces = first == second;
    let approx = match (approximant_run(), approximant_run()) {
        (Ok(a), Ok(b)) => a.0 == b.0 && a.1 == b.1,
        _ => false,
    };
    outcome(
        necklaces && approx,
        format!("necklace outputs identical: {necklaces}, approximant outputs identical: {approx}"),
    )
}

type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "bowtie detection matches brute force", 60, criterion_1),
        (2, "free amalgamation of special graphs", 300, criterion_2),
        (
            3,
            "two triangles over a vertex amalgamate to a bowtie",
            60,
            criterion_3,
        ),
        (4, "specialization of bowtie-free graphs", 120, criterion_4),
        (
            5,
            "necklace extends partial automorphisms",
            300,
            criterion_5,
        ),
        (6, "algebraic closure laws and bound", 120, criterion_6),
        (7, "approximant certification", 300, criterion_7),
        (8, "non-homogenisability witness", 120, criterion_8),
        (
            9,
            "determinism of necklace and approximant output",
            600,
            criterion_9,
        ),
    ];
    let mut all = true;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(limit);
        let pass = out.ok && in_time;
        all &= pass;
        println!(
            "{} criterion {id}: {name} [{:.2}s, limit {limit}s] {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            out.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
