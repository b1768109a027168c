//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run a subset with `cargo test -p hyperarb --test acceptance -- 3 7`.

mod common;

use std::time::{Duration, Instant};

use common::{graphs, matroid_docs, root_vectors, DIGRAPH, MIXED_GRAPH, MIXED_HYPERGRAPH};
use hyperarb::conditions::{evaluate, matroid_induced_h, scc_projection, ConditionId};
use hyperarb::gen::{self, GenConfig};
use hyperarb::gpoly::{build_t, feasible};
use hyperarb::matroid::{check_rank_axioms, ExtendedMatroid};
use hyperarb::orientation::{compute_h2, exhaustive_mixed_orient, mixed_orient, reach_cover_violation, SetFunction};
use hyperarb::packing::{find_packing, main_pack, mrb_mixed_pack, packing_supports, verify, Packing, PackingSpec};
use hyperarb::{Bounds, ElementSet, Instance, Matroid, MatroidDoc, MixedHypergraph, Result, RootMultiset, VertexSet};

const CAP: u64 = 200_000_000;
const RANDOM_INSTANCES: u64 = 1000;
const SEED: u64 = 20_240_601;
const EDMONDS_TIME_LIMIT: Duration = Duration::from_secs(300);
/// Mismatch descriptions kept per criterion.
const SHOWN: usize = 3;

#[derive(Default)]
struct Tally {
    checked: usize,
    mismatches: usize,
    shown: Vec<String>,
}

impl Tally {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.mismatches += 1;
            if self.shown.len() < SHOWN {
                self.shown.push(what());
            }
        }
    }
}

fn describe(g: &MixedHypergraph) -> String {
    serde_json::to_string(&Instance::new(g.clone()).to_doc()).unwrap()
}

fn with_roots(g: &MixedHypergraph, roots: &[usize]) -> Instance {
    Instance::new(g.clone()).with_roots(roots.to_vec()).unwrap()
}

fn packing_ok(g: &MixedHypergraph, p: &Packing, spec: &PackingSpec) -> Result<bool> {
    Ok(verify(g, p, spec)?.is_none())
}

/// Condition verdict against exhaustive packing search over small digraphs
/// with every root multiset of size at most two.
fn condition_vs_search(t: &mut Tally, id: ConditionId, spec: fn(RootMultiset) -> PackingSpec) -> Result<()> {
    for g in graphs(3, 4, usize::MAX, DIGRAPH, false) {
        for roots in root_vectors(g.n(), 2) {
            let inst = with_roots(&g, &roots);
            let holds = evaluate(id, &inst, CAP)?.holds();
            let spec = spec(RootMultiset::new(roots.clone())?);
            let found = find_packing(&g, &spec, CAP)?;
            let verified = match &found {
                Some(p) => packing_ok(&g, p, &spec)?,
                None => true,
            };
            t.expect(holds == found.is_some() && verified, || {
                format!("{} roots {roots:?}: condition {holds}, packing {}", describe(&g), found.is_some())
            });
        }
    }
    Ok(())
}

fn criterion_1(t: &mut Tally) -> Result<()> {
    let start = Instant::now();
    condition_vs_search(t, ConditionId::Edmonds, PackingSpec::spanning)?;
    let elapsed = start.elapsed();
    t.expect(elapsed < EDMONDS_TIME_LIMIT, || format!("grid took {elapsed:?}"));
    Ok(())
}

fn criterion_2(t: &mut Tally) -> Result<()> {
    condition_vs_search(t, ConditionId::Kkt, PackingSpec::reachability)
}

fn criterion_3(t: &mut Tally) -> Result<()> {
    for g in graphs(3, 4, usize::MAX, DIGRAPH, false) {
        for roots in root_vectors(g.n(), 2) {
            let copies = roots.iter().sum();
            for doc in matroid_docs(copies) {
                let inst = with_roots(&g, &roots).with_matroid(doc.clone())?;
                let kiraly = evaluate(ConditionId::Kiraly, &inst, CAP)?.holds();
                let gy = evaluate(ConditionId::GyDigraph, &inst, CAP)?.holds();
                let spec = PackingSpec::from_instance(hyperarb::packing::Species::MatroidReachabilityBased, &inst)?;
                let found = find_packing(&g, &spec, CAP)?;
                let verified = match &found {
                    Some(p) => packing_ok(&g, p, &spec)?,
                    None => true,
                };
                t.expect(kiraly == found.is_some() && kiraly == gy && verified, || {
                    format!(
                        "{} roots {roots:?} {doc:?}: kiraly {kiraly}, digraph form {gy}, packing {}",
                        describe(&g),
                        found.is_some()
                    )
                });
            }
        }
    }
    Ok(())
}

/// Every mixed graph of the orientation grid with roots and a matroid.
fn mixed_grid(mut visit: impl FnMut(&MixedHypergraph, &[usize], &MatroidDoc, &Instance) -> Result<()>) -> Result<()> {
    for g in graphs(3, 4, usize::MAX, MIXED_GRAPH, false) {
        for roots in root_vectors(g.n(), 2) {
            for doc in matroid_docs(roots.iter().sum()) {
                let inst = with_roots(&g, &roots).with_matroid(doc.clone())?;
                visit(&g, &roots, &doc, &inst)?;
            }
        }
    }
    Ok(())
}

fn criterion_4(t: &mut Tally) -> Result<()> {
    mixed_grid(|g, roots, doc, inst| {
        let h = SetFunction::new(g.n(), matroid_induced_h(inst, CAP)?)?;
        let engine = mixed_orient(g, &h, CAP)?.found();
        let oracle = exhaustive_mixed_orient(g, &h, CAP)?;
        let sound = engine.as_ref().is_none_or(|o| reach_cover_violation(g, &o.heads, &h).is_none());
        t.expect(engine.is_some() == oracle.is_some() && sound, || {
            format!("{} roots {roots:?} {doc:?}: engine {}, exhaustive {}", describe(g), engine.is_some(), oracle.is_some())
        });
        Ok(())
    })
}

fn criterion_5(t: &mut Tally) -> Result<()> {
    mixed_grid(|g, roots, doc, inst| {
        let holds = evaluate(ConditionId::GyMixed, inst, CAP)?.holds();
        let m = inst.matroid.clone().expect("matroid attached");
        let rs = RootMultiset::new(roots.to_vec())?;
        let packed = mrb_mixed_pack(g, &rs, m.clone(), CAP)?.found();
        let verified = match &packed {
            Some(p) => packing_ok(g, p, &PackingSpec::matroid_reachability_based(rs, m))?,
            None => true,
        };
        t.expect(holds == packed.is_some() && verified, || {
            format!("{} roots {roots:?} {doc:?}: condition {holds}, packed {}", describe(g), packed.is_some())
        });
        Ok(())
    })
}

fn criterion_6(t: &mut Tally) -> Result<()> {
    for g in graphs(4, 4, usize::MAX, MIXED_HYPERGRAPH, true) {
        for k in 1..=2 {
            let formula = ExtendedMatroid::new(&g, k)?;
            let table = Matroid::extended(&g, k)?.rank_table(CAP)?;
            let mut bad = None;
            for z in formula.ground().all().subsets() {
                let r = formula.formula_rank(z, CAP)?;
                if r != table[z.0 as usize] as usize {
                    bad = Some((z, r, table[z.0 as usize]));
                    break;
                }
            }
            t.expect(bad.is_none(), || format!("{} k={k}: formula vs independence rank {bad:?}", describe(&g)));
        }
    }
    Ok(())
}

/// Graphs of the support-polyhedron grid: up to three vertices and at most
/// eight extended elements, up to relabelling.
fn support_grid() -> Vec<MixedHypergraph> {
    graphs(3, 8, 8, MIXED_HYPERGRAPH, true)
}

/// Every bound vector with `f <= g <= 2` pointwise and `1 <= l <= l' <= 2`.
fn bounds_grid(n: usize, k: i64) -> Vec<Bounds> {
    let pairs: Vec<(i64, i64)> = (0..=2).flat_map(|f| (f..=2).map(move |g| (f, g))).collect();
    let mut fgs: Vec<(Vec<i64>, Vec<i64>)> = vec![(vec![], vec![])];
    for _ in 0..n {
        fgs = fgs
            .into_iter()
            .flat_map(|(f, g)| {
                pairs.iter().map(move |&(a, b)| {
                    let (mut f, mut g) = (f.clone(), g.clone());
                    f.push(a);
                    g.push(b);
                    (f, g)
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for (f, g) in fgs {
        for (l, lprime) in [(1, 1), (1, 2), (2, 2)] {
            out.push(Bounds::new(f.clone(), g.clone(), k, l, lprime).unwrap());
        }
    }
    out
}

/// Supports of k-regular packings whose forced root counts meet the bounds.
fn admissible(supports: &[(ElementSet, Vec<usize>)], b: &Bounds) -> Vec<ElementSet> {
    supports
        .iter()
        .filter(|(_, roots)| {
            let total: i64 = roots.iter().map(|&r| r as i64).sum();
            roots.iter().enumerate().all(|(v, &r)| b.f[v] <= r as i64 && r as i64 <= b.g[v]) && b.l <= total && total <= b.lprime
        })
        .map(|s| s.0)
        .collect()
}

fn criterion_7(t: &mut Tally) -> Result<()> {
    for g in support_grid() {
        for k in 1..=2 {
            let supports = packing_supports(&g, k as usize, CAP)?;
            for b in bounds_grid(g.n(), k) {
                let poly = build_t(&g, &b)?;
                let mut points = Vec::new();
                let mut forms_agree = true;
                for z in poly.ground.all().subsets() {
                    let inside = poly.contains_by_definition(z)?;
                    forms_agree &= inside == poly.contains(z)?;
                    if inside {
                        points.push(z);
                    }
                }
                let packs = admissible(&supports, &b);
                t.expect(points == packs && forms_agree, || {
                    format!("{} {b:?}: points {points:?}, packings {packs:?}, forms agree {forms_agree}", describe(&g))
                });
            }
        }
    }
    Ok(())
}

fn criterion_8(t: &mut Tally) -> Result<()> {
    for g in support_grid() {
        for k in 1..=2 {
            for b in bounds_grid(g.n(), k) {
                let inst = Instance::new(g.clone()).with_bounds(b.clone())?;
                let holds = evaluate(ConditionId::Main, &inst, CAP)?.holds();
                let nonempty = feasible(&build_t(&g, &b)?, CAP)?.holds();
                let packed = main_pack(&g, &b, CAP)?.found();
                let verified = match &packed {
                    Some(p) => packing_ok(&g, p, &PackingSpec::bounded(b.clone()))?,
                    None => true,
                };
                t.expect(holds == nonempty && holds == packed.is_some() && verified, || {
                    format!("{} {b:?}: condition {holds}, polyhedron {nonempty}, packed {}", describe(&g), packed.is_some())
                });
            }
        }
    }
    Ok(())
}

fn random(stream: u64, id: u64, cfg: &GenConfig) -> Instance {
    gen::random_instance(&mut gen::rng_for(SEED + stream, id), cfg)
}

fn same_verdict(t: &mut Tally, inst: &Instance, a: ConditionId, b: ConditionId) -> Result<()> {
    let (x, y) = (evaluate(a, inst, CAP)?.holds(), evaluate(b, inst, CAP)?.holds());
    t.expect(x == y, || format!("{}: {} {x}, {} {y}", inst.to_json(), a.name(), b.name()));
    Ok(())
}

fn criterion_9(t: &mut Tally) -> Result<()> {
    let hyper = GenConfig::mixed_hypergraph(4);
    let di = GenConfig::digraph(4);
    for id in 0..RANDOM_INSTANCES {
        let mut inst = random(1, id, &hyper);
        let mut b = inst.bounds.clone().unwrap();
        b.l = b.k;
        b.lprime = b.k;
        inst.bounds = Some(b);
        same_verdict(t, &inst, ConditionId::Main, ConditionId::Hsz)?;

        let inst = random(2, id, &di);
        same_verdict(t, &inst, ConditionId::Main, ConditionId::BercziFrank)?;

        let inst = random(3, id, &di).with_matroid(MatroidDoc::Free)?;
        same_verdict(t, &inst, ConditionId::Kiraly, ConditionId::Kkt)?;

        let inst = random(4, id, &di);
        same_verdict(t, &inst, ConditionId::GyMixed, ConditionId::GyDigraph)?;

        let inst = random(5, id, &di);
        let roots: Vec<i64> = inst.roots()?.counts().iter().map(|&c| c as i64).collect();
        let total = roots.iter().sum();
        let inst = inst.with_bounds(Bounds::new(roots.clone(), roots, total, total, total)?)?;
        same_verdict(t, &inst, ConditionId::FrankCai, ConditionId::Edmonds)?;
    }
    Ok(())
}

fn criterion_10(t: &mut Tally) -> Result<()> {
    let di = GenConfig::digraph(4);
    let mixed = GenConfig::mixed_graph(4);
    // small enough that the pairwise g-polymatroid checks stay cheap
    let small = GenConfig { max_elements: 4, ..GenConfig::mixed_hypergraph(3) };
    for id in 0..RANDOM_INSTANCES {
        let inst = random(10, id, &di);
        let g = &inst.graph;
        let roots = inst.roots()?;
        let m = inst.matroid()?;
        t.expect(check_rank_axioms(m, CAP)?.is_none(), || format!("{}: rank axioms", inst.to_json()));
        let rank = |x: VertexSet| m.rank(roots.restrict(x)).unwrap() as i64;
        for x in g.vertices().subsets() {
            let pieces = scc_projection(g, x);
            let split: usize = pieces.iter().map(|&(_, xj)| g.in_degree(xj)).sum();
            t.expect(g.in_degree(x) >= split, || format!("{}: in-degree split fails on {x:?}", inst.to_json()));
            let lhs: i64 = pieces.iter().map(|&(c, xj)| rank(g.reach_to(c).unwrap()) - rank(xj)).sum();
            let rhs = rank(g.reach_to(x)?) - rank(x);
            t.expect(lhs >= rhs, || format!("{}: rank split fails on {x:?}", inst.to_json()));
        }

        let mut rng = gen::rng_for(SEED + 11, id);
        let g = gen::random_graph(&mut rng, &mixed);
        let h = gen::random_supermodular(&mut rng, g.n());
        let full = g.vertices();
        for c in g.scc_condense() {
            if g.e_count(full - c) != 0 {
                continue;
            }
            let h2 = compute_h2(&g, &h, c, CAP)?;
            for x in c.subsets().skip(1) {
                for y in c.subsets().skip(1) {
                    if !x.intersects(y) {
                        continue;
                    }
                    let v = |s: VertexSet| h2.value(s).unwrap();
                    t.expect(v(x) + v(y) <= v(x & y) + v(x | y), || {
                        format!("{}: h2 not supermodular on {x:?} {y:?}", describe(&g))
                    });
                }
            }
        }

        let inst = random(12, id, &small);
        let poly = build_t(&inst.graph, inst.bounds()?)?;
        if poly.ground.len() > 8 {
            continue;
        }
        let mut parts: Vec<_> = poly.pieces.iter().flatten().cloned().collect();
        parts.extend(poly.sum.clone());
        parts.extend(poly.cut.clone());
        for q in parts {
            let ok = q.check_invariants(CAP).is_ok();
            t.expect(ok, || format!("{}: g-polymatroid axioms fail on {q:?}", inst.to_json()));
        }
    }
    Ok(())
}

type Criterion = fn(&mut Tally) -> Result<()>;

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("spanning packings vs cut condition", criterion_1),
        ("reachability packings vs cut condition", criterion_2),
        ("matroid-reachability packings vs both conditions", criterion_3),
        ("mixed orientation vs exhaustive search", criterion_4),
        ("mixed matroid-reachability packing vs condition", criterion_5),
        ("extended matroid rank formula", criterion_6),
        ("support polyhedron points vs packings", criterion_7),
        ("bounded packing vs condition vs nonemptiness", criterion_8),
        ("reduction identities on random instances", criterion_9),
        ("structural invariants on random instances", criterion_10),
    ];
    let wanted: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let number = i + 1;
        if !wanted.is_empty() && !wanted.contains(&number) {
            continue;
        }
        let start = Instant::now();
        let mut tally = Tally::default();
        let outcome = run(&mut tally);
        let secs = start.elapsed().as_secs_f64();
        let pass = outcome.is_ok() && tally.mismatches == 0;
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {number:2} {verdict} {name}: {} checks, {} mismatches, {secs:.1}s",
            tally.checked, tally.mismatches
        );
        if let Err(e) = outcome {
            println!("    error: {e}");
        }
        for s in &tally.shown {
            println!("    {s}");
        }
        if !pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

