use proptest::prelude::*;

use hyperarb::conditions::{evaluate, scc_projection, ConditionId, Outcome, Witness};
use hyperarb::gen::{self, GenConfig};
use hyperarb::gpoly::{build_t, find_integer_point, intersect_plank, minkowski_sum, GPoly, Plank};
use hyperarb::matroid::{check_rank_axioms, ExtendedGround};
use hyperarb::orientation::{
    exhaustive_frank_orient, exhaustive_mixed_orient, frank_orient, mixed_orient, reach_cover_violation,
};
use hyperarb::packing::{main_pack, packing_supports, Packing};
use hyperarb::{ElementSet, Instance, Matroid, MatroidDoc, MixedHypergraph};

const CAP: u64 = 50_000_000;

fn instance(seed: u64, cfg: &GenConfig) -> Instance {
    gen::random_instance(&mut gen::rng_for(seed, 0), cfg)
}

/// Denser than the fuzz distribution so that most draws carry several
/// extended elements.
fn dense(max_elements: usize) -> GenConfig {
    GenConfig { arc_p: 0.5, hyperedge_p: 0.5, dyperedge_p: 0.3, max_elements, ..GenConfig::mixed_hypergraph(4) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn instance_json_round_trip(seed in any::<u64>()) {
        let mut rng = gen::rng_for(seed, 1);
        let inst = gen::random_instance(&mut rng, &GenConfig::mixed_hypergraph(4));
        let h = gen::random_supermodular(&mut rng, inst.n());
        let inst = inst.with_h(h.values().to_vec()).unwrap();
        prop_assert_eq!(Instance::from_json(&inst.to_json()).unwrap(), inst);
    }

    #[test]
    fn packings_from_the_pipeline_are_regular_independent_and_round_trip(seed in any::<u64>()) {
        let inst = instance(seed, &dense(4));
        let b = inst.bounds().unwrap();
        if let Outcome::Found(p) = main_pack(&inst.graph, b, CAP).unwrap() {
            let back = Packing::from_json(&inst, &p.to_json(&inst)).unwrap();
            prop_assert_eq!(&back, &p);

            // the oriented elements are independent in the extended matroid
            let z = p.extended_support(&inst.graph).unwrap();
            let k = b.k as usize;
            prop_assert!(Matroid::extended(&inst.graph, k).unwrap().is_independent(z).unwrap());

            // every vertex is in k members, and is the root of k - d⁻(v) of them
            let ground = ExtendedGround::new(&inst.graph).unwrap();
            let roots = p.root_counts(inst.n());
            for v in 0..inst.n() {
                prop_assert_eq!(p.coverage(inst.n())[v], k);
                prop_assert_eq!(roots[v], k - ground.in_degree(z, v));
            }
        }
    }

    #[test]
    fn unit_vectors_under_the_rank_are_independent_sets(seed in any::<u64>(), k in 1usize..=2) {
        let g = gen::random_graph(&mut gen::rng_for(seed, 2), &dense(4));
        let m = Matroid::extended(&g, k).unwrap();
        prop_assume!(m.len() <= 8);
        let rank = m.rank_table(CAP).unwrap();
        for z in m.ground().subsets() {
            let under = m.ground().subsets().all(|y| (z & y).len() as u32 <= rank[y.0 as usize]);
            prop_assert_eq!(under, m.is_independent(z).unwrap());
        }
    }

    #[test]
    fn polyhedron_points_are_packing_supports(seed in any::<u64>()) {
        let inst = instance(seed, &dense(5));
        let b = inst.bounds().unwrap();
        let t = build_t(&inst.graph, b).unwrap();
        prop_assume!(t.ground.len() <= 10);
        let mut points = Vec::new();
        for z in t.ground.all().subsets() {
            prop_assert_eq!(t.shortfall(z), t.shortfall_rewritten(z));
            if t.contains(z).unwrap() {
                points.push(z);
            }
        }
        let supports: Vec<ElementSet> = packing_supports(&inst.graph, b.k as usize, CAP)
            .unwrap()
            .into_iter()
            .filter(|(_, r)| {
                let total: i64 = r.iter().map(|&x| x as i64).sum();
                r.iter().enumerate().all(|(v, &x)| b.f[v] <= x as i64 && x as i64 <= b.g[v])
                    && b.l <= total && total <= b.lprime
            })
            .map(|s| s.0)
            .collect();
        prop_assert_eq!(&points, &supports);
        let fewest = points.iter().copied().min_by_key(|z| z.len());
        prop_assert_eq!(find_integer_point(&t, CAP).unwrap(), fewest);
    }

    #[test]
    fn cut_witnesses_fail_when_recomputed(seed in any::<u64>()) {
        let inst = instance(seed, &GenConfig::digraph(4));
        let g = &inst.graph;
        let s = inst.roots().unwrap();
        for id in [ConditionId::Edmonds, ConditionId::Kkt] {
            if let Some(v) = evaluate(id, &inst, CAP).unwrap().violation {
                let x = match v.witness {
                    Witness::Set(x) => x,
                    w => panic!("expected a set, got {w:?}"),
                };
                let outside = match id {
                    ConditionId::Edmonds => s.len() - s.size_in(x),
                    _ => s.size_in(g.reach_to(x).unwrap()) - s.size_in(x),
                };
                prop_assert!(g.in_degree(x) < outside);
                prop_assert_eq!((v.lhs, v.rhs), (g.in_degree(x) as i64, outside as i64));
            }
        }
    }

    #[test]
    fn projection_postconditions(seed in any::<u64>()) {
        let g = gen::random_graph(&mut gen::rng_for(seed, 3), &GenConfig::digraph(5));
        for x in g.vertices().subsets() {
            for (c, xj) in scc_projection(&g, x) {
                prop_assert!(xj.is_subset(g.reach_to(c).unwrap()));
                prop_assert!(xj.intersects(c));
                prop_assert_eq!(g.in_degree(xj - c), 0);
            }
        }
    }

    #[test]
    fn orientations_match_exhaustive_search(seed in any::<u64>()) {
        let mut rng = gen::rng_for(seed, 4);
        let g = gen::random_graph(&mut rng, &GenConfig::mixed_graph(4));
        let h = gen::random_supermodular(&mut rng, g.n());
        let found = mixed_orient(&g, &h, CAP).unwrap().found();
        prop_assert_eq!(found.is_some(), exhaustive_mixed_orient(&g, &h, CAP).unwrap().is_some());
        if let Some(o) = found {
            prop_assert!(reach_cover_violation(&g, &o.heads, &h).is_none());
        }

        let undirected = MixedHypergraph::new(g.n(), g.hyperedges().to_vec(), vec![]).unwrap();
        let direct = frank_orient(&undirected, &h, CAP).unwrap().is_found();
        prop_assert_eq!(direct, exhaustive_frank_orient(&undirected, &h, CAP).unwrap().is_some());
    }

    #[test]
    fn rank_axioms_hold_for_every_kind(seed in any::<u64>()) {
        let inst = instance(seed, &dense(4));
        prop_assert!(check_rank_axioms(inst.matroid().unwrap(), CAP).unwrap().is_none());
        let g = &inst.graph;
        for doc in [MatroidDoc::Hypergraphic, MatroidDoc::Ksum { k: 2, inner: Box::new(MatroidDoc::Hypergraphic) }, MatroidDoc::Extended { k: 2 }] {
            let m = doc.build(g, 0).unwrap();
            if m.len() <= 10 {
                prop_assert!(check_rank_axioms(&m, CAP).unwrap().is_none(), "{:?}", doc);
            }
        }
    }

    #[test]
    fn reductions_between_conditions(seed in any::<u64>()) {
        let inst = instance(seed, &GenConfig::digraph(4));
        let holds = |id, i: &Instance| evaluate(id, i, CAP).unwrap().holds();

        let free = inst.clone().with_matroid(MatroidDoc::Free).unwrap();
        prop_assert_eq!(holds(ConditionId::GyMixed, &free), holds(ConditionId::Mt, &free));

        // when the roots able to reach each vertex span the roots, the
        // reachability-based condition is the plain matroid-based one
        let m = inst.matroid().unwrap();
        let s = inst.roots().unwrap();
        let g = &inst.graph;
        let r = m.rank(s.all()).unwrap();
        let spans = (0..inst.n()).all(|v| {
            let above = g.reach_to(hyperarb::VertexSet::singleton(v)).unwrap();
            m.rank(s.restrict(above)).unwrap() == r
        });
        if spans {
            prop_assert_eq!(holds(ConditionId::Kiraly, &inst), holds(ConditionId::Dgns, &inst));
        }
    }
}

/// Integer points of a sum of two plank-cut cubes are exactly the sums of
/// integer points of the parts.
#[test]
fn sums_decompose_on_small_grounds() {
    let (ground_a, ground_b) = (ElementSet(0b000111), ElementSet(0b111100));
    let both = ground_a & ground_b;
    for (pa, pb) in [((1, 2), (0, 3)), ((0, 1), (2, 2)), ((3, 3), (1, 4))] {
        let qa = intersect_plank(&GPoly::cube(ground_a), Plank { alpha: pa.0, beta: pa.1 }).unwrap();
        let qb = intersect_plank(&GPoly::cube(ground_b), Plank { alpha: pb.0, beta: pb.1 }).unwrap();
        let sum = minkowski_sum(&[qa.clone(), qb.clone()]).unwrap();
        let points = |q: &GPoly| -> Vec<ElementSet> { q.ground().subsets().filter(|&z| q.contains_set(z)).collect() };
        let (xa, xb) = (points(&qa), points(&qb));
        // x = 1_A + 1_B + 1_C with C inside the overlap enumerates {0,1,2}^6
        // restricted to the union, each vector once
        for ones in (ground_a | ground_b).subsets() {
            for twos in (ones & both).subsets() {
                let x: Vec<i64> = (0..6).map(|i| ones.contains(i) as i64 + twos.contains(i) as i64).collect();
                let decomposes = xa.iter().any(|&a| {
                    xb.iter().any(|&b| (0..6).all(|i| x[i] == a.contains(i) as i64 + b.contains(i) as i64))
                });
                assert_eq!(sum.contains(&x), decomposes, "{x:?} with planks {pa:?} {pb:?}");
            }
        }
    }
}
