//! Seeded random instances for fuzzing and property checks.
//!
//! The vertex count is uniform in `[1, n_max]`. Every potential arc, hyperedge
//! and proper dyperedge is included independently with its own probability;
//! when more than `max_elements` survive, a uniformly random subset of that
//! size is kept. Root multiplicities are uniform in `[0, max_roots]` and
//! matroids are drawn uniformly from free, uniform and partition.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Bounds, Dyperedge, MixedHypergraph};
use crate::instance::{Instance, MatroidDoc};
use crate::orientation::SetFunction;
use crate::sets::VertexSet;

pub type InstanceRng = ChaCha8Rng;

/// Independent stream for instance `id` under `seed`.
pub fn rng_for(seed: u64, id: u64) -> InstanceRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub n_max: usize,
    pub arc_p: f64,
    pub hyperedge_p: f64,
    /// Probability for dyperedges with two or more tails.
    pub dyperedge_p: f64,
    pub max_elements: usize,
    pub max_roots: usize,
    /// Upper end for `k`, `l`, `l'`, `f` and `g`.
    pub max_bound: i64,
}

impl GenConfig {
    pub fn digraph(n_max: usize) -> Self {
        Self { n_max, arc_p: 0.35, hyperedge_p: 0.0, dyperedge_p: 0.0, max_elements: 7, max_roots: 2, max_bound: 2 }
    }

    pub fn mixed_graph(n_max: usize) -> Self {
        Self { arc_p: 0.25, hyperedge_p: 0.3, ..Self::digraph(n_max) }
    }

    pub fn mixed_hypergraph(n_max: usize) -> Self {
        Self { arc_p: 0.2, hyperedge_p: 0.2, dyperedge_p: 0.1, max_elements: 5, ..Self::digraph(n_max) }
    }

    /// Whether the configuration can only produce digraphs.
    pub fn arcs_only(&self) -> bool {
        self.hyperedge_p == 0.0 && self.dyperedge_p == 0.0
    }
}

pub fn random_graph(rng: &mut impl Rng, cfg: &GenConfig) -> MixedHypergraph {
    let n = rng.gen_range(1..=cfg.n_max.max(1));
    let full = VertexSet::full(n);
    let mut hyperedges = Vec::new();
    let mut dyperedges = Vec::new();
    for e in full.subsets() {
        if e.len() >= 2 && rng.gen_bool(cfg.hyperedge_p) {
            hyperedges.push(e);
        }
    }
    for head in 0..n {
        for tails in full.without(head).subsets() {
            let p = match tails.len() {
                0 => continue,
                1 => cfg.arc_p,
                _ => cfg.dyperedge_p,
            };
            if rng.gen_bool(p) {
                dyperedges.push(Dyperedge { tails, head });
            }
        }
    }
    let total = hyperedges.len() + dyperedges.len();
    if total > cfg.max_elements {
        let mut keep: Vec<bool> = (0..total).map(|i| i < cfg.max_elements).collect();
        keep.shuffle(rng);
        let (kh, kd) = keep.split_at(hyperedges.len());
        hyperedges = hyperedges.into_iter().zip(kh).filter(|p| *p.1).map(|p| p.0).collect();
        dyperedges = dyperedges.into_iter().zip(kd).filter(|p| *p.1).map(|p| p.0).collect();
    }
    MixedHypergraph::new(n, hyperedges, dyperedges).expect("generated elements are well formed")
}

pub fn random_roots(rng: &mut impl Rng, n: usize, max_roots: usize) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..=max_roots)).collect()
}

pub fn random_matroid(rng: &mut impl Rng, copies: usize) -> MatroidDoc {
    match rng.gen_range(0..3) {
        0 => MatroidDoc::Free,
        1 => MatroidDoc::Uniform { r: rng.gen_range(0..=copies) },
        _ => {
            let parts = if copies == 0 { 0 } else { rng.gen_range(1..=copies) };
            let mut blocks = vec![Vec::new(); parts];
            for c in 0..copies {
                // the first `parts` copies seed the blocks so none is empty
                let b = if c < parts { c } else { rng.gen_range(0..parts) };
                blocks[b].push(c);
            }
            let capacities = blocks.iter().map(|b| rng.gen_range(0..=b.len())).collect();
            MatroidDoc::Partition { blocks, capacities }
        }
    }
}

/// Bounds with `f <= g` pointwise and `l <= l'`.
pub fn random_bounds(rng: &mut impl Rng, n: usize, max_bound: i64) -> Bounds {
    let k = rng.gen_range(1..=max_bound.max(1));
    let l = rng.gen_range(1..=max_bound.max(1));
    let lprime = rng.gen_range(l..=max_bound.max(l));
    let f: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max_bound)).collect();
    let g = f.iter().map(|&x| rng.gen_range(x..=max_bound.max(x))).collect();
    Bounds::new(f, g, k, l, lprime).expect("generated bounds are nonnegative")
}

/// A graph with roots, a matroid on the root copies and bounds attached.
pub fn random_instance(rng: &mut impl Rng, cfg: &GenConfig) -> Instance {
    let graph = random_graph(rng, cfg);
    let n = graph.n();
    let roots = random_roots(rng, n, cfg.max_roots);
    let copies = roots.iter().sum();
    let matroid = random_matroid(rng, copies);
    let bounds = random_bounds(rng, n, cfg.max_bound);
    Instance::new(graph)
        .with_roots(roots)
        .and_then(|i| i.with_matroid(matroid))
        .and_then(|i| i.with_bounds(bounds))
        .expect("generated instances are consistent")
}

/// A supermodular function on `n` vertices vanishing on the empty set and on
/// the whole vertex set: a random modular function minus the rank of the
/// roots a set spans in a random matroid, shifted to vanish on `V`.
pub fn random_supermodular(rng: &mut impl Rng, n: usize) -> SetFunction {
    let roots = random_roots(rng, n, 2);
    let copies: usize = roots.iter().sum();
    let doc = random_matroid(rng, copies);
    let graph = MixedHypergraph::new(n, vec![], vec![]).expect("empty graph");
    let m = doc.build(&graph, copies).expect("generated matroids build");
    let owner: Vec<usize> = roots.iter().enumerate().flat_map(|(v, &c)| std::iter::repeat_n(v, c)).collect();
    let rank = |x: VertexSet| -> i64 {
        let z = (0..copies).filter(|&c| x.contains(owner[c])).collect();
        m.rank(z).expect("small matroids have ranks") as i64
    };
    let mut w: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=2)).collect();
    let full = VertexSet::full(n);
    if n > 0 {
        w[0] += rank(full) - w.iter().sum::<i64>();
    }
    SetFunction::from_fn(n, |x| x.iter().map(|v| w[v]).sum::<i64>() - rank(x)).expect("h vanishes on the empty set")
}
