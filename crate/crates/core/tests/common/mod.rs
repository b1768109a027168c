//! Exhaustive grids of small instances shared by the integration tests.

#![allow(dead_code)]

use hyperarb::graph::Dyperedge;
use hyperarb::{MatroidDoc, MixedHypergraph, VertexSet};

/// One element a grid may place: a hyperedge or a dyperedge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Hyper(VertexSet),
    Dyper(Dyperedge),
}

impl Kind {
    /// Number of elements it contributes to the extended ground.
    pub fn weight(self) -> usize {
        match self {
            Kind::Hyper(e) => e.len(),
            Kind::Dyper(_) => 1,
        }
    }

    fn permuted(self, perm: &[usize]) -> Kind {
        let map = |s: VertexSet| s.iter().map(|v| perm[v]).collect::<VertexSet>();
        match self {
            Kind::Hyper(e) => Kind::Hyper(map(e)),
            Kind::Dyper(d) => Kind::Dyper(Dyperedge { tails: map(d.tails), head: perm[d.head] }),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub arcs: bool,
    /// Only hyperedges of size two.
    pub edges: bool,
    pub hyperedges: bool,
    /// Dyperedges with two or more tails.
    pub dyperedges: bool,
}

pub const DIGRAPH: Shape = Shape { arcs: true, edges: false, hyperedges: false, dyperedges: false };
pub const MIXED_GRAPH: Shape = Shape { arcs: true, edges: true, hyperedges: false, dyperedges: false };
pub const MIXED_HYPERGRAPH: Shape = Shape { arcs: true, edges: true, hyperedges: true, dyperedges: true };

pub fn kinds(n: usize, shape: Shape) -> Vec<Kind> {
    let full = VertexSet::full(n);
    let mut out = Vec::new();
    for e in full.subsets() {
        if (e.len() == 2 && shape.edges) || (e.len() > 2 && shape.hyperedges) {
            out.push(Kind::Hyper(e));
        }
    }
    for head in 0..n {
        for tails in full.without(head).subsets() {
            if (tails.len() == 1 && shape.arcs) || (tails.len() > 1 && shape.dyperedges) {
                out.push(Kind::Dyper(Dyperedge { tails, head }));
            }
        }
    }
    out
}

fn build(n: usize, kinds: &[Kind], pick: &[usize]) -> MixedHypergraph {
    let mut hyper = Vec::new();
    let mut dyper = Vec::new();
    for &i in pick {
        match kinds[i] {
            Kind::Hyper(e) => hyper.push(e),
            Kind::Dyper(d) => dyper.push(d),
        }
    }
    MixedHypergraph::new(n, hyper, dyper).unwrap()
}

fn multisets(types: usize, max_len: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
    out.push(cur.clone());
    if cur.len() == max_len {
        return;
    }
    let from = cur.last().copied().unwrap_or(0);
    for t in from..types {
        cur.push(t);
        multisets(types, max_len, out, cur);
        cur.pop();
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !cur.contains(&v) {
                cur.push(v);
                go(n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut out);
    out
}

/// Every graph on `1..=n_max` vertices whose elements form a multiset of at
/// most `max_elements` allowed kinds with extended weight at most
/// `max_weight`. With `up_to_iso`, only the lexicographically least
/// relabelling of each graph is kept.
pub fn graphs(n_max: usize, max_elements: usize, max_weight: usize, shape: Shape, up_to_iso: bool) -> Vec<MixedHypergraph> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        let ks = kinds(n, shape);
        let perms = permutations(n);
        let index = |k: Kind| ks.iter().position(|&x| x == k).unwrap();
        let mut all = Vec::new();
        multisets(ks.len(), max_elements, &mut all, &mut Vec::new());
        for pick in all {
            if pick.iter().map(|&i| ks[i].weight()).sum::<usize>() > max_weight {
                continue;
            }
            if up_to_iso {
                let least = perms.iter().all(|p| {
                    let mut image: Vec<usize> = pick.iter().map(|&i| index(ks[i].permuted(p))).collect();
                    image.sort_unstable();
                    image >= pick
                });
                if !least {
                    continue;
                }
            }
            out.push(build(n, &ks, &pick));
        }
    }
    out
}

/// Root counts per vertex with at most `max_total` roots in all.
pub fn root_vectors(n: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0; n]];
    let mut frontier = out.clone();
    for _ in 0..max_total {
        let mut next = Vec::new();
        for r in &frontier {
            // grow at or after the last nonzero vertex so each multiset appears once
            let from = r.iter().rposition(|&c| c > 0).unwrap_or(0);
            for v in from..n {
                let mut grown = r.clone();
                grown[v] += 1;
                next.push(grown);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Free, uniform of rank 0 to 2, and every partition matroid on `copies`
/// elements.
pub fn matroid_docs(copies: usize) -> Vec<MatroidDoc> {
    let mut out = vec![MatroidDoc::Free];
    for r in 0..=2 {
        out.push(MatroidDoc::Uniform { r });
    }
    for blocks in set_partitions(copies) {
        let mut caps = vec![Vec::new()];
        for b in &blocks {
            caps = caps
                .into_iter()
                .flat_map(|c: Vec<usize>| {
                    (0..=b.len()).map(move |x| {
                        let mut c = c.clone();
                        c.push(x);
                        c
                    })
                })
                .collect();
        }
        for capacities in caps {
            out.push(MatroidDoc::Partition { blocks: blocks.clone(), capacities });
        }
    }
    out
}

fn set_partitions(m: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for e in 0..m {
        let mut next = Vec::new();
        for p in out {
            for b in 0..=p.len() {
                let mut q = p.clone();
                if b == p.len() {
                    q.push(vec![e]);
                } else {
                    q[b].push(e);
                }
                next.push(q);
            }
        }
        out = next;
    }
    out
}

#[test]
fn grid_sizes() {
    // 3 vertices have 6 arc kinds; multisets of at most 4 of them number C(10, 4)
    assert_eq!(graphs(3, 4, usize::MAX, DIGRAPH, false).iter().filter(|g| g.n() == 3).count(), 210);
    assert_eq!(root_vectors(3, 2).len(), 10);
    // free, three uniform, one partition on nothing
    assert_eq!(matroid_docs(0).len(), 5);
    // partitions of two copies: one block with capacity 0..=2, two blocks with 2x2
    assert_eq!(matroid_docs(2).len(), 4 + 3 + 4);
    // every 2-vertex digraph with one arc is isomorphic to a -> b
    assert_eq!(graphs(2, 1, usize::MAX, DIGRAPH, true).iter().filter(|g| g.n() == 2).count(), 2);
}
