//! Mixed hypergraphs, root multisets, bounds, and the counting functions
//! every condition is phrased in.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sets::{ElementSet, VertexSet};

/// A dyperedge `(tails, head)`; an arc when `tails` is a singleton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyperedge {
    pub tails: VertexSet,
    pub head: usize,
}

impl Dyperedge {
    pub fn new(tails: VertexSet, head: usize) -> Result<Self> {
        if tails.is_empty() {
            return Err(Error::Invalid("dyperedge with an empty tail set".into()));
        }
        if tails.contains(head) {
            return Err(Error::Invalid(format!("dyperedge head {head} is one of its tails")));
        }
        Ok(Self { tails, head })
    }

    pub fn arc(tail: usize, head: usize) -> Result<Self> {
        Self::new(VertexSet::singleton(tail), head)
    }

    pub fn is_arc(&self) -> bool {
        self.tails.len() == 1
    }

    pub fn vertices(&self) -> VertexSet {
        self.tails.with(self.head)
    }

    pub fn enters(&self, set: VertexSet) -> bool {
        set.contains(self.head) && !self.tails.is_subset(set)
    }
}

/// A plain arc `tail -> head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
}

/// Replace a dyperedge by the arc from the chosen tail to its head.
pub fn trim(d: &Dyperedge, tail: usize) -> Result<Arc> {
    if !d.tails.contains(tail) {
        return Err(Error::Invalid(format!("{tail} is not a tail of the dyperedge")));
    }
    Ok(Arc { tail, head: d.head })
}

/// Orient a hyperedge towards `head`.
pub fn orient(edge: VertexSet, head: usize) -> Result<Dyperedge> {
    if !edge.contains(head) {
        return Err(Error::Invalid(format!("{head} is not on the hyperedge")));
    }
    Dyperedge::new(edge.without(head), head)
}

pub fn hyperedge_enters(edge: VertexSet, set: VertexSet) -> bool {
    edge.intersects(set) && !edge.is_subset(set)
}

/// An element of a mixed hypergraph, addressed by its stable index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "index")]
pub enum Element {
    Hyperedge(usize),
    Dyperedge(usize),
}

/// Vertices `0..n`, undirected hyperedges and dyperedges. Parallel elements
/// are kept apart by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedHypergraph {
    n: usize,
    hyperedges: Vec<VertexSet>,
    dyperedges: Vec<Dyperedge>,
    // pred[v]: vertices with a single step to v
    pred: Vec<VertexSet>,
    succ: Vec<VertexSet>,
}

impl MixedHypergraph {
    pub fn new(n: usize, hyperedges: Vec<VertexSet>, dyperedges: Vec<Dyperedge>) -> Result<Self> {
        if n > VertexSet::CAPACITY {
            return Err(Error::Invalid(format!("at most {} vertices are supported", VertexSet::CAPACITY)));
        }
        let full = VertexSet::full(n);
        for e in &hyperedges {
            if e.len() < 2 {
                return Err(Error::Invalid("hyperedges need at least two vertices".into()));
            }
            if let Some(v) = (*e - full).first() {
                return Err(Error::VertexOutOfRange(v));
            }
        }
        for d in &dyperedges {
            if let Some(v) = (d.vertices() - full).first() {
                return Err(Error::VertexOutOfRange(v));
            }
            if d.tails.is_empty() || d.tails.contains(d.head) {
                return Err(Error::Invalid("malformed dyperedge".into()));
            }
        }
        let mut pred = vec![VertexSet::EMPTY; n];
        let mut succ = vec![VertexSet::EMPTY; n];
        for e in &hyperedges {
            for v in e.iter() {
                pred[v] |= e.without(v);
                succ[v] |= e.without(v);
            }
        }
        for d in &dyperedges {
            pred[d.head] |= d.tails;
            for t in d.tails.iter() {
                succ[t].insert(d.head);
            }
        }
        Ok(Self { n, hyperedges, dyperedges, pred, succ })
    }

    pub fn digraph(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let ds = arcs.iter().map(|&(t, h)| Dyperedge::arc(t, h)).collect::<Result<Vec<_>>>()?;
        Self::new(n, Vec::new(), ds)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn hyperedges(&self) -> &[VertexSet] {
        &self.hyperedges
    }

    pub fn dyperedges(&self) -> &[Dyperedge] {
        &self.dyperedges
    }

    pub fn element_count(&self) -> usize {
        self.hyperedges.len() + self.dyperedges.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.hyperedges.len())
            .map(Element::Hyperedge)
            .chain((0..self.dyperedges.len()).map(Element::Dyperedge))
    }

    pub fn element_vertices(&self, el: Element) -> VertexSet {
        match el {
            Element::Hyperedge(i) => self.hyperedges[i],
            Element::Dyperedge(i) => self.dyperedges[i].vertices(),
        }
    }

    pub fn is_digraph(&self) -> bool {
        self.hyperedges.is_empty() && self.dyperedges.iter().all(Dyperedge::is_arc)
    }

    pub fn is_dypergraph(&self) -> bool {
        self.hyperedges.is_empty()
    }

    /// Hyperedges of size two and arcs only.
    pub fn is_mixed_graph(&self) -> bool {
        self.hyperedges.iter().all(|e| e.len() == 2) && self.dyperedges.iter().all(Dyperedge::is_arc)
    }

    fn check(&self, set: VertexSet) -> Result<()> {
        match (set - self.vertices()).first() {
            Some(v) => Err(Error::VertexOutOfRange(v)),
            None => Ok(()),
        }
    }

    /// Vertices from which some vertex of `set` is reachable.
    pub fn reach_to(&self, set: VertexSet) -> Result<VertexSet> {
        self.check(set)?;
        Ok(self.closure(set, &self.pred))
    }

    /// Vertices reachable from some vertex of `set`.
    pub fn reach_from(&self, set: VertexSet) -> Result<VertexSet> {
        self.check(set)?;
        Ok(self.closure(set, &self.succ))
    }

    pub(crate) fn reach_to_unchecked(&self, set: VertexSet) -> VertexSet {
        self.closure(set, &self.pred)
    }

    pub(crate) fn reach_from_unchecked(&self, set: VertexSet) -> VertexSet {
        self.closure(set, &self.succ)
    }

    fn closure(&self, start: VertexSet, step: &[VertexSet]) -> VertexSet {
        let mut seen = start;
        let mut frontier = start;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier.iter() {
                next |= step[v];
            }
            frontier = next - seen;
            seen |= next;
        }
        seen
    }

    /// Strongly connected components in a topological order: every dyperedge
    /// leaving a component points to a later one.
    pub fn scc_condense(&self) -> Vec<VertexSet> {
        self.scc_within(self.vertices())
    }

    /// Components of the sub-hypergraph on `active` made of the elements lying
    /// inside `active`.
    pub fn scc_within(&self, active: VertexSet) -> Vec<VertexSet> {
        let sub;
        let g = if self.elements().all(|el| self.element_vertices(el).is_subset(active)) {
            self
        } else {
            sub = self.induced(active).0;
            &sub
        };
        let from: Vec<VertexSet> = (0..self.n).map(|v| g.reach_from_unchecked(VertexSet::singleton(v))).collect();
        let mut left = active;
        let mut comps = Vec::new();
        while let Some(v) = left.first() {
            let comp: VertexSet = from[v].iter().filter(|&u| from[u].contains(v)).collect::<VertexSet>() & active;
            left -= comp;
            comps.push(comp);
        }
        // a component reaching another reaches strictly more vertices
        comps.sort_by_key(|c| (std::cmp::Reverse(from[c.first().unwrap()].len()), c.first()));
        comps
    }

    /// Keep every vertex but only the elements inside `active`; returns the
    /// sub-hypergraph with the original hyperedge and dyperedge indices.
    pub fn induced(&self, active: VertexSet) -> (MixedHypergraph, Vec<usize>, Vec<usize>) {
        let hmap: Vec<usize> = (0..self.hyperedges.len()).filter(|&i| self.hyperedges[i].is_subset(active)).collect();
        let dmap: Vec<usize> =
            (0..self.dyperedges.len()).filter(|&i| self.dyperedges[i].vertices().is_subset(active)).collect();
        let g = MixedHypergraph::new(
            self.n,
            hmap.iter().map(|&i| self.hyperedges[i]).collect(),
            dmap.iter().map(|&i| self.dyperedges[i]).collect(),
        )
        .expect("sub-hypergraph of a valid hypergraph");
        (g, hmap, dmap)
    }

    pub fn enters(&self, el: Element, set: VertexSet) -> bool {
        match el {
            Element::Hyperedge(i) => hyperedge_enters(self.hyperedges[i], set),
            Element::Dyperedge(i) => self.dyperedges[i].enters(set),
        }
    }

    /// Number of elements entering at least one member of `family`.
    pub fn entering_count(&self, family: &[VertexSet]) -> usize {
        self.hyper_entering_count(family) + self.dyper_entering_count(family)
    }

    pub fn hyper_entering_count(&self, family: &[VertexSet]) -> usize {
        self.hyperedges
            .iter()
            .filter(|&&e| family.iter().any(|&x| hyperedge_enters(e, x)))
            .count()
    }

    pub fn dyper_entering_count(&self, family: &[VertexSet]) -> usize {
        self.dyperedges.iter().filter(|d| family.iter().any(|&x| d.enters(x))).count()
    }

    /// Elements entering `set` (hyperedges and dyperedges).
    pub fn e_count(&self, set: VertexSet) -> usize {
        self.entering_count(std::slice::from_ref(&set))
    }

    /// Dyperedges entering `set`.
    pub fn in_degree(&self, set: VertexSet) -> usize {
        self.dyperedges.iter().filter(|d| d.enters(set)).count()
    }

    /// Indices of the dyperedges entering `set`.
    pub fn rho(&self, set: VertexSet) -> Vec<usize> {
        (0..self.dyperedges.len()).filter(|&i| self.dyperedges[i].enters(set)).collect()
    }

    /// The dypergraph obtained by orienting hyperedge `i` towards `heads[i]`;
    /// the oriented hyperedges follow the original dyperedges.
    pub fn oriented(&self, heads: &[usize]) -> Result<MixedHypergraph> {
        if heads.len() != self.hyperedges.len() {
            return Err(Error::Invalid("one head per hyperedge is required".into()));
        }
        let mut ds = self.dyperedges.clone();
        for (e, &h) in self.hyperedges.iter().zip(heads) {
            ds.push(orient(*e, h)?);
        }
        MixedHypergraph::new(self.n, Vec::new(), ds)
    }
}

/// The multiset `S` of roots. Copy `j` of the copies list is a distinct
/// matroid ground element; copies are ordered by vertex.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RootMultiset {
    counts: Vec<usize>,
    copies: Vec<usize>,
}

impl RootMultiset {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        let copies: Vec<usize> = counts.iter().enumerate().flat_map(|(v, &c)| std::iter::repeat_n(v, c)).collect();
        if copies.len() > ElementSet::CAPACITY {
            return Err(Error::Invalid(format!("at most {} root copies are supported", ElementSet::CAPACITY)));
        }
        Ok(Self { counts, copies })
    }

    pub fn empty(n: usize) -> Self {
        Self::new(vec![0; n]).expect("empty multiset")
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn count(&self, v: usize) -> usize {
        self.counts.get(v).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    /// Vertex of copy `j`.
    pub fn vertex_of(&self, copy: usize) -> usize {
        self.copies[copy]
    }

    pub fn copies(&self) -> &[usize] {
        &self.copies
    }

    pub fn all(&self) -> ElementSet {
        ElementSet::full(self.copies.len())
    }

    /// `|S_X|`.
    pub fn size_in(&self, set: VertexSet) -> usize {
        set.iter().map(|v| self.count(v)).sum()
    }

    /// Every copy lying in `set`.
    pub fn restrict(&self, set: VertexSet) -> ElementSet {
        self.copies.iter().enumerate().filter(|(_, &v)| set.contains(v)).map(|(j, _)| j).collect()
    }
}

/// Degree and size bounds `f, g, k, l, l'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub f: Vec<i64>,
    pub g: Vec<i64>,
    pub k: i64,
    pub l: i64,
    pub lprime: i64,
}

impl Bounds {
    pub fn new(f: Vec<i64>, g: Vec<i64>, k: i64, l: i64, lprime: i64) -> Result<Self> {
        if f.len() != g.len() {
            return Err(Error::Invalid("f and g must cover the same vertices".into()));
        }
        if f.iter().chain(&g).any(|&x| x < 0) || k < 0 || l < 0 || lprime < 0 {
            return Err(Error::Invalid("bounds must be nonnegative".into()));
        }
        Ok(Self { f, g, k, l, lprime })
    }

    pub fn uniform(n: usize, f: i64, g: i64, k: i64, l: i64, lprime: i64) -> Result<Self> {
        Self::new(vec![f; n], vec![g; n], k, l, lprime)
    }

    pub fn g_k(&self, v: usize) -> i64 {
        self.g[v].min(self.k)
    }

    pub fn f_of(&self, set: VertexSet) -> i64 {
        set.iter().map(|v| self.f[v]).sum()
    }

    pub fn g_of(&self, set: VertexSet) -> i64 {
        set.iter().map(|v| self.g[v]).sum()
    }

    pub fn g_k_of(&self, set: VertexSet) -> i64 {
        set.iter().map(|v| self.g_k(v)).sum()
    }
}
