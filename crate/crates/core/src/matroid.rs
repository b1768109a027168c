//! Matroid rank oracles over dense element indices.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::graph::{Dyperedge, MixedHypergraph};
use crate::sets::{partitions, Budget, ElementSet, VertexSet};

/// Entries kept per memo table before it is cleared.
pub const MEMO_BUDGET: usize = 1 << 20;

/// Synchronized independence memo shared by concurrent rank queries.
pub struct Memo(Mutex<HashMap<u64, bool>>);

impl Memo {
    fn new() -> Self {
        Memo(Mutex::new(HashMap::new()))
    }

    fn get(&self, key: u64) -> Option<bool> {
        self.0.lock().unwrap().get(&key).copied()
    }

    fn put(&self, key: u64, value: bool) {
        let mut m = self.0.lock().unwrap();
        if m.len() >= MEMO_BUDGET {
            m.clear();
        }
        m.insert(key, value);
    }
}

/// Lorea's hypergraphic matroid on a list of hyperedges: a set is independent
/// when every nonempty subset spans more vertices than its size.
pub struct HypergraphicMatroid {
    edges: Vec<VertexSet>,
    memo: Memo,
}

impl HypergraphicMatroid {
    pub fn new(edges: Vec<VertexSet>) -> Result<Self> {
        if edges.len() > ElementSet::CAPACITY {
            return Err(Error::Invalid("too many hyperedges for a matroid ground".into()));
        }
        Ok(Self { edges, memo: Memo::new() })
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    fn span(&self, z: ElementSet) -> usize {
        let mut vs = VertexSet::EMPTY;
        for i in z.iter() {
            vs |= self.edges[i];
        }
        vs.len()
    }

    fn independent(&self, z: ElementSet) -> bool {
        if z.is_empty() {
            return true;
        }
        if let Some(b) = self.memo.get(z.0) {
            return b;
        }
        let ok = self.span(z) > z.len() && z.iter().all(|e| self.independent(z.without(e)));
        self.memo.put(z.0, ok);
        ok
    }
}

/// Ground of the extended matroid: every dyperedge of the host, then for each
/// hyperedge `e` its orientations `(e - x, x)` by increasing head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedGround {
    dyperedges: Vec<Dyperedge>,
    origin: Vec<ExtendedOrigin>,
    copies: Vec<ElementSet>,
    n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtendedOrigin {
    Dyperedge(usize),
    Hyperedge(usize),
}

impl ExtendedGround {
    pub fn new(g: &MixedHypergraph) -> Result<Self> {
        let mut dyperedges = Vec::new();
        let mut origin = Vec::new();
        for (i, d) in g.dyperedges().iter().enumerate() {
            dyperedges.push(*d);
            origin.push(ExtendedOrigin::Dyperedge(i));
        }
        let mut copies = Vec::new();
        for (i, e) in g.hyperedges().iter().enumerate() {
            let mut mine = ElementSet::EMPTY;
            for x in e.iter() {
                mine.insert(dyperedges.len());
                dyperedges.push(Dyperedge { tails: e.without(x), head: x });
                origin.push(ExtendedOrigin::Hyperedge(i));
            }
            copies.push(mine);
        }
        if dyperedges.len() > ElementSet::CAPACITY {
            return Err(Error::Invalid("extended ground too large".into()));
        }
        Ok(Self { dyperedges, origin, copies, n: g.n() })
    }

    pub fn len(&self) -> usize {
        self.dyperedges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dyperedges.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn all(&self) -> ElementSet {
        ElementSet::full(self.len())
    }

    pub fn dyperedge(&self, i: usize) -> Dyperedge {
        self.dyperedges[i]
    }

    pub fn dyperedges(&self) -> &[Dyperedge] {
        &self.dyperedges
    }

    pub fn origin(&self, i: usize) -> ExtendedOrigin {
        self.origin[i]
    }

    /// The elements `A_e` of hyperedge `e`.
    pub fn copies_of(&self, hyperedge: usize) -> ElementSet {
        self.copies[hyperedge]
    }

    pub fn hyperedge_count(&self) -> usize {
        self.copies.len()
    }

    pub fn original_dyperedges(&self) -> ElementSet {
        ElementSet::full(self.len() - self.copies.iter().map(|c| c.len()).sum::<usize>())
    }

    /// Elements with head `v`.
    pub fn into_vertex(&self, v: usize) -> ElementSet {
        (0..self.len()).filter(|&i| self.dyperedges[i].head == v).collect()
    }

    pub fn in_degree(&self, z: ElementSet, v: usize) -> usize {
        z.iter().filter(|&i| self.dyperedges[i].head == v).count()
    }

    /// Whether `z` picks at most one orientation of every hyperedge.
    pub fn is_partial_orientation(&self, z: ElementSet) -> bool {
        self.copies.iter().all(|c| (z & *c).len() <= 1)
    }
}

/// The extended k-hypergraphic matroid of a mixed hypergraph.
pub struct ExtendedMatroid {
    ground: ExtendedGround,
    k: usize,
    // k-sum hypergraphic matroid on the host edges: dyperedges as their
    // vertex sets, then the hyperedges
    host: Box<Matroid>,
    host_index: Vec<usize>,
}

impl ExtendedMatroid {
    pub fn new(g: &MixedHypergraph, k: usize) -> Result<Self> {
        let ground = ExtendedGround::new(g)?;
        let mut host_edges: Vec<VertexSet> = g.dyperedges().iter().map(Dyperedge::vertices).collect();
        host_edges.extend(g.hyperedges().iter().copied());
        let nd = g.dyperedges().len();
        let host_index = (0..ground.len())
            .map(|i| match ground.origin(i) {
                ExtendedOrigin::Dyperedge(d) => d,
                ExtendedOrigin::Hyperedge(h) => nd + h,
            })
            .collect();
        let host = Matroid::KSum {
            inner: Box::new(Matroid::Hypergraphic(HypergraphicMatroid::new(host_edges)?)),
            k,
            memo: Memo::new(),
        };
        Ok(Self { ground, k, host: Box::new(host), host_index })
    }

    pub fn ground(&self) -> &ExtendedGround {
        &self.ground
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn independent(&self, z: ElementSet, budget: &mut Budget) -> Result<bool> {
        if !self.ground.is_partial_orientation(z) {
            return Ok(false);
        }
        let host: ElementSet = z.iter().map(|i| self.host_index[i]).collect();
        self.host.is_independent_with(host, budget)
    }

    /// The closed-form rank: minimum over partitions of the vertex set.
    pub fn formula_rank(&self, z: ElementSet, cap: u64) -> Result<usize> {
        Ok(self.formula_rank_with_partition(z, cap)?.0)
    }

    /// The closed-form rank together with the first partition attaining it.
    pub fn formula_rank_with_partition(&self, z: ElementSet, cap: u64) -> Result<(usize, Vec<VertexSet>)> {
        let n = self.ground.n;
        if n > 10 {
            return Err(Error::CapExceeded { cap });
        }
        let mut budget = Budget::new(cap);
        let mut best: Option<(usize, Vec<VertexSet>)> = None;
        for p in partitions(VertexSet::full(n)) {
            budget.tick()?;
            let value = self.partition_value(z, &p);
            if best.as_ref().is_none_or(|(b, _)| value < *b) {
                best = Some((value, p));
            }
        }
        Ok(best.expect("at least one partition"))
    }

    fn partition_value(&self, z: ElementSet, p: &[VertexSet]) -> usize {
        let enters_some = |d: &Dyperedge| p.iter().any(|&x| d.enters(x));
        let mut value = self.k * (self.ground.n - p.len());
        for i in (z & self.ground.original_dyperedges()).iter() {
            if enters_some(&self.ground.dyperedges[i]) {
                value += 1;
            }
        }
        for copies in &self.ground.copies {
            if z.intersects(*copies) {
                let edge = self.ground.dyperedges[copies.first().unwrap()].vertices();
                if p.iter().any(|&x| crate::graph::hyperedge_enters(edge, x)) {
                    value += 1;
                }
            }
        }
        value
    }
}

/// A matroid on ground `0..len()`.
pub enum Matroid {
    Free {
        size: usize,
    },
    Uniform {
        size: usize,
        r: usize,
    },
    Partition {
        block_of: Vec<usize>,
        capacities: Vec<usize>,
    },
    Explicit {
        size: usize,
        independent: HashSet<u64>,
    },
    Hypergraphic(HypergraphicMatroid),
    KSum {
        inner: Box<Matroid>,
        k: usize,
        memo: Memo,
    },
    Extended(ExtendedMatroid),
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Matroid::Free { size } => write!(f, "Free({size})"),
            Matroid::Uniform { size, r } => write!(f, "Uniform({size}, {r})"),
            Matroid::Partition { block_of, capacities } => write!(f, "Partition({block_of:?}, {capacities:?})"),
            Matroid::Explicit { size, independent } => {
                let mut sets: Vec<_> = independent.iter().collect();
                sets.sort();
                write!(f, "Explicit({size}, {sets:?})")
            }
            Matroid::Hypergraphic(h) => write!(f, "Hypergraphic({:?})", h.edges),
            Matroid::KSum { inner, k, .. } => write!(f, "KSum({inner:?}, {k})"),
            Matroid::Extended(x) => write!(f, "Extended({:?}, {})", x.ground.dyperedges, x.k),
        }
    }
}

impl Matroid {
    pub fn free(size: usize) -> Self {
        Matroid::Free { size }
    }

    pub fn uniform(size: usize, r: usize) -> Self {
        Matroid::Uniform { size, r }
    }

    pub fn partition(block_of: Vec<usize>, capacities: Vec<usize>) -> Result<Self> {
        if let Some(&b) = block_of.iter().find(|&&b| b >= capacities.len()) {
            return Err(Error::Invalid(format!("element assigned to missing block {b}")));
        }
        Ok(Matroid::Partition { block_of, capacities })
    }

    /// A matroid given by its independent sets; rejects lists that break the
    /// matroid axioms.
    pub fn explicit(size: usize, sets: &[ElementSet]) -> Result<Self> {
        let m = Self::explicit_unchecked(size, sets)?;
        if let Matroid::Explicit { independent, .. } = &m {
            if !independent.contains(&0) {
                return Err(Error::Invalid("the empty set must be independent".into()));
            }
            for &s in independent {
                for e in ElementSet(s).iter() {
                    if !independent.contains(&ElementSet(s).without(e).0) {
                        return Err(Error::Invalid(format!("independent sets are not closed under removal at {:?}", ElementSet(s))));
                    }
                }
            }
            for &a in independent {
                for &b in independent {
                    let (a, b) = (ElementSet(a), ElementSet(b));
                    if a.len() < b.len() && !(b - a).iter().any(|e| independent.contains(&a.with(e).0)) {
                        return Err(Error::Invalid(format!("exchange fails between {a:?} and {b:?}")));
                    }
                }
            }
        }
        Ok(m)
    }

    /// An explicit independence list taken as is, for probing axiom checks.
    pub fn explicit_unchecked(size: usize, sets: &[ElementSet]) -> Result<Self> {
        let full = ElementSet::full(size);
        if let Some(s) = sets.iter().find(|s| !s.is_subset(full)) {
            return Err(Error::UnknownElement(format!("{:?}", *s - full)));
        }
        Ok(Matroid::Explicit { size, independent: sets.iter().map(|s| s.0).collect() })
    }

    pub fn hypergraphic(edges: Vec<VertexSet>) -> Result<Self> {
        Ok(Matroid::Hypergraphic(HypergraphicMatroid::new(edges)?))
    }

    pub fn k_sum(inner: Matroid, k: usize) -> Self {
        Matroid::KSum { inner: Box::new(inner), k, memo: Memo::new() }
    }

    pub fn extended(g: &MixedHypergraph, k: usize) -> Result<Self> {
        Ok(Matroid::Extended(ExtendedMatroid::new(g, k)?))
    }

    pub fn len(&self) -> usize {
        match self {
            Matroid::Free { size } | Matroid::Uniform { size, .. } | Matroid::Explicit { size, .. } => *size,
            Matroid::Partition { block_of, .. } => block_of.len(),
            Matroid::Hypergraphic(h) => h.edges.len(),
            Matroid::KSum { inner, .. } => inner.len(),
            Matroid::Extended(x) => x.ground.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ground(&self) -> ElementSet {
        ElementSet::full(self.len())
    }

    fn check(&self, z: ElementSet) -> Result<()> {
        match (z - self.ground()).first() {
            Some(e) => Err(Error::UnknownElement(format!("element {e}"))),
            None => Ok(()),
        }
    }

    pub fn is_independent(&self, z: ElementSet) -> Result<bool> {
        self.is_independent_with(z, &mut Budget::default())
    }

    pub fn is_independent_with(&self, z: ElementSet, budget: &mut Budget) -> Result<bool> {
        self.check(z)?;
        match self {
            Matroid::Free { .. } => Ok(true),
            Matroid::Uniform { r, .. } => Ok(z.len() <= *r),
            Matroid::Partition { block_of, capacities } => {
                let mut used = vec![0usize; capacities.len()];
                for e in z.iter() {
                    used[block_of[e]] += 1;
                }
                Ok(used.iter().zip(capacities).all(|(u, c)| u <= c))
            }
            Matroid::Explicit { independent, .. } => Ok(independent.contains(&z.0)),
            Matroid::Hypergraphic(h) => {
                budget.tick()?;
                Ok(h.independent(z))
            }
            Matroid::KSum { inner, k, memo } => {
                if let Some(b) = memo.get(z.0) {
                    return Ok(b);
                }
                let items: Vec<usize> = z.iter().collect();
                let mut bins = vec![ElementSet::EMPTY; *k];
                let ok = split_into(inner, &items, &mut bins, 0, budget)?;
                memo.put(z.0, ok);
                Ok(ok)
            }
            Matroid::Extended(x) => x.independent(z, budget),
        }
    }

    pub fn rank(&self, z: ElementSet) -> Result<usize> {
        self.rank_with(z, &mut Budget::default())
    }

    pub fn rank_with(&self, z: ElementSet, budget: &mut Budget) -> Result<usize> {
        self.check(z)?;
        match self {
            Matroid::Free { .. } => Ok(z.len()),
            Matroid::Uniform { r, .. } => Ok(z.len().min(*r)),
            Matroid::Partition { block_of, capacities } => {
                let mut used = vec![0usize; capacities.len()];
                for e in z.iter() {
                    used[block_of[e]] += 1;
                }
                Ok(used.iter().zip(capacities).map(|(u, c)| (*u).min(*c)).sum())
            }
            // no greedy here: a broken list must show up as a broken rank function
            Matroid::Explicit { independent, .. } => Ok(independent
                .iter()
                .filter(|&&s| ElementSet(s).is_subset(z))
                .map(|&s| ElementSet(s).len())
                .max()
                .unwrap_or(0)),
            _ => {
                let mut basis = ElementSet::EMPTY;
                for e in z.iter() {
                    if self.is_independent_with(basis.with(e), budget)? {
                        basis.insert(e);
                    }
                }
                Ok(basis.len())
            }
        }
    }

    /// Ranks of all `2^len` subsets, indexed by bitmask.
    pub fn rank_table(&self, cap: u64) -> Result<Vec<u32>> {
        let m = self.len();
        if m >= 30 {
            return Err(Error::CapExceeded { cap });
        }
        let mut budget = Budget::new(cap);
        budget.require(1u64 << m)?;
        let mut rank = vec![0u32; 1 << m];
        for mask in 1u64..(1u64 << m) {
            budget.tick()?;
            let z = ElementSet(mask);
            let below = z.iter().map(|e| rank[z.without(e).0 as usize]).max().unwrap_or(0);
            // the rank grows by at most one per element, so only a set whose
            // proper subsets are all full rank can be independent
            rank[mask as usize] = if below as usize == z.len() - 1 && self.is_independent_with(z, &mut budget)? {
                z.len() as u32
            } else {
                below
            };
        }
        Ok(rank)
    }
}

fn split_into(inner: &Matroid, items: &[usize], bins: &mut [ElementSet], at: usize, budget: &mut Budget) -> Result<bool> {
    if at == items.len() {
        return Ok(true);
    }
    let e = items[at];
    for b in 0..bins.len() {
        budget.tick()?;
        let grown = bins[b].with(e);
        if inner.is_independent_with(grown, budget)? {
            let before = bins[b];
            bins[b] = grown;
            if split_into(inner, items, bins, at + 1, budget)? {
                return Ok(true);
            }
            bins[b] = before;
        }
        // bins after the first empty one are interchangeable with it
        if bins[b].is_empty() {
            break;
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    EmptyRank,
    Bounded,
    Monotone,
    UnitIncrease,
    Submodular,
}

/// A failed rank axiom with the witnessing sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub x: ElementSet,
    pub y: ElementSet,
}

/// Check rank(∅) = 0, rank(X) ≤ |X|, monotonicity, unit increase and
/// submodularity over every subset pair; the first violation is returned.
pub fn check_rank_axioms(m: &Matroid, cap: u64) -> Result<Option<AxiomViolation>> {
    let size = m.len();
    if 2 * size >= 60 {
        return Err(Error::CapExceeded { cap });
    }
    let mut budget = Budget::new(cap);
    budget.require(1u64 << (2 * size))?;
    let mut rank = vec![0usize; 1 << size];
    for z in ElementSet::full(size).submasks() {
        rank[z.0 as usize] = m.rank_with(z, &mut budget)?;
    }
    let r = |s: ElementSet| rank[s.0 as usize];
    let violation = |axiom, x, y| Ok(Some(AxiomViolation { axiom, x, y }));
    if r(ElementSet::EMPTY) != 0 {
        return violation(Axiom::EmptyRank, ElementSet::EMPTY, ElementSet::EMPTY);
    }
    for x in ElementSet::full(size).subsets() {
        if r(x) > x.len() {
            return violation(Axiom::Bounded, x, x);
        }
        for e in (ElementSet::full(size) - x).iter() {
            let y = x.with(e);
            if r(y) < r(x) {
                return violation(Axiom::Monotone, x, y);
            }
            if r(y) > r(x) + 1 {
                return violation(Axiom::UnitIncrease, x, y);
            }
        }
    }
    for x in ElementSet::full(size).subsets() {
        for y in ElementSet::full(size).subsets() {
            budget.tick()?;
            if r(x) + r(y) < r(x & y) + r(x | y) {
                return violation(Axiom::Submodular, x, y);
            }
        }
    }
    Ok(None)
}
