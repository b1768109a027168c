//! Orienting the hyperedges of a mixed hypergraph so that every vertex set
//! receives enough in-degree with respect to a set function `h`.

use crate::conditions::{frank_orient_condition, new_orient_condition, Outcome};
use crate::error::{Error, Result};
use crate::graph::{hyperedge_enters, orient, MixedHypergraph};
use crate::sets::{Budget, VertexSet};

/// Supermodularity is checked pair by pair up to this many vertices and
/// trusted above.
pub const EAGER_CHECK_LIMIT: usize = 8;

/// An integer set function on the subsets of `{0, .., n-1}`, stored as a table
/// indexed by bitmask, with `h(∅) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunction {
    n: usize,
    values: Vec<i64>,
}

impl SetFunction {
    pub fn new(n: usize, values: Vec<i64>) -> Result<Self> {
        if values.len() != 1 << n {
            return Err(Error::Invalid(format!("a set function on {n} vertices needs {} values", 1 << n)));
        }
        if values[0] != 0 {
            return Err(Error::Invalid("the set function must vanish on the empty set".into()));
        }
        Ok(Self { n, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(VertexSet) -> i64) -> Result<Self> {
        let mut values = vec![0; 1 << n];
        for x in VertexSet::full(n).submasks() {
            values[x.0 as usize] = f(x);
        }
        Self::new(n, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, x: VertexSet) -> i64 {
        self.values[x.0 as usize]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// First intersecting pair with `h(X) + h(Y) > h(X∩Y) + h(X∪Y)`.
    pub fn intersecting_supermodular_violation(&self) -> Option<(VertexSet, VertexSet)> {
        let full = VertexSet::full(self.n);
        for x in full.subsets() {
            for y in full.subsets() {
                if x.0 >= y.0 || !x.intersects(y) || x.is_subset(y) || y.is_subset(x) {
                    continue;
                }
                if self.value(x) + self.value(y) > self.value(x & y) + self.value(x | y) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// Verify intersecting supermodularity when the ground is small enough.
    pub fn check_declared(&self) -> Result<()> {
        if self.n <= EAGER_CHECK_LIMIT {
            if let Some((x, y)) = self.intersecting_supermodular_violation() {
                return Err(Error::NotIntersectingSupermodular { x, y });
            }
        }
        Ok(())
    }
}

/// A head for every hyperedge, indexed like the hyperedges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    pub heads: Vec<usize>,
}

/// In-degree of `set` once hyperedge `i` points to `heads[i]`, dyperedges
/// included.
pub fn oriented_in_degree(g: &MixedHypergraph, heads: &[usize], set: VertexSet) -> usize {
    let hyper = g
        .hyperedges()
        .iter()
        .zip(heads)
        .filter(|(e, h)| set.contains(**h) && !e.is_subset(set))
        .count();
    hyper + g.in_degree(set)
}

/// First `X` with `d⁻(X) < h(X) - h(P^X)` in the oriented hypergraph, where
/// `P^X` is taken in the unoriented one.
pub fn reach_cover_violation(g: &MixedHypergraph, heads: &[usize], h: &SetFunction) -> Option<VertexSet> {
    g.vertices().subsets().find(|&x| {
        let above = g.reach_to_unchecked(x);
        (oriented_in_degree(g, heads, x) as i64) < h.value(x) - h.value(above)
    })
}

/// First `X ⊆ ground` with `d⁻(X) < h(X)`, counting oriented hyperedges only.
pub fn cover_violation(g: &MixedHypergraph, heads: &[usize], ground: VertexSet, h: &dyn Fn(VertexSet) -> i64) -> Option<VertexSet> {
    ground.subsets().find(|&x| {
        let d = g.hyperedges().iter().zip(heads).filter(|(e, hd)| x.contains(**hd) && !e.is_subset(x)).count();
        (d as i64) < h(x)
    })
}

/// Orient the hyperedges of `g` (no dyperedges) so that `d⁻(X) >= h(X)` for
/// every vertex set, or return the subpartition with too few crossing edges.
pub fn frank_orient(g: &MixedHypergraph, h: &SetFunction, cap: u64) -> Result<Outcome<Orientation>> {
    if h.n() != g.n() {
        return Err(Error::Invalid("set function and hypergraph differ in size".into()));
    }
    h.check_declared()?;
    let full = g.vertices();
    if h.value(full) != 0 {
        return Err(Error::Invalid("the set function must vanish on the full vertex set".into()));
    }
    frank_orient_on(g, full, &|x| h.value(x), cap)
}

/// `frank_orient` restricted to the subsets of `ground`; every hyperedge of `g`
/// must lie inside `ground`.
pub fn frank_orient_on(
    g: &MixedHypergraph,
    ground: VertexSet,
    h: &dyn Fn(VertexSet) -> i64,
    cap: u64,
) -> Result<Outcome<Orientation>> {
    if let Some(v) = frank_orient_condition(g, ground, h, cap)?.violation {
        return Ok(Outcome::Violated(v));
    }
    let edges = g.hyperedges();
    // every X is checked right after its last crossing edge receives a head
    let mut groups: Vec<Vec<(VertexSet, i64, Vec<usize>)>> = vec![Vec::new(); edges.len()];
    for x in ground.subsets() {
        let crossing: Vec<usize> = (0..edges.len()).filter(|&i| hyperedge_enters(edges[i], x)).collect();
        match crossing.last() {
            Some(&last) => groups[last].push((x, h(x), crossing)),
            None if h(x) > 0 => {
                return Err(Error::Inconsistent(format!("{x:?} has no crossing edge yet needs in-degree {}", h(x))))
            }
            None => {}
        }
    }
    let mut budget = Budget::new(cap);
    let mut heads = Vec::with_capacity(edges.len());
    if assign(edges, &groups, &mut heads, &mut budget)? {
        Ok(Outcome::Found(Orientation { heads }))
    } else {
        Err(Error::Inconsistent(
            "no orientation exists although every subpartition has enough crossing edges; the set function is not intersecting supermodular".into(),
        ))
    }
}

fn assign(
    edges: &[VertexSet],
    groups: &[Vec<(VertexSet, i64, Vec<usize>)>],
    heads: &mut Vec<usize>,
    budget: &mut Budget,
) -> Result<bool> {
    let i = heads.len();
    if i == edges.len() {
        return Ok(true);
    }
    for head in edges[i].iter() {
        budget.tick()?;
        heads.push(head);
        let fits = groups[i].iter().all(|(x, need, crossing)| {
            crossing.iter().filter(|&&j| x.contains(heads[j])).count() as i64 >= *need
        });
        if fits && assign(edges, groups, heads, budget)? {
            return Ok(true);
        }
        heads.pop();
    }
    Ok(false)
}

/// The maximizing sets behind `h₂` on a component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H2Witness {
    pub component: VertexSet,
    /// `(X, h₂(X), Y_X)` for every nonempty `X ⊆ C`, in canonical order.
    pub entries: Vec<(VertexSet, i64, VertexSet)>,
}

impl H2Witness {
    pub fn value(&self, x: VertexSet) -> Option<i64> {
        self.entries.iter().find(|e| e.0 == x).map(|e| e.1)
    }
}

/// `h₂(X) = max{h(Y) - d⁻(Y) : Y ⊆ P^C, Y ∩ C = X, e(Y - C) = 0}` for every
/// nonempty `X ⊆ C`; ties go to the first `Y - C` in canonical order.
pub fn compute_h2(g: &MixedHypergraph, h: &SetFunction, comp: VertexSet, cap: u64) -> Result<H2Witness> {
    let mut budget = Budget::new(cap);
    compute_h2_with(g, h, comp, &mut budget)
}

fn compute_h2_with(g: &MixedHypergraph, h: &SetFunction, comp: VertexSet, budget: &mut Budget) -> Result<H2Witness> {
    let outside = g.reach_to_unchecked(comp) - comp;
    let mut extras = Vec::new();
    for w in outside.subsets() {
        budget.tick()?;
        if g.e_count(w) == 0 {
            extras.push(w);
        }
    }
    let mut entries = Vec::new();
    for x in comp.subsets().skip(1) {
        let mut best: Option<(i64, VertexSet)> = None;
        for &w in &extras {
            budget.tick()?;
            let y = x | w;
            let val = h.value(y) - g.in_degree(y) as i64;
            if best.is_none_or(|(b, _)| val > b) {
                best = Some((val, y));
            }
        }
        let (val, y) = best.expect("the empty extension is always a candidate");
        entries.push((x, val, y));
    }
    Ok(H2Witness { component: comp, entries })
}

/// Orient the hyperedges of `g` so that `d⁻(X) >= h(X) - h(P^X)` for every
/// `X`, peeling sink components; on failure return the violated family.
pub fn mixed_orient(g: &MixedHypergraph, h: &SetFunction, cap: u64) -> Result<Outcome<Orientation>> {
    if h.n() != g.n() {
        return Err(Error::Invalid("set function and hypergraph differ in size".into()));
    }
    h.check_declared()?;
    if let Some(v) = new_orient_condition(g, &|x| h.value(x), cap)?.violation {
        return Ok(Outcome::Violated(v));
    }
    let mut heads = vec![usize::MAX; g.hyperedges().len()];
    let mut budget = Budget::new(cap);
    peel(g, h, g.vertices(), &mut heads, &mut budget)?;
    if let Some(x) = reach_cover_violation(g, &heads, h) {
        return Err(Error::Inconsistent(format!("constructed orientation fails on {x:?}")));
    }
    Ok(Outcome::Found(Orientation { heads }))
}

fn peel(g: &MixedHypergraph, h: &SetFunction, active: VertexSet, heads: &mut [usize], budget: &mut Budget) -> Result<()> {
    if active.is_empty() {
        return Ok(());
    }
    let (sub, hmap, _) = g.induced(active);
    let outside = VertexSet::full(g.n());
    let comp = g
        .scc_within(active)
        .into_iter()
        .find(|&c| sub.e_count(outside - c) == 0)
        .ok_or_else(|| Error::Inconsistent("condensation without a sink".into()))?;
    peel(g, h, active - comp, heads, budget)?;

    let h2 = compute_h2_with(g, h, comp, budget)?;
    let top = h.value(g.reach_to_unchecked(comp));
    let shifted = |x: VertexSet| if x.is_empty() { 0 } else { h2.value(x).unwrap() - top };
    if shifted(comp) != 0 {
        return Err(Error::Inconsistent(format!(
            "shifted function is {} on component {comp:?} instead of 0; the set function is not intersecting supermodular",
            shifted(comp)
        )));
    }
    let inside: Vec<usize> = hmap.into_iter().filter(|&i| g.hyperedges()[i].is_subset(comp)).collect();
    let local = MixedHypergraph::new(g.n(), inside.iter().map(|&i| g.hyperedges()[i]).collect(), Vec::new())?;
    let remaining = budget.cap().saturating_sub(budget.used());
    match frank_orient_on(&local, comp, &shifted, remaining)? {
        Outcome::Found(o) => {
            for (&i, &head) in inside.iter().zip(&o.heads) {
                heads[i] = head;
            }
            Ok(())
        }
        Outcome::Violated(v) => Err(Error::Inconsistent(format!(
            "component {comp:?} fails the subpartition inequality ({} < {}) although the family condition holds",
            v.lhs, v.rhs
        ))),
    }
}

/// The augmented instance whose solutions restrict to solutions of
/// `frank_orient`: a new vertex `s` joined by `m` edges, `h'({s}) = m`.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub graph: MixedHypergraph,
    pub h: SetFunction,
    pub m: i64,
    /// Number of connected components of the original graph.
    pub components: usize,
    /// `max{h(X) + h(Y) - h(X ∪ Y)}` over disjoint `X, Y`.
    pub overlap: i64,
}

pub fn reduce_frank_to_new(g: &MixedHypergraph, h: &SetFunction) -> Result<Reduction> {
    if !g.dyperedges().is_empty() {
        return Err(Error::Unsupported("the reduction takes an undirected hypergraph".into()));
    }
    if h.n() != g.n() {
        return Err(Error::Invalid("set function and hypergraph differ in size".into()));
    }
    h.check_declared()?;
    let n = g.n();
    let full = g.vertices();
    if h.value(full) != 0 {
        return Err(Error::Invalid("the set function must vanish on the full vertex set".into()));
    }
    if n + 1 > VertexSet::CAPACITY {
        return Err(Error::Invalid("no room for the extra vertex".into()));
    }
    let comps = g.scc_condense();
    let mut overlap = 0;
    for x in full.subsets() {
        for y in (full - x).subsets() {
            overlap = overlap.max(h.value(x) + h.value(y) - h.value(x | y));
        }
    }
    let m = overlap.max(comps.len() as i64);
    let s = n;
    let mut edges = g.hyperedges().to_vec();
    let mut lows: Vec<usize> = comps.iter().map(|c| c.first().unwrap()).collect();
    lows.sort_unstable();
    for &v in &lows {
        edges.push(VertexSet::from_iter([v, s]));
    }
    for _ in lows.len() as i64..m {
        edges.push(VertexSet::from_iter([0, s]));
    }
    let graph = MixedHypergraph::new(n + 1, edges, Vec::new())?;
    let single = VertexSet::singleton(s);
    let hp = SetFunction::from_fn(n + 1, |x| if x == single { m } else { h.value(x.without(s)) })?;
    Ok(Reduction { graph, h: hp, m, components: comps.len(), overlap })
}

/// `frank_orient` answered through the reduction and `mixed_orient`.
pub fn frank_orient_via_reduction(g: &MixedHypergraph, h: &SetFunction, cap: u64) -> Result<Outcome<Orientation>> {
    let red = reduce_frank_to_new(g, h)?;
    match mixed_orient(&red.graph, &red.h, cap)? {
        Outcome::Found(o) => {
            let original = g.hyperedges().len();
            if o.heads[original..].iter().any(|&head| head != g.n()) {
                return Err(Error::Inconsistent("an edge at the extra vertex points away from it".into()));
            }
            Ok(Outcome::Found(Orientation { heads: o.heads[..original].to_vec() }))
        }
        Outcome::Violated(_) => match frank_orient_condition(g, g.vertices(), &|x| h.value(x), cap)?.violation {
            Some(v) => Ok(Outcome::Violated(v)),
            None => Err(Error::Inconsistent("the reduced instance fails although the original condition holds".into())),
        },
    }
}

/// Every orientation in lexicographic order of heads.
pub fn all_orientations(g: &MixedHypergraph) -> impl Iterator<Item = Vec<usize>> + '_ {
    let edges = g.hyperedges();
    let total: usize = edges.iter().map(|e| e.len()).product();
    (0..total).map(move |mut code| {
        let mut heads = vec![0; edges.len()];
        for i in (0..edges.len()).rev() {
            let size = edges[i].len();
            heads[i] = edges[i].iter().nth(code % size).unwrap();
            code /= size;
        }
        heads
    })
}

/// First orientation (lexicographically) with `d⁻(X) >= h(X) - h(P^X)` for
/// all `X`, by trying them all.
pub fn exhaustive_mixed_orient(g: &MixedHypergraph, h: &SetFunction, cap: u64) -> Result<Option<Orientation>> {
    let mut budget = Budget::new(cap);
    for heads in all_orientations(g) {
        budget.tick()?;
        if reach_cover_violation(g, &heads, h).is_none() {
            return Ok(Some(Orientation { heads }));
        }
    }
    Ok(None)
}

/// First orientation with `d⁻(X) >= h(X)` for all `X`, by trying them all.
pub fn exhaustive_frank_orient(g: &MixedHypergraph, h: &SetFunction, cap: u64) -> Result<Option<Orientation>> {
    let mut budget = Budget::new(cap);
    for heads in all_orientations(g) {
        budget.tick()?;
        if cover_violation(g, &heads, g.vertices(), &|x| h.value(x)).is_none() {
            return Ok(Some(Orientation { heads }));
        }
    }
    Ok(None)
}

/// The dypergraph obtained by applying an orientation.
pub fn apply(g: &MixedHypergraph, o: &Orientation) -> Result<MixedHypergraph> {
    for (e, &head) in g.hyperedges().iter().zip(&o.heads) {
        orient(*e, head)?;
    }
    g.oriented(&o.heads)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::Witness;
    use crate::graph::Dyperedge;

    fn vs(items: &[usize]) -> VertexSet {
        items.iter().copied().collect()
    }

    fn edge_ab() -> MixedHypergraph {
        MixedHypergraph::new(2, vec![vs(&[0, 1])], vec![]).unwrap()
    }

    #[test]
    fn frank_examples() {
        let zero = SetFunction::new(2, vec![0; 4]).unwrap();
        assert!(frank_orient(&edge_ab(), &zero, 1000).unwrap().is_found());

        let h = SetFunction::new(2, vec![0, 1, -5, 0]).unwrap();
        let o = frank_orient(&edge_ab(), &h, 1000).unwrap().found().unwrap();
        assert_eq!(o.heads, vec![0]);

        let h = SetFunction::new(2, vec![0, 1, 1, 0]).unwrap();
        match frank_orient(&edge_ab(), &h, 1000).unwrap() {
            Outcome::Violated(v) => {
                assert_eq!(v.witness, Witness::Subpartition(vec![vs(&[0]), vs(&[1])]));
                assert_eq!((v.lhs, v.rhs), (1, 2));
            }
            Outcome::Found(_) => panic!("expected a violation"),
        }
    }

    #[test]
    fn mixed_examples() {
        let digraph = MixedHypergraph::digraph(2, &[(0, 1)]).unwrap();
        let h = SetFunction::new(2, vec![0, -1, 0, -1]).unwrap();
        assert_eq!(mixed_orient(&digraph, &h, 1000).unwrap().found().unwrap().heads, Vec::<usize>::new());

        // h = -|S_X| with S = {a}
        let o = mixed_orient(&edge_ab(), &h, 1000).unwrap().found().unwrap();
        assert_eq!(o.heads, vec![1]);
    }

    #[test]
    fn h2_on_strongly_connected_is_forced() {
        let g = MixedHypergraph::digraph(2, &[(0, 1), (1, 0)]).unwrap();
        let h = SetFunction::new(2, vec![0, 3, 1, 2]).unwrap();
        let w = compute_h2(&g, &h, vs(&[0, 1]), 1000).unwrap();
        for (x, val, y) in w.entries {
            assert_eq!(y, x);
            assert_eq!(val, h.value(x) - g.in_degree(x) as i64);
        }
    }

    #[test]
    fn h2_may_extend_upwards() {
        let g = MixedHypergraph::digraph(2, &[(0, 1)]).unwrap();
        let h = SetFunction::new(2, vec![0, 0, 0, 10]).unwrap();
        let w = compute_h2(&g, &h, vs(&[1]), 1000).unwrap();
        assert_eq!(w.entries, vec![(vs(&[1]), 10, vs(&[0, 1]))]);
    }

    #[test]
    fn reduction_examples() {
        let two = MixedHypergraph::new(2, vec![], vec![]).unwrap();
        let red = reduce_frank_to_new(&two, &SetFunction::new(2, vec![0; 4]).unwrap()).unwrap();
        assert_eq!((red.components, red.overlap, red.m), (2, 0, 2));
        assert_eq!(red.graph.hyperedges(), &[vs(&[0, 2]), vs(&[1, 2])]);

        let h = SetFunction::new(2, vec![0, 1, -5, 0]).unwrap();
        let red = reduce_frank_to_new(&edge_ab(), &h).unwrap();
        assert_eq!(red.m, 1);
        let o = frank_orient_via_reduction(&edge_ab(), &h, 10_000).unwrap().found().unwrap();
        assert_eq!(o.heads, vec![0]);
    }

    #[test]
    fn property_failures_are_reported() {
        assert!(SetFunction::new(1, vec![1, 0]).is_err());
        let bad = SetFunction::new(3, vec![0, 0, 0, 5, 0, 0, 5, 0]).unwrap();
        assert!(matches!(bad.check_declared(), Err(Error::NotIntersectingSupermodular { .. })));
        let g = MixedHypergraph::new(3, vec![vs(&[0, 1])], vec![Dyperedge::arc(1, 2).unwrap()]).unwrap();
        assert!(matches!(mixed_orient(&g, &bad, 1000), Err(Error::NotIntersectingSupermodular { .. })));
    }
}
