//! Generalized polymatroids given by set-function oracles, planks, Minkowski
//! sums, and the polyhedron whose integer points are the packing supports.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicI64, Ordering};
use std::sync::{Arc, Mutex};

use crate::conditions::{Inequality, Verdict, Violation, Witness};
use crate::error::{Error, Result};
use crate::graph::{Bounds, MixedHypergraph};
use crate::matroid::{ExtendedGround, ExtendedMatroid, Matroid};
use crate::sets::{Budget, ElementSet, VertexSet};

pub type SetFn = Arc<dyn Fn(ElementSet) -> i64 + Send + Sync>;

/// Largest ground span memoized in a flat table.
pub const DENSE_MEMO_BITS: usize = 20;
const UNSET: i64 = i64::MIN;

/// `Q(p, b) = {x : p(Z) <= x(Z) <= b(Z) for all Z}` on a finite ground.
#[derive(Clone)]
pub struct GPoly {
    ground: ElementSet,
    p: SetFn,
    b: SetFn,
}

impl fmt::Debug for GPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GPoly({:?})", self.ground)
    }
}

impl GPoly {
    pub fn new(ground: ElementSet, p: SetFn, b: SetFn) -> Self {
        Self { ground, p, b }
    }

    pub fn from_fns(
        ground: ElementSet,
        p: impl Fn(ElementSet) -> i64 + Send + Sync + 'static,
        b: impl Fn(ElementSet) -> i64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(ground, Arc::new(p), Arc::new(b))
    }

    /// The unit cube on `ground`: `p = 0`, `b = |Z|`.
    pub fn cube(ground: ElementSet) -> Self {
        Self::from_fns(ground, |_| 0, |z| z.len() as i64)
    }

    pub fn ground(&self) -> ElementSet {
        self.ground
    }

    pub fn p(&self, z: ElementSet) -> i64 {
        (self.p)(z & self.ground)
    }

    pub fn b(&self, z: ElementSet) -> i64 {
        (self.b)(z & self.ground)
    }

    /// Cache both functions; every later query is a table lookup. Grounds
    /// spread over more than [`DENSE_MEMO_BITS`] positions use a hash map.
    pub fn memoized(&self) -> Self {
        let width = self.ground.last().map_or(0, |i| i + 1);
        let memo = |f: SetFn| -> SetFn {
            if width <= DENSE_MEMO_BITS {
                let table: Vec<AtomicI64> = (0..1usize << width).map(|_| AtomicI64::new(UNSET)).collect();
                Arc::new(move |z: ElementSet| {
                    let slot = &table[z.0 as usize];
                    match slot.load(Ordering::Relaxed) {
                        UNSET => {
                            let v = f(z);
                            slot.store(v, Ordering::Relaxed);
                            v
                        }
                        v => v,
                    }
                })
            } else {
                let table: Mutex<HashMap<u64, i64>> = Mutex::new(HashMap::new());
                Arc::new(move |z: ElementSet| {
                    if let Some(&v) = table.lock().unwrap().get(&z.0) {
                        return v;
                    }
                    let v = f(z);
                    table.lock().unwrap().insert(z.0, v);
                    v
                })
            }
        };
        Self::new(self.ground, memo(self.p.clone()), memo(self.b.clone()))
    }

    /// `p(∅) = b(∅) = 0`, `p` supermodular, `b` submodular, and the cross
    /// inequality `b(X) - p(Y) >= b(X - Y) - p(Y - X)`, over all pairs.
    pub fn check_invariants(&self, cap: u64) -> Result<()> {
        let mut budget = Budget::new(cap);
        let bad = |msg: String| Err(Error::GPolyInvariant(msg));
        if self.p(ElementSet::EMPTY) != 0 || self.b(ElementSet::EMPTY) != 0 {
            return bad("p and b must vanish on the empty set".into());
        }
        let subsets: Vec<ElementSet> = self.ground.subsets().collect();
        budget.require((subsets.len() as u64).saturating_mul(subsets.len() as u64))?;
        for &x in &subsets {
            for &y in &subsets {
                budget.tick()?;
                if self.p(x) + self.p(y) > self.p(x & y) + self.p(x | y) {
                    return bad(format!("p is not supermodular on {x:?}, {y:?}"));
                }
                if self.b(x) + self.b(y) < self.b(x & y) + self.b(x | y) {
                    return bad(format!("b is not submodular on {x:?}, {y:?}"));
                }
                if self.b(x) - self.p(y) < self.b(x - y) - self.p(y - x) {
                    return bad(format!("cross inequality fails on {x:?}, {y:?}"));
                }
            }
        }
        Ok(())
    }

    /// Membership of an integer vector, indexed by element.
    pub fn contains(&self, x: &[i64]) -> bool {
        self.ground.subsets().all(|z| {
            let sum: i64 = z.iter().map(|i| x.get(i).copied().unwrap_or(0)).sum();
            self.p(z) <= sum && sum <= self.b(z)
        })
    }

    /// Membership of the 0/1 vector of `support`.
    pub fn contains_set(&self, support: ElementSet) -> bool {
        support.is_subset(self.ground)
            && self.ground.subsets().all(|z| {
                let sum = (z & support).len() as i64;
                self.p(z) <= sum && sum <= self.b(z)
            })
    }

    /// Some `Z` with `p(Z) > b(Z)`, if any.
    pub fn inverted_pair(&self) -> Option<ElementSet> {
        self.ground.subsets().find(|&z| self.p(z) > self.b(z))
    }
}

/// The plank `K(α, β) = {x : α <= x(S) <= β}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Plank {
    pub alpha: i64,
    pub beta: i64,
}

/// `Q ∩ K`, or `None` when empty (`p <= b`, `α <= β`, `p(S) <= β` and
/// `α <= b(S)` characterize nonemptiness).
pub fn intersect_plank(q: &GPoly, k: Plank) -> Option<GPoly> {
    let s = q.ground;
    if q.inverted_pair().is_some() || k.alpha > k.beta || q.p(s) > k.beta || k.alpha > q.b(s) {
        return None;
    }
    let (p, b) = (q.p.clone(), q.b.clone());
    let (p2, b2) = (q.p.clone(), q.b.clone());
    Some(GPoly::from_fns(
        s,
        move |z| p(z).max(k.alpha - b2(s - z)),
        move |z| b(z).min(k.beta - p2(s - z)),
    ))
}

/// `Σ Q(p_i, b_i) = Q(Σ p_i, Σ b_i)` on the union of the grounds.
pub fn minkowski_sum(parts: &[GPoly]) -> Result<GPoly> {
    if parts.is_empty() {
        return Err(Error::EmptySummand);
    }
    if let Some(i) = parts.iter().position(|q| q.inverted_pair().is_some()) {
        return Err(Error::Invalid(format!("summand {i} is empty")));
    }
    let ground = parts.iter().fold(ElementSet::EMPTY, |acc, q| acc | q.ground);
    let ps: Vec<GPoly> = parts.to_vec();
    let bs = ps.clone();
    Ok(GPoly::from_fns(
        ground,
        move |z| ps.iter().map(|q| q.p(z)).sum(),
        move |z| bs.iter().map(|q| q.b(z)).sum(),
    ))
}

/// The polyhedron of packing supports over the extended ground: per-vertex
/// pieces on in-stars, their sum cut by the member-count plank, and the
/// extended matroid.
pub struct TPolyhedron {
    pub graph: MixedHypergraph,
    pub bounds: Bounds,
    pub ground: ExtendedGround,
    pub matroid: Matroid,
    /// `Q(0, r_v) ∩ K(k - g_k(v), k - f(v))` on the in-star of `v`; `None`
    /// when that intersection is empty.
    pub pieces: Vec<Option<GPoly>>,
    /// Sum of the pieces, when all are nonempty.
    pub sum: Option<GPoly>,
    /// The sum cut by `K(k|V| - l', k|V| - l)`, when nonempty.
    pub cut: Option<GPoly>,
}

impl fmt::Debug for TPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TPolyhedron").field("ground", &self.ground.len()).field("bounds", &self.bounds).finish()
    }
}

pub fn build_t(g: &MixedHypergraph, bounds: &Bounds) -> Result<TPolyhedron> {
    if bounds.f.len() != g.n() {
        return Err(Error::Invalid("bounds must cover every vertex".into()));
    }
    let k = usize::try_from(bounds.k).map_err(|_| Error::Invalid("negative k".into()))?;
    let ground = ExtendedGround::new(g)?;
    let matroid = Matroid::Extended(ExtendedMatroid::new(g, k)?);
    let pieces: Vec<Option<GPoly>> = (0..g.n())
        .map(|v| {
            let star = ground.into_vertex(v);
            let plank = Plank { alpha: bounds.k - bounds.g_k(v), beta: bounds.k - bounds.f[v] };
            intersect_plank(&GPoly::cube(star), plank)
        })
        .collect();
    let sum = match pieces.iter().cloned().collect::<Option<Vec<GPoly>>>() {
        Some(parts) if !parts.is_empty() => Some(minkowski_sum(&parts)?),
        Some(_) => Some(GPoly::from_fns(ElementSet::EMPTY, |_| 0, |_| 0)),
        None => None,
    };
    let kv = bounds.k * g.n() as i64;
    let cut = sum.as_ref().and_then(|s| {
        // the sum lives on the in-stars, which together cover the ground
        let widened = GPoly::new(ground.all(), s.p.clone(), s.b.clone());
        intersect_plank(&widened, Plank { alpha: kv - bounds.lprime, beta: kv - bounds.l }).map(|q| q.memoized())
    });
    Ok(TPolyhedron { graph: g.clone(), bounds: bounds.clone(), ground, matroid, pieces, sum, cut })
}

impl TPolyhedron {
    fn deg(&self, z: ElementSet, v: usize) -> i64 {
        self.ground.in_degree(z, v) as i64
    }

    fn kv(&self) -> i64 {
        self.bounds.k * self.graph.n() as i64
    }

    /// `Σ_v max{0, k - g_k(v) - d⁻_Z(v)}`.
    pub fn shortfall(&self, z: ElementSet) -> i64 {
        let b = &self.bounds;
        (0..self.graph.n()).map(|v| (b.k - b.g_k(v) - self.deg(z, v)).max(0)).sum()
    }

    /// The same quantity as `k|V| - g_k(V) - Σ_v min{d⁻_Z(v), k - g_k(v)}`.
    pub fn shortfall_rewritten(&self, z: ElementSet) -> i64 {
        let b = &self.bounds;
        let n = self.graph.n();
        self.kv() - b.g_k_of(VertexSet::full(n)) - (0..n).map(|v| self.deg(z, v).min(b.k - b.g_k(v))).sum::<i64>()
    }

    /// `k|V| - l' - Σ_v min{d⁻_Z(v), k - f(v)}`.
    pub fn surplus(&self, z: ElementSet) -> i64 {
        let b = &self.bounds;
        self.kv() - b.lprime - (0..self.graph.n()).map(|v| self.deg(z, v).min(b.k - b.f[v])).sum::<i64>()
    }

    /// `p(Z)` written out in closed form.
    pub fn p_closed_form(&self, z: ElementSet) -> i64 {
        let rest = self.ground.all() - z;
        self.shortfall(rest).max(self.surplus(rest))
    }

    /// `b(Z)` written out in closed form.
    pub fn b_closed_form(&self, z: ElementSet) -> i64 {
        let b = &self.bounds;
        let first: i64 = (0..self.graph.n()).map(|v| self.deg(z, v).min(b.k - b.f[v])).sum();
        first.min(self.kv() - b.l - self.shortfall(z))
    }

    /// Per-vertex in-degree window, member-count window and independence:
    /// membership read off the definition of the polyhedron.
    pub fn contains_by_definition(&self, z: ElementSet) -> Result<bool> {
        let b = &self.bounds;
        let n = self.graph.n();
        for v in 0..n {
            let d = self.deg(z, v);
            if d < b.k - b.g_k(v) || d > b.k - b.f[v] {
                return Ok(false);
            }
        }
        let size = z.len() as i64;
        if size < self.kv() - b.lprime || size > self.kv() - b.l {
            return Ok(false);
        }
        self.matroid.is_independent(z)
    }

    /// Membership through `p(Z) <= x(Z) <= b(Z)` for every `Z` and
    /// independence of the support.
    pub fn contains(&self, z: ElementSet) -> Result<bool> {
        match &self.cut {
            Some(q) if q.contains_set(z) => self.matroid.is_independent(z),
            _ => Ok(false),
        }
    }
}

/// Nonemptiness of the polyhedron through the intersection theorem for two
/// g-polymatroids: the piece and plank preconditions, then `p <= r` and
/// `b >= 0` on every subset. A failure of `p(Z) <= r(Z)` is reported on the
/// complement of `Z`.
pub fn feasible(t: &TPolyhedron, cap: u64) -> Result<Verdict> {
    let b = &t.bounds;
    let n = t.graph.n();
    let all = t.ground.all();
    if let Some(v) = (0..n).find(|&v| b.g_k(v) < b.f[v]) {
        return Ok(Verdict::fail(Violation {
            inequality: Inequality::BoundOrder,
            witness: Witness::Vertex(v),
            lhs: b.g_k(v),
            rhs: b.f[v],
        }));
    }
    let members = b.g_k_of(VertexSet::full(n)).min(b.lprime);
    if members < b.l {
        return Ok(Verdict::fail(Violation { inequality: Inequality::MemberCount, witness: Witness::None, lhs: members, rhs: b.l }));
    }
    if t.pieces.iter().any(Option::is_none) {
        return Ok(Verdict::fail(Violation {
            inequality: Inequality::ShortfallRank,
            witness: Witness::Elements(all),
            lhs: 0,
            rhs: t.shortfall(all),
        }));
    }
    let Some(q) = &t.cut else {
        return Ok(Verdict::fail(Violation {
            inequality: Inequality::SurplusRank,
            witness: Witness::Elements(all),
            lhs: 0,
            rhs: t.surplus(all),
        }));
    };
    let rank = t.matroid.rank_table(cap)?;
    let mut budget = Budget::new(cap);
    for z in all.subsets() {
        budget.tick()?;
        let r = i64::from(rank[z.0 as usize]);
        let p = q.p(z);
        if p > r {
            let rest = all - z;
            let inequality =
                if t.shortfall(rest) >= t.surplus(rest) { Inequality::ShortfallRank } else { Inequality::SurplusRank };
            return Ok(Verdict::fail(Violation { inequality, witness: Witness::Elements(rest), lhs: r, rhs: p }));
        }
        if q.b(z) < 0 {
            return Ok(Verdict::fail(Violation { inequality: Inequality::MemberCount, witness: Witness::Elements(z), lhs: q.b(z), rhs: 0 }));
        }
    }
    Ok(Verdict::ok())
}

/// A 0/1 point of the polyhedron with the fewest ones (ties broken by the
/// canonical subset order), or `None`.
pub fn find_integer_point(t: &TPolyhedron, cap: u64) -> Result<Option<ElementSet>> {
    let mut budget = Budget::new(cap);
    for z in t.ground.all().subsets() {
        budget.tick()?;
        if !t.contains_by_definition(z)? {
            continue;
        }
        if !t.contains(z)? {
            return Err(Error::Inconsistent(format!("{z:?} meets the defining bounds but not the inequality system")));
        }
        return Ok(Some(z));
    }
    Ok(None)
}

/// The element set attached to a subpartition: every dyperedge entering a
/// vertex outside `∪P`, and every orientation of a hyperedge lying outside
/// `∪P`.
pub fn subpartition_to_elements(t: &TPolyhedron, p: &[VertexSet]) -> ElementSet {
    let covered = p.iter().fold(VertexSet::EMPTY, |a, &x| a | x);
    let outside = t.graph.vertices() - covered;
    let mut z: ElementSet = outside.iter().fold(ElementSet::EMPTY, |acc, v| acc | (t.ground.into_vertex(v) & t.ground.original_dyperedges()));
    for (i, e) in t.graph.hyperedges().iter().enumerate() {
        if e.is_subset(outside) {
            z |= t.ground.copies_of(i);
        }
    }
    z
}

/// Which lower bound a translated subpartition is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `h = g_k`, paired with the shortfall inequality.
    Upper,
    /// `h = f`, paired with the surplus inequality.
    Lower,
}

/// From an element set `Z`: take a partition attaining the rank of the
/// complement and keep the blocks whose vertices all have
/// `d⁻_Z(v) <= k - h(v)`.
pub fn elements_to_subpartition(t: &TPolyhedron, z: ElementSet, side: Side, cap: u64) -> Result<Vec<VertexSet>> {
    let Matroid::Extended(m) = &t.matroid else { unreachable!("built as an extended matroid") };
    let (_, partition) = m.formula_rank_with_partition(t.ground.all() - z, cap)?;
    let b = &t.bounds;
    let h = |v: usize| match side {
        Side::Upper => b.g_k(v),
        Side::Lower => b.f[v],
    };
    Ok(partition
        .into_iter()
        .filter(|x| x.iter().all(|v| t.deg(z, v) <= b.k - h(v)))
        .collect())
}
