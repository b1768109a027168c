//! Evaluators for the packing and orientation characterizations. Each one
//! quantifies its inequality exhaustively and reports the first violation in
//! canonical enumeration order.

pub mod families;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{Bounds, MixedHypergraph, RootMultiset};
use crate::instance::Instance;
use crate::matroid::{ExtendedGround, Matroid};
use crate::sets::{subpartitions, Budget, ElementSet, VertexSet};

pub use families::scc_projection;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConditionId {
    Edmonds,
    FrankMixed,
    Kkt,
    Mt,
    Dgns,
    Kiraly,
    GyDigraph,
    GyMixed,
    FrankOrient,
    NewOrient,
    FrankCai,
    BercziFrank,
    Fkk,
    Cor1,
    GyFg,
    Hsz,
    Main,
    Lemma1b,
}

impl ConditionId {
    pub const ALL: [ConditionId; 18] = [
        ConditionId::Edmonds,
        ConditionId::FrankMixed,
        ConditionId::Kkt,
        ConditionId::Mt,
        ConditionId::Dgns,
        ConditionId::Kiraly,
        ConditionId::GyDigraph,
        ConditionId::GyMixed,
        ConditionId::FrankOrient,
        ConditionId::NewOrient,
        ConditionId::FrankCai,
        ConditionId::BercziFrank,
        ConditionId::Fkk,
        ConditionId::Cor1,
        ConditionId::GyFg,
        ConditionId::Hsz,
        ConditionId::Main,
        ConditionId::Lemma1b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConditionId::Edmonds => "edmonds",
            ConditionId::FrankMixed => "frank-mixed",
            ConditionId::Kkt => "kkt",
            ConditionId::Mt => "mt",
            ConditionId::Dgns => "dgns",
            ConditionId::Kiraly => "kiraly",
            ConditionId::GyDigraph => "gy-digraph",
            ConditionId::GyMixed => "gy-mixed",
            ConditionId::FrankOrient => "frank-orient",
            ConditionId::NewOrient => "new-orient",
            ConditionId::FrankCai => "frank-cai",
            ConditionId::BercziFrank => "berczi-frank",
            ConditionId::Fkk => "fkk",
            ConditionId::Cor1 => "cor1",
            ConditionId::GyFg => "gy-fg",
            ConditionId::Hsz => "hsz",
            ConditionId::Main => "main",
            ConditionId::Lemma1b => "lemma1b",
        }
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConditionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        ConditionId::ALL
            .into_iter()
            .find(|id| id.name() == key)
            .ok_or_else(|| Error::Invalid(format!("unknown condition `{s}`")))
    }
}

/// Which inequality a violation breaks; every variant reads `lhs >= rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Inequality {
    /// An in-degree lower bound on one vertex set.
    Cut,
    /// An entering-count lower bound on a subpartition.
    SubpartitionCut,
    /// An entering-count lower bound on a component-rooted family.
    FamilyCut,
    /// `k >= |S_v|`.
    RootCap,
    /// `g_k(v) >= f(v)` (or `g(v) >= f(v)`).
    BoundOrder,
    /// `min{g_k(V), l'} >= l`.
    MemberCount,
    /// Rank of the complement against the total lower-bound shortfall.
    ShortfallRank,
    /// Rank of the complement against the surplus over `k|V| - l'`.
    SurplusRank,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    None,
    Vertex(usize),
    Set(VertexSet),
    Subpartition(Vec<VertexSet>),
    Family { component: VertexSet, members: Vec<VertexSet> },
    Elements(ElementSet),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub inequality: Inequality,
    pub witness: Witness,
    pub lhs: i64,
    pub rhs: i64,
}

impl Violation {
    pub fn to_json(&self, inst: &Instance) -> Value {
        let names = |s: VertexSet| inst.set_names(s);
        let witness = match &self.witness {
            Witness::None => json!({}),
            Witness::Vertex(v) => json!({ "v": inst.name(*v) }),
            Witness::Set(x) => json!({ "X": names(*x) }),
            Witness::Subpartition(p) => json!({ "P": p.iter().map(|&x| names(x)).collect::<Vec<_>>() }),
            Witness::Family { component, members } => json!({
                "C": names(*component),
                "P": members.iter().map(|&x| names(x)).collect::<Vec<_>>(),
            }),
            Witness::Elements(z) => match ExtendedGround::new(&inst.graph) {
                Ok(ground) => json!({ "Z": z.iter().map(|i| {
                    let d = ground.dyperedge(i);
                    json!({ "tails": names(d.tails), "head": inst.name(d.head) })
                }).collect::<Vec<_>>() }),
                Err(_) => json!({ "Z": z.iter().collect::<Vec<_>>() }),
            },
        };
        json!({ "inequality": self.inequality, "witness": witness, "lhs": self.lhs, "rhs": self.rhs })
    }
}

/// Outcome of a condition: holds, or the first violation found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub violation: Option<Violation>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }

    pub fn ok() -> Self {
        Verdict { violation: None }
    }

    pub fn fail(v: Violation) -> Self {
        Verdict { violation: Some(v) }
    }
}

/// Result of a constructive routine: the object, or the violated inequality
/// proving none exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<T> {
    Found(T),
    Violated(Violation),
}

impl<T> Outcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Outcome::Found(t) => Some(t),
            Outcome::Violated(_) => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }
}

impl From<Option<Violation>> for Verdict {
    fn from(violation: Option<Violation>) -> Self {
        Verdict { violation }
    }
}

fn as_i64(x: usize) -> i64 {
    x as i64
}

fn no_hyperedges(g: &MixedHypergraph, id: ConditionId) -> Result<()> {
    if g.hyperedges().is_empty() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("`{id}` is stated for directed instances but the instance has hyperedges")))
    }
}

fn matroid_on_roots(inst: &Instance) -> Result<(&RootMultiset, &Matroid)> {
    let roots = inst.roots()?;
    let m = inst.matroid()?;
    if m.len() != roots.len() {
        return Err(Error::Invalid(format!(
            "the matroid has {} elements but there are {} root copies",
            m.len(),
            roots.len()
        )));
    }
    Ok((roots, m))
}

/// `r(S_X)` for every vertex set `X`, indexed by bitmask.
pub fn root_rank_table(n: usize, roots: &RootMultiset, m: &Matroid, budget: &mut Budget) -> Result<Vec<i64>> {
    budget.require(1 << n)?;
    let mut table = vec![0; 1 << n];
    for x in VertexSet::full(n).submasks() {
        table[x.0 as usize] = as_i64(m.rank_with(roots.restrict(x), budget)?);
    }
    Ok(table)
}

/// The set function `h(X) = -r(S_X)`.
pub fn matroid_induced_h(inst: &Instance, cap: u64) -> Result<Vec<i64>> {
    let (roots, m) = matroid_on_roots(inst)?;
    let table = root_rank_table(inst.n(), roots, m, &mut Budget::new(cap))?;
    Ok(table.into_iter().map(|r| -r).collect())
}

/// The set function an orientation condition uses: the explicit table if the
/// instance has one, otherwise the one induced by the roots and the matroid.
pub fn instance_h(inst: &Instance, cap: u64) -> Result<Vec<i64>> {
    match &inst.h {
        Some(h) => Ok(h.clone()),
        None if inst.matroid.is_some() => matroid_induced_h(inst, cap),
        None => Err(Error::MissingField("h")),
    }
}

fn first_set_violation(
    sets: impl Iterator<Item = VertexSet>,
    budget: &mut Budget,
    mut measure: impl FnMut(VertexSet) -> (i64, i64),
) -> Result<Option<Violation>> {
    for x in sets {
        budget.tick()?;
        let (lhs, rhs) = measure(x);
        if lhs < rhs {
            return Ok(Some(Violation { inequality: Inequality::Cut, witness: Witness::Set(x), lhs, rhs }));
        }
    }
    Ok(None)
}

fn first_subpartition_violation(
    ground: VertexSet,
    budget: &mut Budget,
    mut measure: impl FnMut(&[VertexSet]) -> (i64, i64),
) -> Result<Option<Violation>> {
    for p in subpartitions(ground) {
        budget.tick()?;
        let (lhs, rhs) = measure(&p);
        if lhs < rhs {
            return Ok(Some(Violation {
                inequality: Inequality::SubpartitionCut,
                witness: Witness::Subpartition(p),
                lhs,
                rhs,
            }));
        }
    }
    Ok(None)
}

/// The family condition over every component `C` and every family of
/// candidate sets with disjoint traces on `C`: `e(P) >= Σ term(C, Z)`.
pub fn first_family_violation(
    g: &MixedHypergraph,
    budget: &mut Budget,
    term: &dyn Fn(VertexSet, VertexSet) -> i64,
) -> Result<Option<Violation>> {
    for comp in g.scc_condense() {
        let cands = families::candidates(g, comp, budget)?;
        let terms: Vec<i64> = cands.iter().map(|&z| term(comp, z)).collect();
        let mut found = None;
        families::for_each_family(comp, &cands, budget, &mut |fam| {
            let lhs = as_i64(g.entering_count(fam));
            let rhs: i64 = fam.iter().map(|z| terms[cands.iter().position(|c| c == z).unwrap()]).sum();
            if lhs < rhs {
                found = Some(Violation {
                    inequality: Inequality::FamilyCut,
                    witness: Witness::Family { component: comp, members: fam.to_vec() },
                    lhs,
                    rhs,
                });
                true
            } else {
                false
            }
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// The single-set version of the family condition for digraphs: per component
/// `C`, every `X ⊆ P^C` meeting `C` with nothing entering `X - C`.
fn first_component_set_violation(
    g: &MixedHypergraph,
    budget: &mut Budget,
    term: &dyn Fn(VertexSet, VertexSet) -> i64,
) -> Result<Option<Violation>> {
    for comp in g.scc_condense() {
        let above = g.reach_to_unchecked(comp);
        for x in above.subsets() {
            budget.tick()?;
            if !x.intersects(comp) || g.in_degree(x - comp) != 0 {
                continue;
            }
            let lhs = as_i64(g.in_degree(x));
            let rhs = term(comp, x);
            if lhs < rhs {
                return Ok(Some(Violation {
                    inequality: Inequality::FamilyCut,
                    witness: Witness::Family { component: comp, members: vec![x] },
                    lhs,
                    rhs,
                }));
            }
        }
    }
    Ok(None)
}

fn bound_order(bounds: &Bounds, truncate: bool) -> Option<Violation> {
    (0..bounds.f.len()).find_map(|v| {
        let upper = if truncate { bounds.g_k(v) } else { bounds.g[v] };
        (upper < bounds.f[v]).then(|| Violation {
            inequality: Inequality::BoundOrder,
            witness: Witness::Vertex(v),
            lhs: upper,
            rhs: bounds.f[v],
        })
    })
}

fn member_count(bounds: &Bounds, n: usize) -> Option<Violation> {
    let lhs = bounds.g_k_of(VertexSet::full(n)).min(bounds.lprime);
    (lhs < bounds.l).then_some(Violation { inequality: Inequality::MemberCount, witness: Witness::None, lhs, rhs: bounds.l })
}

/// `e(P) >= k|P| - min{cap - f(V - ∪P), upper(∪P)}` over all subpartitions,
/// counting hyperedges only when `with_hyperedges`.
fn bounded_subpartitions(
    g: &MixedHypergraph,
    bounds: &Bounds,
    cap_total: i64,
    upper: &dyn Fn(VertexSet) -> i64,
    budget: &mut Budget,
) -> Result<Option<Violation>> {
    let full = g.vertices();
    first_subpartition_violation(full, budget, |p| {
        let covered = p.iter().fold(VertexSet::EMPTY, |a, &x| a | x);
        let lhs = as_i64(g.entering_count(p));
        let rhs = bounds.k * as_i64(p.len()) - (cap_total - bounds.f_of(full - covered)).min(upper(covered));
        (lhs, rhs)
    })
}

/// Evaluate condition `id` on `inst`, enumerating at most `cap` items.
pub fn evaluate(id: ConditionId, inst: &Instance, cap: u64) -> Result<Verdict> {
    let g = &inst.graph;
    let n = g.n();
    let full = g.vertices();
    let mut budget = Budget::new(cap);
    let budget = &mut budget;
    let nonempty = || full.subsets().skip(1);
    let violation = match id {
        ConditionId::Edmonds => {
            no_hyperedges(g, id)?;
            let s = inst.roots()?;
            first_set_violation(nonempty(), budget, |x| {
                (as_i64(g.in_degree(x)), as_i64(s.len()) - as_i64(s.size_in(x)))
            })?
        }
        ConditionId::FrankMixed => {
            let s = inst.roots()?;
            first_subpartition_violation(full, budget, |p| {
                let covered = p.iter().fold(VertexSet::EMPTY, |a, &x| a | x);
                (as_i64(g.entering_count(p)), as_i64(s.len() * p.len()) - as_i64(s.size_in(covered)))
            })?
        }
        ConditionId::Kkt => {
            no_hyperedges(g, id)?;
            let s = inst.roots()?;
            first_set_violation(full.subsets(), budget, |x| {
                let above = g.reach_to_unchecked(x);
                (as_i64(g.in_degree(x)), as_i64(s.size_in(above)) - as_i64(s.size_in(x)))
            })?
        }
        ConditionId::Mt => {
            let s = inst.roots()?;
            first_family_violation(g, budget, &|c, z| {
                as_i64(s.size_in(g.reach_to_unchecked(c))) - as_i64(s.size_in(z))
            })?
        }
        ConditionId::Dgns => {
            no_hyperedges(g, id)?;
            let (roots, m) = matroid_on_roots(inst)?;
            let r = root_rank_table(n, roots, m, budget)?;
            first_set_violation(nonempty(), budget, |x| (as_i64(g.in_degree(x)), r[full.0 as usize] - r[x.0 as usize]))?
        }
        ConditionId::Kiraly => {
            no_hyperedges(g, id)?;
            let (roots, m) = matroid_on_roots(inst)?;
            let r = root_rank_table(n, roots, m, budget)?;
            first_set_violation(full.subsets(), budget, |x| {
                let above = g.reach_to_unchecked(x);
                (as_i64(g.in_degree(x)), r[above.0 as usize] - r[x.0 as usize])
            })?
        }
        ConditionId::GyDigraph => {
            no_hyperedges(g, id)?;
            let (roots, m) = matroid_on_roots(inst)?;
            let r = root_rank_table(n, roots, m, budget)?;
            first_component_set_violation(g, budget, &|c, x| {
                r[g.reach_to_unchecked(c).0 as usize] - r[x.0 as usize]
            })?
        }
        ConditionId::GyMixed => {
            let (roots, m) = matroid_on_roots(inst)?;
            let r = root_rank_table(n, roots, m, budget)?;
            first_family_violation(g, budget, &|c, z| r[g.reach_to_unchecked(c).0 as usize] - r[z.0 as usize])?
        }
        ConditionId::FrankOrient => {
            let h = instance_h(inst, cap)?;
            return frank_orient_condition(g, full, &|x| h[x.0 as usize], cap);
        }
        ConditionId::NewOrient => {
            let h = instance_h(inst, cap)?;
            return new_orient_condition(g, &|x| h[x.0 as usize], cap);
        }
        ConditionId::FrankCai => {
            no_hyperedges(g, id)?;
            let b = inst.bounds()?;
            match bound_order(b, false) {
                Some(v) => Some(v),
                None => bounded_subpartitions(g, b, b.k, &|x| b.g_of(x), budget)?,
            }
        }
        ConditionId::BercziFrank => {
            no_hyperedges(g, id)?;
            let b = inst.bounds()?;
            match bound_order(b, true).or_else(|| member_count(b, n)) {
                Some(v) => Some(v),
                None => bounded_subpartitions(g, b, b.lprime, &|x| b.g_of(x), budget)?,
            }
        }
        ConditionId::Fkk => {
            no_hyperedges(g, id)?;
            let s = inst.roots()?;
            let support: VertexSet = (0..n).filter(|&v| s.count(v) > 0).collect();
            if support.len() != 1 {
                return Err(Error::Invalid("`fkk` needs all roots on a single vertex".into()));
            }
            let k = as_i64(s.len());
            first_set_violation((full - support).subsets().skip(1), budget, |x| (as_i64(g.in_degree(x)), k))?
        }
        ConditionId::Cor1 => {
            no_hyperedges(g, id)?;
            let s = inst.roots()?;
            let k = inst.bounds()?.k;
            let cap_violation = (0..n).find_map(|v| {
                (k < as_i64(s.count(v))).then(|| Violation {
                    inequality: Inequality::RootCap,
                    witness: Witness::Vertex(v),
                    lhs: k,
                    rhs: as_i64(s.count(v)),
                })
            });
            match cap_violation {
                Some(v) => Some(v),
                None => first_set_violation(nonempty(), budget, |x| (as_i64(g.in_degree(x)), k - as_i64(s.size_in(x))))?,
            }
        }
        ConditionId::GyFg | ConditionId::Hsz => {
            if id == ConditionId::GyFg && !g.is_mixed_graph() {
                return Err(Error::Unsupported("`gy-fg` is stated for mixed graphs".into()));
            }
            let b = inst.bounds()?;
            match bound_order(b, false) {
                Some(v) => Some(v),
                None => bounded_subpartitions(g, b, b.k, &|x| b.g_of(x), budget)?,
            }
        }
        ConditionId::Main => {
            let b = inst.bounds()?;
            match bound_order(b, true).or_else(|| member_count(b, n)) {
                Some(v) => Some(v),
                None => bounded_subpartitions(g, b, b.lprime, &|x| b.g_k_of(x), budget)?,
            }
        }
        ConditionId::Lemma1b => lemma1b(g, inst.bounds()?, budget)?,
    };
    Ok(violation.into())
}

/// `e_E(P) >= Σ h(X)` over the subpartitions of `ground`, hyperedges only.
pub fn frank_orient_condition(
    g: &MixedHypergraph,
    ground: VertexSet,
    h: &dyn Fn(VertexSet) -> i64,
    cap: u64,
) -> Result<Verdict> {
    if !g.dyperedges().is_empty() {
        return Err(Error::Unsupported("`frank-orient` is stated for undirected instances".into()));
    }
    let mut budget = Budget::new(cap);
    Ok(first_subpartition_violation(ground, &mut budget, |p| {
        (as_i64(g.hyper_entering_count(p)), p.iter().map(|&x| h(x)).sum())
    })?
    .into())
}

/// The family condition with terms `h(Z) - h(P^C)`.
pub fn new_orient_condition(g: &MixedHypergraph, h: &dyn Fn(VertexSet) -> i64, cap: u64) -> Result<Verdict> {
    let mut budget = Budget::new(cap);
    Ok(first_family_violation(g, &mut budget, &|c, z| h(z) - h(g.reach_to_unchecked(c)))?.into())
}

fn lemma1b(g: &MixedHypergraph, b: &Bounds, budget: &mut Budget) -> Result<Option<Violation>> {
    let n = g.n();
    if let Some(v) = bound_order(b, true).or_else(|| member_count(b, n)) {
        return Ok(Some(v));
    }
    let k = usize::try_from(b.k).map_err(|_| Error::Invalid("negative k".into()))?;
    let m = Matroid::extended(g, k)?;
    let ground = match &m {
        Matroid::Extended(x) => x.ground().clone(),
        _ => unreachable!(),
    };
    let rank = m.rank_table(budget.cap())?;
    let all = ground.all();
    let kv = b.k * as_i64(n);
    for z in all.subsets() {
        budget.tick()?;
        let r = i64::from(rank[(all - z).0 as usize]);
        let deg = |v: usize| as_i64(ground.in_degree(z, v));
        let shortfall: i64 = (0..n).map(|v| (b.k - b.g_k(v) - deg(v)).max(0)).sum();
        if r < shortfall {
            return Ok(Some(Violation { inequality: Inequality::ShortfallRank, witness: Witness::Elements(z), lhs: r, rhs: shortfall }));
        }
        let surplus = kv - b.lprime - (0..n).map(|v| deg(v).min(b.k - b.f[v])).sum::<i64>();
        if r < surplus {
            return Ok(Some(Violation { inequality: Inequality::SurplusRank, witness: Witness::Elements(z), lhs: r, rhs: surplus }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Dyperedge;

    fn vs(items: &[usize]) -> VertexSet {
        items.iter().copied().collect()
    }

    #[test]
    fn ids_parse_loosely() {
        assert_eq!("GY_MIXED".parse::<ConditionId>().unwrap(), ConditionId::GyMixed);
        assert_eq!("lemma1b".parse::<ConditionId>().unwrap(), ConditionId::Lemma1b);
        assert!("nope".parse::<ConditionId>().is_err());
        for id in ConditionId::ALL {
            assert_eq!(id.name().parse::<ConditionId>().unwrap(), id);
        }
    }

    #[test]
    fn edmonds_examples() {
        let single = Instance::new(MixedHypergraph::digraph(1, &[]).unwrap()).with_roots(vec![1]).unwrap();
        assert!(evaluate(ConditionId::Edmonds, &single, 1000).unwrap().holds());
        let two = Instance::new(MixedHypergraph::digraph(2, &[]).unwrap()).with_roots(vec![1, 0]).unwrap();
        let v = evaluate(ConditionId::Edmonds, &two, 1000).unwrap().violation.unwrap();
        assert_eq!(v.witness, Witness::Set(vs(&[1])));
        assert_eq!((v.lhs, v.rhs), (0, 1));
        assert_eq!(v.to_json(&two)["witness"], json!({"X": ["b"]}));
    }

    #[test]
    fn main_on_cycle_with_edge_holds() {
        let g = MixedHypergraph::new(
            3,
            vec![vs(&[0, 1])],
            vec![Dyperedge::arc(0, 1).unwrap(), Dyperedge::arc(1, 2).unwrap(), Dyperedge::arc(2, 0).unwrap()],
        )
        .unwrap();
        let inst = Instance::new(g).with_bounds(Bounds::uniform(3, 0, 1, 1, 1, 1).unwrap()).unwrap();
        assert!(evaluate(ConditionId::Main, &inst, 1 << 20).unwrap().holds());
        assert!(evaluate(ConditionId::Lemma1b, &inst, 1 << 20).unwrap().holds());
    }

    #[test]
    fn main_two_isolated_vertices_fails() {
        let inst = Instance::new(MixedHypergraph::digraph(2, &[]).unwrap())
            .with_bounds(Bounds::new(vec![1, 1], vec![1, 1], 1, 1, 1).unwrap())
            .unwrap();
        let v = evaluate(ConditionId::Main, &inst, 1000).unwrap().violation.unwrap();
        assert_eq!(v.inequality, Inequality::SubpartitionCut);
        assert!(!evaluate(ConditionId::Lemma1b, &inst, 1000).unwrap().holds());
    }

    #[test]
    fn frank_cai_needs_empty_subpartition() {
        // f exceeds k: only the empty subpartition exposes it
        let inst = Instance::new(MixedHypergraph::digraph(1, &[]).unwrap())
            .with_bounds(Bounds::new(vec![2], vec![2], 1, 1, 1).unwrap())
            .unwrap();
        let v = evaluate(ConditionId::FrankCai, &inst, 1000).unwrap().violation.unwrap();
        assert_eq!(v.witness, Witness::Subpartition(vec![]));
    }

    #[test]
    fn applicability_is_enforced() {
        let mixed = Instance::new(MixedHypergraph::new(2, vec![vs(&[0, 1])], vec![]).unwrap()).with_roots(vec![1, 0]).unwrap();
        assert!(matches!(evaluate(ConditionId::Edmonds, &mixed, 100), Err(Error::Unsupported(_))));
        assert!(evaluate(ConditionId::FrankMixed, &mixed, 100).unwrap().holds());
        assert_eq!(evaluate(ConditionId::Dgns, &Instance::new(MixedHypergraph::digraph(1, &[]).unwrap()), 100).unwrap_err(), Error::MissingField("roots"));
    }

    #[test]
    fn cap_is_reported() {
        let inst = Instance::new(MixedHypergraph::digraph(4, &[]).unwrap()).with_roots(vec![0; 4]).unwrap();
        assert_eq!(evaluate(ConditionId::FrankMixed, &inst, 3).unwrap_err(), Error::CapExceeded { cap: 3 });
    }
}
