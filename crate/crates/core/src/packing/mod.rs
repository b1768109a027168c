//! Packings of (hyper)arborescences: the data model, the verifier for every
//! packing species, and the exhaustive search that decides existence.

mod construct;
pub(crate) mod search;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc as Shared;

use serde_json::{json, Value};

use crate::conditions::ConditionId;
use crate::error::{Error, Result};
use crate::graph::{Bounds, Element, MixedHypergraph, RootMultiset};
use crate::instance::Instance;
use crate::matroid::Matroid;
use crate::sets::{Budget, ElementSet, VertexSet};

pub use construct::{corollary1_pack, main_pack, mrb_mixed_pack, packing_supports};
use search::{Problem, Slot, Unit};

/// One element of a member, trimmed to the arc `tail -> head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Use {
    pub element: Element,
    pub tail: usize,
    pub head: usize,
}

/// An arborescence of the packing. Its vertices are the root and the heads
/// of its arcs; `copy` names the root copy it is charged to, when roots come
/// from a multiset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member {
    pub root: usize,
    pub copy: Option<usize>,
    pub uses: Vec<Use>,
}

impl Member {
    pub fn vertices(&self) -> VertexSet {
        self.uses.iter().fold(VertexSet::singleton(self.root), |acc, u| acc.with(u.head))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Packing {
    pub members: Vec<Member>,
}

impl Packing {
    pub fn uses(&self) -> impl Iterator<Item = &Use> {
        self.members.iter().flat_map(|m| m.uses.iter())
    }

    /// How many members contain each vertex.
    pub fn coverage(&self, n: usize) -> Vec<usize> {
        let mut counts = vec![0; n];
        for m in &self.members {
            for v in m.vertices().iter() {
                counts[v] += 1;
            }
        }
        counts
    }

    /// Number of members rooted at each vertex.
    pub fn root_counts(&self, n: usize) -> Vec<usize> {
        let mut counts = vec![0; n];
        for m in &self.members {
            counts[m.root] += 1;
        }
        counts
    }

    /// The oriented elements the packing uses, as a subset of the extended
    /// ground (dyperedges, then hyperedge orientations by head).
    pub fn extended_support(&self, g: &MixedHypergraph) -> Result<ElementSet> {
        let ground = crate::matroid::ExtendedGround::new(g)?;
        let mut z = ElementSet::EMPTY;
        for u in self.uses() {
            let i = match u.element {
                Element::Dyperedge(d) => d,
                Element::Hyperedge(h) => ground
                    .copies_of(h)
                    .iter()
                    .find(|&i| ground.dyperedge(i).head == u.head)
                    .ok_or_else(|| Error::MalformedPacking("head off its hyperedge".into()))?,
            };
            z.insert(i);
        }
        Ok(z)
    }

    pub fn to_json(&self, inst: &Instance) -> Value {
        let members: Vec<Value> = self
            .members
            .iter()
            .map(|m| {
                let uses: Vec<Value> = m
                    .uses
                    .iter()
                    .map(|u| json!({ "element": u.element, "tail": inst.name(u.tail), "head": inst.name(u.head) }))
                    .collect();
                let mut obj = json!({ "root": inst.name(m.root), "vertices": inst.set_names(m.vertices()), "uses": uses });
                if let Some(c) = m.copy {
                    obj["copy"] = json!(c);
                }
                obj
            })
            .collect();
        json!({ "members": members })
    }

    pub fn from_json(inst: &Instance, value: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("packing: {what}"));
        let name = |v: &Value| -> Result<usize> { inst.vertex(v.as_str().ok_or_else(|| bad("vertex names are strings"))?) };
        let members = value["members"].as_array().ok_or_else(|| bad("`members` must be a list"))?;
        let mut out = Vec::new();
        for m in members {
            let root = name(&m["root"])?;
            let copy = match &m["copy"] {
                Value::Null => None,
                c => Some(c.as_u64().ok_or_else(|| bad("`copy` must be an index"))? as usize),
            };
            let mut uses = Vec::new();
            for u in m["uses"].as_array().map(Vec::as_slice).unwrap_or(&[]) {
                let element: Element = serde_json::from_value(u["element"].clone())?;
                uses.push(Use { element, tail: name(&u["tail"])?, head: name(&u["head"])? });
            }
            out.push(Member { root, copy, uses });
        }
        Ok(Packing { members: out })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Species {
    Spanning,
    Reachability,
    MatroidBased,
    MatroidReachabilityBased,
    BoundedRegularLimited,
}

impl Species {
    pub const ALL: [Species; 5] = [
        Species::Spanning,
        Species::Reachability,
        Species::MatroidBased,
        Species::MatroidReachabilityBased,
        Species::BoundedRegularLimited,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Species::Spanning => "spanning",
            Species::Reachability => "reachability",
            Species::MatroidBased => "matroid-based",
            Species::MatroidReachabilityBased => "matroid-reachability-based",
            Species::BoundedRegularLimited => "bounded-regular-limited",
        }
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Species {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        match key.as_str() {
            "mrb" => Ok(Species::MatroidReachabilityBased),
            "brl" => Ok(Species::BoundedRegularLimited),
            _ => Species::ALL
                .into_iter()
                .find(|sp| sp.name() == key)
                .ok_or_else(|| Error::Invalid(format!("unknown packing species `{s}`"))),
        }
    }
}

/// A species together with the parameters it needs.
#[derive(Debug, Clone)]
pub struct PackingSpec {
    pub species: Species,
    pub roots: Option<RootMultiset>,
    pub matroid: Option<Shared<Matroid>>,
    pub bounds: Option<Bounds>,
}

impl PackingSpec {
    pub fn spanning(roots: RootMultiset) -> Self {
        Self { species: Species::Spanning, roots: Some(roots), matroid: None, bounds: None }
    }

    pub fn reachability(roots: RootMultiset) -> Self {
        Self { species: Species::Reachability, roots: Some(roots), matroid: None, bounds: None }
    }

    pub fn matroid_based(roots: RootMultiset, m: Shared<Matroid>) -> Self {
        Self { species: Species::MatroidBased, roots: Some(roots), matroid: Some(m), bounds: None }
    }

    pub fn matroid_reachability_based(roots: RootMultiset, m: Shared<Matroid>) -> Self {
        Self { species: Species::MatroidReachabilityBased, roots: Some(roots), matroid: Some(m), bounds: None }
    }

    pub fn bounded(bounds: Bounds) -> Self {
        Self { species: Species::BoundedRegularLimited, roots: None, matroid: None, bounds: Some(bounds) }
    }

    /// Take the parameters of `species` from the instance.
    pub fn from_instance(species: Species, inst: &Instance) -> Result<Self> {
        Ok(match species {
            Species::Spanning => Self::spanning(inst.roots()?.clone()),
            Species::Reachability => Self::reachability(inst.roots()?.clone()),
            Species::MatroidBased => Self::matroid_based(inst.roots()?.clone(), matroid_arc(inst)?),
            Species::MatroidReachabilityBased => {
                Self::matroid_reachability_based(inst.roots()?.clone(), matroid_arc(inst)?)
            }
            Species::BoundedRegularLimited => Self::bounded(inst.bounds()?.clone()),
        })
    }

    /// The packing whose existence condition `id` characterizes; `None` for
    /// the orientation conditions and the rank form of the main condition.
    pub fn for_condition(id: ConditionId, inst: &Instance) -> Result<Option<Self>> {
        use ConditionId::*;
        Ok(Some(match id {
            Edmonds | FrankMixed | Fkk => Self::from_instance(Species::Spanning, inst)?,
            Kkt | Mt => Self::from_instance(Species::Reachability, inst)?,
            Dgns => Self::from_instance(Species::MatroidBased, inst)?,
            Kiraly | GyDigraph | GyMixed => Self::from_instance(Species::MatroidReachabilityBased, inst)?,
            FrankCai | GyFg | Hsz => {
                let b = inst.bounds()?;
                Self::bounded(Bounds::new(b.f.clone(), b.g.clone(), b.k, b.k, b.k)?)
            }
            BercziFrank | Main => Self::from_instance(Species::BoundedRegularLimited, inst)?,
            Cor1 => {
                let s = inst.roots()?;
                let exact: Vec<i64> = s.counts().iter().map(|&c| c as i64).collect();
                let total = s.len() as i64;
                Self::bounded(Bounds::new(exact.clone(), exact, inst.bounds()?.k, total, total)?)
            }
            FrankOrient | NewOrient | Lemma1b => return Ok(None),
        }))
    }

    fn roots(&self) -> Result<&RootMultiset> {
        self.roots.as_ref().ok_or(Error::MissingField("roots"))
    }

    fn matroid(&self) -> Result<&Matroid> {
        let m = self.matroid.as_deref().ok_or(Error::MissingField("matroid"))?;
        if m.len() != self.roots()?.len() {
            return Err(Error::Invalid("the matroid must live on the root copies".into()));
        }
        Ok(m)
    }

    fn bounds(&self) -> Result<&Bounds> {
        self.bounds.as_ref().ok_or(Error::MissingField("bounds"))
    }
}

fn matroid_arc(inst: &Instance) -> Result<Shared<Matroid>> {
    inst.matroid.clone().ok_or(Error::MissingField("matroid"))
}

/// Why a well-formed packing fails its species.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Defect {
    ElementReused { element: Element },
    NotArborescence { member: usize },
    CopyMismatch { member: usize },
    CopyReused { copy: usize },
    CopyMissing { copy: usize },
    WrongVertexSet { member: usize, expected: VertexSet, actual: VertexSet },
    NotBasis { vertex: usize },
    RootCount { vertex: usize, count: usize },
    Coverage { vertex: usize, count: usize },
    MemberCount { count: usize },
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::ElementReused { element } => write!(f, "element {element:?} is used twice"),
            Defect::NotArborescence { member } => write!(f, "member {member} is not an arborescence"),
            Defect::CopyMismatch { member } => write!(f, "member {member} is not rooted at its root copy"),
            Defect::CopyReused { copy } => write!(f, "root copy {copy} roots two members"),
            Defect::CopyMissing { copy } => write!(f, "root copy {copy} roots no member"),
            Defect::WrongVertexSet { member, expected, actual } => {
                write!(f, "member {member} spans {actual:?} instead of {expected:?}")
            }
            Defect::NotBasis { vertex } => write!(f, "roots of the members containing {vertex} are not a basis"),
            Defect::RootCount { vertex, count } => write!(f, "{count} members are rooted at {vertex}"),
            Defect::Coverage { vertex, count } => write!(f, "vertex {vertex} lies in {count} members"),
            Defect::MemberCount { count } => write!(f, "{count} members"),
        }
    }
}

fn check_well_formed(g: &MixedHypergraph, p: &Packing) -> Result<()> {
    let bad = |msg: String| Err(Error::MalformedPacking(msg));
    for (i, m) in p.members.iter().enumerate() {
        if m.root >= g.n() {
            return bad(format!("member {i} has root {} outside the vertex set", m.root));
        }
        for u in &m.uses {
            let fits = match u.element {
                Element::Hyperedge(h) => {
                    g.hyperedges().get(h).is_some_and(|e| e.contains(u.tail) && e.contains(u.head) && u.tail != u.head)
                }
                Element::Dyperedge(d) => g.dyperedges().get(d).is_some_and(|d| d.tails.contains(u.tail) && d.head == u.head),
            };
            if !fits {
                return bad(format!("member {i} trims {:?} to an arc it does not contain", u.element));
            }
        }
    }
    Ok(())
}

fn is_arborescence(m: &Member) -> bool {
    let verts = m.vertices();
    let heads: Vec<usize> = m.uses.iter().map(|u| u.head).collect();
    let distinct: VertexSet = heads.iter().copied().collect();
    if distinct.len() != heads.len() || distinct.contains(m.root) || m.uses.iter().any(|u| !verts.contains(u.tail)) {
        return false;
    }
    // each vertex has one parent; following parents must reach the root
    let parent = |v: usize| m.uses.iter().find(|u| u.head == v).map(|u| u.tail);
    verts.iter().all(|v| {
        let mut x = v;
        for _ in 0..=verts.len() {
            if x == m.root {
                return true;
            }
            x = parent(x).expect("non-root vertices are heads");
        }
        false
    })
}

/// Check a packing against its species on `g`.
pub fn verify(g: &MixedHypergraph, p: &Packing, spec: &PackingSpec) -> Result<Option<Defect>> {
    check_well_formed(g, p)?;
    let mut seen = std::collections::HashSet::new();
    for u in p.uses() {
        if !seen.insert(u.element) {
            return Ok(Some(Defect::ElementReused { element: u.element }));
        }
    }
    if let Some(member) = p.members.iter().position(|m| !is_arborescence(m)) {
        return Ok(Some(Defect::NotArborescence { member }));
    }
    let n = g.n();
    match spec.species {
        Species::BoundedRegularLimited => {
            let b = spec.bounds()?;
            if b.f.len() != n {
                return Err(Error::Invalid("bounds must cover every vertex".into()));
            }
            let roots = p.root_counts(n);
            if let Some(v) = (0..n).find(|&v| (roots[v] as i64) < b.f[v] || (roots[v] as i64) > b.g[v]) {
                return Ok(Some(Defect::RootCount { vertex: v, count: roots[v] }));
            }
            let cover = p.coverage(n);
            if let Some(v) = (0..n).find(|&v| cover[v] as i64 != b.k) {
                return Ok(Some(Defect::Coverage { vertex: v, count: cover[v] }));
            }
            let count = p.members.len() as i64;
            if count < b.l || count > b.lprime {
                return Ok(Some(Defect::MemberCount { count: p.members.len() }));
            }
            Ok(None)
        }
        species => {
            let s = spec.roots()?;
            if s.counts().len() != n {
                return Err(Error::Invalid("roots must cover every vertex".into()));
            }
            let mut used = ElementSet::EMPTY;
            for (i, m) in p.members.iter().enumerate() {
                match m.copy {
                    Some(c) if c < s.len() && s.vertex_of(c) == m.root => {
                        if used.contains(c) {
                            return Ok(Some(Defect::CopyReused { copy: c }));
                        }
                        used.insert(c);
                    }
                    _ => return Ok(Some(Defect::CopyMismatch { member: i })),
                }
            }
            match species {
                Species::Spanning | Species::Reachability => {
                    if let Some(c) = (s.all() - used).first() {
                        return Ok(Some(Defect::CopyMissing { copy: c }));
                    }
                    for (i, m) in p.members.iter().enumerate() {
                        let expected = match species {
                            Species::Spanning => g.vertices(),
                            _ => g.reach_from_unchecked(VertexSet::singleton(m.root)),
                        };
                        if m.vertices() != expected {
                            return Ok(Some(Defect::WrongVertexSet { member: i, expected, actual: m.vertices() }));
                        }
                    }
                    Ok(None)
                }
                _ => {
                    let matroid = spec.matroid()?;
                    let mut budget = Budget::default();
                    let whole = matroid.rank_with(s.all(), &mut budget)?;
                    for v in 0..n {
                        let b: ElementSet = p
                            .members
                            .iter()
                            .filter(|m| m.vertices().contains(v))
                            .map(|m| m.copy.expect("copies checked above"))
                            .collect();
                        let target = match species {
                            Species::MatroidBased => whole,
                            _ => matroid.rank_with(s.restrict(g.reach_to_unchecked(VertexSet::singleton(v))), &mut budget)?,
                        };
                        if b.len() != target || !matroid.is_independent_with(b, &mut budget)? {
                            return Ok(Some(Defect::NotBasis { vertex: v }));
                        }
                    }
                    Ok(None)
                }
            }
        }
    }
}

/// Every element with all its admissible arcs, in element order.
pub(crate) fn free_units(g: &MixedHypergraph) -> Vec<Unit> {
    g.elements()
        .map(|el| {
            let options = match el {
                Element::Hyperedge(h) => {
                    let e = g.hyperedges()[h];
                    e.iter().flat_map(|t| e.iter().filter(move |&x| x != t).map(move |x| (t, x))).collect()
                }
                Element::Dyperedge(d) => {
                    let d = g.dyperedges()[d];
                    d.tails.iter().map(|t| (t, d.head)).collect()
                }
            };
            Unit { element: el, options, mandatory: false }
        })
        .collect()
}

/// Exhaustive search for a packing of the given species; `None` once the
/// whole space is exhausted.
pub fn find_packing(g: &MixedHypergraph, spec: &PackingSpec, cap: u64) -> Result<Option<Packing>> {
    let mut budget = Budget::new(cap);
    let found = find_with(g, spec, &mut budget)?;
    if let Some(p) = &found {
        if let Some(d) = verify(g, p, spec)? {
            return Err(Error::Inconsistent(format!("search produced an invalid packing: {d}")));
        }
    }
    Ok(found)
}

fn find_with(g: &MixedHypergraph, spec: &PackingSpec, budget: &mut Budget) -> Result<Option<Packing>> {
    let n = g.n();
    let units = free_units(g);
    let run = |slots: Vec<Slot>, regular: Option<usize>, budget: &mut Budget| -> Result<Option<Packing>> {
        let problem = Problem { n, units: units.clone(), slots, regular };
        Ok(search::solve(&problem, budget)?.map(|members| Packing { members }))
    };
    match spec.species {
        Species::Spanning | Species::Reachability => {
            let s = spec.roots()?;
            let slots = (0..s.len())
                .map(|c| {
                    let root = s.vertex_of(c);
                    let fixed = match spec.species {
                        Species::Spanning => g.vertices(),
                        _ => g.reach_from_unchecked(VertexSet::singleton(root)),
                    };
                    Slot { root, copy: Some(c), fixed: Some(fixed), class: root }
                })
                .collect();
            run(slots, None, budget)
        }
        Species::MatroidBased | Species::MatroidReachabilityBased => {
            let s = spec.roots()?;
            let m = spec.matroid()?;
            let targets: Vec<usize> = (0..n)
                .map(|v| match spec.species {
                    Species::MatroidBased => m.rank_with(s.all(), budget),
                    _ => m.rank_with(s.restrict(g.reach_to_unchecked(VertexSet::singleton(v))), budget),
                })
                .collect::<Result<_>>()?;
            // each copy either roots nothing or a member with a prescribed vertex set
            let options: Vec<Vec<Option<VertexSet>>> = (0..s.len())
                .map(|c| {
                    let root = s.vertex_of(c);
                    let reach = g.reach_from_unchecked(VertexSet::singleton(root));
                    std::iter::once(None)
                        .chain((reach.without(root)).subsets().map(|t| Some(t.with(root))))
                        .collect()
                })
                .collect();
            let mut choice = vec![0usize; s.len()];
            loop {
                budget.tick()?;
                let sets: Vec<Option<VertexSet>> = (0..s.len()).map(|c| options[c][choice[c]]).collect();
                let mut basis_everywhere = true;
                for v in 0..n {
                    let b: ElementSet = (0..s.len()).filter(|&c| sets[c].is_some_and(|t| t.contains(v))).collect();
                    if b.len() != targets[v] || !m.is_independent_with(b, budget)? {
                        basis_everywhere = false;
                        break;
                    }
                }
                if basis_everywhere {
                    let slots = (0..s.len())
                        .filter_map(|c| {
                            sets[c].map(|t| Slot { root: s.vertex_of(c), copy: Some(c), fixed: Some(t), class: n + c })
                        })
                        .collect();
                    if let Some(p) = run(slots, None, budget)? {
                        return Ok(Some(p));
                    }
                }
                // next choice vector, last copy fastest
                let mut c = s.len();
                loop {
                    if c == 0 {
                        return Ok(None);
                    }
                    c -= 1;
                    choice[c] += 1;
                    if choice[c] < options[c].len() {
                        break;
                    }
                    choice[c] = 0;
                }
            }
        }
        Species::BoundedRegularLimited => {
            let b = spec.bounds()?;
            if b.f.len() != n {
                return Err(Error::Invalid("bounds must cover every vertex".into()));
            }
            let Ok(k) = usize::try_from(b.k) else { return Ok(None) };
            let lo: Vec<i64> = b.f.clone();
            let hi: Vec<i64> = (0..n).map(|v| b.g_k(v)).collect();
            if (0..n).any(|v| lo[v] > hi[v]) {
                return Ok(None);
            }
            let mut r = lo.clone();
            loop {
                budget.tick()?;
                let total: i64 = r.iter().sum();
                if b.l <= total && total <= b.lprime {
                    let slots = (0..n)
                        .flat_map(|v| (0..r[v]).map(move |_| Slot { root: v, copy: None, fixed: None, class: v }))
                        .collect();
                    if let Some(p) = run(slots, Some(k), budget)? {
                        return Ok(Some(p));
                    }
                }
                let mut v = n;
                loop {
                    if v == 0 {
                        return Ok(None);
                    }
                    v -= 1;
                    r[v] += 1;
                    if r[v] <= hi[v] {
                        break;
                    }
                    r[v] = lo[v];
                }
            }
        }
    }
}
