//! Constructive pipelines: k-regular packings through an added super-root,
//! matroid-reachability-based packings through an orientation, and bounded
//! regular limited packings through an integer point of the support
//! polyhedron.

use std::sync::Arc as Shared;

use crate::conditions::{evaluate, ConditionId, Outcome};
use crate::error::{Error, Result};
use crate::gpoly::{build_t, find_integer_point};
use crate::graph::{Bounds, Dyperedge, Element, MixedHypergraph, RootMultiset};
use crate::instance::Instance;
use crate::matroid::{ExtendedGround, ExtendedOrigin, Matroid};
use crate::orientation::{mixed_orient, SetFunction};
use crate::sets::{Budget, ElementSet, VertexSet};

use super::search::{self, Problem, Slot, Unit};
use super::{find_packing, verify, Member, Packing, PackingSpec, Use};

fn bounds_for_roots(roots: &RootMultiset, k: usize) -> Result<Bounds> {
    let exact: Vec<i64> = roots.counts().iter().map(|&c| c as i64).collect();
    let total = roots.len() as i64;
    Bounds::new(exact.clone(), exact, k as i64, total, total)
}

/// A k-regular packing of arborescences rooted at the copies of `roots` in a
/// dypergraph, or the violated condition.
pub fn corollary1_pack(g: &MixedHypergraph, roots: &RootMultiset, k: usize, cap: u64) -> Result<Outcome<Packing>> {
    if !g.hyperedges().is_empty() {
        return Err(Error::Unsupported("the super-root construction takes a dypergraph".into()));
    }
    let n = g.n();
    let inst = Instance::new(g.clone())
        .with_roots(roots.counts().to_vec())?
        .with_bounds(Bounds::new(vec![0; n], vec![0; n], k as i64, 0, 0)?)?;
    if let Some(v) = evaluate(ConditionId::Cor1, &inst, cap)?.violation {
        return Ok(Outcome::Violated(v));
    }
    if k == 0 {
        return Ok(Outcome::Found(Packing::default()));
    }
    if n + 1 > VertexSet::CAPACITY {
        return Err(Error::Invalid("no room for the super-root".into()));
    }

    // super-root s with one arc to every root copy
    let s = n;
    let m = g.dyperedges().len();
    let mut arcs = g.dyperedges().to_vec();
    arcs.extend(roots.copies().iter().map(|&v| Dyperedge::arc(s, v).expect("distinct endpoints")));
    let augmented = MixedHypergraph::new(n + 1, Vec::new(), arcs)?;
    let mut at_s = vec![0; n + 1];
    at_s[s] = k;
    let spanning = PackingSpec::spanning(RootMultiset::new(at_s)?);
    let mut found = find_packing(&augmented, &spanning, cap)?
        .ok_or_else(|| Error::Inconsistent("no spanning packing from the super-root although the condition holds".into()))?;

    // every copy arc must be used: an unused s -> v replaces another arc into v
    for c in 0..roots.len() {
        let el = Element::Dyperedge(m + c);
        if found.uses().any(|u| u.element == el) {
            continue;
        }
        let v = roots.vertex_of(c);
        let slot = found
            .members
            .iter_mut()
            .flat_map(|mem| mem.uses.iter_mut())
            .find(|u| u.head == v && matches!(u.element, Element::Dyperedge(i) if i < m))
            .ok_or_else(|| Error::Inconsistent(format!("no arc into {v} to exchange")))?;
        *slot = Use { element: el, tail: s, head: v };
    }

    // deleting s splits every member into arborescences rooted at copies
    let mut members: Vec<Member> = Vec::new();
    for mem in &found.members {
        for u in mem.uses.iter().filter(|u| u.tail == s) {
            let Element::Dyperedge(i) = u.element else { unreachable!() };
            let mut keep = VertexSet::singleton(u.head);
            let mut uses = Vec::new();
            loop {
                let before = uses.len();
                for w in &mem.uses {
                    if w.tail != s && keep.contains(w.tail) && !keep.contains(w.head) {
                        keep.insert(w.head);
                        uses.push(*w);
                    }
                }
                if uses.len() == before {
                    break;
                }
            }
            members.push(Member { root: u.head, copy: Some(i - m), uses });
        }
    }
    members.sort_by_key(|mem| mem.copy);
    let packing = Packing { members };
    let spec = PackingSpec::bounded(bounds_for_roots(roots, k)?);
    if let Some(d) = verify(g, &packing, &spec)? {
        return Err(Error::Inconsistent(format!("super-root construction produced an invalid packing: {d}")));
    }
    Ok(Outcome::Found(packing))
}

/// A matroid-reachability-based packing of mixed arborescences: orient the
/// hyperedges with `h(X) = -r(S_X)`, pack in the oriented dypergraph, and
/// put the hyperedges back.
pub fn mrb_mixed_pack(
    g: &MixedHypergraph,
    roots: &RootMultiset,
    matroid: Shared<Matroid>,
    cap: u64,
) -> Result<Outcome<Packing>> {
    if matroid.len() != roots.len() {
        return Err(Error::Invalid("the matroid must live on the root copies".into()));
    }
    let mut budget = Budget::new(cap);
    let mut ranks = Vec::with_capacity(1 << g.n());
    for x in g.vertices().submasks() {
        ranks.push(-(matroid.rank_with(roots.restrict(x), &mut budget)? as i64));
    }
    let h = SetFunction::new(g.n(), ranks)?;
    let orientation = match mixed_orient(g, &h, cap)? {
        Outcome::Found(o) => o,
        Outcome::Violated(v) => return Ok(Outcome::Violated(v)),
    };
    let directed = g.oriented(&orientation.heads)?;
    let spec = PackingSpec::matroid_reachability_based(roots.clone(), matroid);
    let inner = find_packing(&directed, &spec, cap)?
        .ok_or_else(|| Error::Inconsistent("oriented dypergraph has no packing although the orientation is valid".into()))?;
    let nd = g.dyperedges().len();
    let packing = Packing {
        members: inner
            .members
            .into_iter()
            .map(|mem| Member {
                uses: mem
                    .uses
                    .into_iter()
                    .map(|u| match u.element {
                        Element::Dyperedge(i) if i >= nd => Use { element: Element::Hyperedge(i - nd), ..u },
                        _ => u,
                    })
                    .collect(),
                ..mem
            })
            .collect(),
    };
    if let Some(d) = verify(g, &packing, &spec)? {
        return Err(Error::Inconsistent(format!("restored packing fails on the mixed hypergraph: {d}")));
    }
    Ok(Outcome::Found(packing))
}

/// An (f,g)-bounded k-regular (l,l')-limited packing of mixed
/// hyperarborescences from an integer point of the support polyhedron, or
/// the violated condition.
pub fn main_pack(g: &MixedHypergraph, bounds: &Bounds, cap: u64) -> Result<Outcome<Packing>> {
    if bounds.k < 1 || bounds.l < 1 || bounds.lprime < 1 {
        return Err(Error::Invalid("k, l and l' must be positive".into()));
    }
    let inst = Instance::new(g.clone()).with_bounds(bounds.clone())?;
    if let Some(v) = evaluate(ConditionId::Main, &inst, cap)?.violation {
        return Ok(Outcome::Violated(v));
    }
    let t = build_t(g, bounds)?;
    let z = find_integer_point(&t, cap)?
        .ok_or_else(|| Error::Inconsistent("support polyhedron has no integer point although the condition holds".into()))?;
    let k = bounds.k as usize;
    let chosen: Vec<usize> = z.iter().collect();
    let mut counts = vec![0; g.n()];
    for v in 0..g.n() {
        counts[v] = k
            .checked_sub(t.ground.in_degree(z, v))
            .ok_or_else(|| Error::Inconsistent(format!("more than k arcs enter {v}")))?;
    }
    let directed = MixedHypergraph::new(g.n(), Vec::new(), chosen.iter().map(|&i| t.ground.dyperedge(i)).collect())?;
    let inner = match corollary1_pack(&directed, &RootMultiset::new(counts)?, k, cap)? {
        Outcome::Found(p) => p,
        Outcome::Violated(v) => {
            return Err(Error::Inconsistent(format!(
                "chosen support fails the regular packing condition ({} < {})",
                v.lhs, v.rhs
            )))
        }
    };
    let packing = Packing {
        members: inner
            .members
            .into_iter()
            .map(|mem| Member {
                root: mem.root,
                copy: None,
                uses: mem
                    .uses
                    .into_iter()
                    .map(|u| {
                        let Element::Dyperedge(j) = u.element else { unreachable!() };
                        Use { element: original_element(&t.ground, chosen[j]), ..u }
                    })
                    .collect(),
            })
            .collect(),
    };
    if let Some(d) = verify(g, &packing, &PackingSpec::bounded(bounds.clone()))? {
        return Err(Error::Inconsistent(format!("assembled packing is invalid: {d}")));
    }
    Ok(Outcome::Found(packing))
}

fn original_element(ground: &ExtendedGround, i: usize) -> Element {
    match ground.origin(i) {
        ExtendedOrigin::Dyperedge(d) => Element::Dyperedge(d),
        ExtendedOrigin::Hyperedge(h) => Element::Hyperedge(h),
    }
}

/// Every partial orientation `Z` of the extended ground that is exactly the
/// element set of some k-regular packing, with the forced root counts
/// `k - d⁻_Z(v)`.
pub fn packing_supports(g: &MixedHypergraph, k: usize, cap: u64) -> Result<Vec<(ElementSet, Vec<usize>)>> {
    let ground = ExtendedGround::new(g)?;
    let n = g.n();
    let mut budget = Budget::new(cap);
    let mut out = Vec::new();
    for z in ground.all().subsets() {
        budget.tick()?;
        if !ground.is_partial_orientation(z) {
            continue;
        }
        let degs: Vec<usize> = (0..n).map(|v| ground.in_degree(z, v)).collect();
        if degs.iter().any(|&d| d > k) {
            continue;
        }
        let roots: Vec<usize> = degs.iter().map(|&d| k - d).collect();
        let units = z
            .iter()
            .map(|i| {
                let d = ground.dyperedge(i);
                Unit {
                    element: original_element(&ground, i),
                    options: d.tails.iter().map(|t| (t, d.head)).collect(),
                    mandatory: true,
                }
            })
            .collect();
        let slots = (0..n)
            .flat_map(|v| (0..roots[v]).map(move |_| Slot { root: v, copy: None, fixed: None, class: v }))
            .collect();
        let problem = Problem { n, units, slots, regular: Some(k) };
        if search::solve(&problem, &mut budget)?.is_some() {
            out.push((z, roots));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::Witness;

    fn vs(items: &[usize]) -> VertexSet {
        items.iter().copied().collect()
    }

    #[test]
    fn corollary_examples() {
        let g = MixedHypergraph::new(2, vec![], vec![Dyperedge::arc(0, 1).unwrap()]).unwrap();
        let p = corollary1_pack(&g, &RootMultiset::new(vec![1, 0]).unwrap(), 1, 10_000).unwrap().found().unwrap();
        assert_eq!(p.members.len(), 1);
        assert_eq!(p.members[0].vertices(), vs(&[0, 1]));

        let p = corollary1_pack(&g, &RootMultiset::new(vec![0, 0]).unwrap(), 0, 10_000).unwrap().found().unwrap();
        assert!(p.members.is_empty());

        let lone = MixedHypergraph::digraph(1, &[]).unwrap();
        match corollary1_pack(&lone, &RootMultiset::new(vec![0]).unwrap(), 1, 10_000).unwrap() {
            Outcome::Violated(v) => assert_eq!(v.witness, Witness::Set(vs(&[0]))),
            Outcome::Found(_) => panic!("expected a violation"),
        }
    }

    #[test]
    fn exchange_step_uses_every_copy() {
        // the search may route b through a; the copy at b must still root a member
        let g = MixedHypergraph::digraph(2, &[(0, 1)]).unwrap();
        let p = corollary1_pack(&g, &RootMultiset::new(vec![1, 1]).unwrap(), 1, 10_000).unwrap().found().unwrap();
        assert_eq!(p.members.len(), 2);
    }

    #[test]
    fn mrb_free_matroid_strongly_connected() {
        let g = MixedHypergraph::new(3, vec![vs(&[0, 1])], vec![Dyperedge::arc(1, 2).unwrap(), Dyperedge::arc(2, 0).unwrap()]).unwrap();
        let p = mrb_mixed_pack(&g, &RootMultiset::new(vec![1, 0, 0]).unwrap(), Shared::new(Matroid::free(1)), 10_000)
            .unwrap()
            .found()
            .unwrap();
        assert_eq!(p.members.len(), 1);
        assert_eq!(p.members[0].vertices(), vs(&[0, 1, 2]));
    }

    #[test]
    fn main_examples() {
        let one = MixedHypergraph::digraph(1, &[]).unwrap();
        let p = main_pack(&one, &Bounds::new(vec![0], vec![1], 1, 1, 1).unwrap(), 10_000).unwrap().found().unwrap();
        assert_eq!(p.members.len(), 1);

        let g = MixedHypergraph::new(3, vec![vs(&[0, 2])], vec![Dyperedge::arc(0, 1).unwrap(), Dyperedge::arc(1, 2).unwrap()]).unwrap();
        let b = Bounds::new(vec![0; 3], vec![1; 3], 1, 1, 2).unwrap();
        assert!(main_pack(&g, &b, 1 << 20).unwrap().is_found());

        let two = MixedHypergraph::digraph(2, &[]).unwrap();
        let b = Bounds::new(vec![1, 1], vec![1, 1], 1, 1, 1).unwrap();
        assert!(!main_pack(&two, &b, 10_000).unwrap().is_found());
    }
}
