//! Component-rooted families and the projection of a set onto the
//! strongly connected components.

use crate::error::Result;
use crate::graph::MixedHypergraph;
use crate::sets::{Budget, VertexSet};

/// For a component `C`: the sets `Z ⊆ P^C` meeting `C` with nothing entering
/// `Z - C`, in canonical subset order.
pub fn candidates(g: &MixedHypergraph, comp: VertexSet, budget: &mut Budget) -> Result<Vec<VertexSet>> {
    let above = g.reach_to_unchecked(comp);
    let mut out = Vec::new();
    for z in above.subsets() {
        budget.tick()?;
        if z.intersects(comp) && g.e_count(z - comp) == 0 {
            out.push(z);
        }
    }
    Ok(out)
}

/// Visit every nonempty family of candidates with pairwise disjoint traces
/// on `comp`, in lexicographic order of candidate indices. The visitor returns
/// `true` to stop.
pub fn for_each_family(
    comp: VertexSet,
    cands: &[VertexSet],
    budget: &mut Budget,
    visit: &mut dyn FnMut(&[VertexSet]) -> bool,
) -> Result<bool> {
    fn rec(
        comp: VertexSet,
        cands: &[VertexSet],
        from: usize,
        used: VertexSet,
        stack: &mut Vec<VertexSet>,
        budget: &mut Budget,
        visit: &mut dyn FnMut(&[VertexSet]) -> bool,
    ) -> Result<bool> {
        for i in from..cands.len() {
            let trace = cands[i] & comp;
            if trace.intersects(used) {
                continue;
            }
            budget.tick()?;
            stack.push(cands[i]);
            if visit(stack) || rec(comp, cands, i + 1, used | trace, stack, budget, visit)? {
                return Ok(true);
            }
            stack.pop();
        }
        Ok(false)
    }
    rec(comp, cands, 0, VertexSet::EMPTY, &mut Vec::new(), budget, visit)
}

/// The pieces `(C_j, X_j)` of `set` over the topologically ordered components:
/// `X_j` is `set ∩ C_j` together with `P^{C_i}` for every other met component
/// `C_i` that can reach `C_j`.
pub fn scc_projection(g: &MixedHypergraph, set: VertexSet) -> Vec<(VertexSet, VertexSet)> {
    let comps = g.scc_condense();
    let met: Vec<VertexSet> = comps.into_iter().filter(|c| c.intersects(set)).collect();
    met.iter()
        .map(|&cj| {
            let above = g.reach_to_unchecked(cj);
            let mut xj = set & cj;
            for &ci in &met {
                if ci != cj && ci.is_subset(above) {
                    xj |= g.reach_to_unchecked(ci);
                }
            }
            (cj, xj)
        })
        .collect()
}
