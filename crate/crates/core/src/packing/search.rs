//! Backtracking search assigning elements to members of a packing.
//!
//! Elements are decided in order. Each one is either left out (unless it is
//! mandatory) or given to a member together with a tail and a head, which is
//! the trimmed arc it contributes. A member stays a forest hanging from its
//! root throughout: heads are fresh vertices of the member and an arc closing
//! a cycle is refused.

use std::collections::HashSet;

use crate::error::Result;
use crate::graph::Element;
use crate::sets::{Budget, VertexSet};

use super::{Member, Use};

/// Failed states kept per search; beyond this the memo stops growing.
const MEMO_LIMIT: usize = 1 << 20;
const NONE: u8 = u8::MAX;

#[derive(Debug, Clone)]
pub(crate) struct Unit {
    pub element: Element,
    /// Admissible `(tail, head)` pairs.
    pub options: Vec<(usize, usize)>,
    pub mandatory: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct Slot {
    pub root: usize,
    pub copy: Option<usize>,
    /// The exact vertex set the member must end with, if prescribed.
    pub fixed: Option<VertexSet>,
    /// Slots in the same class are interchangeable while empty.
    pub class: usize,
}

pub(crate) struct Problem {
    pub n: usize,
    pub units: Vec<Unit>,
    pub slots: Vec<Slot>,
    /// Every vertex must lie in exactly this many members.
    pub regular: Option<usize>,
}

struct State {
    parent: Vec<Vec<u8>>,
    verts: Vec<VertexSet>,
    uses: Vec<Vec<Use>>,
    counts: Vec<usize>,
}

struct Runner<'a> {
    p: &'a Problem,
    // avail[i][v]: units from i on that can put an arc into v
    avail: Vec<Vec<usize>>,
    memo: HashSet<Vec<u8>>,
    budget: &'a mut Budget,
}

/// Run the search; the first packing in canonical order, if any.
pub(crate) fn solve(p: &Problem, budget: &mut Budget) -> Result<Option<Vec<Member>>> {
    let n = p.n;
    let mut avail = vec![vec![0; n]; p.units.len() + 1];
    for i in (0..p.units.len()).rev() {
        avail[i] = avail[i + 1].clone();
        let heads: VertexSet = p.units[i].options.iter().map(|o| o.1).collect();
        for v in heads.iter() {
            avail[i][v] += 1;
        }
    }
    let mut counts = vec![0; n];
    for s in &p.slots {
        counts[s.root] += 1;
    }
    if let Some(k) = p.regular {
        if counts.iter().any(|&c| c > k) {
            return Ok(None);
        }
    }
    let mut state = State {
        parent: vec![vec![NONE; n]; p.slots.len()],
        verts: p.slots.iter().map(|s| VertexSet::singleton(s.root)).collect(),
        uses: vec![Vec::new(); p.slots.len()],
        counts,
    };
    if p.slots.iter().any(|s| s.fixed.is_some_and(|t| !t.contains(s.root))) {
        return Ok(None);
    }
    let mut runner = Runner { p, avail, memo: HashSet::new(), budget };
    if runner.step(0, &mut state)? {
        Ok(Some(
            p.slots
                .iter()
                .zip(state.uses)
                .map(|(s, uses)| Member { root: s.root, copy: s.copy, uses })
                .collect(),
        ))
    } else {
        Ok(None)
    }
}

impl Runner<'_> {
    fn step(&mut self, i: usize, st: &mut State) -> Result<bool> {
        self.budget.tick()?;
        if i == self.p.units.len() {
            return Ok(self.complete(st));
        }
        if !self.may_finish(i, st) {
            return Ok(false);
        }
        let key = self.key(i, st);
        if self.memo.contains(&key) {
            return Ok(false);
        }
        let unit = &self.p.units[i];
        for s in 0..self.p.slots.len() {
            if self.shadowed(s, st) {
                continue;
            }
            let slot = &self.p.slots[s];
            for &(tail, head) in &unit.options {
                if head == slot.root || st.verts[s].contains(head) {
                    continue;
                }
                if let Some(t) = slot.fixed {
                    if !t.contains(head) || !t.contains(tail) {
                        continue;
                    }
                }
                if self.p.regular.is_some_and(|k| st.counts[head] >= k) {
                    continue;
                }
                if closes_cycle(&st.parent[s], tail, head) {
                    continue;
                }
                st.parent[s][head] = tail as u8;
                st.verts[s].insert(head);
                st.counts[head] += 1;
                st.uses[s].push(Use { element: unit.element, tail, head });
                if self.step(i + 1, st)? {
                    return Ok(true);
                }
                st.uses[s].pop();
                st.counts[head] -= 1;
                st.verts[s].remove(head);
                st.parent[s][head] = NONE;
            }
        }
        if !unit.mandatory && self.step(i + 1, st)? {
            return Ok(true);
        }
        if self.memo.len() < MEMO_LIMIT {
            self.memo.insert(key);
        }
        Ok(false)
    }

    // an empty slot is skipped when an earlier empty slot of its class exists
    fn shadowed(&self, s: usize, st: &State) -> bool {
        if !st.uses[s].is_empty() {
            return false;
        }
        let class = self.p.slots[s].class;
        (0..s).any(|t| st.uses[t].is_empty() && self.p.slots[t].class == class)
    }

    fn may_finish(&self, i: usize, st: &State) -> bool {
        let remaining = self.p.units.len() - i;
        let mut total = 0;
        for v in 0..self.p.n {
            let need = match self.p.regular {
                Some(k) => k - st.counts[v],
                None => (0..self.p.slots.len())
                    .filter(|&s| self.p.slots[s].fixed.is_some_and(|t| t.contains(v)) && !st.verts[s].contains(v))
                    .count(),
            };
            if need > self.avail[i][v] {
                return false;
            }
            total += need;
        }
        total <= remaining
    }

    fn complete(&self, st: &State) -> bool {
        for (s, slot) in self.p.slots.iter().enumerate() {
            let verts = st.verts[s];
            if slot.fixed.is_some_and(|t| t != verts) {
                return false;
            }
            if st.uses[s].iter().any(|u| !verts.contains(u.tail)) {
                return false;
            }
        }
        match self.p.regular {
            Some(k) => st.counts.iter().all(|&c| c == k),
            None => true,
        }
    }

    fn key(&self, i: usize, st: &State) -> Vec<u8> {
        let mut key = Vec::with_capacity(2 + st.parent.len() * self.p.n);
        key.extend_from_slice(&(i as u16).to_le_bytes());
        for parent in &st.parent {
            key.extend_from_slice(parent);
        }
        key
    }
}

fn closes_cycle(parent: &[u8], tail: usize, head: usize) -> bool {
    let mut v = tail;
    loop {
        if v == head {
            return true;
        }
        match parent[v] {
            NONE => return false,
            p => v = p as usize,
        }
    }
}
