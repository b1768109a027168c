//! Bitmask sets over dense indices, canonical enumeration orders, and the
//! enumeration budget shared by every exhaustive routine.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Sub, SubAssign};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default bound on enumerated items for every exhaustive search.
pub const DEFAULT_CAP: u64 = 10_000_000;

macro_rules! bitset {
    ($(#[$meta:meta])* $name:ident, $repr:ty, $limit:expr) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(pub $repr);

        impl $name {
            pub const EMPTY: Self = Self(0);
            pub const CAPACITY: usize = $limit;

            /// The set `{0, .., n-1}`.
            pub fn full(n: usize) -> Self {
                debug_assert!(n <= Self::CAPACITY);
                if n >= Self::CAPACITY {
                    Self(<$repr>::MAX)
                } else {
                    Self(((1 as $repr) << n) - 1)
                }
            }

            pub fn singleton(i: usize) -> Self {
                Self((1 as $repr) << i)
            }

            pub fn bits(self) -> $repr {
                self.0
            }

            pub fn contains(self, i: usize) -> bool {
                i < Self::CAPACITY && self.0 >> i & 1 == 1
            }

            pub fn insert(&mut self, i: usize) {
                self.0 |= (1 as $repr) << i;
            }

            pub fn remove(&mut self, i: usize) {
                self.0 &= !((1 as $repr) << i);
            }

            pub fn with(self, i: usize) -> Self {
                Self(self.0 | (1 as $repr) << i)
            }

            pub fn without(self, i: usize) -> Self {
                Self(self.0 & !((1 as $repr) << i))
            }

            pub fn len(self) -> usize {
                self.0.count_ones() as usize
            }

            pub fn is_empty(self) -> bool {
                self.0 == 0
            }

            pub fn is_subset(self, other: Self) -> bool {
                self.0 & !other.0 == 0
            }

            pub fn intersects(self, other: Self) -> bool {
                self.0 & other.0 != 0
            }

            pub fn first(self) -> Option<usize> {
                (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
            }

            pub fn last(self) -> Option<usize> {
                (self.0 != 0).then(|| (<$repr>::BITS - 1 - self.0.leading_zeros()) as usize)
            }

            pub fn iter(self) -> impl Iterator<Item = usize> + Clone {
                let mut rest = self.0;
                std::iter::from_fn(move || {
                    if rest == 0 {
                        None
                    } else {
                        let i = rest.trailing_zeros() as usize;
                        rest &= rest - 1;
                        Some(i)
                    }
                })
            }

            /// Every subset of `self`, by increasing size and then
            /// lexicographically on the sorted index tuple.
            pub fn subsets(self) -> impl Iterator<Item = Self> {
                let members: Vec<usize> = self.iter().collect();
                let order = canonical_order(members.len());
                order.iter().map(move |&code| {
                    let mut out: $repr = 0;
                    let mut c = code;
                    while c != 0 {
                        let j = c.trailing_zeros() as usize;
                        out |= (1 as $repr) << members[j];
                        c &= c - 1;
                    }
                    Self(out)
                })
            }

            /// Subsets of `self` in plain numeric submask order (cheaper; used
            /// where the visiting order does not leak into results).
            pub fn submasks(self) -> impl Iterator<Item = Self> {
                let full = self.0;
                let mut next = Some(0 as $repr);
                std::iter::from_fn(move || {
                    let cur = next?;
                    next = if cur == full {
                        None
                    } else {
                        Some((cur.wrapping_sub(full)) & full)
                    };
                    Some(Self(cur))
                })
            }
        }

        impl BitAnd for $name {
            type Output = Self;
            fn bitand(self, rhs: Self) -> Self {
                Self(self.0 & rhs.0)
            }
        }

        impl BitOr for $name {
            type Output = Self;
            fn bitor(self, rhs: Self) -> Self {
                Self(self.0 | rhs.0)
            }
        }

        impl Sub for $name {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                Self(self.0 & !rhs.0)
            }
        }

        impl BitAndAssign for $name {
            fn bitand_assign(&mut self, rhs: Self) {
                self.0 &= rhs.0;
            }
        }

        impl BitOrAssign for $name {
            fn bitor_assign(&mut self, rhs: Self) {
                self.0 |= rhs.0;
            }
        }

        impl SubAssign for $name {
            fn sub_assign(&mut self, rhs: Self) {
                self.0 &= !rhs.0;
            }
        }

        impl FromIterator<usize> for $name {
            fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
                let mut s = Self::EMPTY;
                for i in iter {
                    s.insert(i);
                }
                s
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_set().entries(self.iter()).finish()
            }
        }
    };
}

bitset!(
    /// A set of vertices, one bit per vertex index.
    VertexSet,
    u32,
    32
);

bitset!(
    /// A set of ground elements (root copies, edges, or extended dyperedges).
    ElementSet,
    u64,
    64
);

/// Codes `0..2^m` sorted by popcount, then lexicographically on the index
/// tuple. Cached per `m`.
fn canonical_order(m: usize) -> &'static [u64] {
    const MAX_CACHED: usize = 24;
    static TABLES: OnceLock<Vec<OnceLock<Vec<u64>>>> = OnceLock::new();
    assert!(m <= MAX_CACHED, "canonical subset order requested for {m} > {MAX_CACHED} items");
    let tables = TABLES.get_or_init(|| (0..=MAX_CACHED).map(|_| OnceLock::new()).collect());
    tables[m].get_or_init(|| {
        let mut codes: Vec<u64> = (0..1u64 << m).collect();
        codes.sort_by(|&a, &b| {
            a.count_ones().cmp(&b.count_ones()).then_with(|| {
                if a == b {
                    std::cmp::Ordering::Equal
                } else {
                    // the set holding the lowest differing index comes first
                    let low = (a ^ b) & (a ^ b).wrapping_neg();
                    if a & low != 0 {
                        std::cmp::Ordering::Less
                    } else {
                        std::cmp::Ordering::Greater
                    }
                }
            })
        });
        codes
    })
}

/// Restricted-growth-string enumeration of set partitions.
///
/// With `with_uncovered`, a phantom block collects the elements left out, so
/// the iterator yields every subpartition of the ground (the empty one first).
/// Without it, it yields every partition of the ground.
#[derive(Debug, Clone)]
pub struct BlockIter {
    members: Vec<usize>,
    labels: Vec<usize>,
    with_uncovered: bool,
    done: bool,
}

impl BlockIter {
    fn new(ground: VertexSet, with_uncovered: bool) -> Self {
        let members: Vec<usize> = ground.iter().collect();
        let done = false;
        Self {
            labels: vec![0; members.len()],
            members,
            with_uncovered,
            done,
        }
    }

    fn blocks(&self) -> Vec<VertexSet> {
        let top = self.labels.iter().copied().max().unwrap_or(0);
        let first = usize::from(self.with_uncovered);
        (first..=top)
            .map(|label| {
                self.members
                    .iter()
                    .zip(&self.labels)
                    .filter(|(_, &l)| l == label)
                    .map(|(&v, _)| v)
                    .collect::<VertexSet>()
            })
            .filter(|b| !b.is_empty())
            .collect()
    }

    fn advance(&mut self) {
        let m = self.labels.len();
        // label bound for position i is (max of earlier labels) + 1; without the
        // phantom block the first element is pinned to label 0
        for i in (0..m).rev() {
            let prefix_max = self.labels[..i].iter().copied().max();
            let limit = match prefix_max {
                Some(p) => p + 1,
                None if self.with_uncovered => 1,
                None => 0,
            };
            if self.labels[i] < limit {
                self.labels[i] += 1;
                for l in &mut self.labels[i + 1..] {
                    *l = 0;
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for BlockIter {
    type Item = Vec<VertexSet>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let out = self.blocks();
        self.advance();
        Some(out)
    }
}

/// Every subpartition of `ground`, starting with the empty subpartition.
pub fn subpartitions(ground: VertexSet) -> BlockIter {
    BlockIter::new(ground, true)
}

/// Every partition of `ground` (a single empty partition when `ground` is empty).
pub fn partitions(ground: VertexSet) -> BlockIter {
    BlockIter::new(ground, false)
}

/// Counts enumerated items and fails once the cap is passed.
#[derive(Debug, Clone)]
pub struct Budget {
    cap: u64,
    used: u64,
}

impl Budget {
    pub fn new(cap: u64) -> Self {
        Self { cap, used: 0 }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn tick(&mut self) -> Result<()> {
        self.charge(1)
    }

    pub fn charge(&mut self, n: u64) -> Result<()> {
        self.used = self.used.saturating_add(n);
        if self.used > self.cap {
            Err(Error::CapExceeded { cap: self.cap })
        } else {
            Ok(())
        }
    }

    /// Fails up front when a search of `n` items could never fit.
    pub fn require(&self, n: u64) -> Result<()> {
        if n > self.cap {
            Err(Error::CapExceeded { cap: self.cap })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::new(DEFAULT_CAP)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(items: &[usize]) -> VertexSet {
        items.iter().copied().collect()
    }

    #[test]
    fn subsets_by_size_then_lex() {
        let got: Vec<Vec<usize>> = VertexSet::full(4)
            .subsets()
            .filter(|s| s.len() == 2)
            .map(|s| s.iter().collect())
            .collect();
        assert_eq!(
            got,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        let all: Vec<VertexSet> = vs(&[1, 4]).subsets().collect();
        assert_eq!(all, vec![vs(&[]), vs(&[1]), vs(&[4]), vs(&[1, 4])]);
    }

    #[test]
    fn submasks_cover_everything_once() {
        let g = vs(&[0, 2, 3]);
        let mut got: Vec<u32> = g.submasks().map(|s| s.0).collect();
        got.sort();
        assert_eq!(got, vec![0, 1, 4, 5, 8, 9, 12, 13]);
    }

    #[test]
    fn bell_numbers() {
        // partitions of an m-set: Bell(m); subpartitions: Bell(m+1)
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for m in 0..6 {
            assert_eq!(partitions(VertexSet::full(m)).count(), bell[m], "partitions of {m}");
            assert_eq!(subpartitions(VertexSet::full(m)).count(), bell[m + 1], "subpartitions of {m}");
        }
    }

    #[test]
    fn subpartitions_start_empty_and_are_disjoint() {
        let mut it = subpartitions(vs(&[0, 1, 2]));
        assert!(it.next().unwrap().is_empty());
        for p in subpartitions(vs(&[0, 1, 2, 5])) {
            let mut seen = VertexSet::EMPTY;
            for part in &p {
                assert!(!part.is_empty());
                assert!(!part.intersects(seen));
                seen |= *part;
            }
        }
    }

    #[test]
    fn partition_of_empty_ground() {
        let all: Vec<_> = partitions(VertexSet::EMPTY).collect();
        assert_eq!(all, vec![Vec::<VertexSet>::new()]);
    }

    #[test]
    fn budget_trips() {
        let mut b = Budget::new(2);
        assert!(b.tick().is_ok());
        assert!(b.tick().is_ok());
        assert!(matches!(b.tick(), Err(Error::CapExceeded { cap: 2 })));
    }
}
