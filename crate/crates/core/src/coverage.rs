use std::collections::HashSet;

use crate::combinatorics::{binomial, BinomialTable};
use crate::hypergraph::Vertex;

/// Dense bitmaps are used up to this many k-subsets, hashing beyond.
const DENSE_LIMIT: u64 = 1 << 31;

/// Set of covered k-subsets of `0..n`, keyed by colex rank.
#[derive(Debug, Clone)]
pub struct CoverageMap {
    table: BinomialTable,
    repr: Repr,
    len: u64,
}

#[derive(Debug, Clone)]
enum Repr {
    Dense(Vec<u64>),
    Sparse(HashSet<u64>),
}

impl CoverageMap {
    pub fn new(n: usize, k: usize) -> Self {
        let total = binomial(n as u64, k as u64).unwrap_or(u64::MAX);
        let repr = if total <= DENSE_LIMIT {
            Repr::Dense(vec![0u64; total.div_ceil(64) as usize])
        } else {
            Repr::Sparse(HashSet::new())
        };
        CoverageMap {
            table: BinomialTable::new(n, k),
            repr,
            len: 0,
        }
    }

    /// Marks a sorted k-set; returns true if it was not marked before.
    #[inline]
    pub fn insert(&mut self, set: &[Vertex]) -> bool {
        let rank = self.table.rank(set);
        let fresh = match &mut self.repr {
            Repr::Dense(bits) => {
                let (word, bit) = ((rank / 64) as usize, rank % 64);
                let fresh = bits[word] & (1 << bit) == 0;
                bits[word] |= 1 << bit;
                fresh
            }
            Repr::Sparse(set) => set.insert(rank),
        };
        self.len += u64::from(fresh);
        fresh
    }

    #[inline]
    pub fn contains(&self, set: &[Vertex]) -> bool {
        let rank = self.table.rank(set);
        match &self.repr {
            Repr::Dense(bits) => bits[(rank / 64) as usize] & (1 << (rank % 64)) != 0,
            Repr::Sparse(set) => set.contains(&rank),
        }
    }

    /// Number of marked sets.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_reports_freshness() {
        let mut map = CoverageMap::new(6, 3);
        assert!(map.insert(&[0, 2, 5]));
        assert!(!map.insert(&[0, 2, 5]));
        assert!(map.contains(&[0, 2, 5]));
        assert!(!map.contains(&[0, 2, 4]));
        assert_eq!(map.len(), 1);
    }

    #[test]
    fn sparse_representation_for_huge_universes() {
        let mut map = CoverageMap::new(5000, 4);
        assert!(matches!(map.repr, Repr::Sparse(_)));
        assert!(map.insert(&[1, 2, 3, 4999]));
        assert!(map.contains(&[1, 2, 3, 4999]));
        assert!(!map.insert(&[1, 2, 3, 4999]));
    }
}
