//! Small fixed-capacity index sets.

use std::fmt;

/// A set of indices in `0..64`, stored as a bit mask.
///
/// Used for subsets of finite carriers (points of a finite space, atoms of a
/// sector, members of a filter in a small lattice).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitSet(pub u64);

impl BitSet {
    pub const CAPACITY: usize = 64;

    pub const fn empty() -> Self {
        BitSet(0)
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= Self::CAPACITY, "BitSet holds at most 64 indices");
        if n == 64 {
            BitSet(u64::MAX)
        } else {
            BitSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        BitSet(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(BitSet(0), |s, i| s.with(i))
    }

    #[must_use]
    pub fn with(self, i: usize) -> Self {
        assert!(i < Self::CAPACITY);
        BitSet(self.0 | (1u64 << i))
    }

    #[must_use]
    pub fn without(self, i: usize) -> Self {
        BitSet(self.0 & !(1u64 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        i < Self::CAPACITY && self.0 & (1u64 << i) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Self) -> Self {
        BitSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        BitSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        BitSet(self.0 & !other.0)
    }

    /// Complement relative to `{0, .., n-1}`.
    pub fn complement(self, n: usize) -> Self {
        Self::full(n).difference(self)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for BitSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Self::from_indices(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = BitSet::from_indices([0, 2, 5]);
        let b = BitSet::from_indices([2, 3]);
        assert_eq!(a.intersection(b).to_vec(), vec![2]);
        assert_eq!(a.union(b).len(), 4);
        assert_eq!(a.complement(6).to_vec(), vec![1, 3, 4]);
        assert!(BitSet::singleton(2).is_subset(a));
        assert_eq!(a.min(), Some(0));
        assert_eq!(BitSet::full(64).len(), 64);
    }
}
