//! Fixed-width attribute sets.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Not, Sub, SubAssign};

/// A set of attribute positions, stored as a 64-bit word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct AttrSet(u64);

impl AttrSet {
    pub const EMPTY: AttrSet = AttrSet(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        AttrSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn singleton(attr: usize) -> Self {
        debug_assert!(attr < 64);
        AttrSet(1u64 << attr)
    }

    /// `{0, .., n-1}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 64);
        if n == 64 {
            AttrSet(u64::MAX)
        } else {
            AttrSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn contains(self, attr: usize) -> bool {
        attr < 64 && self.0 & (1u64 << attr) != 0
    }

    #[inline]
    pub fn insert(&mut self, attr: usize) {
        self.0 |= 1u64 << attr;
    }

    #[inline]
    pub fn remove(&mut self, attr: usize) {
        self.0 &= !(1u64 << attr);
    }

    #[inline]
    pub fn with(mut self, attr: usize) -> Self {
        self.insert(attr);
        self
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_subset(self, other: AttrSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_superset(self, other: AttrSet) -> bool {
        other.is_subset(self)
    }

    #[inline]
    pub fn intersects(self, other: AttrSet) -> bool {
        self.0 & other.0 != 0
    }

    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in ascending order.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// Complement relative to `{0, .., n-1}`.
    #[inline]
    pub fn complement(self, n: usize) -> Self {
        AttrSet(!self.0) & AttrSet::full(n)
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl IntoIterator for AttrSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for AttrSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = AttrSet::EMPTY;
        for a in iter {
            s.insert(a);
        }
        s
    }
}

impl BitOr for AttrSet {
    type Output = AttrSet;
    #[inline]
    fn bitor(self, rhs: AttrSet) -> AttrSet {
        AttrSet(self.0 | rhs.0)
    }
}

impl BitOrAssign for AttrSet {
    #[inline]
    fn bitor_assign(&mut self, rhs: AttrSet) {
        self.0 |= rhs.0;
    }
}

impl BitAnd for AttrSet {
    type Output = AttrSet;
    #[inline]
    fn bitand(self, rhs: AttrSet) -> AttrSet {
        AttrSet(self.0 & rhs.0)
    }
}

impl BitAndAssign for AttrSet {
    #[inline]
    fn bitand_assign(&mut self, rhs: AttrSet) {
        self.0 &= rhs.0;
    }
}

impl Sub for AttrSet {
    type Output = AttrSet;
    #[inline]
    fn sub(self, rhs: AttrSet) -> AttrSet {
        AttrSet(self.0 & !rhs.0)
    }
}

impl SubAssign for AttrSet {
    #[inline]
    fn sub_assign(&mut self, rhs: AttrSet) {
        self.0 &= !rhs.0;
    }
}

impl Not for AttrSet {
    type Output = AttrSet;
    #[inline]
    fn not(self) -> AttrSet {
        AttrSet(!self.0)
    }
}

impl fmt::Debug for AttrSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a: AttrSet = [0, 2, 5].into_iter().collect();
        let b: AttrSet = [2, 3].into_iter().collect();
        assert_eq!((a | b).iter().collect::<Vec<_>>(), vec![0, 2, 3, 5]);
        assert_eq!((a & b).iter().collect::<Vec<_>>(), vec![2]);
        assert_eq!((a - b).iter().collect::<Vec<_>>(), vec![0, 5]);
        assert!(AttrSet::singleton(2).is_subset(a));
        assert!(!b.is_subset(a));
        assert_eq!(a.complement(6).iter().collect::<Vec<_>>(), vec![1, 3, 4]);
        assert_eq!(AttrSet::full(64).len(), 64);
        assert_eq!(a.first(), Some(0));
        assert_eq!(AttrSet::EMPTY.first(), None);
    }
}
