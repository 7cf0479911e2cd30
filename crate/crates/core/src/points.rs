//! Subsets of a small ground set `[0, n)` packed into a single machine word.

use std::fmt;

/// Largest ground set supported by [`PointSet`] and everything built on it.
pub const MAX_POINTS: usize = 16;

/// A subset of `[0, MAX_POINTS)` stored as a bit mask (bit `x` set iff `x` is a member).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct PointSet(u32);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    /// `[0, n)`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_POINTS);
        PointSet(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(x: usize) -> Self {
        debug_assert!(x < MAX_POINTS);
        PointSet(1 << x)
    }

    pub fn from_bits(bits: u32) -> Self {
        PointSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, x: usize) -> bool {
        x < 32 && self.0 & (1 << x) != 0
    }

    pub fn insert(&mut self, x: usize) {
        self.0 |= 1 << x;
    }

    pub fn remove(&mut self, x: usize) {
        self.0 &= !(1 << x);
    }

    pub fn with(mut self, x: usize) -> Self {
        self.insert(x);
        self
    }

    pub fn without(mut self, x: usize) -> Self {
        self.remove(x);
        self
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        PointSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        PointSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        PointSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in ascending order.
    pub fn iter(self) -> Points {
        Points(self.0)
    }

    /// Lexicographic comparison of the ascending member lists.
    pub fn cmp_lex(self, other: Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }

    /// Every subset of `self`, in increasing order of the underlying mask.
    pub fn subsets(self) -> impl Iterator<Item = PointSet> {
        let mask = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            // standard "next submask in increasing order" step
            next = if cur == mask {
                None
            } else {
                Some(((cur | !mask).wrapping_add(1)) & mask)
            };
            Some(PointSet(cur))
        })
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = PointSet::EMPTY;
        for x in iter {
            set.insert(x);
        }
        set
    }
}

impl IntoIterator for PointSet {
    type Item = usize;
    type IntoIter = Points;

    fn into_iter(self) -> Points {
        self.iter()
    }
}

/// Iterator over the members of a [`PointSet`].
#[derive(Clone)]
pub struct Points(u32);

impl Iterator for Points {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(x)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Points {}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}
