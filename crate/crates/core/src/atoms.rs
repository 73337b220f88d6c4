//! Fixed-universe bit sets of interned atoms.
//!
//! An [`AtomSet`] is a set of dense atom ids. Trailing zero words are never
//! stored, so two sets are equal exactly when they contain the same ids,
//! regardless of how they were built.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

const WORD: usize = 64;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct AtomSet {
    words: Vec<u64>,
}

impl AtomSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// The set `{0, 1, ..., n - 1}`.
    pub fn full(n: usize) -> Self {
        let mut words = vec![u64::MAX; n / WORD];
        if !n.is_multiple_of(WORD) {
            words.push((1u64 << (n % WORD)) - 1);
        }
        Self { words }
    }

    pub fn singleton(id: usize) -> Self {
        let mut s = Self::new();
        s.insert(id);
        s
    }

    pub fn from_ids<I: IntoIterator<Item = usize>>(ids: I) -> Self {
        let mut s = Self::new();
        for id in ids {
            s.insert(id);
        }
        s
    }

    /// Builds a set from the low `n` bits of a mask.
    pub fn from_mask(mask: u64) -> Self {
        let mut s = Self { words: vec![mask] };
        s.trim();
        s
    }

    /// The first 64 ids as a mask.
    pub fn low_mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    /// Largest id plus one, or zero for the empty set.
    pub fn bound(&self) -> usize {
        match self.words.last() {
            None => 0,
            Some(w) => (self.words.len() - 1) * WORD + (WORD - w.leading_zeros() as usize),
        }
    }

    pub fn insert(&mut self, id: usize) -> bool {
        let (w, b) = (id / WORD, id % WORD);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, id: usize) -> bool {
        let (w, b) = (id / WORD, id % WORD);
        if w >= self.words.len() {
            return false;
        }
        let present = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        self.trim();
        present
    }

    pub fn contains(&self, id: usize) -> bool {
        let (w, b) = (id / WORD, id % WORD);
        self.words.get(w).is_some_and(|x| x & (1 << b) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.words.len() <= other.words.len()
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &AtomSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn union_with(&mut self, other: &AtomSet) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &AtomSet) {
        self.words.truncate(other.words.len());
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        self.trim();
    }

    pub fn difference_with(&mut self, other: &AtomSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        self.trim();
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * WORD + b)
            })
        })
    }

    /// Every subset of `self`, in size-then-lexicographic order of ids.
    pub fn subsets(&self) -> Vec<AtomSet> {
        self.subsets_up_to(usize::MAX)
    }

    /// Subsets with at most `k` elements, in size-then-lexicographic order.
    pub fn subsets_up_to(&self, k: usize) -> Vec<AtomSet> {
        let ids: Vec<usize> = self.iter().collect();
        let mut out = vec![AtomSet::new()];
        let mut layer: Vec<(AtomSet, usize)> = vec![(AtomSet::new(), 0)];
        for _ in 0..k.min(ids.len()) {
            let mut next = Vec::new();
            for (set, from) in &layer {
                for (j, &id) in ids.iter().enumerate().skip(*from) {
                    let mut s = set.clone();
                    s.insert(id);
                    next.push((s, j + 1));
                }
            }
            out.extend(next.iter().map(|(s, _)| s.clone()));
            layer = next;
        }
        out
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

impl FromIterator<usize> for AtomSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_ids(iter)
    }
}

impl BitOr for &AtomSet {
    type Output = AtomSet;
    fn bitor(self, rhs: &AtomSet) -> AtomSet {
        let mut out = self.clone();
        out.union_with(rhs);
        out
    }
}

impl BitAnd for &AtomSet {
    type Output = AtomSet;
    fn bitand(self, rhs: &AtomSet) -> AtomSet {
        let mut out = self.clone();
        out.intersect_with(rhs);
        out
    }
}

impl Sub for &AtomSet {
    type Output = AtomSet;
    fn sub(self, rhs: &AtomSet) -> AtomSet {
        let mut out = self.clone();
        out.difference_with(rhs);
        out
    }
}

// Lexicographic on the sorted id sequence.
impl Ord for AtomSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for AtomSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_bound() {
        assert_eq!(AtomSet::full(0), AtomSet::new());
        assert_eq!(AtomSet::full(3).iter().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(AtomSet::full(64).len(), 64);
        assert_eq!(AtomSet::full(65).len(), 65);
        assert_eq!(AtomSet::full(65).bound(), 65);
        assert_eq!(AtomSet::singleton(70).bound(), 71);
    }

    #[test]
    fn removal_keeps_equality_canonical() {
        let mut a = AtomSet::from_ids([1, 100]);
        a.remove(100);
        assert_eq!(a, AtomSet::singleton(1));
        let b = &AtomSet::from_ids([1, 130]) - &AtomSet::singleton(130);
        assert_eq!(b, AtomSet::singleton(1));
    }

    #[test]
    fn set_algebra() {
        let a = AtomSet::from_ids([0, 2, 65]);
        let b = AtomSet::from_ids([2, 3]);
        assert_eq!(&a | &b, AtomSet::from_ids([0, 2, 3, 65]));
        assert_eq!(&a & &b, AtomSet::singleton(2));
        assert_eq!(&a - &b, AtomSet::from_ids([0, 65]));
        assert!(AtomSet::singleton(2).is_subset(&a));
        assert!(!b.is_subset(&a));
        assert!(AtomSet::from_ids([0, 65]).is_disjoint(&b));
    }

    #[test]
    fn subsets_are_size_then_lex() {
        let s = AtomSet::from_ids([1, 4, 7]);
        let all = s.subsets();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], AtomSet::new());
        assert_eq!(all[1], AtomSet::singleton(1));
        assert_eq!(all[4], AtomSet::from_ids([1, 4]));
        assert_eq!(all[7], s);
        assert_eq!(s.subsets_up_to(1).len(), 4);
        assert_eq!(s.subsets_up_to(0), vec![AtomSet::new()]);
    }
}
