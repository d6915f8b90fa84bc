//! Fixed-width bitsets over a universe `{0..len}`.
//!
//! Transactions, concept extents/intents and clusters are all index sets over
//! a small dense universe (the data points), so a word-parallel bitset is the
//! natural representation throughout the crate.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

const WORD_BITS: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A set of indices drawn from `{0..len}`.
///
/// Bits past `len` in the last word are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    /// Empty set over `{0..len}`.
    pub fn new(len: usize) -> Self {
        BitSet {
            len,
            words: alloc::vec![0; words_for(len)],
        }
    }

    /// The whole universe `{0..len}`.
    pub fn full(len: usize) -> Self {
        let mut set = BitSet {
            len,
            words: alloc::vec![u64::MAX; words_for(len)],
        };
        set.clear_tail();
        set
    }

    /// Builds a set from indices. Returns `None` if any index is `>= len`.
    pub fn from_indices<I>(len: usize, indices: I) -> Option<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut set = BitSet::new(len);
        for i in indices {
            if i >= len {
                return None;
            }
            set.insert(i);
        }
        Some(set)
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Size of the universe, not the number of members.
    #[inline]
    pub fn universe(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Number of members.
    #[inline]
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / WORD_BITS] & (1u64 << (i % WORD_BITS)) != 0
    }

    /// Panics if `i` is outside the universe.
    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(
            i < self.len,
            "index {i} outside universe of size {}",
            self.len
        );
        self.words[i / WORD_BITS] |= 1u64 << (i % WORD_BITS);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i / WORD_BITS] &= !(1u64 << (i % WORD_BITS));
        }
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    /// Overwrites `self` with the contents of `other` without reallocating.
    pub fn copy_from(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        self.words.copy_from_slice(&other.words);
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    /// `|self ∩ other|` without materializing the intersection.
    #[inline]
    pub fn intersection_count(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    #[inline]
    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    #[inline]
    pub fn is_disjoint(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// True if `self` and `other` agree on every index below `bound`.
    pub fn eq_below(&self, other: &BitSet, bound: usize) -> bool {
        let full = bound / WORD_BITS;
        if self.words[..full] != other.words[..full] {
            return false;
        }
        let rem = bound % WORD_BITS;
        if rem == 0 {
            return true;
        }
        let mask = (1u64 << rem) - 1;
        (self.words[full] ^ other.words[full]) & mask == 0
    }

    /// Ascending iterator over members.
    pub fn iter(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

/// Orders sets over the same universe lexicographically by their ascending
/// member lists, so `{0, 5} < {1} < {1, 2}` and `{} < {0}`.
impl Ord for BitSet {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.len.cmp(&other.len) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (wi, (&a, &b)) in self.words.iter().zip(&other.words).enumerate() {
            let diff = a ^ b;
            if diff == 0 {
                continue;
            }
            let bit = diff.trailing_zeros() as usize;
            // Whoever holds the lowest differing bit is smaller, unless the
            // other set has no members past it (then the other is a prefix).
            let self_holds = a & (1u64 << bit) != 0;
            let rest = if self_holds {
                &other.words
            } else {
                &self.words
            };
            let above = if bit == 63 { 0 } else { !0u64 << (bit + 1) };
            let rest_continues = rest[wi] & above != 0 || rest[wi + 1..].iter().any(|&w| w != 0);
            return if self_holds == rest_continues {
                Ordering::Less
            } else {
                Ordering::Greater
            };
        }
        Ordering::Equal
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterator over the members of a [`BitSet`].
pub struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD_BITS + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

/// Orders clusters by ascending size, then lexicographically by members.
pub fn cmp_size_then_members(a: &BitSet, b: &BitSet) -> Ordering {
    a.count().cmp(&b.count()).then_with(|| a.cmp(b))
}
