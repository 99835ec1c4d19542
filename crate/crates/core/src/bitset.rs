//! Dense bitsets over a fixed universe, tagged with the space they index.
//!
//! `BitSet<Attr>` and `BitSet<Obj>` share one implementation but cannot be
//! mixed up: an attribute set never silently stands in for an object set.
//! [`BitSet::cast`] is the explicit escape hatch used by transposition.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::marker::PhantomData;

const WORD_BITS: usize = 64;

/// Marker for a universe of indices.
pub trait Space: Copy + Eq + Ord + Hash + fmt::Debug + Send + Sync + 'static {
    /// Single-letter label used in debug output.
    const LABEL: &'static str;
}

/// The attribute universe (columns of the original matrix).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attr;

/// The object universe (rows of the original matrix).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Obj;

impl Space for Attr {
    const LABEL: &'static str = "A";
}

impl Space for Obj {
    const LABEL: &'static str = "O";
}

pub type AttributeSet = BitSet<Attr>;
pub type ObjectSet = BitSet<Obj>;

pub struct BitSet<S> {
    words: Vec<u64>,
    len: usize,
    _space: PhantomData<S>,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

impl<S: Space> BitSet<S> {
    /// The empty set over a universe of `len` elements.
    pub fn empty(len: usize) -> Self {
        Self { words: vec![0; word_count(len)], len, _space: PhantomData }
    }

    /// The whole universe of `len` elements.
    pub fn full(len: usize) -> Self {
        let mut set = Self { words: vec![!0; word_count(len)], len, _space: PhantomData };
        set.trim();
        set
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut set = Self::empty(len);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// Size of the universe this set lives in, not the number of members.
    pub fn universe_len(&self) -> usize {
        self.len
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.len && self.words[index / WORD_BITS] >> (index % WORD_BITS) & 1 == 1
    }

    /// Panics if `index` is outside the universe.
    pub fn insert(&mut self, index: usize) {
        assert!(index < self.len, "index {index} outside universe of {}", self.len);
        self.words[index / WORD_BITS] |= 1 << (index % WORD_BITS);
    }

    pub fn remove(&mut self, index: usize) {
        if index < self.len {
            self.words[index / WORD_BITS] &= !(1 << (index % WORD_BITS));
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_superset(&self, other: &Self) -> bool {
        other.is_subset(self)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersect_with(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn complement(&self) -> Self {
        let mut out = Self { words: self.words.iter().map(|w| !w).collect(), len: self.len, _space: PhantomData };
        out.trim();
        out
    }

    /// True when both sets hold exactly the same members among indices `< bound`.
    pub fn agrees_below(&self, other: &Self, bound: usize) -> bool {
        debug_assert_eq!(self.len, other.len);
        let bound = bound.min(self.len);
        let full_words = bound / WORD_BITS;
        if self.words[..full_words] != other.words[..full_words] {
            return false;
        }
        let rest = bound % WORD_BITS;
        if rest == 0 {
            return true;
        }
        let mask = (1u64 << rest) - 1;
        (self.words[full_words] ^ other.words[full_words]) & mask == 0
    }

    /// Member indices in ascending order.
    pub fn iter(&self) -> Iter<'_> {
        Iter { words: &self.words, word_index: 0, current: self.words.first().copied().unwrap_or(0) }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Reinterpret the indices as belonging to another space of the same size.
    pub fn cast<T: Space>(&self) -> BitSet<T> {
        BitSet { words: self.words.clone(), len: self.len, _space: PhantomData }
    }

    /// Shortlex order on the ascending index sequence: fewer members first,
    /// then lexicographic.
    pub fn shortlex_cmp(&self, other: &Self) -> Ordering {
        self.count().cmp(&other.count()).then_with(|| self.iter().cmp(other.iter()))
    }

    fn trim(&mut self) {
        let rest = self.len % WORD_BITS;
        if rest != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rest) - 1;
            }
        }
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word_index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_index * WORD_BITS + bit);
            }
            self.word_index += 1;
            self.current = *self.words.get(self.word_index)?;
        }
    }
}

impl<'a, S: Space> IntoIterator for &'a BitSet<S> {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl<S> Clone for BitSet<S> {
    fn clone(&self) -> Self {
        Self { words: self.words.clone(), len: self.len, _space: PhantomData }
    }
}

impl<S> PartialEq for BitSet<S> {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.words == other.words
    }
}

impl<S> Eq for BitSet<S> {}

impl<S> Hash for BitSet<S> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.len.hash(state);
        self.words.hash(state);
    }
}

impl<S: Space> PartialOrd for BitSet<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex; see [`BitSet::shortlex_cmp`].
impl<S: Space> Ord for BitSet<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| self.shortlex_cmp(other))
    }
}

impl<S: Space> fmt::Debug for BitSet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", S::LABEL)?;
        f.debug_set().entries(self.iter()).finish()
    }
}
