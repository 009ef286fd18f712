//! Dense satisfaction sets over cell indices.

use std::fmt;

const WORD_BITS: usize = 64;

/// A dense boolean vector indexed by cell, packed 64 cells per word.
///
/// Bits past `len` in the last word are always zero, so word-wise equality,
/// hashing and popcounts need no masking.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SatSet {
    len: usize,
    words: Vec<u64>,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

impl SatSet {
    pub fn empty(len: usize) -> Self {
        SatSet {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut set = SatSet {
            len,
            words: vec![!0; word_count(len)],
        };
        set.clear_tail();
        set
    }

    pub fn from_bools(values: &[bool]) -> Self {
        let mut set = SatSet::empty(values.len());
        for (i, &v) in values.iter().enumerate() {
            if v {
                set.insert(i);
            }
        }
        set
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = SatSet::empty(len);
        for i in indices {
            set.insert(i);
        }
        set
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "cell index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        assert!(i < self.len, "cell index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] &= !(1 << (i % WORD_BITS));
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if value {
            self.insert(i)
        } else {
            self.remove(i)
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.contains(i)).collect()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_subset(&self, other: &SatSet) -> bool {
        self.check_len(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &SatSet) -> bool {
        self.check_len(other);
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn union_with(&mut self, other: &SatSet) {
        self.zip_with(other, |a, b| a | b);
    }

    pub fn intersect_with(&mut self, other: &SatSet) {
        self.zip_with(other, |a, b| a & b);
    }

    pub fn xor_with(&mut self, other: &SatSet) {
        self.zip_with(other, |a, b| a ^ b);
    }

    pub fn difference_with(&mut self, other: &SatSet) {
        self.zip_with(other, |a, b| a & !b);
    }

    pub fn negate(&mut self) {
        for w in &mut self.words {
            *w = !*w;
        }
        self.clear_tail();
    }

    pub fn union(&self, other: &SatSet) -> SatSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &SatSet) -> SatSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn symmetric_difference(&self, other: &SatSet) -> SatSet {
        let mut out = self.clone();
        out.xor_with(other);
        out
    }

    pub fn complement(&self) -> SatSet {
        let mut out = self.clone();
        out.negate();
        out
    }

    fn zip_with(&mut self, other: &SatSet, op: impl Fn(u64, u64) -> u64) {
        self.check_len(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a = op(*a, *b);
        }
    }

    fn check_len(&self, other: &SatSet) {
        assert_eq!(self.len, other.len, "satisfaction sets of different length");
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for SatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SatSet({}/", self.len)?;
        f.debug_set().entries(self.iter()).finish()?;
        write!(f, ")")
    }
}

/// Iterator over the indices of set bits, ascending.
pub struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

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
