//! Subsets of loop elements as fixed-size bitsets.

use std::fmt;

use crate::table::{Element, MAX_ORDER};

const WORDS: usize = MAX_ORDER.div_ceil(64);

/// A subset of `0..n` for some loop of order `n`. Used for subloops, nuclei,
/// cosets and kernels; members iterate in ascending order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElementSet {
    bits: [u64; WORDS],
}

impl ElementSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(x: Element) -> Self {
        let mut s = Self::new();
        s.insert(x);
        s
    }

    /// All elements `0..n`.
    pub fn full(n: usize) -> Self {
        let mut s = Self::new();
        for x in 0..n {
            s.insert(x as Element);
        }
        s
    }

    #[inline]
    pub fn contains(&self, x: Element) -> bool {
        self.bits[x as usize / 64] >> (x as usize % 64) & 1 == 1
    }

    /// Returns `true` if `x` was not already present.
    #[inline]
    pub fn insert(&mut self, x: Element) -> bool {
        let (w, b) = (x as usize / 64, x as usize % 64);
        let fresh = self.bits[w] >> b & 1 == 0;
        self.bits[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, x: Element) {
        self.bits[x as usize / 64] &= !(1 << (x as usize % 64));
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut bits = self.bits;
        for (a, b) in bits.iter_mut().zip(other.bits) {
            *a |= b;
        }
        ElementSet { bits }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut bits = self.bits;
        for (a, b) in bits.iter_mut().zip(other.bits) {
            *a &= b;
        }
        ElementSet { bits }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.iter().zip(other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some((w * 64 + b) as Element)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<Element> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<Element> {
        self.iter().next()
    }
}

impl FromIterator<Element> for ElementSet {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        let mut s = ElementSet::new();
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Formats as a sorted bracketed list, e.g. `[0,1,2]`.
impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}
