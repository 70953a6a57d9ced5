//! Permutations of loop elements (translations, relabelings, isomorphisms).

use std::fmt;

use crate::table::Element;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<Element>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).map(|i| i as Element).collect(),
        }
    }

    /// Returns `None` unless `images` is a bijection on `0..images.len()`.
    pub fn from_images(images: Vec<Element>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            let v = v as usize;
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return None;
            }
        }
        Some(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<Element>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_some());
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: Element) -> Element {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &v)| i == v as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i as Element;
        }
        Permutation { images: inv }
    }

    /// `self.then(other)` applies `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Self {
        Permutation {
            images: self.images.iter().map(|&v| other.apply(v)).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Permutation::identity(self.len());
        for _ in 0..k {
            acc = acc.then(self);
        }
        acc
    }

    /// Cycle lengths in order of their least element.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images)
    }
}
