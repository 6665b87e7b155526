//! Elements of a finite Boolean algebra with operators, stored as bit sets
//! over the atom indices of a fixed parent algebra.

use std::fmt;

const WORD: usize = 64;

/// A bit set over the atoms of one algebra. Two elements are equal iff their
/// bit sets are equal; all Boolean structure is bitwise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    width: usize,
    words: Vec<u64>,
}

fn words_for(width: usize) -> usize {
    width.div_ceil(WORD).max(1)
}

impl Element {
    pub fn zero(width: usize) -> Self {
        Element {
            width,
            words: vec![0; words_for(width)],
        }
    }

    pub fn one(width: usize) -> Self {
        let mut e = Element::zero(width);
        for i in 0..width {
            e.insert(i);
        }
        e
    }

    pub fn atom(width: usize, index: usize) -> Self {
        assert!(index < width, "atom index out of range");
        let mut e = Element::zero(width);
        e.insert(index);
        e
    }

    pub fn from_bits<I: IntoIterator<Item = usize>>(width: usize, bits: I) -> Self {
        let mut e = Element::zero(width);
        for b in bits {
            assert!(b < width, "atom index out of range");
            e.insert(b);
        }
        e
    }

    /// Element whose bit pattern is the binary expansion of `index`
    /// (atom 0 is the least significant bit). Canonical enumeration order.
    pub fn from_index(width: usize, index: u128) -> Self {
        debug_assert!(width <= 128);
        let mut e = Element::zero(width);
        for b in 0..width {
            if index >> b & 1 == 1 {
                e.insert(b);
            }
        }
        e
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn join(&self, other: &Element) -> Element {
        self.zip(other, |a, b| a | b)
    }

    pub fn meet(&self, other: &Element) -> Element {
        self.zip(other, |a, b| a & b)
    }

    pub fn minus(&self, other: &Element) -> Element {
        self.zip(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Element {
        let mut out = Element {
            width: self.width,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.mask_tail();
        out
    }

    pub fn le(&self, other: &Element) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn meets(&self, other: &Element) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn join_assign(&mut self, other: &Element) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width).filter(move |i| self.contains(*i))
    }

    /// Index of the single atom of a one-bit element.
    pub fn sole_atom(&self) -> Option<usize> {
        if self.count() == 1 {
            self.iter().next()
        } else {
            None
        }
    }

    fn zip(&self, other: &Element, f: impl Fn(u64, u64) -> u64) -> Element {
        debug_assert_eq!(self.width, other.width, "elements of different algebras");
        Element {
            width: self.width,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    fn mask_tail(&mut self) {
        let used = self.width % WORD;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
        if self.width == 0 {
            for w in &mut self.words {
                *w = 0;
            }
        }
    }
}

/// Canonical total order: numeric value of the bit pattern with atom 0 as the
/// least significant bit. Exhaustive sweeps and least-witness reporting use
/// this order.
impl Ord for Element {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.width
            .cmp(&other.width)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for i in self.iter() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        write!(f, "}}")
    }
}
