//! Codes: finite sets of distinct equal-length words over a common alphabet.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::word::Word;

/// Codes above this size require the forced scan variants for quadratic
/// pairwise work.
pub const PAIR_SCAN_LIMIT: usize = 1 << 16;

/// A set of distinct words of common length `n` over `[q]`.
///
/// Words are kept sorted lexicographically; "first pair" semantics in the
/// search module rely on this order. For `q = 2` and `n <= 64` a bit-packed
/// mirror of the words is kept so distance scans run on XOR + popcount.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    q: u16,
    n: usize,
    words: Vec<Word>,
    bits: Option<Vec<u64>>,
}

impl Code {
    pub fn new(q: u16, n: usize, words: Vec<Word>) -> Result<Self> {
        if q < 2 {
            return Err(Error::domain("alphabet size q must be at least 2"));
        }
        for w in &words {
            if w.q() != q {
                return Err(Error::AlphabetMismatch {
                    expected: q,
                    found: w.q(),
                });
            }
            if w.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: w.len(),
                });
            }
        }
        let mut words = words;
        words.sort_unstable();
        words.dedup();
        let bits = pack_bits(q, n, &words);
        Ok(Code { q, n, words, bits })
    }

    pub fn from_symbol_rows(q: u16, n: usize, rows: Vec<Vec<u16>>) -> Result<Self> {
        let words = rows
            .into_iter()
            .map(|r| Word::new(q, r))
            .collect::<Result<Vec<_>>>()?;
        Code::new(q, n, words)
    }

    /// Every word of `[q]^n`. Errors when `q^n` exceeds `max_words`.
    pub fn full_cube(q: u16, n: usize, max_words: usize) -> Result<Self> {
        let total = checked_pow(q as u128, n as u32)
            .filter(|&t| t <= max_words as u128)
            .ok_or_else(|| {
                Error::Budget(format!(
                    "full cube [{q}]^{n} exceeds the word budget of {max_words}"
                ))
            })?;
        let mut words = Vec::with_capacity(total as usize);
        let mut cur = vec![0u16; n];
        loop {
            words.push(Word::new(q, cur.clone())?);
            // odometer increment, most significant coordinate first
            let mut pos = n;
            loop {
                if pos == 0 {
                    let bits = pack_bits(q, n, &words);
                    return Ok(Code { q, n, words, bits });
                }
                pos -= 1;
                cur[pos] += 1;
                if cur[pos] < q {
                    break;
                }
                cur[pos] = 0;
            }
        }
    }

    pub fn q(&self) -> u16 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word(&self, i: usize) -> &Word {
        &self.words[i]
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.words.binary_search(w).ok()
    }

    /// Distance between words `i` and `j`, using the packed representation
    /// when available.
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> usize {
        if let Some(bits) = &self.bits {
            (bits[i] ^ bits[j]).count_ones() as usize
        } else {
            self.words[i]
                .symbols()
                .iter()
                .zip(self.words[j].symbols())
                .filter(|(a, b)| a != b)
                .count()
        }
    }

    /// Set of realized pairwise distances. Errors on codes larger than
    /// [`PAIR_SCAN_LIMIT`]; see [`Code::distance_set_forced`] for the opt-in.
    pub fn distance_set(&self) -> Result<DistanceSet> {
        if self.len() > PAIR_SCAN_LIMIT {
            return Err(Error::ScanTooLarge {
                size: self.len(),
                limit: PAIR_SCAN_LIMIT,
            });
        }
        Ok(self.distance_set_forced())
    }

    /// Quadratic pair scan without the size guard.
    pub fn distance_set_forced(&self) -> DistanceSet {
        let m = self.len();
        let realized = (0..m)
            .into_par_iter()
            .map(|i| {
                let mut local = BTreeSet::new();
                for j in (i + 1)..m {
                    local.insert(self.dist(i, j));
                }
                local
            })
            .reduce(BTreeSet::new, |mut a, b| {
                a.extend(b);
                a
            });
        DistanceSet { realized }
    }

    /// Largest realized pairwise distance; 0 for codes with fewer than two
    /// words.
    pub fn diameter(&self) -> Result<usize> {
        Ok(self.distance_set()?.max().unwrap_or(0))
    }

    /// Restriction of every word to the listed coordinates, deduplicated.
    pub fn project(&self, coords: &[usize]) -> Result<Code> {
        let rows = self
            .words
            .iter()
            .map(|w| w.restrict(coords))
            .collect::<Result<Vec<_>>>()?;
        Code::new(self.q, coords.len(), rows)
    }
}

fn pack_bits(q: u16, n: usize, words: &[Word]) -> Option<Vec<u64>> {
    if q == 2 && n <= 64 {
        Some(words.iter().map(|w| w.as_bits().unwrap()).collect())
    } else {
        None
    }
}

pub(crate) fn checked_pow(base: u128, exp: u32) -> Option<u128> {
    base.checked_pow(exp)
}

/// The set of pairwise distances realized by a code.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DistanceSet {
    realized: BTreeSet<usize>,
}

impl DistanceSet {
    pub fn from_set(realized: BTreeSet<usize>) -> Self {
        DistanceSet { realized }
    }

    pub fn contains(&self, d: usize) -> bool {
        self.realized.contains(&d)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.realized.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.realized.len()
    }

    pub fn is_empty(&self) -> bool {
        self.realized.is_empty()
    }

    pub fn max(&self) -> Option<usize> {
        self.realized.iter().next_back().copied()
    }

    pub fn min(&self) -> Option<usize> {
        self.realized.iter().next().copied()
    }

    pub fn as_set(&self) -> &BTreeSet<usize> {
        &self.realized
    }

    /// True when no realized distance lies in `forbidden`.
    pub fn avoids(&self, forbidden: &BTreeSet<usize>) -> bool {
        self.realized.is_disjoint(forbidden)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(q: u16, syms: &[u16]) -> Word {
        Word::new(q, syms.to_vec()).unwrap()
    }

    #[test]
    fn full_cube_sizes() {
        assert_eq!(Code::full_cube(2, 3, 1 << 20).unwrap().len(), 8);
        assert_eq!(Code::full_cube(3, 4, 1 << 20).unwrap().len(), 81);
        assert!(Code::full_cube(2, 40, 1 << 20).is_err());
    }

    #[test]
    fn full_cube_distance_set() {
        // all distances 1..=n are realized in the full cube
        let c = Code::full_cube(2, 2, 64).unwrap();
        let ds = c.distance_set().unwrap();
        assert_eq!(ds.as_set().iter().copied().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn words_sorted_and_deduped() {
        let c = Code::new(
            2,
            2,
            vec![word(2, &[1, 1]), word(2, &[0, 1]), word(2, &[1, 1])],
        )
        .unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.word(0).symbols(), &[0, 1]);
        assert!(c.contains(&word(2, &[1, 1])));
        assert!(!c.contains(&word(2, &[0, 0])));
    }

    #[test]
    fn empty_code_distance_set() {
        let c = Code::new(2, 3, vec![]).unwrap();
        assert!(c.distance_set().unwrap().is_empty());
        assert_eq!(c.diameter().unwrap(), 0);
    }

    #[test]
    fn mixed_lengths_rejected() {
        assert!(Code::new(2, 2, vec![word(2, &[0, 1]), word(2, &[0])]).is_err());
    }

    #[test]
    fn projection() {
        let c = Code::from_symbol_rows(2, 3, vec![vec![0, 0, 1], vec![0, 1, 1]]).unwrap();
        let p = c.project(&[0, 2]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.word(0).symbols(), &[0, 1]);
    }
}
