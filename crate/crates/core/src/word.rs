//! Words over a finite alphabet and coordinate bookkeeping.
//!
//! A [`Word`] is a fixed-length string over the alphabet `{0, 1, ..., q-1}`.
//! Coordinates are 0-based throughout the library API; the file formats and
//! the CLI render coordinates 1-based.

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    q: u16,
    symbols: Vec<u16>,
}

impl Word {
    pub fn new(q: u16, symbols: Vec<u16>) -> Result<Self> {
        if q < 2 {
            return Err(Error::domain("alphabet size q must be at least 2"));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s >= q) {
            return Err(Error::InvalidSymbol { symbol: s, q });
        }
        Ok(Word { q, symbols })
    }

    /// The all-zeros word of length `n`.
    pub fn zeros(q: u16, n: usize) -> Result<Self> {
        Word::new(q, vec![0; n])
    }

    pub fn q(&self) -> u16 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u16] {
        &self.symbols
    }

    /// The word read off the given coordinates, in the order listed.
    pub fn restrict(&self, coords: &[usize]) -> Result<Word> {
        let mut symbols = Vec::with_capacity(coords.len());
        for &c in coords {
            let s = *self.symbols.get(c).ok_or(Error::LengthMismatch {
                expected: self.len(),
                found: c + 1,
            })?;
            symbols.push(s);
        }
        Word::new(self.q, symbols)
    }

    /// Bit-packed form for binary words of length at most 64.
    pub fn as_bits(&self) -> Option<u64> {
        if self.q != 2 || self.len() > 64 {
            return None;
        }
        let mut bits = 0u64;
        for (i, &s) in self.symbols.iter().enumerate() {
            bits |= (s as u64) << i;
        }
        Some(bits)
    }

    fn check_compatible(&self, other: &Word) -> Result<()> {
        if self.q != other.q {
            return Err(Error::AlphabetMismatch {
                expected: self.q,
                found: other.q,
            });
        }
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }
}

impl std::fmt::Debug for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &s in &self.symbols {
            if self.q > 10 {
                write!(f, "{s}.")?;
            } else {
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

/// Number of coordinates where the two words differ.
pub fn hamming_distance(x: &Word, y: &Word) -> Result<usize> {
    x.check_compatible(y)?;
    if let (Some(a), Some(b)) = (x.as_bits(), y.as_bits()) {
        return Ok((a ^ b).count_ones() as usize);
    }
    Ok(x.symbols
        .iter()
        .zip(&y.symbols)
        .filter(|(a, b)| a != b)
        .count())
}

/// Sorted 0-based coordinates where the two words agree.
pub fn agree_set(x: &Word, y: &Word) -> Result<Vec<usize>> {
    x.check_compatible(y)?;
    Ok(x.symbols
        .iter()
        .zip(&y.symbols)
        .enumerate()
        .filter(|(_, (a, b))| a == b)
        .map(|(i, _)| i)
        .collect())
}

/// Sorted 0-based coordinates where the two words differ.
pub fn disagree_set(x: &Word, y: &Word) -> Result<Vec<usize>> {
    x.check_compatible(y)?;
    Ok(x.symbols
        .iter()
        .zip(&y.symbols)
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(i, _)| i)
        .collect())
}

/// Juxtaposition of two words over the same alphabet.
pub fn concat(x: &Word, y: &Word) -> Result<Word> {
    if x.q != y.q {
        return Err(Error::AlphabetMismatch {
            expected: x.q,
            found: y.q,
        });
    }
    let mut symbols = x.symbols.clone();
    symbols.extend_from_slice(&y.symbols);
    Word::new(x.q, symbols)
}

/// An ordered partition of the coordinate set `{0, ..., n-1}` into
/// non-empty blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinatePartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl CoordinatePartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut covered = 0usize;
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::domain("partition blocks must be non-empty"));
            }
            for &c in block {
                if c >= n {
                    return Err(Error::domain(format!(
                        "partition coordinate {c} out of range for n = {n}"
                    )));
                }
                if seen[c] {
                    return Err(Error::domain(format!(
                        "partition coordinate {c} appears twice"
                    )));
                }
                seen[c] = true;
                covered += 1;
            }
        }
        if covered != n {
            return Err(Error::domain(format!(
                "partition covers {covered} of {n} coordinates"
            )));
        }
        Ok(CoordinatePartition { n, blocks })
    }

    /// Consecutive blocks of the given sizes: `[0..s0), [s0..s0+s1), ...`.
    pub fn contiguous(sizes: &[usize]) -> Result<Self> {
        let n = sizes.iter().sum();
        let mut blocks = Vec::with_capacity(sizes.len());
        let mut start = 0usize;
        for &s in sizes {
            blocks.push((start..start + s).collect());
            start += s;
        }
        CoordinatePartition::new(n, blocks)
    }

    /// Two-block partition from an explicit first block.
    pub fn two_blocks(n: usize, first: Vec<usize>) -> Result<Self> {
        let in_first: std::collections::BTreeSet<usize> = first.iter().copied().collect();
        let second: Vec<usize> = (0..n).filter(|c| !in_first.contains(c)).collect();
        CoordinatePartition::new(n, vec![first, second])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Scatter per-block words back into a full word. `parts[i]` must have
    /// length `blocks[i].len()`.
    pub fn assemble(&self, parts: &[&Word]) -> Result<Word> {
        if parts.len() != self.blocks.len() {
            return Err(Error::domain(format!(
                "expected {} block words, got {}",
                self.blocks.len(),
                parts.len()
            )));
        }
        let q = parts
            .first()
            .map(|w| w.q())
            .ok_or_else(|| Error::domain("cannot assemble zero blocks"))?;
        let mut symbols = vec![0u16; self.n];
        for (block, part) in self.blocks.iter().zip(parts) {
            if part.q() != q {
                return Err(Error::AlphabetMismatch {
                    expected: q,
                    found: part.q(),
                });
            }
            if part.len() != block.len() {
                return Err(Error::LengthMismatch {
                    expected: block.len(),
                    found: part.len(),
                });
            }
            for (&c, &s) in block.iter().zip(part.symbols()) {
                symbols[c] = s;
            }
        }
        Word::new(q, symbols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(q: u16, syms: &[u16]) -> Word {
        Word::new(q, syms.to_vec()).unwrap()
    }

    #[test]
    fn distance_basics() {
        assert_eq!(hamming_distance(&w(2, &[0, 0, 1]), &w(2, &[0, 1, 0])).unwrap(), 2);
        assert_eq!(hamming_distance(&w(3, &[0, 1, 2]), &w(3, &[0, 1, 2])).unwrap(), 0);
        assert!(hamming_distance(&w(2, &[0]), &w(2, &[0, 1])).is_err());
        assert!(hamming_distance(&w(2, &[0]), &w(3, &[0])).is_err());
    }

    #[test]
    fn agree_set_example() {
        // (0,0,1) and (0,1,0) agree exactly on the first coordinate
        assert_eq!(agree_set(&w(2, &[0, 0, 1]), &w(2, &[0, 1, 0])).unwrap(), vec![0]);
        assert_eq!(
            disagree_set(&w(2, &[0, 0, 1]), &w(2, &[0, 1, 0])).unwrap(),
            vec![1, 2]
        );
    }

    #[test]
    fn concat_example() {
        let c = concat(&w(2, &[0, 1]), &w(2, &[1, 0])).unwrap();
        assert_eq!(c.symbols(), &[0, 1, 1, 0]);
    }

    #[test]
    fn invalid_symbol_rejected() {
        assert!(Word::new(2, vec![0, 2]).is_err());
        assert!(Word::new(1, vec![0]).is_err());
    }

    #[test]
    fn restrict_and_assemble_roundtrip() {
        let full = w(3, &[0, 1, 2, 1, 0]);
        let part = CoordinatePartition::new(5, vec![vec![0, 2, 4], vec![1, 3]]).unwrap();
        let a = full.restrict(&part.blocks()[0]).unwrap();
        let b = full.restrict(&part.blocks()[1]).unwrap();
        assert_eq!(a.symbols(), &[0, 2, 0]);
        assert_eq!(b.symbols(), &[1, 1]);
        assert_eq!(part.assemble(&[&a, &b]).unwrap(), full);
    }

    #[test]
    fn partition_validation() {
        assert!(CoordinatePartition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(CoordinatePartition::new(3, vec![vec![0, 1]]).is_err());
        assert!(CoordinatePartition::new(3, vec![vec![0, 1, 2], vec![]]).is_err());
        assert!(CoordinatePartition::new(3, vec![vec![0, 1, 3]]).is_err());
    }

    #[test]
    fn bits_packing() {
        let x = w(2, &[1, 0, 1, 1]);
        assert_eq!(x.as_bits(), Some(0b1101));
        assert_eq!(w(3, &[1, 0]).as_bits(), None);
    }
}
