//! Fixed-capacity bitsets packed into `u64` blocks.
//!
//! Adjacency rows and candidate sets in the exact-search and DRC modules are
//! all `Bits`; the hot operations are intersection, difference and popcount.

#[derive(Clone, PartialEq, Eq)]
pub struct Bits {
    blocks: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits {
            blocks: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.blocks[i >> 6] |= 1u64 << (i & 63);
    }

    #[inline]
    pub fn clear(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.blocks[i >> 6] &= !(1u64 << (i & 63));
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.blocks[i >> 6] & (1u64 << (i & 63)) != 0
    }

    pub fn set_all(&mut self) {
        for b in &mut self.blocks {
            *b = !0;
        }
        self.trim();
    }

    pub fn count(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Lowest set bit, if any.
    pub fn first(&self) -> Option<usize> {
        for (bi, &b) in self.blocks.iter().enumerate() {
            if b != 0 {
                return Some((bi << 6) + b.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn intersect_with(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= !b;
        }
    }

    pub fn intersection(&self, other: &Bits) -> Bits {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn intersection_count(&self, other: &Bits) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// True when every bit of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &Bits) -> bool {
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & !b == 0)
    }

    pub fn iter_ones(&self) -> OnesIter<'_> {
        OnesIter {
            bits: self,
            block_idx: 0,
            cur: self.blocks.first().copied().unwrap_or(0),
        }
    }

    fn trim(&mut self) {
        let spare = self.blocks.len() * 64 - self.len;
        if spare > 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= !0u64 >> spare;
            }
        }
    }
}

impl std::fmt::Debug for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter_ones()).finish()
    }
}

pub struct OnesIter<'a> {
    bits: &'a Bits,
    block_idx: usize,
    cur: u64,
}

impl Iterator for OnesIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.cur == 0 {
            self.block_idx += 1;
            if self.block_idx >= self.bits.blocks.len() {
                return None;
            }
            self.cur = self.bits.blocks[self.block_idx];
        }
        let bit = self.cur.trailing_zeros() as usize;
        self.cur &= self.cur - 1;
        Some((self.block_idx << 6) + bit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_clear() {
        let mut b = Bits::new(130);
        b.set(0);
        b.set(64);
        b.set(129);
        assert!(b.get(0) && b.get(64) && b.get(129));
        assert!(!b.get(1));
        assert_eq!(b.count(), 3);
        b.clear(64);
        assert_eq!(b.count(), 2);
        assert_eq!(b.iter_ones().collect::<Vec<_>>(), vec![0, 129]);
    }

    #[test]
    fn set_ops() {
        let mut a = Bits::new(70);
        let mut b = Bits::new(70);
        for i in [1, 3, 5, 65] {
            a.set(i);
        }
        for i in [3, 5, 7, 69] {
            b.set(i);
        }
        assert_eq!(a.intersection_count(&b), 2);
        let mut c = a.clone();
        c.subtract(&b);
        assert_eq!(c.iter_ones().collect::<Vec<_>>(), vec![1, 65]);
        a.intersect_with(&b);
        assert!(a.is_subset_of(&b));
        assert_eq!(a.first(), Some(3));
    }

    #[test]
    fn set_all_respects_len() {
        let mut b = Bits::new(67);
        b.set_all();
        assert_eq!(b.count(), 67);
    }
}
