//! Set families over a ground set `{0, ..., n-1}` and permutation families.
//!
//! Sets are stored as `u64` masks, so ground sets are capped at 64 elements,
//! far beyond the sizes any exhaustive scan here can touch. Ground elements
//! are 0-based in the API and 1-based in file formats and CLI output.


use crate::code::{Code, DistanceSet};
use crate::error::{Error, Result};
use crate::word::Word;

fn validate_masks(n: usize, masks: &[u64]) -> Result<()> {
    if n > 64 {
        return Err(Error::domain("ground sets larger than 64 are not supported"));
    }
    let range = if n == 64 { !0u64 } else { (1u64 << n) - 1 };
    for &m in masks {
        if m & !range != 0 {
            return Err(Error::domain(format!(
                "set mask {m:#x} uses elements outside the ground set of size {n}"
            )));
        }
    }
    Ok(())
}

/// Check that no two distinct sets intersect in exactly `l` elements.
fn masks_l_avoiding(masks: &[u64], l: usize) -> bool {
    for (i, &a) in masks.iter().enumerate() {
        for &b in &masks[i + 1..] {
            if (a & b).count_ones() as usize == l {
                return false;
            }
        }
    }
    true
}

/// A family of distinct k-element subsets of `{0, ..., n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KSetFamily {
    n: usize,
    k: usize,
    masks: Vec<u64>,
}

impl KSetFamily {
    pub fn new(n: usize, k: usize, masks: Vec<u64>) -> Result<Self> {
        validate_masks(n, &masks)?;
        if let Some(&m) = masks.iter().find(|&&m| m.count_ones() as usize != k) {
            return Err(Error::domain(format!(
                "set mask {m:#x} does not have exactly k = {k} elements"
            )));
        }
        let mut masks = masks;
        masks.sort_unstable();
        masks.dedup();
        Ok(KSetFamily { n, k, masks })
    }

    /// All k-subsets of the ground set, in mask order.
    pub fn full_level(n: usize, k: usize, max_sets: usize) -> Result<Self> {
        if k > n {
            return Err(Error::domain(format!("k = {k} exceeds n = {n}")));
        }
        let count = crate::bounds::binomial_u128(n as u64, k as u64)
            .filter(|&c| c <= max_sets as u128)
            .ok_or_else(|| {
                Error::Budget(format!(
                    "C({n},{k}) exceeds the set budget of {max_sets}"
                ))
            })?;
        let mut masks = Vec::with_capacity(count as usize);
        if k == 0 {
            masks.push(0);
        } else {
            // Gosper's hack walks k-subsets in increasing mask order
            let mut v: u64 = (1u64 << k) - 1;
            let limit: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
            while v <= limit {
                masks.push(v);
                let c = v & v.wrapping_neg();
                let r = v + c;
                if r == 0 {
                    break;
                }
                v = (((r ^ v) >> 2) / c) | r;
            }
        }
        KSetFamily::new(n, k, masks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn sets(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.masks.iter().map(|&m| mask_to_set(m))
    }
}

/// A family of distinct subsets of `{0, ..., n-1}` with no uniformity
/// requirement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetFamily {
    n: usize,
    masks: Vec<u64>,
}

impl SubsetFamily {
    pub fn new(n: usize, masks: Vec<u64>) -> Result<Self> {
        validate_masks(n, &masks)?;
        let mut masks = masks;
        masks.sort_unstable();
        masks.dedup();
        Ok(SubsetFamily { n, masks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn sets(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.masks.iter().map(|&m| mask_to_set(m))
    }

    pub fn is_l_avoiding(&self, l: usize) -> bool {
        masks_l_avoiding(&self.masks, l)
    }
}

pub fn mask_to_set(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

pub fn set_to_mask(set: &[usize]) -> u64 {
    set.iter().fold(0u64, |m, &e| m | (1u64 << e))
}

/// True when no two distinct members of the family intersect in exactly `l`
/// elements.
pub fn is_l_avoiding(family: &KSetFamily, l: usize) -> bool {
    masks_l_avoiding(family.masks(), l)
}

/// A family of distinct permutations of `{0, ..., n-1}`, stored as words
/// with alphabet size `n` (`w[i]` is the image of `i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermFamily {
    n: usize,
    code: Code,
}

impl PermFamily {
    pub fn new(n: usize, perms: Vec<Word>) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("permutation degree must be at least 2"));
        }
        for p in &perms {
            if p.len() != n || p.q() as usize != n {
                return Err(Error::domain(format!(
                    "not a permutation word of degree {n}: length {} over alphabet {}",
                    p.len(),
                    p.q()
                )));
            }
            let mut seen = vec![false; n];
            for &s in p.symbols() {
                if seen[s as usize] {
                    return Err(Error::domain("word has a repeated image, not a permutation"));
                }
                seen[s as usize] = true;
            }
        }
        Ok(PermFamily {
            n,
            code: Code::new(n as u16, n, perms)?,
        })
    }

    /// All of the symmetric group on `n` points, lexicographically sorted.
    pub fn symmetric_group(n: usize, max_perms: usize) -> Result<Self> {
        let mut size: u128 = 1;
        for i in 2..=n as u128 {
            size = size.checked_mul(i).ok_or_else(|| {
                Error::Budget(format!("{n}! overflows the permutation budget"))
            })?;
        }
        if size > max_perms as u128 {
            return Err(Error::Budget(format!(
                "{n}! = {size} exceeds the permutation budget of {max_perms}"
            )));
        }
        let mut perms = Vec::with_capacity(size as usize);
        let mut cur: Vec<u16> = (0..n as u16).collect();
        loop {
            perms.push(Word::new(n as u16, cur.clone())?);
            if !next_permutation(&mut cur) {
                break;
            }
        }
        PermFamily::new(n, perms)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.code.is_empty()
    }

    pub fn perms(&self) -> &[Word] {
        self.code.words()
    }

    pub fn as_code(&self) -> &Code {
        &self.code
    }
}

fn next_permutation(a: &mut [u16]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Realized pairwise distances of a permutation family, where the distance
/// between two permutations is the number of points on which they disagree.
pub fn perm_distance_set(family: &PermFamily) -> Result<DistanceSet> {
    family.as_code().distance_set()
}

/// Distances a permutation family must avoid never include 1: two distinct
/// permutations disagree on at least two points.
pub fn perm_distance_floor() -> usize {
    2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_level_counts() {
        assert_eq!(KSetFamily::full_level(4, 2, 1 << 20).unwrap().len(), 6);
        assert_eq!(KSetFamily::full_level(10, 5, 1 << 20).unwrap().len(), 252);
        assert_eq!(KSetFamily::full_level(5, 0, 16).unwrap().len(), 1);
        assert_eq!(KSetFamily::full_level(5, 5, 16).unwrap().len(), 1);
    }

    #[test]
    fn avoidance_check() {
        // {1,2} and {3,4} (0-based {0,1},{2,3}) are disjoint: 1-avoiding
        let f = KSetFamily::new(4, 2, vec![0b0011, 0b1100]).unwrap();
        assert!(is_l_avoiding(&f, 1));
        assert!(!is_l_avoiding(&f, 0));
        // adding {1,3} breaks 1-avoidance against both
        let g = KSetFamily::new(4, 2, vec![0b0011, 0b1100, 0b0101]).unwrap();
        assert!(!is_l_avoiding(&g, 1));
    }

    #[test]
    fn symmetric_group_small() {
        let s3 = PermFamily::symmetric_group(3, 10_000).unwrap();
        assert_eq!(s3.len(), 6);
        let ds = perm_distance_set(&s3).unwrap();
        assert_eq!(ds.as_set().iter().copied().collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn perm_validation() {
        let bad = Word::new(3, vec![0, 0, 2]).unwrap();
        assert!(PermFamily::new(3, vec![bad]).is_err());
    }

    #[test]
    fn mask_set_roundtrip() {
        let set = vec![0, 3, 5];
        assert_eq!(mask_to_set(set_to_mask(&set)), set);
    }

    #[test]
    fn subset_family_mixed_sizes() {
        let f = SubsetFamily::new(4, vec![0b0, 0b1111, 0b0111]).unwrap();
        assert_eq!(f.len(), 3);
        // intersections: 0, 0, 3; avoids 1 and 2
        assert!(f.is_l_avoiding(1));
        assert!(f.is_l_avoiding(2));
        assert!(!f.is_l_avoiding(3));
        assert!(!f.is_l_avoiding(0));
    }
}
