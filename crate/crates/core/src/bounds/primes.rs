//! Prime sieving, prime-power tests, and balanced prime splits.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Simple odd-only Eratosthenes sieve.
pub struct PrimeSieve {
    limit: u64,
    // bit i represents the odd number 2i + 1
    composite: Vec<u64>,
}

impl PrimeSieve {
    pub fn up_to(limit: u64) -> Self {
        let n_odds = (limit as usize + 1) / 2;
        let mut composite = vec![0u64; n_odds.div_ceil(64).max(1)];
        // index 0 is the number 1, which is not prime
        composite[0] |= 1;
        let mut i = 1usize;
        loop {
            let p = 2 * i as u64 + 1;
            if p * p > limit {
                break;
            }
            if composite[i >> 6] & (1u64 << (i & 63)) == 0 {
                let mut m = (p * p - 1) / 2;
                while m < n_odds as u64 {
                    composite[(m >> 6) as usize] |= 1u64 << (m & 63);
                    m += p;
                }
            }
            i += 1;
        }
        PrimeSieve { limit, composite }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_prime(&self, x: u64) -> bool {
        assert!(x <= self.limit, "sieve limit {} exceeded by {x}", self.limit);
        if x == 2 {
            return true;
        }
        if x < 2 || x % 2 == 0 {
            return false;
        }
        let i = ((x - 1) / 2) as usize;
        self.composite[i >> 6] & (1u64 << (i & 63)) == 0
    }

    /// Primes in `[lo, hi]`, ascending.
    pub fn primes_in(&self, lo: u64, hi: u64) -> Vec<u64> {
        let hi = hi.min(self.limit);
        let mut out = Vec::new();
        if lo <= 2 && hi >= 2 {
            out.push(2);
        }
        let mut x = lo.max(3);
        if x % 2 == 0 {
            x += 1;
        }
        while x <= hi {
            if self.is_prime(x) {
                out.push(x);
            }
            x += 2;
        }
        out
    }
}

/// Trial-division primality test, independent of the sieve. The plan
/// verifier uses this so sieve bugs cannot vouch for themselves.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Returns `Some((p, e))` when `n = p^e` for a prime `p` and `e >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut m = n;
    let mut p = 0u64;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            p = d;
            break;
        }
        d += 1;
    }
    if p == 0 {
        return Some((n, 1));
    }
    let mut e = 0u32;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    if m == 1 {
        Some((p, e))
    } else {
        None
    }
}

/// A split of `s` into `parts` primes with the smallest possible deviation
/// `max_i |a_i - s/parts|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSplit {
    /// The primes, ascending. Their sum is `s`.
    pub parts: Vec<u64>,
    /// `max_i |parts * a_i - s|`; the rational deviation is this over `parts`.
    pub scaled_deviation: u64,
}

impl PrimeSplit {
    pub fn deviation(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.scaled_deviation),
            BigInt::from(self.parts.len()),
        )
    }
}

/// Split `s` into exactly `parts` primes (2, 3, or 4 parts) minimizing the
/// maximum deviation from the balanced split `s/parts`; ties are broken by
/// the lexicographically smallest ascending tuple.
///
/// The search widens a window around `s/parts` until the best split found
/// is certified optimal: a split with scaled deviation `w` has every part
/// within the window of radius `w`, so once the window radius reaches the
/// incumbent deviation no better split can exist outside it.
pub fn split_into_primes(s: u64, parts: usize) -> Result<PrimeSplit> {
    let sieve = PrimeSieve::up_to(s.max(4));
    split_into_primes_with(&sieve, s, parts)
}

/// As [`split_into_primes`], reusing a sieve (which must cover `s`).
pub fn split_into_primes_with(sieve: &PrimeSieve, s: u64, parts: usize) -> Result<PrimeSplit> {
    if !(2..=4).contains(&parts) {
        return Err(Error::domain("prime splits support 2, 3, or 4 parts"));
    }
    if sieve.limit() < s {
        return Err(Error::domain(format!(
            "sieve limit {} does not cover s = {s}",
            sieve.limit()
        )));
    }
    if s < 2 * parts as u64 {
        return Err(Error::infeasible(
            format!("prime split of {s} into {parts} parts"),
            "s is below the minimum possible sum of primes",
        ));
    }
    let p = parts as u64;
    let mut radius: u64 = p; // covers all parts with |p*a - s| <= p
    let mut best: Option<(u64, Vec<u64>)> = None;
    loop {
        // candidate primes a with |p*a - s| <= radius
        let lo = s.saturating_sub(radius).div_ceil(p);
        let hi = (s + radius) / p;
        let cands = sieve.primes_in(lo.max(2), hi);
        search_combos(s, p, &cands, sieve, &mut best);
        if let Some((dev, _)) = &best {
            if *dev <= radius {
                break;
            }
        }
        if radius >= p * s {
            break;
        }
        radius = (radius * 2).min(p * s);
    }
    match best {
        Some((scaled_deviation, tuple)) => Ok(PrimeSplit {
            parts: tuple,
            scaled_deviation,
        }),
        None => Err(Error::infeasible(
            format!("prime split of {s} into {parts} parts"),
            "no combination of primes attains the sum",
        )),
    }
}

fn search_combos(s: u64, p: u64, cands: &[u64], sieve: &PrimeSieve, best: &mut Option<(u64, Vec<u64>)>) {
    let scaled = |a: u64| (p * a).abs_diff(s);
    let consider = |best: &mut Option<(u64, Vec<u64>)>, tuple: Vec<u64>, dev: u64| {
        let better = match best {
            None => true,
            Some((bd, bt)) => dev < *bd || (dev == *bd && tuple < *bt),
        };
        if better {
            *best = Some((dev, tuple));
        }
    };
    match p {
        2 => {
            for &a in cands {
                if a * 2 > s {
                    break;
                }
                let b = s - a;
                if b >= a && sieve.is_prime(b) {
                    let dev = scaled(a).max(scaled(b));
                    consider(best, vec![a, b], dev);
                }
            }
        }
        3 => {
            for (i, &a) in cands.iter().enumerate() {
                for &b in &cands[i..] {
                    if a + b + b > s {
                        break;
                    }
                    let c = s - a - b;
                    if sieve.is_prime(c) {
                        let dev = scaled(a).max(scaled(b)).max(scaled(c));
                        consider(best, vec![a, b, c], dev);
                    }
                }
            }
        }
        4 => {
            for (i, &a) in cands.iter().enumerate() {
                for (j, &b) in cands.iter().enumerate().skip(i) {
                    for &c in &cands[j..] {
                        if a + b + c + c > s {
                            break;
                        }
                        let d = s - a - b - c;
                        if sieve.is_prime(d) {
                            let dev = scaled(a).max(scaled(b)).max(scaled(c)).max(scaled(d));
                            consider(best, vec![a, b, c, d], dev);
                        }
                    }
                }
            }
        }
        _ => unreachable!(),
    }
}
