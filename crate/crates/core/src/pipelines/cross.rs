//! The cross-distance pigeonhole: match each word of C to a nearby partner
//! in D, bucket by disagreement pattern, and close a distance-d cross pair
//! inside one bucket.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Signed;

use crate::code::{Code, PAIR_SCAN_LIMIT};
use crate::error::{Error, Result};
use crate::search::find_pair_at_distance;
use crate::word::{disagree_set, hamming_distance, Word};

use super::rat_int;

/// Result of [`cross_pair_finder`]: the pair (x' in C, y in D) at distance
/// d if one was closed, and how many words of C had no partner within the
/// radius and were dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossOutcome {
    pub pair: Option<(Word, Word)>,
    pub dropped: usize,
}

impl CrossOutcome {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "found": self.pair.is_some(),
            "pair": self.pair.as_ref().map(|(a, b)| {
                serde_json::json!([a.symbols(), b.symbols()])
            }),
            "dropped": self.dropped,
        })
    }
}

/// Find x' in C and y in D with `d_H(x', y) = d`.
///
/// Every x in C is matched to its nearest partner y_x in D (ties broken
/// lexicographically); words whose partner sits further than `gamma * n`
/// are dropped. Within a bucket of words sharing the disagreement support T
/// and the restricted pair (f0, g0), any x, x' at distance d - |T| close
/// the cross pair (x', y_x). Buckets are scanned in decreasing size.
pub fn cross_pair_finder(
    c: &Code,
    d_code: &Code,
    d: usize,
    gamma: &BigRational,
) -> Result<CrossOutcome> {
    if c.q() != d_code.q() {
        return Err(Error::AlphabetMismatch {
            expected: c.q(),
            found: d_code.q(),
        });
    }
    if c.n() != d_code.n() {
        return Err(Error::LengthMismatch {
            expected: c.n(),
            found: d_code.n(),
        });
    }
    if gamma.is_negative() {
        return Err(Error::domain("gamma must be nonnegative"));
    }
    if c.len().max(d_code.len()) > PAIR_SCAN_LIMIT {
        return Err(Error::ScanTooLarge {
            size: c.len().max(d_code.len()),
            limit: PAIR_SCAN_LIMIT,
        });
    }
    let n = c.n();
    let radius = gamma * rat_int(n);

    // nearest partner in D for each x, lexicographically first among ties
    let mut dropped = 0usize;
    let mut buckets: BTreeMap<(Vec<usize>, Vec<u16>, Vec<u16>), Vec<(usize, usize)>> =
        BTreeMap::new();
    for (xi, x) in c.words().iter().enumerate() {
        let mut best: Option<(usize, usize)> = None;
        for (yi, y) in d_code.words().iter().enumerate() {
            let dist = hamming_distance(x, y)?;
            if best.is_none_or(|(bd, _)| dist < bd) {
                best = Some((dist, yi));
            }
        }
        let Some((dist, yi)) = best else {
            dropped += 1;
            continue;
        };
        if rat_int(dist) > radius {
            dropped += 1;
            continue;
        }
        let y = d_code.word(yi);
        let t: Vec<usize> = disagree_set(x, y)?;
        let f0: Vec<u16> = t.iter().map(|&i| x.symbols()[i]).collect();
        let g0: Vec<u16> = t.iter().map(|&i| y.symbols()[i]).collect();
        buckets.entry((t, f0, g0)).or_default().push((xi, yi));
    }

    // decreasing size, then ascending key
    let mut ordered: Vec<(&(Vec<usize>, Vec<u16>, Vec<u16>), &Vec<(usize, usize)>)> =
        buckets.iter().collect();
    ordered.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(b.0)));

    for ((t_set, _, _), members) in ordered {
        let t = t_set.len();
        if t > d {
            continue;
        }
        if t == d {
            // x' = x closes the pair on its own
            let &(xi, yi) = members.first().expect("buckets are nonempty");
            let pair = (c.word(xi).clone(), d_code.word(yi).clone());
            debug_assert_eq!(hamming_distance(&pair.0, &pair.1)?, d);
            return Ok(CrossOutcome {
                pair: Some(pair),
                dropped,
            });
        }
        // bucket members agree on T, so their full-word distance is their
        // distance off T
        let bucket_code = Code::new(
            c.q(),
            n,
            members.iter().map(|&(xi, _)| c.word(xi).clone()).collect(),
        )?;
        if let Some((x, xp)) = find_pair_at_distance(&bucket_code, d - t) {
            let &(_, yi) = members
                .iter()
                .find(|&&(xi, _)| c.word(xi) == &x)
                .expect("bucket member");
            let pair = (xp, d_code.word(yi).clone());
            assert_eq!(
                hamming_distance(&pair.0, &pair.1)?,
                d,
                "cross pair failed distance verification"
            );
            return Ok(CrossOutcome {
                pair: Some(pair),
                dropped,
            });
        }
    }
    Ok(CrossOutcome { pair: None, dropped })
}
