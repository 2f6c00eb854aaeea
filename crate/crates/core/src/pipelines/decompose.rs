//! Prime-split decomposition plans for forbidden intersections and
//! forbidden distances.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::bounds::primes::PrimeSieve;
use crate::error::{Error, Result};

use super::{
    rat, rat_int, verify_plan, Case2Detail, DecompositionPlan, PlanBlock, PlanContext,
};

/// `total` as `parts` near-equal naturals, weakly decreasing. Every part is
/// within 1 of `total/parts` and the deviation is strict unless exact.
fn near_equal_split(total: usize, parts: usize) -> Vec<usize> {
    let base = total / parts;
    let rem = total % parts;
    (0..parts).map(|i| base + usize::from(i < rem)).collect()
}

/// All ways to write `s` as an unordered sum of `parts` primes, each within
/// `tol` of `s/parts`, sorted by (max deviation, lexicographic tuple).
fn prime_splits_within(s: u64, parts: u64, tol: &BigRational) -> Vec<(u64, Vec<u64>)> {
    // |parts * a - s| is an integer, so the rational tolerance collapses to
    // an integer radius
    let radius = (rat_int(parts as usize) * tol)
        .floor()
        .to_integer()
        .to_u64()
        .unwrap_or(u64::MAX);
    let lo = s.saturating_sub(radius).div_ceil(parts).max(2);
    let hi = (s.saturating_add(radius)) / parts;
    if lo > hi {
        return Vec::new();
    }
    let sieve = PrimeSieve::up_to(hi.max(4));
    let cands = sieve.primes_in(lo, hi);
    let mut out: Vec<(u64, Vec<u64>)> = Vec::new();
    let mut tuple = Vec::with_capacity(parts as usize);
    fn rec(
        cands: &[u64],
        from: usize,
        left: u64,
        slots: u64,
        parts: u64,
        s: u64,
        tuple: &mut Vec<u64>,
        out: &mut Vec<(u64, Vec<u64>)>,
    ) {
        if slots == 1 {
            // the last slot is forced; it must be an in-window prime no
            // smaller than its predecessor
            if cands.binary_search(&left).is_ok() && tuple.last().is_none_or(|&p| p <= left) {
                let mut t = tuple.clone();
                t.push(left);
                let dev = t.iter().map(|&a| (parts * a).abs_diff(s)).max().unwrap();
                out.push((dev, t));
            }
            return;
        }
        for (i, &a) in cands.iter().enumerate().skip(from) {
            if a * slots > left {
                break;
            }
            tuple.push(a);
            rec(cands, i, left - a, slots - 1, parts, s, tuple, out);
            tuple.pop();
        }
    }
    rec(&cands, 0, s, parts, parts, s, &mut tuple, &mut out);
    out.sort();
    out.dedup();
    out
}

/// Distinct orderings of a weakly increasing tuple, lexicographically.
fn distinct_permutations(tuple: &[u64]) -> Vec<Vec<u64>> {
    let mut cur = tuple.to_vec();
    let mut out = vec![cur.clone()];
    // next_permutation over u64, emitting each distinct arrangement once
    loop {
        let n = cur.len();
        let mut i = n - 1;
        while i > 0 && cur[i - 1] >= cur[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while cur[j] <= cur[i - 1] {
            j -= 1;
        }
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
    out
}

/// Decompose a forbidden-intersection instance into 3 (odd `k - l`) or 4
/// (even) blocks whose `k_i - l_i` are near-equal primes and whose block
/// intersections stay inside the workable window.
pub fn fr_decompose(n: usize, k: usize, l: usize, eps: &BigRational) -> Result<DecompositionPlan> {
    if eps <= &rat(0, 1) || eps >= &rat(1, 1) {
        return Err(Error::domain("eps must lie strictly between 0 and 1"));
    }
    if k > n || l >= k {
        return Err(Error::domain(format!(
            "need l < k <= n, got n = {n}, k = {k}, l = {l}"
        )));
    }
    let epsn = eps * rat_int(n);
    let l_floor = rat_int((2 * k).saturating_sub(n)) + &epsn;
    let l_ceil = rat_int(k) - &epsn;
    if rat_int(l) < l_floor || rat_int(l) > l_ceil {
        return Err(Error::domain(format!(
            "l = {l} outside the workable window [max(0, 2k - n) + eps n, k - eps n] = [{l_floor}, {l_ceil}]"
        )));
    }

    let s = (k - l) as u64;
    let (parts, context) = if s % 2 == 1 {
        (3usize, PlanContext::FrSetsOdd)
    } else {
        (4usize, PlanContext::FrSetsEven)
    };
    let tol = &epsn / rat(8, 1);
    let splits = prime_splits_within(s, parts as u64, &tol);
    let what = format!("fr decomposition of (n = {n}, k = {k}, l = {l})");
    if splits.is_empty() {
        return Err(Error::infeasible(
            what,
            format!("no {parts}-prime split of k - l = {s} within deviation {tol}"),
        ));
    }

    let n_blocks = near_equal_split(n, parts);
    let k_blocks = near_equal_split(k, parts);
    let mut best_attempt: Option<DecompositionPlan> = None;
    for (_, split) in &splits {
        for perm in distinct_permutations(split) {
            if perm
                .iter()
                .zip(&k_blocks)
                .any(|(&a, &k_i)| a as usize > k_i)
            {
                continue; // l_i would go negative
            }
            let blocks: Vec<PlanBlock> = (0..parts)
                .map(|i| PlanBlock {
                    n_i: n_blocks[i],
                    part: Some(k_blocks[i]),
                    l_i: Some(k_blocks[i] - perm[i] as usize),
                })
                .collect();
            let deviations = perm
                .iter()
                .map(|&a| (rat_int(a as usize) - rat_int(s as usize) / rat_int(parts)).abs())
                .collect();
            let plan = DecompositionPlan {
                context,
                n,
                eps: eps.clone(),
                k: Some(k),
                l: Some(l),
                d: None,
                blocks,
                primes: perm,
                deviations,
                case2: None,
            };
            if verify_plan(&plan).is_ok() {
                return Ok(plan);
            }
            best_attempt.get_or_insert(plan);
        }
    }
    Err(Error::infeasible(
        what,
        match best_attempt {
            Some(p) => format!(
                "every prime assignment violates a block window; closest attempt: {}",
                p.to_json()
            ),
            None => "every prime assignment drives some l_i negative".into(),
        },
    ))
}

/// Decompose a forbidden-distance instance: three near-equal prime
/// distances on near-equal blocks when `d <= 11n/20`, and the 29/40 cut
/// otherwise.
pub fn code_distance_decompose(n: usize, d: usize, eps: &BigRational) -> Result<DecompositionPlan> {
    if eps <= &rat(0, 1) || eps >= &rat(1, 1) {
        return Err(Error::domain("eps must lie strictly between 0 and 1"));
    }
    let epsn = eps * rat_int(n);
    if rat_int(d) <= epsn || rat_int(d) >= rat_int(n) - &epsn {
        return Err(Error::domain(format!(
            "d = {d} outside the workable window (eps n, (1 - eps) n) at n = {n}"
        )));
    }

    let what = format!("distance decomposition of (n = {n}, d = {d})");
    if rat_int(d) <= rat(11, 20) * rat_int(n) {
        // Case 1: d = d_1 + d_2 + d_3, primes near d/3 on near-equal blocks
        let tol = &epsn / rat(100, 1);
        let splits = prime_splits_within(d as u64, 3, &tol);
        if splits.is_empty() {
            return Err(Error::infeasible(
                what,
                format!("no 3-prime split of d = {d} within deviation {tol}"),
            ));
        }
        let n_blocks = near_equal_split(n, 3);
        let mut best_attempt: Option<DecompositionPlan> = None;
        for (_, split) in &splits {
            for perm in distinct_permutations(split) {
                let blocks: Vec<PlanBlock> = (0..3)
                    .map(|i| PlanBlock {
                        n_i: n_blocks[i],
                        part: Some(perm[i] as usize),
                        l_i: None,
                    })
                    .collect();
                let deviations = perm
                    .iter()
                    .map(|&a| (rat_int(a as usize) - rat_int(d) / rat(3, 1)).abs())
                    .collect();
                let plan = DecompositionPlan {
                    context: PlanContext::CodeCase1,
                    n,
                    eps: eps.clone(),
                    k: None,
                    l: None,
                    d: Some(d),
                    blocks,
                    primes: perm,
                    deviations,
                    case2: None,
                };
                if verify_plan(&plan).is_ok() {
                    return Ok(plan);
                }
                best_attempt.get_or_insert(plan);
            }
        }
        Err(Error::infeasible(
            what,
            match best_attempt {
                Some(p) => format!(
                    "every prime assignment leaves some d_i outside [eps n_i/2, 3 n_i/5]; closest attempt: {}",
                    p.to_json()
                ),
                None => "no prime assignment exists".into(),
            },
        ))
    } else {
        // Case 2: pick n_1 minimizing |29 n_1/40 + 11 n/40 - d|
        let gap_of = |n1: usize| {
            (rat(29, 40) * rat_int(n1) + rat(11, 40) * rat_int(n) - rat_int(d)).abs()
        };
        let n1 = (1..=n)
            .min_by(|&a, &b| gap_of(a).cmp(&gap_of(b)).then(a.cmp(&b)))
            .expect("n >= 1");
        let gap = gap_of(n1);
        if gap > rat(1, 1) {
            return Err(Error::infeasible(
                what,
                format!("no n1 in [n] brings the 29/40 relation within 1; best gap {gap} at n1 = {n1}"),
            ));
        }
        let n2 = n - n1;
        // d' window floor: ceil((1 - eps/4) n_1)
        let lo_exact = (rat(1, 1) - eps / rat(4, 1)) * rat_int(n1);
        let dlo = lo_exact.ceil().to_integer().to_usize().ok_or_else(|| {
            Error::domain("d' window floor out of range")
        })?;
        let plan = DecompositionPlan {
            context: PlanContext::CodeCase2,
            n,
            eps: eps.clone(),
            k: None,
            l: None,
            d: Some(d),
            blocks: vec![
                PlanBlock { n_i: n1, part: None, l_i: None },
                PlanBlock { n_i: n2, part: None, l_i: None },
            ],
            primes: Vec::new(),
            deviations: vec![gap.clone()],
            case2: Some(Case2Detail {
                n1,
                n2,
                relation_gap: gap,
                dprime_range: (dlo, n1),
                residual_range: (d as i64 - n1 as i64, d as i64 - dlo as i64),
            }),
        };
        verify_plan(&plan)?;
        Ok(plan)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fr_plan_9_as_three_threes() {
        let plan = fr_decompose(30, 15, 6, &rat(1, 10)).unwrap();
        assert_eq!(plan.context, PlanContext::FrSetsOdd);
        assert_eq!(plan.primes, vec![3, 3, 3]);
        assert!(plan.blocks.iter().all(|b| b.n_i == 10 && b.part == Some(5) && b.l_i == Some(2)));
        verify_plan(&plan).unwrap();
    }

    #[test]
    fn fr_plan_even_four_blocks() {
        let plan = fr_decompose(40, 20, 12, &rat(1, 10)).unwrap();
        assert_eq!(plan.context, PlanContext::FrSetsEven);
        assert_eq!(plan.primes, vec![2, 2, 2, 2]);
        assert_eq!(plan.blocks.len(), 4);
        assert!(plan.blocks.iter().all(|b| b.n_i == 10 && b.part == Some(5) && b.l_i == Some(3)));
    }

    #[test]
    fn fr_gap_two_is_infeasible() {
        // k - l = 2 cannot be written as a sum of primes in 4 parts
        let err = fr_decompose(30, 10, 8, &rat(1, 20)).unwrap_err();
        assert!(matches!(err, Error::Infeasible { .. }));
    }

    #[test]
    fn fr_rejects_l_outside_window() {
        assert!(matches!(
            fr_decompose(30, 15, 1, &rat(1, 10)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn case1_example() {
        let plan = code_distance_decompose(60, 21, &rat(3, 10)).unwrap();
        assert_eq!(plan.context, PlanContext::CodeCase1);
        assert_eq!(plan.primes, vec![7, 7, 7]);
        assert!(plan.blocks.iter().all(|b| b.n_i == 20 && b.part == Some(7)));
        verify_plan(&plan).unwrap();
    }

    #[test]
    fn case2_example_picks_26() {
        let plan = code_distance_decompose(40, 30, &rat(1, 5)).unwrap();
        assert_eq!(plan.context, PlanContext::CodeCase2);
        let c2 = plan.case2.as_ref().unwrap();
        assert_eq!(c2.n1, 26);
        // |29/40 * 26 + 11/40 * 40 - 30| = 3/20
        assert_eq!(c2.relation_gap, rat(3, 20));
        verify_plan(&plan).unwrap();
    }

    #[test]
    fn small_d_has_no_three_prime_split() {
        let err = code_distance_decompose(10, 5, &rat(2, 5)).unwrap_err();
        assert!(matches!(err, Error::Infeasible { .. }));
    }

    #[test]
    fn near_equal_splits_are_tight() {
        assert_eq!(near_equal_split(10, 3), vec![4, 3, 3]);
        assert_eq!(near_equal_split(12, 4), vec![3, 3, 3, 3]);
        assert_eq!(near_equal_split(11, 4), vec![3, 3, 3, 2]);
    }

    #[test]
    fn split_enumeration_orders_by_deviation() {
        // 21 with a wide tolerance: the balanced 7+7+7 must come first
        let splits = prime_splits_within(21, 3, &rat(4, 1));
        assert_eq!(splits[0].1, vec![7, 7, 7]);
        assert_eq!(splits[0].0, 0);
        for w in splits.windows(2) {
            assert!(w[0].0 <= w[1].0);
        }
        assert!(splits.iter().all(|(_, t)| t.iter().sum::<u64>() == 21));
    }

    #[test]
    fn permutation_enumeration() {
        assert_eq!(distinct_permutations(&[2, 2, 2]).len(), 1);
        assert_eq!(distinct_permutations(&[2, 3, 3]).len(), 3);
        assert_eq!(distinct_permutations(&[2, 3, 5]).len(), 6);
    }
}
