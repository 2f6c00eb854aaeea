//! Dependent random choice over bipartite code graphs.
//!
//! A code C over [q]^n and a two-block coordinate partition define a
//! bipartite graph: the sides are the full cubes on the two blocks, and
//! x ~ y exactly when the assembled word lies in C. Sampling t right
//! vertices with replacement and keeping the left vertices adjacent to all
//! of them yields, after deleting one endpoint of every low-codegree pair,
//! a large left subset in which all pairs have many common neighbors.
//!
//! Bad-pair classification never touches floating point. With E edges,
//! codegree c and t samples,
//!
//!   c < alpha M^(-1/t) N  <=>  c^t M^(t+1) < E^t,
//!
//! and the right-hand form is evaluated in exact integers. This sharpens
//! the outward-rounding suggestion a float threshold would need.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bitset::Bits;
use crate::code::Code;
use crate::error::{Error, Result};
use crate::word::CoordinatePartition;

/// Hard cap on either side of a bipartite code graph.
pub const MAX_SIDE: usize = 1 << 16;

/// Enumeration guard for the exact-expectation oracle: N^t tuples.
pub const MAX_EXACT_TUPLES: u128 = 10_000_000;

/// Left-side pair guard for the exact oracle's bad-pair table.
const MAX_EXACT_LEFT: usize = 1 << 10;

#[derive(Clone, Debug)]
pub struct BipartiteCodeGraph {
    partition: CoordinatePartition,
    q: u16,
    left: Vec<crate::word::Word>,
    right: Vec<crate::word::Word>,
    adj: Vec<Bits>,
    edges: usize,
}

pub(crate) fn rank(symbols: &[u16], q: u16) -> usize {
    let mut r = 0usize;
    for &s in symbols {
        r = r * q as usize + s as usize;
    }
    r
}

/// Build the graph for `code` under a two-block partition of its coordinates.
pub fn build_bipartite(code: &Code, partition: &CoordinatePartition) -> Result<BipartiteCodeGraph> {
    if partition.blocks().len() != 2 {
        return Err(Error::domain(format!(
            "dependent random choice needs a 2-block partition, got {} blocks",
            partition.blocks().len()
        )));
    }
    if partition.n() != code.n() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            found: partition.n(),
        });
    }
    let q = code.q();
    let b1 = &partition.blocks()[0];
    let b2 = &partition.blocks()[1];
    let left = Code::full_cube(q, b1.len(), MAX_SIDE)?;
    let right = Code::full_cube(q, b2.len(), MAX_SIDE)?;
    let n_right = right.len();
    let mut adj = vec![Bits::new(n_right); left.len()];
    for w in code.words() {
        let x = rank(w.restrict(b1)?.symbols(), q);
        let y = rank(w.restrict(b2)?.symbols(), q);
        adj[x].set(y);
    }
    Ok(BipartiteCodeGraph {
        partition: partition.clone(),
        q,
        left: left.words().to_vec(),
        right: right.words().to_vec(),
        adj,
        edges: code.len(),
    })
}

impl BipartiteCodeGraph {
    pub fn m(&self) -> usize {
        self.left.len()
    }

    pub fn n(&self) -> usize {
        self.right.len()
    }

    pub fn q(&self) -> u16 {
        self.q
    }

    pub fn partition(&self) -> &CoordinatePartition {
        &self.partition
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn left_word(&self, x: usize) -> &crate::word::Word {
        &self.left[x]
    }

    pub fn right_word(&self, y: usize) -> &crate::word::Word {
        &self.right[y]
    }

    pub fn alpha(&self) -> BigRational {
        BigRational::new(
            BigUint::from(self.edges).into(),
            (BigUint::from(self.m()) * BigUint::from(self.n())).into(),
        )
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adj[x].count()
    }

    pub fn neighbors(&self, x: usize) -> &Bits {
        &self.adj[x]
    }

    pub fn common_neighbors(&self, x1: usize, x2: usize) -> Result<Bits> {
        let m = self.m();
        if x1 >= m || x2 >= m {
            return Err(Error::domain(format!(
                "left vertex out of range: {} with M = {m}",
                x1.max(x2)
            )));
        }
        Ok(self.adj[x1].intersection(&self.adj[x2]))
    }

    fn codegree(&self, x1: usize, x2: usize) -> usize {
        self.adj[x1].intersection_count(&self.adj[x2])
    }

    /// Exact bad-pair test: codegree < alpha M^(-1/t) N.
    fn pair_is_bad(&self, codeg: usize, t: u32, m_pow: &BigUint, e_pow: &BigUint) -> bool {
        BigUint::from(codeg).pow(t) * m_pow < *e_pow
    }

    /// `alpha^t M / 2` as an exact rational.
    pub fn size_guarantee(&self, t: u32) -> BigRational {
        let e_pow = BigUint::from(self.edges).pow(t);
        let den = BigUint::from(2u8)
            * BigUint::from(self.m()).pow(t.saturating_sub(1))
            * BigUint::from(self.n()).pow(t);
        BigRational::new(e_pow.into(), den.into())
    }

    /// `alpha M^(-1/t) N` as a float, for reporting only.
    pub fn codegree_guarantee(&self, t: u32) -> f64 {
        if self.edges == 0 {
            return 0.0;
        }
        let m = self.m() as f64;
        self.edges as f64 / (m * m.powf(1.0 / t as f64))
    }
}

#[derive(Clone, Debug)]
pub struct DrcOutcome {
    /// Surviving left vertices, ascending.
    pub selected: Vec<usize>,
    /// The multiset T of sampled right vertices, in draw order.
    pub sample: Vec<usize>,
    pub t: u32,
    pub size_guarantee: BigRational,
    pub codegree_guarantee: f64,
    pub retries_used: u32,
    pub succeeded: bool,
}

impl DrcOutcome {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "selected_count": self.selected.len(),
            "t": self.t,
            "retries": self.retries_used,
            "succeeded": self.succeeded,
            "guarantees": {
                "size": self.size_guarantee.to_f64(),
                "size_exact": format!("{}/{}", self.size_guarantee.numer(), self.size_guarantee.denom()),
                "codegree": self.codegree_guarantee,
            },
        })
    }
}

/// One sampling round: T, then S = {x : T subset of N(x)}, then deletion.
/// Bad pairs are scanned in lexicographic order and the larger endpoint is
/// deleted, so every surviving pair was explicitly tested good.
fn drc_round(g: &BipartiteCodeGraph, t: u32, rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>) {
    let n = g.n();
    let sample: Vec<usize> = (0..t).map(|_| rng.gen_range(0..n)).collect();
    let mut in_s: Vec<usize> = (0..g.m())
        .filter(|&x| sample.iter().all(|&y| g.adj[x].get(y)))
        .collect();
    let m_pow = BigUint::from(g.m()).pow(t + 1);
    let e_pow = BigUint::from(g.edges).pow(t);
    let mut alive = vec![true; in_s.len()];
    for i in 0..in_s.len() {
        if !alive[i] {
            continue;
        }
        for j in i + 1..in_s.len() {
            if !alive[j] {
                continue;
            }
            let codeg = g.codegree(in_s[i], in_s[j]);
            if g.pair_is_bad(codeg, t, &m_pow, &e_pow) {
                alive[j] = false;
            }
        }
    }
    let selected = in_s
        .drain(..)
        .zip(alive)
        .filter_map(|(x, a)| a.then_some(x))
        .collect();
    (selected, sample)
}

/// Run dependent random choice until the size guarantee is met or
/// `max_retries` rounds are exhausted. Deterministic in `seed`; retries
/// advance the same generator stream. A failed outcome is a report, not an
/// error: the guarantee only holds in expectation.
pub fn drc_sample(
    g: &BipartiteCodeGraph,
    t: u32,
    seed: u64,
    max_retries: u32,
) -> Result<DrcOutcome> {
    if t == 0 {
        return Err(Error::domain("sample count t must be at least 1"));
    }
    if t > 10_000 {
        return Err(Error::Budget(format!("t = {t} is past the sampling budget")));
    }
    if g.n() == 0 {
        return Err(Error::domain("right side is empty"));
    }
    let guarantee = g.size_guarantee(t);
    let target = guarantee.ceil().to_integer().to_usize().unwrap_or(usize::MAX);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rounds = max_retries.max(1);
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    let mut used = 0;
    for round in 1..=rounds {
        let (selected, sample) = drc_round(g, t, &mut rng);
        used = round;
        let better = best.as_ref().map_or(true, |(b, _)| selected.len() > b.len());
        let done = selected.len() >= target;
        if better {
            best = Some((selected, sample));
        }
        if done {
            break;
        }
    }
    let (selected, sample) = best.unwrap();
    let succeeded = selected.len() >= target;
    Ok(DrcOutcome {
        selected,
        sample,
        t,
        size_guarantee: guarantee,
        codegree_guarantee: g.codegree_guarantee(t),
        retries_used: used,
        succeeded,
    })
}

/// Independent re-check of a finished outcome: every selected vertex sees
/// the whole sample, and no selected pair is bad.
pub fn verify_outcome(g: &BipartiteCodeGraph, out: &DrcOutcome) -> bool {
    let m_pow = BigUint::from(g.m()).pow(out.t + 1);
    let e_pow = BigUint::from(g.edges).pow(out.t);
    for &x in &out.selected {
        if !out.sample.iter().all(|&y| g.adj[x].get(y)) {
            return false;
        }
    }
    for (i, &x1) in out.selected.iter().enumerate() {
        for &x2 in &out.selected[i + 1..] {
            if g.pair_is_bad(g.codegree(x1, x2), out.t, &m_pow, &e_pow) {
                return false;
            }
        }
    }
    true
}

/// Exhaustive oracle: enumerate all N^t samples and average |S| and |S| - Z
/// exactly, where Z counts bad pairs inside S. Returns (E[|S|], E[|S|-Z]).
pub fn drc_expectation_exact(
    g: &BipartiteCodeGraph,
    t: u32,
) -> Result<(BigRational, BigRational)> {
    if t == 0 {
        return Err(Error::domain("sample count t must be at least 1"));
    }
    let n = g.n();
    let m = g.m();
    let tuples = (n as u128)
        .checked_pow(t)
        .filter(|&c| c <= MAX_EXACT_TUPLES)
        .ok_or_else(|| {
            Error::Budget(format!(
                "exact oracle needs {n}^{t} tuples, past the {MAX_EXACT_TUPLES} cap"
            ))
        })?;
    if m > MAX_EXACT_LEFT {
        return Err(Error::Budget(format!(
            "exact oracle caps the left side at {MAX_EXACT_LEFT}, got {m}"
        )));
    }
    let m_pow = BigUint::from(m).pow(t + 1);
    let e_pow = BigUint::from(g.edges).pow(t);
    let mut bad_pairs: Vec<(usize, usize)> = Vec::new();
    for x1 in 0..m {
        for x2 in x1 + 1..m {
            if g.pair_is_bad(g.codegree(x1, x2), t, &m_pow, &e_pow) {
                bad_pairs.push((x1, x2));
            }
        }
    }

    // split the tuple space on the first draw so rayon can chunk it
    let per_first = (tuples / n as u128) as u64;
    let (sum_s, sum_z) = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut tuple = vec![0usize; t as usize];
            tuple[0] = first;
            let mut s_total = 0u64;
            let mut z_total = 0u64;
            for _ in 0..per_first {
                let mut members = Bits::new(m);
                for x in 0..m {
                    if tuple.iter().all(|&y| g.adj[x].get(y)) {
                        members.set(x);
                        s_total += 1;
                    }
                }
                for &(x1, x2) in &bad_pairs {
                    if members.get(x1) && members.get(x2) {
                        z_total += 1;
                    }
                }
                // odometer over positions 1..t, first coordinate fixed
                let mut pos = t as usize;
                while pos > 1 {
                    pos -= 1;
                    tuple[pos] += 1;
                    if tuple[pos] < n {
                        break;
                    }
                    tuple[pos] = 0;
                }
            }
            (s_total, z_total)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    let denom = BigUint::from(n).pow(t);
    let e_s = BigRational::new(BigUint::from(sum_s).into(), denom.clone().into());
    let e_z = BigRational::new(BigUint::from(sum_z).into(), denom.into());
    let e_sz = &e_s - &e_z;

    // proof-content inequalities; these hold for every graph
    let alpha_t_m = alpha_pow_times_m(g, t);
    debug_assert!(e_s >= alpha_t_m);
    debug_assert!(e_sz >= alpha_t_m / BigRational::from_integer(2.into()));
    Ok((e_s, e_sz))
}

/// `alpha^t M` as an exact rational.
pub fn alpha_pow_times_m(g: &BipartiteCodeGraph, t: u32) -> BigRational {
    BigRational::new(
        BigUint::from(g.edges).pow(t).into(),
        (BigUint::from(g.m()).pow(t.saturating_sub(1)) * BigUint::from(g.n()).pow(t)).into(),
    )
}

/// Closed form E[|S|] = sum over x of (deg(x)/N)^t, used as the oracle's
/// independent cross-check.
pub fn expected_s_closed_form(g: &BipartiteCodeGraph, t: u32) -> BigRational {
    let denom = BigUint::from(g.n()).pow(t);
    let mut num = BigUint::zero();
    for x in 0..g.m() {
        num += BigUint::from(g.degree(x)).pow(t);
    }
    BigRational::new(num.into(), denom.into())
}
