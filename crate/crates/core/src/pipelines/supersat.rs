//! The supersaturation capture experiment: a random coordinate window with
//! symbol palettes captures words and distance-d pairs of a code, and the
//! empirical counts are compared against exact rational expectations.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::ledger::{supersat_alpha, supersat_r};
use crate::bounds::{binomial, rational_floor_times};
use crate::code::Code;
use crate::error::{Error, Result};
use crate::search::count_pairs_at_distance;

use super::rat_int;

/// One full run of the capture experiment, with the exact expectations
/// alongside the empirical averages.
#[derive(Clone, Debug)]
pub struct CaptureExperiment {
    pub d: usize,
    pub m: usize,
    pub r: u64,
    pub eta: BigRational,
    pub alpha: BigRational,
    pub trials: u64,
    pub seed: u64,
    pub observed_x_mean: BigRational,
    pub observed_y_mean: BigRational,
    pub observed_x_min: u64,
    pub observed_x_max: u64,
    pub expected_x: BigRational,
    pub expected_y: BigRational,
}

impl CaptureExperiment {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "d": self.d,
            "m": self.m,
            "r": self.r,
            "eta": self.eta.to_string(),
            "alpha": self.alpha.to_string(),
            "trials": self.trials,
            "seed": self.seed,
            "observed_x_mean": self.observed_x_mean.to_string(),
            "observed_y_mean": self.observed_y_mean.to_string(),
            "observed_x_min": self.observed_x_min,
            "observed_x_max": self.observed_x_max,
            "expected_x": self.expected_x.to_string(),
            "expected_y": self.expected_y.to_string(),
        })
    }
}

fn rat_big(n: BigUint, d: BigUint) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Probability that one fixed pair at distance d is captured: the
/// disagreement set must fall inside the window, both symbols must land in
/// the palette on each disagreeing coordinate, the shared symbol must land
/// in the palette on the rest of the window, and the outside symbols must
/// match exactly.
pub fn captured_pair_probability(n: usize, q: u16, d: usize, m: usize, r: u64) -> BigRational {
    let (n64, q64, d64, m64) = (n as u64, q as u64, d as u64, m as u64);
    rat_big(binomial(d64 + m64, d64), binomial(n64, d64))
        * rat_big(binomial(r, 2), binomial(q64, 2)).pow(d as i32)
        * BigRational::new(BigInt::from(r), BigInt::from(q64)).pow(m as i32)
        * rat_big(BigUint::from(1u32), BigUint::from(q64).pow((n - d - m) as u32))
}

/// The same probability factored the other way: window placement first,
/// then per-coordinate palette conditionals. Must agree exactly with
/// [`captured_pair_probability`].
pub fn captured_pair_probability_dual(
    n: usize,
    q: u16,
    d: usize,
    m: usize,
    r: u64,
) -> BigRational {
    let (n64, q64, d64, m64) = (n as u64, q as u64, d as u64, m as u64);
    rat_big(binomial(n64 - d64, m64), binomial(n64, d64 + m64))
        * rat_big(binomial(q64 - 2, r - 2), binomial(q64, r)).pow(d as i32)
        * rat_big(binomial(q64 - 1, r - 1), binomial(q64, r)).pow(m as i32)
        * rat_big(BigUint::from(1u32), BigUint::from(q64).pow((n - d - m) as u32))
}

/// Run the capture experiment `trials` times. Trials run in parallel, each
/// on its own generator stream, so results are reproducible for a given
/// seed regardless of thread schedule. Per trial the sampling order is
/// fixed: the window, then palettes in ascending coordinate order, then the
/// outside symbols in ascending coordinate order.
pub fn supersat_experiment(
    code: &Code,
    d: usize,
    eta: &BigRational,
    trials: u64,
    seed: u64,
) -> Result<CaptureExperiment> {
    let n = code.n();
    let q = code.q();
    let alpha = supersat_alpha(eta)?;
    let r = supersat_r(eta, q as u64)?;
    let m = rational_floor_times(&alpha, n as u64) as usize;
    if d + m > n {
        return Err(Error::domain(format!(
            "window d + m = {} exceeds n = {n}",
            d + m
        )));
    }
    if r > q as u64 {
        return Err(Error::domain(format!(
            "palette size r = {r} exceeds the alphabet q = {q}"
        )));
    }
    if trials == 0 {
        return Err(Error::domain("the experiment needs at least one trial"));
    }

    let window = d + m;
    let (sum_x, sum_y, min_x, max_x) = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            // window: partial Fisher-Yates over the coordinates
            let mut coords: Vec<usize> = (0..n).collect();
            for i in 0..window {
                let j = rng.gen_range(i..n);
                coords.swap(i, j);
            }
            let mut v1 = coords[..window].to_vec();
            v1.sort_unstable();
            let mut in_window = vec![false; n];
            for &i in &v1 {
                in_window[i] = true;
            }
            // palettes Q_i, each an r-subset of the alphabet
            let palettes: Vec<Vec<u16>> = v1
                .iter()
                .map(|_| {
                    let mut syms: Vec<u16> = (0..q).collect();
                    for i in 0..r as usize {
                        let j = rng.gen_range(i..q as usize);
                        syms.swap(i, j);
                    }
                    let mut p = syms[..r as usize].to_vec();
                    p.sort_unstable();
                    p
                })
                .collect();
            // fixed symbols outside the window
            let outside: Vec<u16> = (0..n)
                .filter(|&j| !in_window[j])
                .map(|_| rng.gen_range(0..q))
                .collect();

            let captured: Vec<usize> = (0..code.len())
                .filter(|&wi| {
                    let w = code.word(wi).symbols();
                    let mut out_at = 0;
                    let mut win_at = 0;
                    for (j, &s) in w.iter().enumerate() {
                        if in_window[j] {
                            if palettes[win_at].binary_search(&s).is_err() {
                                return false;
                            }
                            win_at += 1;
                        } else {
                            if s != outside[out_at] {
                                return false;
                            }
                            out_at += 1;
                        }
                    }
                    true
                })
                .collect();
            let x = captured.len() as u64;
            let mut y = 0u64;
            for (a, &wi) in captured.iter().enumerate() {
                for &wj in &captured[a + 1..] {
                    if code.dist(wi, wj) == d {
                        y += 1;
                    }
                }
            }
            (x as u128, y as u128, x, x)
        })
        .reduce(
            || (0u128, 0u128, u64::MAX, 0u64),
            |a, b| (a.0 + b.0, a.1 + b.1, a.2.min(b.2), a.3.max(b.3)),
        );

    let trials_rat = rat_int(trials as usize);
    let expected_x = rat_big(
        BigUint::from(r).pow(window as u32) * BigUint::from(code.len()),
        BigUint::from(q as u64).pow(n as u32),
    );
    let expected_y = captured_pair_probability(n, q, d, m, r)
        * rat_int(count_pairs_at_distance(code, d) as usize);

    Ok(CaptureExperiment {
        d,
        m,
        r,
        eta: eta.clone(),
        alpha,
        trials,
        seed,
        observed_x_mean: BigRational::from_integer(BigInt::from(sum_x)) / &trials_rat,
        observed_y_mean: BigRational::from_integer(BigInt::from(sum_y)) / &trials_rat,
        observed_x_min: min_x,
        observed_x_max: max_x,
        expected_x,
        expected_y,
    })
}
