//! Closed-form upper bounds and the constants they depend on.
//!
//! Counting values (binomials, tail sums, anticode sizes) are exact big
//! integers. Quantities involving logarithms are IEEE doubles; every
//! inequality check against a float in this crate uses a safety margin of
//! [`FLOAT_MARGIN`], and documented float outputs are accurate to well
//! within `1e-12` at desk scale.

pub mod ledger;
pub mod primes;

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::code::Code;
use crate::error::{Error, Result};

/// Safety margin for inequality checks on floating-point values.
pub const FLOAT_MARGIN: f64 = 1e-9;

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// `C(n, k)` as `u128` when it fits.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    binomial(n, k).to_u128()
}

/// A bound together with the hypotheses that gate it. `value` is present
/// exactly when every hypothesis holds.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub value: Option<BigUint>,
    pub hypotheses: Vec<Hypothesis>,
    pub citation: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    pub name: String,
    pub ok: bool,
}

impl BoundReport {
    pub fn all_hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| h.ok)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "value": self.value.as_ref().map(|v| v.to_string()),
            "hypotheses": self.hypotheses.iter().map(|h| {
                serde_json::json!({"name": h.name, "ok": h.ok})
            }).collect::<Vec<_>>(),
            "citation": self.citation,
        })
    }
}

/// Upper bound `C(n, k-l-1)` for a family of k-subsets of an n-set in which
/// no two members intersect in exactly l elements, provided `k - l` is a
/// prime power and `2l + 1 <= k`.
pub fn frankl_wilson_bound(n: u64, k: u64, l: u64) -> Result<BoundReport> {
    if !(l < k && k <= n) {
        return Err(Error::domain(format!(
            "frankl_wilson_bound requires l < k <= n, got (n, k, l) = ({n}, {k}, {l})"
        )));
    }
    let pp = primes::prime_power(k - l).is_some();
    let spread = 2 * l + 1 <= k;
    let hypotheses = vec![
        Hypothesis {
            name: format!("k - l = {} is a prime power", k - l),
            ok: pp,
        },
        Hypothesis {
            name: format!("2l + 1 = {} <= k = {k}", 2 * l + 1),
            ok: spread,
        },
    ];
    let value = (pp && spread).then(|| binomial(n, k - l - 1));
    Ok(BoundReport {
        value,
        hypotheses,
        citation: "Frankl-Wilson forbidden-intersection bound",
    })
}

/// The exponential rate `(1/(1+eps))^eps` from the compact form of the
/// Frankl-Wilson bound at `k = (1+eps) l`.
pub fn compact_fw_rate(eps: &BigRational) -> Result<f64> {
    let e = eps
        .to_f64()
        .filter(|e| e.is_finite() && *e > 0.0)
        .ok_or_else(|| Error::domain("compact_fw_rate requires eps > 0"))?;
    Ok((-e * (1.0 + e).ln()).exp())
}

/// The exponent `f_q(alpha) = alpha log_q((q-1)/alpha) + (1-alpha) log_q(1/(1-alpha))`
/// governing q-ary Hamming-ball sizes. `f_q(0) = 0` and `f_q((q-1)/q) = 1`.
pub fn chernoff_exponent(q: u64, alpha: &BigRational) -> Result<f64> {
    if q < 3 {
        return Err(Error::domain("chernoff_exponent requires q >= 3"));
    }
    let top = BigRational::new(BigInt::from(q - 1), BigInt::from(q));
    if alpha.is_negative() || alpha > &top {
        return Err(Error::domain(format!(
            "chernoff_exponent requires 0 <= alpha <= (q-1)/q, got alpha = {alpha}"
        )));
    }
    let a = alpha.to_f64().ok_or_else(|| Error::domain("alpha out of float range"))?;
    if a == 0.0 {
        return Ok(0.0);
    }
    let lq = (q as f64).ln();
    let qm1 = (q - 1) as f64;
    Ok(a * (qm1 / a).ln() / lq + (1.0 - a) * (1.0 / (1.0 - a)).ln() / lq)
}

/// Exact ball size `S_q(alpha, n) = sum_{i=0}^{floor(alpha n)} C(n, i) (q-1)^i`.
pub fn tail_sum(q: u64, alpha: &BigRational, n: u64) -> Result<BigUint> {
    if q < 2 {
        return Err(Error::domain("tail_sum requires q >= 2"));
    }
    if alpha.is_negative() || alpha > &BigRational::one() {
        return Err(Error::domain("tail_sum requires 0 <= alpha <= 1"));
    }
    let cutoff = (alpha * BigRational::from_integer(BigInt::from(n)))
        .floor()
        .to_integer()
        .to_u64()
        .expect("floor(alpha * n) fits in u64 for alpha <= 1");
    Ok(weighted_ball(q, n, cutoff))
}

fn weighted_ball(q: u64, n: u64, radius: u64) -> BigUint {
    let qm1 = BigUint::from(q - 1);
    let mut total = BigUint::zero();
    let mut pow = BigUint::one();
    for i in 0..=radius.min(n) {
        total += binomial(n, i) * &pow;
        pow *= &qm1;
    }
    total
}

/// Upper bound `sum_{i=0}^{l} C(n,i)(q-1)^i` for a code of length n over
/// `[q]` whose pairwise distances fall into `l` fixed nonzero residue
/// classes mod a prime p (with `p > n` or distances below p, the polynomial
/// rank argument applies; the bound itself is purely combinatorial here).
pub fn modp_code_bound(n: u64, q: u64, l: u64) -> Result<BigUint> {
    if q < 2 {
        return Err(Error::domain("modp_code_bound requires q >= 2"));
    }
    Ok(weighted_ball(q, n, l))
}

/// True when every pairwise distance of `code` is congruent mod `p` to an
/// element of `dist_classes`, which must be nonzero residues.
pub fn check_modp_code(code: &Code, p: u64, dist_classes: &BTreeSet<u64>) -> Result<bool> {
    if !primes::is_prime(p) {
        return Err(Error::domain(format!("p = {p} is not prime")));
    }
    if dist_classes.is_empty() {
        return Err(Error::domain("the set of residue classes must be non-empty"));
    }
    if dist_classes.iter().any(|&d| d == 0 || d >= p) {
        return Err(Error::domain(
            "residue classes must lie in {1, ..., p-1}",
        ));
    }
    let m = code.len();
    if m > crate::code::PAIR_SCAN_LIMIT {
        return Err(Error::ScanTooLarge {
            size: m,
            limit: crate::code::PAIR_SCAN_LIMIT,
        });
    }
    for i in 0..m {
        for j in (i + 1)..m {
            let r = (code.dist(i, j) as u64) % p;
            if !dist_classes.contains(&r) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The optimal ball-like anticode parameter: the largest `r >= 0` with
/// `t + 2r < min(n + 1, t + 2(t-1)/(q-2))`, reading the second term as
/// infinite when `q = 2`.
///
/// For `t = 1` and `q >= 3` the strict inequality admits no `r` at all; the
/// degenerate optimum is the subcube anticode, so `r = 0` is returned. The
/// equality tests against exhaustive search cover this case.
pub fn ak_r_star(n: u64, q: u64, t: u64) -> Result<u64> {
    if q < 2 {
        return Err(Error::domain("ak_r_star requires q >= 2"));
    }
    if !(1 <= t && t <= n) {
        return Err(Error::domain(format!(
            "ak_r_star requires 1 <= t <= n, got (n, t) = ({n}, {t})"
        )));
    }
    // largest r with t + 2r < bound, i.e. 2r <= ceil(bound - t) - 1 exact
    let cap_n = BigRational::from_integer(BigInt::from(n + 1));
    let bound = if q == 2 {
        cap_n
    } else {
        let second = BigRational::from_integer(BigInt::from(t))
            + BigRational::new(BigInt::from(2 * (t - 1)), BigInt::from(q - 2));
        cap_n.min(second)
    };
    let t_rat = BigRational::from_integer(BigInt::from(t));
    if bound <= t_rat {
        return Ok(0);
    }
    // r < (bound - t)/2; the largest integer strictly below x is ceil(x) - 1
    let half_gap = (bound - t_rat) / BigRational::from_integer(BigInt::from(2));
    let r = (half_gap.ceil().to_integer() - BigInt::one())
        .max(BigInt::zero())
        .to_u64()
        .expect("r fits in u64");
    Ok(r)
}

/// Size of the ball-like anticode of diameter `n - t`: words whose count of
/// a fixed symbol among the first `t + 2r` coordinates is at least `t + r`,
/// free elsewhere. Equals `(sum_{i=0}^{r} (q-1)^i C(t+2r, i)) * q^{n-t-2r}`.
pub fn ak_anticode_size(n: u64, q: u64, t: u64, r: u64) -> Result<BigUint> {
    if q < 2 {
        return Err(Error::domain("ak_anticode_size requires q >= 2"));
    }
    if t < 1 || t + 2 * r > n {
        return Err(Error::domain(format!(
            "ak_anticode_size requires 1 <= t and t + 2r <= n, got (n, t, r) = ({n}, {t}, {r})"
        )));
    }
    let window = t + 2 * r;
    let qm1 = BigUint::from(q - 1);
    let mut head = BigUint::zero();
    let mut pow = BigUint::one();
    for i in 0..=r {
        head += binomial(window, i) * &pow;
        pow *= &qm1;
    }
    Ok(head * BigUint::from(q).pow((n - window) as u32))
}

/// Binary entropy `H(x) = -x log2 x - (1-x) log2 (1-x)`, with `H(0) = H(1) = 0`.
pub fn binary_entropy(x: &BigRational) -> Result<f64> {
    if x.is_negative() || x > &BigRational::one() {
        return Err(Error::domain("binary_entropy requires 0 <= x <= 1"));
    }
    let v = x.to_f64().ok_or_else(|| Error::domain("x out of float range"))?;
    if v == 0.0 || v == 1.0 {
        return Ok(0.0);
    }
    Ok(-v * v.log2() - (1.0 - v) * (1.0 - v).log2())
}

/// Exact floor of `alpha * n` for rational alpha.
pub fn rational_floor_times(alpha: &BigRational, n: u64) -> u64 {
    (alpha * BigRational::from_integer(BigInt::from(n)))
        .floor()
        .to_integer()
        .to_u64()
        .unwrap_or(0)
}

/// Parse helper: exact rational from an integer-over-integer or decimal
/// string, e.g. `1/3`, `0.25`, `2`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = |_| Error::domain(format!("cannot parse rational from {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(bad)?;
        let d: BigInt = den.trim().parse().map_err(bad)?;
        if d.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let int_part = if int_part.is_empty() || int_part == "-" {
            format!("{int_part}0")
        } else {
            int_part.to_string()
        };
        let neg = int_part.starts_with('-');
        let i: BigInt = int_part.parse().map_err(bad)?;
        if frac_part.is_empty() {
            return Ok(BigRational::from_integer(i));
        }
        let f: BigInt = frac_part.parse().map_err(bad)?;
        if f.is_negative() {
            return Err(Error::domain(format!("cannot parse rational from {s:?}")));
        }
        let scale = BigInt::from(10u8).pow(frac_part.len() as u32);
        let frac = BigRational::new(f, scale);
        let whole = BigRational::from_integer(i);
        return Ok(if neg { whole - frac } else { whole + frac });
    }
    let i: BigInt = s.parse().map_err(bad)?;
    Ok(BigRational::from_integer(i))
}
