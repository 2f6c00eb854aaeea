//! Explicit constant chains behind the density theorems.
//!
//! Every constant the proofs quantify over is evaluated here as an exact
//! rational wherever the defining formula is rational; quantities defined
//! through logarithms are evaluated in binary floating point (natural log)
//! and stored as the exact rational value of that double. Asymptotic length
//! thresholds are never evaluated and appear as explicit `NotEvaluated`
//! entries so downstream reports cannot silently omit them.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum LedgerContext {
    /// Forbidden set intersections for k-uniform families.
    FrSets,
    /// Forbidden code distance, short-distance case (three prime parts).
    CodeCase1,
    /// Forbidden code distance, long-distance case (one splitting step).
    CodeCase2,
    /// Equal pairwise-agreement configurations with `k` petals.
    Sunflower { k: u64 },
    /// Cross pairs between two dense codes.
    Cross,
    /// Supersaturation capture experiment.
    Supersat { eta: BigRational, q: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum LedgerValue {
    Rational(BigRational),
    Natural(BigUint),
    Real(f64),
    NotEvaluated,
}

impl LedgerValue {
    /// Float view for display; exact values stay in the variants.
    pub fn approx(&self) -> Option<f64> {
        match self {
            LedgerValue::Rational(r) => r.to_f64(),
            LedgerValue::Natural(n) => n.to_f64(),
            LedgerValue::Real(x) => Some(*x),
            LedgerValue::NotEvaluated => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            LedgerValue::Rational(r) => serde_json::json!({
                "kind": "rational",
                "num": r.numer().to_string(),
                "den": r.denom().to_string(),
                "approx": r.to_f64(),
            }),
            LedgerValue::Natural(n) => serde_json::json!({
                "kind": "natural",
                "value": n.to_string(),
            }),
            LedgerValue::Real(x) => serde_json::json!({
                "kind": "real",
                "value": x,
            }),
            LedgerValue::NotEvaluated => serde_json::json!({
                "kind": "not_evaluated",
            }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LedgerEntry {
    pub name: String,
    pub value: LedgerValue,
    pub citation: &'static str,
}

#[derive(Clone, Debug)]
pub struct ConstantLedger {
    pub epsilon: BigRational,
    pub context: LedgerContext,
    pub entries: Vec<LedgerEntry>,
}

impl ConstantLedger {
    pub fn get(&self, name: &str) -> Option<&LedgerValue> {
        self.entries.iter().find(|e| e.name == name).map(|e| &e.value)
    }

    pub fn rational(&self, name: &str) -> Option<&BigRational> {
        match self.get(name) {
            Some(LedgerValue::Rational(r)) => Some(r),
            _ => None,
        }
    }

    pub fn natural(&self, name: &str) -> Option<&BigUint> {
        match self.get(name) {
            Some(LedgerValue::Natural(n)) => Some(n),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "epsilon": {
                "num": self.epsilon.numer().to_string(),
                "den": self.epsilon.denom().to_string(),
            },
            "context": format!("{:?}", self.context),
            "entries": self.entries.iter().map(|e| serde_json::json!({
                "name": e.name,
                "value": e.value.to_json(),
                "citation": e.citation,
            })).collect::<Vec<_>>(),
        })
    }
}

/// `delta_1(x) = x / 125`, the density slack bought by the counting bound.
pub fn delta1(x: &BigRational) -> BigRational {
    x / BigRational::from_integer(BigInt::from(125))
}

/// `delta_2(x) = x / 125`, the density slack from the anticode comparison.
pub fn delta2(x: &BigRational) -> BigRational {
    x / BigRational::from_integer(BigInt::from(125))
}

fn ceil_nat(x: &BigRational) -> BigUint {
    let c = x.ceil().to_integer();
    c.max(BigInt::one()).to_biguint().expect("positive ceiling")
}

fn rat_u(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The rational constant chain for the forbidden-distance theorem.
#[derive(Clone, Debug)]
pub struct DeltaChain {
    pub t1: BigUint,
    pub t2: BigUint,
    pub delta3: BigRational,
    pub t_case2: BigUint,
    pub delta4: BigRational,
    pub delta: BigRational,
}

/// Case-1 part of the chain: two nested amplification rounds at `eps/2`.
fn case1(eps: &BigRational) -> (BigUint, BigUint, BigRational) {
    let d = delta1(&(eps / rat_u(2)));
    let t1 = ceil_nat(&(rat_u(4) / &d));
    let t2 = ceil_nat(&(rat_u(4) * BigRational::from_integer(t1.clone().into()) / &d));
    let delta3 = d / (rat_u(4) * BigRational::from_integer(t2.clone().into()));
    (t1, t2, delta3)
}

/// Full chain `delta(eps) = min(delta3(eps), delta4(eps))`.
pub fn delta_chain(eps: &BigRational) -> Result<DeltaChain> {
    check_open_unit(eps, "eps")?;
    let (t1, t2, delta3) = case1(eps);
    let (_, _, delta3_quarter) = case1(&BigRational::new(BigInt::one(), BigInt::from(4)));
    let t_case2 = ceil_nat(&(rat_u(2) / (eps * &delta3_quarter)));
    let delta4 = delta2(&(eps / rat_u(4)))
        / (rat_u(8) * BigRational::from_integer(t_case2.clone().into()));
    let delta = delta3.clone().min(delta4.clone());
    Ok(DeltaChain {
        t1,
        t2,
        delta3,
        t_case2,
        delta4,
        delta,
    })
}

/// Petal-count chain: `d(1) = delta(eps)`, then
/// `t_j = ceil(2 / ((j-1) d(j-1)))` and `d(j) = delta(eps) / (2 j t_j)`.
/// Returns `(d(1..=k), t(2..=k))`.
pub fn sunflower_chain(eps: &BigRational, k: u64) -> Result<(Vec<BigRational>, Vec<BigUint>)> {
    if k < 1 {
        return Err(Error::domain("sunflower chain requires k >= 1"));
    }
    let delta = delta_chain(eps)?.delta;
    let mut deltas = vec![delta.clone()];
    let mut ts = Vec::new();
    for j in 2..=k {
        let prev = deltas.last().unwrap();
        let t = ceil_nat(&(rat_u(2) / (rat_u(j - 1) * prev)));
        let d = &delta / (rat_u(2) * rat_u(j) * BigRational::from_integer(t.clone().into()));
        ts.push(t);
        deltas.push(d);
    }
    Ok((deltas, ts))
}

/// Matching radius and density exponent for cross pairs:
/// `delta_cross = delta(eps/2)/2`,
/// `gamma = min(eps/2, delta(eps/2) / (16 ln(1/delta(eps/2))))`.
pub fn cross_constants(eps: &BigRational) -> Result<(BigRational, BigRational)> {
    check_open_unit(eps, "eps")?;
    let half = eps / rat_u(2);
    let d = delta_chain(&half)?.delta;
    let delta_cross = &d / rat_u(2);
    let df = d.to_f64().ok_or_else(|| Error::domain("delta out of float range"))?;
    let gamma_f = df / (16.0 * (1.0 / df).ln());
    let gamma_rat = BigRational::from_float(gamma_f)
        .ok_or_else(|| Error::domain("gamma out of float range"))?;
    let gamma = half.min(gamma_rat);
    Ok((gamma, delta_cross))
}

fn check_eta(eta: &BigRational) -> Result<()> {
    if eta <= &BigRational::zero() || eta >= &BigRational::new(BigInt::one(), BigInt::from(2)) {
        return Err(Error::domain("supersaturation requires 0 < eta < 1/2"));
    }
    Ok(())
}

/// Capture window density `alpha = eta / (16 ln(16/eta))`.
pub fn supersat_alpha(eta: &BigRational) -> Result<BigRational> {
    check_eta(eta)?;
    let eta_f = eta.to_f64().ok_or_else(|| Error::domain("eta out of float range"))?;
    let alpha_f = eta_f / (16.0 * (16.0 / eta_f).ln());
    BigRational::from_float(alpha_f)
        .filter(|a| a.is_positive())
        .ok_or_else(|| Error::domain("alpha underflowed"))
}

/// Capture palette size `r = max(floor(q^(eta/4)), 2)`.
pub fn supersat_r(eta: &BigRational, q: u64) -> Result<u64> {
    check_eta(eta)?;
    if q < 2 {
        return Err(Error::domain("supersaturation requires q >= 2"));
    }
    let eta_f = eta.to_f64().ok_or_else(|| Error::domain("eta out of float range"))?;
    let r_f = (q as f64).powf(eta_f / 4.0).floor();
    Ok((r_f as u64).max(2))
}

/// Capture-experiment constants: window density `alpha`, palette size `r`,
/// and the density exponent `delta_ss = eta * eps * delta(alpha/2) / 8`.
pub fn supersat_constants(
    eps: &BigRational,
    eta: &BigRational,
    q: u64,
) -> Result<(BigRational, u64, BigRational)> {
    check_open_unit(eps, "eps")?;
    let alpha = supersat_alpha(eta)?;
    let r = supersat_r(eta, q)?;
    let d = delta_chain(&(&alpha / rat_u(2)))?.delta;
    let delta_ss = eta * eps * d / rat_u(8);
    Ok((alpha, r, delta_ss))
}

fn check_open_unit(x: &BigRational, name: &str) -> Result<()> {
    if x <= &BigRational::zero() || x >= &BigRational::one() {
        return Err(Error::domain(format!("{name} must lie strictly between 0 and 1")));
    }
    Ok(())
}

/// Evaluate the constant chain relevant to `context` at `eps`.
pub fn constant_ledger(eps: &BigRational, context: LedgerContext) -> Result<ConstantLedger> {
    check_open_unit(eps, "eps")?;
    let mut entries: Vec<LedgerEntry> = Vec::new();
    let mut push = |name: &str, value: LedgerValue, citation: &'static str| {
        entries.push(LedgerEntry {
            name: name.to_string(),
            value,
            citation,
        });
    };

    match &context {
        LedgerContext::FrSets => {
            let half = eps / rat_u(2);
            let c1 = crate::bounds::compact_fw_rate(&half)?;
            // log2(1/c1) = (eps/2) * log2(1 + eps/2), computed directly
            let e2 = half.to_f64().ok_or_else(|| Error::domain("eps out of float range"))?;
            let lam = e2 * (1.0 + e2).log2();
            let t1 = ceil_nat(
                &BigRational::from_float(2.0 / lam)
                    .ok_or_else(|| Error::domain("t1 out of range"))?,
            );
            let t1_f = t1.to_f64().unwrap_or(f64::MAX);
            let t2 = ceil_nat(
                &BigRational::from_float(4.0 * t1_f / lam)
                    .ok_or_else(|| Error::domain("t2 out of range"))?,
            );
            push(
                "c1",
                LedgerValue::Real(c1),
                "compact Frankl-Wilson rate at half the spread parameter",
            );
            push(
                "t1",
                LedgerValue::Natural(t1),
                "first amplification round, ceil(2 / log2(1/c1))",
            );
            push(
                "t2",
                LedgerValue::Natural(t2),
                "second amplification round, ceil(4 t1 / log2(1/c1))",
            );
        }
        LedgerContext::CodeCase1
        | LedgerContext::CodeCase2
        | LedgerContext::Sunflower { .. }
        | LedgerContext::Cross
        | LedgerContext::Supersat { .. } => {
            let chain = delta_chain(eps)?;
            push(
                "delta1",
                LedgerValue::Rational(delta1(eps)),
                "density slack of the mod-p counting bound, eps/125",
            );
            push(
                "delta2",
                LedgerValue::Rational(delta2(eps)),
                "density slack of the anticode comparison, eps/125",
            );
            push(
                "t1",
                LedgerValue::Natural(chain.t1.clone()),
                "first amplification round at eps/2, ceil(4/delta1(eps/2))",
            );
            push(
                "t2",
                LedgerValue::Natural(chain.t2.clone()),
                "second amplification round, ceil(4 t1 / delta1(eps/2))",
            );
            push(
                "delta3",
                LedgerValue::Rational(chain.delta3.clone()),
                "short-distance exponent, delta1(eps/2) / (4 t2)",
            );
            push(
                "t_case2",
                LedgerValue::Natural(chain.t_case2.clone()),
                "splitting-step rounds, ceil(2 / (eps delta3(1/4)))",
            );
            push(
                "delta4",
                LedgerValue::Rational(chain.delta4.clone()),
                "long-distance exponent, delta2(eps/4) / (8 t_case2)",
            );
            push(
                "delta",
                LedgerValue::Rational(chain.delta.clone()),
                "final density exponent, min(delta3, delta4)",
            );
        }
    }

    match &context {
        LedgerContext::Sunflower { k } => {
            let (deltas, ts) = sunflower_chain(eps, *k)?;
            for (j, d) in deltas.iter().enumerate() {
                push(
                    &format!("delta_sun[{}]", j + 1),
                    LedgerValue::Rational(d.clone()),
                    "petal recursion exponent, delta(eps) / (2 k t_k)",
                );
            }
            for (j, t) in ts.iter().enumerate() {
                push(
                    &format!("t_sun[{}]", j + 2),
                    LedgerValue::Natural(t.clone()),
                    "petal recursion rounds, ceil(2 / ((k-1) delta_sun[k-1]))",
                );
            }
        }
        LedgerContext::Cross => {
            let (gamma, delta_cross) = cross_constants(eps)?;
            push(
                "gamma",
                LedgerValue::Rational(gamma),
                "matching radius min(eps/2, delta(eps/2)/(16 ln(1/delta(eps/2)))), natural log in binary floating point",
            );
            push(
                "delta_cross",
                LedgerValue::Rational(delta_cross),
                "cross-pair density exponent, delta(eps/2)/2",
            );
        }
        LedgerContext::Supersat { eta, q } => {
            let (alpha, r, delta_ss) = supersat_constants(eps, eta, *q)?;
            push(
                "alpha_ss",
                LedgerValue::Rational(alpha),
                "window density eta/(16 ln(16/eta)), natural log in binary floating point",
            );
            push(
                "r",
                LedgerValue::Natural(BigUint::from(r)),
                "capture palette size max(floor(q^(eta/4)), 2)",
            );
            push(
                "delta_ss",
                LedgerValue::Rational(delta_ss),
                "supersaturation density exponent, eta eps delta(alpha/2)/8",
            );
            push(
                "m",
                LedgerValue::NotEvaluated,
                "window padding floor(alpha n); depends on n, evaluated per experiment",
            );
        }
        _ => {}
    }

    push(
        "n0",
        LedgerValue::NotEvaluated,
        "asymptotic length threshold; not evaluated at desk scale",
    );

    Ok(ConstantLedger {
        epsilon: eps.clone(),
        context,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::parse_rational;

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn chain_at_one_quarter() {
        // delta1(1/8) = 1/1000, t1 = 4000, t2 = 16e6,
        // delta3(1/4) = (1/1000) / (4 * 16e6) = 1 / 64e9
        let chain = delta_chain(&rat("1/4")).unwrap();
        assert_eq!(chain.t1, BigUint::from(4000u64));
        assert_eq!(chain.t2, BigUint::from(16_000_000u64));
        assert_eq!(chain.delta3, rat("1/64000000000"));
        // t_case2 = ceil(2 * 64e9 / (1/4)) = 512e9
        assert_eq!(chain.t_case2, BigUint::from(512_000_000_000u64));
        // delta4 = (1/16/125) / (8 * 512e9) = 1 / 8192e12
        assert_eq!(chain.delta4, rat("1/8192000000000000"));
        assert_eq!(chain.delta, chain.delta4);
    }

    #[test]
    fn deltas_at_one_quarter() {
        assert_eq!(delta1(&rat("1/4")), rat("1/500"));
        assert_eq!(delta2(&rat("2/5")), rat("2/625"));
    }

    #[test]
    fn chain_positive_and_monotone_sane() {
        for eps in ["1/10", "1/4", "1/2", "9/10"] {
            let chain = delta_chain(&rat(eps)).unwrap();
            assert!(chain.delta > BigRational::zero());
            assert!(chain.delta <= chain.delta3);
            assert!(chain.delta <= chain.delta4);
            assert!(chain.t1 >= BigUint::from(1u8));
            assert!(chain.t2 > chain.t1);
        }
        assert!(delta_chain(&rat("0")).is_err());
        assert!(delta_chain(&rat("1")).is_err());
    }

    #[test]
    fn sunflower_chain_shrinks() {
        let (deltas, ts) = sunflower_chain(&rat("1/4"), 4).unwrap();
        assert_eq!(deltas.len(), 4);
        assert_eq!(ts.len(), 3);
        for w in deltas.windows(2) {
            assert!(w[1] < w[0]);
            assert!(w[1] > BigRational::zero());
        }
    }

    #[test]
    fn cross_gamma_positive() {
        let (gamma, delta_cross) = cross_constants(&rat("1/2")).unwrap();
        assert!(gamma > BigRational::zero());
        assert!(gamma <= rat("1/4"));
        assert!(delta_cross > BigRational::zero());
    }

    #[test]
    fn supersat_palette() {
        // eta = 0.4, q = 3: floor(3^0.1) = 1, so r = 2
        let (alpha, r, dss) = supersat_constants(&rat("1/4"), &rat("2/5"), 3).unwrap();
        assert_eq!(r, 2);
        assert!(alpha > BigRational::zero());
        assert!(alpha < rat("1/100"));
        assert!(dss > BigRational::zero());
        // entropy of alpha stays within the budget eta/4
        let h = crate::bounds::binary_entropy(&alpha).unwrap();
        assert!(h <= 0.1);
        assert!(supersat_constants(&rat("1/4"), &rat("1/2"), 3).is_err());
    }

    #[test]
    fn ledger_contexts_fill_expected_fields() {
        let fr = constant_ledger(&rat("1/2"), LedgerContext::FrSets).unwrap();
        assert!(fr.get("c1").is_some());
        assert!(fr.natural("t1").is_some());
        assert!(fr.natural("t2").is_some());
        assert!(matches!(fr.get("n0"), Some(LedgerValue::NotEvaluated)));

        let code = constant_ledger(&rat("1/4"), LedgerContext::CodeCase1).unwrap();
        assert_eq!(code.rational("delta3").unwrap(), &rat("1/64000000000"));

        let sun = constant_ledger(&rat("1/4"), LedgerContext::Sunflower { k: 3 }).unwrap();
        assert!(sun.rational("delta_sun[3]").is_some());

        let cross = constant_ledger(&rat("1/2"), LedgerContext::Cross).unwrap();
        assert!(cross.rational("gamma").is_some());

        let ss = constant_ledger(
            &rat("1/4"),
            LedgerContext::Supersat { eta: rat("2/5"), q: 3 },
        )
        .unwrap();
        assert_eq!(ss.natural("r").unwrap(), &BigUint::from(2u8));
        assert!(matches!(ss.get("m"), Some(LedgerValue::NotEvaluated)));
        let json = ss.to_json();
        assert!(json["entries"].as_array().unwrap().len() >= 10);
    }
}
