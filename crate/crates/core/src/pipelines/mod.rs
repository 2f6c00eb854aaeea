//! Proofs as procedures: prime-split decomposition plans, the pair
//! extraction recursion over dependent random choice, sunflower cube
//! extraction, the cross-distance pigeonhole, and the supersaturation
//! capture experiment.
//!
//! Each plan constructor re-runs [`verify_plan`], an independent checker
//! that rechecks every arithmetic identity with trial-division primality,
//! before the plan is handed back.

mod cross;
mod decompose;
mod extract;
mod supersat;

pub use cross::{cross_pair_finder, CrossOutcome};
pub use decompose::{code_distance_decompose, fr_decompose};
pub use extract::{
    extract_distance_pair, extract_distance_pair_with, sunflower_cube_extract,
    sunflower_cube_extract_with, PipelineConfig,
};
pub use supersat::{
    captured_pair_probability, captured_pair_probability_dual, supersat_experiment,
    CaptureExperiment,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::bounds::primes::is_prime;
use crate::error::{Error, Result};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rat_int(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanContext {
    FrSetsOdd,
    FrSetsEven,
    CodeCase1,
    CodeCase2,
}

impl PlanContext {
    fn label(self) -> &'static str {
        match self {
            PlanContext::FrSetsOdd => "fr_sets_odd",
            PlanContext::FrSetsEven => "fr_sets_even",
            PlanContext::CodeCase1 => "code_case1",
            PlanContext::CodeCase2 => "code_case2",
        }
    }
}

/// One coordinate block of a plan: its size, its share of the intersection
/// or distance target (`k_i` in set contexts, `d_i` in the distance case),
/// and the block intersection `l_i` where the context has one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanBlock {
    pub n_i: usize,
    pub part: Option<usize>,
    pub l_i: Option<usize>,
}

/// The distance-splitting data carried only by Case-2 plans: the block cut
/// `n_1` satisfying the 29/40 relation, the window the left distance `d'`
/// is searched in, and the residual window `d - d'` must land in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case2Detail {
    pub n1: usize,
    pub n2: usize,
    /// `|29 n_1 / 40 + 11 n / 40 - d|`, at most 1 on a valid plan.
    pub relation_gap: BigRational,
    /// Inclusive bounds for d', `[ceil((1 - eps/4) n_1), n_1]`.
    pub dprime_range: (usize, usize),
    /// Inclusive bounds for d - d'; signed because degenerate small-n
    /// inputs can push the lower end negative, which the checker rejects.
    pub residual_range: (i64, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionPlan {
    pub context: PlanContext,
    pub n: usize,
    pub eps: BigRational,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub d: Option<usize>,
    pub blocks: Vec<PlanBlock>,
    /// The primes `a_i` (set contexts) or `d_i` (Case 1); empty for Case 2.
    pub primes: Vec<u64>,
    /// Per-prime deviations from the balanced split, `|a_i - target/parts|`;
    /// for Case 2 the single entry is the 29/40 relation gap.
    pub deviations: Vec<BigRational>,
    pub case2: Option<Case2Detail>,
}

impl DecompositionPlan {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "context": self.context.label(),
            "n": self.n,
            "eps": self.eps.to_string(),
            "k": self.k,
            "l": self.l,
            "d": self.d,
            "blocks": self.blocks.iter().map(|b| serde_json::json!({
                "n_i": b.n_i,
                "part": b.part,
                "l_i": b.l_i,
            })).collect::<Vec<_>>(),
            "primes": self.primes,
            "deviations": self.deviations.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "case2": self.case2.as_ref().map(|c| serde_json::json!({
                "n1": c.n1,
                "n2": c.n2,
                "relation_gap": c.relation_gap.to_string(),
                "dprime_range": c.dprime_range,
                "residual_range": c.residual_range,
            })),
        })
    }
}

fn check(cond: bool, what: &str, details: String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::infeasible(what, details))
    }
}

/// Recheck every identity a plan claims, independently of how it was built:
/// block sums, near-equality, primality by trial division, deviation
/// tolerances, and the interval memberships of each context.
pub fn verify_plan(plan: &DecompositionPlan) -> Result<()> {
    let what = "decomposition plan check";
    let n = plan.n;
    let eps = &plan.eps;
    check(
        eps > &BigRational::zero() && eps < &BigRational::from_integer(BigInt::from(1)),
        what,
        "eps must lie strictly between 0 and 1".into(),
    )?;
    let sum_n: usize = plan.blocks.iter().map(|b| b.n_i).sum();
    check(sum_n == n, what, format!("block sizes sum to {sum_n}, not n = {n}"))?;

    match plan.context {
        PlanContext::FrSetsOdd | PlanContext::FrSetsEven => {
            let parts = if plan.context == PlanContext::FrSetsOdd { 3 } else { 4 };
            let k = plan.k.ok_or_else(|| Error::domain("set plan lacks k"))?;
            let l = plan.l.ok_or_else(|| Error::domain("set plan lacks l"))?;
            check(plan.blocks.len() == parts, what, format!("expected {parts} blocks"))?;
            check(plan.primes.len() == parts, what, format!("expected {parts} primes"))?;
            let s = k - l;
            if plan.context == PlanContext::FrSetsOdd {
                check(s % 2 == 1, what, "odd context with even k - l".into())?;
            } else {
                check(s % 2 == 0, what, "even context with odd k - l".into())?;
            }
            let mut sum_k = 0usize;
            let mut sum_l = 0usize;
            let tol = eps * rat_int(n) / rat(8, 1);
            for (i, b) in plan.blocks.iter().enumerate() {
                let k_i = b.part.ok_or_else(|| Error::domain("set block lacks k_i"))?;
                let l_i = b.l_i.ok_or_else(|| Error::domain("set block lacks l_i"))?;
                sum_k += k_i;
                sum_l += l_i;
                check(
                    k_i >= l_i,
                    what,
                    format!("block {i} has l_i = {l_i} above k_i = {k_i}"),
                )?;
                let a_i = (k_i - l_i) as u64;
                check(plan.primes[i] == a_i, what, format!("prime list mismatch at block {i}"))?;
                check(is_prime(a_i), what, format!("k_i - l_i = {a_i} is not prime"))?;
                // |a_i - (k-l)/parts| <= eps n / 8
                let dev = (rat_int(a_i as usize) - rat_int(s) / rat_int(parts)).abs();
                check(
                    dev <= tol,
                    what,
                    format!("prime {a_i} deviates {dev} from {s}/{parts}, above {tol}"),
                )?;
                check(plan.deviations.get(i) == Some(&dev), what, "recorded deviation mismatch".into())?;
                // |k_i - k/parts| < 1 and |n_i - n/parts| < 1
                let kdev = (rat_int(k_i) - rat_int(k) / rat_int(parts)).abs();
                check(kdev < rat(1, 1), what, format!("k_{i} = {k_i} is not near k/{parts}"))?;
                let ndev = (rat_int(b.n_i) - rat_int(n) / rat_int(parts)).abs();
                check(ndev < rat(1, 1), what, format!("n_{i} = {} is not near n/{parts}", b.n_i))?;
                // max(0, 2k_i - n_i) + eps n_i / 2 <= l_i <= k_i - eps n_i / 2
                let slack = eps * rat_int(b.n_i) / rat(2, 1);
                let floor = rat_int((2 * k_i).saturating_sub(b.n_i)) + &slack;
                let ceil = rat_int(k_i) - &slack;
                check(
                    rat_int(l_i) >= floor && rat_int(l_i) <= ceil,
                    what,
                    format!("l_{i} = {l_i} outside [{floor}, {ceil}]"),
                )?;
            }
            check(sum_k == k, what, format!("k_i sum to {sum_k}, not k = {k}"))?;
            check(sum_l == l, what, format!("l_i sum to {sum_l}, not l = {l}"))?;
            decreasing_blocks(plan, what)?;
        }
        PlanContext::CodeCase1 => {
            let d = plan.d.ok_or_else(|| Error::domain("distance plan lacks d"))?;
            check(plan.blocks.len() == 3, what, "expected 3 blocks".into())?;
            check(plan.primes.len() == 3, what, "expected 3 primes".into())?;
            // Case 1 engages for d <= 11n/20
            check(
                rat_int(d) <= rat(11, 20) * rat_int(n),
                what,
                format!("d = {d} is above 11n/20"),
            )?;
            let mut sum_d = 0usize;
            let tol = eps * rat_int(n) / rat(100, 1);
            for (i, b) in plan.blocks.iter().enumerate() {
                let d_i = b.part.ok_or_else(|| Error::domain("distance block lacks d_i"))?;
                check(b.l_i.is_none(), what, "distance block carries an l_i".into())?;
                sum_d += d_i;
                check(plan.primes[i] == d_i as u64, what, format!("prime list mismatch at block {i}"))?;
                check(is_prime(d_i as u64), what, format!("d_i = {d_i} is not prime"))?;
                let dev = (rat_int(d_i) - rat_int(d) / rat(3, 1)).abs();
                check(
                    dev <= tol,
                    what,
                    format!("prime {d_i} deviates {dev} from d/3, above {tol}"),
                )?;
                check(plan.deviations.get(i) == Some(&dev), what, "recorded deviation mismatch".into())?;
                let ndev = (rat_int(b.n_i) - rat_int(n) / rat(3, 1)).abs();
                check(ndev <= rat(1, 1), what, format!("n_{i} = {} is not near n/3", b.n_i))?;
                // eps n_i / 2 <= d_i <= 3 n_i / 5
                check(
                    rat_int(d_i) >= eps * rat_int(b.n_i) / rat(2, 1)
                        && rat_int(d_i) <= rat(3, 5) * rat_int(b.n_i),
                    what,
                    format!("d_{i} = {d_i} outside [eps n_i/2, 3 n_i/5]"),
                )?;
            }
            check(sum_d == d, what, format!("d_i sum to {sum_d}, not d = {d}"))?;
            decreasing_blocks(plan, what)?;
        }
        PlanContext::CodeCase2 => {
            let d = plan.d.ok_or_else(|| Error::domain("distance plan lacks d"))?;
            let c2 = plan
                .case2
                .as_ref()
                .ok_or_else(|| Error::domain("Case-2 plan lacks its detail block"))?;
            check(plan.blocks.len() == 2, what, "expected 2 blocks".into())?;
            check(plan.primes.is_empty(), what, "Case 2 carries no prime split".into())?;
            check(
                plan.blocks[0].n_i == c2.n1 && plan.blocks[1].n_i == c2.n2,
                what,
                "block sizes disagree with the Case-2 detail".into(),
            )?;
            check(
                rat_int(d) >= rat(11, 20) * rat_int(n),
                what,
                format!("d = {d} is below 11n/20"),
            )?;
            // |29 n1/40 + 11 n/40 - d| <= 1
            let gap = (rat(29, 40) * rat_int(c2.n1) + rat(11, 40) * rat_int(n) - rat_int(d)).abs();
            check(gap == c2.relation_gap, what, "recorded relation gap mismatch".into())?;
            check(gap <= rat(1, 1), what, format!("29/40 relation gap {gap} exceeds 1"))?;
            // n/4 <= n1 <= (1 - eps) n
            check(
                rat_int(c2.n1) >= rat_int(n) / rat(4, 1)
                    && rat_int(c2.n1) <= (rat(1, 1) - eps) * rat_int(n),
                what,
                format!("n1 = {} outside [n/4, (1-eps)n]", c2.n1),
            )?;
            let (dlo, dhi) = c2.dprime_range;
            check(dlo <= dhi && dhi == c2.n1, what, "d' window malformed".into())?;
            // window floor is ceil((1 - eps/4) n1)
            let lo_exact = (rat(1, 1) - eps / rat(4, 1)) * rat_int(c2.n1);
            check(
                rat_int(dlo) >= lo_exact && rat_int(dlo.saturating_sub(1)) < lo_exact,
                what,
                "d' window floor is not ceil((1 - eps/4) n1)".into(),
            )?;
            let (rlo, rhi) = c2.residual_range;
            check(
                rlo == d as i64 - dhi as i64 && rhi == d as i64 - dlo as i64,
                what,
                "residual window disagrees with the d' window".into(),
            )?;
            // residual window must land in [n2/4, 11 n2/20]
            let in_target = |x: i64| {
                let xr = BigRational::from_integer(BigInt::from(x));
                xr >= rat_int(c2.n2) / rat(4, 1) && xr <= rat(11, 20) * rat_int(c2.n2)
            };
            check(
                rlo <= rhi && in_target(rlo) && in_target(rhi),
                what,
                format!(
                    "residual window [{rlo}, {rhi}] escapes [n2/4, 11 n2/20] with n2 = {}",
                    c2.n2
                ),
            )?;
        }
    }
    Ok(())
}

fn decreasing_blocks(plan: &DecompositionPlan, what: &str) -> Result<()> {
    check(
        plan.blocks.windows(2).all(|w| w[0].n_i >= w[1].n_i),
        what,
        "block sizes are not weakly decreasing".into(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checker_rejects_tampered_plans() {
        let mut plan = fr_decompose(30, 15, 6, &rat(1, 10)).unwrap();
        verify_plan(&plan).unwrap();
        plan.blocks[0].l_i = Some(3);
        assert!(verify_plan(&plan).is_err());

        let mut plan = code_distance_decompose(60, 21, &rat(3, 10)).unwrap();
        verify_plan(&plan).unwrap();
        plan.primes[0] = 9;
        assert!(verify_plan(&plan).is_err());

        let mut plan = code_distance_decompose(40, 30, &rat(1, 5)).unwrap();
        verify_plan(&plan).unwrap();
        plan.case2.as_mut().unwrap().n1 += 1;
        assert!(verify_plan(&plan).is_err());
    }
}
