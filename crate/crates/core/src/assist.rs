//! Entanglement-assisted deterministic conversion.
//!
//! For an incomparable pair of Schmidt dimension `d`, supplying a maximally
//! entangled state of rank `d - 1` always makes `psi -> phi` possible, with a
//! product state left over. For `d = 3` a two-qubit state `(c, 1 - c)` is
//! enough, and the largest admissible `c` (least entanglement spent) has a
//! closed form per incomparability case; [`max_c_oracle`] recomputes it
//! independently.

use serde_json::json;

use crate::error::{Error, Result};
use crate::nielsen::{self, require_same_len, Case3x3};
use crate::polytope::Linear;
use crate::scalar::{NumericConfig, Scalar};
use crate::state::{entropy, majorized_by, tensor, tensor_all, OracleReport, SchmidtVector};

/// Auxiliary entanglement plan for `source (x) auxiliary -> target (x) residual`.
#[derive(Clone, Debug, PartialEq)]
pub struct AssistPlan<S> {
    pub source: SchmidtVector<S>,
    pub target: SchmidtVector<S>,
    pub auxiliary: SchmidtVector<S>,
    /// Always the product state `(1)`.
    pub residual: SchmidtVector<S>,
    /// Largest coefficient of a two-qubit auxiliary, when one is used.
    pub c: Option<S>,
    /// Entanglement consumed, `E(auxiliary) - E(residual)`.
    pub cost_bits: f64,
    pub certificate: OracleReport<S>,
}

impl<S: Scalar> AssistPlan<S> {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "auxiliary": self.auxiliary.to_json(),
            "residual": self.residual.to_json(),
            "c": self.c.as_ref().map(Scalar::to_json),
            "cost_bits": self.cost_bits,
            "verified": self.certificate.ok,
        })
    }

    fn build(
        source: &SchmidtVector<S>,
        target: &SchmidtVector<S>,
        auxiliary: SchmidtVector<S>,
        c: Option<S>,
        cfg: &NumericConfig,
    ) -> Self {
        let residual = SchmidtVector::product();
        let certificate = majorized_by(&tensor(source, &auxiliary), &tensor(target, &residual), cfg);
        AssistPlan {
            source: source.clone(),
            target: target.clone(),
            cost_bits: entropy(&auxiliary) - entropy(&residual),
            auxiliary,
            residual,
            c,
            certificate,
        }
    }
}

fn require_dim<S: Scalar>(psi: &SchmidtVector<S>, phi: &SchmidtVector<S>) -> Result<usize> {
    let d = require_same_len(psi, phi)?;
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok(d)
}

/// `a1 + b_d < 1` and `b1 + a_d < 1`; holds for every incomparable pair.
pub fn theorem_bounds<S: Scalar>(psi: &SchmidtVector<S>, phi: &SchmidtVector<S>, cfg: &NumericConfig) -> Result<bool> {
    require_dim(psi, phi)?;
    let one = S::one();
    Ok(cfg.lt(&(psi.first().clone() + phi.last().clone()), &one)
        && cfg.lt(&(phi.first().clone() + psi.last().clone()), &one))
}

/// `a1 k / (d-1) <= b1 + ... + bk` for `k = 1..d-1`: exactly the condition for
/// `psi (x) Psi_max^{d-1} -> phi (x) P`.
pub fn maxent_assist_feasible<S: Scalar>(
    psi: &SchmidtVector<S>,
    phi: &SchmidtVector<S>,
    cfg: &NumericConfig,
) -> Result<bool> {
    let d = require_dim(psi, phi)?;
    let a1 = psi.first().clone();
    let prefix = phi.prefix_sums();
    Ok((1..d).all(|k| {
        let lhs = a1.clone() * S::from_ratio(k as i64, (d - 1) as i64);
        cfg.le(&lhs, &prefix[k - 1])
    }))
}

pub fn maxent_assist_plan<S: Scalar>(
    psi: &SchmidtVector<S>,
    phi: &SchmidtVector<S>,
    cfg: &NumericConfig,
) -> Result<AssistPlan<S>> {
    let d = require_dim(psi, phi)?;
    if !maxent_assist_feasible(psi, phi, cfg)? {
        return Err(Error::InfeasibleAssist);
    }
    let plan = AssistPlan::build(psi, phi, SchmidtVector::uniform(d - 1)?, None, cfg);
    if !plan.certificate.ok {
        return Err(Error::InvariantViolation(
            "prefix criterion accepted a maximally entangled assist the oracle rejects".into(),
        ));
    }
    Ok(plan)
}

/// Supremum of admissible `c` for a two-qubit assist `(c, 1 - c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MaxC<S> {
    /// `min(c*, 1)`.
    pub value: S,
    /// `c*` reaches 1: no entanglement is needed and the supremum is not attained
    /// by an entangled auxiliary.
    pub saturated: bool,
}

/// Largest `c` in `[1/2, 1]` with `psi (x) (c, 1-c)` majorized by `phi`.
///
/// Each entry of `psi (x) (c, 1-c)` is affine in `c`, so every subset sum is
/// too. `top_k <= B_k` holds iff every `k`-subset sum is at most `B_k`, which
/// makes the feasible set an intersection of half-lines; its right end is the
/// smallest binding upper bound. No sorting by `c` and no case analysis is
/// involved.
pub fn max_c_oracle<S: Scalar>(psi: &SchmidtVector<S>, phi: &SchmidtVector<S>, cfg: &NumericConfig) -> Result<MaxC<S>> {
    let d = psi.len();
    if d > 10 {
        return Err(Error::InvalidDimension(d));
    }
    let entries: Vec<Linear<S>> = psi
        .coeffs()
        .iter()
        .flat_map(|a| [Linear::new(S::zero(), a.clone()), Linear::new(a.clone(), -a.clone())])
        .collect();
    let bound = |k: usize| -> S {
        let prefix = phi.prefix_sums();
        prefix.get(k - 1).cloned().unwrap_or_else(S::one)
    };
    let half = S::half();
    let mut upper = S::one() + S::one();
    let mut lower = S::zero();
    let n = entries.len();
    for mask in 1u32..(1 << n) {
        let k = mask.count_ones() as usize;
        let (mut c0, mut c1) = (S::zero(), S::zero());
        for (i, e) in entries.iter().enumerate() {
            if mask & (1 << i) != 0 {
                c0 = c0 + e.c0.clone();
                c1 = c1 + e.c1.clone();
            }
        }
        let b = bound(k);
        if c1.is_zero() {
            if cfg.gt(&c0, &b) {
                return Err(Error::NoFeasibleC);
            }
        } else {
            let t = (b - c0) / c1.clone();
            if c1.is_positive() {
                upper = S::min_of(upper, t);
            } else {
                lower = S::max_of(lower, t);
            }
        }
    }
    if cfg.gt(&lower, &half) || cfg.lt(&upper, &half) {
        return Err(Error::NoFeasibleC);
    }
    let saturated = cfg.ge(&upper, &S::one());
    Ok(MaxC {
        value: if saturated { S::one() } else { upper },
        saturated,
    })
}

/// Closed-form `c0` for a 3x3 incomparable pair: `(b1+b2)/(a1+a2)` in case A,
/// `b1/a1` in case B.
pub fn closed_form_c0<S: Scalar>(psi: &SchmidtVector<S>, phi: &SchmidtVector<S>, case: Case3x3) -> S {
    let (a1, a2, b1, b2) = (psi.get(0), psi.get(1), phi.get(0), phi.get(1));
    match case {
        Case3x3::A => (b1 + b2) / (a1 + a2),
        Case3x3::B => b1 / a1,
    }
}

/// Perturbation used to confirm that `c0` is the largest admissible value.
pub fn c_step<S: Scalar>() -> S {
    S::from_ratio(1, 1_000_000)
}

/// Least-entanglement two-qubit assist for a 3x3 incomparable pair.
///
/// The closed form is only trusted after [`max_c_oracle`] agrees with it and
/// the majorization check holds at `c0` and fails at `c0 + 1e-6`.
pub fn minimal_assist_3x3<S: Scalar>(
    psi: &SchmidtVector<S>,
    phi: &SchmidtVector<S>,
    cfg: &NumericConfig,
) -> Result<AssistPlan<S>> {
    let d = require_dim(psi, phi)?;
    if d != 3 {
        return Err(Error::InvalidDimension(d));
    }
    let verdict = nielsen::classify(psi, phi, cfg)?;
    let case = match (verdict.is_incomparable(), verdict.case3x3) {
        (true, Some(case)) => case,
        _ => return Err(Error::NotIncomparable),
    };
    let c0 = closed_form_c0(psi, phi, case);
    let oracle = max_c_oracle(psi, phi, cfg)?;
    if oracle.saturated || !cfg.eq(&c0, &oracle.value) {
        let aux = two_qubit(oracle.value.clone(), cfg)?;
        let plan = AssistPlan::build(psi, phi, aux, Some(oracle.value.clone()), cfg);
        return Err(Error::FormulaMismatch {
            closed_form: format!("{}", c0.to_json()),
            oracle: format!("{}", oracle.value.to_json()),
            plan: Box::new(plan.to_json()),
        });
    }
    let plan = AssistPlan::build(psi, phi, two_qubit(c0.clone(), cfg)?, Some(c0.clone()), cfg);
    let above = c0 + c_step::<S>();
    let refuted = above >= S::one() || !majorized_by(&tensor(psi, &two_qubit(above, cfg)?), phi, cfg).ok;
    if !plan.certificate.ok || !refuted {
        return Err(Error::InvariantViolation(
            "closed-form c0 is not the tight assist coefficient".into(),
        ));
    }
    Ok(plan)
}

pub(crate) fn two_qubit<S: Scalar>(c: S, cfg: &NumericConfig) -> Result<SchmidtVector<S>> {
    let rest = S::one() - c.clone();
    SchmidtVector::new(vec![c, rest], cfg)
}

/// `a1 <= (d-1)/d`: sufficient for `psi (x) Psi_max^{d-1} -> Psi_max^d (x) P`.
/// When it holds the conversion is re-checked by brute-force majorization.
pub fn corollary1_feasible<S: Scalar>(psi: &SchmidtVector<S>, d: usize, cfg: &NumericConfig) -> Result<bool> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if psi.len() > d {
        return Err(Error::InvalidArgument(format!(
            "state of length {} does not fit dimension {d}",
            psi.len()
        )));
    }
    let holds = cfg.le(psi.first(), &S::from_ratio((d - 1) as i64, d as i64));
    if holds {
        let joint = tensor(psi, &SchmidtVector::uniform(d - 1)?);
        if !majorized_by(&joint, &SchmidtVector::uniform(d)?, cfg).ok {
            return Err(Error::InvariantViolation(format!(
                "largest coefficient bound holds but promotion to rank {d} fails"
            )));
        }
    }
    Ok(holds)
}

/// Two-qubit state `((d-1)/d, 1/d)` that lifts `Psi_max^{d-1}` to `Psi_max^d`.
pub fn promotion_state<S: Scalar>(d: usize) -> Result<SchmidtVector<S>> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let d = d as i64;
    Ok(SchmidtVector::from_canonical(vec![
        S::from_ratio(d - 1, d),
        S::from_ratio(1, d),
    ]))
}

/// Two-qubit states whose joint conversion yields `Psi_max^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct MaxentChain<S> {
    pub d: usize,
    pub states: Vec<SchmidtVector<S>>,
    pub certificate: OracleReport<S>,
}

impl<S: Scalar> MaxentChain<S> {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "d": self.d,
            "states": self.states.iter().map(SchmidtVector::to_json).collect::<Vec<_>>(),
            "verified": self.certificate.ok,
        })
    }
}

/// `d - 1` two-qubit states, the i-th being `((d-i)/(d-i+1), 1/(d-i+1))`,
/// whose tensor product converts to the rank-`d` maximally entangled state.
pub fn maxent_chain<S: Scalar>(d: usize, cfg: &NumericConfig) -> Result<MaxentChain<S>> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let states = (1..d)
        .map(|i| promotion_state(d - i + 1))
        .collect::<Result<Vec<_>>>()?;
    let joint = tensor_all(&states, cfg)?;
    let certificate = majorized_by(&joint, &SchmidtVector::uniform(d)?, cfg);
    if !certificate.ok {
        return Err(Error::InvariantViolation(format!("promotion chain for d = {d} fails")));
    }
    Ok(MaxentChain { d, states, certificate })
}
