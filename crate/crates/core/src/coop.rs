//! Mutual co-operation between incomparable pairs.
//!
//! Given an incomparable 3x3 pair `(psi1, phi1)`, the syntheses build an
//! auxiliary incomparable pair `(psi2, phi2)` with
//! `psi1 (x) psi2 -> phi1 (x) phi2`. The two-copy split builds `(chi, eta)`,
//! both incomparable with `psi`, with `psi (x) psi -> chi (x) eta`.
//!
//! The closed-form windows are tried first. Every result is certified by
//! brute-force majorization of the product spectra, and when a closed form
//! comes up empty or is rejected an exact fallback solves the joint
//! majorization constraints directly (they are linear in the auxiliary
//! coefficients once the other state is fixed). Fallbacks are reported as
//! warnings on the result.

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::nielsen::{classify, Case3x3, ConversionVerdict};
use crate::oracle;
use crate::polytope::{feasible_point, majorization_windows, midpoint, tensor_prefix_constraints, Affine, Halfspace, Linear};
use crate::scalar::{max_in, min_in, NumericConfig, Scalar};
use crate::state::{majorized_by, tensor, OracleReport, SchmidtVector};

/// Sweep length for the ratio `alpha1 / alpha2` in the case-B constructions.
pub const RATIO_ATTEMPTS: usize = 32;
/// Each swept ratio is rounded up to a multiple of `1/RATIO_GRID` so the
/// exact arithmetic downstream stays small.
const RATIO_GRID: i64 = 1_000_000;
/// Sweep length for the exact fallbacks.
pub const FALLBACK_STEPS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Cross,
    OracleFallback,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Warning {
    pub code: &'static str,
    pub detail: String,
}

impl Warning {
    fn new(code: &'static str, detail: impl Into<String>) -> Self {
        Warning {
            code,
            detail: detail.into(),
        }
    }
}

/// Verdicts for the four pairings of sources and targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CrossVerdicts {
    pub psi1_phi2: ConversionVerdict,
    pub psi2_phi1: ConversionVerdict,
    pub psi1_phi1: ConversionVerdict,
    pub psi2_phi2: ConversionVerdict,
}

impl CrossVerdicts {
    pub fn all_incomparable(&self) -> bool {
        [self.psi1_phi2, self.psi2_phi1, self.psi1_phi1, self.psi2_phi2]
            .iter()
            .all(ConversionVerdict::is_incomparable)
    }

    fn comparable_names(&self) -> Vec<&'static str> {
        [
            ("psi1_phi2", self.psi1_phi2),
            ("psi2_phi1", self.psi2_phi1),
            ("psi1_phi1", self.psi1_phi1),
            ("psi2_phi2", self.psi2_phi2),
        ]
        .into_iter()
        .filter(|(_, v)| !v.is_incomparable())
        .map(|(name, _)| name)
        .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoopSynthesis<S> {
    pub source: SchmidtVector<S>,
    pub target: SchmidtVector<S>,
    pub aux_source: SchmidtVector<S>,
    pub aux_target: SchmidtVector<S>,
    pub cross: CrossVerdicts,
    pub certificate: OracleReport<S>,
    pub method: Method,
    pub warnings: Vec<Warning>,
}

impl<S: Scalar> CoopSynthesis<S> {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "aux_source": self.aux_source.to_json(),
            "aux_target": self.aux_target.to_json(),
            "cross": self.cross,
            "method": self.method,
            "warnings": self.warnings,
            "verified": self.certificate.ok,
        })
    }
}

/// Joint conversion of all `sources` into all `targets`.
pub fn joint_convertible<S: Scalar>(
    sources: &[SchmidtVector<S>],
    targets: &[SchmidtVector<S>],
    cfg: &NumericConfig,
) -> Result<OracleReport<S>> {
    oracle::verify(sources, targets, cfg)
}

/// Checks the oracle and the auxiliary incomparability; `None` if either fails.
fn certify<S: Scalar>(
    psi: &SchmidtVector<S>,
    phi: &SchmidtVector<S>,
    psi2: SchmidtVector<S>,
    phi2: SchmidtVector<S>,
    method: Method,
    cfg: &NumericConfig,
) -> Result<Option<CoopSynthesis<S>>> {
    let certificate = majorized_by(&tensor(psi, &psi2), &tensor(phi, &phi2), cfg);
    let cross = CrossVerdicts {
        psi1_phi2: classify(psi, &phi2, cfg)?,
        psi2_phi1: classify(&psi2, phi, cfg)?,
        psi1_phi1: classify(psi, phi, cfg)?,
        psi2_phi2: classify(&psi2, &phi2, cfg)?,
    };
    if !certificate.ok || !cross.psi2_phi2.is_incomparable() {
        return Ok(None);
    }
    let mut warnings = Vec::new();
    let comparable = cross.comparable_names();
    if !comparable.is_empty() {
        warnings.push(Warning::new("cross_comparable", comparable.join(", ")));
    }
    Ok(Some(CoopSynthesis {
        source: psi.clone(),
        target: phi.clone(),
        aux_source: psi2,
        aux_target: phi2,
        cross,
        certificate,
        method,
        warnings,
    }))
}

/// Coefficients of a 3x3 pair.
struct Pair3<S> {
    a: [S; 3],
    b: [S; 3],
}

fn require_case<S: Scalar>(
    psi: &SchmidtVector<S>,
    phi: &SchmidtVector<S>,
    expected: Case3x3,
    cfg: &NumericConfig,
) -> Result<Pair3<S>> {
    for s in [psi, phi] {
        if s.len() != 3 {
            return Err(Error::InvalidDimension(s.len()));
        }
    }
    let verdict = classify(psi, phi, cfg)?;
    match verdict.case3x3 {
        None => Err(Error::NotIncomparable),
        Some(found) if found != expected => Err(Error::CaseMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }),
        Some(_) => Ok(Pair3 {
            a: [psi.get(0), psi.get(1), psi.get(2)],
            b: [phi.get(0), phi.get(1), phi.get(2)],
        }),
    }
}

fn state3<S: Scalar>(x: S, y: S, z: S, cfg: &NumericConfig) -> Result<SchmidtVector<S>> {
    SchmidtVector::new(vec![x, y, z], cfg)
}

fn q<S: Scalar>(n: i64, d: i64) -> S {
    S::from_ratio(n, d)
}

fn mx<S: Scalar>(xs: Vec<S>) -> S {
    max_in(xs).expect("nonempty")
}

fn mn<S: Scalar>(xs: Vec<S>) -> S {
    min_in(xs).expect("nonempty")
}

/// Co-operation partner for a case-B pair (`a1 > b1`, `a1 + a2 < b1 + b2`).
///
/// `psi2 = (beta1, beta1, beta2)`, `phi2 = (alpha1, alpha2, alpha2)` with the
/// ratio `alpha1 / alpha2` swept geometrically above `max(a1/a2, b1/b3)` and
/// `beta2` at the midpoint of its admissible window. This choice always leaves
/// `psi1 -> phi2`, so the cross variant is tried next and returned when it
/// succeeds.
pub fn synthesize_case_b<S: Scalar>(
    psi: &SchmidtVector<S>,
    phi: &SchmidtVector<S>,
    cfg: &NumericConfig,
) -> Result<CoopSynthesis<S>> {
    let p = require_case(psi, phi, Case3x3::B, cfg)?;
    let [a1, a2, a3] = p.a.clone();
    let [b1, b2, b3] = p.b.clone();
    let one = S::one();
    let two = q::<S>(2, 1);

    let mut primary = None;
    let mut attempts = 0;
    if b3.is_positive() {
        let bound = S::max_of(a1.clone() / a2.clone(), b1.clone() / b3.clone());
        let step = q::<S>(21, 20);
        let mut ratio = bound;
        for _ in 0..RATIO_ATTEMPTS {
            attempts += 1;
            ratio = (ratio * step.clone()).ceil_to(RATIO_GRID);
            let alpha2 = one.clone() / (ratio.clone() + two.clone());
            let alpha1 = ratio.clone() * alpha2.clone();
            let lo = mx(vec![
                alpha2.clone() * b3.clone() / a3.clone(),
                alpha2.clone() * (b2.clone() + two.clone() * b3.clone()),
                (alpha2.clone() * (two.clone() - b1.clone()) - a3.clone()) / (one.clone() - a3.clone()),
                one.clone() - alpha1.clone() * (b1.clone() + b2.clone()) / a1.clone(),
                one.clone() - two.clone() * alpha1.clone(),
                S::zero(),
            ]);
            let hi = mn(vec![
                a3.clone() / (two.clone() * a1.clone() + a3.clone()),
                alpha2.clone(),
                q(1, 3),
            ]);
            if cfg.lt(&lo, &hi) {
                let beta2 = midpoint(&lo, &hi);
                let beta1 = (one.clone() - beta2.clone()) * S::half();
                primary = Some((beta1, beta2, alpha1, alpha2));
                break;
            }
        }
    }
    let Some((beta1, beta2, alpha1, alpha2)) = primary else {
        return synthesize_case_b_cross(psi, phi, cfg).map_err(|_| Error::EmptyWindow { attempts });
    };
    let psi2 = state3(beta1.clone(), beta1, beta2, cfg)?;
    let phi2 = state3(alpha1, alpha2.clone(), alpha2, cfg)?;
    let Some(mut found) = certify(psi, phi, psi2, phi2, Method::ClosedForm, cfg)? else {
        return synthesize_case_b_cross(psi, phi, cfg).map_err(|_| Error::OracleRejected {
            detail: "case-B window point fails joint majorization".into(),
        });
    };
    if found.cross.all_incomparable() {
        return Ok(found);
    }
    match synthesize_case_b_cross(psi, phi, cfg) {
        Ok(cross) if cross.cross.all_incomparable() => Ok(cross),
        Ok(_) | Err(_) => {
            found
                .warnings
                .push(Warning::new("cross_variant_failed", "kept the primary construction"));
            Ok(found)
        }
    }
}

/// Case-B partner with every cross pair incomparable, `psi2 = (beta1, beta2, beta3)`.
///
/// Tries the textual inequality system first, then an exact search over
/// `phi2 = (1 - 2 alpha2, alpha2, alpha2)` making `(psi1, phi2)` incomparable,
/// with `psi2` solved from the incomparability and joint-majorization
/// constraints.
pub fn synthesize_case_b_cross<S: Scalar>(
    psi: &SchmidtVector<S>,
    phi: &SchmidtVector<S>,
    cfg: &NumericConfig,
) -> Result<CoopSynthesis<S>> {
    let p = require_case(psi, phi, Case3x3::B, cfg)?;
    let [a1, a2, a3] = p.a.clone();
    let [b1, b2, b3] = p.b.clone();
    if cfg.eq(&a2, &a3) {
        return Err(Error::DegenerateSource);
    }
    let one = S::one();
    let two = q::<S>(2, 1);
    let unit_box = vec![(S::zero(), one.clone()); 2];

    // Variables x = (beta1, beta2); beta3 = 1 - beta1 - beta2.
    let v = |i| Affine::<S>::var(i, 2);
    let k = |c: S| Affine::<S>::constant(c, 2);
    let beta3 = || k(one.clone()) - v(0) - v(1);
    let ordering = || vec![v(0).gt(&v(1)), v(1).gt(&beta3()), beta3().gt_const(S::zero())];
    let build = |x: &[S], alpha1: &S, alpha2: &S| -> Result<(SchmidtVector<S>, SchmidtVector<S>)> {
        let b3x = one.clone() - x[0].clone() - x[1].clone();
        Ok((
            state3(x[0].clone(), x[1].clone(), b3x, cfg)?,
            state3(alpha1.clone(), alpha2.clone(), alpha2.clone(), cfg)?,
        ))
    };

    if b3.is_positive() {
        let bound = S::max_of(a1.clone() / a2.clone(), b1.clone() / b3.clone());
        let mut ratio = bound;
        for _ in 0..RATIO_ATTEMPTS {
            ratio = (ratio * q::<S>(21, 20)).ceil_to(RATIO_GRID);
            let alpha2 = one.clone() / (ratio.clone() + two.clone());
            let alpha1 = ratio.clone() * alpha2.clone();
            let slack = (v(0) * a3.clone() - beta3() * a2.clone()) + (b3.clone() - a3.clone());
            let mut cons = ordering();
            cons.extend([
                (beta3() * a1.clone()).gt(&(v(0) * a3.clone())),
                (v(0) * a3.clone()).gt_const(b1.clone() * alpha2.clone()),
                (v(0) * a1.clone()).lt_const(b1.clone() * alpha1.clone()),
                (beta3() * a3.clone()).gt_const(b3.clone() * alpha2.clone()),
                slack.lt_const(S::zero()),
                slack.lt_const(alpha1.clone() * b3.clone() - alpha2.clone() * b2.clone()),
                slack.lt(&(v(1) * a2.clone() + (-(alpha2.clone() * b2.clone())))),
                v(0).lt_const(alpha1.clone()),
                (v(0) + v(1)).gt_const(alpha1.clone() + alpha2.clone()),
            ]);
            if let Some(x) = feasible_point(&cons, &unit_box, cfg) {
                let (psi2, phi2) = build(&x, &alpha1, &alpha2)?;
                if let Some(found) = certify(psi, phi, psi2, phi2, Method::Cross, cfg)? {
                    if found.cross.all_incomparable() {
                        return Ok(found);
                    }
                }
            }
        }
    }

    let lo = a3.clone();
    let hi = S::min_of((a2.clone() + a3.clone()) * S::half(), q(1, 3));
    let n = FALLBACK_STEPS as i64;
    for s in 0..n {
        let alpha2 = lo.clone() + (hi.clone() - lo.clone()) * q::<S>(2 * s + 1, 2 * n);
        let alpha1 = one.clone() - two.clone() * alpha2.clone();
        let phi2 = state3(alpha1.clone(), alpha2.clone(), alpha2.clone(), cfg)?;
        let target = tensor(phi, &phi2).prefix_sums();
        let majorization = tensor_prefix_constraints(&p.a, &[v(0), v(1), beta3()], &target);
        for aux_first_larger in [false, true] {
            for phi_first_larger in [true, false] {
                let mut cons = ordering();
                cons.extend(incomparable_with(&v(0), &(v(0) + v(1)), &alpha1, &(alpha1.clone() + alpha2.clone()), aux_first_larger));
                cons.extend(incomparable_with(&v(0), &(v(0) + v(1)), &b1, &(b1.clone() + b2.clone()), phi_first_larger));
                cons.extend(majorization.iter().cloned());
                if let Some(x) = feasible_point(&cons, &unit_box, cfg) {
                    let (psi2, phi2) = build(&x, &alpha1, &alpha2)?;
                    if let Some(mut found) = certify(psi, phi, psi2, phi2, Method::OracleFallback, cfg)? {
                        if found.cross.all_incomparable() {
                            found
                                .warnings
                                .push(Warning::new("closed_form_empty", "textual cross system infeasible on the ratio sweep"));
                            return Ok(found);
                        }
                    }
                }
            }
        }
    }
    Err(Error::EmptyWindow {
        attempts: RATIO_ATTEMPTS + FALLBACK_STEPS,
    })
}

/// Constraints making `(x1, x1 + x2)` cross `(y1, y1 + y2)`: `x1 > y1` and
/// `x1 + x2 < y1 + y2` when `first_larger`, the reverse otherwise.
fn incomparable_with<S: Scalar>(first: &Affine<S>, top2: &Affine<S>, y1: &S, y12: &S, first_larger: bool) -> Vec<Halfspace<S>> {
    if first_larger {
        vec![first.gt_const(y1.clone()), top2.lt_const(y12.clone())]
    } else {
        vec![first.lt_const(y1.clone()), top2.gt_const(y12.clone())]
    }
}

/// Co-operation partner for a case-A pair (`a1 < b1`, `a1 + a2 > b1 + b2`).
///
/// `psi2 = (beta1, beta2, beta3)`, `phi2 = (alpha1, alpha1, alpha2)`. For
/// `a1 < 1/2` the point is the vertex centroid of the closed-form polytope in
/// `(alpha1, beta1, beta2)`; for `a1 >= 1/2`, `beta1 = 1/2` and five lower
/// bounds constrain `alpha1`. The auxiliary pair is kept incomparable with `beta1 > alpha1`
/// and `beta1 + beta2 < 2 alpha1`.
pub fn synthesize_case_a<S: Scalar>(
    psi: &SchmidtVector<S>,
    phi: &SchmidtVector<S>,
    cfg: &NumericConfig,
) -> Result<CoopSynthesis<S>> {
    let p = require_case(psi, phi, Case3x3::A, cfg)?;
    let [a1, a2, a3] = p.a.clone();
    let [b1, b2, b3] = p.b.clone();
    let one = S::one();
    let two = q::<S>(2, 1);
    let half = S::half();

    let closed = if cfg.lt(&a1, &half) {
        // x = (alpha1, beta1, beta2)
        let v = |i| Affine::<S>::var(i, 3);
        let k = |c: S| Affine::<S>::constant(c, 3);
        let beta3 = k(one.clone()) - v(1) - v(2);
        let cons = vec![
            v(1).gt(&v(2)),
            v(2).gt(&beta3),
            beta3.gt_const(S::zero()),
            v(0).gt_const(q(1, 3)),
            v(0).lt_const(half.clone()),
            v(1).gt(&v(0)),
            (v(1) + v(2)).lt(&(v(0) * two.clone())),
            (v(0) * b3.clone()).gt(&(beta3.clone() * a1.clone())),
            (beta3.clone() * a1.clone()).gt(&(v(1) * a3.clone())),
            v(0).gt(&(v(1) * (a1.clone() / b1.clone()))),
            v(0).gt(&((v(1) * (a1.clone() + a2.clone()) + v(2) * a1.clone()) * (one.clone() / (two.clone() * b1.clone() + b2.clone())))),
            v(0).gt(&((v(1) + v(2)) * ((one.clone() - a3.clone()) / (two.clone() * (one.clone() - b3.clone()))))),
        ];
        let bounds = vec![(q(1, 3), half.clone()), (S::zero(), one.clone()), (S::zero(), one.clone())];
        feasible_point(&cons, &bounds, cfg).map(|x| {
            let alpha1 = x[0].clone();
            let b3x = one.clone() - x[1].clone() - x[2].clone();
            (alpha1, [x[1].clone(), x[2].clone(), b3x])
        })
    } else {
        // x = (alpha1, beta2); beta1 = 1/2
        let v = |i| Affine::<S>::var(i, 2);
        let k = |c: S| Affine::<S>::constant(c, 2);
        let beta3 = k(half.clone()) - v(1);
        let denom_b = one.clone() / (two.clone() * (two.clone() * b1.clone() + b2.clone()));
        let cons = vec![
            v(1).gt_const(q(1, 4)),
            v(1).lt_const(half.clone()),
            v(0).gt_const(q(1, 3)),
            v(0).lt_const(half.clone()),
            (v(1) + half.clone()).lt(&(v(0) * two.clone())),
            (v(0) * b3.clone()).gt(&(beta3.clone() * a1.clone())),
            (beta3.clone() * a1.clone()).gt_const(half.clone() * a3.clone()),
            v(0).gt_const(a1.clone() / (two.clone() * b1.clone())),
            v(0).gt(&((v(1) * (two.clone() * a1.clone()) + (a1.clone() + a2.clone())) * denom_b)),
            v(0).gt(&((v(1) + half.clone()) * ((one.clone() - a3.clone()) / (two.clone() * (one.clone() - b3.clone()))))),
            v(0).gt_const((two.clone() * a1.clone() + a2.clone()) / (q::<S>(4, 1) * (b1.clone() + b2.clone()))),
            v(0).gt(&((k(a1.clone() + a2.clone()) - beta3.clone() * a2.clone()) * (one.clone() / (two.clone() - b3.clone())))),
        ];
        let bounds = vec![(q(1, 3), half.clone()), (q(1, 4), half.clone())];
        feasible_point(&cons, &bounds, cfg).map(|x| {
            let b3x = half.clone() - x[1].clone();
            (x[0].clone(), [half.clone(), x[1].clone(), b3x])
        })
    };

    let mut warnings = Vec::new();
    if let Some((alpha1, [beta1, beta2, beta3])) = closed {
        let psi2 = state3(beta1, beta2, beta3, cfg)?;
        let phi2 = state3(alpha1.clone(), alpha1.clone(), one.clone() - two.clone() * alpha1, cfg)?;
        match certify(psi, phi, psi2, phi2, Method::ClosedForm, cfg)? {
            Some(found) => return Ok(found),
            None => warnings.push(Warning::new("closed_form_rejected", "window point fails joint majorization")),
        }
    } else {
        warnings.push(Warning::new("closed_form_empty", "no interior point in the closed-form window"));
    }

    let v = |i| Affine::<S>::var(i, 2);
    let beta3 = Affine::constant(one.clone(), 2) - v(0) - v(1);
    let unit_box = vec![(S::zero(), one.clone()); 2];
    let n = FALLBACK_STEPS as i64;
    for s in 0..n {
        let alpha1 = q::<S>(1, 3) + q::<S>(1, 6) * q::<S>(2 * s + 1, 2 * n);
        let phi2 = state3(alpha1.clone(), alpha1.clone(), one.clone() - two.clone() * alpha1.clone(), cfg)?;
        let target = tensor(phi, &phi2).prefix_sums();
        let mut cons = vec![
            v(0).gt(&v(1)),
            v(1).gt(&beta3),
            beta3.gt_const(S::zero()),
            v(0).gt_const(alpha1.clone()),
            (v(0) + v(1)).lt_const(two.clone() * alpha1.clone()),
        ];
        cons.extend(tensor_prefix_constraints(&p.a, &[v(0), v(1), beta3.clone()], &target));
        if let Some(x) = feasible_point(&cons, &unit_box, cfg) {
            let b3x = one.clone() - x[0].clone() - x[1].clone();
            let psi2 = state3(x[0].clone(), x[1].clone(), b3x, cfg)?;
            if let Some(mut found) = certify(psi, phi, psi2, phi2, Method::OracleFallback, cfg)? {
                warnings.append(&mut found.warnings);
                found.warnings = warnings;
                return Ok(found);
            }
        }
    }
    if warnings.iter().any(|w| w.code == "closed_form_rejected") {
        Err(Error::OracleRejected {
            detail: "case-A window point fails joint majorization and the exact search found nothing".into(),
        })
    } else {
        Err(Error::EmptyWindow {
            attempts: FALLBACK_STEPS,
        })
    }
}

/// Dispatches on the case of an incomparable 3x3 pair.
pub fn synthesize<S: Scalar>(psi: &SchmidtVector<S>, phi: &SchmidtVector<S>, cfg: &NumericConfig) -> Result<CoopSynthesis<S>> {
    match classify(psi, phi, cfg)?.case3x3 {
        Some(Case3x3::A) => synthesize_case_a(psi, phi, cfg),
        Some(Case3x3::B) => synthesize_case_b(psi, phi, cfg),
        None if psi.len() == 3 && phi.len() == 3 => Err(Error::NotIncomparable),
        None => Err(Error::InvalidDimension(psi.len().max(phi.len()))),
    }
}

/// Which incomparability case `chi` is in relative to `psi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SplitCase {
    /// `a1 > b1`: `eta = (1 - 2 alpha2, alpha2, alpha2)`, free parameter `alpha2`.
    #[serde(rename = "B")]
    B,
    /// `a1 < b1`: `eta = (alpha1, alpha1, 1 - 2 alpha1)`, free parameter `alpha1`.
    #[serde(rename = "A")]
    A,
}

impl SplitCase {
    pub fn parameter(self) -> &'static str {
        match self {
            SplitCase::B => "alpha2",
            SplitCase::A => "alpha1",
        }
    }

    /// `eta` as affine functions of the free parameter.
    fn eta_lines<S: Scalar>(self) -> [Linear<S>; 3] {
        let (one, zero, two) = (S::one(), S::zero(), q::<S>(2, 1));
        match self {
            SplitCase::B => [Linear::new(one, -two), Linear::new(zero.clone(), S::one()), Linear::new(zero, S::one())],
            SplitCase::A => [Linear::new(zero.clone(), S::one()), Linear::new(zero, S::one()), Linear::new(one, -two)],
        }
    }

    fn eta<S: Scalar>(self, t: &S, cfg: &NumericConfig) -> Result<SchmidtVector<S>> {
        let [x, y, z] = self.eta_lines::<S>();
        state3(x.at(t), y.at(t), z.at(t), cfg)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitResult<S> {
    pub psi: SchmidtVector<S>,
    pub chi: SchmidtVector<S>,
    pub eta: SchmidtVector<S>,
    pub case: SplitCase,
    /// Value of the free parameter used for `eta`.
    pub parameter: S,
    /// Open interval from the closed-form bounds and the incomparability constraints.
    pub alpha_interval: (S, S),
    /// Exact open intervals, within the incomparability range, on which the
    /// joint conversion holds.
    pub oracle_intervals: Vec<(S, S)>,
    pub certificate: OracleReport<S>,
    pub warnings: Vec<Warning>,
}

impl<S: Scalar> SplitResult<S> {
    pub fn to_json(&self) -> serde_json::Value {
        let pair = |(lo, hi): &(S, S)| json!([lo.to_json(), hi.to_json()]);
        json!({
            "chi": self.chi.to_json(),
            "eta": self.eta.to_json(),
            "case": self.case,
            "parameter": self.case.parameter(),
            "value": self.parameter.to_json(),
            "interval": pair(&self.alpha_interval),
            "oracle_interval": self.oracle_intervals.iter().map(pair).collect::<Vec<_>>(),
            "warnings": self.warnings,
            "verified": self.certificate.ok,
        })
    }

    /// Oracle interval containing the chosen parameter.
    pub fn oracle_interval(&self) -> Option<&(S, S)> {
        self.oracle_intervals
            .iter()
            .find(|(lo, hi)| *lo < self.parameter && self.parameter < *hi)
    }
}

fn require_distinct<S: Scalar>(psi: &SchmidtVector<S>, cfg: &NumericConfig) -> Result<[S; 3]> {
    if psi.len() != 3 {
        return Err(Error::InvalidDimension(psi.len()));
    }
    let a = [psi.get(0), psi.get(1), psi.get(2)];
    if !(cfg.gt(&a[0], &a[1]) && cfg.gt(&a[1], &a[2]) && cfg.is_positive(&a[2])) {
        return Err(Error::DegenerateSource);
    }
    Ok(a)
}

/// Open parameter intervals in `(lo, hi)` where `psi (x) psi -> chi (x) eta(t)`.
pub fn split_oracle_intervals<S: Scalar>(
    psi: &SchmidtVector<S>,
    chi: &SchmidtVector<S>,
    case: SplitCase,
    lo: &S,
    hi: &S,
    cfg: &NumericConfig,
) -> Vec<(S, S)> {
    let source: Vec<Linear<S>> = tensor(psi, psi)
        .coeffs()
        .iter()
        .map(|x| Linear::new(x.clone(), S::zero()))
        .collect();
    let eta = case.eta_lines::<S>();
    let target: Vec<Linear<S>> = chi
        .coeffs()
        .iter()
        .flat_map(|c| eta.iter().map(move |e| Linear::new(c.clone() * e.c0.clone(), c.clone() * e.c1.clone())))
        .collect();
    majorization_windows(&source, &target, lo, hi, cfg)
}

/// Given `chi` incomparable with `psi`, finds `eta` incomparable with `psi`
/// such that `psi (x) psi -> chi (x) eta`.
///
/// The reported interval is the closed-form one (the case bounds intersected with
/// the incomparability range). `eta` is taken at its midpoint when the oracle
/// accepts it, otherwise inside the overlap with the exact oracle intervals.
pub fn two_copy_complete<S: Scalar>(
    psi: &SchmidtVector<S>,
    chi: &SchmidtVector<S>,
    cfg: &NumericConfig,
) -> Result<SplitResult<S>> {
    let [a1, a2, a3] = require_distinct(psi, cfg)?;
    if chi.len() != 3 {
        return Err(Error::InvalidDimension(chi.len()));
    }
    let verdict = classify(psi, chi, cfg)?;
    if !verdict.is_incomparable() {
        return Err(Error::NotIncomparable);
    }
    let [b1, b2, b3] = [chi.get(0), chi.get(1), chi.get(2)];
    let one = S::one();
    let two = q::<S>(2, 1);
    let half = S::half();
    let third = q::<S>(1, 3);
    let a2sq = a2.clone() * a2.clone();
    let a1a3 = a1.clone() * a3.clone();
    if cfg.eq(&a2sq, &a1a3) {
        return Err(Error::BoundaryCase);
    }
    let above = cfg.gt(&a2sq, &a1a3);

    let (case, (lo, hi), (ilo, ihi)) = if cfg.gt(&a1, &b1) {
        let cond = half.clone() * (one.clone() - a1.clone() * a1.clone() / b1.clone());
        if !cfg.lt(&a3, &cond) {
            return Err(Error::InfeasibleSplit(format!(
                "a3 must be below (1 - a1^2/b1)/2 = {}",
                cond.to_f64()
            )));
        }
        if !b3.is_positive() {
            return Err(Error::InfeasibleSplit("chi has a vanishing coefficient".into()));
        }
        let shared = [
            a3.clone() * a3.clone() / b3.clone(),
            a3.clone() * (two.clone() * a2.clone() + a3.clone()) / (b2.clone() + two.clone() * b3.clone()),
        ];
        let first = if above {
            a1.clone() * a3.clone() / b1.clone()
        } else {
            a3.clone() + (a2sq.clone() - a3.clone() * a3.clone()) * half.clone()
        };
        let range_hi = S::min_of((one.clone() - a1.clone()) * half.clone(), third.clone());
        let ub = mn(vec![first, shared[0].clone(), shared[1].clone(), range_hi.clone()]);
        (SplitCase::B, (a3.clone(), ub), (a3.clone(), range_hi))
    } else {
        let lb = if above {
            let t = (a1.clone() + a2.clone()) * (a1.clone() + a2.clone()) / (two.clone() * (b1.clone() + b2.clone()));
            if !cfg.lt(&t, &a1) {
                return Err(Error::InfeasibleSplit("(a1+a2)^2 / (2(b1+b2)) must be below a1".into()));
            }
            vec![
                a1.clone() - (a1.clone() * a1.clone() - a2sq.clone()) * half.clone(),
                t,
                a1.clone() * a1.clone() / b1.clone(),
                a1.clone() * (a1.clone() + two.clone() * a2.clone()) / (two.clone() * b1.clone() + b2.clone()),
            ]
        } else {
            if !cfg.lt(&(a1.clone() + two.clone() * a2.clone()), &(two.clone() * b1.clone() + b2.clone())) {
                return Err(Error::InfeasibleSplit("a1 + 2a2 must be below 2b1 + b2".into()));
            }
            vec![
                a1.clone() - (a1.clone() * a1.clone() - a2sq.clone()) * half.clone(),
                a1.clone() * (two.clone() - a1.clone()) / (two.clone() - b3.clone()),
                a1.clone() * a1.clone() / b1.clone(),
                a1.clone() * (a1.clone() + two.clone() * a2.clone()) / (two.clone() * b1.clone() + b2.clone()),
            ]
        };
        let range_lo = S::max_of((a1.clone() + a2.clone()) * half.clone(), third.clone());
        let mut all = lb;
        all.push(range_lo.clone());
        (SplitCase::A, (mx(all), a1.clone()), (range_lo, a1.clone()))
    };
    if !cfg.lt(&lo, &hi) {
        return Err(Error::InfeasibleSplit(format!(
            "empty {} interval ({}, {})",
            case.parameter(),
            lo.to_f64(),
            hi.to_f64()
        )));
    }

    let oracle_intervals = split_oracle_intervals(psi, chi, case, &ilo, &ihi, cfg);
    let square = tensor(psi, psi);
    let accepts = |t: &S| -> Result<bool> { Ok(majorized_by(&square, &tensor(chi, &case.eta(t, cfg)?), cfg).ok) };

    let mut warnings = Vec::new();
    let mut t = midpoint(&lo, &hi);
    if !accepts(&t)? {
        let overlap = oracle_intervals.iter().find_map(|(olo, ohi)| {
            let l = S::max_of(olo.clone(), lo.clone());
            let h = S::min_of(ohi.clone(), hi.clone());
            cfg.lt(&l, &h).then(|| midpoint(&l, &h))
        });
        match overlap {
            Some(m) => {
                warnings.push(Warning::new(
                    "closed_form_point_rejected",
                    format!("closed-form midpoint {} fails joint majorization", t.to_f64()),
                ));
                t = m;
            }
            None => {
                return Err(Error::InfeasibleSplit(
                    "closed-form interval does not meet the exact feasible set".into(),
                ))
            }
        }
    }
    let eta = case.eta(&t, cfg)?;
    let certificate = majorized_by(&square, &tensor(chi, &eta), cfg);
    if !certificate.ok || !classify(psi, &eta, cfg)?.is_incomparable() {
        return Err(Error::InvariantViolation("selected eta fails the oracle".into()));
    }
    Ok(SplitResult {
        psi: psi.clone(),
        chi: chi.clone(),
        eta,
        case,
        parameter: t,
        alpha_interval: (lo, hi),
        oracle_intervals,
        certificate,
        warnings,
    })
}

/// Two states `chi`, `eta`, both incomparable with `psi`, obtainable from
/// two copies of `psi`.
///
/// `chi` is chosen in case B relative to `psi` so that the case-B
/// feasibility condition and window hold; `eta` then comes from
/// [`two_copy_complete`].
pub fn two_copy_split<S: Scalar>(psi: &SchmidtVector<S>, cfg: &NumericConfig) -> Result<SplitResult<S>> {
    let [a1, a2, a3] = require_distinct(psi, cfg)?;
    let one = S::one();
    let two = q::<S>(2, 1);
    let lower = mx(vec![
        a1.clone() * a1.clone() / (one.clone() - two.clone() * a3.clone()),
        (one.clone() + a1.clone() - a2.clone()) * q(1, 3),
        (a1.clone() + a2.clone()) * S::half(),
        a1.clone() - a2.clone(),
        q(1, 3),
    ]);
    if !cfg.lt(&lower, &a1) {
        return Err(Error::InfeasibleSplit("no admissible first coefficient for chi".into()));
    }
    let b1 = midpoint(&lower, &a1);
    let b3_lo = S::max_of(S::zero(), one.clone() - two.clone() * b1.clone());
    let b3_hi = mn(vec![
        a3.clone(),
        a2.clone() - a1.clone() + b1.clone(),
        (one.clone() - b1.clone()) * S::half(),
    ]);
    if !cfg.lt(&b3_lo, &b3_hi) {
        return Err(Error::InfeasibleSplit("no admissible last coefficient for chi".into()));
    }
    let b3 = midpoint(&b3_lo, &b3_hi);
    let b2 = one - b1.clone() - b3.clone();
    let chi = state3(b1, b2, b3, cfg)?;
    let result = two_copy_complete(psi, &chi, cfg)?;
    let eta_case = classify(psi, &result.eta, cfg)?.case3x3;
    let chi_case = classify(psi, &chi, cfg)?.case3x3;
    if chi_case != Some(Case3x3::B) || eta_case != Some(Case3x3::A) {
        return Err(Error::InvariantViolation("split states violate the incomparability pattern".into()));
    }
    Ok(result)
}
