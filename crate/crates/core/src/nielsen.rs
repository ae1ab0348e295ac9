//! Deterministic LOCC classification of ordered pairs of pure states.
//!
//! `psi -> phi` is possible with certainty iff the spectrum of `psi` is
//! majorized by the spectrum of `phi`.
//!
//! For Schmidt dimension 3 an incomparable pair falls in exactly one of two
//! cases, labelled here independently of either naming used in the literature:
//!
//! * case A: `a1 < b1` and `a1 + a2 > b1 + b2`
//! * case B: `a1 > b1` and `a1 + a2 < b1 + b2`

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{NumericConfig, Scalar};
use crate::state::{majorized_by, pad, same_spectrum, tensor_power, SchmidtVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `psi -> phi`
    Forward,
    /// `phi -> psi`
    Backward,
    /// Equal spectra: local-unitary equivalent.
    Both,
    /// Incomparable.
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Case3x3 {
    A,
    B,
}

impl fmt::Display for Case3x3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case3x3::A => "A",
            Case3x3::B => "B",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ConversionVerdict {
    pub direction: Direction,
    pub strong: bool,
    pub case3x3: Option<Case3x3>,
}

impl ConversionVerdict {
    pub fn is_incomparable(&self) -> bool {
        self.direction == Direction::Neither
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("verdict serializes")
    }
}

pub fn classify<S: Scalar>(
    psi: &SchmidtVector<S>,
    phi: &SchmidtVector<S>,
    cfg: &NumericConfig,
) -> Result<ConversionVerdict> {
    let forward = majorized_by(psi, phi, cfg).ok;
    let backward = majorized_by(phi, psi, cfg).ok;
    let direction = match (forward, backward) {
        (true, true) => {
            if !same_spectrum(psi, phi, cfg) {
                return Err(Error::InvariantViolation(
                    "mutual majorization between different spectra".into(),
                ));
            }
            Direction::Both
        }
        (true, false) => Direction::Forward,
        (false, true) => Direction::Backward,
        (false, false) => Direction::Neither,
    };
    if direction != Direction::Neither {
        return Ok(ConversionVerdict {
            direction,
            strong: false,
            case3x3: None,
        });
    }

    let d = psi.len().max(phi.len());
    let (a, b) = (pad(psi, d)?, pad(phi, d)?);
    let strong = strict_same_side(&a, &b, cfg);
    let case3x3 = if d == 3 {
        match case_3x3(&a, &b, cfg) {
            Some(c) => Some(c),
            None => {
                return Err(Error::InvariantViolation(
                    "incomparable 3x3 pair matches neither case A nor case B".into(),
                ))
            }
        }
    } else {
        None
    };
    Ok(ConversionVerdict {
        direction,
        strong,
        case3x3,
    })
}

/// Case label of a dimension-3 pair, ignoring whether it is incomparable.
pub fn case_3x3<S: Scalar>(psi: &SchmidtVector<S>, phi: &SchmidtVector<S>, cfg: &NumericConfig) -> Option<Case3x3> {
    if psi.len() != 3 || phi.len() != 3 {
        return None;
    }
    let (a1, b1) = (psi.get(0), phi.get(0));
    let a12 = a1.clone() + psi.get(1);
    let b12 = b1.clone() + phi.get(1);
    if cfg.lt(&a1, &b1) && cfg.gt(&a12, &b12) {
        Some(Case3x3::A)
    } else if cfg.gt(&a1, &b1) && cfg.lt(&a12, &b12) {
        Some(Case3x3::B)
    } else {
        None
    }
}

fn strict_same_side<S: Scalar>(a: &SchmidtVector<S>, b: &SchmidtVector<S>, cfg: &NumericConfig) -> bool {
    let (a1, ad, b1, bd) = (a.first(), a.last(), b.first(), b.last());
    (cfg.lt(a1, b1) && cfg.lt(ad, bd)) || (cfg.gt(a1, b1) && cfg.gt(ad, bd))
}

pub(crate) fn require_same_len<S>(psi: &SchmidtVector<S>, phi: &SchmidtVector<S>) -> Result<usize>
where
    S: Scalar,
{
    if psi.len() != phi.len() {
        Err(Error::RankMismatch {
            left: psi.len(),
            right: phi.len(),
        })
    } else {
        Ok(psi.len())
    }
}

/// Incomparable and `a1 < b1, a_d < b_d` or `a1 > b1, a_d > b_d` (strict).
/// Such pairs stay incomparable for any number of copies.
pub fn is_strongly_incomparable<S: Scalar>(
    psi: &SchmidtVector<S>,
    phi: &SchmidtVector<S>,
    cfg: &NumericConfig,
) -> Result<bool> {
    require_same_len(psi, phi)?;
    let incomparable = !majorized_by(psi, phi, cfg).ok && !majorized_by(phi, psi, cfg).ok;
    Ok(incomparable && strict_same_side(psi, phi, cfg))
}

/// Necessary condition for a catalyst to enable `psi -> phi`:
/// `a1 <= b1` and `a_d >= b_d`.
pub fn catalysis_necessary<S: Scalar>(
    psi: &SchmidtVector<S>,
    phi: &SchmidtVector<S>,
    cfg: &NumericConfig,
) -> Result<bool> {
    require_same_len(psi, phi)?;
    Ok(cfg.le(psi.first(), phi.first()) && cfg.ge(psi.last(), phi.last()))
}

/// Smallest `k <= k_max` with `psi^{(x)k} -> phi^{(x)k}`.
///
/// No monotonicity in `k` is assumed; every `k` is checked in turn.
pub fn multi_copy_convertible<S: Scalar>(
    psi: &SchmidtVector<S>,
    phi: &SchmidtVector<S>,
    k_max: u32,
    cfg: &NumericConfig,
) -> Result<Option<u32>> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let widest = psi.len().max(phi.len()) as u128;
    let len = widest.checked_pow(k_max).unwrap_or(u128::MAX);
    if len > cfg.tensor_cap as u128 {
        return Err(Error::SizeOverflow {
            len,
            cap: cfg.tensor_cap,
        });
    }
    for k in 1..=k_max {
        let x = tensor_power(psi, k, cfg)?;
        let y = tensor_power(phi, k, cfg)?;
        if majorized_by(&x, &y, cfg).ok {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
