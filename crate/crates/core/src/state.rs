//! Schmidt coefficient vectors and the majorization order on them.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{NumericConfig, Scalar};

/// Descending, normalized, nonnegative Schmidt coefficients of a pure
/// bipartite state.
///
/// Trailing zeros are kept, so `len()` is the Schmidt dimension while
/// [`SchmidtVector::rank`] counts strictly positive coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtVector<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> SchmidtVector<S> {
    /// Canonicalizes raw coefficients: clamps tolerance-level negatives,
    /// sorts descending and normalizes to unit sum.
    pub fn new(raw: Vec<S>, cfg: &NumericConfig) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyVector);
        }
        let zero = S::zero();
        let mut coeffs = Vec::with_capacity(raw.len());
        for (index, x) in raw.into_iter().enumerate() {
            if cfg.lt(&x, &zero) {
                return Err(Error::NegativeCoefficient {
                    index,
                    value: format!("{x:?}"),
                });
            }
            coeffs.push(if x < zero { zero.clone() } else { x });
        }
        let total = crate::scalar::sum(coeffs.iter().cloned());
        if !cfg.is_positive(&total) {
            return Err(Error::ZeroVector);
        }
        let mut coeffs: Vec<S> = coeffs.into_iter().map(|x| x / total.clone()).collect();
        sort_desc(&mut coeffs);
        Ok(SchmidtVector { coeffs })
    }

    /// Caller guarantees the coefficients are already canonical.
    pub(crate) fn from_canonical(coeffs: Vec<S>) -> Self {
        debug_assert!(coeffs.windows(2).all(|w| w[0] >= w[1]));
        SchmidtVector { coeffs }
    }

    /// Product state `(1)`.
    pub fn product() -> Self {
        SchmidtVector {
            coeffs: vec![S::one()],
        }
    }

    /// Maximally entangled state of Schmidt rank `d`.
    pub fn uniform(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(d));
        }
        Ok(SchmidtVector {
            coeffs: vec![S::from_ratio(1, d as i64); d],
        })
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn rank(&self, cfg: &NumericConfig) -> usize {
        self.coeffs.iter().filter(|x| cfg.is_positive(*x)).count()
    }

    /// Largest coefficient.
    pub fn first(&self) -> &S {
        &self.coeffs[0]
    }

    /// Smallest coefficient (the `d`-th, possibly zero).
    pub fn last(&self) -> &S {
        &self.coeffs[self.coeffs.len() - 1]
    }

    pub fn get(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    pub fn prefix_sums(&self) -> Vec<S> {
        prefix_sums(&self.coeffs)
    }

    /// True when consecutive coefficients differ (within tolerance).
    pub fn is_strictly_decreasing(&self, cfg: &NumericConfig) -> bool {
        self.coeffs.windows(2).all(|w| cfg.gt(&w[0], &w[1]))
    }

    pub fn to_f64(&self) -> SchmidtVector<f64> {
        SchmidtVector {
            coeffs: self.coeffs.iter().map(Scalar::to_f64).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "coeffs": self.coeffs.iter().map(Scalar::to_json).collect::<Vec<_>>() })
    }
}

/// `make_state`: canonical Schmidt vector from raw nonnegative weights.
pub fn make_state<S: Scalar>(raw: Vec<S>, cfg: &NumericConfig) -> Result<SchmidtVector<S>> {
    SchmidtVector::new(raw, cfg)
}

/// Schmidt spectrum of `|u> (x) |v>`: all pairwise products, sorted.
pub fn tensor<S: Scalar>(u: &SchmidtVector<S>, v: &SchmidtVector<S>) -> SchmidtVector<S> {
    let mut coeffs = Vec::with_capacity(u.len() * v.len());
    for x in &u.coeffs {
        for y in &v.coeffs {
            coeffs.push(x.clone() * y.clone());
        }
    }
    sort_desc(&mut coeffs);
    SchmidtVector { coeffs }
}

/// Tensor product of a nonempty list of states, honoring `cfg.tensor_cap`.
pub fn tensor_all<S: Scalar>(states: &[SchmidtVector<S>], cfg: &NumericConfig) -> Result<SchmidtVector<S>> {
    let (first, rest) = states
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("empty list of states".into()))?;
    let len = states
        .iter()
        .try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128))
        .unwrap_or(u128::MAX);
    check_cap(len, cfg)?;
    Ok(rest.iter().fold(first.clone(), |acc, s| tensor(&acc, s)))
}

pub fn tensor_power<S: Scalar>(u: &SchmidtVector<S>, k: u32, cfg: &NumericConfig) -> Result<SchmidtVector<S>> {
    if k == 0 {
        return Err(Error::InvalidArgument("tensor power must be at least 1".into()));
    }
    let len = (u.len() as u128).checked_pow(k).unwrap_or(u128::MAX);
    check_cap(len, cfg)?;
    let mut acc = u.clone();
    for _ in 1..k {
        acc = tensor(&acc, u);
    }
    Ok(acc)
}

fn check_cap(len: u128, cfg: &NumericConfig) -> Result<()> {
    if len > cfg.tensor_cap as u128 {
        Err(Error::SizeOverflow {
            len,
            cap: cfg.tensor_cap,
        })
    } else {
        Ok(())
    }
}

/// Appends zeros up to length `n`.
pub fn pad<S: Scalar>(u: &SchmidtVector<S>, n: usize) -> Result<SchmidtVector<S>> {
    if n < u.len() {
        return Err(Error::ShrinkNotAllowed {
            len: u.len(),
            target: n,
        });
    }
    let mut coeffs = u.coeffs.clone();
    coeffs.resize(n, S::zero());
    Ok(SchmidtVector { coeffs })
}

/// Prefix-sum trace of a majorization check `x ≺ y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport<S> {
    pub ok: bool,
    /// `(sum of first k of x, sum of first k of y)` for k = 1..=max(len).
    #[serde(skip)]
    pub prefix_pairs: Vec<(S, S)>,
    /// 1-based index of the first prefix where x exceeds y.
    pub first_violation: Option<usize>,
    pub sizes: (usize, usize),
}

impl<S: Scalar> OracleReport<S> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "ok": self.ok,
            "first_violation": self.first_violation,
            "sizes": [self.sizes.0, self.sizes.1],
            "prefix_pairs": self
                .prefix_pairs
                .iter()
                .map(|(a, b)| serde_json::json!([a.to_json(), b.to_json()]))
                .collect::<Vec<_>>(),
        })
    }
}

/// `x ≺ y`: every prefix sum of `x` is at most the matching prefix sum of `y`.
/// The shorter vector is padded with zeros.
pub fn majorized_by<S: Scalar>(x: &SchmidtVector<S>, y: &SchmidtVector<S>, cfg: &NumericConfig) -> OracleReport<S> {
    let n = x.len().max(y.len());
    let mut sx = S::zero();
    let mut sy = S::zero();
    let mut prefix_pairs = Vec::with_capacity(n);
    let mut first_violation = None;
    for k in 0..n {
        sx = sx + x.get(k);
        sy = sy + y.get(k);
        if first_violation.is_none() && cfg.gt(&sx, &sy) {
            first_violation = Some(k + 1);
        }
        prefix_pairs.push((sx.clone(), sy.clone()));
    }
    OracleReport {
        ok: first_violation.is_none(),
        prefix_pairs,
        first_violation,
        sizes: (x.len(), y.len()),
    }
}

/// Equal spectra up to zero padding and tolerance.
pub fn same_spectrum<S: Scalar>(x: &SchmidtVector<S>, y: &SchmidtVector<S>, cfg: &NumericConfig) -> bool {
    let n = x.len().max(y.len());
    (0..n).all(|i| cfg.eq(&x.get(i), &y.get(i)))
}

/// Entropy of entanglement in bits, `-Σ p log2 p`. Uniform spectra give
/// `log2(rank)` exactly.
pub fn entropy<S: Scalar>(u: &SchmidtVector<S>) -> f64 {
    let rank = u.coeffs.iter().filter(|p| p.is_positive()).count();
    if u.coeffs[..rank].windows(2).all(|w| w[0] == w[1]) {
        return (rank as f64).log2();
    }
    u.coeffs
        .iter()
        .map(Scalar::to_f64)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

pub(crate) fn prefix_sums<S: Scalar>(xs: &[S]) -> Vec<S> {
    let mut acc = S::zero();
    xs.iter()
        .map(|x| {
            acc = acc.clone() + x.clone();
            acc.clone()
        })
        .collect()
}

pub(crate) fn sort_desc<S: Scalar>(xs: &mut [S]) {
    xs.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
}
