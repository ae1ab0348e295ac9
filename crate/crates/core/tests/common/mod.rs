#![allow(dead_code)]

use locc::{make_state, NumericConfig, Rational, Scalar, SchmidtVector};
use proptest::prelude::*;

pub fn exact() -> NumericConfig {
    NumericConfig::exact()
}

pub fn float() -> NumericConfig {
    NumericConfig::float()
}

pub fn from_weights<S: Scalar>(w: &[u32]) -> SchmidtVector<S> {
    make_state(w.iter().map(|&k| S::from_ratio(k as i64, 1)).collect(), &exact()).unwrap()
}

pub fn dec(xs: &[f64]) -> SchmidtVector<Rational> {
    make_state(xs.iter().map(|&x| Rational::from_f64(x).unwrap()).collect(), &exact()).unwrap()
}

/// Positive integer weights of length `d`.
pub fn weights(d: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..200, d)
}

/// Pairwise distinct positive weights of length `d`.
pub fn distinct_weights(d: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::btree_set(1u32..400, d).prop_map(|s| s.into_iter().collect())
}

pub fn state(d: usize) -> impl Strategy<Value = SchmidtVector<Rational>> {
    weights(d).prop_map(|w| from_weights(&w))
}

pub fn state_upto(max_d: usize) -> impl Strategy<Value = SchmidtVector<Rational>> {
    (1..=max_d).prop_flat_map(state)
}

pub fn distinct_state(d: usize) -> impl Strategy<Value = SchmidtVector<Rational>> {
    distinct_weights(d).prop_map(|w| from_weights(&w))
}

pub fn is_incomparable(x: &SchmidtVector<Rational>, y: &SchmidtVector<Rational>) -> bool {
    let cfg = exact();
    !locc::majorized_by(x, y, &cfg).ok && !locc::majorized_by(y, x, &cfg).ok
}

/// Incomparable pairs of distinct-coefficient states of length `d`.
pub fn incomparable_pair(d: usize) -> impl Strategy<Value = (SchmidtVector<Rational>, SchmidtVector<Rational>)> {
    (distinct_state(d), distinct_state(d)).prop_filter("incomparable", |(x, y)| is_incomparable(x, y))
}
