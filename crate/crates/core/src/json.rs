//! State files: `{"label": "psi", "coeffs": [0.4, "2/5", 0.2]}`.
//!
//! Coefficients may be JSON numbers or `"p/q"` / decimal strings. In exact
//! mode numbers are read through their shortest decimal form, so `0.255`
//! becomes `51/200`. Errors name the offending field, e.g. `coeffs[2]`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{NumericConfig, Scalar};
use crate::state::SchmidtVector;

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledState<S> {
    pub label: Option<String>,
    pub state: SchmidtVector<S>,
}

impl<S: Scalar> LabeledState<S> {
    pub fn to_json(&self) -> Value {
        state_json(&self.state, self.label.as_deref())
    }
}

/// Canonical JSON for a state, with an optional label.
pub fn state_json<S: Scalar>(state: &SchmidtVector<S>, label: Option<&str>) -> Value {
    let coeffs: Vec<Value> = state.coeffs().iter().map(Scalar::to_json).collect();
    match label {
        Some(l) => json!({"label": l, "coeffs": coeffs}),
        None => json!({"coeffs": coeffs}),
    }
}

pub fn parse_state_str<S: Scalar>(text: &str, cfg: &NumericConfig) -> Result<LabeledState<S>> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Malformed {
        field: "$".into(),
        reason: e.to_string(),
    })?;
    parse_state(&value, cfg)
}

pub fn parse_state<S: Scalar>(value: &Value, cfg: &NumericConfig) -> Result<LabeledState<S>> {
    let obj = value.as_object().ok_or_else(|| Error::Malformed {
        field: "$".into(),
        reason: "expected an object with a `coeffs` array".into(),
    })?;
    let label = match obj.get("label") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => {
            return Err(Error::Malformed {
                field: "label".into(),
                reason: "expected a string".into(),
            })
        }
    };
    let raw = obj
        .get("coeffs")
        .ok_or_else(|| Error::Malformed {
            field: "coeffs".into(),
            reason: "missing".into(),
        })?
        .as_array()
        .ok_or_else(|| Error::Malformed {
            field: "coeffs".into(),
            reason: "expected an array".into(),
        })?;
    let coeffs = raw
        .iter()
        .enumerate()
        .map(|(i, v)| parse_scalar(v, &format!("coeffs[{i}]")))
        .collect::<Result<Vec<S>>>()?;
    let state = SchmidtVector::new(coeffs, cfg)?;
    Ok(LabeledState { label, state })
}

/// Reads a number or numeric string.
pub fn parse_scalar<S: Scalar>(value: &Value, field: &str) -> Result<S> {
    let bad = |reason: &str| Error::InvalidNumber {
        field: field.to_owned(),
        reason: reason.to_owned(),
    };
    match value {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(S::from_ratio(i, 1))
            } else {
                let x = n.as_f64().ok_or_else(|| bad("not representable"))?;
                S::from_f64(x).ok_or_else(|| bad("not finite"))
            }
        }
        Value::String(s) => S::parse_str(s).ok_or_else(|| bad(&format!("cannot parse `{s}`"))),
        _ => Err(bad("expected a number or a \"p/q\" string")),
    }
}
