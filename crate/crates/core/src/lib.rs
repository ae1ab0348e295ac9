//! Deterministic LOCC convertibility of pure bipartite states.
//!
//! A pure state is represented by its Schmidt coefficients
//! ([`SchmidtVector`]); `psi -> phi` is possible with certainty exactly when
//! the coefficients of `psi` are majorized by those of `phi`. On top of that
//! criterion the crate provides:
//!
//! * [`nielsen`]: classification, strong incomparability, the catalysis
//!   necessary condition and multi-copy checks;
//! * [`assist`]: conversion assisted by extra entanglement, including the
//!   least-entangled two-qubit assist for 3x3 pairs;
//! * [`coop`]: co-operation partners for incomparable 3x3 pairs and the
//!   two-copy split;
//! * [`oracle`]: brute-force verification plus catalyst and partner search.
//!
//! Arithmetic is generic over [`Scalar`]; [`Rational`] gives exact answers and
//! is what every decision should use, `f64` trades that for speed. Every
//! constructed plan carries an [`OracleReport`] from the brute-force check.
//!
//! ```
//! use locc::{nielsen, make_state, NumericConfig, Rational, Scalar};
//!
//! let cfg = NumericConfig::exact();
//! let q = |xs: &[f64]| make_state(xs.iter().map(|&x| Rational::from_f64(x).unwrap()).collect(), &cfg).unwrap();
//! let verdict = nielsen::classify(&q(&[0.4, 0.4, 0.2]), &q(&[0.48, 0.26, 0.26]), &cfg).unwrap();
//! assert!(verdict.is_incomparable() && verdict.strong);
//! ```

pub mod assist;
pub mod coop;
pub mod error;
pub mod exec;
pub mod json;
pub mod nielsen;
pub mod oracle;
pub mod polytope;
pub mod sampling;
pub mod scalar;
pub mod state;

pub use error::{Error, Result};
pub use exec::Exec;
pub use scalar::{Mode, NumericConfig, Rational, Scalar};
pub use state::{
    entropy, make_state, majorized_by, pad, tensor, tensor_all, tensor_power, OracleReport, SchmidtVector,
};
