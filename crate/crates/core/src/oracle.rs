//! Brute-force verification and search.
//!
//! Everything here goes through the full product spectrum and the plain
//! prefix-sum test; nothing relies on the closed forms of the other modules.
//! Search negatives are reported together with the budget spent, never as a
//! proof that no witness exists.

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::nielsen::{self, require_same_len};
use crate::sampling::{composition_from_unit, ShiftedHalton};
use crate::scalar::{NumericConfig, Rational, Scalar};
use crate::state::{majorized_by, tensor, tensor_all, OracleReport, SchmidtVector};

pub use crate::polytope::{feasible_point, Affine, Halfspace};

/// Is `sources[0] (x) sources[1] (x) ...` majorized by the product of `targets`?
pub fn verify<S: Scalar>(
    sources: &[SchmidtVector<S>],
    targets: &[SchmidtVector<S>],
    cfg: &NumericConfig,
) -> Result<OracleReport<S>> {
    if sources.is_empty() || targets.is_empty() {
        return Err(Error::InvalidArgument("sources and targets must be nonempty".into()));
    }
    let x = tensor_all(sources, cfg)?;
    let y = tensor_all(targets, cfg)?;
    Ok(majorized_by(&x, &y, cfg))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    /// Grid step; its inverse must be an integer.
    pub resolution: Rational,
    pub max_samples: usize,
    pub seed: u64,
    /// Rank of the catalyst or of the partner states.
    pub rank: usize,
    /// Run the catalyst grid even when the necessary condition already fails.
    pub exhaustive: bool,
    pub exec: Exec,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            resolution: Rational::new(1.into(), 100.into()),
            max_samples: 10_000,
            seed: 0,
            rank: 2,
            exhaustive: false,
            exec: Exec::default(),
        }
    }
}

impl SearchConfig {
    /// Number of grid steps in the unit interval.
    pub fn steps(&self) -> Result<u32> {
        let r = &self.resolution;
        let bad = || Error::InvalidArgument(format!("resolution must be 1/n for a positive integer n, got {r}"));
        if *r <= Rational::zero() || *r > Rational::one() {
            return Err(bad());
        }
        let inv = r.recip();
        if !inv.is_integer() {
            return Err(bad());
        }
        inv.to_integer().to_u32().ok_or_else(bad)
    }

    fn validate(&self) -> Result<u32> {
        if self.max_samples == 0 {
            return Err(Error::InvalidArgument("max_samples must be at least 1".into()));
        }
        if self.rank == 0 {
            return Err(Error::InvalidArgument("rank must be at least 1".into()));
        }
        let steps = self.steps()?;
        if (steps as usize) < self.rank {
            return Err(Error::InvalidArgument(format!(
                "resolution {} is too coarse for rank {}",
                self.resolution, self.rank
            )));
        }
        Ok(steps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BudgetKind {
    Grid,
    Samples,
}

/// Work spent by a search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub kind: BudgetKind,
    /// Grid points or sample indices available.
    pub size: usize,
    /// Position of the witness in the deterministic order, or `size` when
    /// nothing was found.
    pub evaluated: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub short_circuit: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome<W> {
    pub witness: Option<W>,
    pub budget: Budget,
    pub resolution: Rational,
}

impl<W> SearchOutcome<W> {
    pub fn found(&self) -> bool {
        self.witness.is_some()
    }

    pub fn to_json_with(&self, witness: impl Fn(&W) -> serde_json::Value) -> serde_json::Value {
        json!({
            "found": self.found(),
            "witness": self.witness.as_ref().map(witness),
            "budget": self.budget,
            "resolution": self.resolution.to_json(),
        })
    }
}

/// Descending compositions of `n` into exactly `parts` positive parts, the
/// most uniform first.
pub fn grid_compositions(n: u32, parts: usize) -> Vec<Vec<u32>> {
    fn extend(remaining: u32, slots: usize, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let slots_u = slots as u32;
        let lo = remaining.div_ceil(slots_u);
        let hi = cap.min(remaining - (slots_u - 1));
        for first in lo..=hi {
            prefix.push(first);
            extend(remaining - first, slots - 1, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts >= 1 && n as usize >= parts {
        extend(n, parts, n, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

fn grid_state<S: Scalar>(parts: &[u32], n: u32) -> SchmidtVector<S> {
    SchmidtVector::from_canonical(parts.iter().map(|&k| S::from_ratio(k as i64, n as i64)).collect())
}

/// Exhaustive search for a catalyst `chi` on the resolution grid with
/// `psi (x) chi -> phi (x) chi`.
///
/// A comparable pair returns the product state at once. When the
/// necessary condition `a1 <= b1, a_d >= b_d` fails the grid is skipped
/// unless `exhaustive` is set.
pub fn catalyst_search<S: Scalar>(
    psi: &SchmidtVector<S>,
    phi: &SchmidtVector<S>,
    search: &SearchConfig,
    cfg: &NumericConfig,
) -> Result<SearchOutcome<SchmidtVector<S>>> {
    require_same_len(psi, phi)?;
    let steps = search.validate()?;
    let outcome = |witness, size, evaluated, short_circuit: Option<&str>| SearchOutcome {
        witness,
        budget: Budget {
            kind: BudgetKind::Grid,
            size,
            evaluated,
            short_circuit: short_circuit.map(str::to_owned),
        },
        resolution: search.resolution.clone(),
    };
    if majorized_by(psi, phi, cfg).ok {
        return Ok(outcome(Some(SchmidtVector::product()), 0, 0, Some("comparable")));
    }
    if !search.exhaustive && !nielsen::catalysis_necessary(psi, phi, cfg)? {
        return Ok(outcome(None, 0, 0, Some("necessary condition fails")));
    }
    let len = psi.len() as u128 * search.rank as u128;
    if len > cfg.tensor_cap as u128 {
        return Err(Error::SizeOverflow { len, cap: cfg.tensor_cap });
    }

    let grid = grid_compositions(steps, search.rank);
    let hit = search.exec.find_map_first_range(grid.len(), |i| {
        let chi = grid_state::<S>(&grid[i], steps);
        majorized_by(&tensor(psi, &chi), &tensor(phi, &chi), cfg)
            .ok
            .then_some((i, chi))
    });
    Ok(match hit {
        Some((i, chi)) => outcome(Some(chi), grid.len(), i + 1, None),
        None => outcome(None, grid.len(), grid.len(), None),
    })
}

/// Samples partner pairs `(psi2, phi2)`, themselves incomparable, with
/// `psi (x) psi2 -> phi (x) phi2`.
///
/// Candidates come from a seeded shifted Halton sequence mapped onto the
/// resolution grid. The swap `psi2 = phi, phi2 = psi` is excluded.
#[allow(clippy::type_complexity)]
pub fn coop_partner_search<S: Scalar>(
    psi: &SchmidtVector<S>,
    phi: &SchmidtVector<S>,
    search: &SearchConfig,
    cfg: &NumericConfig,
) -> Result<SearchOutcome<(SchmidtVector<S>, SchmidtVector<S>)>> {
    if !nielsen::classify(psi, phi, cfg)?.is_incomparable() {
        return Err(Error::NotIncomparable);
    }
    let steps = search.validate()?;
    let rank = search.rank;
    if rank < 3 {
        return Err(Error::InvalidArgument("partner rank must be at least 3".into()));
    }
    if 2 * (rank - 1) > 16 {
        return Err(Error::InvalidArgument(format!("partner rank {rank} exceeds the sampler's limit of 9")));
    }
    let halton = ShiftedHalton::new(2 * (rank - 1), search.seed);
    let hit = search.exec.find_map_first_range(search.max_samples, |i| {
        let u = halton.point(i as u64);
        let (left, right) = u.split_at(rank - 1);
        let psi2 = grid_state::<S>(&composition_from_unit(left, steps)?, steps);
        let phi2 = grid_state::<S>(&composition_from_unit(right, steps)?, steps);
        if &psi2 == phi && &phi2 == psi {
            return None;
        }
        if majorized_by(&psi2, &phi2, cfg).ok || majorized_by(&phi2, &psi2, cfg).ok {
            return None;
        }
        majorized_by(&tensor(psi, &psi2), &tensor(phi, &phi2), cfg)
            .ok
            .then_some((i, (psi2, phi2)))
    });
    let budget = |evaluated| Budget {
        kind: BudgetKind::Samples,
        size: search.max_samples,
        evaluated,
        short_circuit: None,
    };
    Ok(match hit {
        Some((i, pair)) => SearchOutcome {
            witness: Some(pair),
            budget: budget(i + 1),
            resolution: search.resolution.clone(),
        },
        None => SearchOutcome {
            witness: None,
            budget: budget(search.max_samples),
            resolution: search.resolution.clone(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::make_state;

    fn dec(xs: &[f64]) -> SchmidtVector<Rational> {
        make_state(
            xs.iter().map(|&x| Rational::from_f64(x).unwrap()).collect(),
            &NumericConfig::exact(),
        )
        .unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    const CFG: NumericConfig = NumericConfig {
        mode: crate::scalar::Mode::Exact,
        eps: crate::scalar::DEFAULT_EPS,
        tensor_cap: crate::scalar::DEFAULT_TENSOR_CAP,
    };

    #[test]
    fn verify_examples() {
        let sources = [dec(&[0.4, 0.3, 0.2, 0.1]), dec(&[0.5, 0.23, 0.22, 0.05])];
        let targets = [dec(&[0.45, 0.29, 0.14, 0.12]), dec(&[0.48, 0.36, 0.12, 0.04])];
        assert!(verify(&sources, &targets, &CFG).unwrap().ok);

        let r = verify(&[dec(&[0.4, 0.4, 0.2])], &[dec(&[0.48, 0.26, 0.26])], &CFG).unwrap();
        assert!(!r.ok);
        assert_eq!(r.first_violation, Some(2));

        let r = verify(&sources, &sources, &CFG).unwrap();
        assert!(r.ok);
        assert!(r.prefix_pairs.iter().all(|(a, b)| a == b));
        assert!(verify::<Rational>(&[], &sources, &CFG).is_err());
    }

    #[test]
    fn grid_enumeration() {
        assert_eq!(grid_compositions(4, 2), vec![vec![2, 2], vec![3, 1]]);
        assert_eq!(grid_compositions(100, 2).len(), 50);
        assert_eq!(grid_compositions(6, 3), vec![vec![2, 2, 2], vec![3, 2, 1], vec![4, 1, 1]]);
        assert!(grid_compositions(2, 3).is_empty());
    }

    #[test]
    fn search_config_validation() {
        let mut s = SearchConfig::default();
        assert_eq!(s.steps().unwrap(), 100);
        s.resolution = q(3, 100);
        assert!(s.steps().is_err());
        s.resolution = q(0, 1);
        assert!(s.steps().is_err());
    }

    #[test]
    fn catalyst_for_four_level_pair() {
        let psi = dec(&[0.4, 0.4, 0.1, 0.1]);
        let phi = dec(&[0.5, 0.25, 0.25, 0.0]);
        for exec in [Exec::Sequential, Exec::Parallel] {
            let s = SearchConfig { exec, ..SearchConfig::default() };
            let out = catalyst_search(&psi, &phi, &s, &CFG).unwrap();
            assert_eq!(out.witness.unwrap().coeffs(), &[q(3, 5), q(2, 5)]);
            assert_eq!(out.budget.evaluated, 11);
        }
    }

    #[test]
    fn catalyst_short_circuits() {
        let psi = dec(&[0.4, 0.4, 0.2]);
        let phi = dec(&[0.48, 0.26, 0.26]);
        let out = catalyst_search(&psi, &phi, &SearchConfig::default(), &CFG).unwrap();
        assert!(!out.found());
        assert_eq!(out.budget.short_circuit.as_deref(), Some("necessary condition fails"));

        let s = SearchConfig { exhaustive: true, ..SearchConfig::default() };
        let out = catalyst_search(&psi, &phi, &s, &CFG).unwrap();
        assert!(!out.found());
        assert_eq!(out.budget.evaluated, 50);

        let out = catalyst_search(&dec(&[0.5, 0.5]), &dec(&[0.9, 0.1]), &SearchConfig::default(), &CFG).unwrap();
        assert_eq!(out.witness.unwrap().coeffs(), &[q(1, 1)]);
    }

    #[test]
    fn partner_search_examples() {
        let psi = dec(&[0.4, 0.4, 0.2]);
        let phi = dec(&[0.48, 0.26, 0.26]);
        let s = SearchConfig { rank: 3, seed: 1, ..SearchConfig::default() };
        let out = coop_partner_search(&psi, &phi, &s, &CFG).unwrap();
        let (psi2, phi2) = out.witness.clone().unwrap();
        assert!(nielsen::classify(&psi2, &phi2, &CFG).unwrap().is_incomparable());
        assert!(verify(&[psi.clone(), psi2], &[phi.clone(), phi2], &CFG).unwrap().ok);
        let again = coop_partner_search(&psi, &phi, &s, &CFG).unwrap();
        assert_eq!(out, again);

        assert_eq!(
            coop_partner_search(&psi, &psi, &s, &CFG),
            Err(Error::NotIncomparable)
        );
    }
}
