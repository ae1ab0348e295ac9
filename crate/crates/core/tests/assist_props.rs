mod common;

use common::*;
use locc::assist::{
    closed_form_c0, corollary1_feasible, max_c_oracle, maxent_assist_feasible, maxent_assist_plan, maxent_chain,
    minimal_assist_3x3, promotion_state, theorem_bounds,
};
use locc::nielsen;
use locc::{entropy, majorized_by, tensor, tensor_all, Rational, Scalar, SchmidtVector};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn incomparable_pairs_satisfy_theorem_bounds(d in 3usize..=6, seed in any::<u64>()) {
        let mut rng = locc::sampling::rng(seed);
        let x: SchmidtVector<Rational> = locc::sampling::random_state(&mut rng, d, 200);
        let y: SchmidtVector<Rational> = locc::sampling::random_state(&mut rng, d, 200);
        if is_incomparable(&x, &y) {
            prop_assert!(theorem_bounds(&x, &y, &exact()).unwrap());
        }
    }

    #[test]
    fn maxent_criterion_matches_brute_force(d in 3usize..=5, seed in any::<u64>()) {
        let cfg = exact();
        let mut rng = locc::sampling::rng(seed);
        let x: SchmidtVector<Rational> = locc::sampling::random_state(&mut rng, d, 120);
        let y: SchmidtVector<Rational> = locc::sampling::random_state(&mut rng, d, 120);
        let brute = majorized_by(&tensor(&x, &SchmidtVector::uniform(d - 1).unwrap()), &y, &cfg).ok;
        prop_assert_eq!(maxent_assist_feasible(&x, &y, &cfg).unwrap(), brute);
        if brute {
            let plan = maxent_assist_plan(&x, &y, &cfg).unwrap();
            prop_assert!((plan.cost_bits - ((d - 1) as f64).log2()).abs() < 1e-12);
        }
    }

    #[test]
    fn minimal_assist_is_optimal((x, y) in incomparable_pair(3)) {
        let cfg = exact();
        let case = nielsen::case_3x3(&x, &y, &cfg).unwrap();
        let plan = minimal_assist_3x3(&x, &y, &cfg).unwrap();
        let c0 = plan.c.clone().unwrap();
        prop_assert_eq!(&c0, &closed_form_c0(&x, &y, case));
        prop_assert_eq!(&c0, &max_c_oracle(&x, &y, &cfg).unwrap().value);
        prop_assert!(plan.certificate.ok);
        prop_assert!(c0 >= Rational::from_ratio(1, 2));
        // Any less entangled two-qubit state fails.
        let above = (c0.clone() + Rational::from_ratio(1, 1)) * Rational::from_ratio(1, 2);
        let aux = locc::make_state(vec![above.clone(), Rational::from_ratio(1, 1) - above], &cfg).unwrap();
        prop_assert!(!majorized_by(&tensor(&x, &aux), &y, &cfg).ok);
    }

    #[test]
    fn corollary1_bound_promotes(x in state(4)) {
        let cfg = exact();
        let holds = corollary1_feasible(&x, 4, &cfg).unwrap();
        let brute = majorized_by(&tensor(&x, &SchmidtVector::uniform(3).unwrap()), &SchmidtVector::uniform(4).unwrap(), &cfg).ok;
        prop_assert_eq!(holds, brute);
    }
}

#[test]
fn chains_telescope() {
    let cfg = exact();
    for d in 2..=12 {
        let chain = maxent_chain::<Rational>(d, &cfg).unwrap();
        assert_eq!(chain.states.len(), d - 1);
        assert!(chain.certificate.ok);
        let joint = tensor_all(&chain.states, &cfg).unwrap();
        assert!(entropy(&joint) >= (d as f64).log2() - 1e-12);
        let promoted = tensor(&promotion_state::<Rational>(d).unwrap(), &SchmidtVector::uniform(d - 1).unwrap());
        assert!(majorized_by(&promoted, &SchmidtVector::uniform(d).unwrap(), &cfg).ok);
        if d > 2 {
            let smaller = maxent_chain::<Rational>(d - 1, &cfg).unwrap();
            assert_eq!(chain.states[1..], smaller.states[..]);
        }
    }
}
