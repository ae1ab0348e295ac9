//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any failure.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use locc::assist::{self, max_c_oracle};
use locc::coop::{self, Method};
use locc::json::parse_state_str;
use locc::nielsen::{self, Case3x3, Direction};
use locc::oracle::{self, SearchConfig};
use locc::sampling::{random_distinct_state, random_state, rng};
use locc::{entropy, majorized_by, pad, tensor, Exec, NumericConfig, Rational, Scalar, SchmidtVector};

type Q = SchmidtVector<Rational>;
type Criterion = fn() -> Result<String, String>;

fn cfg() -> NumericConfig {
    NumericConfig::exact()
}

fn load(example: u32, name: &str) -> Q {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../states/example{example}/{name}.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_state_str(&text, &cfg()).unwrap().state
}

fn dec(xs: &[f64]) -> Q {
    locc::make_state(xs.iter().map(|&x| Rational::from_f64(x).unwrap()).collect(), &cfg()).unwrap()
}

fn incomparable(x: &Q, y: &Q) -> bool {
    nielsen::classify(x, y, &cfg()).unwrap().is_incomparable()
}

fn strong(x: &Q, y: &Q) -> bool {
    nielsen::is_strongly_incomparable(x, y, &cfg()).unwrap()
}

fn joint(sources: &[Q], targets: &[Q]) -> bool {
    coop::joint_convertible(sources, targets, &cfg()).unwrap().ok
}

fn entropies_match(states: &[Q], printed: &[f64], tol: &[f64]) -> Result<(), String> {
    for ((s, p), t) in states.iter().zip(printed).zip(tol) {
        let h = entropy(s);
        if (h - p).abs() > *t {
            return Err(format!("entropy {h:.6} vs printed {p}"));
        }
    }
    Ok(())
}

fn check(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_owned())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    check(start.elapsed() < limit, &format!("took {:.2?}, limit {limit:?}", start.elapsed()))
}

/// Random distinct-coefficient 3x3 incomparable pairs of the given case.
fn case_pairs(case: Case3x3, count: usize, seed: u64) -> Vec<(Q, Q)> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x: Q = random_distinct_state(&mut r, 3, 1000);
        let y: Q = random_distinct_state(&mut r, 3, 1000);
        if incomparable(&x, &y) && nielsen::case_3x3(&x, &y, &cfg()) == Some(case) {
            out.push((x, y));
        }
    }
    out
}

fn example1() -> Result<String, String> {
    let start = Instant::now();
    let [psi, phi, chi, eta] = ["psi", "phi", "chi", "eta"].map(|n| load(1, n));
    check(incomparable(&psi, &phi) && incomparable(&chi, &eta), "pairs not incomparable")?;
    entropies_match(&[psi.clone(), phi.clone(), chi.clone(), eta.clone()], &[1.5219, 1.5188, 1.5097, 1.5001], &[5e-5; 4])?;
    check(joint(&[psi, chi], &[phi, eta]), "joint conversion fails")?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("{:.2?}", start.elapsed()))
}

fn example2() -> Result<String, String> {
    let [psi, phi, chi, eta] = ["psi", "phi", "chi", "eta"].map(|n| load(2, n));
    for (x, y, name) in [(&psi, &phi, "psi/phi"), (&chi, &eta, "chi/eta"), (&psi, &eta, "psi/eta"), (&phi, &chi, "phi/chi")] {
        check(incomparable(x, y), &format!("{name} comparable"))?;
    }
    check(nielsen::classify(&psi, &chi, &cfg()).unwrap().direction == Direction::Forward, "psi -> chi fails")?;
    entropies_match(
        &[psi.clone(), phi.clone(), chi.clone(), eta.clone()],
        &[1.5307, 1.5219, 1.5204, 1.50544],
        &[5e-5, 5e-5, 5e-5, 5e-6],
    )?;
    check(joint(&[psi, chi], &[phi, eta]), "joint conversion fails")?;
    Ok(String::new())
}

fn examples3_4() -> Result<String, String> {
    for (ex, h_chi) in [(3, 1.680), (4, 1.684)] {
        let [psi, phi, chi, eta] = ["psi", "phi", "chi", "eta"].map(|n| load(ex, n));
        check(strong(&psi, &phi) && strong(&chi, &eta), &format!("example {ex}: pairs not strongly incomparable"))?;
        entropies_match(&[psi.clone(), phi.clone(), chi.clone(), eta.clone()], &[1.846, 1.800, h_chi, 1.592], &[5e-4; 4])?;
        check(joint(&[psi.clone(), chi.clone()], &[phi, eta]), &format!("example {ex}: joint conversion fails"))?;
        if ex == 4 {
            check(nielsen::classify(&psi, &chi, &cfg()).unwrap().direction == Direction::Forward, "example 4: psi -> chi fails")?;
        }
    }
    Ok(String::new())
}

fn theorem_bounds() -> Result<String, String> {
    let start = Instant::now();
    for d in 3..=6 {
        let mut r = rng(d as u64);
        let mut found = 0;
        while found < 10_000 {
            let x: Q = random_state(&mut r, d, 1000);
            let y: Q = random_state(&mut r, d, 1000);
            if !incomparable(&x, &y) {
                continue;
            }
            found += 1;
            check(assist::theorem_bounds(&x, &y, &cfg()).unwrap(), &format!("bounds fail for {x:?}, {y:?}"))?;
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("4 x 10^4 pairs, {:.2?}", start.elapsed()))
}

fn maxent_equivalence() -> Result<String, String> {
    let mut r = rng(5);
    let mut feasible = 0;
    for i in 0..10_000 {
        let d = 3 + i % 3;
        let x: Q = random_state(&mut r, d, 1000);
        let y: Q = random_state(&mut r, d, 1000);
        let brute = majorized_by(&tensor(&x, &SchmidtVector::uniform(d - 1).unwrap()), &pad(&y, d).unwrap(), &cfg()).ok;
        let fast = assist::maxent_assist_feasible(&x, &y, &cfg()).unwrap();
        check(brute == fast, &format!("disagreement on {x:?}, {y:?}"))?;
        feasible += brute as usize;
    }
    Ok(format!("10^4 pairs, {feasible} feasible"))
}

fn minimal_assist() -> Result<String, String> {
    let c = cfg();
    let step = assist::c_step::<Rational>();
    for (case, seed) in [(Case3x3::A, 61), (Case3x3::B, 62)] {
        for (x, y) in case_pairs(case, 1000, seed) {
            let plan = assist::minimal_assist_3x3(&x, &y, &c).map_err(|e| format!("{x:?}, {y:?}: {e}"))?;
            let c0 = plan.c.clone().unwrap();
            let oracle = max_c_oracle(&x, &y, &c).unwrap();
            check(!oracle.saturated && oracle.value == c0, "closed form differs from oracle")?;
            check(plan.certificate.ok, "not verified at c0")?;
            let above = c0 + step.clone();
            let aux = locc::make_state(vec![above.clone(), Rational::from_ratio(1, 1) - above], &c).unwrap();
            check(!majorized_by(&tensor(&x, &aux), &y, &c).ok, "not refuted at c0 + 1e-6")?;
        }
    }
    let a = assist::minimal_assist_3x3(&load(1, "psi"), &load(1, "phi"), &c).unwrap().c.unwrap();
    check(a == Rational::from_ratio(37, 40), "case-A worked value")?;
    let b = assist::minimal_assist_3x3(&load(1, "phi"), &load(1, "psi"), &c).unwrap().c.unwrap();
    check(b == Rational::from_ratio(5, 6), "case-B worked value")?;
    Ok("2 x 10^3 pairs, c0 = 37/40 and 5/6".into())
}

fn maxent_chain() -> Result<String, String> {
    let start = Instant::now();
    for d in 2..=12 {
        let chain = assist::maxent_chain::<Rational>(d, &cfg()).map_err(|e| e.to_string())?;
        check(chain.certificate.ok && chain.states.len() == d - 1, &format!("chain d = {d}"))?;
    }
    let mut r = rng(7);
    let mut plans = 0;
    while plans < 200 {
        let d = 3 + plans % 4;
        let x: Q = random_state(&mut r, d, 1000);
        let y: Q = random_state(&mut r, d, 1000);
        if let Ok(plan) = assist::maxent_assist_plan(&x, &y, &cfg()) {
            check(plan.cost_bits == ((d - 1) as f64).log2(), &format!("cost {} for d = {d}", plan.cost_bits))?;
            plans += 1;
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("{:.2?}", start.elapsed()))
}

fn synthesis() -> Result<String, String> {
    let c = cfg();
    let mut parts = Vec::new();
    for (case, seed) in [(Case3x3::A, 81), (Case3x3::B, 82)] {
        let pairs = case_pairs(case, 1000, seed);
        let results = Exec::default().map(&pairs, |(x, y)| coop::synthesize(x, y, &c));
        let mut ok = 0;
        let mut fallback = 0;
        for ((x, y), res) in pairs.iter().zip(results) {
            let Ok(s) = res else { continue };
            check(s.certificate.ok, "uncertified success")?;
            check(incomparable(&s.aux_source, &s.aux_target), "auxiliary pair comparable")?;
            check(
                entropy(x) + entropy(&s.aux_source) >= entropy(y) + entropy(&s.aux_target) - 1e-12,
                "entropy increased",
            )?;
            ok += 1;
            fallback += (s.method == Method::OracleFallback) as usize;
        }
        check(ok >= 950, &format!("case {case:?}: {ok}/1000"))?;
        parts.push(format!("case {case:?} {ok}/1000 ({fallback} fallback)"));
    }
    Ok(parts.join(", "))
}

fn split() -> Result<String, String> {
    let c = cfg();
    let mut r = rng(9);
    for _ in 0..1000 {
        let x: Q = random_distinct_state(&mut r, 3, 1000);
        let s = coop::two_copy_split(&x, &c).map_err(|e| format!("{x:?}: {e}"))?;
        check(s.certificate.ok && incomparable(&x, &s.chi) && incomparable(&x, &s.eta), "split not verified")?;
    }
    let w = coop::two_copy_complete(&dec(&[0.5, 0.3, 0.2]), &dec(&[0.45, 0.40, 0.15]), &c).map_err(|e| e.to_string())?;
    check(
        w.alpha_interval == (Rational::from_ratio(1, 5), Rational::from_ratio(9, 40)),
        "worked interval",
    )?;
    check(w.certificate.ok, "worked eta not verified")?;
    Ok("10^3 splits, worked interval (0.2, 0.225)".into())
}

fn catalysis() -> Result<String, String> {
    let start = Instant::now();
    let c = cfg();
    let mut r = rng(10);
    let mut pairs = Vec::new();
    while pairs.len() < 100 {
        let x: Q = random_distinct_state(&mut r, 3, 1000);
        let y: Q = random_distinct_state(&mut r, 3, 1000);
        if strong(&x, &y) {
            pairs.push((x, y));
        }
    }
    for rank in [2, 3] {
        for exhaustive in [false, true] {
            let search = SearchConfig { rank, exhaustive, ..SearchConfig::default() };
            for (x, y) in &pairs {
                let out = oracle::catalyst_search(x, y, &search, &c).unwrap();
                check(!out.found(), &format!("catalyst found for {x:?}, {y:?}"))?;
            }
        }
    }
    let search = SearchConfig { rank: 2, ..SearchConfig::default() };
    let hit = oracle::catalyst_search(&dec(&[0.4, 0.4, 0.1, 0.1]), &dec(&[0.5, 0.25, 0.25, 0.0]), &search, &c).unwrap();
    check(hit.found(), "no 4x4 catalyst")?;
    within(start, Duration::from_secs(120))?;
    Ok(format!("{:.2?}", start.elapsed()))
}

fn prop<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> bool) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    runner
        .run(&strategy, |v| {
            prop_assert!(test(v));
            Ok(())
        })
        .map_err(|e| format!("{name}: {e}"))
}

fn state(d: usize) -> impl Strategy<Value = Q> {
    prop::collection::vec(1i64..200, d)
        .prop_map(|w| locc::make_state(w.into_iter().map(|k| Rational::from_ratio(k, 1)).collect(), &cfg()).unwrap())
}

fn invariants() -> Result<String, String> {
    let c = cfg();
    let f = NumericConfig::float();
    prop("sorting idempotence", state(5), |x| locc::make_state(x.coeffs().to_vec(), &c).unwrap() == x)?;
    prop("tensor commutativity", (state(3), state(4)), |(x, y)| tensor(&x, &y) == tensor(&y, &x))?;
    prop("majorization preorder", (state(3), state(3), state(3)), |(x, y, z)| {
        let reflexive = majorized_by(&x, &x, &c).ok;
        let transitive = !(majorized_by(&x, &y, &c).ok && majorized_by(&y, &z, &c).ok) || majorized_by(&x, &z, &c).ok;
        reflexive && transitive
    })?;
    prop("entropy additivity and bounds", (state(3), state(4)), |(x, y)| {
        let h = entropy(&x);
        (entropy(&tensor(&x, &y)) - h - entropy(&y)).abs() < 1e-9 && h >= 0.0 && h <= 3f64.log2() + 1e-12
    })?;
    prop("rational/float agreement", (state(4), state(4)), |(x, y)| {
        let margin = x
            .prefix_sums()
            .iter()
            .zip(y.prefix_sums())
            .map(|(a, b)| (a.to_f64() - b.to_f64()).abs())
            .filter(|m| *m > 0.0)
            .fold(f64::INFINITY, f64::min);
        margin <= 1e-9 || majorized_by(&x, &y, &c).ok == majorized_by(&x.to_f64(), &y.to_f64(), &f).ok
    })?;
    prop("2x2 totality", (state(2), state(2)), |(x, y)| !nielsen::classify(&x, &y, &c).unwrap().is_incomparable())?;
    prop("entropy monotone", (state(4), state(4)), |(x, y)| {
        !majorized_by(&x, &y, &c).ok || entropy(&x) >= entropy(&y) - 1e-12
    })?;
    Ok("7 suites x 10^3 cases".into())
}

fn main() {
    let criteria: [(&str, Criterion); 11] = [
        ("example 1 reproduction", example1),
        ("example 2 reproduction", example2),
        ("examples 3-4 reproduction", examples3_4),
        ("incomparable pairs obey a1 + b_d < 1", theorem_bounds),
        ("maximally entangled assist criterion", maxent_equivalence),
        ("minimal two-qubit assist", minimal_assist),
        ("promotion chains", maxent_chain),
        ("co-operation synthesis", synthesis),
        ("two-copy split", split),
        ("catalysis structure", catalysis),
        ("core invariants", invariants),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) if detail.is_empty() => println!("PASS {:>2} {name}", i + 1),
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
