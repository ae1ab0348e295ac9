//! `locc`: deterministic LOCC convertibility from the command line.
//!
//! States are JSON objects `{"label": "psi", "coeffs": [0.4, 0.4, 0.2]}`,
//! given as a file path or inline. Results go to stdout as JSON; `--verbose`
//! adds a human summary on stderr.
//!
//! Exit status: 0 for a definitive answer (including "incomparable" or
//! "not found"), 2 when the requested construction does not exist for the
//! input, 1 for malformed input.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use locc::json::{parse_state_str, state_json};
use locc::oracle::SearchConfig;
use locc::{assist, coop, nielsen, oracle, Error, Exec, Mode, NumericConfig, Rational, Scalar, SchmidtVector};

#[derive(Parser, Debug)]
#[command(name = "locc", version, about = "Deterministic LOCC convertibility of pure bipartite states")]
struct Cli {
    /// Numeric backend.
    #[arg(long, global = true, env = "LOCC_MODE", default_value = "exact")]
    mode: Mode,

    /// Comparison tolerance in float mode.
    #[arg(long, global = true, default_value_t = locc::scalar::DEFAULT_EPS)]
    eps: f64,

    /// Largest tensor product materialized.
    #[arg(long, global = true, default_value_t = locc::scalar::DEFAULT_TENSOR_CAP)]
    tensor_cap: usize,

    /// Seed for sampled searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Grid step for searches, e.g. `1/100` or `0.01`.
    #[arg(long, global = true, default_value = "1/100")]
    resolution: String,

    /// Also check multi-copy convertibility up to this many copies (classify).
    #[arg(long, global = true)]
    k_max: Option<u32>,

    /// Run searches on a single thread.
    #[arg(long, global = true)]
    sequential: bool,

    /// Print a human-readable summary on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct PairArgs {
    /// Source state (path or inline JSON).
    psi: String,
    /// Target state (path or inline JSON).
    phi: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Direction of deterministic convertibility between two states.
    Classify(PairArgs),
    /// Entropy of entanglement in bits.
    Entropy {
        #[arg(required = true)]
        states: Vec<String>,
    },
    /// Conversion assisted by a maximally entangled state of rank d-1.
    Assist(PairArgs),
    /// Least-entangled two-qubit assist for a 3x3 incomparable pair.
    AssistMin(PairArgs),
    /// Two-qubit states that jointly convert to the rank-d maximally entangled state.
    MaxentChain {
        #[arg(long)]
        d: usize,
    },
    /// Co-operation partner for an incomparable 3x3 pair.
    Coop(PairArgs),
    /// Case-B co-operation partner with every cross pair incomparable.
    CoopCross(PairArgs),
    /// Two states incomparable with psi, both obtained from two copies of psi.
    Split {
        psi: String,
    },
    /// Given chi incomparable with psi, find eta with psi (x) psi -> chi (x) eta.
    CompleteSplit {
        psi: String,
        chi: String,
    },
    /// Brute-force check of a joint conversion.
    Verify {
        #[arg(long, num_args = 1.., required = true)]
        sources: Vec<String>,
        #[arg(long, num_args = 1.., required = true)]
        targets: Vec<String>,
        /// Include every prefix-sum pair.
        #[arg(long)]
        trace: bool,
    },
    /// Grid search for a catalyst.
    SearchCatalyst {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// Search the grid even when the necessary condition fails.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Sampled search for a co-operation partner pair.
    SearchPartner {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 3)]
        rank: usize,
        #[arg(long, default_value_t = 10_000)]
        max_samples: usize,
    },
}

/// An error together with the exit status it maps to.
struct Failure {
    code: u8,
    body: Value,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let mut body = json!({"error": e.code(), "message": e.to_string()});
        if let Error::FormulaMismatch { plan, .. } = &e {
            body["plan"] = (**plan).clone();
        }
        Failure {
            code: if e.is_outcome() { 2 } else { 1 },
            body,
            message: e.to_string(),
        }
    }
}

fn input_error(field: &str, reason: impl Into<String>) -> Failure {
    Error::Malformed {
        field: field.into(),
        reason: reason.into(),
    }
    .into()
}

fn read_source(arg: &str) -> Result<String, Failure> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_owned())
    } else {
        fs::read_to_string(arg).map_err(|e| input_error(arg, format!("cannot read file: {e}")))
    }
}

fn load<S: Scalar>(arg: &str, cfg: &NumericConfig) -> Result<SchmidtVector<S>, Failure> {
    let text = read_source(arg)?;
    parse_state_str::<S>(&text, cfg)
        .map(|s| s.state)
        .map_err(|e| {
            let mut f = Failure::from(e);
            f.message = format!("{arg}: {}", f.message);
            f
        })
}

fn load_pair<S: Scalar>(p: &PairArgs, cfg: &NumericConfig) -> Result<(SchmidtVector<S>, SchmidtVector<S>), Failure> {
    Ok((load(&p.psi, cfg)?, load(&p.phi, cfg)?))
}

fn search_config(cli: &Cli, rank: usize) -> Result<SearchConfig, Failure> {
    let resolution =
        Rational::parse_str(&cli.resolution).ok_or_else(|| input_error("resolution", "expected p/q or a decimal"))?;
    Ok(SearchConfig {
        resolution,
        seed: cli.seed,
        rank,
        exec: if cli.sequential { Exec::Sequential } else { Exec::default() },
        ..SearchConfig::default()
    })
}

/// Output JSON and a one-line summary.
type Reply = (Value, String);

fn run<S: Scalar>(cli: &Cli, cfg: &NumericConfig) -> Result<Reply, Failure> {
    let st = |s: &SchmidtVector<S>| state_json(s, None);
    Ok(match &cli.command {
        Command::Classify(p) => {
            let (psi, phi) = load_pair::<S>(p, cfg)?;
            let v = nielsen::classify(&psi, &phi, cfg)?;
            let mut out = v.to_json();
            if let Some(k) = cli.k_max {
                out["multi_copy"] = json!(nielsen::multi_copy_convertible(&psi, &phi, k, cfg)?);
            }
            let summary = format!("direction {:?}, strong {}, case {:?}", v.direction, v.strong, v.case3x3);
            (out, summary)
        }
        Command::Entropy { states } => {
            let values = states
                .iter()
                .map(|s| load::<S>(s, cfg).map(|v| locc::entropy(&v)))
                .collect::<Result<Vec<_>, _>>()?;
            let summary = values.iter().map(|e| format!("{e:.4}")).collect::<Vec<_>>().join(", ");
            (json!({ "entropy": values }), format!("entropy (bits): {summary}"))
        }
        Command::Assist(p) => {
            let (psi, phi) = load_pair::<S>(p, cfg)?;
            let plan = assist::maxent_assist_plan(&psi, &phi, cfg)?;
            let summary = format!("maximally entangled assist of rank {}, cost {:.4} bits", plan.auxiliary.len(), plan.cost_bits);
            (plan.to_json(), summary)
        }
        Command::AssistMin(p) => {
            let (psi, phi) = load_pair::<S>(p, cfg)?;
            let plan = assist::minimal_assist_3x3(&psi, &phi, cfg)?;
            let c = plan.c.as_ref().map(Scalar::to_f64).unwrap_or(f64::NAN);
            (plan.to_json(), format!("c0 = {c:.6}, cost {:.4} bits", plan.cost_bits))
        }
        Command::MaxentChain { d } => {
            let chain = assist::maxent_chain::<S>(*d, cfg)?;
            let summary = format!("{} two-qubit states promote to rank {d}", chain.states.len());
            (chain.to_json(), summary)
        }
        Command::Coop(p) => {
            let (psi, phi) = load_pair::<S>(p, cfg)?;
            let s = coop::synthesize(&psi, &phi, cfg)?;
            let summary = format!("partner found ({:?}), {} warning(s)", s.method, s.warnings.len());
            (s.to_json(), summary)
        }
        Command::CoopCross(p) => {
            let (psi, phi) = load_pair::<S>(p, cfg)?;
            let s = coop::synthesize_case_b_cross(&psi, &phi, cfg)?;
            let summary = format!("cross partner found ({:?})", s.method);
            (s.to_json(), summary)
        }
        Command::Split { psi } => {
            let psi = load::<S>(psi, cfg)?;
            let r = coop::two_copy_split(&psi, cfg)?;
            let summary = format!("split with {} = {:.6}", r.case.parameter(), r.parameter.to_f64());
            (r.to_json(), summary)
        }
        Command::CompleteSplit { psi, chi } => {
            let (psi, chi) = (load::<S>(psi, cfg)?, load::<S>(chi, cfg)?);
            let r = coop::two_copy_complete(&psi, &chi, cfg)?;
            let (lo, hi) = &r.alpha_interval;
            let summary = format!("{} in ({:.6}, {:.6})", r.case.parameter(), lo.to_f64(), hi.to_f64());
            (r.to_json(), summary)
        }
        Command::Verify { sources, targets, trace } => {
            let sources = sources.iter().map(|s| load::<S>(s, cfg)).collect::<Result<Vec<_>, _>>()?;
            let targets = targets.iter().map(|s| load::<S>(s, cfg)).collect::<Result<Vec<_>, _>>()?;
            let report = oracle::verify(&sources, &targets, cfg)?;
            let mut out = report.to_json();
            if !trace {
                out.as_object_mut().expect("object").remove("prefix_pairs");
            }
            let summary = match report.first_violation {
                None => "joint conversion possible".to_owned(),
                Some(k) => format!("joint conversion impossible, first violation at k = {k}"),
            };
            (out, summary)
        }
        Command::SearchCatalyst { pair, rank, exhaustive } => {
            let (psi, phi) = load_pair::<S>(pair, cfg)?;
            let search = SearchConfig {
                exhaustive: *exhaustive,
                ..search_config(cli, *rank)?
            };
            let out = oracle::catalyst_search(&psi, &phi, &search, cfg)?;
            let summary = format!("catalyst found: {}, budget {:?}", out.found(), out.budget);
            (out.to_json_with(st), summary)
        }
        Command::SearchPartner { pair, rank, max_samples } => {
            let (psi, phi) = load_pair::<S>(pair, cfg)?;
            let search = SearchConfig {
                max_samples: *max_samples,
                ..search_config(cli, *rank)?
            };
            let out = oracle::coop_partner_search(&psi, &phi, &search, cfg)?;
            let summary = format!("partner found: {}, budget {:?}", out.found(), out.budget);
            (out.to_json_with(|(a, b)| json!([st(a), st(b)])), summary)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let base = match cli.mode {
        Mode::Exact => NumericConfig::exact(),
        Mode::Float => NumericConfig::float(),
    };
    let Some(cfg) = base.with_eps(cli.eps).map(|c| c.with_tensor_cap(cli.tensor_cap)) else {
        eprintln!("error: --eps must be positive and finite");
        return ExitCode::from(1);
    };
    let result = match cli.mode {
        Mode::Exact => run::<Rational>(&cli, &cfg),
        Mode::Float => run::<f64>(&cli, &cfg),
    };
    match result {
        Ok((out, summary)) => {
            println!("{out}");
            if cli.verbose {
                eprintln!("{summary}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            println!("{}", f.body);
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
