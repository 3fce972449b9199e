//! `liftlab` command-line front end. Every command prints JSON.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or schema error,
//! 3 mathematical domain error (a state that is not PSD, a map that is
//! not unital, ...).

mod input;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use liftlab::circulant::{bell_diagonal_lift, build_circulant, circulant_lift_spec, is_ppt_circulant};
use liftlab::classical::{
    apply_kraus, channel_from_dilation, classical_teleport, embed_diagonal, kraus_from_channel, Permutation,
    ProbabilityVector, StochasticChannel,
};
use liftlab::clift::{markov_state, n_lift, Conditional, LiftingTensor, MarkovSpec};
use liftlab::matcore::ComplexMatrix;
use liftlab::qlift::{n_nonlinear_lift, nonlinear_lift, ohya_n_lift, QcpOperator};
use liftlab::verify::{self, Suite, VerifyConfig};
use liftlab::Error;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_domain_error() {
            CliError::Domain(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

#[derive(Parser)]
#[command(name = "liftlab", version, about = "Classical and quantum liftings on finite matrix algebras")]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classical stochastic channels.
    #[command(subcommand)]
    Channel(ChannelCmd),
    /// Classical and quantum liftings.
    #[command(subcommand)]
    Lift(LiftCmd),
    /// Run an invariant suite and print its report.
    Verify(VerifyArgs),
    /// Classical teleportation through a maximally correlated state.
    Teleport {
        #[arg(long)]
        p: String,
        /// Defaults to the identity.
        #[arg(long)]
        perm: Option<String>,
    },
}

#[derive(Subcommand)]
enum ChannelCmd {
    /// Kraus operators of a channel given as rows `Λ_ij`.
    Kraus {
        #[arg(long)]
        channel: String,
        /// Check the Kraus action against the matrix action on every
        /// basis state; exit 1 on mismatch.
        #[arg(long)]
        verify: bool,
    },
    /// Channel reduced from a permutation dilation with ancilla `σ`.
    Dilate {
        /// System size; must match the length of `--sigma` if given.
        #[arg(long)]
        n: Option<usize>,
        /// Permutation of the `n²` joint labels `i·n + k`.
        #[arg(long)]
        perm: String,
        #[arg(long)]
        sigma: String,
    },
    /// Push a state (or pull an observable) through a channel.
    Apply {
        /// Channel rows, or `I` for the identity.
        #[arg(long)]
        matrix: String,
        #[arg(long, required_unless_present = "observable", conflicts_with = "observable")]
        p: Option<String>,
        #[arg(long)]
        observable: Option<String>,
    },
}

#[derive(Subcommand)]
enum LiftCmd {
    /// Lift a classical state with a lifting tensor.
    Classical {
        #[arg(long)]
        tensor: String,
        #[arg(long)]
        p: String,
    },
    /// Ohya lifting; a plain array is treated classically.
    Ohya {
        #[arg(long)]
        rho: String,
        #[arg(long, default_value_t = 2)]
        parties: usize,
    },
    /// QCP operator of a unital CP map or a conditional probability table.
    Qcp {
        #[arg(long, required_unless_present = "conditional", conflicts_with = "conditional")]
        map: Option<String>,
        #[arg(long)]
        conditional: Option<String>,
    },
    /// Nonlinear lifting `(𝕀 ⊗ ρ^{1/2}) π (𝕀 ⊗ ρ^{1/2})`.
    Nonlinear {
        /// `{"d", "units"}` map, or `I`.
        #[arg(long)]
        map: String,
        #[arg(long)]
        rho: String,
    },
    /// Circulant state from blocks `c^(α)` and `ρ`, or from a full spec.
    Circulant {
        #[arg(long, requires = "rho", conflicts_with = "spec", required_unless_present = "spec")]
        blocks: Option<String>,
        #[arg(long)]
        rho: Option<String>,
        #[arg(long)]
        spec: Option<String>,
    },
    /// Bell-diagonal lifting and its Bell spectrum.
    Bell {
        #[arg(long)]
        p: String,
        #[arg(long)]
        rho: String,
    },
    /// N-party lifting from a tensor, a Markov spec, or a quantum map.
    Nlift {
        #[arg(long)]
        parties: usize,
        #[arg(long, requires = "p", conflicts_with_all = ["markov", "map"])]
        tensor: Option<String>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long, conflicts_with = "map")]
        markov: Option<String>,
        #[arg(long, requires = "rho")]
        map: Option<String>,
        #[arg(long)]
        rho: Option<String>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// all, matcore, classical, clift, qlift or circulant.
    suite: Suite,
    #[arg(long, env = "LIFTLAB_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Override every numeric tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Record the current UTC time; reports are otherwise reproducible.
    #[arg(long)]
    timestamp: bool,
}

/// A JSON result and whether the command's own checks passed.
struct Output {
    value: Value,
    ok: bool,
}

impl Output {
    fn of(v: impl Serialize) -> Result<Self, CliError> {
        let value = serde_json::to_value(v).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(Self { value, ok: true })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.command).and_then(|out| {
        let mut text = serde_json::to_string_pretty(&out.value).map_err(|e| CliError::Usage(e.to_string()))?;
        text.push('\n');
        match &cli.out {
            Some(path) => {
                fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?
            }
            None => print!("{text}"),
        }
        Ok(out.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Channel(cmd) => channel(cmd),
        Command::Lift(cmd) => lift(cmd),
        Command::Verify(args) => {
            let config = VerifyConfig {
                seed: args.seed,
                trials: args.trials,
                tol: args.tol,
                timestamp: args.timestamp.then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
            };
            let report = verify::run(args.suite, &config);
            let ok = report.passed;
            Ok(Output { ok, ..Output::of(report)? })
        }
        Command::Teleport { p, perm } => {
            let p = input::probability(&p)?;
            let perm = match perm {
                Some(arg) => input::parse::<Permutation>(&arg, "permutation")?,
                None => Permutation::identity(p.len()),
            };
            Output::of(classical_teleport(&p, &perm)?)
        }
    }
}

const KRAUS_TOL: f64 = 1e-12;

fn channel(cmd: ChannelCmd) -> Result<Output, CliError> {
    match cmd {
        ChannelCmd::Kraus { channel, verify } => {
            let ch: StochasticChannel = input::parse(&channel, "channel")?;
            let ops = kraus_from_channel(&ch);
            let operators: Vec<Value> =
                ops.iter().map(|k| json!({"input": k.input, "output": k.output, "op": k.op})).collect();
            if !verify {
                return Output::of(json!({ "operators": operators }));
            }
            let mut worst: f64 = 0.0;
            for i in 0..ch.n1() {
                let e = ProbabilityVector::point(ch.n1(), i);
                let via_kraus = apply_kraus(&ops, embed_diagonal(&e).matrix())?;
                let direct = ComplexMatrix::from_real_diagonal(&ch.push_forward(e.weights())?);
                worst = worst.max(via_kraus.max_abs_diff(&direct));
            }
            let ok = worst <= KRAUS_TOL;
            let value = json!({
                "operators": operators,
                "verification": {"max_deviation": worst, "tolerance": KRAUS_TOL, "passed": ok},
            });
            Ok(Output { value, ok })
        }
        ChannelCmd::Dilate { n, perm, sigma } => {
            let perm: Permutation = input::parse(&perm, "permutation")?;
            let sigma = input::probability(&sigma)?;
            if let Some(n) = n.filter(|&n| n != sigma.len()) {
                return Err(CliError::Usage(format!("--n {n} does not match an ancilla of length {}", sigma.len())));
            }
            let ch = channel_from_dilation(&perm, &sigma)?;
            Output::of(json!({
                "channel": ch,
                "row_stochastic": ch.is_trace_preserving(),
                "doubly_stochastic": ch.is_doubly_stochastic(),
            }))
        }
        ChannelCmd::Apply { matrix, p, observable } => {
            let n = match (&p, &observable) {
                (Some(p), _) => input::probability(p)?.len(),
                (None, Some(o)) => input::parse::<Vec<f64>>(o, "observable")?.len(),
                (None, None) => unreachable!("clap requires one of --p, --observable"),
            };
            let ch = if matrix == "I" {
                StochasticChannel::identity(n)
            } else {
                input::parse(&matrix, "channel")?
            };
            match (p, observable) {
                (Some(p), _) => Output::of(ch.apply_to_state(&input::probability(&p)?)?),
                (None, Some(o)) => Output::of(ch.apply_to_observable(&input::parse::<Vec<f64>>(&o, "observable")?)?),
                (None, None) => unreachable!(),
            }
        }
    }
}

fn lift(cmd: LiftCmd) -> Result<Output, CliError> {
    match cmd {
        LiftCmd::Classical { tensor, p } => {
            let t: LiftingTensor = input::parse(&tensor, "lifting tensor")?;
            Output::of(t.lift(&input::probability(&p)?)?)
        }
        LiftCmd::Ohya { rho, parties } => {
            if let Value::Array(_) = input::read_value(&rho)? {
                let p = input::probability(&rho)?;
                return Output::of(n_lift(&LiftingTensor::ohya(p.len()), &p, parties)?);
            }
            Output::of(ohya_n_lift(&input::state(&rho)?, parties)?)
        }
        LiftCmd::Qcp { map, conditional } => {
            let pi = match (map, conditional) {
                (Some(m), _) => QcpOperator::from_channel(&input::parse(&m, "linear map")?)?,
                (None, Some(c)) => QcpOperator::from_conditional(&input::parse::<Conditional>(&c, "conditional")?)?,
                (None, None) => unreachable!("clap requires one of --map, --conditional"),
            };
            Output::of(pi.operator())
        }
        LiftCmd::Nonlinear { map, rho } => {
            let rho = input::state(&rho)?;
            let pi = QcpOperator::from_channel(&input::map(&map, rho.dim())?)?;
            Output::of(nonlinear_lift(&pi, &rho)?)
        }
        LiftCmd::Circulant { blocks, rho, spec } => {
            let spec = match (blocks, rho, spec) {
                (Some(b), Some(r), _) => {
                    let cs: Vec<ComplexMatrix> = input::parse(&b, "blocks")?;
                    circulant_lift_spec(&cs, &input::state(&r)?)?
                }
                (_, _, Some(s)) => input::circulant_spec(&s)?,
                _ => unreachable!("clap enforces --blocks with --rho, or --spec"),
            };
            let ppt = is_ppt_circulant(&spec)?;
            Output::of(json!({ "state": build_circulant(&spec), "ppt": ppt }))
        }
        LiftCmd::Bell { p, rho } => {
            let (state, spectrum) = bell_diagonal_lift(&input::probability(&p)?, &input::state(&rho)?)?;
            Output::of(json!({ "state": state, "spectrum": spectrum }))
        }
        LiftCmd::Nlift { parties, tensor, p, markov, map, rho } => {
            if let (Some(t), Some(p)) = (tensor, p) {
                let t: LiftingTensor = input::parse(&t, "lifting tensor")?;
                return Output::of(n_lift(&t, &input::probability(&p)?, parties)?);
            }
            if let Some(m) = markov {
                let spec: MarkovSpec = input::parse(&m, "Markov spec")?;
                return Output::of(markov_state(&spec, parties)?);
            }
            if let (Some(m), Some(r)) = (map, rho) {
                let rho = input::state(&r)?;
                let pi = QcpOperator::from_channel(&input::map(&m, rho.dim())?)?;
                return Output::of(n_nonlinear_lift(&pi, &rho, parties)?);
            }
            Err(CliError::Usage("nlift needs --tensor with --p, --markov, or --map with --rho".into()))
        }
    }
}
