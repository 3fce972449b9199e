//! Seeded invariant suites with a machine-readable report.
//!
//! Every check draws from its own generator, seeded from the run seed and
//! the check name, so a check's outcome does not depend on which other
//! checks run alongside it. Numeric checks report the worst deviation seen
//! across all trials; agreement checks report the number of disagreements
//! against a zero tolerance.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::circulant::{
    bell_diagonal_lift, bell_projections, build_circulant, circulant_isometry, circulant_lift,
    circulant_partial_transpose, is_ppt_circulant, reconstruct_partial_transpose,
};
use crate::classical::{
    apply_kraus, channel_from_dilation, classical_choi, classical_teleport, embed_observable, kraus_from_channel,
    permutation_channel, Permutation, ProbabilityVector, StochasticChannel,
};
use crate::clift::{markov_state, n_lift, verify_transition_expectation, LiftingTensor};
use crate::error::Result;
use crate::matcore::{eigh, herm_sqrt, is_psd, kron, ComplexMatrix, DensityOperator, FactoredOperator};
use crate::qlift::{
    choi_min_eigenvalue, compose_qcp, lifting_assisted_map, n_compose_qcp, n_nonlinear_lift, nonlinear_lift,
    ohya_n_lift, LinearMap, QcpOperator,
};
use crate::random::Sampler;
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Matcore,
    Classical,
    Clift,
    Qlift,
    Circulant,
}

impl Suite {
    pub const MODULES: [Suite; 5] = [Suite::Matcore, Suite::Classical, Suite::Clift, Suite::Qlift, Suite::Circulant];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Matcore => "matcore",
            Suite::Classical => "classical",
            Suite::Clift => "clift",
            Suite::Qlift => "qlift",
            Suite::Circulant => "circulant",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        std::iter::once(Suite::All)
            .chain(Suite::MODULES)
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub trials: usize,
    /// Replaces every numeric tolerance when set.
    pub tol: Option<f64>,
    /// Copied verbatim into the report; `None` keeps reports reproducible.
    pub timestamp: Option<String>,
}

impl VerifyConfig {
    pub fn new(seed: u64, trials: usize) -> Self {
        Self { seed, trials, tol: None, timestamp: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub anchor: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub timestamp: Option<String>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

pub fn run(suite: Suite, config: &VerifyConfig) -> VerificationReport {
    let mut ctx = Ctx { config, checks: Vec::new() };
    let modules: Vec<Suite> = if suite == Suite::All { Suite::MODULES.to_vec() } else { vec![suite] };
    for m in modules {
        match m {
            Suite::Matcore => matcore_suite(&mut ctx),
            Suite::Classical => classical_suite(&mut ctx),
            Suite::Clift => clift_suite(&mut ctx),
            Suite::Qlift => qlift_suite(&mut ctx),
            Suite::Circulant => circulant_suite(&mut ctx),
            Suite::All => unreachable!(),
        }
    }
    let mut checks = ctx.checks;
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let passed = checks.iter().all(|c| c.passed);
    VerificationReport {
        suite: suite.name().to_string(),
        seed: config.seed,
        trials: config.trials,
        timestamp: config.timestamp.clone(),
        checks,
        passed,
    }
}

struct Ctx<'a> {
    config: &'a VerifyConfig,
    checks: Vec<Check>,
}

/// FNV-1a, used only to derive per-check seeds.
fn name_hash(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

impl Ctx<'_> {
    fn sampler(&self, name: &str) -> Sampler {
        Sampler::new(self.config.seed ^ name_hash(name))
    }

    /// Worst value of `f` over all trials; an error counts as infinite.
    fn numeric(&mut self, name: &str, anchor: &str, default_tol: f64, mut f: impl FnMut(&mut Sampler) -> Result<f64>) {
        let mut s = self.sampler(name);
        let mut worst: f64 = 0.0;
        for _ in 0..self.config.trials {
            match f(&mut s) {
                Ok(x) if x.is_nan() => worst = f64::INFINITY,
                Ok(x) => worst = worst.max(x),
                Err(_) => worst = f64::INFINITY,
            }
        }
        let tolerance = self.config.tol.unwrap_or(default_tol);
        self.push(name, anchor, worst, tolerance);
    }

    /// Deterministic scalar check, run once.
    fn once(&mut self, name: &str, anchor: &str, default_tol: f64, f: impl FnOnce() -> Result<f64>) {
        let measured = f().unwrap_or(f64::INFINITY);
        let tolerance = self.config.tol.unwrap_or(default_tol);
        self.push(name, anchor, measured, tolerance);
    }

    /// Counts trials where `f` returns false (or fails).
    fn agreement(&mut self, name: &str, anchor: &str, mut f: impl FnMut(&mut Sampler) -> Result<bool>) {
        let mut s = self.sampler(name);
        let misses = (0..self.config.trials).filter(|_| !matches!(f(&mut s), Ok(true))).count();
        self.push(name, anchor, misses as f64, 0.0);
    }

    fn push(&mut self, name: &str, anchor: &str, measured: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            passed: measured <= tolerance,
            measured,
            tolerance,
            anchor: anchor.to_string(),
        });
    }
}

fn random_factored(s: &mut Sampler, dims: &[usize]) -> FactoredOperator {
    let n: usize = dims.iter().product();
    FactoredOperator::new(s.gaussian_matrix(n, n), dims.to_vec()).expect("matching dims")
}

fn random_dims(s: &mut Sampler, count: usize, max: usize) -> Vec<usize> {
    (0..count).map(|_| s.range(1, max)).collect()
}

fn matcore_suite(ctx: &mut Ctx) {
    ctx.numeric("matcore.kron-associative", "kron associativity", 1e-12, |s| {
        let (a, b, c) = (s.gaussian_matrix(2, 3), s.gaussian_matrix(3, 2), s.gaussian_matrix(2, 2));
        Ok(kron(&kron(&a, &b), &c).max_abs_diff(&kron(&a, &kron(&b, &c))))
    });
    ctx.numeric("matcore.kron-bilinear", "kron bilinearity", 1e-12, |s| {
        let (a, b, c) = (s.gaussian_matrix(2, 3), s.gaussian_matrix(2, 3), s.gaussian_matrix(3, 2));
        let z = s.complex_gaussian();
        let lhs = kron(&(&a + &b.scale(z)), &c);
        let rhs = &kron(&a, &c) + &kron(&b, &c).scale(z);
        Ok(lhs.max_abs_diff(&rhs))
    });
    ctx.numeric("matcore.partial-trace-composes", "stepwise and joint partial traces agree", 1e-12, |s| {
        let dims = random_dims(s, 3, 3);
        let op = random_factored(s, &dims);
        let stepwise = op.trace_out(&[3])?.trace_out(&[2])?;
        let joint = op.trace_out(&[3, 2])?;
        Ok(stepwise.matrix().max_abs_diff(joint.matrix()))
    });
    ctx.numeric("matcore.partial-trace-preserves-trace", "partial trace keeps the total trace", 1e-12, |s| {
        let dims = random_dims(s, 3, 3);
        let op = random_factored(s, &dims);
        Ok((op.partial_trace(&[1])?.trace() - op.trace()).norm())
    });
    ctx.numeric("matcore.partial-transpose-involution", "partial transpose is an involution", 0.0, |s| {
        let dims = random_dims(s, 3, 3);
        let op = random_factored(s, &dims);
        let label = s.range(1, 3);
        Ok(op.partial_transpose(label)?.partial_transpose(label)?.matrix().max_abs_diff(op.matrix()))
    });
    ctx.numeric(
        "matcore.partial-transpose-commutes-with-trace",
        "partial transpose commutes with tracing another factor",
        1e-12,
        |s| {
            let dims = random_dims(s, 3, 3);
            let op = random_factored(s, &dims);
            let a = op.partial_transpose(1)?.trace_out(&[3])?;
            let b = op.trace_out(&[3])?.partial_transpose(1)?;
            Ok(a.matrix().max_abs_diff(b.matrix()))
        },
    );
    ctx.numeric("matcore.herm-sqrt-squares-back", "PSD square root, relative to the spectral norm", 1e-9, |s| {
        let d = s.range(1, 16);
        let r1 = s.range(1, d);
        let g = s.gaussian_matrix(d, r1);
        let m = &g * &g.adjoint();
        let r = herm_sqrt(&m)?;
        Ok((&r * &r).max_abs_diff(&m) / eigh(&m)?.norm().max(f64::MIN_POSITIVE))
    });
}

fn classical_suite(ctx: &mut Ctx) {
    ctx.numeric("classical.kraus-equivalence", "Kraus form of a classical channel", 1e-12, |s| {
        let r1 = s.range(1, 4);
        let r2 = s.range(1, 4);
        let ch = s.stochastic_channel(r1, r2);
        let a = s.diagonal_observable(ch.n1());
        let via = apply_kraus(&kraus_from_channel(&ch), &embed_observable(&a))?;
        Ok(via.max_abs_diff(&embed_observable(&ch.push_forward(&a)?)))
    });
    ctx.numeric("classical.dilation-row-stochastic", "dilation channels preserve normalization", 1e-12, |s| {
        let n = s.range(2, 3);
        let ch = channel_from_dilation(&s.permutation(n * n), &s.probability_vector(n))?;
        Ok(ch.row_sums().iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max))
    });
    ctx.numeric(
        "classical.dilation-doubly-stochastic-uniform-ancilla",
        "dilation with a uniform ancilla is doubly stochastic",
        1e-12,
        |s| {
            let n = s.range(2, 3);
            let ch = channel_from_dilation(&s.permutation(n * n), &ProbabilityVector::uniform(n))?;
            Ok(ch.row_sums().iter().chain(&ch.column_sums()).map(|x| (x - 1.0).abs()).fold(0.0, f64::max))
        },
    );
    ctx.once("classical.dilation-reference-channels", "the four two-point reference channels", 1e-15, || {
        let sigma = ProbabilityVector::new(vec![0.7, 0.3])?;
        let (q1, q2) = (0.7, 0.3);
        let cases = [
            (vec![0, 1, 2, 3], vec![vec![1.0, 0.0], vec![0.0, 1.0]]),
            (vec![2, 3, 0, 1], vec![vec![0.0, 1.0], vec![1.0, 0.0]]),
            (vec![0, 3, 2, 1], vec![vec![q1, q2], vec![q2, q1]]),
            (vec![2, 1, 0, 3], vec![vec![q2, q1], vec![q1, q2]]),
        ];
        let mut worst: f64 = 0.0;
        for (perm, expected) in cases {
            let ch = channel_from_dilation(&Permutation::new(perm)?, &sigma)?;
            worst = worst.max(ch.max_abs_diff(&StochasticChannel::from_rows(&expected)?));
        }
        Ok(worst)
    });
    ctx.agreement("classical.teleport-exact", "teleportation through a maximally correlated state", |s| {
        let n = s.range(1, 3);
        let p = s.probability_vector(n);
        let perm = s.permutation(n);
        let t = classical_teleport(&p, &perm)?;
        let inv = perm.inverse();
        let closed: Vec<f64> = (0..n).map(|i| p.get(inv.apply(i))).collect();
        Ok(t.bob.weights() == closed.as_slice() && t.corrected == p)
    });
    ctx.numeric("classical.choi-marginal-uniform", "Choi state of a unital channel", 1e-14, |s| {
        let n = s.range(1, 4);
        let ch = s.stochastic_channel(n, n).transpose();
        let marg = classical_choi(&ch)?.reduce(&[1])?;
        Ok(marg.matrix().real_diagonal().iter().map(|w| (w - 1.0 / n as f64).abs()).fold(0.0, f64::max))
    });
    ctx.numeric("classical.permutation-channel-doubly-stochastic", "permutation channels", 0.0, |s| {
        let r1 = s.range(1, 5);
        let ch = permutation_channel(&s.permutation(r1));
        Ok(if ch.is_doubly_stochastic() { 0.0 } else { 1.0 })
    });
}

fn clift_suite(ctx: &mut Ctx) {
    ctx.numeric("clift.lift-total-probability", "lifting preserves total probability", 1e-12, |s| {
        let r1 = s.range(1, 4);
        let r2 = s.range(1, 4);
        let t = s.lifting_tensor(r1, r2);
        let p = s.probability_vector(t.n1());
        Ok((t.joint(&p)?.iter().sum::<f64>() - 1.0).abs())
    });
    ctx.numeric("clift.nondemolition-marginal", "non-demolition returns the input marginal", 1e-15, |s| {
        let r1 = s.range(1, 4);
        let r2 = s.range(1, 4);
        let t = s.markovian_tensor(r1, r2);
        let p = s.probability_vector(t.n1());
        let m = t.lift(&p)?.reduce(&[1])?;
        Ok(m.matrix().real_diagonal().iter().zip(p.weights()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    });
    ctx.agreement(
        "clift.nondemolition-state-independent",
        "non-demolition on one full-support state versus on all states",
        |s| {
            let n = s.range(1, 3);
            let n2 = s.range(1, 3);
            let t = if s.uniform() < 0.5 { s.markovian_tensor(n, n2) } else { s.lifting_tensor(n, n2) };
            let p = s.probability_vector(n);
            Ok(t.is_nondemolition_for(&p)? == t.is_nondemolition())
        },
    );
    ctx.numeric("clift.ohya-cloning", "every marginal of the Ohya N-lift is the input", 1e-15, |s| {
        let n = s.range(1, 3);
        let parties = s.range(2, 4);
        let p = s.probability_vector(n);
        let out = n_lift(&LiftingTensor::ohya(n), &p, parties)?;
        let mut worst: f64 = 0.0;
        for label in 1..=parties {
            let m = out.reduce(&[label])?.matrix().real_diagonal();
            worst = m.iter().zip(p.weights()).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
        }
        Ok(worst)
    });
    ctx.numeric("clift.markov-reduction", "dropping the last party of a chain", 1e-14, |s| {
        let r1 = s.range(1, 3);
        let spec = s.markov_spec(r1);
        let parties = s.range(2, 4);
        let keep: Vec<usize> = (1..parties).collect();
        let reduced = markov_state(&spec, parties)?.reduce(&keep)?;
        Ok(reduced.matrix().max_abs_diff(markov_state(&spec, parties - 1)?.matrix()))
    });
    ctx.numeric("clift.transition-expectation", "chain state equals nested transition expectation", 1e-12, |s| {
        let n = s.range(1, 3);
        let parties = s.range(1, 4);
        let spec = s.markov_spec(n);
        let obs: Vec<Vec<f64>> = (0..parties).map(|_| s.diagonal_observable(n)).collect();
        let check = verify_transition_expectation(&spec, &obs, 1e-12)?;
        Ok((check.lhs - check.rhs).abs())
    });
}

fn qlift_suite(ctx: &mut Ctx) {
    ctx.numeric("qlift.qcp-marginal-identity", "QCP operator traces to the identity", 1e-10, |s| {
        let d = s.range(1, 4);
        let r1 = s.range(1, 3);
        let pi = QcpOperator::from_channel(&s.unital_cp_map(d, r1))?;
        Ok(pi.operator().partial_trace(&[1])?.matrix().max_abs_diff(&ComplexMatrix::identity(d)))
    });
    ctx.numeric("qlift.nonlinear-lift-marginals", "nonlinear lifting marginals", 1e-10, |s| {
        let d = s.range(1, 4);
        let r1 = s.range(1, 3);
        let lam = s.unital_cp_map(d, r1);
        let rho = s.density(d);
        let out = nonlinear_lift(&QcpOperator::from_channel(&lam)?, &rho)?;
        let first = out.reduce(&[1])?.matrix().max_abs_diff(rho.matrix());
        let second = out.reduce(&[2])?.matrix().max_abs_diff(&lam.adjoint_apply(rho.matrix())?.transpose());
        Ok(first.max(second))
    });
    ctx.numeric("qlift.compose-trace-identities", "composition peels back to the first QCP", 1e-9, |s| {
        let p1 = QcpOperator::from_channel(&s.unital_cp_map(2, 2))?;
        let p2 = QcpOperator::from_channel(&s.unital_cp_map(2, 2))?;
        let c = compose_qcp(&p1, &p2)?;
        let a = c.trace_out(&[3])?.matrix().max_abs_diff(p1.matrix());
        let b = c.partial_trace(&[1])?.matrix().max_abs_diff(&ComplexMatrix::identity(2));
        Ok(a.max(b))
    });
    ctx.agreement("qlift.compose-psd", "compositions are positive", |s| {
        let p1 = QcpOperator::from_channel(&s.unital_cp_map(2, 2))?;
        let p2 = QcpOperator::from_channel(&s.unital_cp_map(2, 2))?;
        Ok(is_psd(compose_qcp(&p1, &p2)?.matrix(), tol::PSD)?.psd)
    });
    ctx.numeric("qlift.n-compose-chain", "trace peeling along an N-chain", 1e-9, |s| {
        let pis: Vec<QcpOperator> =
            (0..3).map(|_| QcpOperator::from_channel(&s.unital_cp_map(2, 2))).collect::<Result<_>>()?;
        let four = n_compose_qcp(&pis)?;
        let three = n_compose_qcp(&pis[..2])?;
        let a = four.trace_out(&[4])?.matrix().max_abs_diff(three.matrix());
        let b = three.trace_out(&[3])?.matrix().max_abs_diff(pis[0].matrix());
        let c = four.partial_trace(&[1])?.matrix().max_abs_diff(&ComplexMatrix::identity(2));
        Ok(a.max(b).max(c))
    });
    ctx.numeric("qlift.ohya-marginals", "both marginals of the Ohya lifting reproduce the state", 1e-10, |s| {
        let d = s.range(1, 4);
        let rho = s.density(d);
        let out = ohya_n_lift(&rho, 2)?;
        let a = out.reduce(&[1])?.matrix().max_abs_diff(rho.matrix());
        let b = out.reduce(&[2])?.matrix().max_abs_diff(rho.matrix());
        Ok(a.max(b))
    });
    ctx.once("qlift.robertson-choi-min-eigenvalue", "Choi matrix of the Robertson-assisted map", 1e-12, || {
        let psi = LinearMap::robertson().swap_conjugate()?;
        let phi = lifting_assisted_map(&psi, &DensityOperator::maximally_mixed(2))?;
        Ok((choi_min_eigenvalue(&phi)? + 0.25).abs())
    });
    ctx.agreement("qlift.cp-assisted-map-is-cp", "lifting-assisted map of a CP map", |s| {
        let psi = s.unital_cp_map(4, 2);
        let phi = lifting_assisted_map(&psi, &s.density(2))?;
        phi.is_cp()
    });
    ctx.numeric("qlift.classical-specialization-markov", "classical QCP chain is a Markov state", 1e-12, |s| {
        let r1 = s.range(1, 3);
        let spec = s.markov_spec(r1);
        let parties = s.range(2, 4);
        let pi = QcpOperator::from_conditional(spec.conditional())?;
        let rho = crate::classical::embed_diagonal(spec.initial());
        let q = n_nonlinear_lift(&pi, &rho, parties)?;
        Ok(q.matrix().max_abs_diff(markov_state(&spec, parties)?.matrix()))
    });
}

fn circulant_suite(ctx: &mut Ctx) {
    ctx.numeric("circulant.partial-transpose-reconstruction", "Hadamard-product partial transpose", 1e-12, |s| {
        let r1 = s.range(2, 4);
        let spec = s.circulant_spec(r1);
        let full = build_circulant(&spec).operator().partial_transpose(1)?;
        Ok(reconstruct_partial_transpose(&circulant_partial_transpose(&spec)).max_abs_diff(full.matrix()))
    });
    ctx.agreement("circulant.ppt-oracle-agreement", "block PPT test against the full partial transpose", |s| {
        let r1 = s.range(2, 4);
        let spec = s.circulant_spec(r1);
        let full = build_circulant(&spec).operator().partial_transpose(1)?;
        Ok(is_ppt_circulant(&spec)?.ppt == is_psd(full.matrix(), tol::PSD)?.psd)
    });
    ctx.numeric("circulant.lift-diagonal-dependence", "circulant lifting sees only the diagonal", 0.0, |s| {
        let d = s.range(2, 4);
        let cs = s.circulant_lift_blocks(d);
        let rho = s.density(d);
        let diag = DensityOperator::single(ComplexMatrix::from_diagonal(&rho.matrix().diagonal()))?;
        Ok(circulant_lift(&cs, &rho)?.matrix().max_abs_diff(circulant_lift(&cs, &diag)?.matrix()))
    });
    ctx.numeric("circulant.lift-trace", "circulant lifting is trace preserving", 1e-12, |s| {
        let d = s.range(2, 4);
        let out = circulant_lift(&s.circulant_lift_blocks(d), &s.density(d))?;
        Ok((out.matrix().trace().re - 1.0).abs())
    });
    ctx.numeric("circulant.isometry", "isometry of the pure circulant lifting", 1e-12, |s| {
        let d = s.range(2, 4);
        let cvecs: Vec<_> = (0..d).map(|_| s.unit_vector(d)).collect();
        let v = circulant_isometry(&cvecs)?;
        Ok((&v.adjoint() * &v).max_abs_diff(&ComplexMatrix::identity(d)))
    });
    ctx.numeric("circulant.bell-lift-spectrum", "Bell spectrum of the Bell-diagonal lifting", 1e-12, |s| {
        let d = s.range(2, 3);
        let p = s.probability_vector(d);
        let rho = s.density(d);
        let (state, spectrum) = bell_diagonal_lift(&p, &rho)?;
        let diag = rho.matrix().real_diagonal();
        let expected: Vec<Vec<f64>> = (0..d).map(|m| (0..d).map(|n| p.get(m) * diag[n]).collect()).collect();
        let projections = bell_projections(d);
        let mut rebuilt = ComplexMatrix::zeros(d * d, d * d);
        for m in 0..d {
            for n in 0..d {
                rebuilt = &rebuilt + &projections[m][n].matrix().scale_real(expected[m][n]);
            }
        }
        Ok(spectrum.max_abs_diff(&expected).max(rebuilt.max_abs_diff(state.matrix())))
    });
    ctx.once("circulant.bell-completeness", "Bell projectors resolve the identity", 1e-12, || {
        let mut worst: f64 = 0.0;
        for d in 2..=4 {
            let sum = bell_projections(d)
                .iter()
                .flatten()
                .fold(ComplexMatrix::zeros(d * d, d * d), |acc, p| &acc + p.matrix());
            worst = worst.max(sum.max_abs_diff(&ComplexMatrix::identity(d * d)));
        }
        Ok(worst)
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_roundtrip() {
        for s in std::iter::once(Suite::All).chain(Suite::MODULES) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn all_suites_pass_and_are_sorted() {
        let report = run(Suite::All, &VerifyConfig::new(42, 10));
        for c in &report.checks {
            assert!(c.passed, "{c:?}");
            assert!(!c.anchor.is_empty());
        }
        assert!(report.passed);
        let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = VerifyConfig::new(7, 5);
        assert_eq!(run(Suite::Circulant, &cfg), run(Suite::Circulant, &cfg));
    }

    #[test]
    fn check_outcome_independent_of_suite_selection() {
        let cfg = VerifyConfig::new(3, 5);
        let all = run(Suite::All, &cfg);
        let one = run(Suite::Clift, &cfg);
        for c in &one.checks {
            assert!(all.checks.contains(c));
        }
    }

    #[test]
    fn tolerance_override_can_fail_checks() {
        let mut cfg = VerifyConfig::new(1, 3);
        cfg.tol = Some(-1.0);
        let report = run(Suite::Matcore, &cfg);
        assert!(!report.passed);
    }
}
