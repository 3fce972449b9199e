use proptest::prelude::*;

use liftlab::circulant::{
    bell_projections, build_circulant, circulant_partial_transpose, reconstruct_partial_transpose, CirculantSpec,
};
use liftlab::classical::{
    apply_kraus, channel_from_dilation, classical_choi, embed_diagonal, kraus_from_channel, permutation_channel,
    Permutation, ProbabilityVector, StochasticChannel,
};
use liftlab::clift::{markov_state, n_lift, LiftingTensor, MarkovSpec};
use liftlab::matcore::{herm_sqrt, is_psd, ComplexMatrix, FactoredOperator};
use liftlab::qlift::{nonlinear_lift, LinearMap, QcpOperator};
use liftlab::random::Sampler;
use liftlab::tol;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn kron_then_partial_trace_recovers_factor(seed: u64, da in 1usize..4, db in 1usize..4) {
        let mut s = Sampler::new(seed);
        let a = s.density(da);
        let b = s.density(db);
        let joint = a.kron(&b);
        prop_assert!(joint.reduce(&[2]).unwrap().approx_eq(&a, 1e-12));
        prop_assert!(joint.reduce(&[1]).unwrap().approx_eq(&b, 1e-12));
    }

    #[test]
    fn partial_transpose_twice_is_identity(seed: u64, d1 in 1usize..4, d2 in 1usize..4, label in 1usize..3) {
        let mut s = Sampler::new(seed);
        let m = s.gaussian_matrix(d1 * d2, d1 * d2);
        let op = FactoredOperator::new(m, vec![d1, d2]).unwrap();
        let back = op.partial_transpose(label).unwrap().partial_transpose(label).unwrap();
        prop_assert_eq!(back, op);
    }

    #[test]
    fn herm_sqrt_of_state_squares_back(seed: u64, d in 1usize..5) {
        let mut s = Sampler::new(seed);
        let rho = s.density(d);
        let r = herm_sqrt(rho.matrix()).unwrap();
        prop_assert!((&r * &r).approx_eq(rho.matrix(), 1e-10));
    }

    #[test]
    fn permutation_inverse_composes_to_identity(seed: u64, n in 1usize..7) {
        let mut s = Sampler::new(seed);
        let p = s.permutation(n);
        let inv = p.inverse();
        prop_assert!((0..n).all(|i| inv.apply(p.apply(i)) == i));
        prop_assert!(permutation_channel(&p).is_doubly_stochastic());
    }

    #[test]
    fn uniform_ancilla_dilation_is_doubly_stochastic(seed: u64, n in 1usize..4) {
        let mut s = Sampler::new(seed);
        let perm = s.permutation(n * n);
        let ch = channel_from_dilation(&perm, &ProbabilityVector::uniform(n)).unwrap();
        prop_assert!(ch.is_doubly_stochastic());
    }

    #[test]
    fn any_dilation_is_row_stochastic(seed: u64, n in 1usize..4) {
        let mut s = Sampler::new(seed);
        let perm = s.permutation(n * n);
        let sigma = s.probability_vector(n);
        let ch = channel_from_dilation(&perm, &sigma).unwrap();
        prop_assert!(ch.is_trace_preserving());
    }

    #[test]
    fn kraus_action_matches_push_forward(seed: u64, n1 in 1usize..5, n2 in 1usize..5) {
        let mut s = Sampler::new(seed);
        let ch = s.stochastic_channel(n1, n2);
        let p = s.probability_vector(n1);
        let via_kraus = apply_kraus(&kraus_from_channel(&ch), embed_diagonal(&p).matrix()).unwrap();
        let direct = ComplexMatrix::from_real_diagonal(&ch.push_forward(p.weights()).unwrap());
        prop_assert!(via_kraus.approx_eq(&direct, 1e-12));
    }

    #[test]
    fn choi_state_of_unital_channel_has_uniform_marginals(seed: u64, n in 1usize..5) {
        let mut s = Sampler::new(seed);
        let perm = s.permutation(n);
        let mixed = StochasticChannel::depolarizing(n, n);
        let ch = if s.uniform() < 0.5 { permutation_channel(&perm) } else { mixed };
        let choi = classical_choi(&ch).unwrap();
        let uniform = embed_diagonal(&ProbabilityVector::uniform(n));
        prop_assert!(choi.reduce(&[1]).unwrap().approx_eq(&uniform, 1e-12));
        prop_assert!(choi.reduce(&[2]).unwrap().approx_eq(&uniform, 1e-12));
    }

    #[test]
    fn lifts_are_normalized(seed: u64, n1 in 1usize..4, n2 in 1usize..4) {
        let mut s = Sampler::new(seed);
        let t = s.lifting_tensor(n1, n2);
        let p = s.probability_vector(n1);
        let total: f64 = t.joint(&p).unwrap().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn markovian_tensors_are_nondemolition(seed: u64, n1 in 1usize..4, n2 in 1usize..4) {
        let mut s = Sampler::new(seed);
        let t = s.markovian_tensor(n1, n2);
        prop_assert!(t.is_nondemolition());
        prop_assert!(t.is_markovian());
        let p = s.probability_vector(n1);
        prop_assert!(t.lift(&p).unwrap().reduce(&[1]).unwrap().approx_eq(&embed_diagonal(&p), 1e-12));
    }

    #[test]
    fn ohya_lift_clones_every_marginal(seed: u64, n in 1usize..4, parties in 2usize..5) {
        let mut s = Sampler::new(seed);
        let p = s.probability_vector(n);
        let out = n_lift(&LiftingTensor::ohya(n), &p, parties).unwrap();
        for label in 1..=parties {
            prop_assert!(out.reduce(&[label]).unwrap().approx_eq(&embed_diagonal(&p), 1e-14));
        }
    }

    #[test]
    fn markov_state_first_marginal_is_initial(seed: u64, n in 1usize..4, parties in 1usize..5) {
        let mut s = Sampler::new(seed);
        let spec = s.markov_spec(n);
        let state = markov_state(&spec, parties).unwrap();
        prop_assert!(state.reduce(&[1]).unwrap().approx_eq(&embed_diagonal(spec.initial()), 1e-12));
    }

    #[test]
    fn qcp_operator_traces_to_identity(seed: u64, d in 1usize..4, k in 1usize..4) {
        let mut s = Sampler::new(seed);
        let pi = QcpOperator::from_channel(&s.unital_cp_map(d, k)).unwrap();
        let marginal = pi.operator().partial_trace(&[1]).unwrap();
        prop_assert!(marginal.matrix().approx_eq(&ComplexMatrix::identity(d), 1e-10));
        prop_assert!(is_psd(pi.matrix(), tol::PSD).unwrap().psd);
    }

    #[test]
    fn nonlinear_lift_is_a_state(seed: u64, d in 1usize..4) {
        let mut s = Sampler::new(seed);
        let pi = QcpOperator::from_channel(&s.unital_cp_map(d, 2)).unwrap();
        let out = nonlinear_lift(&pi, &s.density(d)).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-10);
        prop_assert!(is_psd(out.matrix(), tol::PSD).unwrap().psd);
    }

    #[test]
    fn circulant_partial_transpose_matches_generic(seed: u64, d in 2usize..5) {
        let mut s = Sampler::new(seed);
        let spec = s.circulant_spec(d);
        let full = build_circulant(&spec).operator().partial_transpose(1).unwrap();
        let rebuilt = reconstruct_partial_transpose(&circulant_partial_transpose(&spec));
        prop_assert!(rebuilt.approx_eq(full.matrix(), 1e-12));
    }

    #[test]
    fn json_roundtrips_are_exact(seed: u64, n in 1usize..4) {
        let mut s = Sampler::new(seed);
        let p = s.probability_vector(n);
        let back: ProbabilityVector = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
        let ch = s.stochastic_channel(n, n + 1);
        let back: StochasticChannel = serde_json::from_str(&serde_json::to_string(&ch).unwrap()).unwrap();
        prop_assert_eq!(back, ch);
        let perm = s.permutation(n + 2);
        let back: Permutation = serde_json::from_str(&serde_json::to_string(&perm).unwrap()).unwrap();
        prop_assert_eq!(back, perm);
        let spec = s.markov_spec(n);
        let back: MarkovSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        prop_assert_eq!(back, spec);
        let t = s.lifting_tensor(n, n + 1);
        let back: LiftingTensor = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        prop_assert_eq!(back, t);
        let m = s.unital_cp_map(n, 2);
        let back: LinearMap = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        prop_assert_eq!(back, m);
        let c = s.circulant_spec(n + 1);
        let back: CirculantSpec = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        prop_assert_eq!(back, c);
    }
}

#[test]
fn bell_projectors_resolve_identity() {
    for d in 1..5 {
        let sum = bell_projections(d)
            .iter()
            .flatten()
            .fold(ComplexMatrix::zeros(d * d, d * d), |acc, p| &acc + p.matrix());
        assert!(sum.approx_eq(&ComplexMatrix::identity(d * d), 1e-12), "d = {d}");
    }
}

#[test]
fn robertson_is_not_completely_positive() {
    assert!(!LinearMap::robertson().is_cp().unwrap());
}
