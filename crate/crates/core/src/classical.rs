//! Classical probability on a finite sample space, written as diagonal
//! operators.
//!
//! A [`StochasticChannel`] stores the `n1 x n2` weights `Λ_ij` of a positive
//! map from observables on `Ω₁` to observables on `Ω₂`. Its state action is
//! `b_j = Σ_i Λ_ij p_i` (the Kraus form realizes exactly this), and its
//! observable action is the dual `a_i = Σ_j Λ_ij b_j`, so that
//! `⟨b, Λ·p⟩ = ⟨Λ*·b, p⟩`. Two normalization predicates are exposed and
//! neither is required at construction:
//!
//! - [`StochasticChannel::is_unital`]: every column sums to one,
//!   `Σ_i Λ_ij = 1`, so that `p_{i|j} = Λ_ij` is a conditional probability;
//! - [`StochasticChannel::is_trace_preserving`]: every row sums to one, so
//!   the state action maps distributions to distributions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, DensityOperator, C64, ONE, ZERO};
use crate::tol;

/// Nonnegative weights summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidProbability("empty vector".into()));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidProbability(format!("weight {i} is {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol::PROBABILITY {
            return Err(Error::InvalidProbability(format!("weights sum to {total}")));
        }
        Ok(Self(weights))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    /// The pure state concentrated on `i`.
    pub fn point(n: usize, i: usize) -> Self {
        let mut w = vec![0.0; n];
        w[i] = 1.0;
        Self(w)
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    /// `⟨a, p⟩ = Σ a_i p_i`
    pub fn expectation(&self, a: &[f64]) -> Result<f64> {
        check_len(a.len(), self.len(), "observable")?;
        Ok(a.iter().zip(&self.0).map(|(x, p)| x * p).sum())
    }
}

impl TryFrom<Vec<f64>> for ProbabilityVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ProbabilityVector> for Vec<f64> {
    fn from(p: ProbabilityVector) -> Self {
        p.0
    }
}

fn check_len(found: usize, expected: usize, what: &str) -> Result<()> {
    if found != expected {
        return Err(Error::DimensionMismatch(format!("{what} has length {found}, expected {expected}")));
    }
    Ok(())
}

/// Diagonal density operator `Σ p_i e_ii`.
pub fn embed_diagonal(p: &ProbabilityVector) -> DensityOperator {
    DensityOperator::diagonal(p.weights(), vec![p.len()])
}

/// Diagonal observable `Σ a_i e_ii`.
pub fn embed_observable(a: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(a)
}

/// Transition weights `Λ_ij ≥ 0`, `i ∈ Ω₁`, `j ∈ Ω₂`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct StochasticChannel {
    n1: usize,
    n2: usize,
    weights: Vec<f64>,
}

impl StochasticChannel {
    pub fn new(n1: usize, n2: usize, weights: Vec<f64>) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::DimensionMismatch("channel dimensions must be positive".into()));
        }
        if weights.len() != n1 * n2 {
            return Err(Error::BadShape { expected: n1 * n2, found: weights.len() });
        }
        for (idx, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFinite);
            }
            if w < 0.0 {
                return Err(Error::NegativeEntry { row: idx / n2, col: idx % n2, value: w });
            }
        }
        Ok(Self { n1, n2, weights })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n2 = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n2) {
            return Err(Error::DimensionMismatch("ragged channel rows".into()));
        }
        Self::new(rows.len(), n2, rows.concat())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// Completely depolarizing channel `Λ_ij = 1/n₁`.
    pub fn depolarizing(n1: usize, n2: usize) -> Self {
        Self::from_fn(n1, n2, |_, _| 1.0 / n1 as f64)
    }

    fn from_fn(n1: usize, n2: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let weights = (0..n1).flat_map(|i| (0..n2).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        Self { n1, n2, weights }
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n2 + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.weights.chunks(self.n2).map(<[f64]>::to_vec).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.n2).map(|j| (0..self.n1).map(|i| self.get(i, j)).sum()).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.weights.chunks(self.n2).map(|r| r.iter().sum()).collect()
    }

    /// Every column sums to one (`Σ_i Λ_ij = 1`).
    pub fn is_unital(&self) -> bool {
        self.column_sums().iter().all(|s| (s - 1.0).abs() <= tol::PROBABILITY)
    }

    /// Every row sums to one, so the state action preserves normalization.
    pub fn is_trace_preserving(&self) -> bool {
        self.row_sums().iter().all(|s| (s - 1.0).abs() <= tol::PROBABILITY)
    }

    pub fn is_doubly_stochastic(&self) -> bool {
        self.n1 == self.n2 && self.is_unital() && self.is_trace_preserving()
    }

    /// `b_j = Σ_i Λ_ij a_i` on raw weights.
    pub fn push_forward(&self, a: &[f64]) -> Result<Vec<f64>> {
        check_len(a.len(), self.n1, "input")?;
        Ok((0..self.n2).map(|j| (0..self.n1).map(|i| self.get(i, j) * a[i]).sum()).collect())
    }

    /// State action `b_j = Σ_i Λ_ij p_i`. Fails with `NotTracePreserving`
    /// when the image is not normalized.
    pub fn apply_to_state(&self, p: &ProbabilityVector) -> Result<ProbabilityVector> {
        let b = self.push_forward(p.weights())?;
        let total: f64 = b.iter().sum();
        if (total - 1.0).abs() > tol::PROBABILITY {
            return Err(Error::NotTracePreserving { deviation: (total - 1.0).abs() });
        }
        ProbabilityVector::new(b)
    }

    /// Observable action, dual to [`Self::apply_to_state`]:
    /// `a_i = Σ_j Λ_ij b_j`.
    pub fn apply_to_observable(&self, b: &[f64]) -> Result<Vec<f64>> {
        check_len(b.len(), self.n2, "observable")?;
        Ok((0..self.n1).map(|i| (0..self.n2).map(|j| self.get(i, j) * b[j]).sum()).collect())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n2, self.n1, |i, j| self.get(j, i))
    }

    /// Real `n1 x n2` matrix as a complex matrix.
    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n1, self.n2, |i, j| C64::new(self.get(i, j), 0.0))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.n1 != other.n1 || self.n2 != other.n2 {
            return f64::INFINITY;
        }
        self.weights.iter().zip(&other.weights).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl TryFrom<Vec<Vec<f64>>> for StochasticChannel {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_rows(&rows)
    }
}

impl From<StochasticChannel> for Vec<Vec<f64>> {
    fn from(c: StochasticChannel) -> Self {
        c.rows()
    }
}

/// Bijection of `{0, …, n−1}`, stored as its list of images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection of 0..{n}")));
            }
            seen[x] = true;
        }
        Ok(Self(images))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// `i ↦ i + shift (mod n)`.
    pub fn cycle(n: usize, shift: usize) -> Self {
        Self((0..n).map(|i| (i + shift) % n).collect())
    }

    /// All `n!` permutations in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        use itertools::Itertools;
        (0..n).permutations(n).map(Self).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Self(inv)
    }

    /// Permutation unitary `U_ij = δ_{i π(j)}`, i.e. `U e_j = e_{π(j)}`.
    pub fn unitary(&self) -> ComplexMatrix {
        let n = self.len();
        ComplexMatrix::from_fn(n, n, |i, j| if i == self.0[j] { ONE } else { ZERO })
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

/// Channel `Λ_ij = δ_{j π(i)}` of the unitary `a ↦ U a U*`. Equals `Uᵀ`.
pub fn permutation_channel(perm: &Permutation) -> StochasticChannel {
    let n = perm.len();
    StochasticChannel::from_fn(n, n, |i, j| if j == perm.apply(i) { 1.0 } else { 0.0 })
}

/// One Kraus operator `K_ij = √Λ_ij |f_j⟩⟨e_i|` of a classical channel.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausOperator {
    pub input: usize,
    pub output: usize,
    /// `n2 x n1` matrix.
    pub op: ComplexMatrix,
}

/// Kraus form of a channel, one operator per nonzero weight, using the
/// nonnegative real square root.
pub fn kraus_from_channel(ch: &StochasticChannel) -> Vec<KrausOperator> {
    let mut out = Vec::new();
    for i in 0..ch.n1 {
        for j in 0..ch.n2 {
            let w = ch.get(i, j);
            if w == 0.0 {
                continue;
            }
            let mut op = ComplexMatrix::zeros(ch.n2, ch.n1);
            op.set(j, i, C64::new(w.sqrt(), 0.0));
            out.push(KrausOperator { input: i, output: j, op });
        }
    }
    out
}

/// `Σ K a K†` for an `n1 x n1` input.
pub fn apply_kraus(ops: &[KrausOperator], a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (rows, cols) = ops.first().map_or((a.rows(), a.cols()), |k| (k.op.rows(), k.op.rows()));
    let mut acc = ComplexMatrix::zeros(rows, cols);
    for k in ops {
        acc = &acc + &k.op.conjugate(a)?;
    }
    Ok(acc)
}

/// Channel induced on the system by a permutation dilation:
/// `ρ ↦ Tr_anc(U (ρ ⊗ σ) U*)` restricted to diagonal states.
///
/// `perm` acts on `n²` joint labels, with the system label `i` and the
/// ancilla label `k` encoded as `i·n + k`. The system is the left tensor
/// factor. The returned weights satisfy `Λ_ij = ⟨j| Λ^#(e_ii) |j⟩`.
pub fn channel_from_dilation(perm: &Permutation, sigma: &ProbabilityVector) -> Result<StochasticChannel> {
    let n = sigma.len();
    if perm.len() != n * n {
        return Err(Error::DimensionMismatch(format!(
            "dilation permutation must act on {} labels, got {}",
            n * n,
            perm.len()
        )));
    }
    let u = perm.unitary();
    let ancilla = embed_diagonal(sigma);
    let mut weights = Vec::with_capacity(n * n);
    for i in 0..n {
        let joint = embed_diagonal(&ProbabilityVector::point(n, i)).kron(&ancilla);
        let evolved = u.conjugate(joint.matrix())?;
        let evolved = crate::matcore::FactoredOperator::new(evolved, vec![n, n])?;
        let reduced = evolved.partial_trace(&[2])?;
        weights.extend(reduced.matrix().real_diagonal());
    }
    StochasticChannel::new(n, n, weights)
}

/// `P_π = (1/n) Σ_i e_ii ⊗ e_{π(i)π(i)}`.
pub fn max_correlated_state(perm: &Permutation) -> DensityOperator {
    let n = perm.len();
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        w[i * n + perm.apply(i)] = 1.0 / n as f64;
    }
    DensityOperator::diagonal(&w, vec![n, n])
}

/// Classical Choi–Jamiołkowski state of a unital channel on `Ω × Ω`:
/// `Σ_ij (Λ_ij / n) e_ii ⊗ e_jj`, i.e. joint law `p_{i|j} · (1/n)`.
pub fn classical_choi(ch: &StochasticChannel) -> Result<DensityOperator> {
    if ch.n1 != ch.n2 {
        return Err(Error::DimensionMismatch(format!("Choi state needs a square channel, got {}x{}", ch.n1, ch.n2)));
    }
    if !ch.is_unital() {
        let dev = ch.column_sums().iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max);
        return Err(Error::NotUnital { deviation: dev });
    }
    let n = ch.n1;
    let w: Vec<f64> = ch.weights.iter().map(|x| x / n as f64).collect();
    Ok(DensityOperator::diagonal(&w, vec![n, n]))
}

/// Result of the classical teleportation protocol.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Teleportation {
    pub alice: DensityOperator,
    pub resource: DensityOperator,
    /// Bob's state before correction, `p_{π⁻¹(i)}`.
    pub bob: ProbabilityVector,
    /// Bob's state after undoing `π`; equals the input.
    pub corrected: ProbabilityVector,
}

/// Teleports `p` through the maximally correlated state `P_π`.
///
/// Bob's state is `n² Tr₁₂(P₀ ⊗ 𝕀 · ρ_A ⊗ P_π)` on the three-factor space
/// (Alice's input, Alice's half of the resource, Bob's half). The two `1/n`
/// normalizations are absorbed into the projector sums `n P₀` and `n P_π`,
/// whose entries are 0 or 1, so the contraction is exact in floating point.
pub fn classical_teleport(p: &ProbabilityVector, perm: &Permutation) -> Result<Teleportation> {
    let n = p.len();
    check_len(perm.len(), n, "permutation")?;
    let alice = embed_diagonal(p);
    let resource = max_correlated_state(perm);
    let scaled_p0 = ComplexMatrix::from_real_diagonal(
        &(0..n * n).map(|x| if x / n == x % n { 1.0 } else { 0.0 }).collect::<Vec<_>>(),
    );
    let scaled_resource = ComplexMatrix::from_real_diagonal(
        &(0..n * n).map(|x| if perm.apply(x / n) == x % n { 1.0 } else { 0.0 }).collect::<Vec<_>>(),
    );
    let measurement = scaled_p0.kron(&ComplexMatrix::identity(n));
    let joint = alice.matrix().kron(&scaled_resource);
    let post = crate::matcore::FactoredOperator::new(measurement.matmul(&joint)?, vec![n, n, n])?;
    let bob_weights = post.partial_trace(&[1])?.matrix().real_diagonal();
    let bob = ProbabilityVector::new(bob_weights)?;
    let corrected = ProbabilityVector::new((0..n).map(|i| bob.get(perm.apply(i))).collect())?;
    Ok(Teleportation { alice, resource, bob, corrected })
}
