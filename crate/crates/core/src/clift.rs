//! Classical liftings.
//!
//! A linear lifting from `Ω₁` to `Ω₂ × Ω₁` is stored as the tensor
//! `E[i][j][k]` with `i ∈ Ω₁` the input point, `j ∈ Ω₂` the new factor and
//! `k ∈ Ω₁` the retained factor. The lifted joint law is
//! `p_jk = Σ_i E_ijk p_i`, laid out with the new factor on the left (system
//! label 2) and the retained factor on the right (label 1). The lifting is
//! non-demolishing iff `Σ_j E_ijk = δ_ik`.

use serde::{Deserialize, Serialize};

use crate::classical::{ProbabilityVector, StochasticChannel};
use crate::error::{Error, Result};
use crate::matcore::{from_digits, is_psd, to_digits, ComplexMatrix, DensityOperator};
use crate::tol;

/// Column-stochastic table `C[j][i] = p_{j|i}`: rows are outcomes, columns
/// are conditions, every column sums to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Conditional {
    n_out: usize,
    n_in: usize,
    data: Vec<f64>,
}

impl Conditional {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_in = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || n_in == 0 || rows.iter().any(|r| r.len() != n_in) {
            return Err(Error::InvalidConditional("table must be a nonempty rectangle".into()));
        }
        let data = rows.concat();
        if let Some(x) = data.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidConditional(format!("entry {x} is not a probability")));
        }
        let c = Self { n_out: rows.len(), n_in, data };
        for i in 0..n_in {
            let s: f64 = (0..c.n_out).map(|j| c.get(j, i)).sum();
            if (s - 1.0).abs() > tol::PROBABILITY {
                return Err(Error::InvalidConditional(format!("column {i} sums to {s}")));
            }
        }
        Ok(c)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |j, i| if i == j { 1.0 } else { 0.0 })
    }

    fn from_fn(n_out: usize, n_in: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let data = (0..n_out).flat_map(|j| (0..n_in).map(move |i| (j, i))).map(|(j, i)| f(j, i)).collect();
        Self { n_out, n_in, data }
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    /// `p_{j|i}`
    pub fn get(&self, j: usize, i: usize) -> f64 {
        self.data[j * self.n_in + i]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n_in).map(<[f64]>::to_vec).collect()
    }

    /// Markov operator on observables, `P(a)_i = Σ_j a_j p_{j|i}`.
    pub fn markov_operator(&self, a: &[f64]) -> Result<Vec<f64>> {
        if a.len() != self.n_out {
            return Err(Error::DimensionMismatch(format!(
                "observable has length {}, expected {}",
                a.len(),
                self.n_out
            )));
        }
        Ok((0..self.n_in).map(|i| (0..self.n_out).map(|j| a[j] * self.get(j, i)).sum()).collect())
    }

    /// The same weights as a channel `Λ_ij = p_{j|i}`.
    pub fn to_channel(&self) -> StochasticChannel {
        let rows: Vec<Vec<f64>> = (0..self.n_in).map(|i| (0..self.n_out).map(|j| self.get(j, i)).collect()).collect();
        StochasticChannel::from_rows(&rows).expect("entries already validated")
    }

    #[cfg(test)]
    fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl TryFrom<Vec<Vec<f64>>> for Conditional {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_rows(&rows)
    }
}

impl From<Conditional> for Vec<Vec<f64>> {
    fn from(c: Conditional) -> Self {
        c.rows()
    }
}

/// A function `s: Ω₁ → Ω_k` given by its images and codomain size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMap {
    images: Vec<usize>,
    codomain: usize,
}

impl PointMap {
    pub fn new(images: Vec<usize>, codomain: usize) -> Result<Self> {
        if let Some(x) = images.iter().find(|&&x| x >= codomain) {
            return Err(Error::IndexOutOfRange(format!("image {x} outside codomain of size {codomain}")));
        }
        Ok(Self { images, codomain })
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn domain(&self) -> usize {
        self.images.len()
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TensorWire", into = "TensorWire")]
pub struct LiftingTensor {
    n1: usize,
    n2: usize,
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TensorWire {
    n1: usize,
    n2: usize,
    data: Vec<f64>,
}

impl TryFrom<TensorWire> for LiftingTensor {
    type Error = Error;

    fn try_from(w: TensorWire) -> Result<Self> {
        Self::new(w.n1, w.n2, w.data)
    }
}

impl From<LiftingTensor> for TensorWire {
    fn from(t: LiftingTensor) -> Self {
        Self { n1: t.n1, n2: t.n2, data: t.data }
    }
}

impl LiftingTensor {
    /// `data` is flat in `(i, j, k)` lexicographic order.
    pub fn new(n1: usize, n2: usize, data: Vec<f64>) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::InvalidTensor("dimensions must be positive".into()));
        }
        if data.len() != n1 * n2 * n1 {
            return Err(Error::BadShape { expected: n1 * n2 * n1, found: data.len() });
        }
        if let Some(x) = data.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidTensor(format!("entry {x} is not a nonnegative weight")));
        }
        for (i, block) in data.chunks(n2 * n1).enumerate() {
            let s: f64 = block.iter().sum();
            if (s - 1.0).abs() > tol::PROBABILITY {
                return Err(Error::InvalidTensor(format!("weights for input {i} sum to {s}")));
            }
        }
        Ok(Self { n1, n2, data })
    }

    pub fn from_fn(n1: usize, n2: usize, f: impl Fn(usize, usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(n1 * n2 * n1);
        for i in 0..n1 {
            for j in 0..n2 {
                for k in 0..n1 {
                    data.push(f(i, j, k));
                }
            }
        }
        Self::new(n1, n2, data)
    }

    /// Product lifting `E_ijk = δ_ik q_j`, giving `σ ⊗ p`.
    pub fn product(sigma: &ProbabilityVector, n1: usize) -> Self {
        let q = sigma.weights();
        Self::from_fn(n1, q.len(), |i, j, k| if i == k { q[j] } else { 0.0 }).expect("product weights")
    }

    /// Ohya lifting `E_ijk = δ_ij δ_ik`, giving `Σ p_i e_ii ⊗ e_ii`.
    pub fn ohya(n: usize) -> Self {
        Self::from_fn(n, n, |i, j, k| if i == j && i == k { 1.0 } else { 0.0 }).expect("Ohya weights")
    }

    /// Pure lifting `E_ijk = δ_{j s(i)} δ_ik`.
    pub fn pure(s: &PointMap) -> Self {
        Self::from_fn(s.domain(), s.codomain(), |i, j, k| if i == k && j == s.apply(i) { 1.0 } else { 0.0 })
            .expect("pure weights")
    }

    /// Markovian lifting `E_ijk = p_{j|i} δ_ik`.
    pub fn markovian(c: &Conditional) -> Self {
        Self::from_fn(c.n_in(), c.n_out(), |i, j, k| if i == k { c.get(j, i) } else { 0.0 })
            .expect("conditional columns are normalized")
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.n2 + j) * self.n1 + k]
    }

    /// Joint weights `p_jk` in the order `j * n1 + k`.
    pub fn joint(&self, p: &ProbabilityVector) -> Result<Vec<f64>> {
        if p.len() != self.n1 {
            return Err(Error::DimensionMismatch(format!("state has length {}, tensor expects {}", p.len(), self.n1)));
        }
        let mut out = vec![0.0; self.n2 * self.n1];
        for (i, &pi) in p.weights().iter().enumerate() {
            for (x, w) in out.iter_mut().enumerate() {
                *w += self.data[i * self.n2 * self.n1 + x] * pi;
            }
        }
        Ok(out)
    }

    /// Diagonal state on `Ω₂ × Ω₁`, dims `[n2, n1]`.
    pub fn lift(&self, p: &ProbabilityVector) -> Result<DensityOperator> {
        Ok(DensityOperator::diagonal(&self.joint(p)?, vec![self.n2, self.n1]))
    }

    /// `Σ_j E_ijk = δ_ik` for all `i, k`.
    pub fn is_nondemolition(&self) -> bool {
        (0..self.n1).all(|i| {
            (0..self.n1).all(|k| {
                let s: f64 = (0..self.n2).map(|j| self.get(i, j, k)).sum();
                (s - if i == k { 1.0 } else { 0.0 }).abs() <= tol::PROBABILITY
            })
        })
    }

    /// Whether the marginal on the retained factor reproduces `p` for this
    /// particular state.
    pub fn is_nondemolition_for(&self, p: &ProbabilityVector) -> Result<bool> {
        let joint = self.joint(p)?;
        Ok((0..self.n1).all(|k| {
            let m: f64 = (0..self.n2).map(|j| joint[j * self.n1 + k]).sum();
            (m - p.get(k)).abs() <= tol::PROBABILITY
        }))
    }

    /// The conditional `p_{j|i}` when the tensor has the Markovian form
    /// `E_ijk = p_{j|i} δ_ik`.
    pub fn markov_conditional(&self) -> Option<Conditional> {
        let off_diagonal_zero =
            (0..self.n1).all(|i| (0..self.n2).all(|j| (0..self.n1).all(|k| i == k || self.get(i, j, k) == 0.0)));
        if !off_diagonal_zero {
            return None;
        }
        let rows: Vec<Vec<f64>> = (0..self.n2).map(|j| (0..self.n1).map(|i| self.get(i, j, i)).collect()).collect();
        Conditional::from_rows(&rows).ok()
    }

    pub fn is_markovian(&self) -> bool {
        self.markov_conditional().is_some()
    }
}

/// `Γ(σ ⊗ p)` for a channel `Γ` on the joint index `j * n1 + k`.
pub fn gamma_lifting(
    gamma: &StochasticChannel,
    sigma: &ProbabilityVector,
    p: &ProbabilityVector,
) -> Result<DensityOperator> {
    let (n2, n1) = (sigma.len(), p.len());
    let n = n1 * n2;
    if gamma.n1() != n || gamma.n2() != n {
        return Err(Error::DimensionMismatch(format!(
            "joint channel must be {n}x{n}, got {}x{}",
            gamma.n1(),
            gamma.n2()
        )));
    }
    let product: Vec<f64> = sigma.weights().iter().flat_map(|s| p.weights().iter().map(move |x| s * x)).collect();
    let out = gamma.apply_to_state(&ProbabilityVector::new(product)?)?;
    Ok(DensityOperator::diagonal(out.weights(), vec![n2, n1]))
}

/// Applies each tensor in turn to the current system-1 factor.
///
/// Step `m` replaces the rightmost factor by the two-factor lift
/// `[new, retained]`, so the factor created by `tensors[0]` ends up
/// leftmost and the output has `tensors.len() + 1` factors.
pub fn n_lift_steps(tensors: &[LiftingTensor], p: &ProbabilityVector) -> Result<DensityOperator> {
    let mut weights = p.weights().to_vec();
    let mut dims = vec![p.len()];
    for t in tensors {
        let n1 = *dims.last().expect("nonempty");
        if t.n1 != n1 {
            return Err(Error::DimensionMismatch(format!("tensor input {} does not match factor {n1}", t.n1)));
        }
        let prefix = weights.len() / n1;
        let mut next = vec![0.0; prefix * t.n2 * n1];
        for r in 0..prefix {
            for i in 0..n1 {
                let w = weights[r * n1 + i];
                if w == 0.0 {
                    continue;
                }
                let base = r * t.n2 * n1;
                for x in 0..t.n2 * n1 {
                    next[base + x] += w * t.data[i * t.n2 * n1 + x];
                }
            }
        }
        weights = next;
        dims.insert(dims.len() - 1, t.n2);
    }
    Ok(DensityOperator::diagonal(&weights, dims))
}

/// `N`-partite lift by the recurrence `E_N = (id ⊗ … ⊗ id ⊗ E) ∘ E_{N−1}`.
pub fn n_lift(t: &LiftingTensor, p: &ProbabilityVector, parties: usize) -> Result<DensityOperator> {
    if parties < 2 {
        return Err(Error::DimensionMismatch(format!("an N-lift needs N >= 2, got {parties}")));
    }
    if t.n1 != t.n2 {
        return Err(Error::DimensionMismatch(format!("N-lift needs a square tensor, got n1={} n2={}", t.n1, t.n2)));
    }
    n_lift_steps(&vec![t.clone(); parties - 1], p)
}

/// Pure `N`-lift `Σ_i p_i f_{s_N(i)} ⊗ … ⊗ f_{s_2(i)} ⊗ e_ii`, with `maps`
/// listed as `[s_2, …, s_N]`.
pub fn pure_n_lift(p: &ProbabilityVector, maps: &[PointMap]) -> Result<DensityOperator> {
    if let Some(m) = maps.iter().find(|m| m.domain() != p.len()) {
        return Err(Error::DimensionMismatch(format!("map domain {} differs from {}", m.domain(), p.len())));
    }
    let mut dims: Vec<usize> = maps.iter().rev().map(PointMap::codomain).collect();
    dims.push(p.len());
    let mut weights = vec![0.0; dims.iter().product()];
    for (i, &pi) in p.weights().iter().enumerate() {
        let mut digits: Vec<usize> = maps.iter().rev().map(|m| m.apply(i)).collect();
        digits.push(i);
        weights[from_digits(&digits, &dims)] += pi;
    }
    Ok(DensityOperator::diagonal(&weights, dims))
}

/// Homogeneous chain `p_{i_N..i_1} = p_{i_N|i_{N−1}} ⋯ p_{i_2|i_1} p_{i_1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MarkovWire", into = "MarkovWire")]
pub struct MarkovSpec {
    conditional: Conditional,
    initial: ProbabilityVector,
}

#[derive(Serialize, Deserialize)]
struct MarkovWire {
    conditional: Conditional,
    initial: ProbabilityVector,
}

impl TryFrom<MarkovWire> for MarkovSpec {
    type Error = Error;

    fn try_from(w: MarkovWire) -> Result<Self> {
        Self::new(w.conditional, w.initial)
    }
}

impl From<MarkovSpec> for MarkovWire {
    fn from(s: MarkovSpec) -> Self {
        Self { conditional: s.conditional, initial: s.initial }
    }
}

impl MarkovSpec {
    pub fn new(conditional: Conditional, initial: ProbabilityVector) -> Result<Self> {
        let n = initial.len();
        if conditional.n_in() != n || conditional.n_out() != n {
            return Err(Error::DimensionMismatch(format!(
                "conditional is {}x{}, initial has length {n}",
                conditional.n_out(),
                conditional.n_in()
            )));
        }
        Ok(Self { conditional, initial })
    }

    pub fn conditional(&self) -> &Conditional {
        &self.conditional
    }

    pub fn initial(&self) -> &ProbabilityVector {
        &self.initial
    }

    pub fn n(&self) -> usize {
        self.initial.len()
    }
}

/// Chain weights laid out over `parties` factors, `i_N` leftmost.
pub fn markov_weights(spec: &MarkovSpec, parties: usize) -> Result<Vec<f64>> {
    if parties == 0 {
        return Err(Error::DimensionMismatch("a Markov state needs at least one party".into()));
    }
    let n = spec.n();
    let mut weights = spec.initial.weights().to_vec();
    let mut block = n;
    for _ in 1..parties {
        // prepend a factor conditioned on the current leftmost one
        let stride = block / n;
        let mut next = Vec::with_capacity(block * n);
        for j in 0..n {
            for (x, w) in weights.iter().enumerate() {
                next.push(spec.conditional.get(j, x / stride) * w);
            }
        }
        weights = next;
        block *= n;
    }
    Ok(weights)
}

pub fn markov_state(spec: &MarkovSpec, parties: usize) -> Result<DensityOperator> {
    let w = markov_weights(spec, parties)?;
    Ok(DensityOperator::diagonal(&w, vec![spec.n(); parties]))
}

/// Transition expectation `E(b ⊗ a) = P(b) · a` on diagonal observables.
pub fn transition_expectation(c: &Conditional, b: &[f64], a: &[f64]) -> Result<Vec<f64>> {
    let pb = c.markov_operator(b)?;
    if a.len() != pb.len() {
        return Err(Error::DimensionMismatch(format!("observable has length {}, expected {}", a.len(), pb.len())));
    }
    Ok(pb.iter().zip(a).map(|(x, y)| x * y).collect())
}

/// Both sides of the Markov-state identity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransitionCheck {
    /// `Tr(ρ (a_N ⊗ … ⊗ a_1))` on the chain state.
    pub lhs: f64,
    /// `Tr(ρ₁ E(E(⋯E(a_N ⊗ a_{N−1})⋯) ⊗ a_1))`, with `ρ₁` the initial law.
    pub rhs: f64,
    pub holds: bool,
}

/// Compares the chain expectation with the nested transition expectation.
/// `observables[0]` is `a_N` (leftmost factor); the last entry is `a_1`.
pub fn verify_transition_expectation(
    spec: &MarkovSpec,
    observables: &[Vec<f64>],
    tol: f64,
) -> Result<TransitionCheck> {
    let parties = observables.len();
    let n = spec.n();
    if let Some(a) = observables.iter().find(|a| a.len() != n) {
        return Err(Error::DimensionMismatch(format!("observable has length {}, expected {n}", a.len())));
    }
    let weights = markov_weights(spec, parties)?;
    let dims = vec![n; parties];
    let lhs: f64 = weights
        .iter()
        .enumerate()
        .map(|(x, w)| {
            let digits = to_digits(x, &dims);
            w * digits.iter().zip(observables).map(|(&d, a)| a[d]).product::<f64>()
        })
        .sum();
    let mut y = observables[0].clone();
    for a in &observables[1..] {
        y = transition_expectation(&spec.conditional, &y, a)?;
    }
    let rhs = spec.initial.expectation(&y)?;
    Ok(TransitionCheck { lhs, rhs, holds: (lhs - rhs).abs() <= tol })
}

/// Positive map on the diagonal algebra given by the images `φ^#(e_ii)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalUnitMap {
    images: Vec<ComplexMatrix>,
}

impl DiagonalUnitMap {
    pub fn new(images: Vec<ComplexMatrix>) -> Result<Self> {
        let m = images.first().map(ComplexMatrix::rows).ok_or_else(|| {
            Error::DimensionMismatch("a diagonal unit map needs at least one image".into())
        })?;
        if images.iter().any(|x| x.rows() != m || x.cols() != m) {
            return Err(Error::DimensionMismatch("images must be square of equal size".into()));
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).map(|i| ComplexMatrix::unit(n, i, i)).collect() }
    }

    /// `e_ii ↦ e_{π(i)π(i)}`
    pub fn permutation(perm: &crate::classical::Permutation) -> Self {
        let n = perm.len();
        Self { images: (0..n).map(|i| ComplexMatrix::unit(n, perm.apply(i), perm.apply(i))).collect() }
    }

    /// `e_ii ↦ I / n`
    pub fn depolarizing(n: usize) -> Self {
        Self { images: vec![ComplexMatrix::identity(n).scale_real(1.0 / n as f64); n] }
    }

    pub fn domain(&self) -> usize {
        self.images.len()
    }

    pub fn codomain(&self) -> usize {
        self.images[0].rows()
    }

    pub fn image(&self, i: usize) -> &ComplexMatrix {
        &self.images[i]
    }
}

/// `Σ_i p_i φ_N(e_ii) ⊗ … ⊗ φ_1(e_ii)` with `maps[0]` the leftmost factor.
pub fn separable_n_state(p: &ProbabilityVector, maps: &[DiagonalUnitMap]) -> Result<DensityOperator> {
    if maps.is_empty() {
        return Err(Error::DimensionMismatch("need at least one map".into()));
    }
    for (index, m) in maps.iter().enumerate() {
        if m.domain() != p.len() {
            return Err(Error::DimensionMismatch(format!("map {index} has domain {}, expected {}", m.domain(), p.len())));
        }
        for img in &m.images {
            let report = is_psd(img, tol::PSD)?;
            if !report.psd {
                return Err(Error::MapNotPositive { index, min_eigenvalue: report.min_eigenvalue });
            }
            let tr = img.trace();
            if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
                return Err(Error::NotTracePreserving { deviation: (tr - 1.0).norm() });
            }
        }
    }
    let dims: Vec<usize> = maps.iter().map(DiagonalUnitMap::codomain).collect();
    let total: usize = dims.iter().product();
    let mut acc = ComplexMatrix::zeros(total, total);
    for (i, &pi) in p.weights().iter().enumerate() {
        if pi == 0.0 {
            continue;
        }
        let term = crate::matcore::kron_all(maps.iter().map(|m| &m.images[i]));
        acc = &acc + &term.scale_real(pi);
    }
    Ok(DensityOperator::assume_valid(acc, dims))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{embed_diagonal, permutation_channel, Permutation};
    use crate::random::Sampler;

    fn pv(w: &[f64]) -> ProbabilityVector {
        ProbabilityVector::new(w.to_vec()).unwrap()
    }

    fn diag_of(rho: &DensityOperator) -> Vec<f64> {
        assert!(rho.matrix().is_diagonal());
        rho.matrix().real_diagonal()
    }

    #[test]
    fn conditional_validation() {
        assert!(Conditional::from_rows(&[vec![0.9, 0.2], vec![0.1, 0.8]]).is_ok());
        assert!(Conditional::from_rows(&[vec![0.9, 0.2], vec![0.2, 0.8]]).is_err());
        assert!(Conditional::from_rows(&[vec![1.0], vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn tensor_validation_and_json() {
        assert!(matches!(LiftingTensor::new(2, 2, vec![0.25; 7]), Err(Error::BadShape { .. })));
        assert!(LiftingTensor::new(1, 2, vec![0.5, 0.6]).is_err());
        assert!(LiftingTensor::new(1, 2, vec![1.5, -0.5]).is_err());
        let t = LiftingTensor::ohya(2);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"n1":2,"n2":2,"data":[1.0,0.0,0.0,0.0,0.0,0.0,0.0,1.0]}"#);
        assert_eq!(serde_json::from_str::<LiftingTensor>(&s).unwrap(), t);
    }

    #[test]
    fn product_lift_is_sigma_times_p() {
        let sigma = pv(&[0.2, 0.3, 0.5]);
        let p = pv(&[0.6, 0.4]);
        let out = LiftingTensor::product(&sigma, 2).lift(&p).unwrap();
        let expected = embed_diagonal(&sigma).kron(&embed_diagonal(&p));
        assert!(out.approx_eq(&expected, 1e-15));
        assert_eq!(out.dims(), &[3, 2]);
    }

    #[test]
    fn ohya_and_pure_lifts() {
        let p = pv(&[0.5, 0.3, 0.2]);
        let ohya = LiftingTensor::ohya(3).lift(&p).unwrap();
        let mut expected = vec![0.0; 9];
        for i in 0..3 {
            expected[i * 3 + i] = p.get(i);
        }
        assert_eq!(diag_of(&ohya), expected);

        let s = PointMap::new(vec![1, 1, 0], 2).unwrap();
        let pure = LiftingTensor::pure(&s).lift(&p).unwrap();
        let mut expected = vec![0.0; 6];
        for i in 0..3 {
            expected[s.apply(i) * 3 + i] += p.get(i);
        }
        assert_eq!(diag_of(&pure), expected);
        assert_eq!(pure.dims(), &[2, 3]);
    }

    #[test]
    fn nondemolition_cases() {
        assert!(LiftingTensor::product(&pv(&[0.3, 0.7]), 3).is_nondemolition());
        assert!(LiftingTensor::ohya(4).is_nondemolition());
        let n = 3;
        let forgetful = LiftingTensor::from_fn(n, n, |_, j, k| if j == k { 1.0 / n as f64 } else { 0.0 }).unwrap();
        assert!(!forgetful.is_nondemolition());
        let p = pv(&[0.7, 0.2, 0.1]);
        let marginal = forgetful.lift(&p).unwrap().reduce(&[1]).unwrap();
        assert!(!marginal.approx_eq(&embed_diagonal(&p), 1e-3));
    }

    #[test]
    fn nondemolition_for_one_state_does_not_imply_all() {
        // Both inputs are sent to the uniform marginal, so the uniform state
        // is preserved while point masses are not.
        let t = LiftingTensor::from_fn(2, 1, |_, _, _| 0.5).unwrap();
        assert!(t.is_nondemolition_for(&ProbabilityVector::uniform(2)).unwrap());
        assert!(!t.is_nondemolition_for(&pv(&[1.0, 0.0])).unwrap());
        assert!(!t.is_nondemolition());
    }

    #[test]
    fn nondemolition_marginal_is_exact() {
        let mut s = Sampler::new(31);
        for _ in 0..20 {
            let (n1, n2) = (s.range(1, 4), s.range(1, 4));
            let t = s.markovian_tensor(n1, n2);
            assert!(t.is_nondemolition());
            let p = s.probability_vector(n1);
            let reduced = t.lift(&p).unwrap().reduce(&[1]).unwrap();
            assert!(reduced.approx_eq(&embed_diagonal(&p), 1e-15));
        }
    }

    #[test]
    fn markovian_extraction() {
        let s = PointMap::new(vec![2, 0], 3).unwrap();
        let c = LiftingTensor::pure(&s).markov_conditional().unwrap();
        assert_eq!(c.rows(), vec![vec![0.0, 1.0], vec![0.0, 0.0], vec![1.0, 0.0]]);
        assert_eq!(LiftingTensor::ohya(2).markov_conditional().unwrap(), Conditional::identity(2));
        let q = pv(&[0.1, 0.9]);
        let c = LiftingTensor::product(&q, 3).markov_conditional().unwrap();
        for i in 0..3 {
            assert_eq!(c.get(0, i), 0.1);
            assert_eq!(c.get(1, i), 0.9);
        }
        let t = LiftingTensor::from_fn(2, 1, |_, _, _| 0.5).unwrap();
        assert!(!t.is_markovian());
    }

    #[test]
    fn markovian_roundtrip_random() {
        let mut s = Sampler::new(5);
        for _ in 0..10 {
            let c = s.conditional(3, 2);
            let back = LiftingTensor::markovian(&c).markov_conditional().unwrap();
            assert!(back.max_abs_diff(&c) == 0.0);
        }
    }

    #[test]
    fn lift_preserves_total_probability() {
        let mut s = Sampler::new(12);
        for _ in 0..50 {
            let (n1, n2) = (s.range(1, 4), s.range(1, 4));
            let t = s.lifting_tensor(n1, n2);
            let p = s.probability_vector(n1);
            let total: f64 = t.joint(&p).unwrap().iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lift_dimension_mismatch() {
        assert!(matches!(LiftingTensor::ohya(3).lift(&pv(&[0.5, 0.5])), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn gamma_identity_swap_and_permutation() {
        let sigma = pv(&[0.3, 0.7]);
        let p = pv(&[0.6, 0.4]);
        let id = gamma_lifting(&StochasticChannel::identity(4), &sigma, &p).unwrap();
        assert!(id.approx_eq(&embed_diagonal(&sigma).kron(&embed_diagonal(&p)), 1e-15));

        let swap = Permutation::new(vec![0, 2, 1, 3]).unwrap();
        let swapped = gamma_lifting(&permutation_channel(&swap), &sigma, &p).unwrap();
        assert!(swapped.approx_eq(&embed_diagonal(&p).kron(&embed_diagonal(&sigma)), 1e-15));

        let perm = Permutation::new(vec![3, 0, 1, 2]).unwrap();
        let out = gamma_lifting(&permutation_channel(&perm), &sigma, &p).unwrap();
        let product = [0.18, 0.12, 0.42, 0.28];
        let mut expected = [0.0; 4];
        for x in 0..4 {
            expected[perm.apply(x)] = product[x];
        }
        for (a, b) in diag_of(&out).iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn ohya_n_lift_is_cloning() {
        let p = pv(&[0.5, 0.3, 0.2]);
        let out = n_lift(&LiftingTensor::ohya(3), &p, 3).unwrap();
        let w = diag_of(&out);
        for (x, v) in w.iter().enumerate() {
            let digits = to_digits(x, &[3, 3, 3]);
            let expected = if digits.iter().all(|&d| d == digits[0]) { p.get(digits[0]) } else { 0.0 };
            assert_eq!(*v, expected);
        }
        for label in 1..=3 {
            assert_eq!(out.reduce(&[label]).unwrap().matrix().real_diagonal(), p.weights());
        }
    }

    #[test]
    fn product_n_lift_unrolled() {
        let sigma = pv(&[0.25, 0.75]);
        let p = pv(&[0.9, 0.1]);
        let out = n_lift(&LiftingTensor::product(&sigma, 2), &p, 3).unwrap();
        let s = embed_diagonal(&sigma);
        let expected = s.kron(&s).kron(&embed_diagonal(&p));
        assert!(out.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn n_lift_inserts_new_factor_next_to_system_one() {
        // Tag the two steps with distinct product tensors to see where each
        // new factor lands.
        let p = pv(&[0.6, 0.4]);
        let a = pv(&[1.0, 0.0]);
        let b = pv(&[0.0, 1.0]);
        let out = n_lift_steps(&[LiftingTensor::product(&a, 2), LiftingTensor::product(&b, 2)], &p).unwrap();
        let expected = embed_diagonal(&a).kron(&embed_diagonal(&b)).kron(&embed_diagonal(&p));
        assert!(out.approx_eq(&expected, 0.0));
    }

    #[test]
    fn pure_n_lift_matches_recurrence() {
        let p = pv(&[0.2, 0.3, 0.5]);
        let s2 = PointMap::new(vec![1, 0, 1], 2).unwrap();
        let s3 = PointMap::new(vec![2, 2, 0], 4).unwrap();
        let direct = pure_n_lift(&p, &[s2.clone(), s3.clone()]).unwrap();
        assert_eq!(direct.dims(), &[4, 2, 3]);
        let stepped = n_lift_steps(&[LiftingTensor::pure(&s3), LiftingTensor::pure(&s2)], &p).unwrap();
        assert!(direct.approx_eq(&stepped, 0.0));
        let w = diag_of(&direct);
        for i in 0..3 {
            assert_eq!(w[from_digits(&[s3.apply(i), s2.apply(i), i], &[4, 2, 3])], p.get(i));
        }
    }

    #[test]
    fn n_lift_rejects_bad_inputs() {
        let p = pv(&[0.5, 0.5]);
        assert!(n_lift(&LiftingTensor::ohya(2), &p, 1).is_err());
        let rect = LiftingTensor::product(&pv(&[0.2, 0.3, 0.5]), 2);
        assert!(n_lift(&rect, &p, 3).is_err());
    }

    #[test]
    fn markov_state_examples() {
        let spec = MarkovSpec::new(
            Conditional::from_rows(&[vec![0.9, 0.2], vec![0.1, 0.8]]).unwrap(),
            pv(&[0.6, 0.4]),
        )
        .unwrap();
        assert_eq!(diag_of(&markov_state(&spec, 1).unwrap()), vec![0.6, 0.4]);
        let w = diag_of(&markov_state(&spec, 3).unwrap());
        let c = [[0.9, 0.2], [0.1, 0.8]];
        let p = [0.6, 0.4];
        for i3 in 0..2 {
            for i2 in 0..2 {
                for i1 in 0..2 {
                    let expected = c[i3][i2] * c[i2][i1] * p[i1];
                    assert!((w[i3 * 4 + i2 * 2 + i1] - expected).abs() < 1e-15);
                }
            }
        }
        // 0.9 * 0.9 * 0.6
        assert!((w[0] - 0.486).abs() < 1e-15);

        let perfect = MarkovSpec::new(Conditional::identity(2), pv(&[0.6, 0.4])).unwrap();
        assert_eq!(diag_of(&markov_state(&perfect, 2).unwrap()), vec![0.6, 0.0, 0.0, 0.4]);
        assert!(markov_state(&spec, 0).is_err());
    }

    #[test]
    fn markov_reduction_drops_last_party() {
        let mut s = Sampler::new(77);
        for n in 1..4 {
            let spec = s.markov_spec(n);
            for parties in 2..5 {
                let full = markov_state(&spec, parties).unwrap();
                let keep: Vec<usize> = (1..parties).collect();
                let reduced = full.reduce(&keep).unwrap();
                assert!(reduced.approx_eq(&markov_state(&spec, parties - 1).unwrap(), 1e-14));
            }
        }
    }

    #[test]
    fn markov_spec_json_and_mismatch() {
        let s = r#"{"conditional":[[0.9,0.2],[0.1,0.8]],"initial":[0.6,0.4]}"#;
        let spec: MarkovSpec = serde_json::from_str(s).unwrap();
        assert_eq!(serde_json::to_string(&spec).unwrap(), s);
        assert!(serde_json::from_str::<MarkovSpec>(r#"{"conditional":[[1.0]],"initial":[0.5,0.5]}"#).is_err());
    }

    #[test]
    fn transition_expectation_identity_observables() {
        let mut s = Sampler::new(3);
        let spec = s.markov_spec(3);
        let ones = vec![vec![1.0; 3]; 4];
        let check = verify_transition_expectation(&spec, &ones, 1e-12).unwrap();
        assert!((check.lhs - 1.0).abs() < 1e-14 && (check.rhs - 1.0).abs() < 1e-14);
        assert_eq!(transition_expectation(spec.conditional(), &[1.0; 3], &[1.0; 3]).unwrap(), vec![1.0; 3]);
    }

    /// Brute-force chain contraction over all index tuples.
    fn chain_oracle(c: &[Vec<f64>], p: &[f64], obs: &[Vec<f64>]) -> f64 {
        let n = p.len();
        let parties = obs.len();
        let mut total = 0.0;
        for x in 0..n.pow(parties as u32) {
            let idx = to_digits(x, &vec![n; parties]);
            let mut w = p[idx[parties - 1]] * obs[parties - 1][idx[parties - 1]];
            for k in (0..parties - 1).rev() {
                w *= c[idx[k]][idx[k + 1]] * obs[k][idx[k]];
            }
            total += w;
        }
        total
    }

    #[test]
    fn transition_expectation_matches_oracle() {
        let mut s = Sampler::new(44);
        for _ in 0..30 {
            let n = s.range(1, 3);
            let parties = s.range(2, 4);
            let spec = s.markov_spec(n);
            let obs: Vec<Vec<f64>> = (0..parties).map(|_| s.diagonal_observable(n)).collect();
            let check = verify_transition_expectation(&spec, &obs, 1e-12).unwrap();
            assert!(check.holds, "{check:?}");
            let oracle = chain_oracle(&spec.conditional().rows(), spec.initial().weights(), &obs);
            assert!((oracle - check.lhs).abs() < 1e-12);
        }
    }

    #[test]
    fn separable_state_cases() {
        let p = pv(&[0.5, 0.3, 0.2]);
        let id = separable_n_state(&p, &vec![DiagonalUnitMap::identity(3); 3]).unwrap();
        assert!(id.approx_eq(&n_lift(&LiftingTensor::ohya(3), &p, 3).unwrap(), 0.0));

        let perm = Permutation::cycle(3, 1);
        let permuted =
            separable_n_state(&p, &[DiagonalUnitMap::permutation(&perm), DiagonalUnitMap::identity(3)]).unwrap();
        let mut expected = vec![0.0; 9];
        for i in 0..3 {
            expected[perm.apply(i) * 3 + i] = p.get(i);
        }
        assert_eq!(diag_of(&permuted), expected);

        let mixed =
            separable_n_state(&p, &[DiagonalUnitMap::depolarizing(3), DiagonalUnitMap::identity(3)]).unwrap();
        assert!(is_psd(mixed.matrix(), 1e-9).unwrap().psd);
        let expected = DensityOperator::maximally_mixed(3).kron(&embed_diagonal(&p));
        assert!(mixed.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn separable_state_rejects_non_positive_image() {
        let x = ComplexMatrix::from_real_rows(&[vec![0.5, 1.0], vec![1.0, 0.5]]).unwrap();
        let bad = DiagonalUnitMap::new(vec![x, ComplexMatrix::unit(2, 0, 0)]).unwrap();
        let err = separable_n_state(&pv(&[0.5, 0.5]), &[DiagonalUnitMap::identity(2), bad]).unwrap_err();
        assert!(matches!(err, Error::MapNotPositive { index: 1, .. }));
    }
}
