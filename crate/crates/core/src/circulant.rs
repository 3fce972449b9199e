//! Circulant states on `C^d ⊗ C^d`.
//!
//! The product basis splits into the cyclic subspaces
//! `Σ_α = span{e_i ⊗ e_{i+α}}` (indices mod `d`). A circulant state is
//! block diagonal in this splitting: the block `a^(α)` sits at rows
//! `(i, i+α)` and columns `(j, j+α)`. Its partial transpose is block
//! diagonal in the permuted splitting `Σ̃_γ = span{e_i ⊗ e_{γ−i}}` with
//! blocks `ã^(γ) = Σ_β a^(γ+β) ∘ (Π S^β)`.

use std::f64::consts::PI as PI_F64;

use serde::{Deserialize, Serialize};

use crate::classical::ProbabilityVector;
use crate::error::{Error, Result};
use crate::matcore::{eigh, is_psd, ComplexMatrix, DensityOperator, C64, ONE, ZERO};
use crate::tol;

/// Pair indices `(i, i+α mod d)` of each `Σ_α`, `α = 0..d`.
pub fn circulant_subspaces(d: usize) -> Vec<Vec<(usize, usize)>> {
    (0..d).map(|a| (0..d).map(|i| (i, (i + a) % d)).collect()).collect()
}

fn pair(d: usize, i: usize, j: usize) -> usize {
    i * d + j
}

/// `λ^k` with `λ = e^{2πi/d}`, reducing `k` mod `d` first.
fn root_of_unity(d: usize, k: i64) -> C64 {
    let k = k.rem_euclid(d as i64) as f64;
    C64::from_polar(1.0, 2.0 * PI_F64 * k / d as f64)
}

/// Shift `S e_j = e_{j+1}`.
pub fn shift_matrix(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |i, j| if i == (j + 1) % d { ONE } else { ZERO })
}

/// `Π_ij = δ_{i π(j)}` with `π(0) = 0`, `π(i) = d − i`.
pub fn reflection_matrix(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |i, j| if i == (d - j) % d { ONE } else { ZERO })
}

/// Blocks `a^(0..d)` of a circulant state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecWire", into = "SpecWire")]
pub struct CirculantSpec {
    blocks: Vec<ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
struct SpecWire {
    d: usize,
    blocks: Vec<ComplexMatrix>,
}

impl TryFrom<SpecWire> for CirculantSpec {
    type Error = Error;

    fn try_from(w: SpecWire) -> Result<Self> {
        if w.blocks.len() != w.d {
            return Err(Error::BadShape { expected: w.d, found: w.blocks.len() });
        }
        Self::new(w.blocks)
    }
}

impl From<CirculantSpec> for SpecWire {
    fn from(s: CirculantSpec) -> Self {
        Self { d: s.blocks.len(), blocks: s.blocks }
    }
}

fn check_blocks(blocks: &[ComplexMatrix]) -> Result<usize> {
    let d = blocks.len();
    if d == 0 {
        return Err(Error::DimensionMismatch("need at least one block".into()));
    }
    if let Some(b) = blocks.iter().find(|b| b.rows() != d || b.cols() != d) {
        return Err(Error::DimensionMismatch(format!("blocks must be {d}x{d}, got {}x{}", b.rows(), b.cols())));
    }
    Ok(d)
}

fn check_psd_blocks(blocks: &[ComplexMatrix]) -> Result<()> {
    for (block, b) in blocks.iter().enumerate() {
        let report = is_psd(b, tol::PSD)?;
        if !report.psd {
            return Err(Error::BlockNotPsd { block, min_eigenvalue: report.min_eigenvalue });
        }
    }
    Ok(())
}

impl CirculantSpec {
    /// Requires `d` PSD `d x d` blocks with total trace one. Zero blocks are
    /// allowed.
    pub fn new(blocks: Vec<ComplexMatrix>) -> Result<Self> {
        check_blocks(&blocks)?;
        check_psd_blocks(&blocks)?;
        let trace: C64 = blocks.iter().map(ComplexMatrix::trace).sum();
        if (trace.re - 1.0).abs() > tol::TRACE || trace.im.abs() > tol::TRACE {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        Ok(Self { blocks })
    }

    pub fn d(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    /// Classical diagonal state with joint weights `w[i][j]`.
    pub fn diagonal(w: &[Vec<f64>]) -> Result<Self> {
        let d = w.len();
        let blocks = (0..d)
            .map(|a| ComplexMatrix::from_real_diagonal(&(0..d).map(|i| w[i][(i + a) % d]).collect::<Vec<_>>()))
            .collect();
        Self::new(blocks)
    }
}

fn assemble(blocks: &[ComplexMatrix], col_of: impl Fn(usize, usize) -> usize) -> ComplexMatrix {
    let d = blocks.len();
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    for (a, b) in blocks.iter().enumerate() {
        for i in 0..d {
            for j in 0..d {
                m.set(pair(d, i, col_of(a, i)), pair(d, j, col_of(a, j)), b.get(i, j));
            }
        }
    }
    m
}

/// `ρ = Σ_α Σ_ij a^(α)_ij e_ij ⊗ S^α e_ij S^{α*}`, dims `[d, d]`.
pub fn build_circulant(spec: &CirculantSpec) -> DensityOperator {
    let d = spec.d();
    DensityOperator::assume_valid(assemble(&spec.blocks, |a, i| (i + a) % d), vec![d, d])
}

/// Blocks `ã^(γ)` of the partial transpose on the second factor, computed
/// with the Hadamard-product formula.
pub fn circulant_partial_transpose(spec: &CirculantSpec) -> Vec<ComplexMatrix> {
    let d = spec.d();
    let pi = reflection_matrix(d);
    let s = shift_matrix(d);
    let mut masks = Vec::with_capacity(d);
    let mut s_beta = ComplexMatrix::identity(d);
    for _ in 0..d {
        masks.push(&pi * &s_beta);
        s_beta = &s * &s_beta;
    }
    (0..d)
        .map(|g| {
            (0..d).fold(ComplexMatrix::zeros(d, d), |acc, b| {
                let term = spec.blocks[(g + b) % d].hadamard(&masks[b]).expect("equal shapes");
                &acc + &term
            })
        })
        .collect()
}

/// Places `ã^(γ)` at rows `(i, γ−i)`, columns `(j, γ−j)`.
pub fn reconstruct_partial_transpose(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let d = blocks.len();
    assemble(blocks, |g, i| (g + d - i) % d)
}

/// Block-wise PPT test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PptReport {
    pub ppt: bool,
    pub block_min_eigenvalues: Vec<f64>,
}

/// PPT iff every `ã^(γ)` is PSD. The tolerance is relative to the largest
/// block eigenvalue magnitude, which is the spectral norm of `ρ^Γ`, so the
/// verdict matches [`crate::matcore::is_psd`] on the full partial transpose.
pub fn is_ppt_circulant(spec: &CirculantSpec) -> Result<PptReport> {
    let mut mins = Vec::with_capacity(spec.d());
    let mut norm: f64 = 0.0;
    for b in circulant_partial_transpose(spec) {
        let eig = eigh(&b)?;
        mins.push(eig.min());
        norm = norm.max(eig.norm());
    }
    let worst = mins.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(PptReport { ppt: worst >= -tol::PSD * norm, block_min_eigenvalues: mins })
}

fn check_state(rho: &DensityOperator, d: usize) -> Result<()> {
    if rho.dims() != [d] {
        return Err(Error::DimensionMismatch(format!("expected a single {d}-dimensional state, got dims {:?}", rho.dims())));
    }
    Ok(())
}

/// Spec with blocks `ρ_αα c^(α)`.
pub fn circulant_lift_spec(cs: &[ComplexMatrix], rho: &DensityOperator) -> Result<CirculantSpec> {
    let d = check_blocks(cs)?;
    check_state(rho, d)?;
    check_psd_blocks(cs)?;
    if let Some(c) = cs.iter().find(|c| (c.trace() - ONE).norm() > tol::TRACE) {
        return Err(Error::TraceNotOne { trace: c.trace().re });
    }
    let p = rho.matrix().real_diagonal();
    let blocks = cs.iter().zip(&p).map(|(c, &w)| c.scale_real(w)).collect();
    Ok(CirculantSpec { blocks })
}

/// `E^#(ρ) = Σ_α ρ_αα Σ_ij c^(α)_ij e_ij ⊗ S^α e_ij S^{α*}`. Depends on `ρ`
/// only through its diagonal.
pub fn circulant_lift(cs: &[ComplexMatrix], rho: &DensityOperator) -> Result<DensityOperator> {
    Ok(build_circulant(&circulant_lift_spec(cs, rho)?))
}

/// `V e_α = Σ_j c^(α)_j e_j ⊗ e_{j+α}`, a `d² x d` isometry.
pub fn circulant_isometry(cvecs: &[Vec<C64>]) -> Result<ComplexMatrix> {
    let d = cvecs.len();
    for (index, v) in cvecs.iter().enumerate() {
        if v.len() != d {
            return Err(Error::DimensionMismatch(format!("vector {index} has length {}, expected {d}", v.len())));
        }
        let norm_sqr: f64 = v.iter().map(C64::norm_sqr).sum();
        if (norm_sqr - 1.0).abs() > tol::TRACE {
            return Err(Error::NotNormalized { index, norm_sqr });
        }
    }
    let mut v = ComplexMatrix::zeros(d * d, d);
    for (a, c) in cvecs.iter().enumerate() {
        for (j, &z) in c.iter().enumerate() {
            v.set(pair(d, j, (j + a) % d), a, z);
        }
    }
    Ok(v)
}

/// `V D(ρ) V*` with `D` the diagonal projection.
pub fn circulant_lift_isometry(cvecs: &[Vec<C64>], rho: &DensityOperator) -> Result<DensityOperator> {
    let v = circulant_isometry(cvecs)?;
    let d = cvecs.len();
    check_state(rho, d)?;
    let diag = ComplexMatrix::from_diagonal(&rho.matrix().diagonal());
    Ok(DensityOperator::assume_valid(v.conjugate(&diag)?, vec![d, d]))
}

fn check_index(m: usize, n: usize, d: usize) -> Result<()> {
    if m >= d || n >= d {
        return Err(Error::IndexOutOfRange(format!("Bell index ({m}, {n}) outside 0..{d}")));
    }
    Ok(())
}

/// `U_mn e_k = λ^{mk} e_{k+n}`.
pub fn bell_unitary(m: usize, n: usize, d: usize) -> Result<ComplexMatrix> {
    check_index(m, n, d)?;
    Ok(ComplexMatrix::from_fn(d, d, |r, k| if r == (k + n) % d { root_of_unity(d, (m * k) as i64) } else { ZERO }))
}

/// `(𝕀 ⊗ U_mn) ψ⁺` with `ψ⁺ = d^{-1/2} Σ_k e_k ⊗ e_k`.
pub fn bell_vector(m: usize, n: usize, d: usize) -> Result<Vec<C64>> {
    check_index(m, n, d)?;
    let mut v = vec![ZERO; d * d];
    let s = 1.0 / (d as f64).sqrt();
    for k in 0..d {
        v[pair(d, k, (k + n) % d)] = root_of_unity(d, (m * k) as i64) * s;
    }
    Ok(v)
}

/// `P_mn = (𝕀 ⊗ U_mn) P⁺_d (𝕀 ⊗ U_mn†)`.
pub fn bell_state(m: usize, n: usize, d: usize) -> Result<DensityOperator> {
    let v = bell_vector(m, n, d)?;
    Ok(DensityOperator::assume_valid(ComplexMatrix::outer(&v, &v), vec![d, d]))
}

/// All projectors, indexed `[m][n]`.
pub fn bell_projections(d: usize) -> Vec<Vec<DensityOperator>> {
    (0..d).map(|m| (0..d).map(|n| bell_state(m, n, d).expect("in range")).collect()).collect()
}

/// Weights `p_mn` of a Bell-diagonal state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BellWire", into = "BellWire")]
pub struct BellSpectrum {
    p: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct BellWire {
    d: usize,
    p: Vec<Vec<f64>>,
}

impl TryFrom<BellWire> for BellSpectrum {
    type Error = Error;

    fn try_from(w: BellWire) -> Result<Self> {
        if w.p.len() != w.d {
            return Err(Error::BadShape { expected: w.d, found: w.p.len() });
        }
        Self::new(w.p)
    }
}

impl From<BellSpectrum> for BellWire {
    fn from(s: BellSpectrum) -> Self {
        Self { d: s.p.len(), p: s.p }
    }
}

impl BellSpectrum {
    pub fn new(p: Vec<Vec<f64>>) -> Result<Self> {
        let d = p.len();
        if d == 0 || p.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch("Bell spectrum must be a nonempty square table".into()));
        }
        let flat: Vec<f64> = p.concat();
        ProbabilityVector::new(flat)?;
        Ok(Self { p })
    }

    pub fn d(&self) -> usize {
        self.p.len()
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.p
    }

    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.p[m][n]
    }

    pub fn max_abs_diff(&self, other: &[Vec<f64>]) -> f64 {
        self.p.iter().flatten().zip(other.iter().flatten()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// `Σ_mn p_mn P_mn`.
pub fn bell_diagonal_state(spectrum: &BellSpectrum) -> DensityOperator {
    let d = spectrum.d();
    let mut acc = ComplexMatrix::zeros(d * d, d * d);
    for (m, row) in bell_projections(d).iter().enumerate() {
        for (n, proj) in row.iter().enumerate() {
            acc = &acc + &proj.matrix().scale_real(spectrum.get(m, n));
        }
    }
    DensityOperator::assume_valid(acc, vec![d, d])
}

/// `Tr(P_mn E)` for every Bell projector.
pub fn bell_projection_weights(state: &DensityOperator) -> Result<Vec<Vec<f64>>> {
    let dims = state.dims();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(Error::DimensionMismatch(format!("expected a [d, d] state, got dims {dims:?}")));
    }
    let d = dims[0];
    let mut out = vec![vec![0.0; d]; d];
    for (m, row) in out.iter_mut().enumerate() {
        for (n, w) in row.iter_mut().enumerate() {
            let v = bell_vector(m, n, d)?;
            let mv = state.matrix().apply(&v)?;
            *w = v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum::<C64>().re;
        }
    }
    Ok(out)
}

/// `c_kl = (1/d) Σ_m p_m λ^{m(k−l)}`.
pub fn fourier_circulant(p: &ProbabilityVector) -> ComplexMatrix {
    let d = p.len();
    ComplexMatrix::from_fn(d, d, |k, l| {
        let s: C64 = (0..d).map(|m| root_of_unity(d, (m * k) as i64 - (m * l) as i64) * p.get(m)).sum();
        s / d as f64
    })
}

/// Circulant lift with every block equal to [`fourier_circulant`]`(p)`.
/// Returns the state and its Bell spectrum, read off by projecting onto
/// each `P_mn`; the spectrum equals `p_m ρ_nn`.
pub fn bell_diagonal_lift(p: &ProbabilityVector, rho: &DensityOperator) -> Result<(DensityOperator, BellSpectrum)> {
    let c = fourier_circulant(p);
    let state = circulant_lift(&vec![c; p.len()], rho)?;
    let mut weights = bell_projection_weights(&state)?;
    for w in weights.iter_mut().flatten() {
        *w = w.max(0.0);
    }
    Ok((state, BellSpectrum { p: weights }))
}
