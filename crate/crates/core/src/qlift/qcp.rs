//! Quantum conditional probability operators and the liftings built from
//! them.
//!
//! Compound spaces are written `H₂ ⊗ H₁` with `H₂` in the first (leftmost)
//! slot. The marginal identities below therefore trace the first slot
//! (system label 2) to return to `H₁`.

use crate::clift::Conditional;
use crate::error::{Error, Result};
use crate::matcore::{eigh, herm_inv_sqrt, herm_sqrt, is_psd, ComplexMatrix, DensityOperator, FactoredOperator};
use crate::tol;

use super::maps::LinearMap;

/// `π = Σ e_ij ⊗ Λ(e_ij)` for a unital CP map `Λ`, dims `[d, d]`.
#[derive(Clone, Debug, PartialEq)]
pub struct QcpOperator {
    op: FactoredOperator,
    channel: LinearMap,
}

impl QcpOperator {
    /// Fails with `NotUnital` or `NotCp` when `Λ` is not a unital CP map.
    pub fn from_channel(channel: &LinearMap) -> Result<Self> {
        let defect = channel.unitality_defect();
        if defect > tol::MAP {
            return Err(Error::NotUnital { deviation: defect });
        }
        let op = channel.choi_unnormalized();
        let report = is_psd(op.matrix(), tol::PSD)?;
        if !report.psd {
            return Err(Error::NotCp { min_eigenvalue: report.min_eigenvalue });
        }
        Ok(Self { op, channel: channel.clone() })
    }

    /// Classical QCP of a conditional table: `Λ(e_ii) = Σ_j p_{i|j} e_jj`,
    /// off-diagonal units sent to zero, so `π = Σ_ij p_{i|j} e_ii ⊗ e_jj`.
    pub fn from_conditional(c: &Conditional) -> Result<Self> {
        if c.n_in() != c.n_out() {
            return Err(Error::DimensionMismatch(format!("classical QCP needs a square table, got {}x{}", c.n_out(), c.n_in())));
        }
        let d = c.n_in();
        let units = (0..d * d)
            .map(|x| {
                let (i, j) = (x / d, x % d);
                if i == j {
                    ComplexMatrix::from_real_diagonal(&(0..d).map(|k| c.get(i, k)).collect::<Vec<_>>())
                } else {
                    ComplexMatrix::zeros(d, d)
                }
            })
            .collect();
        Self::from_channel(&LinearMap::from_units(d, units)?)
    }

    pub fn operator(&self) -> &FactoredOperator {
        &self.op
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn channel(&self) -> &LinearMap {
        &self.channel
    }

    pub fn d(&self) -> usize {
        self.channel.d()
    }
}

fn check_state(rho: &DensityOperator, d: usize) -> Result<()> {
    if rho.dims() != [d] {
        return Err(Error::DimensionMismatch(format!("expected a single {d}-dimensional state, got dims {:?}", rho.dims())));
    }
    Ok(())
}

/// `ω ⊗ ρ`, dims `[d₂, d₁]`.
pub fn product_lifting(omega: &DensityOperator, rho: &DensityOperator) -> DensityOperator {
    omega.kron(rho)
}

/// `Tr_first[U (ω ⊗ ρ) U*]`.
pub fn reduced_dynamics(u: &ComplexMatrix, omega: &DensityOperator, rho: &DensityOperator) -> Result<DensityOperator> {
    let joint = product_lifting(omega, rho);
    let evolved = u.conjugate(joint.matrix())?;
    let op = FactoredOperator::new(evolved, joint.dims().to_vec())?;
    let n = op.num_factors();
    let keep: Vec<usize> = (1..n).filter(|&l| l <= rho.dims().len()).collect();
    DensityOperator::new(op.partial_trace(&keep)?)
}

/// `(𝕀 ⊗ ρ^{1/2}) π (𝕀 ⊗ ρ^{1/2})`.
pub fn nonlinear_lift(pi: &QcpOperator, rho: &DensityOperator) -> Result<DensityOperator> {
    let d = pi.d();
    check_state(rho, d)?;
    let side = ComplexMatrix::identity(d).kron(&herm_sqrt(rho.matrix())?);
    let out = side.conjugate(pi.matrix())?;
    Ok(DensityOperator::assume_valid(out, vec![d, d]))
}

/// `Σ_k p_k E_k ⊗ E_k` over the spectral decomposition `ρ = Σ p_k E_k`
/// returned by the eigensolver. For degenerate `ρ` the result depends on
/// the eigenbasis chosen inside each eigenspace.
pub fn ohya_lift(rho: &DensityOperator) -> Result<DensityOperator> {
    ohya_n_lift(rho, 2)
}

/// `Σ_k p_k E_k^{⊗N}`.
pub fn ohya_n_lift(rho: &DensityOperator, parties: usize) -> Result<DensityOperator> {
    if parties == 0 {
        return Err(Error::DimensionMismatch("need at least one party".into()));
    }
    let d = rho.dim();
    check_state(rho, d)?;
    let eig = eigh(rho.matrix())?;
    let total = d.pow(parties as u32);
    let mut acc = ComplexMatrix::zeros(total, total);
    for (k, &p) in eig.values.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        let e = eig.projector(k);
        let term = crate::matcore::kron_all(std::iter::repeat_n(&e, parties));
        acc = &acc + &term.scale_real(p);
    }
    Ok(DensityOperator::assume_valid(acc, vec![d; parties]))
}

/// `π₁ ∘ π₂ = (𝕀 ⊗ π₁^{1/2})(π₂ ⊗ 𝕀)(𝕀 ⊗ π₁^{1/2})`, dims `[d, d, d]`.
pub fn compose_qcp(pi1: &QcpOperator, pi2: &QcpOperator) -> Result<FactoredOperator> {
    n_compose_qcp(&[pi1.clone(), pi2.clone()])
}

/// `π₁ ∘ … ∘ π_{N−1}` on `N` factors by the recurrence
/// `(𝕀 ⊗ … ⊗ π₁^{1/2})(π₂ ∘ … ∘ π_{N−1} ⊗ 𝕀)(𝕀 ⊗ … ⊗ π₁^{1/2})`.
/// A single operator is returned unchanged.
pub fn n_compose_qcp(pis: &[QcpOperator]) -> Result<FactoredOperator> {
    let first = pis.first().ok_or_else(|| Error::DimensionMismatch("need at least one QCP operator".into()))?;
    let d = first.d();
    if let Some(p) = pis.iter().find(|p| p.d() != d) {
        return Err(Error::DimensionMismatch(format!("QCP dimensions {} and {d} differ", p.d())));
    }
    // Build from the innermost composite outwards.
    let mut acc = pis.last().expect("nonempty").matrix().clone();
    for (n, pi) in pis.iter().rev().skip(1).enumerate() {
        let left = d.pow(n as u32 + 1);
        let side = ComplexMatrix::identity(left).kron(&herm_sqrt(pi.matrix())?);
        acc = side.conjugate(&acc.kron(&ComplexMatrix::identity(d)))?;
    }
    FactoredOperator::new(acc, vec![d; pis.len() + 1])
}

/// `(𝕀 ⊗ … ⊗ ρ^{1/2})(π ∘ … ∘ π)(𝕀 ⊗ … ⊗ ρ^{1/2})` with `N − 1` copies of `π`.
pub fn n_nonlinear_lift(pi: &QcpOperator, rho: &DensityOperator, parties: usize) -> Result<DensityOperator> {
    if parties < 2 {
        return Err(Error::DimensionMismatch(format!("an N-lift needs N >= 2, got {parties}")));
    }
    let d = pi.d();
    check_state(rho, d)?;
    let chain = n_compose_qcp(&vec![pi.clone(); parties - 1])?;
    let side = ComplexMatrix::identity(d.pow(parties as u32 - 1)).kron(&herm_sqrt(rho.matrix())?);
    let out = side.conjugate(chain.matrix())?;
    Ok(DensityOperator::assume_valid(out, vec![d; parties]))
}

/// Recovers `Λ = ρ^{-1/2} φ ρ^{-1/2}` from a compound state
/// `θ = Σ e_ij ⊗ φ(e_ij)` whose first-slot trace is `ρ`.
pub fn channel_from_compound(theta: &DensityOperator, rho: &DensityOperator) -> Result<LinearMap> {
    let d = rho.dim();
    check_state(rho, d)?;
    if theta.dims() != [d, d] {
        return Err(Error::DimensionMismatch(format!("compound dims {:?} do not match [{d}, {d}]", theta.dims())));
    }
    let marginal = theta.reduce(&[1])?;
    let deviation = marginal.matrix().max_abs_diff(rho.matrix());
    if deviation > tol::MAP {
        return Err(Error::NotCompatible { deviation });
    }
    let w = herm_inv_sqrt(rho.matrix())?;
    let m = theta.matrix();
    let units = (0..d * d)
        .map(|x| {
            let (i, j) = (x / d, x % d);
            let phi = ComplexMatrix::from_fn(d, d, |r, c| m.get(i * d + r, j * d + c));
            w.conjugate(&phi).expect("square")
        })
        .collect();
    LinearMap::from_units(d, units)
}
