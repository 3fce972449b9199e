//! Linear maps on `d x d` matrices, stored by their action on matrix units.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{is_psd, ComplexMatrix, DensityOperator, FactoredOperator, PsdReport, ONE, ZERO};
use crate::tol;

/// A linear map `Λ` on `d x d` matrices given by the images `Λ(e_ij)` in
/// `(i, j)` lexicographic order. The images are `d x d` as well.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapWire", into = "MapWire")]
pub struct LinearMap {
    d: usize,
    units: Vec<ComplexMatrix>,
}

/// JSON name used by the command line and data files.
pub type CpMap = LinearMap;

#[derive(Serialize, Deserialize)]
struct MapWire {
    d: usize,
    units: Vec<ComplexMatrix>,
}

impl TryFrom<MapWire> for LinearMap {
    type Error = Error;

    fn try_from(w: MapWire) -> Result<Self> {
        Self::from_units(w.d, w.units)
    }
}

impl From<LinearMap> for MapWire {
    fn from(m: LinearMap) -> Self {
        Self { d: m.d, units: m.units }
    }
}

impl LinearMap {
    pub fn from_units(d: usize, units: Vec<ComplexMatrix>) -> Result<Self> {
        if d == 0 {
            return Err(Error::DimensionMismatch("map dimension must be positive".into()));
        }
        if units.len() != d * d {
            return Err(Error::BadShape { expected: d * d, found: units.len() });
        }
        if units.iter().any(|u| u.rows() != d || u.cols() != d) {
            return Err(Error::DimensionMismatch(format!("every unit image must be {d}x{d}")));
        }
        Ok(Self { d, units })
    }

    /// Tabulates `f` on the matrix units.
    pub fn from_fn(d: usize, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        let units = (0..d * d).map(|x| f(&ComplexMatrix::unit(d, x / d, x % d))).collect();
        Self::from_units(d, units)
    }

    /// `x ↦ Σ_k K_k x K_k†`
    pub fn from_kraus(ks: &[ComplexMatrix]) -> Result<Self> {
        let d = ks.first().map_or(0, ComplexMatrix::rows);
        if ks.iter().any(|k| k.rows() != d || k.cols() != d) {
            return Err(Error::DimensionMismatch("Kraus operators must be square of equal size".into()));
        }
        Self::from_fn(d, |x| {
            ks.iter().fold(ComplexMatrix::zeros(d, d), |acc, k| &acc + &k.conjugate(x).expect("square"))
        })
    }

    pub fn identity(d: usize) -> Self {
        Self::from_fn(d, Clone::clone).expect("positive dimension")
    }

    pub fn transpose(d: usize) -> Self {
        Self::from_fn(d, ComplexMatrix::transpose).expect("positive dimension")
    }

    /// `a ↦ U a U*`
    pub fn unitary(u: &ComplexMatrix) -> Result<Self> {
        Self::from_kraus(std::slice::from_ref(u))
    }

    /// `a ↦ Σ_i Tr(a e_ii) e_ii`
    pub fn diagonal_projection(d: usize) -> Self {
        Self::from_fn(d, |a| ComplexMatrix::from_diagonal(&a.diagonal())).expect("positive dimension")
    }

    /// `x ↦ 𝕀 · Tr(ωᵀ x)`
    pub fn product_type(omega: &ComplexMatrix) -> Result<Self> {
        let d = omega.rows();
        let wt = omega.transpose();
        Self::from_fn(d, |x| ComplexMatrix::identity(d).scale((&wt * x).trace()))
    }

    /// Robertson map on `4 x 4` matrices.
    pub fn robertson() -> Self {
        Self::from_fn(4, |x| robertson_map(x).expect("4x4 unit")).expect("positive dimension")
    }

    /// `SWAP ∘ Λ ∘ SWAP` for a map on a two-factor space `d = n²`.
    pub fn swap_conjugate(&self) -> Result<Self> {
        let n = (self.d as f64).sqrt().round() as usize;
        if n * n != self.d {
            return Err(Error::DimensionMismatch(format!("{} is not a square dimension", self.d)));
        }
        let swap = swap_matrix(n);
        Self::from_fn(self.d, |x| {
            let inner = self.apply(&swap.conjugate(x).expect("square")).expect("matching size");
            swap.conjugate(&inner).expect("square")
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn units(&self) -> &[ComplexMatrix] {
        &self.units
    }

    /// `Λ(e_ij)`
    pub fn unit_image(&self, i: usize, j: usize) -> &ComplexMatrix {
        &self.units[i * self.d + j]
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.d || x.cols() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "map acts on {0}x{0} matrices, got {1}x{2}",
                self.d,
                x.rows(),
                x.cols()
            )));
        }
        let mut acc = ComplexMatrix::zeros(self.d, self.d);
        for (idx, u) in self.units.iter().enumerate() {
            let c = x.data()[idx];
            if c != ZERO {
                acc = &acc + &u.scale(c);
            }
        }
        Ok(acc)
    }

    /// Dual map defined by `Tr(Λ(a) ρ) = Tr(a Λ^#(ρ))`, so that
    /// `Λ^#(ρ)_ji = Tr(Λ(e_ij) ρ)`.
    pub fn adjoint_apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.rows() != self.d || rho.cols() != self.d {
            return Err(Error::DimensionMismatch(format!("expected a {0}x{0} matrix", self.d)));
        }
        let d = self.d;
        Ok(ComplexMatrix::from_fn(d, d, |j, i| (self.unit_image(i, j) * rho).trace()))
    }

    /// `Σ e_ij ⊗ Λ(e_ij)`, dims `[d, d]`.
    pub fn choi_unnormalized(&self) -> FactoredOperator {
        let d = self.d;
        let mut m = ComplexMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                let u = self.unit_image(i, j);
                for r in 0..d {
                    for c in 0..d {
                        m.set(i * d + r, j * d + c, u.get(r, c));
                    }
                }
            }
        }
        FactoredOperator::from_parts(m, vec![d, d])
    }

    /// `(id ⊗ Λ) P⁺_d = (1/d) Σ e_ij ⊗ Λ(e_ij)`.
    pub fn choi_matrix(&self) -> FactoredOperator {
        let c = self.choi_unnormalized();
        FactoredOperator::from_parts(c.matrix().scale_real(1.0 / self.d as f64), vec![self.d, self.d])
    }

    /// Positivity of the Choi matrix.
    pub fn cp_report(&self) -> Result<PsdReport> {
        is_psd(self.choi_unnormalized().matrix(), tol::PSD)
    }

    pub fn is_cp(&self) -> Result<bool> {
        Ok(self.cp_report()?.psd)
    }

    /// `max |Σ_i Λ(e_ii) − 𝕀|`
    pub fn unitality_defect(&self) -> f64 {
        let sum = (0..self.d).fold(ComplexMatrix::zeros(self.d, self.d), |acc, i| &acc + self.unit_image(i, i));
        sum.max_abs_diff(&ComplexMatrix::identity(self.d))
    }

    pub fn is_unital(&self, tol: f64) -> bool {
        self.unitality_defect() <= tol
    }

    /// `max |Tr Λ(e_ij) − δ_ij|`
    pub fn trace_preservation_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.d {
            for j in 0..self.d {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((self.unit_image(i, j).trace() - target).norm());
            }
        }
        worst
    }

    /// `max |Λ(e_ij)† − Λ(e_ji)|`
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.d {
            for j in 0..self.d {
                worst = worst.max(self.unit_image(i, j).adjoint().max_abs_diff(self.unit_image(j, i)));
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.d != other.d {
            return f64::INFINITY;
        }
        self.units.iter().zip(&other.units).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max)
    }
}

/// Swap of two `n`-dimensional factors.
pub fn swap_matrix(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n * n, n * n, |r, c| if r == (c % n) * n + c / n { ONE } else { ZERO })
}

fn block(x: &ComplexMatrix, i: usize, j: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |r, c| x.get(2 * i + r, 2 * j + c))
}

/// `R₂(X) = 𝕀₂ Tr X − X`
fn reduction(x: &ComplexMatrix) -> ComplexMatrix {
    &ComplexMatrix::identity(2).scale(x.trace()) - x
}

/// Robertson map. `X = Σ e_ij ⊗ X_ij` is split into `2 x 2` blocks indexed
/// by the first tensor factor and mapped to
/// `½ [[𝕀 Tr X₂₂, X₁₂ + R₂(X₂₁)], [X₂₁ + R₂(X₁₂), 𝕀 Tr X₁₁]]`.
pub fn robertson_map(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if x.rows() != 4 || x.cols() != 4 {
        return Err(Error::DimensionMismatch(format!("Robertson map acts on 4x4 matrices, got {}x{}", x.rows(), x.cols())));
    }
    let (x11, x12, x21, x22) = (block(x, 0, 0), block(x, 0, 1), block(x, 1, 0), block(x, 1, 1));
    let id = ComplexMatrix::identity(2);
    let blocks = [
        [id.scale(x22.trace()), &x12 + &reduction(&x21)],
        [&x21 + &reduction(&x12), id.scale(x11.trace())],
    ];
    Ok(ComplexMatrix::from_fn(4, 4, |r, c| blocks[r / 2][c / 2].get(r % 2, c % 2) * 0.5))
}

/// `φ(ρ) = Tr_first[ψ(ω ⊗ ρ)]`: lift by the product state with `ω` in the
/// first slot, apply `ψ`, trace the first slot.
pub fn lifting_assisted_map(psi: &LinearMap, omega: &DensityOperator) -> Result<LinearMap> {
    let dw = omega.dim();
    let d = psi.d() / dw;
    if d * dw != psi.d() || omega.dims().len() != 1 {
        return Err(Error::DimensionMismatch(format!("map on dimension {} cannot act on ω ⊗ ρ with dim ω = {dw}", psi.d())));
    }
    LinearMap::from_fn(d, |x| {
        let lifted = omega.matrix().kron(x);
        let out = psi.apply(&lifted).expect("matching size");
        FactoredOperator::from_parts(out, vec![dw, d]).partial_trace(&[1]).expect("valid label").into_matrix()
    })
}

/// Smallest eigenvalue of the normalized Choi matrix; negative iff `φ` is
/// not completely positive.
pub fn choi_min_eigenvalue(phi: &LinearMap) -> Result<f64> {
    crate::matcore::min_eigenvalue(phi.choi_matrix().matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::C64;
    use crate::random::Sampler;

    fn quarter_choi() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 2.0, 1.0, 0.0],
            vec![0.0, 1.0, 2.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
        ])
        .unwrap()
        .scale_real(0.25)
    }

    fn closed_form(rho: &ComplexMatrix) -> ComplexMatrix {
        let off = rho.get(0, 1) + rho.get(1, 0);
        ComplexMatrix::from_fn(2, 2, |r, c| match (r, c) {
            (0, 0) => rho.get(1, 1),
            (1, 1) => rho.get(0, 0),
            _ => off * 0.5,
        })
    }

    #[test]
    fn apply_matches_function() {
        let mut s = Sampler::new(1);
        let u = s.unitary(3);
        let m = LinearMap::unitary(&u).unwrap();
        let x = s.gaussian_matrix(3, 3);
        assert!(m.apply(&x).unwrap().approx_eq(&u.conjugate(&x).unwrap(), 1e-12));
    }

    #[test]
    fn json_roundtrip() {
        let m = LinearMap::transpose(2);
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.starts_with(r#"{"d":2,"units":[{"rows":2,"cols":2,"data":"#));
        assert_eq!(serde_json::from_str::<LinearMap>(&s).unwrap(), m);
        assert!(serde_json::from_str::<LinearMap>(r#"{"d":2,"units":[]}"#).is_err());
    }

    #[test]
    fn choi_of_identity_and_transpose() {
        let d = 3;
        let choi = LinearMap::identity(d).choi_matrix();
        let v: Vec<C64> = (0..d * d).map(|x| if x / d == x % d { C64::new(1.0 / (d as f64).sqrt(), 0.0) } else { ZERO }).collect();
        assert!(choi.matrix().approx_eq(&ComplexMatrix::outer(&v, &v), 1e-15));
        let t = LinearMap::transpose(2).choi_matrix();
        assert!(t.matrix().approx_eq(&swap_matrix(2).scale_real(0.5), 0.0));
        assert!((choi_min_eigenvalue(&LinearMap::transpose(2)).unwrap() + 0.5).abs() < 1e-14);
        assert!(!LinearMap::transpose(2).is_cp().unwrap());
    }

    #[test]
    fn adjoint_duality() {
        let mut s = Sampler::new(2);
        for d in 1..5 {
            let m = s.unital_cp_map(d, 2);
            let a = s.gaussian_matrix(d, d);
            let rho = s.density(d);
            let lhs = (&m.apply(&a).unwrap() * rho.matrix()).trace();
            let rhs = (&a * &m.adjoint_apply(rho.matrix()).unwrap()).trace();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn unital_kraus_maps() {
        let mut s = Sampler::new(3);
        let m = s.unital_cp_map(4, 3);
        assert!(m.is_unital(1e-12));
        assert!(m.is_cp().unwrap());
        assert!(m.hermiticity_defect() < 1e-12);
        assert!(LinearMap::diagonal_projection(3).is_unital(0.0));
        assert!(LinearMap::diagonal_projection(3).trace_preservation_defect() == 0.0);
    }

    #[test]
    fn robertson_unital_and_rejects_wrong_size() {
        let id = ComplexMatrix::identity(4);
        assert!(robertson_map(&id).unwrap().approx_eq(&id, 0.0));
        assert!(matches!(robertson_map(&ComplexMatrix::identity(3)), Err(Error::DimensionMismatch(_))));
        let r = LinearMap::robertson();
        assert!(r.trace_preservation_defect() < 1e-15);
        assert!(!r.is_cp().unwrap());
    }

    #[test]
    fn robertson_is_positive_on_random_states() {
        let mut s = Sampler::new(6);
        let r = LinearMap::robertson();
        for _ in 0..50 {
            let rho = s.density(4);
            let out = r.apply(rho.matrix()).unwrap();
            assert!(is_psd(&out, 1e-9).unwrap().psd);
        }
    }

    #[test]
    fn literal_slot_order_collapses_to_maximally_mixed() {
        // With ω in the block (first) slot, the traced diagonal blocks are
        // 𝕀 ω₂₂ and 𝕀 ω₁₁, so the assisted map is ρ ↦ 𝕀/2 Tr ρ.
        let mut s = Sampler::new(8);
        let omega = s.density(2);
        let phi = lifting_assisted_map(&LinearMap::robertson(), &omega).unwrap();
        let rho = s.density(2);
        let out = phi.apply(rho.matrix()).unwrap();
        assert!(out.approx_eq(&ComplexMatrix::identity(2).scale_real(0.5), 1e-14));
    }

    #[test]
    fn swapped_robertson_reproduces_closed_form() {
        let mut s = Sampler::new(9);
        let psi = LinearMap::robertson().swap_conjugate().unwrap();
        for _ in 0..20 {
            let omega = s.density(2);
            let rho = s.density(2);
            let phi = lifting_assisted_map(&psi, &omega).unwrap();
            let out = phi.apply(rho.matrix()).unwrap();
            assert!(out.approx_eq(&closed_form(rho.matrix()), 1e-14));
            assert!(phi.choi_matrix().matrix().approx_eq(&quarter_choi(), 1e-15));
        }
    }

    #[test]
    fn robertson_choi_spectrum() {
        let eig = crate::matcore::eigh(&quarter_choi()).unwrap();
        let expected = [-0.25, 0.25, 0.25, 0.75];
        for (a, b) in eig.values.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn assisted_identity_and_cp() {
        let mut s = Sampler::new(10);
        let omega = s.density(2);
        let phi = lifting_assisted_map(&LinearMap::identity(4), &omega).unwrap();
        assert!(phi.max_abs_diff(&LinearMap::identity(2)) < 1e-15);
        let psi = s.unital_cp_map(4, 2);
        let phi = lifting_assisted_map(&psi, &omega).unwrap();
        assert!(phi.is_cp().unwrap());
    }

    #[test]
    fn product_type_map() {
        let omega = ComplexMatrix::from_fn(2, 2, |r, c| match (r, c) {
            (0, 0) => c64(0.7, 0.0),
            (0, 1) => c64(0.1, 0.2),
            (1, 0) => c64(0.1, -0.2),
            _ => c64(0.3, 0.0),
        });
        let m = LinearMap::product_type(&omega).unwrap();
        assert!(m.is_unital(1e-15));
        assert!(m.is_cp().unwrap());
        let pi = m.choi_unnormalized();
        assert!(pi.matrix().approx_eq(&omega.kron(&ComplexMatrix::identity(2)), 1e-15));
    }

    fn c64(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }
}
