use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::{ComplexMatrix, MatrixWire, C64};
use super::spectral;
use crate::error::{Error, Result};
use crate::tol;

/// A square matrix tagged with its tensor-factor dimensions.
///
/// `dims` lists factors left to right as they appear in the Kronecker
/// product. Systems are labelled `N, …, 1` from left to right, so system 1
/// is always the rightmost factor and system `N` the leftmost. Every
/// operation taking a "system" argument uses these labels.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredOperator {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl FactoredOperator {
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::DimensionMismatch(format!("invalid factor dimensions {dims:?}")));
        }
        let total: usize = dims.iter().product();
        if matrix.rows() != total || matrix.cols() != total {
            return Err(Error::DimensionMismatch(format!(
                "factor dims {dims:?} need a {total}x{total} matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { matrix, dims })
    }

    /// Single-factor operator.
    pub fn single(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.rows();
        Self::new(matrix, vec![n])
    }

    pub(crate) fn from_parts(matrix: ComplexMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(matrix.rows(), dims.iter().product::<usize>());
        Self { matrix, dims }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_factors(&self) -> usize {
        self.dims.len()
    }

    /// Dimension of system `label`.
    pub fn system_dim(&self, label: usize) -> Result<usize> {
        Ok(self.dims[self.position(label)?])
    }

    fn position(&self, label: usize) -> Result<usize> {
        let n = self.dims.len();
        if label == 0 || label > n {
            return Err(Error::InvalidFactor { label, factors: n });
        }
        Ok(n - label)
    }

    fn positions(&self, labels: &[usize]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.dims.len()];
        for &l in labels {
            let p = self.position(l)?;
            if mask[p] {
                return Err(Error::InvalidFactor { label: l, factors: self.dims.len() });
            }
            mask[p] = true;
        }
        Ok(mask)
    }

    /// `self ⊗ other`; the factors of `other` become the low-numbered systems.
    pub fn kron(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { matrix: self.matrix.kron(&other.matrix), dims }
    }

    /// Reduced operator on the systems in `keep`, tracing out all others.
    /// The kept systems retain their relative order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::DimensionMismatch("partial trace must keep at least one system".into()));
        }
        let kept = self.positions(keep)?;
        let out_dims: Vec<usize> =
            self.dims.iter().zip(&kept).filter(|(_, &k)| k).map(|(&d, _)| d).collect();
        let out_n: usize = out_dims.iter().product();
        let total = self.matrix.rows();
        let digits: Vec<Vec<usize>> = (0..total).map(|x| to_digits(x, &self.dims)).collect();
        let reduced: Vec<usize> = digits.iter().map(|dg| select_index(dg, &self.dims, &kept)).collect();
        let mut out = ComplexMatrix::zeros(out_n, out_n);
        for r in 0..total {
            for c in 0..total {
                let traced_match = kept
                    .iter()
                    .enumerate()
                    .all(|(p, &k)| k || digits[r][p] == digits[c][p]);
                if traced_match {
                    out.add_at(reduced[r], reduced[c], self.matrix.get(r, c));
                }
            }
        }
        Ok(Self { matrix: out, dims: out_dims })
    }

    /// Traces out the listed systems.
    pub fn trace_out(&self, systems: &[usize]) -> Result<Self> {
        let traced = self.positions(systems)?;
        let n = self.dims.len();
        let keep: Vec<usize> = (0..n).filter(|&p| !traced[p]).map(|p| n - p).collect();
        self.partial_trace(&keep)
    }

    /// Transposes system `label` only.
    pub fn partial_transpose(&self, label: usize) -> Result<Self> {
        let p = self.position(label)?;
        let total = self.matrix.rows();
        let stride: usize = self.dims[p + 1..].iter().product();
        let d = self.dims[p];
        let mut out = ComplexMatrix::zeros(total, total);
        for r in 0..total {
            let dr = (r / stride) % d;
            for c in 0..total {
                let dc = (c / stride) % d;
                let r2 = r - dr * stride + dc * stride;
                let c2 = c - dc * stride + dr * stride;
                out.set(r2, c2, self.matrix.get(r, c));
            }
        }
        Ok(Self { matrix: out, dims: self.dims.clone() })
    }

    /// Reorders tensor factors. `order[new_pos] = old_pos`, positions counted
    /// from the left.
    pub fn permute_factors(&self, order: &[usize]) -> Result<Self> {
        let n = self.dims.len();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&o| o >= n || std::mem::replace(&mut seen[o], true)) {
            return Err(Error::InvalidPermutation(format!("{order:?} is not a permutation of {n} factors")));
        }
        let new_dims: Vec<usize> = order.iter().map(|&o| self.dims[o]).collect();
        let total = self.matrix.rows();
        let map: Vec<usize> = (0..total)
            .map(|x| {
                let dg = to_digits(x, &self.dims);
                let nd: Vec<usize> = order.iter().map(|&o| dg[o]).collect();
                from_digits(&nd, &new_dims)
            })
            .collect();
        let mut out = ComplexMatrix::zeros(total, total);
        for r in 0..total {
            for c in 0..total {
                out.set(map[r], map[c], self.matrix.get(r, c));
            }
        }
        Ok(Self { matrix: out, dims: new_dims })
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dims == other.dims && self.matrix.approx_eq(&other.matrix, tol)
    }
}

pub(crate) fn to_digits(mut x: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for p in (0..dims.len()).rev() {
        out[p] = x % dims[p];
        x /= dims[p];
    }
    out
}

pub(crate) fn from_digits(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&g, &d)| acc * d + g)
}

fn select_index(digits: &[usize], dims: &[usize], mask: &[bool]) -> usize {
    digits
        .iter()
        .zip(dims)
        .zip(mask)
        .filter(|(_, &k)| k)
        .fold(0, |acc, ((&g, &d), _)| acc * d + g)
}

#[derive(Serialize, Deserialize)]
struct FactoredWire {
    #[serde(flatten)]
    matrix: MatrixWire,
    dims: Vec<usize>,
}

impl Serialize for FactoredOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FactoredWire { matrix: MatrixWire::from(&self.matrix), dims: self.dims.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FactoredOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = FactoredWire::deserialize(d)?;
        let m = ComplexMatrix::try_from(w.matrix).map_err(serde::de::Error::custom)?;
        FactoredOperator::new(m, w.dims).map_err(serde::de::Error::custom)
    }
}

/// A PSD, unit-trace [`FactoredOperator`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator(FactoredOperator);

impl DensityOperator {
    /// Validates Hermiticity, positivity (relative tolerance 1e-9) and unit
    /// trace.
    pub fn new(op: FactoredOperator) -> Result<Self> {
        let tr = op.trace();
        if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
            return Err(Error::NotAState(format!("trace is {tr}")));
        }
        let report = spectral::is_psd(op.matrix(), tol::PSD)?;
        if !report.psd {
            return Err(Error::NotPsd { min_eigenvalue: report.min_eigenvalue });
        }
        Ok(Self(op))
    }

    pub fn from_matrix(m: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        Self::new(FactoredOperator::new(m, dims)?)
    }

    /// Single-system state from a matrix.
    pub fn single(m: ComplexMatrix) -> Result<Self> {
        Self::new(FactoredOperator::single(m)?)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self::assume_valid(ComplexMatrix::identity(d).scale_real(1.0 / d as f64), vec![d])
    }

    /// Pure state `|v><v|` for a unit vector `v`.
    pub fn pure(v: &[C64]) -> Result<Self> {
        Self::single(ComplexMatrix::outer(v, v))
    }

    /// Diagonal state from nonnegative weights laid out over `dims`.
    pub(crate) fn diagonal(weights: &[f64], dims: Vec<usize>) -> Self {
        Self::assume_valid(ComplexMatrix::from_real_diagonal(weights), dims)
    }

    /// Wraps an operator that is a state by construction.
    pub(crate) fn assume_valid(m: ComplexMatrix, dims: Vec<usize>) -> Self {
        Self(FactoredOperator::from_parts(m, dims))
    }

    pub fn operator(&self) -> &FactoredOperator {
        &self.0
    }

    pub fn into_operator(self) -> FactoredOperator {
        self.0
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.0.matrix()
    }

    pub fn dims(&self) -> &[usize] {
        self.0.dims()
    }

    /// Dimension of the whole space.
    pub fn dim(&self) -> usize {
        self.0.matrix().rows()
    }

    /// Reduced state on `keep`.
    pub fn reduce(&self, keep: &[usize]) -> Result<Self> {
        Ok(Self(self.0.partial_trace(keep)?))
    }

    pub fn trace_out(&self, systems: &[usize]) -> Result<Self> {
        Ok(Self(self.0.trace_out(systems)?))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kron(&other.0))
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        let m = self.matrix();
        m.matmul(m).map(|p| p.trace().re).unwrap_or(f64::NAN)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.0.approx_eq(&other.0, tol)
    }
}

impl Serialize for DensityOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let op = FactoredOperator::deserialize(d)?;
        DensityOperator::new(op).map_err(serde::de::Error::custom)
    }
}
