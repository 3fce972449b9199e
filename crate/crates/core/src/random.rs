//! Seeded random instances for property tests and verification suites.
//!
//! The generator is ChaCha8 (`rand_chacha`), seeded from a `u64`, so the
//! same seed yields the same draws on every platform. Diagonal states are
//! normalized squared Gaussians; general states conjugate such a diagonal
//! by a Haar-ish unitary taken from the QR factorization of a complex
//! Gaussian matrix.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::circulant::CirculantSpec;
use crate::classical::{Permutation, ProbabilityVector, StochasticChannel};
use crate::clift::{Conditional, LiftingTensor, MarkovSpec};
use crate::matcore::{herm_inv_sqrt, ComplexMatrix, DensityOperator, C64};
use crate::qlift::LinearMap;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi)
    }

    pub fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn complex_gaussian(&mut self) -> C64 {
        C64::new(self.gaussian(), self.gaussian())
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex_gaussian())
    }

    pub fn real_vector(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.gaussian()).collect()
    }

    /// Diagonal observable with Gaussian entries.
    pub fn diagonal_observable(&mut self, n: usize) -> Vec<f64> {
        self.real_vector(n)
    }

    pub fn unit_vector(&mut self, d: usize) -> Vec<C64> {
        let v: Vec<C64> = (0..d).map(|_| self.complex_gaussian()).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|z| z / norm).collect()
    }

    pub fn probability_weights(&mut self, n: usize) -> Vec<f64> {
        let sq: Vec<f64> = (0..n).map(|_| self.gaussian().powi(2)).collect();
        let total: f64 = sq.iter().sum();
        sq.into_iter().map(|x| x / total).collect()
    }

    pub fn probability_vector(&mut self, n: usize) -> ProbabilityVector {
        ProbabilityVector::new(self.probability_weights(n)).expect("normalized squared Gaussians")
    }

    pub fn permutation(&mut self, n: usize) -> Permutation {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(&mut self.rng);
        Permutation::new(images).expect("shuffled identity")
    }

    pub fn unitary(&mut self, d: usize) -> ComplexMatrix {
        let g = self.gaussian_matrix(d, d).to_nalgebra();
        let qr = g.qr();
        let q = qr.q();
        let r = qr.r();
        // Fix column phases so the distribution does not depend on the QR
        // sign convention.
        let mut u = ComplexMatrix::from_nalgebra(&q);
        for j in 0..d {
            let rjj = r[(j, j)];
            let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
            for i in 0..d {
                u.set(i, j, u.get(i, j) * phase);
            }
        }
        u
    }

    /// Full-rank random state.
    pub fn density(&mut self, d: usize) -> DensityOperator {
        let p = self.probability_weights(d);
        self.density_with_spectrum(&p)
    }

    /// Random state of the given rank (`1 ≤ rank ≤ d`).
    pub fn density_with_rank(&mut self, d: usize, rank: usize) -> DensityOperator {
        let mut p = self.probability_weights(rank);
        p.resize(d, 0.0);
        self.density_with_spectrum(&p)
    }

    fn density_with_spectrum(&mut self, p: &[f64]) -> DensityOperator {
        let u = self.unitary(p.len());
        let m = u.conjugate(&ComplexMatrix::from_real_diagonal(p)).expect("square");
        // Re-Hermitize to remove roundoff asymmetry.
        let m = (&m + &m.adjoint()).scale_real(0.5);
        DensityOperator::single(m).expect("conjugated probability spectrum")
    }

    /// Diagonal (classical) state.
    pub fn diagonal_density(&mut self, n: usize) -> DensityOperator {
        let p = self.probability_weights(n);
        DensityOperator::single(ComplexMatrix::from_real_diagonal(&p)).expect("diagonal state")
    }

    /// `n1 x n2` channel with rows normalized (state action preserves
    /// normalization).
    pub fn stochastic_channel(&mut self, n1: usize, n2: usize) -> StochasticChannel {
        let rows: Vec<Vec<f64>> = (0..n1).map(|_| self.probability_weights(n2)).collect();
        StochasticChannel::from_rows(&rows).expect("nonnegative rows")
    }

    /// Column-stochastic table `p_{j|i}` with `n_out` outcomes and `n_in`
    /// conditions.
    pub fn conditional(&mut self, n_out: usize, n_in: usize) -> Conditional {
        let cols: Vec<Vec<f64>> = (0..n_in).map(|_| self.probability_weights(n_out)).collect();
        let rows: Vec<Vec<f64>> = (0..n_out).map(|j| cols.iter().map(|c| c[j]).collect()).collect();
        Conditional::from_rows(&rows).expect("column-normalized")
    }

    pub fn markov_spec(&mut self, n: usize) -> MarkovSpec {
        let conditional = self.conditional(n, n);
        let initial = self.probability_vector(n);
        MarkovSpec::new(conditional, initial).expect("matching sizes")
    }

    /// Arbitrary valid lifting tensor: each input row is a random joint law.
    pub fn lifting_tensor(&mut self, n1: usize, n2: usize) -> LiftingTensor {
        let mut data = Vec::with_capacity(n1 * n2 * n1);
        for _ in 0..n1 {
            data.extend(self.probability_weights(n2 * n1));
        }
        LiftingTensor::new(n1, n2, data).expect("normalized rows")
    }

    /// Markovian (hence non-demolishing) tensor `E_ijk = p_{j|i} δ_ik`.
    pub fn markovian_tensor(&mut self, n1: usize, n2: usize) -> LiftingTensor {
        let c = self.conditional(n2, n1);
        LiftingTensor::markovian(&c)
    }

    /// Random unital CP map on `d x d` matrices with `kraus` Kraus operators,
    /// `K_k = S^{-1/2} G_k` where `S = Σ G_k G_k†`.
    pub fn unital_cp_map(&mut self, d: usize, kraus: usize) -> LinearMap {
        let gs: Vec<ComplexMatrix> = (0..kraus).map(|_| self.gaussian_matrix(d, d)).collect();
        let s = gs.iter().fold(ComplexMatrix::zeros(d, d), |acc, g| &acc + &(g * &g.adjoint()));
        let s = (&s + &s.adjoint()).scale_real(0.5);
        let w = herm_inv_sqrt(&s).expect("Gaussian Gram matrix is positive definite");
        let ks: Vec<ComplexMatrix> = gs.iter().map(|g| &w * g).collect();
        LinearMap::from_kraus(&ks).expect("square Kraus operators")
    }

    /// Random PSD `d x d` block of random rank, unnormalized.
    fn psd_block(&mut self, d: usize) -> ComplexMatrix {
        let rank = self.range(1, d);
        let g = self.gaussian_matrix(d, rank);
        let b = &g * &g.adjoint();
        (&b + &b.adjoint()).scale_real(0.5)
    }

    /// Random circulant spec. Blocks mix a random-rank PSD part with a
    /// diagonal part so that both PPT and non-PPT instances occur.
    pub fn circulant_spec(&mut self, d: usize) -> CirculantSpec {
        let mix = self.uniform();
        let mut blocks: Vec<ComplexMatrix> = (0..d)
            .map(|_| {
                let b = self.psd_block(d);
                let diag = ComplexMatrix::from_real_diagonal(&self.probability_weights(d));
                let b = b.scale_real(mix / b.trace().re.max(1e-300));
                &b + &diag.scale_real(1.0 - mix)
            })
            .collect();
        let total: f64 = blocks.iter().map(|b| b.trace().re).sum();
        for b in &mut blocks {
            *b = b.scale_real(1.0 / total);
        }
        CirculantSpec::new(blocks).expect("PSD blocks normalized to unit total trace")
    }

    /// `d` random PSD unit-trace blocks for circulant liftings.
    pub fn circulant_lift_blocks(&mut self, d: usize) -> Vec<ComplexMatrix> {
        (0..d)
            .map(|_| {
                let b = self.psd_block(d);
                b.scale_real(1.0 / b.trace().re)
            })
            .collect()
    }
}
