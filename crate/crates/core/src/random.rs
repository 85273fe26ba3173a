//! Seeded random generators for states, beliefs, isometries and channels.
//!
//! Haar isometries come from Gram–Schmidt on complex Ginibre matrices; every
//! generator takes an explicit RNG so that reports can record their seed.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::classical::{Distribution, StochasticMatrix};
use crate::linalg::{ComplexMatrix, C64, ZERO};
use crate::model::{Belief, DensityOperator, QuantumChannel};

pub type SeededRng = ChaCha20Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Standard complex normal: real and imaginary parts `N(0, 1/2)`.
pub fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

/// Complex Ginibre matrix.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian_c64(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    random_matrix(rng, n, n).hermitian_part()
}

/// Normalized Haar-random pure state.
pub fn random_ket<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    let mut v: Vec<C64> = (0..dim).map(|_| gaussian_c64(rng)).collect();
    let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
    for z in &mut v {
        *z /= norm;
    }
    v
}

/// Random density operator `G G† / Tr` with `G` of shape `dim × rank`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> DensityOperator {
    let g = random_matrix(rng, dim, rank.max(1));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityOperator::from_trusted(m.scale_real(1.0 / tr), alloc::vec![dim])
}

/// Haar-random isometry `rows × cols` (`rows ≥ cols`), via modified
/// Gram–Schmidt on a Ginibre matrix.
pub fn haar_isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let g = random_matrix(rng, rows, cols);
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v = g.column(j);
        // Two passes keep orthogonality at machine precision.
        for _ in 0..2 {
            for u in &q {
                let overlap: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= overlap * ui;
                }
            }
        }
        let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
        for z in &mut v {
            *z /= norm;
        }
        q.push(v);
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| q[j][i])
}

pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    haar_isometry(rng, n, n)
}

/// Random channel from a Haar isometry `dim_in → dim_out ⊗ env`.
/// `env` is raised to `⌈dim_in / dim_out⌉` when too small for an isometry.
pub fn random_channel<R: Rng + ?Sized>(
    rng: &mut R,
    dim_in: usize,
    dim_out: usize,
    env: usize,
) -> QuantumChannel {
    let env = env.max(dim_in.div_ceil(dim_out));
    let v = haar_isometry(rng, dim_out * env, dim_in);
    let kraus = (0..env)
        .map(|e| ComplexMatrix::from_fn(dim_out, dim_in, |o, i| v[(o * env + e, i)]))
        .collect();
    QuantumChannel::new(kraus).expect("isometry dilation is CPTP")
}

/// Random belief on `S ⊗ R` whose joint state has the given rank.
pub fn random_belief<R: Rng + ?Sized>(rng: &mut R, dim_s: usize, dim_r: usize, rank: usize) -> Belief {
    let joint = random_density(rng, dim_s * dim_r, rank);
    Belief::new(joint.into_matrix(), dim_s, dim_r).expect("random joint state is valid")
}

/// Strictly positive random distribution.
pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Distribution {
    let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    Distribution::new(raw.into_iter().map(|x| x / total).collect()).expect("normalized")
}

/// Random column-stochastic matrix with strictly positive entries.
pub fn random_stochastic<R: Rng + ?Sized>(rng: &mut R, n_out: usize, n_in: usize) -> StochasticMatrix {
    let mut entries = alloc::vec![0.0; n_out * n_in];
    for a in 0..n_in {
        let col = random_distribution(rng, n_out);
        for b in 0..n_out {
            entries[b * n_in + a] = col.weights()[b];
        }
    }
    StochasticMatrix::new(n_out, n_in, entries).expect("columns normalized")
}

/// Computational basis ket `|k⟩`.
pub fn basis_ket(dim: usize, k: usize) -> Vec<C64> {
    let mut v = alloc::vec![ZERO; dim];
    v[k] = C64::new(1.0, 0.0);
    v
}
