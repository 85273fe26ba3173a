//! CPTP maps in Kraus form. The Choi matrix is derived on demand and only
//! used for validation and comparison.

use alloc::vec;
use alloc::vec::Vec;

use super::{DensityOperator, Povm};
use crate::classical::StochasticMatrix;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, psd_sqrt, real, ComplexMatrix};

/// Trace-preservation tolerance (Frobenius) for validated channels.
pub const CHANNEL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumChannel {
    kraus: Vec<ComplexMatrix>,
    dim_in: usize,
    dim_out: usize,
}

impl QuantumChannel {
    /// Validates trace preservation within [`CHANNEL_TOL`] and complete
    /// positivity of the Choi matrix.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tolerance(kraus, CHANNEL_TOL)
    }

    pub fn with_tolerance(kraus: Vec<ComplexMatrix>, tp_tol: f64) -> Result<Self> {
        let first = kraus.first().ok_or(Error::NotTracePreserving {
            deviation: f64::INFINITY,
        })?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        for k in &kraus {
            if (k.rows(), k.cols()) != (dim_out, dim_in) {
                return Err(Error::DimensionMismatch {
                    context: "Kraus operator shape",
                    expected: dim_out * dim_in,
                    found: k.rows() * k.cols(),
                });
            }
        }
        let ch = Self {
            kraus,
            dim_in,
            dim_out,
        };
        ch.validate_with(tp_tol)?;
        Ok(ch)
    }

    /// Extracts a Kraus set from a Choi matrix
    /// `J = Σ_{ij} |i⟩⟨j| ⊗ E(|i⟩⟨j|)` (input factor first).
    pub fn from_choi(choi: &ComplexMatrix, dim_in: usize, dim_out: usize, tp_tol: f64) -> Result<Self> {
        let side = choi.require_square("Choi matrix")?;
        if side != dim_in * dim_out {
            return Err(Error::DimensionMismatch {
                context: "Choi matrix",
                expected: dim_in * dim_out,
                found: side,
            });
        }
        let eig = hermitian_eig(choi)?;
        if eig.check_psd().is_err() {
            return Err(Error::NotCompletelyPositive {
                min_eigenvalue: eig.min_eigenvalue(),
            });
        }
        let tau = eig.cutoff();
        let mut kraus = Vec::new();
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda <= tau {
                continue;
            }
            let scale = libm::sqrt(lambda);
            let v = &eig.eigenvectors;
            kraus.push(ComplexMatrix::from_fn(dim_out, dim_in, |o, i| {
                v[(i * dim_out + o, k)] * scale
            }));
        }
        if kraus.is_empty() {
            return Err(Error::ZeroOperator);
        }
        Self::with_tolerance(kraus, tp_tol)
    }

    pub fn identity(d: usize) -> Self {
        Self {
            kraus: vec![ComplexMatrix::identity(d)],
            dim_in: d,
            dim_out: d,
        }
    }

    pub fn unitary(u: &ComplexMatrix) -> Result<Self> {
        Self::new(vec![u.clone()])
    }

    /// `ρ ↦ (1 − p) ρ + p Tr[ρ] 𝟙/d`, for `p ∈ [0, 1]`.
    pub fn depolarizing(d: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidDistribution {
                reason: "depolarizing probability outside [0, 1]",
            });
        }
        let mut kraus = vec![ComplexMatrix::identity(d).scale_real(libm::sqrt(1.0 - p))];
        let w = libm::sqrt(p / d as f64);
        if w > 0.0 {
            for i in 0..d {
                for j in 0..d {
                    kraus.push(ComplexMatrix::unit(d, d, i, j).scale_real(w));
                }
            }
        }
        Self::new(kraus)
    }

    /// Replacement channel `ρ ↦ Tr[ρ] σ`.
    pub fn constant(dim_in: usize, sigma: &DensityOperator) -> Self {
        let eig = sigma.eigensystem();
        let tau = eig.cutoff();
        let mut kraus = Vec::new();
        for (a, &l) in eig.eigenvalues.iter().enumerate() {
            if l <= tau {
                continue;
            }
            let v = eig.vector(a);
            let s = libm::sqrt(l);
            for j in 0..dim_in {
                kraus.push(ComplexMatrix::from_fn(sigma.dim(), dim_in, |o, i| {
                    if i == j {
                        v[o] * s
                    } else {
                        real(0.0)
                    }
                }));
            }
        }
        Self {
            kraus,
            dim_in,
            dim_out: sigma.dim(),
        }
    }

    /// `ρ ↦ Σ_x Tr[F_x ρ] |x̃⟩⟨x̃|` on a register of dimension `dim_out`
    /// (at least the number of outcomes). Kraus operators are
    /// `|x̃⟩⟨j| √F_x`, zero ones dropped.
    pub fn measurement_into(povm: &Povm, dim_out: usize) -> Result<Self> {
        if dim_out < povm.len() {
            return Err(Error::DimensionMismatch {
                context: "measurement register",
                expected: povm.len(),
                found: dim_out,
            });
        }
        let d = povm.dim();
        let mut kraus = Vec::new();
        for (x, f) in povm.effects().iter().enumerate() {
            let root = psd_sqrt(f)?;
            for j in 0..d {
                let row = root.row(j);
                if row.iter().all(|z| z.norm_sqr() == 0.0) {
                    continue;
                }
                let mut k = ComplexMatrix::zeros(dim_out, d);
                for (c, &z) in row.iter().enumerate() {
                    k[(x, c)] = z;
                }
                kraus.push(k);
            }
        }
        Self::new(kraus)
    }

    /// Classical channel `|a⟩⟨a| ↦ Σ_b φ(b|a) |b⟩⟨b|` with Kraus operators
    /// `√φ(b|a) |b⟩⟨a|`.
    pub fn classical(forward: &StochasticMatrix) -> Result<Self> {
        let (n_out, n_in) = (forward.n_out(), forward.n_in());
        let mut kraus = Vec::new();
        for b in 0..n_out {
            for a in 0..n_in {
                let p = forward.get(b, a);
                if p > 0.0 {
                    kraus.push(ComplexMatrix::unit(n_out, n_in, b, a).scale_real(libm::sqrt(p)));
                }
            }
        }
        Self::new(kraus)
    }

    /// Convex combination `Σ w_i E_i`; all parts must share dimensions.
    pub fn mixture(parts: &[(f64, &QuantumChannel)]) -> Result<Self> {
        let mut kraus = Vec::new();
        for (w, ch) in parts {
            let s = libm::sqrt(*w);
            kraus.extend(ch.kraus.iter().map(|k| k.scale_real(s)));
        }
        Self::new(kraus)
    }

    /// `then ∘ self`.
    pub fn compose(&self, then: &QuantumChannel) -> Result<Self> {
        if then.dim_in != self.dim_out {
            return Err(Error::DimensionMismatch {
                context: "channel composition",
                expected: self.dim_out,
                found: then.dim_in,
            });
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * then.kraus.len());
        for b in &then.kraus {
            for a in &self.kraus {
                kraus.push(b * a);
            }
        }
        Ok(Self {
            kraus,
            dim_in: self.dim_in,
            dim_out: then.dim_out,
        })
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// `Σ_k K_k X K_k†` for any `dim_in × dim_in` matrix.
    pub fn apply_matrix(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim_in || x.cols() != self.dim_in {
            return Err(Error::DimensionMismatch {
                context: "channel input",
                expected: self.dim_in,
                found: x.rows(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out = &out + &x.conjugate_by(k);
        }
        Ok(out)
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        let out = self.apply_matrix(rho.matrix())?;
        Ok(DensityOperator::from_trusted(out, vec![self.dim_out]))
    }

    /// Adjoint map `Y ↦ Σ_k K_k† Y K_k`.
    pub fn adjoint_apply(&self, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        if y.rows() != self.dim_out || y.cols() != self.dim_out {
            return Err(Error::DimensionMismatch {
                context: "adjoint channel input",
                expected: self.dim_out,
                found: y.rows(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            out = &out + &(&k.adjoint() * y).matmul(k);
        }
        Ok(out)
    }

    /// `J = Σ_{ij} |i⟩⟨j| ⊗ E(|i⟩⟨j|)`, input factor first.
    pub fn choi(&self) -> ComplexMatrix {
        let (di, dout) = (self.dim_in, self.dim_out);
        let mut j = ComplexMatrix::zeros(di * dout, di * dout);
        for k in &self.kraus {
            // vec_k[i * dout + o] = K[o, i]; J = Σ_k vec_k vec_k†.
            let v: Vec<_> = (0..di * dout).map(|idx| k[(idx % dout, idx / dout)]).collect();
            j = &j + &ComplexMatrix::projector(&v);
        }
        j
    }

    /// `‖Σ_k K_k†K_k − 𝟙‖_F`.
    pub fn tp_deviation(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            acc = &acc + &(&k.adjoint() * k);
        }
        acc.distance(&ComplexMatrix::identity(self.dim_in))
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_with(CHANNEL_TOL)
    }

    fn validate_with(&self, tp_tol: f64) -> Result<()> {
        let deviation = self.tp_deviation();
        if deviation > tp_tol {
            return Err(Error::NotTracePreserving { deviation });
        }
        let eig = hermitian_eig(&self.choi())?;
        if eig.check_psd().is_err() {
            return Err(Error::NotCompletelyPositive {
                min_eigenvalue: eig.min_eigenvalue(),
            });
        }
        Ok(())
    }
}

pub fn apply_channel(e: &QuantumChannel, rho: &DensityOperator) -> Result<DensityOperator> {
    e.apply(rho)
}

pub fn adjoint_apply(e: &QuantumChannel, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    e.adjoint_apply(y)
}

/// Measurement channel onto a register with one basis state per outcome.
pub fn measurement_channel(povm: &Povm) -> Result<QuantumChannel> {
    QuantumChannel::measurement_into(povm, povm.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::states;
    use crate::random::{random_channel, random_density, random_matrix, rng_from_seed};
    use proptest::prelude::*;

    fn p(k: &[crate::C64]) -> ComplexMatrix {
        ComplexMatrix::projector(k)
    }

    #[test]
    fn z_measurement_maps_basis_states_to_register() {
        let e = measurement_channel(&Povm::z_basis()).unwrap();
        let out = e.apply(&DensityOperator::pure(&states::ket0()).unwrap()).unwrap();
        assert!(out.matrix().approx_eq(&ComplexMatrix::diag_real(&[1.0, 0.0]), 1e-15));
        // Choi of E_{0/1} is |00⟩⟨00| + |11⟩⟨11|.
        let expected = ComplexMatrix::diag_real(&[1.0, 0.0, 0.0, 1.0]);
        assert!(e.choi().approx_eq(&expected, 1e-15));
    }

    #[test]
    fn x_measurement_choi() {
        let e = measurement_channel(&Povm::x_basis()).unwrap();
        // J = Σ_x (|x⟩⟨x|)^T ⊗ |x̃⟩⟨x̃| for x ∈ {+, −}.
        let plus = p(&states::plus()).transpose();
        let minus = p(&states::minus()).transpose();
        let expected = &plus.kron(&ComplexMatrix::unit(2, 2, 0, 0)) + &minus.kron(&ComplexMatrix::unit(2, 2, 1, 1));
        assert!(e.choi().approx_eq(&expected, 1e-15));
    }

    #[test]
    fn trivial_povm_is_constant_channel() {
        let e = measurement_channel(&Povm::new(vec![ComplexMatrix::identity(2)]).unwrap()).unwrap();
        assert_eq!(e.dim_out(), 1);
        let mut rng = rng_from_seed(1);
        let out = e.apply(&random_density(&mut rng, 2, 2)).unwrap();
        assert!((out.matrix()[(0, 0)].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn depolarizing_on_ket0() {
        let d = QuantumChannel::depolarizing(2, 0.1).unwrap();
        let out = d.apply(&DensityOperator::pure(&states::ket0()).unwrap()).unwrap();
        assert!(out.matrix().approx_eq(&ComplexMatrix::diag_real(&[0.95, 0.05]), 1e-15));
        let unital = d.adjoint_apply(&ComplexMatrix::identity(2)).unwrap();
        assert!(unital.approx_eq(&ComplexMatrix::identity(2), 1e-15));
    }

    #[test]
    fn identity_channel_and_adjoint() {
        let mut rng = rng_from_seed(2);
        let rho = random_density(&mut rng, 3, 2);
        let id = QuantumChannel::identity(3);
        assert!(id.apply(&rho).unwrap().matrix().approx_eq(rho.matrix(), 0.0));
        let y = random_matrix(&mut rng, 3, 3);
        assert!(id.adjoint_apply(&y).unwrap().approx_eq(&y, 0.0));
    }

    #[test]
    fn adjoint_of_z_measurement_on_register_state() {
        // E†(|0̃⟩⟨0̃|) = Σ_x ⟨0̃|x̃⟩⟨x̃|0̃⟩ F_x = |0⟩⟨0|.
        let e = measurement_channel(&Povm::z_basis()).unwrap();
        let back = e.adjoint_apply(&ComplexMatrix::diag_real(&[1.0, 0.0])).unwrap();
        assert!(back.approx_eq(&ComplexMatrix::diag_real(&[1.0, 0.0]), 1e-15));
    }

    #[test]
    fn rejects_non_tp() {
        assert!(matches!(
            QuantumChannel::new(vec![ComplexMatrix::identity(2).scale_real(0.9)]),
            Err(Error::NotTracePreserving { .. })
        ));
        assert!(QuantumChannel::depolarizing(2, 1.5).is_err());
    }

    #[test]
    fn constant_channel_outputs_target() {
        let sigma = DensityOperator::maximally_mixed(3);
        let e = QuantumChannel::constant(2, &sigma);
        assert!(e.validate().is_ok());
        let out = e.apply(&DensityOperator::pure(&states::plus()).unwrap()).unwrap();
        assert!(out.matrix().approx_eq(sigma.matrix(), 1e-14));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn adjoint_identity(seed in any::<u64>(), din in 1usize..5, dout in 1usize..5, env in 1usize..4) {
            let mut rng = rng_from_seed(seed);
            let e = random_channel(&mut rng, din, dout, env);
            let x = random_matrix(&mut rng, din, din);
            let y = random_matrix(&mut rng, dout, dout);
            let lhs = (&e.apply_matrix(&x).unwrap().adjoint() * &y).trace();
            let rhs = (&x.adjoint() * &e.adjoint_apply(&y).unwrap()).trace();
            prop_assert!((lhs - rhs).norm() <= 1e-10);
        }

        #[test]
        fn choi_round_trip(seed in any::<u64>(), din in 1usize..4, dout in 1usize..4, env in 1usize..4) {
            let mut rng = rng_from_seed(seed);
            let e = random_channel(&mut rng, din, dout, env);
            let back = QuantumChannel::from_choi(&e.choi(), din, dout, CHANNEL_TOL).unwrap();
            prop_assert!(back.choi().distance(&e.choi()) <= 1e-10);
        }

        #[test]
        fn measurement_output_is_diagonal_probabilities(seed in any::<u64>(), d in 2usize..5) {
            let mut rng = rng_from_seed(seed);
            let povm = Povm::informationally_complete(d);
            let e = measurement_channel(&povm).unwrap();
            let rho = random_density(&mut rng, d, d);
            let out = e.apply(&rho).unwrap();
            let expected = ComplexMatrix::diag_real(&povm.probabilities(&rho));
            prop_assert!(out.matrix().distance(&expected) <= 1e-12);
        }
    }
}
