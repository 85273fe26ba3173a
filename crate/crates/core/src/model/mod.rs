//! States, beliefs, POVMs and ensembles.
//!
//! Classical registers are not a separate type: a register is a density
//! operator that happens to be diagonal in its fixed basis `|x̃⟩`.

mod builtin;
mod channel;
pub mod states;

use alloc::vec;
use alloc::vec::Vec;

pub use builtin::{builtin_belief, BuiltinBelief, UnknownBuiltin};
pub use channel::{adjoint_apply, apply_channel, measurement_channel, QuantumChannel, CHANNEL_TOL};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, partial_trace, ComplexMatrix, HermitianEigensystem, C64, HERMITIAN_TOL,
};

/// Trace tolerance for density operators.
pub const TRACE_TOL: f64 = 1e-10;

/// Positive semidefinite, unit-trace operator with a subsystem split.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let side = matrix.require_square("density operator")?;
        Self::with_dims(matrix, vec![side])
    }

    pub fn with_dims(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let side = matrix.require_square("density operator")?;
        let total: usize = dims.iter().product();
        if total != side {
            return Err(Error::DimensionMismatch {
                context: "density operator subsystems",
                expected: side,
                found: total,
            });
        }
        let eig = hermitian_eig(&matrix)?;
        eig.check_psd()?;
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidTrace { trace: trace.re });
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
            dims,
        })
    }

    /// Skips validation; used for outputs of maps already known to be
    /// positive, and for retrodiction results whose trace may fall short of 1.
    pub(crate) fn from_trusted(matrix: ComplexMatrix, dims: Vec<usize>) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
            dims,
        }
    }

    pub fn pure(psi: &[C64]) -> Result<Self> {
        Self::new(ComplexMatrix::projector(psi))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_trusted(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64), vec![dim])
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn eigensystem(&self) -> HermitianEigensystem {
        hermitian_eig(&self.matrix).expect("density operators are Hermitian")
    }

    /// Rank ≤ 1 above the spectral cutoff.
    pub fn is_pure(&self) -> bool {
        self.eigensystem().rank() <= 1
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::from_trusted(self.matrix.kron(&other.matrix), dims)
    }

    pub fn partial_trace(&self, traced: &[usize]) -> Result<Self> {
        let reduced = partial_trace(&self.matrix, &self.dims, traced)?;
        let dims = self
            .dims
            .iter()
            .enumerate()
            .filter(|(i, _)| !traced.contains(i))
            .map(|(_, &d)| d)
            .collect::<Vec<_>>();
        let dims = if dims.is_empty() { vec![1] } else { dims };
        Ok(Self::from_trusted(reduced, dims))
    }

    /// Qubit state from a Bloch vector `(x, y, z)`.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        Self::new(states::bloch_matrix(r))
    }

    /// Bloch vector of a qubit state, `None` for other dimensions.
    pub fn bloch_vector(&self) -> Option<[f64; 3]> {
        states::bloch_vector(&self.matrix)
    }
}

/// A prior belief: a joint state on `S ⊗ R`.
///
/// `dim_r = 1` is a belief with no extra system.
#[derive(Clone, Debug, PartialEq)]
pub struct Belief {
    joint: DensityOperator,
    dim_s: usize,
    dim_r: usize,
}

impl Belief {
    pub fn new(joint: ComplexMatrix, dim_s: usize, dim_r: usize) -> Result<Self> {
        let joint = DensityOperator::with_dims(joint, vec![dim_s, dim_r])?;
        Ok(Self {
            joint,
            dim_s,
            dim_r,
        })
    }

    /// A belief about `S` alone.
    pub fn from_state(state: &DensityOperator) -> Self {
        let d = state.dim();
        Self {
            joint: DensityOperator::from_trusted(state.matrix().clone(), vec![d, 1]),
            dim_s: d,
            dim_r: 1,
        }
    }

    /// `β_S ⊗ β_R`.
    pub fn product(system: &DensityOperator, register: &DensityOperator) -> Self {
        let (ds, dr) = (system.dim(), register.dim());
        Self {
            joint: DensityOperator::from_trusted(system.matrix().kron(register.matrix()), vec![ds, dr]),
            dim_s: ds,
            dim_r: dr,
        }
    }

    pub(crate) fn from_trusted(joint: ComplexMatrix, dim_s: usize, dim_r: usize) -> Self {
        Self {
            joint: DensityOperator::from_trusted(joint, vec![dim_s, dim_r]),
            dim_s,
            dim_r,
        }
    }

    pub fn joint(&self) -> &DensityOperator {
        &self.joint
    }

    pub fn dim_s(&self) -> usize {
        self.dim_s
    }

    pub fn dim_r(&self) -> usize {
        self.dim_r
    }

    /// `β_S = Tr_R[β]`.
    pub fn marginal_s(&self) -> DensityOperator {
        let m = partial_trace(self.joint.matrix(), &[self.dim_s, self.dim_r], &[1])
            .expect("belief dimensions are consistent");
        DensityOperator::from_trusted(m, vec![self.dim_s])
    }

    pub fn marginal_r(&self) -> DensityOperator {
        let m = partial_trace(self.joint.matrix(), &[self.dim_s, self.dim_r], &[0])
            .expect("belief dimensions are consistent");
        DensityOperator::from_trusted(m, vec![self.dim_r])
    }

    pub fn is_pure(&self) -> bool {
        self.joint.is_pure()
    }

    /// `β ⊗ σ`, with the ancilla appended to the register.
    pub fn with_ancilla(&self, ancilla: &DensityOperator) -> Self {
        Self::from_trusted(
            self.joint.matrix().kron(ancilla.matrix()),
            self.dim_s,
            self.dim_r * ancilla.dim(),
        )
    }

    /// `(𝟙_S ⊗ V) β (𝟙_S ⊗ V†)` for an isometry `V: R → R₂`.
    pub fn apply_register_isometry(&self, v: &ComplexMatrix) -> Result<Self> {
        if v.cols() != self.dim_r {
            return Err(Error::DimensionMismatch {
                context: "register isometry input",
                expected: self.dim_r,
                found: v.cols(),
            });
        }
        let lifted = ComplexMatrix::identity(self.dim_s).kron(v);
        Ok(Self::from_trusted(
            self.joint.matrix().conjugate_by(&lifted),
            self.dim_s,
            v.rows(),
        ))
    }

    /// `(I_S ⊗ P)(β)` for a channel `P` on the register.
    pub fn apply_register_channel(&self, channel: &QuantumChannel) -> Result<Self> {
        if channel.dim_in() != self.dim_r {
            return Err(Error::DimensionMismatch {
                context: "register channel input",
                expected: self.dim_r,
                found: channel.dim_in(),
            });
        }
        let id = ComplexMatrix::identity(self.dim_s);
        let mut out = ComplexMatrix::zeros(self.dim_s * channel.dim_out(), self.dim_s * channel.dim_out());
        for k in channel.kraus() {
            out = &out + &self.joint.matrix().conjugate_by(&id.kron(k));
        }
        Ok(Self::from_trusted(out, self.dim_s, channel.dim_out()))
    }

    /// `(U ⊗ 𝟙_R) β (U† ⊗ 𝟙_R)`.
    pub fn apply_system_unitary(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.cols() != self.dim_s || u.rows() != self.dim_s {
            return Err(Error::DimensionMismatch {
                context: "system unitary",
                expected: self.dim_s,
                found: u.cols(),
            });
        }
        let lifted = u.kron(&ComplexMatrix::identity(self.dim_r));
        Ok(Self::from_trusted(
            self.joint.matrix().conjugate_by(&lifted),
            self.dim_s,
            self.dim_r,
        ))
    }
}

/// Positive operator-valued measure.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    effects: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(effects: Vec<ComplexMatrix>) -> Result<Self> {
        let first = effects.first().ok_or(Error::InvalidPovm { reason: "no effects" })?;
        let d = first.require_square("POVM effect")?;
        let mut total = ComplexMatrix::zeros(d, d);
        for f in &effects {
            if f.rows() != d || f.cols() != d {
                return Err(Error::InvalidPovm {
                    reason: "effects have different dimensions",
                });
            }
            if f.hermitian_asymmetry() > HERMITIAN_TOL {
                return Err(Error::InvalidPovm {
                    reason: "effect is not Hermitian",
                });
            }
            if hermitian_eig(f)?.check_psd().is_err() {
                return Err(Error::InvalidPovm {
                    reason: "effect is not positive semidefinite",
                });
            }
            total = &total + f;
        }
        if total.distance(&ComplexMatrix::identity(d)) > CHANNEL_TOL {
            return Err(Error::InvalidPovm {
                reason: "effects do not sum to identity",
            });
        }
        Ok(Self { effects })
    }

    /// Projective measurement in the basis given by the kets.
    pub fn projective(basis: &[Vec<C64>]) -> Result<Self> {
        Self::new(basis.iter().map(|k| ComplexMatrix::projector(k)).collect())
    }

    /// Pauli-Z basis `{|0⟩, |1⟩}`.
    pub fn z_basis() -> Self {
        Self::projective(&[states::ket0(), states::ket1()]).expect("Z basis")
    }

    /// Pauli-X basis `{|+⟩, |−⟩}`.
    pub fn x_basis() -> Self {
        Self::projective(&[states::plus(), states::minus()]).expect("X basis")
    }

    /// Tetrahedral qubit SIC-POVM, `F_k = ½|ψ_k⟩⟨ψ_k|`.
    pub fn qubit_sic() -> Self {
        Self::new(
            states::tetrahedron()
                .iter()
                .map(|&r| states::bloch_matrix(r).scale_real(0.5))
                .collect(),
        )
        .expect("SIC-POVM")
    }

    /// Informationally complete POVM with `d²` effects.
    ///
    /// For `d = 2` this is the SIC-POVM. Otherwise the `d²` projectors onto
    /// `|i⟩`, `(|i⟩+|j⟩)/√2` and `(|i⟩+i|j⟩)/√2` (`i < j`) span operator
    /// space; conjugating them by `G^{-1/2}` with `G` their sum yields a POVM
    /// with the same span.
    pub fn informationally_complete(d: usize) -> Self {
        if d == 2 {
            return Self::qubit_sic();
        }
        let spanning = states::spanning_projectors(d);
        let mut g = ComplexMatrix::zeros(d, d);
        for p in &spanning {
            g = &g + p;
        }
        let g_inv = crate::linalg::support_inv_sqrt(&g).expect("spanning sum is positive definite");
        let effects = spanning.iter().map(|p| p.conjugate_by(&g_inv).hermitian_part()).collect();
        Self::new(effects).expect("normalized spanning POVM")
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].rows()
    }

    /// Outcome probabilities `Tr[F_x ρ]`.
    pub fn probabilities(&self, rho: &DensityOperator) -> Vec<f64> {
        self.effects.iter().map(|f| (f * rho.matrix()).trace().re).collect()
    }
}

/// Tolerance on ensemble probabilities summing to one.
pub const PROBABILITY_TOL: f64 = 1e-12;

/// Finite ensemble `{ρ_x, p(x)}` on one system.
#[derive(Clone, Debug, PartialEq)]
pub struct StateEnsemble {
    members: Vec<(DensityOperator, f64)>,
}

impl StateEnsemble {
    pub fn new(members: Vec<(DensityOperator, f64)>) -> Result<Self> {
        let d = members.first().ok_or(Error::EmptyEnsemble)?.0.dim();
        let mut sum = 0.0;
        for (rho, p) in &members {
            if rho.dim() != d {
                return Err(Error::DimensionMismatch {
                    context: "ensemble member",
                    expected: d,
                    found: rho.dim(),
                });
            }
            if !(0.0..=1.0).contains(p) {
                return Err(Error::InvalidProbabilities { sum: *p });
            }
            sum += p;
        }
        if (sum - 1.0).abs() > PROBABILITY_TOL {
            return Err(Error::InvalidProbabilities { sum });
        }
        Ok(Self { members })
    }

    /// Ensemble of pure states given as kets.
    pub fn pure(kets: &[Vec<C64>], probabilities: &[f64]) -> Result<Self> {
        if kets.len() != probabilities.len() {
            return Err(Error::DimensionMismatch {
                context: "ensemble probabilities",
                expected: kets.len(),
                found: probabilities.len(),
            });
        }
        let members = kets
            .iter()
            .zip(probabilities)
            .map(|(k, &p)| Ok((DensityOperator::pure(k)?, p)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(members)
    }

    /// Uniform weights.
    pub fn uniform(states: Vec<DensityOperator>) -> Result<Self> {
        let p = 1.0 / states.len().max(1) as f64;
        Self::new(states.into_iter().map(|s| (s, p)).collect())
    }

    pub fn members(&self) -> &[(DensityOperator, f64)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].0.dim()
    }

    /// `Σ_x p(x) ρ_x`.
    pub fn average(&self) -> DensityOperator {
        let d = self.dim();
        let mut acc = ComplexMatrix::zeros(d, d);
        for (rho, p) in &self.members {
            acc = &acc + &rho.matrix().scale_real(*p);
        }
        DensityOperator::from_trusted(acc, vec![d])
    }

    /// The classical-register belief `Σ_x p(x) ρ_x ⊗ |x̃⟩⟨x̃|`.
    pub fn to_belief(&self) -> Belief {
        let d = self.dim();
        let n = self.len();
        let mut joint = ComplexMatrix::zeros(d * n, d * n);
        for (x, (rho, p)) in self.members.iter().enumerate() {
            let tag = ComplexMatrix::unit(n, n, x, x);
            joint = &joint + &rho.matrix().scale_real(*p).kron(&tag);
        }
        Belief::from_trusted(joint, d, n)
    }
}

/// Classical-register belief of an ensemble; errors on an empty ensemble.
pub fn ensemble_to_belief(ens: &StateEnsemble) -> Result<Belief> {
    if ens.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    Ok(ens.to_belief())
}
