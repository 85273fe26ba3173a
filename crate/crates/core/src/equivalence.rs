//! When do two beliefs retrodict identically for every channel?
//!
//! The answer is carried by the signature `Tr_{RR'} |√β⟩⟩⟨⟨√β|`, an
//! operator on `S ⊗ S'`: two beliefs are equivalent exactly when their
//! signatures coincide. Equivalently,
//! `Σ_{k,k'} Tr_R[√β (|k⟩⟨k'| ⊗ 𝟙) √β] ⊗ |k⟩⟨k'|`; both forms are computed
//! and cross-checked on every call.
//!
//! For classical-register beliefs built from ensembles `{ρ_x, p(x)}` the
//! signature reduces to `Σ_x p(x) √ρ_x ⊗ √ρ_x` up to a fixed linear
//! rearrangement, and to the second moment for pure ensembles.
//!
//! [`oracle_equivalent`] decides the same question the slow way, by running
//! the retrodiction map for a battery of channels and comparing outputs.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{
    double_ket, hermitian_eig, partial_trace, partial_trace_pure, psd_sqrt, ComplexMatrix,
};
use crate::model::{states, Belief, DensityOperator, Povm, QuantumChannel, StateEnsemble};
use crate::random::{random_channel, rng_from_seed};
use crate::retrodiction::{RetrodictOptions, RetrodictionMap};

/// Default Frobenius tolerance on signature distance.
pub const DEFAULT_EQUIVALENCE_TOL: f64 = 1e-9;
/// Agreement between the vectorized and sum-form signature computations.
pub const SIGNATURE_CONSISTENCY_TOL: f64 = 1e-10;
/// Oracle agreement tolerance on updated states.
pub const ORACLE_TOL: f64 = 1e-8;
pub const DEFAULT_ORACLE_SEED: u64 = 0x5eed_0001;
pub const DEFAULT_ORACLE_RANDOM_CHANNELS: usize = 20;

/// The invariant `Tr_{RR'}|√β⟩⟩⟨⟨√β|` on `S ⊗ S'`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceSignature {
    pub operator: ComplexMatrix,
    pub dim_s: usize,
}

impl EquivalenceSignature {
    /// `Tr_{S'}` of the signature, which equals `β_S`.
    pub fn marginal(&self) -> ComplexMatrix {
        partial_trace(&self.operator, &[self.dim_s, self.dim_s], &[1]).expect("square on S ⊗ S'")
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.operator.distance(&other.operator)
    }
}

/// Sum form `Σ_{k,k'} Tr_R[√β (|k⟩⟨k'| ⊗ 𝟙_R) √β] ⊗ |k⟩⟨k'|`.
fn signature_sum_form(root: &ComplexMatrix, dim_s: usize, dim_r: usize) -> Result<ComplexMatrix> {
    let mut acc = ComplexMatrix::zeros(dim_s * dim_s, dim_s * dim_s);
    let id_r = ComplexMatrix::identity(dim_r);
    for k in 0..dim_s {
        for kp in 0..dim_s {
            let unit = ComplexMatrix::unit(dim_s, dim_s, k, kp);
            let sandwich = (root * &unit.kron(&id_r)).matmul(root);
            let reduced = partial_trace(&sandwich, &[dim_s, dim_r], &[1])?;
            acc = &acc + &reduced.kron(&unit);
        }
    }
    Ok(acc)
}

pub fn signature(belief: &Belief) -> Result<EquivalenceSignature> {
    let (ds, dr) = (belief.dim_s(), belief.dim_r());
    let root = psd_sqrt(belief.joint().matrix())?;
    let v = double_ket(&root, ds, dr)?;
    let operator = partial_trace_pure(&v, &[ds, dr, ds, dr], &[1, 3])?;
    let sum_form = signature_sum_form(&root, ds, dr)?;
    let deviation = operator.distance(&sum_form);
    if deviation > SIGNATURE_CONSISTENCY_TOL {
        return Err(Error::Consistency {
            what: "vectorized vs sum-form signature",
            deviation,
        });
    }
    Ok(EquivalenceSignature { operator, dim_s: ds })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    pub signature_distance: f64,
    /// `‖β_S − γ_S‖_F`.
    pub marginal_distance: f64,
}

pub fn equivalent(b1: &Belief, b2: &Belief, tol: f64) -> Result<EquivalenceReport> {
    if b1.dim_s() != b2.dim_s() {
        return Err(Error::DimensionMismatch {
            context: "belief systems",
            expected: b1.dim_s(),
            found: b2.dim_s(),
        });
    }
    let signature_distance = signature(b1)?.distance(&signature(b2)?);
    let marginal_distance = b1.marginal_s().matrix().distance(b2.marginal_s().matrix());
    Ok(EquivalenceReport {
        equivalent: signature_distance <= tol,
        signature_distance,
        marginal_distance,
    })
}

/// `Σ_x p(x) |ψ_x⟩⟨ψ_x| ⊗ |ψ_x⟩⟨ψ_x|` for an ensemble of pure states.
pub fn ensemble_second_moment(ens: &StateEnsemble) -> Result<ComplexMatrix> {
    let d = ens.dim();
    let mut acc = ComplexMatrix::zeros(d * d, d * d);
    for (index, (rho, p)) in ens.members().iter().enumerate() {
        let eig = rho.eigensystem();
        let second = eig.eigenvalues.get(1).copied().unwrap_or(0.0);
        if second > eig.cutoff() {
            return Err(Error::NotPure {
                index,
                second_eigenvalue: second,
            });
        }
        acc = &acc + &rho.matrix().kron(rho.matrix()).scale_real(*p);
    }
    Ok(acc)
}

/// `Σ_x p(x) √ρ_x ⊗ √ρ_x`.
pub fn ensemble_sqrt_moment(ens: &StateEnsemble) -> Result<ComplexMatrix> {
    let d = ens.dim();
    let mut acc = ComplexMatrix::zeros(d * d, d * d);
    for (rho, p) in ens.members() {
        let root = psd_sqrt(rho.matrix())?;
        acc = &acc + &root.kron(&root).scale_real(*p);
    }
    Ok(acc)
}

/// Ensemble equivalence decided from the square-root moments.
pub fn ensembles_equivalent(e1: &StateEnsemble, e2: &StateEnsemble, tol: f64) -> Result<(bool, f64)> {
    if e1.dim() != e2.dim() {
        return Err(Error::DimensionMismatch {
            context: "ensemble systems",
            expected: e1.dim(),
            found: e2.dim(),
        });
    }
    let dist = ensemble_sqrt_moment(e1)?.distance(&ensemble_sqrt_moment(e2)?);
    Ok((dist <= tol, dist))
}

/// `(𝟙 + SWAP)/(d(d+1))`: the Haar second moment of pure states in dim `d`.
pub fn symmetric_second_moment(d: usize) -> ComplexMatrix {
    let n = d * d;
    let norm = 1.0 / (d * (d + 1)) as f64;
    ComplexMatrix::from_fn(n, n, |row, col| {
        let (i, j) = (row / d, row % d);
        let (k, l) = (col / d, col % d);
        let mut v = 0.0;
        if row == col {
            v += 1.0;
        }
        if i == l && j == k {
            v += 1.0;
        }
        crate::linalg::real(v * norm)
    })
}

/// The `P(ρ) = V (ρ ⊗ α) V†` reversible register channel: append an
/// ancilla `α`, then apply an isometry `V` from `R ⊗ A` to `R₂`.
pub fn ancilla_isometry_channel(
    dim_r: usize,
    ancilla: &DensityOperator,
    v: &ComplexMatrix,
) -> Result<QuantumChannel> {
    let da = ancilla.dim();
    if v.cols() != dim_r * da {
        return Err(Error::DimensionMismatch {
            context: "isometry input vs register ⊗ ancilla",
            expected: dim_r * da,
            found: v.cols(),
        });
    }
    let eig = ancilla.eigensystem();
    let tau = eig.cutoff();
    let mut kraus = Vec::new();
    for (a, &l) in eig.eigenvalues.iter().enumerate() {
        if l <= tau {
            continue;
        }
        // |r⟩ ↦ √λ_a V (|r⟩ ⊗ |a⟩)
        let ket = eig.vector(a);
        let embed = ComplexMatrix::from_fn(dim_r * da, dim_r, |row, r| {
            if row / da == r {
                ket[row % da] * libm::sqrt(l)
            } else {
                crate::linalg::real(0.0)
            }
        });
        kraus.push(v * &embed);
    }
    QuantumChannel::new(kraus)
}

/// Channels `E_0` and `E_1..E_{d_S²}` that pin down a belief's signature.
#[derive(Clone, Debug)]
pub struct WitnessChannelFamily {
    pub channels: Vec<QuantumChannel>,
    pub povm: Povm,
}

/// `E_0(ρ) = Tr[ρ] 𝟙/d_T` and
/// `E_k(ρ) = ½ Tr[ρ] 𝟙/d_T + ½ Tr[F_k ρ] |0⟩⟨0| + ½ Tr[(𝟙 − F_k) ρ] |1⟩⟨1|`
/// for an informationally complete POVM `{F_k}`. Every output is full rank.
pub fn witness_family(dim_s: usize, dim_t: usize) -> Result<WitnessChannelFamily> {
    if dim_t < 2 {
        return Err(Error::DimensionMismatch {
            context: "witness channel output (needs at least 2)",
            expected: 2,
            found: dim_t,
        });
    }
    let povm = Povm::informationally_complete(dim_s);
    let e0 = QuantumChannel::constant(dim_s, &DensityOperator::maximally_mixed(dim_t));
    let mut channels = alloc::vec![e0.clone()];
    let id = ComplexMatrix::identity(dim_s);
    for f in povm.effects() {
        let binary = Povm::new(alloc::vec![f.clone(), &id - f])?;
        let m = QuantumChannel::measurement_into(&binary, dim_t)?;
        channels.push(QuantumChannel::mixture(&[(0.5, &e0), (0.5, &m)])?);
    }
    Ok(WitnessChannelFamily { channels, povm })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    pub seed: u64,
    pub random_channels: usize,
    pub tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_ORACLE_SEED,
            random_channels: DEFAULT_ORACLE_RANDOM_CHANNELS,
            tol: ORACLE_TOL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleReport {
    pub equivalent: bool,
    pub seed: u64,
    pub channels_tested: usize,
    /// Largest `‖R_β(σ) − R_γ(σ)‖_F` over the battery.
    pub max_deviation: f64,
}

/// Brute-force equivalence: the witness family plus seeded random channels,
/// each probed on a spanning set of evidence states.
pub fn oracle_equivalent(b1: &Belief, b2: &Belief, cfg: &OracleConfig) -> Result<OracleReport> {
    if b1.dim_s() != b2.dim_s() {
        return Err(Error::DimensionMismatch {
            context: "belief systems",
            expected: b1.dim_s(),
            found: b2.dim_s(),
        });
    }
    let ds = b1.dim_s();
    let mut battery = witness_family(ds, 2)?.channels;
    let mut rng = rng_from_seed(cfg.seed);
    for i in 0..cfg.random_channels {
        let dim_t = 2 + i % 2;
        let env = 1 + i % 3;
        battery.push(random_channel(&mut rng, ds, dim_t, env));
    }

    let opts = RetrodictOptions::projecting();
    let mut max_deviation: f64 = 0.0;
    for channel in &battery {
        let m1 = RetrodictionMap::new(channel, b1)?;
        let m2 = RetrodictionMap::new(channel, b2)?;
        for probe in states::spanning_projectors(channel.dim_out()) {
            let sigma = DensityOperator::new(probe)?;
            let r1 = m1.apply(&sigma, opts)?.updated_s;
            let r2 = m2.apply(&sigma, opts)?.updated_s;
            max_deviation = max_deviation.max(r1.matrix().distance(r2.matrix()));
        }
    }
    Ok(OracleReport {
        equivalent: max_deviation <= cfg.tol,
        seed: cfg.seed,
        channels_tested: battery.len(),
        max_deviation,
    })
}

/// Smallest eigenvalue of every witness output on `ρ`.
pub fn witness_min_output_eigenvalue(family: &WitnessChannelFamily, rho: &DensityOperator) -> Result<f64> {
    let mut min = f64::INFINITY;
    for ch in &family.channels {
        let out = ch.apply(rho)?;
        min = min.min(hermitian_eig(out.matrix())?.min_eigenvalue());
    }
    Ok(min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{partial_transpose, real, C64, ZERO};
    use crate::model::BuiltinBelief;
    use crate::random::*;
    use proptest::prelude::*;

    #[test]
    fn flat_signature_is_vectorized_root() {
        // √(𝟙/2) = 𝟙/√2, |𝟙/√2⟩⟩ = (|00⟩+|11⟩)/√2.
        let sig = signature(&BuiltinBelief::Flat.belief()).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let expected = ComplexMatrix::projector(&[real(s), ZERO, ZERO, real(s)]);
        assert!(sig.operator.approx_eq(&expected, 1e-14));
    }

    #[test]
    fn proper_01_signature_is_diagonal() {
        let sig = signature(&BuiltinBelief::Proper01.belief()).unwrap();
        assert!(sig.operator.approx_eq(&ComplexMatrix::diag_real(&[0.5, 0.0, 0.0, 0.5]), 1e-14));
    }

    #[test]
    fn signature_marginal_is_belief_marginal() {
        let mut rng = rng_from_seed(40);
        for dr in 1..5 {
            let b = random_belief(&mut rng, 2, dr, 2 * dr);
            let sig = signature(&b).unwrap();
            assert!(sig.marginal().approx_eq(b.marginal_s().matrix(), 1e-10));
            let eig = hermitian_eig(&sig.operator).unwrap();
            assert!(eig.check_psd().is_ok());
        }
    }

    #[test]
    fn builtin_equivalences() {
        let tol = DEFAULT_EQUIVALENCE_TOL;
        let b1 = BuiltinBelief::Proper01.belief();
        let b2 = BuiltinBelief::ImproperPhiPlus.belief();
        let r = equivalent(&b1, &b2, tol).unwrap();
        assert!(!r.equivalent);
        assert!(r.marginal_distance < 1e-12);
        let r = equivalent(&BuiltinBelief::XyzDesign.belief(), &BuiltinBelief::SicDesign.belief(), tol).unwrap();
        assert!(r.equivalent, "{r:?}");
        let r = equivalent(&b2, &b2, tol).unwrap();
        assert!(r.signature_distance < 1e-12);
    }

    #[test]
    fn dim_mismatch() {
        let b3 = random_belief(&mut rng_from_seed(1), 3, 1, 3);
        assert!(equivalent(&BuiltinBelief::Flat.belief(), &b3, 1e-9).is_err());
        assert!(oracle_equivalent(&BuiltinBelief::Flat.belief(), &b3, &OracleConfig::default()).is_err());
    }

    #[test]
    fn second_moment_examples() {
        let xyz = BuiltinBelief::XyzDesign.ensemble().unwrap();
        let sic = BuiltinBelief::SicDesign.ensemble().unwrap();
        let sym = symmetric_second_moment(2);
        let m_xyz = ensemble_second_moment(&xyz).unwrap();
        let m_sic = ensemble_second_moment(&sic).unwrap();
        assert!(m_xyz.approx_eq(&sym, 1e-12));
        assert!(m_sic.approx_eq(&m_xyz, 1e-12));

        let single = StateEnsemble::pure(&[states::ket0()], &[1.0]).unwrap();
        let m = ensemble_second_moment(&single).unwrap();
        assert!(m.approx_eq(&ComplexMatrix::unit(4, 4, 0, 0), 0.0));
    }

    #[test]
    fn second_moment_rejects_mixed_members() {
        let ens = StateEnsemble::new(alloc::vec![(DensityOperator::maximally_mixed(2), 1.0)]).unwrap();
        assert!(matches!(ensemble_second_moment(&ens), Err(Error::NotPure { index: 0, .. })));
    }

    #[test]
    fn sqrt_moment_examples() {
        let xyz = BuiltinBelief::XyzDesign.ensemble().unwrap();
        assert!(ensemble_sqrt_moment(&xyz)
            .unwrap()
            .approx_eq(&ensemble_second_moment(&xyz).unwrap(), 1e-10));

        let flat = StateEnsemble::new(alloc::vec![(DensityOperator::maximally_mixed(2), 1.0)]).unwrap();
        let m = ensemble_sqrt_moment(&flat).unwrap();
        assert!(m.approx_eq(&ComplexMatrix::identity(4).scale_real(0.5), 1e-14));

        let z = BuiltinBelief::Proper01.ensemble().unwrap();
        let mz = ensemble_sqrt_moment(&z).unwrap();
        assert!(mz.approx_eq(&ComplexMatrix::diag_real(&[0.5, 0.0, 0.0, 0.5]), 1e-14));
        let (eq, _) = ensembles_equivalent(&flat, &z, DEFAULT_EQUIVALENCE_TOL).unwrap();
        assert!(!eq);
    }

    #[test]
    fn transposed_and_plain_sqrt_moments_decide_alike() {
        // Σ p √ρ⊗√ρ^T is the partial transpose of Σ p √ρ⊗√ρ, so equality of
        // one is equality of the other.
        let mut rng = rng_from_seed(77);
        for _ in 0..10 {
            let a = StateEnsemble::uniform((0..3).map(|_| random_density(&mut rng, 2, 2)).collect()).unwrap();
            let u = haar_unitary(&mut rng, 2);
            let rotated = StateEnsemble::uniform(
                a.members()
                    .iter()
                    .map(|(r, _)| DensityOperator::new(r.matrix().conjugate_by(&u)).unwrap())
                    .collect(),
            )
            .unwrap();
            for other in [&a, &rotated] {
                let plain = ensemble_sqrt_moment(&a).unwrap().distance(&ensemble_sqrt_moment(other).unwrap());
                let t1 = partial_transpose(&ensemble_sqrt_moment(&a).unwrap(), &[2, 2], &[1]).unwrap();
                let t2 = partial_transpose(&ensemble_sqrt_moment(other).unwrap(), &[2, 2], &[1]).unwrap();
                assert!((plain - t1.distance(&t2)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn witness_family_shape_and_rank() {
        let fam = witness_family(2, 2).unwrap();
        assert_eq!(fam.channels.len(), 5);
        let mut rng = rng_from_seed(5);
        let e0_out = fam.channels[0].apply(&random_density(&mut rng, 2, 2)).unwrap();
        assert!(e0_out.matrix().approx_eq(&ComplexMatrix::identity(2).scale_real(0.5), 1e-14));
        let min = witness_min_output_eigenvalue(&fam, &DensityOperator::maximally_mixed(2)).unwrap();
        assert!(min >= 0.25 - 1e-12);
        for _ in 0..10 {
            let rho = random_density(&mut rng, 2, 1);
            assert!(witness_min_output_eigenvalue(&fam, &rho).unwrap() >= 0.25 - 1e-12);
        }
        let fam3 = witness_family(3, 4).unwrap();
        assert_eq!(fam3.channels.len(), 10);
        assert!(witness_family(2, 1).is_err());
    }

    #[test]
    fn witness_adjoint_on_register_zero() {
        // E_k†(|0⟩⟨0|) = ½ 𝟙/d_T + ½ F_k.
        let fam = witness_family(2, 2).unwrap();
        let p0 = ComplexMatrix::unit(2, 2, 0, 0);
        for (k, f) in fam.povm.effects().iter().enumerate() {
            let back = fam.channels[k + 1].adjoint_apply(&p0).unwrap();
            let expected = &ComplexMatrix::identity(2).scale_real(0.25) + &f.scale_real(0.5);
            assert!(back.approx_eq(&expected, 1e-14));
        }
    }

    #[test]
    fn oracle_examples() {
        let cfg = OracleConfig::default();
        let b1 = BuiltinBelief::Proper01.belief();
        let b2 = BuiltinBelief::ImproperPhiPlus.belief();
        let r = oracle_equivalent(&b1, &b2, &cfg).unwrap();
        assert!(!r.equivalent);
        assert_eq!(r.channels_tested, 25);
        assert!(oracle_equivalent(&b1, &b1, &cfg).unwrap().equivalent);
        let xyz = BuiltinBelief::XyzDesign.belief();
        let sic = BuiltinBelief::SicDesign.belief();
        assert!(oracle_equivalent(&xyz, &sic, &cfg).unwrap().equivalent);
    }

    #[test]
    fn proper_vs_improper_disagree_on_z_measurement() {
        let e = crate::model::measurement_channel(&Povm::z_basis()).unwrap();
        let sigma = DensityOperator::pure(&basis_ket(2, 0)).unwrap();
        let r1 = crate::retrodiction::petz_extended(&e, &BuiltinBelief::Proper01.belief(), &sigma).unwrap();
        let r2 = crate::retrodiction::petz_extended(&e, &BuiltinBelief::ImproperPhiPlus.belief(), &sigma).unwrap();
        assert!(r1.updated_s.matrix().distance(r2.updated_s.matrix()) > 0.5);
    }

    #[test]
    fn symmetric_moment_trace() {
        for d in 2..5 {
            assert!((symmetric_second_moment(d).trace().re - 1.0).abs() < 1e-14);
        }
        // SWAP|01⟩ = |10⟩
        let s = symmetric_second_moment(2);
        assert!((s[(1, 2)] - C64::new(1.0 / 6.0, 0.0)).norm() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn ancilla_invariance(seed in any::<u64>(), dr in 1usize..4, da in 1usize..4) {
            let mut rng = rng_from_seed(seed);
            let b = random_belief(&mut rng, 2, dr, 2 * dr);
            let sigma = random_density(&mut rng, da, da);
            let d = signature(&b).unwrap().distance(&signature(&b.with_ancilla(&sigma)).unwrap());
            prop_assert!(d <= 1e-10);
        }

        #[test]
        fn isometry_invariance(seed in any::<u64>(), dr in 1usize..4, extra in 0usize..3) {
            let mut rng = rng_from_seed(seed);
            let b = random_belief(&mut rng, 2, dr, 2 * dr);
            let v = haar_isometry(&mut rng, dr + extra, dr);
            let d = signature(&b).unwrap().distance(&signature(&b.apply_register_isometry(&v).unwrap()).unwrap());
            prop_assert!(d <= 1e-10);
        }

        #[test]
        fn reversible_channel_invariance(seed in any::<u64>(), dr in 1usize..3, da in 1usize..3, extra in 0usize..2) {
            let mut rng = rng_from_seed(seed);
            let b = random_belief(&mut rng, 2, dr, 2 * dr);
            let anc = random_density(&mut rng, da, da);
            let v = haar_isometry(&mut rng, dr * da + extra, dr * da);
            let p = ancilla_isometry_channel(dr, &anc, &v).unwrap();
            let transformed = b.apply_register_channel(&p).unwrap();
            let d = signature(&b).unwrap().distance(&signature(&transformed).unwrap());
            prop_assert!(d <= 1e-10);
        }
    }
}
