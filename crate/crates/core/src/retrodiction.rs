//! Petz retrodiction with plain and extended priors.
//!
//! For a channel `E: S → T` and a belief `β` on `S ⊗ R` with marginal `β_S`,
//! the prior-extended Petz map sends evidence `σ` on `T` to
//!
//! ```text
//! √β ( E†( E(β_S)^{-1/2} σ E(β_S)^{-1/2} ) ⊗ 𝟙_R ) √β
//! ```
//!
//! and the retrodiction map on `S` is its partial trace over `R`. With
//! `dim_R = 1` this is the ordinary Petz map. Inverse square roots are
//! taken on the support of `E(β_S)`; evidence outside that support is
//! either rejected or projected away, never silently renormalized.

use alloc::vec;

use crate::error::{Error, Result};
use crate::linalg::{partial_trace, psd_sqrt, support_inv_sqrt, support_projector, ComplexMatrix};
use crate::model::{Belief, DensityOperator, QuantumChannel};

/// Evidence weight outside `supp E(β_S)` tolerated without projection.
pub const SUPPORT_TOL: f64 = 1e-8;

/// How to treat evidence that is not supported on `supp E(β_S)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RetrodictOptions {
    /// Project the evidence onto the support instead of failing.
    pub project_support: bool,
    /// Divide the result by its trace; the deficit is still reported.
    pub renormalize: bool,
}

impl RetrodictOptions {
    pub fn projecting() -> Self {
        Self {
            project_support: true,
            renormalize: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RetrodictionResult {
    /// Updated joint belief on `S ⊗ R`; absent for plain Petz updates.
    pub updated_joint: Option<DensityOperator>,
    pub updated_s: DensityOperator,
    /// Trace lost because the evidence had weight outside the support.
    pub norm_deficit: f64,
}

/// The retrodiction map of a fixed channel and belief, with the spectral
/// factors computed once.
#[derive(Clone, Debug)]
pub struct RetrodictionMap<'a> {
    channel: &'a QuantumChannel,
    dim_s: usize,
    dim_r: usize,
    sqrt_joint: ComplexMatrix,
    predicted: ComplexMatrix,
    predicted_inv_sqrt: ComplexMatrix,
    support: ComplexMatrix,
}

impl<'a> RetrodictionMap<'a> {
    pub fn new(channel: &'a QuantumChannel, belief: &Belief) -> Result<Self> {
        if belief.dim_s() != channel.dim_in() {
            return Err(Error::DimensionMismatch {
                context: "belief system vs channel input",
                expected: channel.dim_in(),
                found: belief.dim_s(),
            });
        }
        let predicted = channel.apply_matrix(belief.marginal_s().matrix())?;
        let predicted_inv_sqrt = support_inv_sqrt(&predicted)?;
        let support = support_projector(&predicted)?;
        Ok(Self {
            channel,
            dim_s: belief.dim_s(),
            dim_r: belief.dim_r(),
            sqrt_joint: psd_sqrt(belief.joint().matrix())?,
            predicted,
            predicted_inv_sqrt,
            support,
        })
    }

    /// Map for a prior on `S` alone.
    pub fn plain(channel: &'a QuantumChannel, prior: &DensityOperator) -> Result<Self> {
        Self::new(channel, &Belief::from_state(prior))
    }

    /// `E(β_S)`.
    pub fn predicted(&self) -> &ComplexMatrix {
        &self.predicted
    }

    pub fn support(&self) -> &ComplexMatrix {
        &self.support
    }

    pub fn has_full_support(&self) -> bool {
        (self.support.trace().re - self.predicted.rows() as f64).abs() < 0.5
    }

    /// `E†(E(β_S)^{-1/2} X E(β_S)^{-1/2})` for any operator `X` on `T`.
    fn pull_back(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let inner = (&self.predicted_inv_sqrt * x).matmul(&self.predicted_inv_sqrt);
        self.channel.adjoint_apply(&inner)
    }

    /// Linear extension of the joint update to arbitrary operators on `T`.
    pub fn apply_joint_linear(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let f = self.pull_back(x)?;
        let lifted = f.kron(&ComplexMatrix::identity(self.dim_r));
        Ok((&self.sqrt_joint * &lifted).matmul(&self.sqrt_joint))
    }

    /// Linear extension of the retrodiction map on `S`.
    pub fn apply_linear(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let joint = self.apply_joint_linear(x)?;
        if self.dim_r == 1 {
            return Ok(joint);
        }
        partial_trace(&joint, &[self.dim_s, self.dim_r], &[1])
    }

    pub fn apply(&self, sigma: &DensityOperator, opts: RetrodictOptions) -> Result<RetrodictionResult> {
        if sigma.dim() != self.channel.dim_out() {
            return Err(Error::DimensionMismatch {
                context: "evidence vs channel output",
                expected: self.channel.dim_out(),
                found: sigma.dim(),
            });
        }
        let inside = (&self.support * sigma.matrix()).trace().re;
        let outside = (sigma.trace() - inside).max(0.0);
        if outside > SUPPORT_TOL && !opts.project_support {
            return Err(Error::SupportViolation { weight: outside });
        }
        let mut joint = self.apply_joint_linear(sigma.matrix())?;
        let mut updated_s = if self.dim_r == 1 {
            joint.clone()
        } else {
            partial_trace(&joint, &[self.dim_s, self.dim_r], &[1])?
        };
        if opts.renormalize {
            let tr = updated_s.trace().re;
            if tr <= 0.0 {
                return Err(Error::SupportViolation { weight: outside });
            }
            joint = joint.scale_real(1.0 / tr);
            updated_s = updated_s.scale_real(1.0 / tr);
        }
        let updated_joint = (self.dim_r > 1)
            .then(|| DensityOperator::from_trusted(joint, vec![self.dim_s, self.dim_r]));
        Ok(RetrodictionResult {
            updated_joint,
            updated_s: DensityOperator::from_trusted(updated_s, vec![self.dim_s]),
            norm_deficit: outside,
        })
    }
}

/// Petz map with a prior on `S` alone; strict about the support condition.
pub fn petz(e: &QuantumChannel, prior: &DensityOperator, sigma: &DensityOperator) -> Result<DensityOperator> {
    Ok(petz_with(e, prior, sigma, RetrodictOptions::default())?.updated_s)
}

pub fn petz_with(
    e: &QuantumChannel,
    prior: &DensityOperator,
    sigma: &DensityOperator,
    opts: RetrodictOptions,
) -> Result<RetrodictionResult> {
    RetrodictionMap::plain(e, prior)?.apply(sigma, opts)
}

/// Prior-extended Petz map; strict about the support condition.
pub fn petz_extended(e: &QuantumChannel, belief: &Belief, sigma: &DensityOperator) -> Result<RetrodictionResult> {
    petz_extended_with(e, belief, sigma, RetrodictOptions::default())
}

pub fn petz_extended_with(
    e: &QuantumChannel,
    belief: &Belief,
    sigma: &DensityOperator,
    opts: RetrodictOptions,
) -> Result<RetrodictionResult> {
    RetrodictionMap::new(e, belief)?.apply(sigma, opts)
}

/// Trace-preservation tolerance for materialized recovery channels.
pub const RECOVERY_TP_TOL: f64 = 1e-9;

/// Materializes `ρ ↦ R_ext^{E,β}(E(ρ))` as a channel on `S`.
///
/// The composite is evaluated on the `d²` matrix units to form its Choi
/// matrix, from which a Kraus set is extracted. Requires `E(β_S)` to be
/// full rank.
pub fn recovery_compose(e: &QuantumChannel, belief: &Belief) -> Result<QuantumChannel> {
    let map = RetrodictionMap::new(e, belief)?;
    if !map.has_full_support() {
        let d = map.predicted().rows() as f64;
        let missing = d - map.support().trace().re;
        return Err(Error::SupportViolation { weight: missing / d });
    }
    let d = e.dim_in();
    let mut choi = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let unit = ComplexMatrix::unit(d, d, i, j);
            let image = map.apply_linear(&e.apply_matrix(&unit)?)?;
            choi = &choi + &unit.kron(&image);
        }
    }
    QuantumChannel::from_choi(&choi.hermitian_part(), d, d, RECOVERY_TP_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{jeffrey_update_extended, JointDistribution};
    use crate::linalg::C64;
    use crate::model::{measurement_channel, states, BuiltinBelief, Povm};
    use crate::random::*;
    use proptest::prelude::*;

    fn ket_state(k: &[C64]) -> DensityOperator {
        DensityOperator::pure(k).unwrap()
    }

    fn register(k: usize) -> DensityOperator {
        DensityOperator::pure(&basis_ket(2, k)).unwrap()
    }

    fn measure_z() -> QuantumChannel {
        measurement_channel(&Povm::z_basis()).unwrap()
    }

    fn half() -> ComplexMatrix {
        ComplexMatrix::identity(2).scale_real(0.5)
    }

    #[test]
    fn flat_prior_under_z_measurement() {
        let out = petz(&measure_z(), &DensityOperator::maximally_mixed(2), &register(0)).unwrap();
        assert!(out.matrix().approx_eq(&ComplexMatrix::projector(&states::ket0()), 1e-14));
    }

    #[test]
    fn identity_channel_returns_evidence() {
        let mut rng = rng_from_seed(8);
        let prior = random_density(&mut rng, 3, 3);
        let sigma = random_density(&mut rng, 3, 2);
        let out = petz(&QuantumChannel::identity(3), &prior, &sigma).unwrap();
        assert!(out.matrix().approx_eq(sigma.matrix(), 1e-12));
    }

    #[test]
    fn flat_prior_depolarizing_is_self() {
        // D unital and self-adjoint with flat prior: the Petz map is D itself,
        // so D(D(|0⟩⟨0|)) = diag(0.5 + 0.81·0.5, 0.5 − 0.81·0.5).
        let d = QuantumChannel::depolarizing(2, 0.1).unwrap();
        let sigma = d.apply(&ket_state(&states::ket0())).unwrap();
        let out = petz(&d, &DensityOperator::maximally_mixed(2), &sigma).unwrap();
        assert!(out.matrix().approx_eq(&ComplexMatrix::diag_real(&[0.905, 0.095]), 1e-14));
    }

    #[test]
    fn proper_and_improper_mixtures_differ() {
        let e = measure_z();
        let b1 = BuiltinBelief::Proper01.belief();
        let b2 = BuiltinBelief::ImproperPhiPlus.belief();
        for k in 0..2 {
            let proper = petz_extended(&e, &b1, &register(k)).unwrap();
            let expected = ComplexMatrix::projector(&basis_ket(2, k));
            assert!(proper.updated_s.matrix().approx_eq(&expected, 1e-12));
            let improper = petz_extended(&e, &b2, &register(k)).unwrap();
            assert!(improper.updated_s.matrix().approx_eq(&half(), 1e-12));
            assert!(improper
                .updated_joint
                .unwrap()
                .matrix()
                .approx_eq(b2.joint().matrix(), 1e-12));
        }
    }

    #[test]
    fn xyz_design_biases_towards_outcome() {
        let out = petz_extended(&measure_z(), &BuiltinBelief::XyzDesign.belief(), &register(0)).unwrap();
        let expected = (&ComplexMatrix::projector(&states::ket0()) + &ComplexMatrix::identity(2)).scale_real(1.0 / 3.0);
        assert!(out.updated_s.matrix().approx_eq(&expected, 1e-12));
    }

    #[test]
    fn support_violation_and_projection() {
        // Prior |0⟩⟨0| through the identity: evidence |+⟩ has weight ½ outside.
        let prior = ket_state(&states::ket0());
        let id = QuantumChannel::identity(2);
        let sigma = ket_state(&states::plus());
        match petz(&id, &prior, &sigma) {
            Err(Error::SupportViolation { weight }) => assert!((weight - 0.5).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        let projected = petz_with(&id, &prior, &sigma, RetrodictOptions::projecting()).unwrap();
        assert!((projected.norm_deficit - 0.5).abs() < 1e-12);
        assert!((projected.updated_s.trace() - 0.5).abs() < 1e-10);
        let renormalized = petz_with(
            &id,
            &prior,
            &sigma,
            RetrodictOptions {
                project_support: true,
                renormalize: true,
            },
        )
        .unwrap();
        assert!((renormalized.updated_s.trace() - 1.0).abs() < 1e-12);
        assert!((renormalized.norm_deficit - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dimension_errors() {
        let e = measure_z();
        let b = random_belief(&mut rng_from_seed(1), 3, 2, 6);
        assert!(matches!(
            petz_extended(&e, &b, &register(0)),
            Err(Error::DimensionMismatch { .. })
        ));
        let sigma3 = DensityOperator::maximally_mixed(3);
        assert!(matches!(
            petz_extended(&e, &BuiltinBelief::Flat.belief(), &sigma3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn recovery_of_depolarizing_with_flat_prior_is_double_depolarizing() {
        let d = QuantumChannel::depolarizing(2, 0.1).unwrap();
        let rec = recovery_compose(&d, &BuiltinBelief::Flat.belief()).unwrap();
        let dd = QuantumChannel::depolarizing(2, 1.0 - 0.81).unwrap();
        assert!(rec.choi().approx_eq(&dd.choi(), 1e-12));
    }

    #[test]
    fn recovery_with_pure_belief_is_constant() {
        let d = QuantumChannel::depolarizing(2, 0.1).unwrap();
        let rec = recovery_compose(&d, &BuiltinBelief::ImproperPhiPlus.belief()).unwrap();
        let constant = QuantumChannel::constant(2, &DensityOperator::maximally_mixed(2));
        assert!(rec.choi().approx_eq(&constant.choi(), 1e-12));
    }

    #[test]
    fn recovery_of_identity_is_identity() {
        let mut rng = rng_from_seed(17);
        let bs = random_density(&mut rng, 2, 2);
        let br = random_density(&mut rng, 3, 3);
        for b in [Belief::from_state(&bs), Belief::product(&bs, &br)] {
            let rec = recovery_compose(&QuantumChannel::identity(2), &b).unwrap();
            let rho = random_density(&mut rng, 2, 2);
            assert!(rec.apply(&rho).unwrap().matrix().approx_eq(rho.matrix(), 1e-10));
        }
    }

    #[test]
    fn identity_channel_still_updates_correlated_beliefs() {
        // Only product beliefs give back the evidence unchanged.
        let rec = recovery_compose(&QuantumChannel::identity(2), &BuiltinBelief::ImproperPhiPlus.belief()).unwrap();
        let rho = ket_state(&states::ket0());
        assert!(rec.apply(&rho).unwrap().matrix().approx_eq(&half(), 1e-12));
    }

    #[test]
    fn recovery_needs_full_rank_prediction() {
        let e = measure_z();
        let b = Belief::from_state(&ket_state(&states::ket0()));
        assert!(matches!(recovery_compose(&e, &b), Err(Error::SupportViolation { .. })));
    }

    #[test]
    fn classical_embedding_matches_jeffrey() {
        let mut rng = rng_from_seed(33);
        for _ in 0..20 {
            let (na, nc, nb) = (3, 2, 4);
            let joint_p = random_distribution(&mut rng, na * nc);
            let prior = JointDistribution::new(na, nc, joint_p.weights().to_vec()).unwrap();
            let phi = random_stochastic(&mut rng, nb, na);
            let r = random_distribution(&mut rng, nb);
            let q = jeffrey_update_extended(&prior, &phi, &r).unwrap().marginal_a();

            let belief = Belief::new(ComplexMatrix::diag_real(prior.weights()), na, nc).unwrap();
            let e = QuantumChannel::classical(&phi).unwrap();
            let sigma = DensityOperator::new(ComplexMatrix::diag_real(r.weights())).unwrap();
            let out = petz_extended(&e, &belief, &sigma).unwrap();
            assert!(out.updated_s.matrix().approx_eq(&ComplexMatrix::diag_real(q.weights()), 1e-10));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn prior_is_recovered(seed in any::<u64>(), ds in 2usize..4, dt in 2usize..4, env in 1usize..4) {
            let mut rng = rng_from_seed(seed);
            let e = random_channel(&mut rng, ds, dt, env);
            let prior = random_density(&mut rng, ds, ds);
            let sigma = e.apply(&prior).unwrap();
            let out = petz_with(&e, &prior, &sigma, RetrodictOptions::projecting()).unwrap();
            prop_assert!(out.updated_s.matrix().distance(prior.matrix()) <= 1e-9);
        }

        #[test]
        fn joint_prior_is_recovered(seed in any::<u64>(), dr in 1usize..4, dt in 2usize..4, env in 1usize..4) {
            let mut rng = rng_from_seed(seed);
            let e = random_channel(&mut rng, 2, dt, env);
            let b = random_belief(&mut rng, 2, dr, 2 * dr);
            let sigma = e.apply(&b.marginal_s()).unwrap();
            let out = petz_extended_with(&e, &b, &sigma, RetrodictOptions::projecting()).unwrap();
            let joint = out.updated_joint.map(|j| j.into_matrix()).unwrap_or(out.updated_s.into_matrix());
            prop_assert!(joint.distance(b.joint().matrix()) <= 1e-9);
        }

        #[test]
        fn pure_beliefs_never_update(seed in any::<u64>(), dr in 2usize..4, dt in 2usize..4, env in 1usize..4) {
            let mut rng = rng_from_seed(seed);
            let e = random_channel(&mut rng, 2, dt, env);
            let b = random_belief(&mut rng, 2, dr, 1);
            let sigma = random_density(&mut rng, dt, dt);
            let out = petz_extended_with(&e, &b, &sigma, RetrodictOptions::projecting()).unwrap();
            // Full-rank random evidence may leave the support; the update of a
            // pure belief is then β scaled by the supported weight.
            let expected = b.joint().matrix().scale_real(1.0 - out.norm_deficit);
            prop_assert!(out.updated_joint.unwrap().matrix().distance(&expected) <= 1e-9);
        }

        #[test]
        fn product_belief_reduces_to_petz(seed in any::<u64>(), dr in 1usize..4, dt in 2usize..4, env in 1usize..4) {
            let mut rng = rng_from_seed(seed);
            let e = random_channel(&mut rng, 2, dt, env);
            let bs = random_density(&mut rng, 2, 2);
            let br = random_density(&mut rng, dr, dr);
            let sigma = random_density(&mut rng, dt, dt);
            let opts = RetrodictOptions::projecting();
            let ext = petz_extended_with(&e, &Belief::product(&bs, &br), &sigma, opts).unwrap();
            let plain = petz_with(&e, &bs, &sigma, opts).unwrap();
            prop_assert!(ext.updated_s.matrix().distance(plain.updated_s.matrix()) <= 1e-10);
        }

        #[test]
        fn trace_matches_supported_weight(seed in any::<u64>(), dr in 1usize..4, dt in 2usize..5, env in 1usize..3) {
            let mut rng = rng_from_seed(seed);
            let e = random_channel(&mut rng, 2, dt, env);
            let b = random_belief(&mut rng, 2, dr, 2 * dr);
            let sigma = random_density(&mut rng, dt, dt);
            let out = petz_extended_with(&e, &b, &sigma, RetrodictOptions::projecting()).unwrap();
            prop_assert!((out.updated_s.trace() - (1.0 - out.norm_deficit)).abs() <= 1e-10);
            if let Some(j) = &out.updated_joint {
                let reduced = partial_trace(j.matrix(), &[2, dr], &[1]).unwrap();
                prop_assert!(reduced.distance(out.updated_s.matrix()) <= 1e-12);
            }
        }

        #[test]
        fn recovery_channels_are_cptp(seed in any::<u64>(), dr in 1usize..4, env in 2usize..4) {
            let mut rng = rng_from_seed(seed);
            let e = random_channel(&mut rng, 2, 2, env);
            let b = random_belief(&mut rng, 2, dr, 2 * dr);
            let rec = recovery_compose(&e, &b).unwrap();
            prop_assert!(rec.tp_deviation() <= 1e-9);
        }
    }
}
