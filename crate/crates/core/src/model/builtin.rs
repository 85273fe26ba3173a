use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::{states, Belief, DensityOperator, StateEnsemble};
use crate::linalg::ComplexMatrix;

/// The built-in qubit beliefs. All have marginal `𝟙/2` on `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BuiltinBelief {
    /// `𝟙/2` with no extra system.
    Flat,
    /// `½|0⟩⟨0|⊗|0̃⟩⟨0̃| + ½|1⟩⟨1|⊗|1̃⟩⟨1̃|`: a coin choosing `|0⟩` or `|1⟩`.
    Proper01,
    /// `|Φ+⟩⟨Φ+|` on `S ⊗ R`.
    ImproperPhiPlus,
    /// Uniform mixture of the six Pauli eigenstates, tagged by a 6-level
    /// register; a projective 2-design standing in for the Haar ensemble.
    XyzDesign,
    /// Uniform mixture of the four tetrahedral (SIC) states.
    SicDesign,
}

impl BuiltinBelief {
    pub const ALL: [BuiltinBelief; 5] = [
        BuiltinBelief::Flat,
        BuiltinBelief::Proper01,
        BuiltinBelief::ImproperPhiPlus,
        BuiltinBelief::XyzDesign,
        BuiltinBelief::SicDesign,
    ];

    /// The four beliefs compared in the reference table and recovery plots.
    pub const COMPARED: [BuiltinBelief; 4] = [
        BuiltinBelief::Flat,
        BuiltinBelief::Proper01,
        BuiltinBelief::ImproperPhiPlus,
        BuiltinBelief::XyzDesign,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinBelief::Flat => "beta-s",
            BuiltinBelief::Proper01 => "beta-1",
            BuiltinBelief::ImproperPhiPlus => "beta-2",
            BuiltinBelief::XyzDesign => "beta-xyz",
            BuiltinBelief::SicDesign => "beta-sic",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            BuiltinBelief::Flat => "no extra system",
            BuiltinBelief::Proper01 => "{|0>,|1>} ensemble (proper mixture)",
            BuiltinBelief::ImproperPhiPlus => "half of |Phi+> (improper mixture)",
            BuiltinBelief::XyzDesign => "Pauli eigenstate 2-design (Haar stand-in)",
            BuiltinBelief::SicDesign => "tetrahedral SIC 2-design",
        }
    }

    /// The member ensemble, for the beliefs that are proper mixtures.
    pub fn ensemble(self) -> Option<StateEnsemble> {
        let pure = |kets: Vec<Vec<crate::C64>>| {
            let p = 1.0 / kets.len() as f64;
            let probs: Vec<f64> = kets.iter().map(|_| p).collect();
            StateEnsemble::pure(&kets, &probs).expect("built-in ensemble")
        };
        match self {
            BuiltinBelief::Proper01 => Some(pure(alloc::vec![states::ket0(), states::ket1()])),
            BuiltinBelief::XyzDesign => Some(pure(
                states::pauli_eigenstates().into_iter().map(|(_, k)| k).collect(),
            )),
            BuiltinBelief::SicDesign => Some(
                StateEnsemble::uniform(
                    states::tetrahedron()
                        .iter()
                        .map(|&r| DensityOperator::from_bloch(r).expect("pure qubit state"))
                        .collect(),
                )
                .expect("built-in ensemble"),
            ),
            BuiltinBelief::Flat | BuiltinBelief::ImproperPhiPlus => None,
        }
    }

    pub fn belief(self) -> Belief {
        match self {
            BuiltinBelief::Flat => Belief::from_state(&DensityOperator::maximally_mixed(2)),
            BuiltinBelief::ImproperPhiPlus => {
                Belief::from_trusted(ComplexMatrix::projector(&states::phi_plus()), 2, 2)
            }
            other => other.ensemble().expect("proper mixture").to_belief(),
        }
    }
}

/// Builds a named built-in belief.
pub fn builtin_belief(name: BuiltinBelief) -> Belief {
    name.belief()
}

impl fmt::Display for BuiltinBelief {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownBuiltin;

impl fmt::Display for UnknownBuiltin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown built-in belief")
    }
}

impl FromStr for BuiltinBelief {
    type Err = UnknownBuiltin;

    /// Accepts the short names (`beta-s`, `beta-1`, ...) and descriptive
    /// aliases (`flat`, `proper-01`, `improper-phi-plus`, `xyz-design`,
    /// `sic-design`); `_` and `-` are interchangeable.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut key = alloc::string::String::with_capacity(s.len());
        for c in s.trim().chars() {
            key.push(if c == '_' { '-' } else { c.to_ascii_lowercase() });
        }
        Ok(match key.as_str() {
            "beta-s" | "flat" => BuiltinBelief::Flat,
            "beta-1" | "proper-01" | "proper" => BuiltinBelief::Proper01,
            "beta-2" | "improper-phi-plus" | "improper" => BuiltinBelief::ImproperPhiPlus,
            "beta-xyz" | "xyz-design" | "beta-haar" | "haar" => BuiltinBelief::XyzDesign,
            "beta-sic" | "sic-design" => BuiltinBelief::SicDesign,
            _ => return Err(UnknownBuiltin),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_marginals_are_maximally_mixed() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        for b in BuiltinBelief::ALL {
            let belief = b.belief();
            assert!(belief.marginal_s().matrix().approx_eq(&half, 1e-12), "{b}");
            assert!((belief.joint().trace() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn proper_01_matches_closed_form() {
        let b = BuiltinBelief::Proper01.belief();
        let expected = ComplexMatrix::diag_real(&[0.5, 0.0, 0.0, 0.5]);
        assert!(b.joint().matrix().approx_eq(&expected, 1e-15));
    }

    #[test]
    fn register_dimensions() {
        let dims: Vec<usize> = BuiltinBelief::ALL.iter().map(|b| b.belief().dim_r()).collect();
        assert_eq!(dims, [1, 2, 2, 6, 4]);
        assert!(BuiltinBelief::ImproperPhiPlus.belief().is_pure());
        assert!(!BuiltinBelief::XyzDesign.belief().is_pure());
    }

    #[test]
    fn parse_names_and_aliases() {
        assert_eq!("beta-xyz".parse(), Ok(BuiltinBelief::XyzDesign));
        assert_eq!("xyz_design".parse(), Ok(BuiltinBelief::XyzDesign));
        assert_eq!("improper-phi-plus".parse(), Ok(BuiltinBelief::ImproperPhiPlus));
        assert_eq!("proper_01".parse(), Ok(BuiltinBelief::Proper01));
        assert_eq!("Flat".parse(), Ok(BuiltinBelief::Flat));
        assert!("beta-3".parse::<BuiltinBelief>().is_err());
        for b in BuiltinBelief::ALL {
            assert_eq!(b.name().parse(), Ok(b));
        }
    }
}
