//! The reference scenarios: a 4×4 grid of updated beliefs for qubit
//! measurements, and recovery of a depolarizing error along the x-z great
//! circle of the Bloch sphere.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::model::{measurement_channel, states, BuiltinBelief, DensityOperator, Povm, QuantumChannel};
use crate::random::basis_ket;
use crate::retrodiction::{petz_extended, recovery_compose};

pub const TABLE1_TOL: f64 = 1e-9;
pub const FIG1_DEPOLARIZING: f64 = 0.1;
pub const DEFAULT_FIG1_SAMPLES: usize = 256;
pub const MIN_FIG1_SAMPLES: usize = 4;

/// Named channels accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelSpec {
    Identity(usize),
    MeasureZ,
    MeasureX,
    Depolarize(f64),
}

impl ChannelSpec {
    pub fn channel(self) -> Result<QuantumChannel> {
        match self {
            ChannelSpec::Identity(d) => Ok(QuantumChannel::identity(d)),
            ChannelSpec::MeasureZ => measurement_channel(&Povm::z_basis()),
            ChannelSpec::MeasureX => measurement_channel(&Povm::x_basis()),
            ChannelSpec::Depolarize(p) => QuantumChannel::depolarizing(2, p),
        }
    }

    pub fn is_measurement(self) -> bool {
        matches!(self, ChannelSpec::MeasureZ | ChannelSpec::MeasureX)
    }

    /// Resolves an evidence label to an output state.
    ///
    /// Measurement channels take outcome labels (`0`/`1` for `measure-z`,
    /// `+`/`-` for `measure-x`) naming register basis states. Other qubit
    /// channels take `0`, `1`, `+`, `-`, `+i`, `-i` as the matching pure
    /// state. `ket0`, `ket1`, `plus`, `minus` spell the same labels.
    pub fn evidence(self, label: &str) -> core::result::Result<DensityOperator, UnknownName> {
        let key = normalize_label(label);
        let ket = match self {
            ChannelSpec::MeasureZ => match key {
                "0" => basis_ket(2, 0),
                "1" => basis_ket(2, 1),
                _ => return Err(UnknownName::evidence(label)),
            },
            ChannelSpec::MeasureX => match key {
                "+" => basis_ket(2, 0),
                "-" => basis_ket(2, 1),
                _ => return Err(UnknownName::evidence(label)),
            },
            ChannelSpec::Identity(2) | ChannelSpec::Depolarize(_) => {
                match states::pauli_eigenstates().into_iter().find(|(name, _)| *name == key) {
                    Some((_, ket)) => ket,
                    None => return Err(UnknownName::evidence(label)),
                }
            }
            ChannelSpec::Identity(d) => match key.parse::<usize>() {
                Ok(k) if k < d => basis_ket(d, k),
                _ => return Err(UnknownName::evidence(label)),
            },
        };
        Ok(DensityOperator::pure(&ket).expect("normalized basis state"))
    }
}

fn normalize_label(label: &str) -> &str {
    match label.trim() {
        "ket0" | "zero" | "0~" => "0",
        "ket1" | "one" | "1~" => "1",
        "plus" | "ket+" | "+~" => "+",
        "minus" | "ket-" | "−" | "-~" | "−~" => "-",
        "plus-i" | "+i" => "+i",
        "minus-i" | "-i" | "−i" => "-i",
        other => other,
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelSpec::Identity(2) => f.write_str("identity"),
            ChannelSpec::Identity(d) => write!(f, "identity:{d}"),
            ChannelSpec::MeasureZ => f.write_str("measure-z"),
            ChannelSpec::MeasureX => f.write_str("measure-x"),
            ChannelSpec::Depolarize(p) => write!(f, "depolarize:{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownName {
    pub kind: &'static str,
    pub name: String,
}

impl UnknownName {
    fn evidence(label: &str) -> Self {
        Self { kind: "evidence label", name: label.into() }
    }
}

impl fmt::Display for UnknownName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown {}: {:?}", self.kind, self.name)
    }
}

impl FromStr for ChannelSpec {
    type Err = UnknownName;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        let err = || UnknownName { kind: "channel", name: s.into() };
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        let (head, arg) = match key.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (key.as_str(), None),
        };
        match (head, arg) {
            ("identity" | "id", None) => Ok(ChannelSpec::Identity(2)),
            ("identity" | "id", Some(d)) => match d.parse::<usize>() {
                Ok(d) if d >= 1 => Ok(ChannelSpec::Identity(d)),
                _ => Err(err()),
            },
            ("measure-z" | "measure-01" | "e01", None) => Ok(ChannelSpec::MeasureZ),
            ("measure-x" | "measure-pm" | "e+-", None) => Ok(ChannelSpec::MeasureX),
            ("depolarize" | "depolarizing", Some(p)) => match p.parse::<f64>() {
                Ok(p) if (0.0..=4.0 / 3.0).contains(&p) => Ok(ChannelSpec::Depolarize(p)),
                _ => Err(err()),
            },
            _ => Err(err()),
        }
    }
}

/// One cell of the reference grid.
#[derive(Clone, Debug)]
pub struct Table1Cell {
    pub belief: BuiltinBelief,
    pub channel: ChannelSpec,
    pub outcome: &'static str,
    pub updated_s: DensityOperator,
    pub expected: ComplexMatrix,
    pub deviation: f64,
}

#[derive(Clone, Debug)]
pub struct Table1 {
    pub cells: Vec<Table1Cell>,
}

impl Table1 {
    pub fn max_deviation(&self) -> f64 {
        self.cells.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation() <= tol
    }
}

/// Closed-form updated beliefs. `p` is the projector onto the qubit state
/// named by the outcome.
fn table1_expected(belief: BuiltinBelief, channel: ChannelSpec, p: &ComplexMatrix) -> ComplexMatrix {
    let half = ComplexMatrix::identity(2).scale_real(0.5);
    match (belief, channel) {
        (BuiltinBelief::Flat, _) => p.clone(),
        (BuiltinBelief::Proper01, ChannelSpec::MeasureZ) => p.clone(),
        (BuiltinBelief::Proper01, _) => half,
        (BuiltinBelief::ImproperPhiPlus, _) => half,
        (BuiltinBelief::XyzDesign | BuiltinBelief::SicDesign, _) => {
            (p + &ComplexMatrix::identity(2)).scale_real(1.0 / 3.0)
        }
    }
}

/// The four beliefs against the four outcomes of the z and x measurements.
/// Cells are ordered belief-major.
pub fn table1() -> Result<Table1> {
    let outcomes: [(ChannelSpec, &'static str, Vec<C64>); 4] = [
        (ChannelSpec::MeasureZ, "0", states::ket0()),
        (ChannelSpec::MeasureZ, "1", states::ket1()),
        (ChannelSpec::MeasureX, "+", states::plus()),
        (ChannelSpec::MeasureX, "-", states::minus()),
    ];
    let z = ChannelSpec::MeasureZ.channel()?;
    let x = ChannelSpec::MeasureX.channel()?;
    let mut cells = Vec::with_capacity(16);
    for belief in BuiltinBelief::COMPARED {
        let b = belief.belief();
        for (spec, outcome, ket) in &outcomes {
            let channel = if *spec == ChannelSpec::MeasureZ { &z } else { &x };
            let sigma = spec.evidence(outcome).expect("built-in outcome label");
            let updated_s = petz_extended(channel, &b, &sigma)?.updated_s;
            let expected = table1_expected(belief, *spec, &ComplexMatrix::projector(ket));
            let deviation = updated_s.matrix().distance(&expected);
            cells.push(Table1Cell {
                belief,
                channel: *spec,
                outcome,
                updated_s,
                expected,
                deviation,
            });
        }
    }
    Ok(Table1 { cells })
}

/// Bloch coordinates in the x-z plane.
pub type BlochXz = [f64; 2];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecoveryPoint {
    pub theta: f64,
    pub input: BlochXz,
    pub channel: BlochXz,
    pub recovered: BlochXz,
}

#[derive(Clone, Debug)]
pub struct RecoveryCurve {
    pub belief: BuiltinBelief,
    pub points: Vec<RecoveryPoint>,
    /// `|0⟩`, `|1⟩`, `|+⟩`, `|−⟩` in that order.
    pub markers: Vec<(&'static str, RecoveryPoint)>,
}

pub const FIG1_MARKERS: [(&str, f64); 4] = [("0", 0.0), ("1", PI), ("+", PI / 2.0), ("-", 3.0 * PI / 2.0)];

/// The pure state with Bloch vector `(sin θ, 0, cos θ)`.
pub fn xz_state(theta: f64) -> DensityOperator {
    DensityOperator::from_bloch([libm::sin(theta), 0.0, libm::cos(theta)]).expect("unit Bloch vector")
}

fn xz(rho: &DensityOperator) -> BlochXz {
    let [x, _, z] = states::bloch_vector(rho.matrix()).expect("qubit state");
    [x, z]
}

fn recovery_point(d: &QuantumChannel, rec: &QuantumChannel, theta: f64) -> Result<RecoveryPoint> {
    let rho = xz_state(theta);
    let after = d.apply(&rho)?;
    let back = rec.apply(&rho)?;
    Ok(RecoveryPoint {
        theta,
        input: xz(&rho),
        channel: xz(&after),
        recovered: xz(&back),
    })
}

/// Depolarize with `p = 0.1` and recover with the belief's retrodiction
/// map, for `samples` equally spaced angles starting at `|0⟩`. The
/// recovered point is `(R∘D)(ρ)`, materialized once per belief.
pub fn fig1(samples: usize) -> Result<Vec<RecoveryCurve>> {
    if samples < MIN_FIG1_SAMPLES {
        return Err(Error::DimensionMismatch {
            context: "recovery curve samples (minimum)",
            expected: MIN_FIG1_SAMPLES,
            found: samples,
        });
    }
    let d = QuantumChannel::depolarizing(2, FIG1_DEPOLARIZING)?;
    let mut curves = Vec::with_capacity(4);
    for belief in BuiltinBelief::COMPARED {
        let rec = recovery_compose(&d, &belief.belief())?;
        let points = (0..samples)
            .map(|i| recovery_point(&d, &rec, 2.0 * PI * i as f64 / samples as f64))
            .collect::<Result<Vec<_>>>()?;
        let markers = FIG1_MARKERS
            .iter()
            .map(|&(label, theta)| Ok((label, recovery_point(&d, &rec, theta)?)))
            .collect::<Result<Vec<_>>>()?;
        curves.push(RecoveryCurve { belief, points, markers });
    }
    Ok(curves)
}

pub fn radius([x, z]: BlochXz) -> f64 {
    libm::hypot(x, z)
}
