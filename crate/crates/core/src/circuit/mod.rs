//! Gates, the teleportation circuit and (noisy) density-matrix evolution.

mod cphase;
mod device;
mod noise;

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::qops::{
    c, embed, hadamard, hermitize, identity, sigma_x, sigma_y, sigma_z, ComplexMatrix,
    ComplexVector, DensityMatrix, Ket,
};
use crate::{Error, Result, STRUCT_TOL};

pub use cphase::{
    cphase_avoided_crossing, cphase_ideal, qutrit_index, qutrit_pair_propagator, CrossingEvolution,
};
pub use device::{DeviceParams, Spectroscopy};
pub use noise::{
    damping_channels, depolarizing_channel, pure_dephasing_rate, NoiseModel, QubitDecoherence,
};

pub const QUBIT_A: usize = 0;
pub const QUBIT_B: usize = 1;
pub const QUBIT_C: usize = 2;

/// Nearest-neighbour pairs that share a C-Phase coupling on the device.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QubitPair {
    AB,
    BC,
}

impl QubitPair {
    pub fn qubits(self) -> [usize; 2] {
        match self {
            QubitPair::AB => [QUBIT_A, QUBIT_B],
            QubitPair::BC => [QUBIT_B, QUBIT_C],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    /// `exp(-i angle/2 n.sigma)` on one qubit.
    Rotation {
        axis: [f64; 3],
        angle: f64,
        qubit: usize,
    },
    CPhase(QubitPair),
    Hadamard(usize),
    Cnot {
        control: usize,
        target: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    /// Wall-clock duration in seconds; zero for frame updates.
    pub duration: f64,
}

impl Gate {
    pub fn rotation(axis: [f64; 3], angle: f64, qubit: usize, duration: f64) -> Result<Self> {
        check_axis(&axis)?;
        Ok(Self {
            kind: GateKind::Rotation { axis, angle, qubit },
            duration,
        })
    }

    pub fn ry(angle: f64, qubit: usize, duration: f64) -> Self {
        Self {
            kind: GateKind::Rotation {
                axis: [0.0, 1.0, 0.0],
                angle,
                qubit,
            },
            duration,
        }
    }

    /// Software z-rotation: a change of reference frame, takes no time.
    pub fn virtual_z(angle: f64, qubit: usize) -> Self {
        Self {
            kind: GateKind::Rotation {
                axis: [0.0, 0.0, 1.0],
                angle,
                qubit,
            },
            duration: 0.0,
        }
    }

    pub fn cphase(pair: QubitPair, duration: f64) -> Self {
        Self {
            kind: GateKind::CPhase(pair),
            duration,
        }
    }

    pub fn hadamard(qubit: usize, duration: f64) -> Self {
        Self {
            kind: GateKind::Hadamard(qubit),
            duration,
        }
    }

    pub fn cnot(control: usize, target: usize, duration: f64) -> Self {
        Self {
            kind: GateKind::Cnot { control, target },
            duration,
        }
    }

    /// Qubits acted on, in the order the local unitary expects them.
    pub fn qubits(&self) -> Vec<usize> {
        match &self.kind {
            GateKind::Rotation { qubit, .. } | GateKind::Hadamard(qubit) => vec![*qubit],
            GateKind::CPhase(pair) => pair.qubits().to_vec(),
            GateKind::Cnot { control, target } => vec![*control, *target],
        }
    }

    /// Unitary on [`Gate::qubits`].
    pub fn local_unitary(&self) -> Result<ComplexMatrix> {
        match &self.kind {
            GateKind::Rotation { axis, angle, .. } => rotation_unitary(*axis, *angle),
            GateKind::CPhase(_) => Ok(cphase_ideal()),
            GateKind::Hadamard(_) => Ok(hadamard()),
            GateKind::Cnot { .. } => {
                let mut u = ComplexMatrix::zeros(4, 4);
                for (r, col) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
                    u[(r, col)] = c(1.0, 0.0);
                }
                Ok(u)
            }
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits().len() == 2
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |q: usize| ["A", "B", "C"].get(q).copied().unwrap_or("?");
        match &self.kind {
            GateKind::Rotation { axis, angle, qubit } => write!(
                f,
                "R[{:.3},{:.3},{:.3}]({:.4}) {}",
                axis[0],
                axis[1],
                axis[2],
                angle,
                name(*qubit)
            ),
            GateKind::CPhase(pair) => write!(f, "CPhase {pair:?}"),
            GateKind::Hadamard(q) => write!(f, "H {}", name(*q)),
            GateKind::Cnot { control, target } => {
                write!(f, "CNOT {}->{}", name(*control), name(*target))
            }
        }
    }
}

fn check_axis(axis: &[f64; 3]) -> Result<()> {
    let norm = axis.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > STRUCT_TOL {
        return Err(Error::NonUnitAxis(norm));
    }
    Ok(())
}

/// `exp(-i angle/2 (n . sigma))`.
pub fn rotation_unitary(axis: [f64; 3], angle: f64) -> Result<ComplexMatrix> {
    check_axis(&axis)?;
    let (s, co) = (angle / 2.0).sin_cos();
    let generator = sigma_x().scale(axis[0]) + sigma_y().scale(axis[1]) + sigma_z().scale(axis[2]);
    Ok(identity(2).scale(co) - generator * c(0.0, s))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qubits = gate.qubits();
        if let Some(&q) = qubits.iter().find(|&&q| q >= self.num_qubits) {
            return Err(Error::QubitOutOfRange {
                index: q,
                num_qubits: self.num_qubits,
            });
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::InvalidCircuit(format!("{gate}: repeated qubit")));
        }
        if let GateKind::Rotation { axis, .. } = &gate.kind {
            check_axis(axis)?;
        }
        if !(gate.duration >= 0.0 && gate.duration.is_finite()) {
            return Err(Error::InvalidCircuit(format!(
                "{gate}: bad duration {}",
                gate.duration
            )));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn cphase_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g.kind, GateKind::CPhase(_)))
            .count()
    }

    pub fn total_duration(&self) -> f64 {
        self.gates.iter().map(|g| g.duration).sum()
    }

    /// Full-register unitary (product of all gates, first gate applied first).
    pub fn unitary(&self) -> Result<ComplexMatrix> {
        let dim = 1usize << self.num_qubits;
        self.gates.iter().try_fold(identity(dim), |acc, g| {
            Ok(embed(&g.local_unitary()?, &g.qubits(), self.num_qubits) * acc)
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TeleportVariant {
    /// Textbook Hadamard/CNOT form.
    Standard,
    /// Y-rotations around two C-Phase gates, with z frame updates.
    Compiled,
}

/// Builds steps I and II of teleportation from A to C on `|psi_A> |0_B 0_C>`.
///
/// The compiled variant realises `(Z_A Z_B) U_standard` up to a global phase:
/// the extra Z frame on the sender qubits turns the textbook branches
/// `X^b Z^a` into `I, -X, -Z, -iY`, the decomposition of [`ideal_phi`].
/// Durations come from `device`; the textbook CNOT is timed as a C-Phase
/// flanked by two pulses.
pub fn build_teleport_circuit(variant: TeleportVariant, device: &DeviceParams) -> Circuit {
    let sq = device.single_qubit_gate_time;
    let t_ab = device.cphase_time(QubitPair::AB);
    let t_bc = device.cphase_time(QubitPair::BC);
    let (a, b, cq) = (QUBIT_A, QUBIT_B, QUBIT_C);
    let gates = match variant {
        TeleportVariant::Standard => vec![
            Gate::hadamard(b, sq),
            Gate::cnot(b, cq, t_bc + 2.0 * sq),
            Gate::cnot(a, b, t_ab + 2.0 * sq),
            Gate::hadamard(a, sq),
        ],
        // H = Ry(pi/2) Z = Z Ry(-pi/2) and CNOT = H_t CZ H_t; the Z factors
        // commute through the C-Phases, cancel pairwise, or become frame updates.
        TeleportVariant::Compiled => vec![
            Gate::virtual_z(PI, b),
            Gate::virtual_z(PI, cq),
            Gate::ry(FRAC_PI_2, b, sq),
            Gate::ry(FRAC_PI_2, cq, sq),
            Gate::cphase(QubitPair::BC, t_bc),
            Gate::ry(-FRAC_PI_2, b, sq),
            Gate::ry(-FRAC_PI_2, cq, sq),
            Gate::virtual_z(PI, cq),
            Gate::cphase(QubitPair::AB, t_ab),
            Gate::ry(FRAC_PI_2, b, sq),
            Gate::ry(-FRAC_PI_2, a, sq),
            Gate::virtual_z(PI, b),
        ],
    };
    let mut circuit = Circuit::new(3);
    for g in gates {
        circuit.push(g).expect("teleport gates are well formed");
    }
    circuit
}

/// Outcome of measuring qubits A and B.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    #[serde(rename = "00")]
    O00,
    #[serde(rename = "01")]
    O01,
    #[serde(rename = "10")]
    O10,
    #[serde(rename = "11")]
    O11,
}

impl Outcome {
    pub const ALL: [Outcome; 4] = [Outcome::O00, Outcome::O01, Outcome::O10, Outcome::O11];

    pub fn bits(self) -> (usize, usize) {
        match self {
            Outcome::O00 => (0, 0),
            Outcome::O01 => (0, 1),
            Outcome::O10 => (1, 0),
            Outcome::O11 => (1, 1),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Outcome::O00 => "00",
            Outcome::O01 => "01",
            Outcome::O10 => "10",
            Outcome::O11 => "11",
        }
    }

    /// Operator left on qubit C: `I, -X, -Z, -iY` for 00, 01, 10, 11.
    pub fn branch_operator(self) -> ComplexMatrix {
        match self {
            Outcome::O00 => identity(2),
            Outcome::O01 => -sigma_x(),
            Outcome::O10 => -sigma_z(),
            Outcome::O11 => sigma_y() * c(0.0, -1.0),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Outcome::ALL
            .into_iter()
            .find(|o| o.label() == s)
            .ok_or_else(|| Error::InvalidState(format!("unknown outcome {s:?}")))
    }
}

/// The ideal three-qubit state
/// `1/2 sum_ab |a b> (x) B_ab |psi>` with `B = I, -X, -Z, -iY`.
pub fn ideal_phi(psi_a: &Ket) -> Result<Ket> {
    if psi_a.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: "single-qubit ket".into(),
            found: format!("dimension {}", psi_a.dim()),
        });
    }
    let mut amps = ComplexVector::zeros(8);
    for outcome in Outcome::ALL {
        let (a, b) = outcome.bits();
        let branch = outcome.branch_operator() * psi_a.amplitudes();
        for cbit in 0..2 {
            amps[4 * a + 2 * b + cbit] = branch[cbit] * 0.5;
        }
    }
    Ket::new(amps)
}

fn apply_kraus(
    rho: &ComplexMatrix,
    ops: &[ComplexMatrix],
    qubit: usize,
    num_qubits: usize,
) -> ComplexMatrix {
    let dim = rho.nrows();
    ops.iter().fold(ComplexMatrix::zeros(dim, dim), |acc, k| {
        let big = embed(k, &[qubit], num_qubits);
        acc + &big * rho * big.adjoint()
    })
}

/// Evolves `input` through `circuit`.
///
/// Each gate is applied as an ideal unitary. With noise enabled, every qubit
/// (active or idle) then decays for the gate's duration, and physical
/// single-qubit pulses add the model's depolarizing error on their target.
pub fn apply_circuit(
    circuit: &Circuit,
    input: &DensityMatrix,
    noise: &NoiseModel,
) -> Result<DensityMatrix> {
    let n = circuit.num_qubits();
    if input.num_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{n}-qubit state"),
            found: format!("{}-qubit state", input.num_qubits()),
        });
    }
    if noise.enabled && noise.qubits.len() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("noise parameters for {n} qubits"),
            found: format!("{}", noise.qubits.len()),
        });
    }
    let depolarize = depolarizing_channel(noise.single_qubit_error);
    let mut rho = input.matrix().clone();
    for gate in circuit.gates() {
        let u = embed(&gate.local_unitary()?, &gate.qubits(), n);
        rho = &u * &rho * u.adjoint();
        if !noise.enabled || gate.duration == 0.0 {
            continue;
        }
        if !gate.is_two_qubit() && noise.single_qubit_error > 0.0 {
            rho = apply_kraus(&rho, &depolarize, gate.qubits()[0], n);
        }
        for (q, params) in noise.qubits.iter().enumerate() {
            let ops = damping_channels(gate.duration, params.t1, params.t2_star)?;
            rho = apply_kraus(&rho, &ops, q, n);
        }
    }
    DensityMatrix::new(hermitize(&rho))
}
