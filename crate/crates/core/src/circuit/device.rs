use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{Error, Result};

use super::QubitPair;

/// Per-qubit coherence, coupling and timing parameters of the three-qubit
/// device. All quantities are SI: seconds and hertz.
///
/// `Default` is the measured three-transmon device: T1 = {0.55, 0.70, 1.10} us,
/// T2* = {0.45, 0.60, 0.65} us, J/2pi = 36 MHz (A-B) and 23 MHz (B-C).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeviceParams {
    pub t1: Vec<f64>,
    pub t2_star: Vec<f64>,
    /// |11>-|20> coupling J/2pi between A and B, in Hz.
    pub j_ab: f64,
    pub j_bc: f64,
    pub single_qubit_gate_time: f64,
    /// Explicit C-Phase durations; `None` derives `1/(2 J)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cphase_time_ab: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cphase_time_bc: Option<f64>,
    /// Depolarizing probability after each physical single-qubit pulse.
    pub single_qubit_error: f64,
    /// Spectroscopy data carried along for documentation; unused by the simulator.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectroscopy: Option<Spectroscopy>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Spectroscopy {
    /// Maximum transition frequencies, Hz.
    pub nu_max: Vec<f64>,
    /// Charging energies E_c/h, Hz.
    pub charging_energy: Vec<f64>,
    /// Qubit-resonator couplings g/2pi, Hz.
    pub resonator_coupling: Vec<f64>,
    /// Bare resonator frequency, Hz.
    pub resonator_frequency: f64,
    pub quality_factor: f64,
}

impl Default for DeviceParams {
    fn default() -> Self {
        Self {
            t1: vec![0.55e-6, 0.70e-6, 1.10e-6],
            t2_star: vec![0.45e-6, 0.60e-6, 0.65e-6],
            j_ab: 36e6,
            j_bc: 23e6,
            single_qubit_gate_time: 12e-9,
            cphase_time_ab: None,
            cphase_time_bc: None,
            single_qubit_error: 0.0,
            spectroscopy: None,
        }
    }
}

impl DeviceParams {
    pub const NUM_QUBITS: usize = 3;

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDevice(msg));
        if self.t1.len() != Self::NUM_QUBITS || self.t2_star.len() != Self::NUM_QUBITS {
            return bad(format!(
                "t1 and t2_star need {} entries (got {} and {})",
                Self::NUM_QUBITS,
                self.t1.len(),
                self.t2_star.len()
            ));
        }
        for (q, (&t1, &t2)) in self.t1.iter().zip(&self.t2_star).enumerate() {
            if !(t1 > 0.0) || !(t2 > 0.0) {
                return bad(format!("qubit {q}: coherence times must be positive"));
            }
            if t2 > 2.0 * t1 * (1.0 + 1e-12) {
                return Err(Error::UnphysicalDephasing { t1, t2_star: t2 });
            }
        }
        for (name, v) in [("j_ab", self.j_ab), ("j_bc", self.j_bc)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive and finite"));
            }
        }
        if !(self.single_qubit_gate_time > 0.0 && self.single_qubit_gate_time.is_finite()) {
            return bad("single_qubit_gate_time must be positive".into());
        }
        for (name, t) in [
            ("cphase_time_ab", self.cphase_time_ab),
            ("cphase_time_bc", self.cphase_time_bc),
        ] {
            if let Some(t) = t {
                if !(t > 0.0 && t.is_finite()) {
                    return bad(format!("{name} must be positive"));
                }
            }
        }
        if !(0.0..1.0).contains(&self.single_qubit_error) {
            return bad("single_qubit_error must lie in [0, 1)".into());
        }
        Ok(())
    }

    pub fn coupling(&self, pair: QubitPair) -> f64 {
        match pair {
            QubitPair::AB => self.j_ab,
            QubitPair::BC => self.j_bc,
        }
    }

    /// Configured C-Phase duration, or the full-swing time `1/(2 J)`.
    pub fn cphase_time(&self, pair: QubitPair) -> f64 {
        let explicit = match pair {
            QubitPair::AB => self.cphase_time_ab,
            QubitPair::BC => self.cphase_time_bc,
        };
        explicit.unwrap_or_else(|| 1.0 / (2.0 * self.coupling(pair)))
    }

    /// Copy with every T1 and T2* multiplied by `factor`.
    pub fn with_coherence_scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.t1.iter_mut().for_each(|t| *t *= factor);
        out.t2_star.iter_mut().for_each(|t| *t *= factor);
        out
    }

    /// Short content hash of the canonical JSON form.
    pub fn fingerprint(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("device params serialize");
        let digest = Sha256::digest(&canonical);
        hex::encode(&digest[..8])
    }
}
