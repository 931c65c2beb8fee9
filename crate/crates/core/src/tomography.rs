//! Simulated Pauli readout and state reconstruction.
//!
//! Each of the 63 nontrivial Pauli strings is measured as an independent
//! setting: `shots` eigenvalue outcomes are drawn from the Born
//! probabilities `(1 +/- <P>)/2`. Setting `k` draws from its own ChaCha
//! stream of the run seed, so the record does not depend on sampling order.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::qops::{
    c, expectation, identity, nearest_physical, pauli_operator, ComplexMatrix, DensityMatrix,
    PauliString,
};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TomographyEntry {
    pub label: PauliString,
    pub expectation: f64,
    /// Number of samples behind the estimate; 0 for exact values.
    pub shots: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TomographyRecord {
    pub state_label: String,
    pub entries: Vec<TomographyEntry>,
}

impl TomographyRecord {
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.state_label = label.into();
        self
    }

    pub fn get(&self, label: &PauliString) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| &e.label == label)
            .map(|e| e.expectation)
    }

    /// Expectations keyed by label; fails unless every nontrivial string
    /// appears exactly once.
    fn complete_map(&self) -> Result<BTreeMap<PauliString, f64>> {
        let mut map = BTreeMap::new();
        for e in &self.entries {
            if e.label.is_identity() {
                continue;
            }
            if map.insert(e.label, e.expectation).is_some() {
                return Err(Error::DuplicateSetting(e.label.to_string()));
            }
        }
        let missing: Vec<String> = PauliString::all_nontrivial()
            .into_iter()
            .filter(|p| !map.contains_key(p))
            .map(|p| p.to_string())
            .collect();
        if !missing.is_empty() {
            return Err(Error::IncompleteRecord(missing));
        }
        Ok(map)
    }
}

/// The 63 nontrivial expectation values in lexicographic label order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliSet {
    pub labels: Vec<PauliString>,
    pub values: Vec<f64>,
}

impl PauliSet {
    pub fn get(&self, label: &PauliString) -> Option<f64> {
        label.index().map(|k| self.values[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, f64)> {
        self.labels.iter().zip(self.values.iter().copied())
    }
}

fn check_three_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.num_qubits() != 3 {
        return Err(Error::DimensionMismatch {
            expected: "3-qubit state".into(),
            found: format!("{}-qubit state", rho.num_qubits()),
        });
    }
    Ok(())
}

/// Samples every nontrivial Pauli setting; `shots == 0` records exact values.
pub fn simulate_readout(rho: &DensityMatrix, shots: u64, seed: u64) -> Result<TomographyRecord> {
    check_three_qubits(rho)?;
    let entries = PauliString::all_nontrivial()
        .into_iter()
        .enumerate()
        .map(|(k, label)| {
            let exact = expectation(rho, &pauli_operator(&label))?.clamp(-1.0, 1.0);
            let estimate = if shots == 0 {
                exact
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(k as u64);
                let p_plus = (0.5 * (1.0 + exact)).clamp(0.0, 1.0);
                let ups = Binomial::new(shots, p_plus)
                    .expect("probability in [0, 1]")
                    .sample(&mut rng);
                (2.0 * ups as f64 - shots as f64) / shots as f64
            };
            Ok(TomographyEntry {
                label,
                expectation: estimate,
                shots,
            })
        })
        .collect::<Result<_>>()?;
    Ok(TomographyRecord {
        state_label: String::new(),
        entries,
    })
}

/// `(I + sum_P <P> P) / 8`. Hermitian with unit trace, not necessarily PSD.
pub fn linear_inversion(rec: &TomographyRecord) -> Result<ComplexMatrix> {
    let map = rec.complete_map()?;
    let mut mu = identity(8);
    for (label, value) in &map {
        mu += pauli_operator(label) * c(*value, 0.0);
    }
    Ok(mu.unscale(8.0))
}

/// Linear inversion followed by projection onto the nearest physical state.
pub fn mle_reconstruct(rec: &TomographyRecord) -> Result<DensityMatrix> {
    nearest_physical(&linear_inversion(rec)?)
}

pub fn pauli_set(rho: &DensityMatrix) -> Result<PauliSet> {
    check_three_qubits(rho)?;
    let labels = PauliString::all_nontrivial();
    let values = labels
        .iter()
        .map(|p| expectation(rho, &pauli_operator(p)))
        .collect::<Result<_>>()?;
    Ok(PauliSet { labels, values })
}
