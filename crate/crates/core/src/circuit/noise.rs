//! Amplitude-damping and pure-dephasing channels derived from T1/T2*.

use crate::qops::{c, identity, sigma_x, sigma_y, sigma_z, ComplexMatrix};
use crate::{Error, Result};

use super::DeviceParams;

/// Pure-dephasing rate `1/T2* - 1/(2 T1)`.
pub fn pure_dephasing_rate(t1: f64, t2_star: f64) -> Result<f64> {
    let rate = 1.0 / t2_star - 0.5 / t1;
    // allow T2* = 2 T1 up to rounding
    if rate < -1e-12 * (1.0 / t2_star) {
        return Err(Error::UnphysicalDephasing { t1, t2_star });
    }
    Ok(rate.max(0.0))
}

/// Kraus operators for `duration` of free decay: amplitude damping with
/// `gamma = 1 - exp(-duration/T1)` followed by phase flips that bring the
/// total coherence decay to `exp(-duration/T2*)`.
pub fn damping_channels(duration: f64, t1: f64, t2_star: f64) -> Result<Vec<ComplexMatrix>> {
    if duration < 0.0 {
        return Err(Error::NegativeTime(duration));
    }
    let gamma_phi = pure_dephasing_rate(t1, t2_star)?;
    let gamma = 1.0 - (-duration / t1).exp();
    let flip = 0.5 * (1.0 - (-duration * gamma_phi).exp());

    let damp = [
        ComplexMatrix::from_row_slice(
            2,
            2,
            &[c(1., 0.), c(0., 0.), c(0., 0.), c((1.0 - gamma).sqrt(), 0.)],
        ),
        ComplexMatrix::from_row_slice(
            2,
            2,
            &[c(0., 0.), c(gamma.sqrt(), 0.), c(0., 0.), c(0., 0.)],
        ),
    ];
    let dephase = [
        identity(2).scale((1.0 - flip).sqrt()),
        sigma_z().scale(flip.sqrt()),
    ];
    let mut ops = Vec::with_capacity(4);
    for d in &dephase {
        for a in &damp {
            let k = d * a;
            if k.iter().any(|z| z.norm() > 0.0) {
                ops.push(k);
            }
        }
    }
    Ok(ops)
}

/// Single-qubit depolarizing channel `(1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z)`.
pub fn depolarizing_channel(p: f64) -> Vec<ComplexMatrix> {
    let mut ops = vec![identity(2).scale((1.0 - p).sqrt())];
    if p > 0.0 {
        let w = (p / 3.0).sqrt();
        ops.extend([sigma_x().scale(w), sigma_y().scale(w), sigma_z().scale(w)]);
    }
    ops
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitDecoherence {
    pub t1: f64,
    pub t2_star: f64,
    pub dephasing_rate: f64,
}

/// Noise applied after every gate by [`super::apply_circuit`].
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseModel {
    pub enabled: bool,
    pub qubits: Vec<QubitDecoherence>,
    pub single_qubit_error: f64,
}

impl NoiseModel {
    pub fn disabled() -> Self {
        Self {
            enabled: false,
            qubits: Vec::new(),
            single_qubit_error: 0.0,
        }
    }

    pub fn from_device(device: &DeviceParams, enabled: bool) -> Result<Self> {
        device.validate()?;
        let qubits = device
            .t1
            .iter()
            .zip(&device.t2_star)
            .map(|(&t1, &t2_star)| {
                Ok(QubitDecoherence {
                    t1,
                    t2_star,
                    dephasing_rate: pure_dephasing_rate(t1, t2_star)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            enabled,
            qubits,
            single_qubit_error: device.single_qubit_error,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qops::max_abs_diff;

    fn completeness(ops: &[ComplexMatrix]) -> ComplexMatrix {
        ops.iter()
            .fold(ComplexMatrix::zeros(2, 2), |acc, k| acc + k.adjoint() * k)
    }

    #[test]
    fn infinite_coherence_is_identity() {
        let ops = damping_channels(50e-9, f64::INFINITY, f64::INFINITY).unwrap();
        assert_eq!(ops.len(), 1);
        assert!(max_abs_diff(&ops[0], &identity(2)) < 1e-15);
    }

    #[test]
    fn damping_over_one_t1() {
        // T2* = 2 T1: no pure dephasing, only amplitude damping
        let t1 = 1e-6;
        let ops = damping_channels(t1, t1, 2.0 * t1).unwrap();
        assert_eq!(ops.len(), 2);
        let gamma = ops[1][(0, 1)].norm_sqr();
        assert!((gamma - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((gamma - 0.632_120_558_8).abs() < 1e-10);
    }

    #[test]
    fn completeness_holds() {
        for &(d, t1, t2) in &[
            (12e-9, 0.55e-6, 0.45e-6),
            (1e-6, 0.7e-6, 0.6e-6),
            (0.0, 1e-6, 1e-6),
        ] {
            let ops = damping_channels(d, t1, t2).unwrap();
            assert!(max_abs_diff(&completeness(&ops), &identity(2)) < 1e-12);
        }
        let dep = depolarizing_channel(0.02);
        assert!(max_abs_diff(&completeness(&dep), &identity(2)) < 1e-12);
    }

    #[test]
    fn coherence_decays_at_t2_star() {
        let (d, t1, t2) = (100e-9, 0.55e-6, 0.45e-6);
        let ops = damping_channels(d, t1, t2).unwrap();
        let plus = ComplexMatrix::from_element(2, 2, c(0.5, 0.0));
        let out = ops.iter().fold(ComplexMatrix::zeros(2, 2), |acc, k| {
            acc + k * &plus * k.adjoint()
        });
        assert!((out[(0, 1)].re - 0.5 * (-d / t2).exp()).abs() < 1e-14);
    }

    #[test]
    fn rejects_unphysical_and_negative() {
        assert!(matches!(
            damping_channels(1e-9, 1e-6, 3e-6),
            Err(Error::UnphysicalDephasing { .. })
        ));
        assert!(matches!(
            damping_channels(-1e-9, 1e-6, 1e-6),
            Err(Error::NegativeTime(_))
        ));
    }
}
