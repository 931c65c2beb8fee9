//! Upper bound on the convex-roof three-tangle of a mixed state.
//!
//! Every pure-state decomposition of `rho = sum_k mu_k |e_k><e_k|` has the
//! form `|phi_i> = sum_k M_ik sqrt(mu_k) |e_k>` for an isometry `M`; the
//! average tangle of any such ensemble bounds the roof from above. Each
//! restart draws `M` from the Haar measure (restart 0 is the eigen-ensemble
//! itself) and is then refined by a compass search over Givens rotations
//! between pairs of ensemble members.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ckw_raw, clamp_tangle};
use crate::qops::random::random_isometry;
use crate::qops::{c, DensityMatrix};
use crate::{Error, Result};

type Amplitudes = [Complex64; 8];

/// Eigenvalues below this are treated as outside the support.
const SUPPORT_CUTOFF: f64 = 1e-12;
/// Restarts are evaluated in blocks of this size so the result does not
/// depend on the thread count.
const BLOCK: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexRoofSearch {
    pub restarts: usize,
    pub seed: u64,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_sweeps: usize,
    /// Start restart 0 from the eigen-ensemble instead of a random isometry.
    pub include_eigen_ensemble: bool,
}

impl Default for ConvexRoofSearch {
    fn default() -> Self {
        Self {
            restarts: 200,
            seed: 0,
            initial_step: 0.4,
            min_step: 1e-5,
            max_sweeps: 200,
            include_eigen_ensemble: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoofEstimate {
    /// Smallest average tangle found; an upper bound on the convex roof.
    pub value: f64,
    pub rank: usize,
    pub restarts_run: usize,
    pub best_restart: usize,
    pub best_ensemble_size: usize,
}

/// Average-tangle contribution `p tau(phi / |phi|) = tau_raw(phi) / p`.
fn weighted_tangle(phi: &Amplitudes) -> f64 {
    let p: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
    if p < 1e-300 {
        return 0.0;
    }
    let tau = ckw_raw(phi).residual() / (p * p);
    p * clamp_tangle(tau)
}

fn mix(m: &nalgebra::DMatrix<Complex64>, weighted: &[Amplitudes]) -> Vec<Amplitudes> {
    (0..m.nrows())
        .map(|i| {
            let mut phi = [c(0.0, 0.0); 8];
            for (k, w) in weighted.iter().enumerate() {
                let coef = m[(i, k)];
                for (slot, a) in phi.iter_mut().zip(w) {
                    *slot += coef * a;
                }
            }
            phi
        })
        .collect()
}

/// Givens rotation of members `a`, `b` by angle `theta` with relative phase `beta`.
fn rotate(
    phi_a: &Amplitudes,
    phi_b: &Amplitudes,
    theta: f64,
    beta: f64,
) -> (Amplitudes, Amplitudes) {
    let (s, co) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, beta);
    let na = std::array::from_fn(|k| phi_a[k] * co - e.conj() * s * phi_b[k]);
    let nb = std::array::from_fn(|k| e * s * phi_a[k] + phi_b[k] * co);
    (na, nb)
}

impl ConvexRoofSearch {
    pub fn with_restarts(restarts: usize, seed: u64) -> Self {
        Self {
            restarts,
            seed,
            ..Self::default()
        }
    }

    fn refine(&self, mut ensemble: Vec<Amplitudes>) -> f64 {
        let mut terms: Vec<f64> = ensemble.iter().map(weighted_tangle).collect();
        let n = ensemble.len();
        let mut step = self.initial_step;
        let mut sweeps = 0;
        while step >= self.min_step && sweeps < self.max_sweeps {
            if terms.iter().sum::<f64>() < 1e-14 {
                break;
            }
            sweeps += 1;
            let mut improved = false;
            for a in 0..n {
                for b in (a + 1)..n {
                    for beta in [0.0, std::f64::consts::FRAC_PI_2] {
                        for theta in [step, -step] {
                            let (na, nb) = rotate(&ensemble[a], &ensemble[b], theta, beta);
                            let (ta, tb) = (weighted_tangle(&na), weighted_tangle(&nb));
                            if ta + tb < terms[a] + terms[b] - 1e-15 {
                                ensemble[a] = na;
                                ensemble[b] = nb;
                                terms[a] = ta;
                                terms[b] = tb;
                                improved = true;
                                break;
                            }
                        }
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        terms.iter().sum::<f64>().max(0.0)
    }

    pub fn run(&self, rho: &DensityMatrix) -> Result<RoofEstimate> {
        if rho.num_qubits() != 3 {
            return Err(Error::DimensionMismatch {
                expected: "3-qubit state".into(),
                found: format!("{}-qubit state", rho.num_qubits()),
            });
        }
        let (values, vectors) = rho.eigen();
        let weighted: Vec<Amplitudes> = values
            .iter()
            .enumerate()
            .filter(|(_, &mu)| mu > SUPPORT_CUTOFF)
            .map(|(k, &mu)| std::array::from_fn(|r| vectors[(r, k)] * mu.sqrt()))
            .collect();
        let rank = weighted.len().max(1);
        if weighted.len() == 1 {
            // pure state: the decomposition is unique up to phases
            return Ok(RoofEstimate {
                value: weighted_tangle(&weighted[0]),
                rank,
                restarts_run: 1,
                best_restart: 0,
                best_ensemble_size: 1,
            });
        }

        let restarts = self.restarts.max(1);
        let mut best = (f64::INFINITY, 0usize, rank);
        let mut run = 0;
        for block_start in (0..restarts).step_by(BLOCK) {
            let block_end = (block_start + BLOCK).min(restarts);
            let results: Vec<(f64, usize, usize)> = (block_start..block_end)
                .into_par_iter()
                .map(|i| {
                    let size = rank + i % (rank + 1);
                    let ensemble = if i == 0 && self.include_eigen_ensemble {
                        weighted.clone()
                    } else {
                        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                        rng.set_stream(i as u64);
                        mix(&random_isometry(size, rank, &mut rng), &weighted)
                    };
                    (self.refine(ensemble), i, size)
                })
                .collect();
            run = block_end;
            for r in results {
                if r.0 < best.0 {
                    best = r;
                }
            }
            if best.0 < 1e-12 {
                break;
            }
        }
        Ok(RoofEstimate {
            value: best.0,
            rank,
            restarts_run: run,
            best_restart: best.1,
            best_ensemble_size: best.2,
        })
    }
}

/// Convex-roof three-tangle upper bound with default refinement settings.
pub fn three_tangle_mixed_upper(rho: &DensityMatrix, restarts: usize, seed: u64) -> Result<f64> {
    Ok(ConvexRoofSearch::with_restarts(restarts, seed)
        .run(rho)?
        .value)
}
