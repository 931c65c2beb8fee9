//! Entanglement measures for two and three qubits.

mod roof;

use nalgebra::SVD;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::qops::{c, state_fidelity_pure, ComplexMatrix, DensityMatrix, Ket};
use crate::{Error, Result, STRUCT_TOL};

pub use roof::{three_tangle_mixed_upper, ConvexRoofSearch, RoofEstimate};

/// `x^T (sigma_y (x) sigma_y) y` for two-qubit vectors.
#[inline]
fn spin_flip_form(x: &[Complex64; 4], y: &[Complex64; 4]) -> Complex64 {
    -x[0] * y[3] + x[1] * y[2] + x[2] * y[1] - x[3] * y[0]
}

/// Squared concurrence of the rank-2 state `|u><u| + |v><v|` (unnormalized).
///
/// The Wootters values are the singular values of the 2x2 matrix
/// `T_ij = w_i^T (sigma_y (x) sigma_y) w_j`, so `C^2 = |T|_F^2 - 2|det T|`.
#[inline]
fn rank_two_concurrence_sq(u: &[Complex64; 4], v: &[Complex64; 4]) -> f64 {
    let t00 = spin_flip_form(u, u);
    let t01 = spin_flip_form(u, v);
    let t11 = spin_flip_form(v, v);
    let frob = t00.norm_sqr() + 2.0 * t01.norm_sqr() + t11.norm_sqr();
    frob - 2.0 * (t00 * t11 - t01 * t01).norm()
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.num_qubits() != 2 {
        return Err(Error::DimensionMismatch {
            expected: "2-qubit state".into(),
            found: format!("{}-qubit state", rho.num_qubits()),
        });
    }
    // rho = W W^dagger with W from the eigendecomposition; the square roots of
    // the eigenvalues of rho (sy sy) rho* (sy sy) are the singular values of W^T (sy sy) W
    let (values, vectors) = rho.eigen();
    let cols: Vec<[Complex64; 4]> = values
        .iter()
        .enumerate()
        .filter(|(_, &mu)| mu > 0.0)
        .map(|(k, &mu)| std::array::from_fn(|r| vectors[(r, k)] * mu.sqrt()))
        .collect();
    let n = cols.len();
    let t = ComplexMatrix::from_fn(n, n, |i, j| spin_flip_form(&cols[i], &cols[j]));
    let mut lambdas: Vec<f64> = SVD::new(t, false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    lambdas.resize(4, 0.0);
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

/// The three terms of the CKW relation for a pure three-qubit state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CkwTerms {
    /// `C^2_{A(BC)} = 4 det rho_A`
    pub a_bc: f64,
    pub ab: f64,
    pub ac: f64,
}

impl CkwTerms {
    pub fn residual(&self) -> f64 {
        self.a_bc - self.ab - self.ac
    }
}

/// CKW terms from raw amplitudes; quartic, so unnormalized input scales by `|psi|^4`.
pub(crate) fn ckw_raw(psi: &[Complex64; 8]) -> CkwTerms {
    let (mut r00, mut r11, mut r01) = (0.0, 0.0, c(0.0, 0.0));
    for k in 0..4 {
        r00 += psi[k].norm_sqr();
        r11 += psi[4 + k].norm_sqr();
        r01 += psi[k] * psi[4 + k].conj();
    }
    let a_bc = 4.0 * (r00 * r11 - r01.norm_sqr());
    // rho_AB = sum_c |v_c><v_c|, rho_AC = sum_b |u_b><u_b|
    let v = |cbit: usize| -> [Complex64; 4] { std::array::from_fn(|ab| psi[2 * ab + cbit]) };
    let u = |b: usize| -> [Complex64; 4] {
        std::array::from_fn(|ac| psi[4 * (ac >> 1) + 2 * b + (ac & 1)])
    };
    CkwTerms {
        a_bc,
        ab: rank_two_concurrence_sq(&v(0), &v(1)).max(0.0),
        ac: rank_two_concurrence_sq(&u(0), &u(1)).max(0.0),
    }
}

/// Clamps rounding-level negatives; anything larger is a bug.
pub(crate) fn clamp_tangle(tau: f64) -> f64 {
    assert!(
        tau > -STRUCT_TOL,
        "three-tangle {tau:e} is negative beyond rounding"
    );
    tau.clamp(0.0, 1.0)
}

fn as_three_qubit(psi: &Ket) -> Result<[Complex64; 8]> {
    if psi.dim() != 8 {
        return Err(Error::DimensionMismatch {
            expected: "3-qubit ket".into(),
            found: format!("dimension {}", psi.dim()),
        });
    }
    Ok(std::array::from_fn(|k| psi.amplitudes()[k]))
}

pub fn ckw_terms(psi: &Ket) -> Result<CkwTerms> {
    Ok(ckw_raw(&as_three_qubit(psi)?))
}

/// Residual tangle `C^2_{A(BC)} - C^2_{AB} - C^2_{AC}` of a pure state.
pub fn three_tangle_pure(psi: &Ket) -> Result<f64> {
    Ok(clamp_tangle(ckw_terms(psi)?.residual()))
}

/// Largest squared overlap of `phi` with any biseparable state: the largest
/// squared Schmidt coefficient over the three single-qubit cuts.
pub fn biseparable_alpha(phi: &Ket) -> Result<f64> {
    let psi = as_three_qubit(phi)?;
    let mut best = 0.0_f64;
    for q in 0..3 {
        let bit = 4 >> q;
        // reduced state of qubit q
        let (mut r00, mut r11, mut r01) = (0.0, 0.0, c(0.0, 0.0));
        for k in (0..8).filter(|k| k & bit == 0) {
            r00 += psi[k].norm_sqr();
            r11 += psi[k | bit].norm_sqr();
            r01 += psi[k] * psi[k | bit].conj();
        }
        let tr = r00 + r11;
        let det = r00 * r11 - r01.norm_sqr();
        let top = 0.5 * (tr + (tr * tr - 4.0 * det).max(0.0).sqrt());
        best = best.max(top);
    }
    Ok(best.min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessResult {
    pub alpha: f64,
    /// `Tr(W rho)` with `W = alpha I - |phi><phi|`.
    pub expectation: f64,
    pub is_tripartite_entangled: bool,
    pub robustness_lower_bound: f64,
}

/// Lower bound on the generalized robustness implied by a witness value.
pub fn robustness_lower_bound(expectation: f64, alpha: f64) -> f64 {
    (-expectation / alpha).max(0.0)
}

pub fn witness_evaluate(rho: &DensityMatrix, phi: &Ket, alpha: f64) -> Result<WitnessResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let expectation = alpha - state_fidelity_pure(rho, phi)?;
    Ok(WitnessResult {
        alpha,
        expectation,
        is_tripartite_entangled: expectation < -STRUCT_TOL,
        robustness_lower_bound: robustness_lower_bound(expectation, alpha),
    })
}
