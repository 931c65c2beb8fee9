//! Random states and unitaries drawn from the unitarily invariant ensembles.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{c, hermitize, ComplexMatrix, ComplexVector, DensityMatrix, Ket};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random pure state.
pub fn random_ket<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Ket {
    let v = ComplexVector::from_fn(dim, |_, _| gaussian(rng));
    Ket::normalized(v).expect("gaussian vector is almost surely nonzero")
}

/// Haar-random `rows x cols` isometry (`rows >= cols`), i.e. orthonormal columns.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let qr = ginibre(rows, cols, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    // fix the phase freedom of QR so the distribution is exactly Haar
    for k in 0..cols {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            c(1.0, 0.0)
        };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}

pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    random_isometry(dim, dim, rng)
}

/// Random mixed state of the given rank (induced measure from a Ginibre factor).
pub fn random_density<R: Rng + ?Sized>(
    num_qubits: usize,
    rank: usize,
    rng: &mut R,
) -> DensityMatrix {
    let dim = 1usize << num_qubits;
    let g = ginibre(dim, rank.clamp(1, dim), rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(hermitize(&m.unscale(tr))).expect("G G^dagger / tr is a valid state")
}

/// Random Hermitian matrix rescaled to unit trace; generally indefinite.
pub fn random_hermitian_unit_trace<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(dim, dim, rng);
    let mut h = hermitize(&g).scale(0.25);
    let shift = (1.0 - h.trace().re) / dim as f64;
    for k in 0..dim {
        h[(k, k)] += c(shift, 0.0);
    }
    h
}
