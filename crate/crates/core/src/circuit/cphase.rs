//! C-Phase from the resonant |11> <-> |20> avoided crossing.
//!
//! With the pair tuned onto resonance, the coupling `H = 2 pi J (|11><20| + h.c.)`
//! rotates |11> into |20> and back; after `t = 1/(2 J)` the |11> amplitude has
//! picked up a factor -1 while |00>, |01>, |10> are untouched.

use std::f64::consts::PI;

use crate::qops::{c, ComplexMatrix};
use crate::{Error, Result};

/// Result of evolving the qutrit pair for a fixed interaction time.
#[derive(Clone, Debug)]
pub struct CrossingEvolution {
    /// Restriction of the propagator to the computational subspace
    /// (non-unitary while population sits in |20>).
    pub operator: ComplexMatrix,
    /// Population of |20> after starting in |11>.
    pub leakage: f64,
    /// Phase acquired by |11> relative to the other computational states, in (-pi, pi].
    pub conditional_phase: f64,
}

/// Index of `|ab>` in the 9-dimensional qutrit-pair space.
pub fn qutrit_index(a: usize, b: usize) -> usize {
    3 * a + b
}

/// Ideal controlled-phase `diag(1, 1, 1, -1)`.
pub fn cphase_ideal() -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(4, 4);
    u[(3, 3)] = c(-1.0, 0.0);
    u
}

/// Closed-form 9x9 propagator for the resonant |11>-|20> coupling.
pub fn qutrit_pair_propagator(j_over_2pi: f64, t: f64) -> Result<ComplexMatrix> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let theta = 2.0 * PI * j_over_2pi * t;
    let (s, co) = theta.sin_cos();
    let (p, q) = (qutrit_index(1, 1), qutrit_index(2, 0));
    let mut u = ComplexMatrix::identity(9, 9);
    u[(p, p)] = c(co, 0.0);
    u[(q, q)] = c(co, 0.0);
    u[(p, q)] = c(0.0, -s);
    u[(q, p)] = c(0.0, -s);
    Ok(u)
}

pub fn cphase_avoided_crossing(j_over_2pi: f64, t: f64) -> Result<CrossingEvolution> {
    if !(j_over_2pi > 0.0) {
        return Err(Error::InvalidDevice(format!(
            "coupling must be positive, got {j_over_2pi}"
        )));
    }
    let u = qutrit_pair_propagator(j_over_2pi, t)?;
    let computational = [(0, 0), (0, 1), (1, 0), (1, 1)];
    let operator = ComplexMatrix::from_fn(4, 4, |r, col| {
        let (a, b) = computational[r];
        let (x, y) = computational[col];
        u[(qutrit_index(a, b), qutrit_index(x, y))]
    });
    let leakage = u[(qutrit_index(2, 0), qutrit_index(1, 1))].norm_sqr();
    let phase = operator[(3, 3)] * operator[(0, 0)] / (operator[(1, 1)] * operator[(2, 2)]);
    let mut conditional_phase = phase.arg();
    if conditional_phase <= -PI + 1e-12 {
        conditional_phase += 2.0 * PI;
    }
    Ok(CrossingEvolution {
        operator,
        leakage,
        conditional_phase,
    })
}
