//! Independent reference implementations used by the integration tests.

#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Cayley hyperdeterminant form of the three-tangle, `4 |d1 - 2 d2 + 4 d3|`.
pub fn hyperdeterminant_tangle(a: &[Complex64]) -> f64 {
    assert_eq!(a.len(), 8);
    let x = |i: usize, j: usize, k: usize| a[4 * i + 2 * j + k];
    let d1 = x(0, 0, 0).powi(2) * x(1, 1, 1).powi(2)
        + x(0, 0, 1).powi(2) * x(1, 1, 0).powi(2)
        + x(0, 1, 0).powi(2) * x(1, 0, 1).powi(2)
        + x(1, 0, 0).powi(2) * x(0, 1, 1).powi(2);
    let d2 = x(0, 0, 0) * x(1, 1, 1) * x(0, 1, 1) * x(1, 0, 0)
        + x(0, 0, 0) * x(1, 1, 1) * x(1, 0, 1) * x(0, 1, 0)
        + x(0, 0, 0) * x(1, 1, 1) * x(1, 1, 0) * x(0, 0, 1)
        + x(0, 1, 1) * x(1, 0, 0) * x(1, 0, 1) * x(0, 1, 0)
        + x(0, 1, 1) * x(1, 0, 0) * x(1, 1, 0) * x(0, 0, 1)
        + x(1, 0, 1) * x(0, 1, 0) * x(1, 1, 0) * x(0, 0, 1);
    let d3 = x(0, 0, 0) * x(1, 1, 0) * x(1, 0, 1) * x(0, 1, 1)
        + x(1, 1, 1) * x(0, 0, 1) * x(0, 1, 0) * x(1, 0, 0);
    4.0 * (d1 - d2 * 2.0 + d3 * 4.0).norm()
}

/// `exp(m)` by scaling and squaring with a truncated Taylor series.
pub fn expm(m: &CMat) -> CMat {
    let n = m.nrows();
    let norm = m.iter().map(|z| z.norm()).sum::<f64>();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let a = m * cx(scale, 0.0);
    let mut term = CMat::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &a * cx(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Qutrit-pair Hamiltonian coupling |11> and |20> with strength `2 pi J`.
pub fn qutrit_pair_hamiltonian(j: f64) -> CMat {
    let mut h = CMat::zeros(9, 9);
    let (p, q) = (3 + 1, 2 * 3);
    let g = 2.0 * std::f64::consts::PI * j;
    h[(p, q)] = cx(g, 0.0);
    h[(q, p)] = cx(g, 0.0);
    h
}

/// Population of |20> after evolving |11> for time `t` under the brute-force propagator.
pub fn brute_force_leakage(j: f64, t: f64) -> f64 {
    let u = expm(&(qutrit_pair_hamiltonian(j) * cx(0.0, -t)));
    u[(6, 4)].norm_sqr()
}

fn eigen(h: &CMat) -> (Vec<f64>, CMat) {
    let e = SymmetricEigen::new(h.clone());
    (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
}

/// Euclidean projection onto the probability simplex by bisection on the
/// water level `theta`: `x_i = max(v_i - theta, 0)` with `sum x_i = 1`.
pub fn simplex_bisection(v: &[f64]) -> Vec<f64> {
    let total = |theta: f64| v.iter().map(|x| (x - theta).max(0.0)).sum::<f64>();
    let mut lo = v.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
    let mut hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

/// Frobenius-nearest unit-trace PSD matrix to a Hermitian unit-trace `h`.
pub fn frobenius_projection(h: &CMat) -> CMat {
    let (values, vectors) = eigen(h);
    let projected = simplex_bisection(&values);
    let n = h.nrows();
    let mut out = CMat::zeros(n, n);
    for (k, &w) in projected.iter().enumerate() {
        let v = vectors.column(k);
        out += v * v.adjoint() * cx(w, 0.0);
    }
    out
}

/// Largest value of `Re <h - p, sigma - p>` over the given test states;
/// non-positive (up to rounding) iff `p` is the projection of `h`.
pub fn variational_gap(h: &CMat, p: &CMat, sigmas: &[CMat]) -> f64 {
    let d = h - p;
    sigmas
        .iter()
        .map(|s| (d.adjoint() * (s - p)).trace().re)
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn pauli(k: usize) -> CMat {
    let m = match k {
        0 => [cx(1., 0.), cx(0., 0.), cx(0., 0.), cx(1., 0.)],
        1 => [cx(0., 0.), cx(1., 0.), cx(1., 0.), cx(0., 0.)],
        2 => [cx(0., 0.), cx(0., -1.), cx(0., 1.), cx(0., 0.)],
        _ => [cx(1., 0.), cx(0., 0.), cx(0., 0.), cx(-1., 0.)],
    };
    CMat::from_row_slice(2, 2, &m)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}
