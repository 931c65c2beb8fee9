//! Complex linear algebra and quantum-state primitives.
//!
//! Everything here is dense: the largest operator in the pipeline is the
//! 9x9 qutrit-pair propagator, so there is no point in sparse storage.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result, INPUT_TOL, STRUCT_TOL};

pub mod random;

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

pub fn hadamard() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_row_slice(2, 2, &[c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.)])
}

/// Kronecker product; `a` is the more significant factor.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Kronecker product of a list of factors, leftmost most significant.
pub fn tensor_all<'a, I>(factors: I) -> ComplexMatrix
where
    I: IntoIterator<Item = &'a ComplexMatrix>,
{
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1, 1), |acc, f| acc.kronecker(f))
}

/// Largest entrywise deviation `|m - m^dagger|`.
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Largest entrywise deviation between two matrices of equal shape.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).norm()
}

pub fn real_trace(m: &ComplexMatrix) -> f64 {
    m.trace().re
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
/// Column `k` of the returned matrix is the eigenvector for `values[k]`.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let eig = SymmetricEigen::new(hermitize(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(m.nrows(), order.len(), |r, k| {
        eig.eigenvectors[(r, order[k])]
    });
    (values, vectors)
}

/// Rebuilds `V diag(values) V^dagger`.
pub fn from_eigen(values: &[f64], vectors: &ComplexMatrix) -> ComplexMatrix {
    let n = vectors.nrows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &lambda) in values.iter().enumerate() {
        if lambda == 0.0 {
            continue;
        }
        let v = vectors.column(k);
        out += (v * v.adjoint()).scale(lambda);
    }
    hermitize(&out)
}

/// Lifts `op`, acting on `targets` (in the given order, first most
/// significant), to the full `num_qubits` register.
pub fn embed(op: &ComplexMatrix, targets: &[usize], num_qubits: usize) -> ComplexMatrix {
    let k = targets.len();
    assert_eq!(
        op.nrows(),
        1 << k,
        "operator size does not match target count"
    );
    let dim = 1usize << num_qubits;
    let bit = |q: usize| 1usize << (num_qubits - 1 - q);
    let mask: usize = targets.iter().map(|&q| bit(q)).sum();
    let local = |full: usize| -> usize {
        targets
            .iter()
            .fold(0, |acc, &q| (acc << 1) | usize::from(full & bit(q) != 0))
    };
    ComplexMatrix::from_fn(dim, dim, |i, j| {
        if i & !mask != j & !mask {
            c(0.0, 0.0)
        } else {
            op[(local(i), local(j))]
        }
    })
}

pub fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::NotQubitRegister(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// A normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    amplitudes: ComplexVector,
}

impl Ket {
    pub fn new(amplitudes: ComplexVector) -> Result<Self> {
        if amplitudes.is_empty()
            || amplitudes
                .iter()
                .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > STRUCT_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    pub fn from_slice(amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(ComplexVector::from_column_slice(amplitudes))
    }

    /// Scales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: ComplexVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(
            index < dim,
            "basis index {index} out of range for dim {dim}"
        );
        let mut v = ComplexVector::zeros(dim);
        v[index] = c(1.0, 0.0);
        Self { amplitudes: v }
    }

    pub fn zero() -> Self {
        Self::basis(2, 0)
    }

    pub fn one() -> Self {
        Self::basis(2, 1)
    }

    /// `(|0> + |1>)/sqrt(2)`
    pub fn plus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            amplitudes: ComplexVector::from_column_slice(&[c(s, 0.), c(s, 0.)]),
        }
    }

    /// `(|0> - i|1>)/sqrt(2)`
    pub fn minus_i() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            amplitudes: ComplexVector::from_column_slice(&[c(s, 0.), c(0., -s)]),
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn into_vector(self) -> ComplexVector {
        self.amplitudes
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Ket) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn tensor(&self, other: &Ket) -> Ket {
        Ket {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        }
    }

    pub fn projector(&self) -> ComplexMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    /// Applies a unitary; fails if the result is not normalized.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Ket> {
        if u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} columns", self.dim()),
                found: format!("{}", u.ncols()),
            });
        }
        Ket::new(u * &self.amplitudes)
    }
}

/// Hermitian, positive semidefinite, unit-trace operator on `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity to [`STRUCT_TOL`].
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let num_qubits = Self::check(&matrix)?;
        Ok(Self { num_qubits, matrix })
    }

    /// Builds a state the caller has already guaranteed to be physical.
    /// Invariants are still checked in debug builds.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(
            Self::check(&matrix).is_ok(),
            "trusted density matrix failed validation: {:?}",
            Self::check(&matrix)
        );
        let num_qubits = qubits_for_dim(matrix.nrows()).expect("dimension is a power of two");
        Self { num_qubits, matrix }
    }

    fn check(matrix: &ComplexMatrix) -> Result<usize> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                found: format!("{}x{}", matrix.nrows(), matrix.ncols()),
            });
        }
        let num_qubits = qubits_for_dim(matrix.nrows())?;
        if !is_finite(matrix) {
            return Err(Error::NonFinite);
        }
        let dev = hermitian_deviation(matrix);
        if dev > STRUCT_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STRUCT_TOL || tr.im.abs() > STRUCT_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let (values, _) = hermitian_eigen(matrix);
        let min = values.last().copied().unwrap_or(0.0);
        if min < -STRUCT_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(num_qubits)
    }

    pub fn from_ket(ket: &Ket) -> Result<Self> {
        qubits_for_dim(ket.dim())?;
        Ok(Self::from_trusted(hermitize(&ket.projector())))
    }

    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        Self {
            num_qubits,
            matrix: identity(dim).unscale(dim as f64),
        }
    }

    /// Convex mixture `sum_k w_k rho_k`; weights must sum to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        let dim = first.1.dim();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (w, rho) in parts {
            if rho.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: format!("{dim}"),
                    found: format!("{}", rho.dim()),
                });
            }
            if *w < 0.0 {
                return Err(Error::InvalidState(format!("negative mixture weight {w}")));
            }
            m += rho.matrix.scale(*w);
        }
        Self::new(m)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Eigenvalues (descending) and eigenvectors.
    pub fn eigen(&self) -> (Vec<f64>, ComplexMatrix) {
        hermitian_eigen(&self.matrix)
    }
}

/// Reduces `rho` to the qubits in `keep`, kept in ascending (register) order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.num_qubits();
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&q| q >= n) {
        return Err(Error::QubitOutOfRange {
            index: bad,
            num_qubits: n,
        });
    }
    let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
    let bit = |q: usize| 1usize << (n - 1 - q);
    // scatter a sub-register value into full-register bit positions
    let spread = |value: usize, qubits: &[usize]| -> usize {
        qubits
            .iter()
            .enumerate()
            .filter(|(k, _)| value & (1 << (qubits.len() - 1 - k)) != 0)
            .map(|(_, &q)| bit(q))
            .sum()
    };

    let dk = 1usize << kept.len();
    let dt = 1usize << traced.len();
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(dk, dk);
    for i in 0..dk {
        let fi = spread(i, &kept);
        for j in 0..dk {
            let fj = spread(j, &kept);
            let mut acc = c(0.0, 0.0);
            for t in 0..dt {
                let ft = spread(t, &traced);
                acc += m[(fi | ft, fj | ft)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(DensityMatrix::from_trusted(hermitize(&out)))
}

/// Single-qubit Pauli factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> ComplexMatrix {
        match self {
            Pauli::I => identity(2),
            Pauli::X => sigma_x(),
            Pauli::Y => sigma_y(),
            Pauli::Z => sigma_z(),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn from_char(ch: char) -> Option<Self> {
        match ch {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Three-qubit Pauli string; the first factor acts on qubit A.
///
/// Ordering is lexicographic with `I < X < Y < Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString([Pauli; 3]);

impl PauliString {
    pub const IDENTITY: PauliString = PauliString([Pauli::I; 3]);

    pub fn new(factors: [Pauli; 3]) -> Self {
        Self(factors)
    }

    pub fn factors(&self) -> [Pauli; 3] {
        self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&p| p == Pauli::I)
    }

    /// The 63 strings other than `III`, in lexicographic order.
    pub fn all_nontrivial() -> Vec<PauliString> {
        let mut out = Vec::with_capacity(63);
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                for cc in Pauli::ALL {
                    let p = PauliString([a, b, cc]);
                    if !p.is_identity() {
                        out.push(p);
                    }
                }
            }
        }
        out
    }

    /// Position in [`PauliString::all_nontrivial`].
    pub fn index(&self) -> Option<usize> {
        let code = self.0.iter().fold(0usize, |acc, &p| acc * 4 + p as usize);
        code.checked_sub(1)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 3 {
            return Err(Error::InvalidPauli(s.to_string()));
        }
        let mut factors = [Pauli::I; 3];
        for (slot, ch) in factors.iter_mut().zip(chars) {
            *slot = Pauli::from_char(ch).ok_or_else(|| Error::InvalidPauli(s.to_string()))?;
        }
        Ok(Self(factors))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.0 {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// 8x8 operator `P_A (x) P_B (x) P_C`.
pub fn pauli_operator(p: &PauliString) -> ComplexMatrix {
    let [a, b, cc] = p.factors();
    tensor_all(&[a.matrix(), b.matrix(), cc.matrix()])
}

/// `Tr(rho op)` for a Hermitian `op`.
pub fn expectation(rho: &DensityMatrix, op: &ComplexMatrix) -> Result<f64> {
    if op.shape() != (rho.dim(), rho.dim()) {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0}", rho.dim()),
            found: format!("{}x{}", op.nrows(), op.ncols()),
        });
    }
    let dev = hermitian_deviation(op);
    if dev > INPUT_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let value = (rho.matrix() * op).trace();
    debug_assert!(
        value.im.abs() < STRUCT_TOL,
        "imaginary residue {}",
        value.im
    );
    Ok(value.re)
}

/// `<target|rho|target>`, clamped to `[0, 1]`.
pub fn state_fidelity_pure(rho: &DensityMatrix, target: &Ket) -> Result<f64> {
    if target.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("ket of dimension {}", rho.dim()),
            found: format!("{}", target.dim()),
        });
    }
    let psi = target.amplitudes();
    let value = psi.dotc(&(rho.matrix() * psi)).re;
    debug_assert!((-STRUCT_TOL..=1.0 + STRUCT_TOL).contains(&value));
    Ok(value.clamp(0.0, 1.0))
}

/// Returns `(P rho P / p, p)` with `p = Tr(P rho P)`.
pub fn project_and_renormalize(
    rho: &DensityMatrix,
    projector: &ComplexMatrix,
) -> Result<(DensityMatrix, f64)> {
    if projector.shape() != (rho.dim(), rho.dim()) {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0}", rho.dim()),
            found: format!("{}x{}", projector.nrows(), projector.ncols()),
        });
    }
    if hermitian_deviation(projector) > STRUCT_TOL
        || max_abs_diff(&(projector * projector), projector) > STRUCT_TOL
    {
        return Err(Error::NotAProjector);
    }
    let projected = projector * rho.matrix() * projector.adjoint();
    let probability = projected.trace().re;
    if probability < 1e-12 {
        return Err(Error::VanishingProbability(probability.max(0.0)));
    }
    let state = DensityMatrix::from_trusted(hermitize(&projected.unscale(probability)));
    Ok((state, probability))
}

/// Projects a descending-sorted eigenvalue list onto the probability simplex
/// by repeatedly zeroing the smallest value and spreading it evenly over the
/// rest. Input must sum to one.
pub fn truncate_and_redistribute(values: &mut [f64]) {
    let mut deficit = 0.0;
    let mut active = values.len();
    while active > 0 {
        let last = values[active - 1];
        if last + deficit / active as f64 >= 0.0 {
            break;
        }
        deficit += last;
        values[active - 1] = 0.0;
        active -= 1;
    }
    let shift = deficit / active.max(1) as f64;
    for v in &mut values[..active] {
        *v += shift;
    }
}

/// Closest unit-trace PSD matrix to `h` in Frobenius norm.
///
/// The input is hermitized and, if its trace is off by more than
/// [`INPUT_TOL`], rescaled to unit trace first.
pub fn nearest_physical(h: &ComplexMatrix) -> Result<DensityMatrix> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", h.nrows(), h.ncols()),
        });
    }
    qubits_for_dim(h.nrows())?;
    if !is_finite(h) {
        return Err(Error::NonFinite);
    }
    let mut m = hermitize(h);
    let tr = real_trace(&m);
    if (tr - 1.0).abs() > INPUT_TOL {
        if tr <= 1e-12 {
            return Err(Error::InvalidState(format!(
                "cannot normalize matrix with trace {tr}"
            )));
        }
        m.unscale_mut(tr);
    }
    let (mut values, vectors) = hermitian_eigen(&m);
    // absorb the residual trace error so the simplex projection sees sum 1
    let excess = values.iter().sum::<f64>() - 1.0;
    let n = values.len() as f64;
    values.iter_mut().for_each(|v| *v -= excess / n);
    truncate_and_redistribute(&mut values);
    Ok(DensityMatrix::from_trusted(from_eigen(&values, &vectors)))
}
