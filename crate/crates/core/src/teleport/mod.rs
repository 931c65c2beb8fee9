//! Conditional projections, single-qubit process tomography and the
//! end-to-end teleportation benchmark.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::circuit::{Outcome, QUBIT_A, QUBIT_B, QUBIT_C};
use crate::qops::{
    c, embed, hermitize, identity, nearest_physical, partial_trace, project_and_renormalize,
    sigma_x, sigma_y, sigma_z, ComplexMatrix, ComplexVector, DensityMatrix, Ket,
};
use crate::{Error, Result, STRUCT_TOL};

mod bench;
mod report;

pub use bench::{
    run_benchmark, run_state, BenchmarkConfig, BenchmarkReport, ConditionalReport, GateTimes,
    ProcessReport, RunMetadata, StateReport, SCHEMA_VERSION, WITNESS_ALPHA,
};
pub use report::{
    format_summary, round_json, to_csv, to_json_string, ExperimentReference, ProcessReference,
    StateReference, EXPERIMENT_REFERENCE,
};

/// The four input states of the benchmark: `+z, -z, -y, +x` on the Bloch sphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InputState {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "minus")]
    Minus,
    #[serde(rename = "plus")]
    Plus,
}

impl InputState {
    pub const ALL: [InputState; 4] = [
        InputState::Zero,
        InputState::One,
        InputState::Minus,
        InputState::Plus,
    ];

    pub fn label(self) -> &'static str {
        match self {
            InputState::Zero => "0",
            InputState::One => "1",
            InputState::Minus => "minus",
            InputState::Plus => "plus",
        }
    }

    /// `|0>`, `|1>`, `(|0> - i|1>)/sqrt 2`, `(|0> + |1>)/sqrt 2`.
    pub fn ket(self) -> Ket {
        match self {
            InputState::Zero => Ket::zero(),
            InputState::One => Ket::one(),
            InputState::Minus => Ket::minus_i(),
            InputState::Plus => Ket::plus(),
        }
    }

    pub fn density(self) -> DensityMatrix {
        DensityMatrix::from_ket(&self.ket()).expect("basis kets are normalized")
    }

    /// Whether the ideal circuit output is genuinely tripartite entangled.
    pub fn is_tripartite(self) -> bool {
        matches!(self, InputState::Minus | InputState::Plus)
    }

    /// Density matrices of the canonical input set, in [`InputState::ALL`] order.
    pub fn canonical_set() -> Vec<DensityMatrix> {
        Self::ALL.iter().map(|s| s.density()).collect()
    }
}

impl fmt::Display for InputState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for InputState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|i| i.label() == s)
            .ok_or_else(|| {
                Error::InvalidState(format!(
                    "unknown input state {s:?} (expected one of 0, 1, minus, plus)"
                ))
            })
    }
}

/// `P_ij = |i_A j_B><i_A j_B| (x) I_C`.
pub fn outcome_projector(outcome: Outcome) -> ComplexMatrix {
    let (a, b) = outcome.bits();
    let mut local = ComplexMatrix::zeros(4, 4);
    local[(2 * a + b, 2 * a + b)] = c(1.0, 0.0);
    embed(&local, &[QUBIT_A, QUBIT_B], 3)
}

/// State of qubit C after projecting A and B onto `outcome`, and the
/// probability of that outcome.
pub fn conditional_output_state(
    rho_m: &DensityMatrix,
    outcome: Outcome,
) -> Result<(DensityMatrix, f64)> {
    if rho_m.num_qubits() != 3 {
        return Err(Error::DimensionMismatch {
            expected: "3-qubit state".into(),
            found: format!("{}-qubit state", rho_m.num_qubits()),
        });
    }
    let (projected, probability) = project_and_renormalize(rho_m, &outcome_projector(outcome))?;
    Ok((partial_trace(&projected, &[QUBIT_C])?, probability))
}

/// Ideal state of qubit C for an outcome: the branch operator applied to the input.
pub fn branch_state(psi: &Ket, outcome: Outcome) -> Result<Ket> {
    psi.evolve(&outcome.branch_operator())
}

/// Labels of the process-matrix operator basis.
pub const CHI_BASIS: [&str; 4] = ["I", "X", "Y~", "Z"];

/// Operator basis `{I, X, -i sigma_y, Z}`.
pub fn chi_basis() -> [ComplexMatrix; 4] {
    [identity(2), sigma_x(), sigma_y() * c(0.0, -1.0), sigma_z()]
}

/// Real and imaginary parts of a complex matrix as row-major nested arrays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixArrays {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&ComplexMatrix> for MatrixArrays {
    fn from(m: &ComplexMatrix) -> Self {
        let rows = |f: fn(&num_complex::Complex64) -> f64| {
            (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|k| f(&m[(r, k)])).collect())
                .collect()
        };
        Self {
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }
}

/// Single-qubit process matrix in the basis [`chi_basis`].
#[derive(Clone, Debug, PartialEq)]
pub struct ChiMatrix {
    matrix: ComplexMatrix,
}

impl ChiMatrix {
    /// Validates Hermiticity, unit trace and positivity within [`STRUCT_TOL`].
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.shape() != (4, 4) {
            return Err(Error::DimensionMismatch {
                expected: "4x4 process matrix".into(),
                found: format!("{}x{}", matrix.nrows(), matrix.ncols()),
            });
        }
        // same checks as a two-qubit density matrix
        let rho = DensityMatrix::new(matrix)?;
        Ok(Self {
            matrix: rho.into_matrix(),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn entry(&self, m: usize, n: usize) -> num_complex::Complex64 {
        self.matrix[(m, n)]
    }

    /// Applies the process to a single-qubit state, `sum_mn chi_mn B_m rho B_n^dagger`.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let basis = chi_basis();
        let mut out = ComplexMatrix::zeros(2, 2);
        for (m, bm) in basis.iter().enumerate() {
            for (n, bn) in basis.iter().enumerate() {
                out += bm * rho * bn.adjoint() * self.matrix[(m, n)];
            }
        }
        out
    }
}

impl Serialize for ChiMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            basis: [&'a str; 4],
            #[serde(flatten)]
            arrays: MatrixArrays,
        }
        Repr {
            basis: CHI_BASIS,
            arrays: MatrixArrays::from(&self.matrix),
        }
        .serialize(s)
    }
}

/// Ideal process for each outcome: a single unit entry at II, XX, ZZ or Y~Y~.
pub fn ideal_chi(outcome: Outcome) -> ChiMatrix {
    let k = match outcome {
        Outcome::O00 => 0,
        Outcome::O01 => 1,
        Outcome::O10 => 3,
        Outcome::O11 => 2,
    };
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(k, k)] = c(1.0, 0.0);
    ChiMatrix { matrix: m }
}

/// Reconstructs the process matrix mapping `inputs[j]` to `outputs[j]`.
///
/// The linear system `rho_out = sum_mn chi_mn B_m rho_in B_n^dagger` is solved in
/// the least-squares sense, then hermitized and projected onto the unit-trace
/// PSD cone by the same eigenvalue truncation used for states.
pub fn process_tomography(
    inputs: &[DensityMatrix],
    outputs: &[DensityMatrix],
) -> Result<ChiMatrix> {
    if inputs.len() != outputs.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} output states", inputs.len()),
            found: format!("{}", outputs.len()),
        });
    }
    for rho in inputs.iter().chain(outputs) {
        if rho.num_qubits() != 1 {
            return Err(Error::DimensionMismatch {
                expected: "single-qubit state".into(),
                found: format!("{}-qubit state", rho.num_qubits()),
            });
        }
    }
    let basis = chi_basis();
    let rows = 4 * inputs.len();
    let mut design = ComplexMatrix::zeros(rows.max(1), 16);
    let mut rhs = ComplexVector::zeros(rows.max(1));
    for (j, (rin, rout)) in inputs.iter().zip(outputs).enumerate() {
        for (m, bm) in basis.iter().enumerate() {
            for (n, bn) in basis.iter().enumerate() {
                let term = bm * rin.matrix() * bn.adjoint();
                for r in 0..2 {
                    for s in 0..2 {
                        design[(4 * j + 2 * r + s, 4 * m + n)] = term[(r, s)];
                    }
                }
            }
        }
        for r in 0..2 {
            for s in 0..2 {
                rhs[4 * j + 2 * r + s] = rout.matrix()[(r, s)];
            }
        }
    }
    if rows < 16 {
        return Err(Error::SingularDesign(format!(
            "{} input states cannot determine a single-qubit process",
            inputs.len()
        )));
    }
    let svd = design.svd(true, true);
    let s_max = svd.singular_values.max();
    let s_min = svd.singular_values.min();
    if !(s_min > 1e-10 * s_max) {
        return Err(Error::SingularDesign(format!(
            "input states are not tomographically complete (condition {:.3e})",
            s_max / s_min
        )));
    }
    let x = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::SingularDesign(e.to_string()))?;
    let raw = ComplexMatrix::from_fn(4, 4, |m, n| x[4 * m + n]);
    let chi = nearest_physical(&hermitize(&raw))?;
    Ok(ChiMatrix {
        matrix: chi.into_matrix(),
    })
}

/// `Re Tr(chi_m chi_t)`, clamped to `[0, 1]`.
pub fn process_fidelity(chi_m: &ChiMatrix, chi_t: &ChiMatrix) -> f64 {
    let tr = (chi_m.matrix() * chi_t.matrix()).trace();
    assert!(
        tr.im.abs() < STRUCT_TOL,
        "process fidelity has imaginary residue {}",
        tr.im
    );
    tr.re.clamp(0.0, 1.0)
}

/// `(2 F_p + 1) / 3`.
pub fn average_output_fidelity(fp: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&fp) {
        return Err(Error::OutOfRange {
            value: fp,
            min: 0.0,
            max: 1.0,
        });
    }
    Ok((2.0 * fp + 1.0) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{depolarizing_channel, ideal_phi};
    use crate::qops::random::{random_density, random_ket};
    use crate::qops::{max_abs_diff, state_fidelity_pure};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn channel_outputs(kraus: &[ComplexMatrix]) -> Vec<DensityMatrix> {
        InputState::canonical_set()
            .iter()
            .map(|rho| {
                let out = kraus.iter().fold(ComplexMatrix::zeros(2, 2), |acc, k| {
                    acc + k * rho.matrix() * k.adjoint()
                });
                DensityMatrix::new(hermitize(&out)).unwrap()
            })
            .collect()
    }

    /// chi_mn = sum_i e_im conj(e_in) with K_i = sum_m e_im B_m.
    fn chi_from_kraus(kraus: &[ComplexMatrix]) -> ComplexMatrix {
        let basis = chi_basis();
        let mut chi = ComplexMatrix::zeros(4, 4);
        for k in kraus {
            let e: Vec<_> = basis
                .iter()
                .map(|b| (b.adjoint() * k).trace() * 0.5)
                .collect();
            for m in 0..4 {
                for n in 0..4 {
                    chi[(m, n)] += e[m] * e[n].conj();
                }
            }
        }
        chi
    }

    #[test]
    fn input_labels_round_trip() {
        for s in InputState::ALL {
            assert_eq!(s.label().parse::<InputState>().unwrap(), s);
        }
        assert!("ghz".parse::<InputState>().is_err());
        assert!(InputState::Plus.is_tripartite());
        assert!(!InputState::One.is_tripartite());
    }

    #[test]
    fn conditional_states_of_minus_input() {
        let phi = ideal_phi(&Ket::minus_i()).unwrap();
        let rho = DensityMatrix::from_ket(&phi).unwrap();
        let minus = Ket::minus_i();
        let (c00, p00) = conditional_output_state(&rho, Outcome::O00).unwrap();
        assert!((p00 - 0.25).abs() < 1e-12);
        assert!(max_abs_diff(c00.matrix(), &minus.projector()) < 1e-12);
        let flipped = minus.evolve(&sigma_x()).unwrap();
        let (c01, p01) = conditional_output_state(&rho, Outcome::O01).unwrap();
        assert!((p01 - 0.25).abs() < 1e-12);
        assert!(max_abs_diff(c01.matrix(), &flipped.projector()) < 1e-12);
    }

    #[test]
    fn outcome_probabilities_are_uniform_for_ideal_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let psi = random_ket(2, &mut rng);
            let rho = DensityMatrix::from_ket(&ideal_phi(&psi).unwrap()).unwrap();
            for o in Outcome::ALL {
                let (out, p) = conditional_output_state(&rho, o).unwrap();
                assert!((p - 0.25).abs() < 1e-12);
                let target = branch_state(&psi, o).unwrap();
                assert!((state_fidelity_pure(&out, &target).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn outcome_probabilities_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let rho = random_density(3, 8, &mut rng);
            let total: f64 = Outcome::ALL
                .iter()
                .map(|&o| conditional_output_state(&rho, o).unwrap().1)
                .sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn vanishing_outcome_is_an_error() {
        let rho = DensityMatrix::from_ket(&Ket::basis(8, 0)).unwrap();
        assert!(matches!(
            conditional_output_state(&rho, Outcome::O11),
            Err(Error::VanishingProbability(_))
        ));
        assert!(
            conditional_output_state(&DensityMatrix::maximally_mixed(2), Outcome::O00).is_err()
        );
    }

    #[test]
    fn identity_process() {
        let inputs = InputState::canonical_set();
        let chi = process_tomography(&inputs, &inputs).unwrap();
        assert!(max_abs_diff(chi.matrix(), ideal_chi(Outcome::O00).matrix()) < 1e-12);
    }

    #[test]
    fn pauli_conjugations_give_ideal_chis() {
        let inputs = InputState::canonical_set();
        for o in Outcome::ALL {
            let outputs = channel_outputs(&[o.branch_operator()]);
            let chi = process_tomography(&inputs, &outputs).unwrap();
            assert!(
                max_abs_diff(chi.matrix(), ideal_chi(o).matrix()) < 1e-12,
                "outcome {o}"
            );
        }
        assert!((ideal_chi(Outcome::O11).entry(2, 2).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ideal_chis_are_projectors() {
        for o in Outcome::ALL {
            let m = ideal_chi(o).matrix().clone();
            assert!(max_abs_diff(&(&m * &m), &m) < 1e-15);
            assert_eq!(process_fidelity(&ideal_chi(o), &ideal_chi(o)), 1.0);
        }
    }

    #[test]
    fn depolarized_chi_has_quarter_fidelity() {
        let mut m = ComplexMatrix::zeros(4, 4);
        for k in 0..4 {
            m[(k, k)] = c(0.25, 0.0);
        }
        let chi = ChiMatrix::new(m).unwrap();
        for o in Outcome::ALL {
            assert!((process_fidelity(&chi, &ideal_chi(o)) - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn depolarizing_round_trip() {
        let ops = depolarizing_channel(0.3);
        let chi = process_tomography(&InputState::canonical_set(), &channel_outputs(&ops)).unwrap();
        assert!(max_abs_diff(chi.matrix(), &chi_from_kraus(&ops)) < 1e-12);
        let rho = InputState::Plus.density();
        let direct = channel_outputs(&ops)[3].matrix().clone();
        assert!(max_abs_diff(&chi.apply(rho.matrix()), &direct) < 1e-12);
    }

    #[test]
    fn amplitude_damping_round_trip() {
        let g: f64 = 0.35;
        let k0 = ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c((1.0 - g).sqrt(), 0.0),
            ],
        );
        let k1 = ComplexMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(g.sqrt(), 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        );
        let ops = [k0, k1];
        let chi = process_tomography(&InputState::canonical_set(), &channel_outputs(&ops)).unwrap();
        assert!(max_abs_diff(chi.matrix(), &chi_from_kraus(&ops)) < 1e-12);
    }

    #[test]
    fn incomplete_inputs_are_rejected() {
        let zero = InputState::Zero.density();
        let set = vec![zero.clone(), zero.clone(), zero.clone(), zero];
        assert!(matches!(
            process_tomography(&set, &set),
            Err(Error::SingularDesign(_))
        ));
        let three = &InputState::canonical_set()[..3];
        assert!(matches!(
            process_tomography(three, three),
            Err(Error::SingularDesign(_))
        ));
        let inputs = InputState::canonical_set();
        assert!(process_tomography(&inputs, &inputs[..2]).is_err());
    }

    #[test]
    fn average_fidelity_examples() {
        assert_eq!(average_output_fidelity(1.0).unwrap(), 1.0);
        assert!((average_output_fidelity(0.83).unwrap() - 0.886_666_666_666_666_7).abs() < 1e-12);
        assert!((average_output_fidelity(0.5).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(average_output_fidelity(1.2).is_err());
        assert!(average_output_fidelity(-0.1).is_err());
    }

    #[test]
    fn chi_serializes_with_basis_labels() {
        let v = serde_json::to_value(ideal_chi(Outcome::O01)).unwrap();
        assert_eq!(v["basis"][2], "Y~");
        assert_eq!(v["re"][1][1], 1.0);
        assert_eq!(v["im"][0][0], 0.0);
    }
}
