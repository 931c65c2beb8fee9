use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("dimension {0} is not a power of two")]
    NotQubitRegister(usize),

    #[error("partial trace needs at least one kept qubit")]
    EmptyKeepSet,

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("invalid Pauli label {0:?}: expected 3 characters from I, X, Y, Z")]
    InvalidPauli(String),

    #[error("outcome has vanishing probability ({0:e})")]
    VanishingProbability(f64),

    #[error("projector is not Hermitian and idempotent")]
    NotAProjector,

    #[error("rotation axis is not a unit vector (norm {0})")]
    NonUnitAxis(f64),

    #[error("negative evolution time {0}")]
    NegativeTime(f64),

    #[error("unphysical dephasing: T2* = {t2_star} exceeds 2*T1 = {}", 2.0 * .t1)]
    UnphysicalDephasing { t1: f64, t2_star: f64 },

    #[error("invalid device parameters: {0}")]
    InvalidDevice(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("incomplete tomography record, missing: {}", .0.join(", "))]
    IncompleteRecord(Vec<String>),

    #[error("tomography record lists {0} more than once")]
    DuplicateSetting(String),

    #[error("witness alpha must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),

    #[error("value {value} outside [{min}, {max}]")]
    OutOfRange { value: f64, min: f64, max: f64 },

    #[error("process tomography design matrix is singular: {0}")]
    SingularDesign(String),
}
