use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state norm {norm} deviates from 1")]
    NotNormalized { norm: f64 },
    #[error("zero vector cannot be normalized")]
    ZeroVector,
    #[error("{qubits} qubits exceed the {max}-qubit capacity")]
    Capacity { qubits: usize, max: usize },
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("qubit {0} listed more than once")]
    DuplicateQubit(usize),
    #[error("qubit map is not a bijection on 0..{0}")]
    NotBijective(usize),
    #[error("empty qubit subset")]
    EmptySubset,
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("invalid ket label `{0}`")]
    InvalidLabel(String),
    #[error("unknown catalog name `{0}`")]
    UnknownName(String),
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("basis `{0}` is not orthonormal and cannot be completed")]
    IncompleteBasis(String),
    #[error("measurement steps overlap on qubit {0}")]
    OverlappingTargets(usize),
    #[error("no correction for outcome {0}")]
    MissingCorrection(String),
    #[error("plan does not match party distribution: {0}")]
    PlanMismatch(String),
    #[error("candidates `{0}` and `{1}` are not orthogonal")]
    NotOrthogonal(String, String),
    #[error("malformed product term: {0}")]
    MalformedTerm(String),
    #[error("{0} distinct states exceed the clique search limit of {1}")]
    TooManyStates(usize, usize),
}
