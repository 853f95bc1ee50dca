use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate register name `{0}`")]
    DuplicateRegister(String),
    #[error("register `{0}` has zero width")]
    ZeroWidth(String),
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("qubit {qubit} outside circuit of {n_qubits} qubits")]
    QubitOutOfRange { qubit: u32, n_qubits: u32 },
    #[error("qubit {0} used twice within one gate")]
    OverlappingQubits(u32),
    #[error("width mismatch: expected {expected}, got {actual}")]
    WidthMismatch { expected: usize, actual: usize },
    #[error("gate needs at least one control")]
    NoControls,
    #[error("multi-controlled gate with zero controls has no cost")]
    ZeroControlCount,
    #[error("unknown data table `{0}`")]
    UnknownTable(String),
    #[error("duplicate data table `{0}`")]
    DuplicateTable(String),
    #[error("measurement plan does not partition the circuit's qubits: {0}")]
    BadMeasurementPlan(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("circuit is not classical after its Hadamard layer: {0}")]
    StructureViolation(String),
    #[error("{n_qubits} qubits exceed the dense-backend cap of {cap}")]
    DenseCapExceeded { n_qubits: u32, cap: u32 },
    #[error("{n_qubits} qubits exceed the path-sum word size of {max}")]
    TooManyQubits { n_qubits: u32, max: u32 },
    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),
    #[error("gate {0} carries no step tag")]
    UntaggedGate(usize),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),
}
