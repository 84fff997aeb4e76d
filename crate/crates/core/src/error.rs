//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension {dim} is not a power of two at least 2")]
    NotPowerOfTwo { dim: usize },

    #[error("matrix is not unitary: deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("SVD failed to converge within {sweeps} sweeps")]
    SvdNoConvergence { sweeps: usize },

    #[error("shape mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("length {len} does not match the expected {expected}")]
    LengthMismatch { len: usize, expected: usize },

    #[error("length {len} is not a power of two")]
    LengthNotPowerOfTwo { len: usize },

    #[error("words {first:#b} and {second:#b} differ in {bits} bits, not exactly one")]
    NotGray { first: u32, second: u32, bits: u32 },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("CNOT control and target are both qubit {qubit}")]
    CnotControlEqualsTarget { qubit: usize },

    #[error("circuit has more than one global phase gate")]
    DuplicateGlobalPhase,

    #[error("gray code has {code_bits} bits but the rotation has {expected} controls")]
    CodeWidthMismatch { code_bits: usize, expected: usize },

    #[error("dimension {dim} is too small to split")]
    DimTooSmall { dim: usize },

    #[error("cosine-sine factors fail to reproduce the input: residual {residual:.3e} (limit {limit:.3e})")]
    ReconstructionFailure { residual: f64, limit: f64 },

    #[error("recursion level {level} out of range for {n} qubits")]
    LevelOutOfRange { level: usize, n: usize },

    #[error("plan product residual {residual:.3e} exceeds {limit:.3e}")]
    PlanVerificationFailure { residual: f64, limit: f64 },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown gate `{name}` at line {line}")]
    UnknownGate { line: usize, name: String },

    #[error("wire index {wire} out of range for {n} qubits at line {line}")]
    WireOutOfRange { line: usize, wire: usize, n: usize },
}
