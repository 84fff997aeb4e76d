//! Synthesis of elementary quantum circuits for arbitrary multi-qubit gates.
//!
//! Any 2^n x 2^n unitary decomposes, by recursive cosine-sine splitting,
//! into uniformly controlled y and z rotations; each of those expands into
//! an alternating chain of one-qubit rotations and CNOTs whose control
//! placement follows a cyclic Gray code. Mirroring the z chains cancels the
//! seam CNOTs, which lands the whole construction on exactly
//! 4^n − 2^(n+1) CNOTs and 4^n one-qubit gates. Every synthesized circuit
//! can be verified gate by gate against the input matrix, global phase
//! included.
//!
//! Entry points: [`synth::synthesize`], [`synth::synthesize_diagonal`],
//! [`synth::build_plan`], and [`circuit::Circuit::reconstruct`] for the
//! simulator oracle.
//!
//! The `parallel` feature (on by default) parallelizes reconstruction
//! columns and the independent block splits of each recursion level with
//! rayon; disabling it yields a dependency-light sequential build.

pub mod blockdiag;
pub mod circuit;
pub mod csd;
pub mod error;
pub mod format;
pub mod graycode;
pub mod linalg;
pub mod synth;
pub mod ucr;

mod bits;
mod parallel;

pub use circuit::{Axis, Circuit, Gate, GateCounts};
pub use error::{Error, Result};
pub use format::CircuitFormat;
pub use linalg::{
    frobenius_distance, haar_random_unitary, ComplexMatrix, UnitaryMatrix, DEFAULT_UNITARITY_TOL,
};
pub use synth::{synthesize, synthesize_diagonal, SynthesisOptions, SynthesisReport};
