//! Command-line frontend: synthesize circuits from unitary matrix files,
//! generate Haar-random test instances, verify circuits against matrices,
//! and print the expected gate-count table.
//!
//! Exit codes: 0 success, 2 parse/input error, 3 input not unitary,
//! 4 verification failure, 5 circuit/matrix width mismatch.

mod matfile;

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qcsd::format::{emit, parse, CircuitFormat};
use qcsd::graycode::GraySource;
use qcsd::linalg::{frobenius_distance, haar_random_unitary, UnitaryMatrix, DEFAULT_UNITARITY_TOL};
use qcsd::synth::{
    cnot_lower_bound, expected_cnot_count, expected_one_qubit_count, synthesize,
    synthesize_diagonal, SynthesisOptions, SynthesisReport,
};
use qcsd::Error;

const EXIT_PARSE: u8 = 2;
const EXIT_NOT_UNITARY: u8 = 3;
const EXIT_VERIFY: u8 = 4;
const EXIT_WIDTH: u8 = 5;

#[derive(Parser)]
#[command(
    name = "qcsd",
    about = "Quantum circuit synthesis via cosine-sine decomposition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Qasm,
    Json,
}

impl From<FormatArg> for CircuitFormat {
    fn from(value: FormatArg) -> Self {
        match value {
            FormatArg::Qasm => CircuitFormat::Qasm,
            FormatArg::Json => CircuitFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a circuit for the unitary matrix in FILE ("-" for stdin).
    Synth {
        input: PathBuf,
        /// Write the circuit here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Circuit output format.
        #[arg(long, value_enum, default_value = "qasm")]
        format: FormatArg,
        /// Verification tolerance on the Frobenius reconstruction error.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Emit every rotation chain unmirrored (no seam CNOT cancellation).
        #[arg(long)]
        no_mirror: bool,
        /// Drop rotations with negligible angles.
        #[arg(long)]
        prune_zero: bool,
        /// Skip the reconstruction check.
        #[arg(long)]
        no_verify: bool,
        /// Treat the input as a list of diagonal phases instead of a matrix.
        #[arg(long)]
        diagonal: bool,
    },
    /// Print a Haar-random unitary in the text matrix format.
    Random {
        /// Number of qubits.
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Reconstruct CIRCUIT and compare it against MATRIX.
    Verify {
        circuit: PathBuf,
        matrix: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Print expected gate counts and the published CNOT lower bound.
    Counts {
        /// Number of qubits.
        n: usize,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

type Failure = (u8, String);

fn classify(error: Error) -> Failure {
    let code = match &error {
        Error::NotUnitary { .. } | Error::NotSquare { .. } | Error::NotPowerOfTwo { .. } => {
            EXIT_NOT_UNITARY
        }
        Error::ShapeMismatch { .. } => EXIT_WIDTH,
        Error::Syntax { .. }
        | Error::UnknownGate { .. }
        | Error::WireOutOfRange { .. }
        | Error::LengthMismatch { .. }
        | Error::LengthNotPowerOfTwo { .. }
        | Error::DuplicateGlobalPhase
        | Error::CnotControlEqualsTarget { .. }
        | Error::IndexOutOfRange { .. } => EXIT_PARSE,
        _ => 1,
    };
    (code, error.to_string())
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut buffer = String::new();
        std::io::stdin()
            .read_to_string(&mut buffer)
            .map_err(|e| (EXIT_PARSE, format!("reading stdin: {e}")))?;
        Ok(buffer)
    } else {
        fs::read_to_string(path)
            .map_err(|e| (EXIT_PARSE, format!("reading {}: {e}", path.display())))
    }
}

fn print_report(report: &SynthesisReport) {
    eprintln!("cnot={}", report.counts.cnot);
    eprintln!("one_qubit={}", report.counts.one_qubit);
    eprintln!("expected_cnot={}", report.expected_cnot);
    eprintln!("lower_bound={}", report.lower_bound_cnot);
    match report.reconstruction_error {
        Some(err) => eprintln!("frobenius_error={:e}", err),
        None => eprintln!("frobenius_error=skipped"),
    }
    eprintln!("elapsed_ms={}", report.elapsed.as_millis());
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Synth {
            input,
            out,
            format,
            tol,
            no_mirror,
            prune_zero,
            no_verify,
            diagonal,
        } => {
            let text = read_input(&input)?;
            let (circuit, report) = if diagonal {
                let phases = matfile::parse_phases(&text).map_err(classify)?;
                synthesize_diagonal(&phases).map_err(classify)?
            } else {
                let matrix = matfile::parse_matrix(&text).map_err(classify)?;
                let unitary =
                    UnitaryMatrix::new(matrix, DEFAULT_UNITARITY_TOL).map_err(classify)?;
                let options = SynthesisOptions {
                    mirror: !no_mirror,
                    prune_zero,
                    verify: !no_verify,
                    gray: GraySource::BinaryReflected,
                };
                synthesize(&unitary, &options).map_err(classify)?
            };

            let serialized = emit(&circuit, format.into());
            match out {
                Some(path) => fs::write(&path, serialized)
                    .map_err(|e| (1, format!("writing {}: {e}", path.display())))?,
                None => print!("{serialized}"),
            }
            print_report(&report);
            match report.reconstruction_error {
                Some(err) if err > tol => Ok(EXIT_VERIFY),
                _ => Ok(0),
            }
        }
        Command::Random { n, seed } => {
            if n < 1 || n > 10 {
                return Err((EXIT_PARSE, format!("qubit count {n} out of range 1..=10")));
            }
            let unitary = haar_random_unitary(n, seed);
            print!("{}", matfile::emit_matrix_text(unitary.matrix()));
            Ok(0)
        }
        Command::Verify {
            circuit,
            matrix,
            tol,
        } => {
            let circuit_text = read_input(&circuit)?;
            let circuit_format = if circuit_text.trim_start().starts_with('{') {
                CircuitFormat::Json
            } else {
                CircuitFormat::Qasm
            };
            let parsed = parse(&circuit_text, circuit_format).map_err(classify)?;
            let matrix_text = read_input(&matrix)?;
            let target = matfile::parse_matrix(&matrix_text).map_err(classify)?;
            if target.rows() != 1 << parsed.n() {
                return Err((
                    EXIT_WIDTH,
                    format!(
                        "circuit acts on {} qubits but the matrix has dimension {}",
                        parsed.n(),
                        target.rows()
                    ),
                ));
            }
            let reconstructed = parsed.reconstruct();
            let err = frobenius_distance(reconstructed.matrix(), &target).map_err(classify)?;
            println!("frobenius_error={:e}", err);
            if err <= tol {
                Ok(0)
            } else {
                Ok(EXIT_VERIFY)
            }
        }
        Command::Counts { n } => {
            if n < 1 {
                return Err((EXIT_PARSE, "qubit count must be at least 1".to_string()));
            }
            println!(
                "n={} expected_cnot={} expected_one_qubit={} lower_bound={}",
                n,
                expected_cnot_count(n),
                expected_one_qubit_count(n),
                cnot_lower_bound(n)
            );
            Ok(0)
        }
    }
}
