//! Full synthesis: recursive cosine-sine expansion, phase absorption,
//! Gray-coded expansion of every uniformly controlled rotation, seam CNOT
//! cancellation, and gate-count reporting.

use std::time::{Duration, Instant};

use crate::blockdiag::{
    demultiplex, demultiplex_last, diagonal_cascade, zyz_decompose, BlockDiagUnitary,
};
use crate::circuit::{cancel_adjacent_cnots_in, count_gates, Axis, Circuit, Gate, GateCounts};
use crate::csd::cs_decompose;
use crate::error::{Error, Result};
use crate::graycode::{inorder_position, GraySource};
use crate::linalg::{
    frobenius_distance, ComplexMatrix, Mat2, UnitaryMatrix, DEFAULT_UNITARITY_TOL,
};
use crate::parallel::try_par_map;
use crate::ucr::UCRotation;

/// Rotations with |angle| below this are dropped by the pruning pass.
const PRUNE_TOL: f64 = 1e-12;

/// Flat residual allowed when multiplying a plan's factors back together.
const PLAN_VERIFY_TOL: f64 = 1e-9;

/// One splitting factor of the recursion: `position` locates it in the final
/// factor product, `level` is the recursion depth that produced it, and
/// `thetas` are its 2^(n-1) split angles.
#[derive(Debug, Clone)]
pub struct AFactor {
    pub position: usize,
    pub level: usize,
    pub thetas: Vec<f64>,
}

/// Fully expanded and absorbed factorization: reading
/// `b[0] a[0] b[1] a[1] ... b[last]` as a matrix product reproduces the
/// input.
#[derive(Debug, Clone)]
pub struct DecompositionPlan {
    pub n: usize,
    pub a_factors: Vec<AFactor>,
    pub b_factors: Vec<BlockDiagUnitary>,
}

/// Options for [`synthesize`].
#[derive(Debug, Clone)]
pub struct SynthesisOptions {
    /// Emit the z-rotation chains mirrored so seam CNOT pairs cancel.
    pub mirror: bool,
    /// Drop rotations with negligibly small angles. Off by default so gate
    /// counts stay structural.
    pub prune_zero: bool,
    /// Reconstruct the circuit and record the Frobenius error.
    pub verify: bool,
    /// Gray code family used for the CNOT chains.
    pub gray: GraySource,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        Self {
            mirror: true,
            prune_zero: false,
            verify: true,
            gray: GraySource::BinaryReflected,
        }
    }
}

/// Synthesis outcome summary. `sections` holds per-section tallies in
/// emission order: the final (diagonal-cascade) section first, then the
/// remaining sections right to left.
#[derive(Debug, Clone)]
pub struct SynthesisReport {
    pub counts: GateCounts,
    pub expected_cnot: usize,
    pub expected_one_qubit: usize,
    pub lower_bound_cnot: usize,
    pub reconstruction_error: Option<f64>,
    pub elapsed: Duration,
    pub sections: Vec<GateCounts>,
}

/// CNOT count of the full synthesis: 4^n − 2^(n+1).
pub fn expected_cnot_count(n: usize) -> usize {
    (1usize << (2 * n)) - (1usize << (n + 1))
}

/// One-qubit gate count of the full synthesis: 4^n.
pub fn expected_one_qubit_count(n: usize) -> usize {
    1usize << (2 * n)
}

/// Published lower bound on CNOTs for an arbitrary n-qubit gate:
/// ceil((4^n − 3n − 1) / 4). Report-only.
pub fn cnot_lower_bound(n: usize) -> usize {
    ((1usize << (2 * n)) - 3 * n - 1).div_ceil(4)
}

/// CNOT count of the diagonal path: 2^n − 2.
pub fn expected_diagonal_cnot_count(n: usize) -> usize {
    (1usize << n) - 2
}

/// One-qubit count of the diagonal path: 2^n.
pub fn expected_diagonal_one_qubit_count(n: usize) -> usize {
    1usize << n
}

/// Recursive cosine-sine expansion without any phase absorption.
pub(crate) struct ExpandedFactors {
    pub leaves: Vec<BlockDiagUnitary>,
    pub a_factors: Vec<AFactor>,
}

pub(crate) fn csd_expand(u: &UnitaryMatrix) -> Result<ExpandedFactors> {
    let n = u.n_qubits();
    debug_assert!(n >= 2);
    let mut factors: Vec<Vec<ComplexMatrix>> = vec![vec![u.matrix().clone()]];
    let mut a_factors: Vec<AFactor> = Vec::with_capacity((1usize << (n - 1)) - 1);

    for level in 1..n {
        let factor_count = factors.len();
        let blocks_per_factor = factors[0].len();
        let flat: Vec<ComplexMatrix> = factors.into_iter().flatten().collect();
        // Tiny splits are cheaper inline than on the pool.
        let serial = flat[0].rows() < 32 || flat.len() < 2;
        let results = try_par_map(&flat, serial, |block| {
            cs_decompose(&UnitaryMatrix::from_parts_unchecked(
                block.clone(),
                DEFAULT_UNITARITY_TOL,
            ))
        })?;

        let mut new_factors = Vec::with_capacity(factor_count * 2);
        let mut it = results.into_iter();
        for fi in 0..factor_count {
            let mut left = Vec::with_capacity(blocks_per_factor * 2);
            let mut right = Vec::with_capacity(blocks_per_factor * 2);
            let mut thetas = Vec::with_capacity(1usize << (n - 1));
            for _ in 0..blocks_per_factor {
                let f = it.next().expect("one split per block");
                thetas.extend_from_slice(&f.thetas);
                left.push(f.u11.into_matrix());
                left.push(f.u12.into_matrix());
                right.push(f.u21.into_matrix());
                right.push(f.u22.into_matrix());
            }
            a_factors.push(AFactor {
                position: inorder_position(level, fi + 1, n),
                level,
                thetas,
            });
            new_factors.push(left);
            new_factors.push(right);
        }
        factors = new_factors;
    }

    let leaves = factors
        .into_iter()
        .map(|blocks| {
            let mats: Vec<Mat2> = blocks
                .iter()
                .map(|b| Mat2::new(b.get(0, 0), b.get(0, 1), b.get(1, 0), b.get(1, 1)))
                .collect();
            BlockDiagUnitary::from_blocks_unchecked(n, mats)
        })
        .collect();
    a_factors.sort_by_key(|a| a.position);
    Ok(ExpandedFactors { leaves, a_factors })
}

pub(crate) struct SweepSection {
    pub level: usize,
    pub z_n: UCRotation,
    pub y_n: UCRotation,
    pub z_level: UCRotation,
    pub b: BlockDiagUnitary,
}

pub(crate) struct LastSection {
    pub z_n: UCRotation,
    pub y_n: UCRotation,
    pub z_n2: UCRotation,
    pub diag_phases: Vec<f64>,
    pub b: BlockDiagUnitary,
}

/// Left-to-right finalization: each factor's free phases are deferred into a
/// pattern that commutes past the neighbouring split factor, and its
/// conjugate is folded into the next block-diagonal factor. The stored `b`
/// matrices therefore satisfy the pure rotation-triple identity.
pub(crate) fn absorb_sweep(
    leaves: Vec<BlockDiagUnitary>,
    levels: &[usize],
) -> Result<(Vec<SweepSection>, LastSection)> {
    debug_assert_eq!(levels.len() + 1, leaves.len());
    let mut iter = leaves.into_iter();
    let mut current = iter.next().expect("at least one factor");
    let mut sections = Vec::with_capacity(levels.len());
    for &level in levels {
        let (z_n, y_n, z_level, pattern) = demultiplex(&current, level)?;
        let phases = pattern.expand_phases();
        let b = current.scale_cols_by_phases(&phases);
        let negated: Vec<f64> = phases.iter().map(|p| -p).collect();
        let next = iter
            .next()
            .expect("leaf count matches level count")
            .scale_rows_by_phases(&negated);
        sections.push(SweepSection {
            level,
            z_n,
            y_n,
            z_level,
            b,
        });
        current = next;
    }
    let (z_n, y_n, z_n2, diag_phases) = demultiplex_last(&current)?;
    Ok((
        sections,
        LastSection {
            z_n,
            y_n,
            z_n2,
            diag_phases,
            b: current,
        },
    ))
}

/// The split factor at recursion `level` as a uniformly controlled y
/// rotation of qubit `level`; the rotation angles are twice the split
/// angles.
fn split_rotation(n: usize, factor: &AFactor) -> Result<UCRotation> {
    let controls: Vec<usize> = (1..=n).filter(|&q| q != factor.level).collect();
    UCRotation::new(
        Axis::Y,
        factor.level,
        controls,
        factor.thetas.iter().map(|t| 2.0 * t).collect(),
    )
}

/// Builds and verifies the factor-level plan. The product of the returned
/// factors in order reproduces `u`.
pub fn build_plan(u: &UnitaryMatrix) -> Result<DecompositionPlan> {
    let n = u.n_qubits();
    if n < 2 {
        return Err(Error::DimTooSmall { dim: u.dim() });
    }
    let expanded = csd_expand(u)?;
    let levels: Vec<usize> = expanded.a_factors.iter().map(|a| a.level).collect();
    let (sections, last) = absorb_sweep(expanded.leaves, &levels)?;

    let mut b_factors: Vec<BlockDiagUnitary> = sections.into_iter().map(|s| s.b).collect();
    b_factors.push(last.b);
    let plan = DecompositionPlan {
        n,
        a_factors: expanded.a_factors,
        b_factors,
    };

    let mut product = plan.b_factors[0].to_matrix();
    for (j, factor) in plan.a_factors.iter().enumerate() {
        let split = split_rotation(n, factor)?.matrix(n)?;
        product = product.mul(split.matrix());
        product = product.mul(&plan.b_factors[j + 1].to_matrix());
    }
    let residual = frobenius_distance(&product, u.matrix())?;
    if residual > PLAN_VERIFY_TOL {
        return Err(Error::PlanVerificationFailure {
            residual,
            limit: PLAN_VERIFY_TOL,
        });
    }
    Ok(plan)
}

fn emit_ucr(
    gates: &mut Vec<Gate>,
    ucr: &UCRotation,
    gray: GraySource,
    mirrored: bool,
) -> Result<()> {
    if ucr.control_count() == 0 {
        gates.push(Gate::Rot {
            axis: ucr.axis(),
            qubit: ucr.target(),
            angle: ucr.angles()[0],
        });
        return Ok(());
    }
    let code = gray.code(ucr.control_count());
    let fragment = if mirrored {
        ucr.expand_mirrored(&code)?
    } else {
        ucr.expand(&code)?
    };
    gates.extend(fragment);
    Ok(())
}

fn finalize_section(mut gates: Vec<Gate>, options: &SynthesisOptions) -> Vec<Gate> {
    if options.prune_zero {
        gates.retain(|g| !matches!(g, Gate::Rot { angle, .. } if angle.abs() < PRUNE_TOL));
    }
    if options.mirror || options.prune_zero {
        gates = cancel_adjacent_cnots_in(gates);
    }
    gates
}

/// Synthesizes a circuit whose reconstruction equals `u` exactly, global
/// phase included. Gates are emitted so the factor product reads right to
/// left as application order; within every section the two z chains are
/// mirrored against the preceding y chains, which makes the seam CNOT pairs
/// adjacent, and the cancellation pass then removes four CNOTs per section.
pub fn synthesize(
    u: &UnitaryMatrix,
    options: &SynthesisOptions,
) -> Result<(Circuit, SynthesisReport)> {
    let start = Instant::now();
    let n = u.n_qubits();
    let mut gates: Vec<Gate> = Vec::new();
    let mut section_counts: Vec<GateCounts> = Vec::new();

    if n == 1 {
        let block = Mat2::new(
            u.matrix().get(0, 0),
            u.matrix().get(0, 1),
            u.matrix().get(1, 0),
            u.matrix().get(1, 1),
        );
        let angles = zyz_decompose(&block)?;
        let section = vec![
            Gate::Rot {
                axis: Axis::Z,
                qubit: 1,
                angle: angles.z2,
            },
            Gate::Rot {
                axis: Axis::Y,
                qubit: 1,
                angle: angles.y,
            },
            Gate::Rot {
                axis: Axis::Z,
                qubit: 1,
                angle: angles.z1,
            },
            Gate::GlobalPhase {
                angle: angles.phase,
            },
        ];
        let section = finalize_section(section, options);
        section_counts.push(count_gates(&section));
        gates.extend(section);
    } else {
        let expanded = csd_expand(u)?;
        let levels: Vec<usize> = expanded.a_factors.iter().map(|a| a.level).collect();
        let (sections, last) = absorb_sweep(expanded.leaves, &levels)?;

        // Final factor first: global phase, the diagonal cascade on the
        // first n-1 qubits, then its three rotation chains on qubit n.
        let (cascade, global_phase) = diagonal_cascade(&last.diag_phases)?;
        let mut section = vec![Gate::GlobalPhase {
            angle: global_phase,
        }];
        for ucr in cascade.iter().rev() {
            emit_ucr(&mut section, ucr, options.gray, false)?;
        }
        emit_ucr(&mut section, &last.z_n2, options.gray, false)?;
        emit_ucr(&mut section, &last.y_n, options.gray, false)?;
        emit_ucr(&mut section, &last.z_n, options.gray, options.mirror)?;
        let section = finalize_section(section, options);
        section_counts.push(count_gates(&section));
        gates.extend(section);

        // Remaining sections right to left in factor order.
        for j in (0..sections.len()).rev() {
            let s = &sections[j];
            let split = split_rotation(n, &expanded.a_factors[j])?;
            debug_assert_eq!(expanded.a_factors[j].level, s.level);
            let mut section = Vec::new();
            emit_ucr(&mut section, &split, options.gray, false)?;
            emit_ucr(&mut section, &s.z_level, options.gray, options.mirror)?;
            emit_ucr(&mut section, &s.y_n, options.gray, false)?;
            emit_ucr(&mut section, &s.z_n, options.gray, options.mirror)?;
            let section = finalize_section(section, options);
            section_counts.push(count_gates(&section));
            gates.extend(section);
        }
    }

    let circuit = Circuit::new(n, gates)?;
    let counts = circuit.counts();
    let reconstruction_error = if options.verify {
        Some(frobenius_distance(
            circuit.reconstruct().matrix(),
            u.matrix(),
        )?)
    } else {
        None
    };
    let report = SynthesisReport {
        counts,
        expected_cnot: expected_cnot_count(n),
        expected_one_qubit: expected_one_qubit_count(n),
        lower_bound_cnot: cnot_lower_bound(n),
        reconstruction_error,
        elapsed: start.elapsed(),
        sections: section_counts,
    };
    Ok((circuit, report))
}

/// Synthesizes `diag(e^{i phases[x]})` with exactly 2^n − 2 CNOTs and 2^n
/// one-qubit gates.
pub fn synthesize_diagonal(phases: &[f64]) -> Result<(Circuit, SynthesisReport)> {
    let start = Instant::now();
    let len = phases.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::LengthNotPowerOfTwo { len });
    }
    let n = len.trailing_zeros() as usize;
    let (cascade, global_phase) = diagonal_cascade(phases)?;
    let mut gates = vec![Gate::GlobalPhase {
        angle: global_phase,
    }];
    for ucr in cascade.iter().rev() {
        emit_ucr(&mut gates, ucr, GraySource::BinaryReflected, false)?;
    }
    let circuit = Circuit::new(n, gates)?;
    let counts = circuit.counts();

    let mut expected = ComplexMatrix::zeros(len, len);
    for (x, &p) in phases.iter().enumerate() {
        expected.set(x, x, num_complex::Complex64::from_polar(1.0, p));
    }
    let reconstruction_error = frobenius_distance(circuit.reconstruct().matrix(), &expected)?;

    let report = SynthesisReport {
        counts,
        expected_cnot: expected_diagonal_cnot_count(n),
        expected_one_qubit: expected_diagonal_one_qubit_count(n),
        lower_bound_cnot: cnot_lower_bound(n),
        reconstruction_error: Some(reconstruction_error),
        elapsed: start.elapsed(),
        sections: vec![counts],
    };
    Ok((circuit, report))
}
