//! Decomposition of 2x2-block-diagonal unitaries into uniformly controlled
//! rotation triples, with the leftover phases either collected into a
//! deferred phase pattern or realized by a cascade of diagonal rotations.

use num_complex::Complex64;

use crate::bits::{control_value, qubit_mask};
use crate::circuit::Axis;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Mat2};
use crate::ucr::UCRotation;

const BLOCK_UNITARITY_TOL: f64 = 1e-12;
const ZYZ_GUARD_TOL: f64 = 1e-8;
const ZYZ_DEGENERATE_TOL: f64 = 1e-12;

/// Unitary that is 2x2-block-diagonal in the computational basis: block `k`
/// acts on qubit `n` conditioned on the remaining qubits reading `k-1`.
#[derive(Debug, Clone)]
pub struct BlockDiagUnitary {
    n: usize,
    blocks: Vec<Mat2>,
}

impl BlockDiagUnitary {
    pub fn new(n: usize, blocks: Vec<Mat2>) -> Result<Self> {
        assert!(n >= 1);
        let expected = 1usize << (n - 1);
        if blocks.len() != expected {
            return Err(Error::LengthMismatch {
                len: blocks.len(),
                expected,
            });
        }
        for b in &blocks {
            let deviation = b.unitarity_deviation();
            if !(deviation <= BLOCK_UNITARITY_TOL) {
                return Err(Error::NotUnitary {
                    deviation,
                    tol: BLOCK_UNITARITY_TOL,
                });
            }
        }
        Ok(Self { n, blocks })
    }

    pub(crate) fn from_blocks_unchecked(n: usize, blocks: Vec<Mat2>) -> Self {
        debug_assert_eq!(blocks.len(), 1usize << (n - 1));
        Self { n, blocks }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_blocks_unchecked(n, vec![Mat2::identity(); 1 << (n - 1)])
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn blocks(&self) -> &[Mat2] {
        &self.blocks
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let dim = 1usize << self.n;
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (k, b) in self.blocks.iter().enumerate() {
            let x0 = 2 * k;
            m.set(x0, x0, b.m00);
            m.set(x0, x0 + 1, b.m01);
            m.set(x0 + 1, x0, b.m10);
            m.set(x0 + 1, x0 + 1, b.m11);
        }
        m
    }

    /// Right-multiplication by diag(e^{i phases[x]}), which scales columns.
    pub(crate) fn scale_cols_by_phases(&self, phases: &[f64]) -> Self {
        debug_assert_eq!(phases.len(), 1 << self.n);
        let blocks = self
            .blocks
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let p0 = Complex64::from_polar(1.0, phases[2 * k]);
                let p1 = Complex64::from_polar(1.0, phases[2 * k + 1]);
                Mat2::new(b.m00 * p0, b.m01 * p1, b.m10 * p0, b.m11 * p1)
            })
            .collect();
        Self::from_blocks_unchecked(self.n, blocks)
    }

    /// Left-multiplication by diag(e^{i phases[x]}), which scales rows.
    pub(crate) fn scale_rows_by_phases(&self, phases: &[f64]) -> Self {
        debug_assert_eq!(phases.len(), 1 << self.n);
        let blocks = self
            .blocks
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let p0 = Complex64::from_polar(1.0, phases[2 * k]);
                let p1 = Complex64::from_polar(1.0, phases[2 * k + 1]);
                Mat2::new(b.m00 * p0, b.m01 * p0, b.m10 * p1, b.m11 * p1)
            })
            .collect();
        Self::from_blocks_unchecked(self.n, blocks)
    }
}

/// Diagonal phase matrix whose phase vector is independent of one qubit's
/// bit: consecutive block pairs at `level` repeat. Carries 2^(n-1) free
/// angles laid out by the value of the qubits other than `level`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePattern {
    n: usize,
    level: usize,
    free_angles: Vec<f64>,
}

impl PhasePattern {
    pub fn new(n: usize, level: usize, free_angles: Vec<f64>) -> Result<Self> {
        if level < 1 || level >= n {
            return Err(Error::LevelOutOfRange { level, n });
        }
        let expected = 1usize << (n - 1);
        if free_angles.len() != expected {
            return Err(Error::LengthMismatch {
                len: free_angles.len(),
                expected,
            });
        }
        Ok(Self {
            n,
            level,
            free_angles,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn level(&self) -> usize {
        self.level
    }

    #[inline]
    pub fn free_angles(&self) -> &[f64] {
        &self.free_angles
    }

    /// The 2^n diagonal phase angles.
    pub fn expand_phases(&self) -> Vec<f64> {
        let others: Vec<usize> = (1..=self.n).filter(|&q| q != self.level).collect();
        (0..1usize << self.n)
            .map(|x| self.free_angles[control_value(x, self.n, &others)])
            .collect()
    }

    pub fn expand_matrix(&self) -> ComplexMatrix {
        let phases = self.expand_phases();
        let dim = phases.len();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (x, &p) in phases.iter().enumerate() {
            m.set(x, x, Complex64::from_polar(1.0, p));
        }
        m
    }
}

/// Euler angles of a 2x2 unitary: u = e^{i phase} Rz(z1) Ry(y) Rz(z2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZyzAngles {
    pub phase: f64,
    pub z1: f64,
    pub y: f64,
    pub z2: f64,
}

impl ZyzAngles {
    pub fn recompose(&self) -> Mat2 {
        Mat2::phase(self.phase)
            .mul(&Mat2::rotation(Axis::Z, self.z1))
            .mul(&Mat2::rotation(Axis::Y, self.y))
            .mul(&Mat2::rotation(Axis::Z, self.z2))
    }
}

/// Euler decomposition with y in [0, π] and phase in (−π, π]. Degenerate
/// blocks (y near 0 or π) put the whole z angle into z1.
pub fn zyz_decompose(u: &Mat2) -> Result<ZyzAngles> {
    let deviation = u.unitarity_deviation();
    if !(deviation <= ZYZ_GUARD_TOL) {
        return Err(Error::NotUnitary {
            deviation,
            tol: ZYZ_GUARD_TOL,
        });
    }
    let cos_half = u.m00.norm();
    let sin_half = u.m01.norm();
    let y = 2.0 * sin_half.atan2(cos_half);
    let phase = 0.5 * u.det().arg();
    let (z1, z2) = if sin_half < ZYZ_DEGENERATE_TOL {
        (2.0 * (u.m00.arg() - phase), 0.0)
    } else if cos_half < ZYZ_DEGENERATE_TOL {
        (2.0 * (u.m01.arg() - phase), 0.0)
    } else {
        let sum = 2.0 * (u.m00.arg() - phase);
        let diff = 2.0 * (u.m01.arg() - phase);
        (0.5 * (sum + diff), 0.5 * (sum - diff))
    };
    Ok(ZyzAngles { phase, z1, y, z2 })
}

fn zyz_all(u: &BlockDiagUnitary) -> Result<Vec<ZyzAngles>> {
    u.blocks().iter().map(zyz_decompose).collect()
}

/// Residual diagonal phases diag_k(e^{i phase_k} Rz(z2_k)) as a vector over
/// basis indices.
fn residual_phase_vector(angles: &[ZyzAngles]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * angles.len());
    for a in angles {
        out.push(a.phase + 0.5 * a.z2);
        out.push(a.phase - 0.5 * a.z2);
    }
    out
}

/// Splits a block-diagonal unitary into three uniformly controlled rotations
/// plus a deferred phase pattern at `level`:
///
/// ```text
///     u * expand(pattern) = UCRz_n(z1) * UCRy_n(y) * UCRz_level(delta)
/// ```
///
/// The residual per-block phases split exactly into the component that flips
/// sign under toggling the `level` bit (realized by the z rotation on that
/// qubit) and the symmetric remainder (deferred into the pattern).
pub fn demultiplex(
    u: &BlockDiagUnitary,
    level: usize,
) -> Result<(UCRotation, UCRotation, UCRotation, PhasePattern)> {
    let n = u.n();
    if level < 1 || level >= n {
        return Err(Error::LevelOutOfRange { level, n });
    }
    let angles = zyz_all(u)?;
    let z1: Vec<f64> = angles.iter().map(|a| a.z1).collect();
    let y: Vec<f64> = angles.iter().map(|a| a.y).collect();
    let ucr_z_n = UCRotation::new(Axis::Z, n, (1..n).collect(), z1)?;
    let ucr_y_n = UCRotation::new(Axis::Y, n, (1..n).collect(), y)?;

    let psi = residual_phase_vector(&angles);
    let mask = qubit_mask(n, level);
    let others: Vec<usize> = (1..=n).filter(|&q| q != level).collect();
    let half = 1usize << (n - 1);
    let mut delta = vec![0.0; half];
    let mut pattern = vec![0.0; half];
    for x in 0..1usize << n {
        if x & mask != 0 {
            continue;
        }
        let partner = x | mask;
        let v = control_value(x, n, &others);
        delta[v] = psi[x] - psi[partner];
        pattern[v] = -0.5 * (psi[x] + psi[partner]);
    }
    let ucr_z_level = UCRotation::new(Axis::Z, level, others, delta)?;
    let pattern = PhasePattern::new(n, level, pattern)?;
    Ok((ucr_z_n, ucr_y_n, ucr_z_level, pattern))
}

/// Variant for the last factor, where no absorption target remains: the
/// residual phases stay as a per-block diagonal,
/// `u = UCRz_n(z1) * UCRy_n(y) * UCRz_n(z2) * diag_k(e^{i phases[k]} I)`.
pub fn demultiplex_last(
    u: &BlockDiagUnitary,
) -> Result<(UCRotation, UCRotation, UCRotation, Vec<f64>)> {
    let n = u.n();
    let angles = zyz_all(u)?;
    let z1: Vec<f64> = angles.iter().map(|a| a.z1).collect();
    let y: Vec<f64> = angles.iter().map(|a| a.y).collect();
    let z2: Vec<f64> = angles.iter().map(|a| a.z2).collect();
    let phases: Vec<f64> = angles.iter().map(|a| a.phase).collect();
    Ok((
        UCRotation::new(Axis::Z, n, (1..n).collect(), z1)?,
        UCRotation::new(Axis::Y, n, (1..n).collect(), y)?,
        UCRotation::new(Axis::Z, n, (1..n).collect(), z2)?,
        phases,
    ))
}

/// Realizes `diag(e^{i phases[x]})` on qubits 1..m as a cascade of uniformly
/// controlled z rotations with shrinking control sets plus a global phase.
///
/// At each step the phase vector splits into the part that is antisymmetric
/// under the last qubit's bit (a z rotation of that qubit) and the symmetric
/// part, which recurses on one fewer qubit. The split is exact.
pub fn diagonal_cascade(phases: &[f64]) -> Result<(Vec<UCRotation>, f64)> {
    let len = phases.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::LengthNotPowerOfTwo { len });
    }
    let qubits = len.trailing_zeros() as usize;
    let mut cascade = Vec::with_capacity(qubits);
    let mut current = phases.to_vec();
    for target in (1..=qubits).rev() {
        let half = current.len() / 2;
        let mut delta = Vec::with_capacity(half);
        let mut symmetric = Vec::with_capacity(half);
        for c in 0..half {
            let a = current[2 * c];
            let b = current[2 * c + 1];
            delta.push(a - b);
            symmetric.push(0.5 * (a + b));
        }
        cascade.push(UCRotation::new(
            Axis::Z,
            target,
            (1..target).collect(),
            delta,
        )?);
        current = symmetric;
    }
    Ok((cascade, current[0]))
}
