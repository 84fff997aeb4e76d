//! Dense complex matrices and certified unitary matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance for unitarity certification.
pub const DEFAULT_UNITARITY_TOL: f64 = 1e-10;

/// Dense complex matrix, row-major storage, double precision.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = i * rhs.cols;
                for j in 0..rhs.cols {
                    out.data[row + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, z: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * z).collect(),
        }
    }

    /// Kronecker (tensor) product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            self.get(i / rhs.rows, j / rhs.cols) * rhs.get(i % rhs.rows, j % rhs.cols)
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn submatrix(
        &self,
        r0: usize,
        c0: usize,
        rows: usize,
        cols: usize,
    ) -> ComplexMatrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        ComplexMatrix::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    pub(crate) fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub(crate) fn from_columns(rows: usize, cols: &[Vec<Complex64>]) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i])
    }

    /// Max |(M^† M - I)_{ij}| over all entries.
    pub fn unitarity_deviation(&self) -> f64 {
        let gram = self.adjoint().mul(self);
        let mut dev = 0.0f64;
        for i in 0..gram.rows {
            for j in 0..gram.cols {
                let expect = if i == j { 1.0 } else { 0.0 };
                let d = (gram.get(i, j) - expect).norm();
                dev = dev.max(d);
            }
        }
        dev
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::mul(self, rhs)
    }
}

/// Frobenius distance ‖a − b‖_F.
pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::ShapeMismatch {
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: b.rows(),
            right_cols: b.cols(),
        });
    }
    let mut sum = 0.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            sum += (a.get(i, j) - b.get(i, j)).norm_sqr();
        }
    }
    Ok(sum.sqrt())
}

/// Square matrix of power-of-two dimension certified unitary at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    matrix: ComplexMatrix,
    unitarity_tol: f64,
}

impl UnitaryMatrix {
    /// Certifies `matrix` by checking ‖M^†M − I‖_max ≤ `tol`.
    pub fn new(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let dim = matrix.rows();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { dim });
        }
        let deviation = matrix.unitarity_deviation();
        if !(deviation <= tol) {
            return Err(Error::NotUnitary { deviation, tol });
        }
        Ok(Self {
            dim,
            matrix,
            unitarity_tol: tol,
        })
    }

    /// For matrices whose unitarity is guaranteed by construction.
    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix, recorded_tol: f64) -> Self {
        debug_assert!(matrix.is_square());
        let dim = matrix.rows();
        debug_assert!(dim >= 2 && dim.is_power_of_two());
        Self {
            dim,
            matrix,
            unitarity_tol: recorded_tol,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits, i.e. log2 of the dimension.
    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    #[inline]
    pub fn unitarity_tol(&self) -> f64 {
        self.unitarity_tol
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}
