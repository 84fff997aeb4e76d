//! 2x2 complex matrices and the elementary rotation blocks.

use num_complex::Complex64;

use crate::circuit::Axis;

/// 2x2 complex matrix, entries `[[m00, m01], [m10, m11]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub m00: Complex64,
    pub m01: Complex64,
    pub m10: Complex64,
    pub m11: Complex64,
}

impl Mat2 {
    pub fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        Self { m00, m01, m10, m11 }
    }

    pub fn identity() -> Self {
        Self::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        )
    }

    /// Rotation about the y or z axis through `angle`, with the convention
    /// R(φ) = exp(+i a·σ φ/2), so
    /// Rz(φ) = diag(e^{iφ/2}, e^{−iφ/2}) and
    /// Ry(φ) = [[cos φ/2, sin φ/2], [−sin φ/2, cos φ/2]].
    pub fn rotation(axis: Axis, angle: f64) -> Self {
        let h = 0.5 * angle;
        match axis {
            Axis::Y => Self::new(
                Complex64::new(h.cos(), 0.0),
                Complex64::new(h.sin(), 0.0),
                Complex64::new(-h.sin(), 0.0),
                Complex64::new(h.cos(), 0.0),
            ),
            Axis::Z => Self::new(
                Complex64::from_polar(1.0, h),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::from_polar(1.0, -h),
            ),
        }
    }

    /// e^{iφ} times the identity.
    pub fn phase(angle: f64) -> Self {
        let p = Complex64::from_polar(1.0, angle);
        Self::new(p, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), p)
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        Mat2::new(
            self.m00 * rhs.m00 + self.m01 * rhs.m10,
            self.m00 * rhs.m01 + self.m01 * rhs.m11,
            self.m10 * rhs.m00 + self.m11 * rhs.m10,
            self.m10 * rhs.m01 + self.m11 * rhs.m11,
        )
    }

    pub fn adjoint(&self) -> Mat2 {
        Mat2::new(
            self.m00.conj(),
            self.m10.conj(),
            self.m01.conj(),
            self.m11.conj(),
        )
    }

    pub fn scale(&self, z: Complex64) -> Mat2 {
        Mat2::new(self.m00 * z, self.m01 * z, self.m10 * z, self.m11 * z)
    }

    pub fn det(&self) -> Complex64 {
        self.m00 * self.m11 - self.m01 * self.m10
    }

    /// Max |(M^†M − I)_{ij}|.
    pub fn unitarity_deviation(&self) -> f64 {
        let g = self.adjoint().mul(self);
        let one = Complex64::new(1.0, 0.0);
        (g.m00 - one)
            .norm()
            .max((g.m11 - one).norm())
            .max(g.m01.norm())
            .max(g.m10.norm())
    }

    pub fn max_abs_diff(&self, rhs: &Mat2) -> f64 {
        (self.m00 - rhs.m00)
            .norm()
            .max((self.m01 - rhs.m01).norm())
            .max((self.m10 - rhs.m10).norm())
            .max((self.m11 - rhs.m11).norm())
    }
}
