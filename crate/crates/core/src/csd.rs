//! One level of the cosine-sine decomposition of a unitary matrix.
//!
//! A 2m x 2m unitary U splits as
//!
//! ```text
//!     U = | u11     |   |  C  S |   | u21     |
//!         |     u12 | * | -S  C | * |     u22 |
//! ```
//!
//! with u11..u22 unitary m x m blocks and C = diag(cos θ_l), S = diag(sin θ_l).
//! The split is computed from an SVD of the upper-left quadrant; the lower
//! left quadrant then determines u12 up to columns with vanishing sine,
//! which are filled by orthonormal completion. Every call verifies its own
//! reconstruction and refuses to return silently bad factors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    fill_orthonormal, frobenius_distance, svd, ComplexMatrix, UnitaryMatrix, DEFAULT_UNITARITY_TOL,
};

/// Sine values below this are treated as exactly zero: dividing by them
/// would amplify roundoff past the block tolerance, and an orthonormal
/// completion is exact there anyway.
const DEGENERACY_TOL: f64 = 1e-8;

/// Threshold for locating a column's anchor entry when fixing phases.
const GAUGE_ANCHOR_TOL: f64 = 1e-8;

/// Factors of one cosine-sine split. `thetas` are in [0, π/2], sorted
/// ascending, so the cosines come out descending.
#[derive(Debug, Clone)]
pub struct CsdFactors {
    pub u11: UnitaryMatrix,
    pub u12: UnitaryMatrix,
    pub u21: UnitaryMatrix,
    pub u22: UnitaryMatrix,
    pub thetas: Vec<f64>,
}

/// Multiplies the factors back together.
pub fn reconstruct_csd(f: &CsdFactors) -> UnitaryMatrix {
    let m = f.u11.dim();
    let cos: Vec<f64> = f.thetas.iter().map(|t| t.cos()).collect();
    let sin: Vec<f64> = f.thetas.iter().map(|t| t.sin()).collect();

    let scale_cols =
        |u: &ComplexMatrix, d: &[f64]| ComplexMatrix::from_fn(m, m, |i, j| u.get(i, j) * d[j]);

    let tl = scale_cols(f.u11.matrix(), &cos).mul(f.u21.matrix());
    let tr = scale_cols(f.u11.matrix(), &sin).mul(f.u22.matrix());
    let bl = scale_cols(f.u12.matrix(), &sin)
        .mul(f.u21.matrix())
        .scale(Complex64::new(-1.0, 0.0));
    let br = scale_cols(f.u12.matrix(), &cos).mul(f.u22.matrix());

    let full = ComplexMatrix::from_fn(2 * m, 2 * m, |i, j| match (i < m, j < m) {
        (true, true) => tl.get(i, j),
        (true, false) => tr.get(i, j - m),
        (false, true) => bl.get(i - m, j),
        (false, false) => br.get(i - m, j - m),
    });
    UnitaryMatrix::from_parts_unchecked(full, DEFAULT_UNITARITY_TOL)
}

/// Splits `u` into cosine-sine factors. Robust to repeated and extreme
/// angles; returns `ReconstructionFailure` rather than degraded factors.
pub fn cs_decompose(u: &UnitaryMatrix) -> Result<CsdFactors> {
    let dim = u.dim();
    if dim < 4 {
        return Err(Error::DimTooSmall { dim });
    }
    let m = dim / 2;
    let x11 = u.matrix().submatrix(0, 0, m, m);
    let x12 = u.matrix().submatrix(0, m, m, m);
    let x21 = u.matrix().submatrix(m, 0, m, m);
    let x22 = u.matrix().submatrix(m, m, m, m);

    let svd_result = svd(&x11)?;
    let mut left = svd_result.left;
    let mut right = svd_result.right;

    // Column-phase gauge: make the first significant entry of each left
    // column real nonnegative, compensating in the right factor so the
    // product is unchanged.
    for j in 0..m {
        let anchor = (0..m).find(|&i| left.get(i, j).norm() > GAUGE_ANCHOR_TOL);
        if let Some(i) = anchor {
            let a = left.get(i, j);
            let phase = (a / a.norm()).conj();
            for r in 0..m {
                left.set(r, j, left.get(r, j) * phase);
                right.set(r, j, right.get(r, j) * phase);
            }
        }
    }

    // Unitarity of u makes the columns of -X21 * right orthogonal with norms
    // sin θ_l, so normalizing them yields the columns of u12. The measured
    // column norm is the sine actually available in the data; it decides
    // degeneracy, since the singular values alone can report a sine of
    // ~1e-8 for a column that is exactly zero.
    let w = x21.mul(&right).scale(Complex64::new(-1.0, 0.0));
    let mut u12_cols: Vec<Vec<Complex64>> = vec![Vec::new(); m];
    let mut filled = vec![false; m];
    let mut w_norms = vec![0.0f64; m];
    for l in 0..m {
        let col = w.column(l);
        let norm = col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        w_norms[l] = norm;
        if norm >= DEGENERACY_TOL {
            let inv = 1.0 / norm;
            u12_cols[l] = col.iter().map(|&x| x * inv).collect();
            filled[l] = true;
        } else {
            u12_cols[l] = vec![Complex64::new(0.0, 0.0); m];
        }
    }

    // atan2 of (measured sine, singular value) is well conditioned at both
    // ends of [0, π/2], unlike acos near 1. A running max keeps the angles
    // non-decreasing through roundoff ties.
    let mut thetas = Vec::with_capacity(m);
    let mut previous = 0.0f64;
    for l in 0..m {
        let cosine = svd_result.singular_values[l].clamp(0.0, 1.0);
        let t = w_norms[l].min(1.0).atan2(cosine).max(previous);
        previous = t;
        thetas.push(t);
    }
    let sin: Vec<f64> = thetas.iter().map(|t| t.sin()).collect();
    let cos: Vec<f64> = thetas.iter().map(|t| t.cos()).collect();

    // Re-orthonormalize from the best-conditioned (largest sine) columns
    // down, then complete the near-zero-sine columns.
    let mut order: Vec<usize> = (0..m).filter(|&l| filled[l]).collect();
    order.sort_by(|&a, &b| w_norms[b].partial_cmp(&w_norms[a]).unwrap().then(a.cmp(&b)));
    let mut processed: Vec<usize> = Vec::with_capacity(order.len());
    for &l in &order {
        let mut col = u12_cols[l].clone();
        for &p in &processed {
            let proj: Complex64 = u12_cols[p]
                .iter()
                .zip(col.iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            for i in 0..m {
                let sub = u12_cols[p][i] * proj;
                col[i] -= sub;
            }
        }
        let norm = col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let inv = 1.0 / norm;
        for x in col.iter_mut() {
            *x *= inv;
        }
        u12_cols[l] = col;
        processed.push(l);
    }
    fill_orthonormal(&mut u12_cols, &filled);
    let u12 = ComplexMatrix::from_columns(m, &u12_cols);

    // u22 = C (u12^† X22) + S (u11^† X12); exact because C² + S² = I.
    let w3 = u12.adjoint().mul(&x22);
    let v = left.adjoint().mul(&x12);
    let u22 = ComplexMatrix::from_fn(m, m, |i, j| w3.get(i, j) * cos[i] + v.get(i, j) * sin[i]);

    let u21 = right.adjoint();

    let factors = CsdFactors {
        u11: UnitaryMatrix::new(left, DEFAULT_UNITARITY_TOL)?,
        u12: UnitaryMatrix::new(u12, DEFAULT_UNITARITY_TOL)?,
        u21: UnitaryMatrix::new(u21, DEFAULT_UNITARITY_TOL)?,
        u22: UnitaryMatrix::new(u22, DEFAULT_UNITARITY_TOL)?,
        thetas,
    };

    let residual = frobenius_distance(reconstruct_csd(&factors).matrix(), u.matrix())?;
    let limit = 1e-9 * dim as f64;
    if residual > limit {
        return Err(Error::ReconstructionFailure { residual, limit });
    }
    Ok(factors)
}
