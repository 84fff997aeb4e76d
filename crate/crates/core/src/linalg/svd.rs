//! Singular value decomposition by one-sided Jacobi rotations.
//!
//! The matrices handled here never exceed a few hundred rows, so the simple
//! quadratically convergent pair sweep is accurate and fast enough. Columns
//! are orthogonalized in place while the applied rotations accumulate into
//! the right factor.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;

const MAX_SWEEPS: usize = 60;
const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// `left * diag(singular_values) * right^†` reconstructs the input.
/// Singular values are sorted in descending order.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub left: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub right: ComplexMatrix,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sq(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// Singular value decomposition of a square matrix.
pub fn svd(m: &ComplexMatrix) -> Result<SvdResult> {
    assert!(m.is_square(), "svd expects a square matrix");
    let n = m.rows();
    if n == 0 {
        return Ok(SvdResult {
            left: ComplexMatrix::zeros(0, 0),
            singular_values: vec![],
            right: ComplexMatrix::zeros(0, 0),
        });
    }

    let mut a: Vec<Vec<Complex64>> = (0..n).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut col = vec![Complex64::new(0.0, 0.0); n];
            col[j] = Complex64::new(1.0, 0.0);
            col
        })
        .collect();
    let mut norms: Vec<f64> = a.iter().map(|c| norm_sq(c)).collect();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let gpq = dot(&a[p], &a[q]);
                let mag = gpq.norm();
                // Relative to the pair's own scale, so the singular vectors
                // come out orthonormal regardless of conditioning.
                if mag <= OFF_DIAGONAL_TOL * (norms[p] * norms[q]).sqrt() {
                    continue;
                }
                rotated = true;
                let app = norms[p];
                let aqq = norms[q];
                let tau = (aqq - app) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // Absorb the Gram phase into column q so the 2x2 problem is real.
                let phase = (gpq / mag).conj();
                for i in 0..n {
                    let xp = a[p][i];
                    let xq = phase * a[q][i];
                    a[p][i] = xp * c - xq * s;
                    a[q][i] = xp * s + xq * c;
                }
                for i in 0..n {
                    let xp = v[p][i];
                    let xq = phase * v[q][i];
                    v[p][i] = xp * c - xq * s;
                    v[q][i] = xp * s + xq * c;
                }
                norms[p] = norm_sq(&a[p]);
                norms[q] = norm_sq(&a[q]);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::SvdNoConvergence { sweeps: MAX_SWEEPS });
    }

    let sigmas: Vec<f64> = norms.iter().map(|&x| x.sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigmas[j].partial_cmp(&sigmas[i]).unwrap().then(i.cmp(&j)));

    let sigma_max = sigmas[order[0]];
    let zero_tol = sigma_max * 1e-13;

    let singular_values: Vec<f64> = order.iter().map(|&i| sigmas[i]).collect();
    let right_cols: Vec<Vec<Complex64>> = order.iter().map(|&i| v[i].clone()).collect();

    let mut left_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut filled: Vec<bool> = Vec::with_capacity(n);
    for &i in &order {
        if sigmas[i] > zero_tol {
            let inv = 1.0 / sigmas[i];
            left_cols.push(a[i].iter().map(|&x| x * inv).collect());
            filled.push(true);
        } else {
            left_cols.push(vec![Complex64::new(0.0, 0.0); n]);
            filled.push(false);
        }
    }
    fill_orthonormal(&mut left_cols, &filled);

    Ok(SvdResult {
        left: ComplexMatrix::from_columns(n, &left_cols),
        singular_values,
        right: ComplexMatrix::from_columns(n, &right_cols),
    })
}

/// Replaces every unfilled column with a unit vector orthogonal to all other
/// columns: the standard basis vector with the largest residual after
/// projecting out the filled columns, ties resolved by index. Deterministic.
pub(crate) fn fill_orthonormal(cols: &mut [Vec<Complex64>], filled: &[bool]) {
    let dim = cols.first().map_or(0, |c| c.len());
    let mut done: Vec<usize> = filled
        .iter()
        .enumerate()
        .filter(|(_, &f)| f)
        .map(|(i, _)| i)
        .collect();
    for j in 0..cols.len() {
        if filled[j] {
            continue;
        }
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for e in 0..dim {
            let mut cand = vec![Complex64::new(0.0, 0.0); dim];
            cand[e] = Complex64::new(1.0, 0.0);
            for &d in &done {
                let proj = dot(&cols[d], &cand);
                for i in 0..dim {
                    let sub = cols[d][i] * proj;
                    cand[i] -= sub;
                }
            }
            let nrm = norm_sq(&cand).sqrt();
            if best.as_ref().map_or(true, |(b, _)| nrm > *b) {
                best = Some((nrm, cand));
            }
        }
        let (nrm, mut cand) = best.expect("dimension is positive");
        // The projector onto the unfilled subspace has trace >= 1, so the
        // best basis residual is at least 1/sqrt(dim).
        debug_assert!(nrm > 0.0);
        let inv = 1.0 / nrm;
        for x in cand.iter_mut() {
            *x = *x * inv;
        }
        cols[j] = cand;
        done.push(j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar_random_unitary;
    use crate::linalg::matrix::frobenius_distance;
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reconstruction(r: &SvdResult) -> ComplexMatrix {
        let n = r.singular_values.len();
        let scaled = ComplexMatrix::from_fn(n, n, |i, j| {
            r.left.get(i, j) * Complex64::new(r.singular_values[j], 0.0)
        });
        scaled.mul(&r.right.adjoint())
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |_, _| {
            let u = ((rng.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64);
            let w = ((rng.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64);
            Complex64::new(2.0 * u - 1.0, 2.0 * w - 1.0)
        })
    }

    /// Independent oracle: eigenvalues of the Hermitian matrix m^†m via
    /// classic two-sided Jacobi, squared singular values by another route.
    fn gram_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
        let n = m.rows();
        let mut h = m.adjoint().mul(m);
        for _ in 0..100 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in 0..n {
                    if p != q {
                        off = off.max(h.get(p, q).norm());
                    }
                }
            }
            if off < 1e-14 {
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let hpq = h.get(p, q);
                    let mag = hpq.norm();
                    if mag < 1e-300 {
                        continue;
                    }
                    let phase = hpq / mag;
                    let tau = (h.get(q, q).re - h.get(p, p).re) / (2.0 * mag);
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    // J acts on rows/columns p and q: H <- J^† H J
                    let mut jn = ComplexMatrix::identity(n);
                    jn.set(p, p, Complex64::new(c, 0.0));
                    jn.set(q, q, Complex64::new(c, 0.0));
                    jn.set(p, q, phase * s);
                    jn.set(q, p, -phase.conj() * s);
                    h = jn.adjoint().mul(&h).mul(&jn);
                }
            }
        }
        let mut eig: Vec<f64> = (0..n).map(|i| h.get(i, i).re.max(0.0)).collect();
        eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
        eig
    }

    #[test]
    fn diagonal_matrix_is_its_own_svd() {
        let m = ComplexMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                Complex64::new((4 - i) as f64, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let r = svd(&m).unwrap();
        assert_eq!(r.singular_values, vec![4.0, 3.0, 2.0, 1.0]);
        assert!(frobenius_distance(&r.left, &ComplexMatrix::identity(4)).unwrap() < 1e-14);
        assert!(frobenius_distance(&r.right, &ComplexMatrix::identity(4)).unwrap() < 1e-14);
    }

    #[test]
    fn zero_matrix_has_zero_singular_values() {
        let r = svd(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(r.singular_values, vec![0.0, 0.0, 0.0]);
        assert!(r.left.unitarity_deviation() < 1e-14);
        assert!(r.right.unitarity_deviation() < 1e-14);
    }

    #[test]
    fn random_4x4_reconstructs_and_matches_gram_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 4);
            let r = svd(&m).unwrap();
            let err = frobenius_distance(&reconstruction(&r), &m).unwrap();
            assert!(err <= 1e-12 * m.frobenius_norm(), "reconstruction {err}");

            let eig = gram_eigenvalues(&m);
            for (s, e) in r.singular_values.iter().zip(eig) {
                assert!((s * s - e).abs() < 1e-10, "sigma^2 {} vs eig {}", s * s, e);
            }
        }
    }

    #[test]
    fn reconstruction_and_orthonormality_across_dims() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &n in &[2usize, 4, 8, 16] {
            for _ in 0..100 {
                let m = random_matrix(&mut rng, n);
                let r = svd(&m).unwrap();
                let err = frobenius_distance(&reconstruction(&r), &m).unwrap();
                assert!(err <= 1e-12 * m.frobenius_norm());
                assert!(r.left.unitarity_deviation() < 1e-12);
                assert!(r.right.unitarity_deviation() < 1e-12);
                for w in r.singular_values.windows(2) {
                    assert!(w[0] >= w[1] && w[1] >= 0.0);
                }
            }
        }
    }

    #[test]
    fn rank_deficient_input_gets_completed_left_factor() {
        // Column 1 duplicates column 0, so one singular value vanishes.
        let u = haar_random_unitary(2, 5);
        let m = ComplexMatrix::from_fn(4, 4, |i, j| {
            let jj = if j == 1 { 0 } else { j };
            u.matrix().get(i, jj)
        });
        let r = svd(&m).unwrap();
        assert!(r.singular_values[3] < 1e-13);
        assert!(r.left.unitarity_deviation() < 1e-12);
        let err = frobenius_distance(&reconstruction(&r), &m).unwrap();
        assert!(err < 1e-12 * m.frobenius_norm().max(1.0));
    }
}
