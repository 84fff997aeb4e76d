//! Haar-distributed random unitaries for test inputs and benchmarks.

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::matrix::{ComplexMatrix, UnitaryMatrix, DEFAULT_UNITARITY_TOL};

fn uniform_open(rng: &mut ChaCha8Rng) -> f64 {
    // (0, 1], safe as a log argument.
    (((rng.next_u64() >> 11) as f64) + 1.0) * (1.0 / (1u64 << 53) as f64)
}

fn standard_normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let r = (-2.0 * uniform_open(rng).ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * uniform_open(rng);
    (r * theta.cos(), r * theta.sin())
}

/// Deterministic Haar-random `n`-qubit unitary for the given seed.
///
/// Samples a complex Gaussian matrix and orthonormalizes its columns; the
/// triangular factor's diagonal comes out real positive, which removes the
/// phase ambiguity and leaves the Haar distribution.
pub fn haar_random_unitary(n: usize, seed: u64) -> UnitaryMatrix {
    assert!((1..=12).contains(&n), "qubit count must be in 1..=12");
    let dim = 1usize << n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let (re, im) = standard_normal_pair(&mut rng);
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect();

    for j in 0..dim {
        // One re-orthogonalization pass keeps deviations near machine epsilon.
        for _ in 0..2 {
            for i in 0..j {
                let proj: Complex64 = cols[i]
                    .iter()
                    .zip(cols[j].iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                for r in 0..dim {
                    let sub = cols[i][r] * proj;
                    cols[j][r] -= sub;
                }
            }
        }
        let norm = cols[j].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let inv = 1.0 / norm;
        for x in cols[j].iter_mut() {
            *x *= inv;
        }
    }

    let matrix = ComplexMatrix::from_columns(dim, &cols);
    UnitaryMatrix::new(matrix, DEFAULT_UNITARITY_TOL)
        .expect("orthonormalized Gaussian matrix is unitary")
}
