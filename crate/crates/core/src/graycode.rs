//! Cyclic Gray codes, the rotation-angle linear system and its fast inverse,
//! and the index bookkeeping for the recursive decomposition.

use crate::error::{Error, Result};

/// Cyclic Gray code over `k`-bit words.
///
/// Words are stored as integer values; bit position 1 is the leftmost (most
/// significant) bit of a word. Adjacent words differ in exactly one bit,
/// including the wrap-around pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayCode {
    bits: usize,
    words: Vec<u32>,
}

impl GrayCode {
    /// Validates that `words` is a cyclic Gray ordering of all `k`-bit words.
    pub fn new(bits: usize, words: Vec<u32>) -> Result<Self> {
        assert!((1..=16).contains(&bits), "bit count must be in 1..=16");
        let len = 1usize << bits;
        if words.len() != len {
            return Err(Error::LengthMismatch {
                len: words.len(),
                expected: len,
            });
        }
        let mut seen = vec![false; len];
        for &w in &words {
            if (w as usize) >= len || seen[w as usize] {
                return Err(Error::IndexOutOfRange {
                    index: w as usize,
                    limit: len - 1,
                });
            }
            seen[w as usize] = true;
        }
        for l in 0..len {
            let a = words[l];
            let b = words[(l + 1) % len];
            let diff = (a ^ b).count_ones();
            if diff != 1 {
                return Err(Error::NotGray {
                    first: a,
                    second: b,
                    bits: diff,
                });
            }
        }
        Ok(Self { bits, words })
    }

    /// Standard binary reflected Gray code: word j is `j ^ (j >> 1)`.
    pub fn binary_reflected(bits: usize) -> Self {
        assert!((1..=16).contains(&bits), "bit count must be in 1..=16");
        let words = (0..1u32 << bits).map(|j| j ^ (j >> 1)).collect();
        Self { bits, words }
    }

    /// Binary reflected code cyclically rotated by `offset` positions.
    /// Still a cyclic Gray code, but its first word is generally nonzero.
    pub fn rotated_binary_reflected(bits: usize, offset: usize) -> Self {
        let base = Self::binary_reflected(bits);
        let len = base.words.len();
        let words = (0..len).map(|l| base.words[(l + offset) % len]).collect();
        Self { bits, words }
    }

    #[inline]
    pub fn bits(&self) -> usize {
        self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn word(&self, index: usize) -> u32 {
        self.words[index]
    }

    /// Bit positions (1-based, 1 = leftmost) where consecutive words differ.
    ///
    /// Entry `l` compares words `l` and `l+1`; the final entry closes the
    /// cycle by comparing the last word with the first.
    pub fn transition_positions(&self) -> Vec<usize> {
        let len = self.len();
        (0..len)
            .map(|l| {
                let diff = self.words[l] ^ self.words[(l + 1) % len];
                debug_assert_eq!(diff.count_ones(), 1);
                self.bits - diff.trailing_zeros() as usize
            })
            .collect()
    }
}

/// How synthesis obtains the Gray code for each control count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraySource {
    #[default]
    BinaryReflected,
    /// Binary reflected code rotated by the given offset.
    RotatedBinaryReflected(usize),
}

impl GraySource {
    pub fn code(&self, bits: usize) -> GrayCode {
        match *self {
            GraySource::BinaryReflected => GrayCode::binary_reflected(bits),
            GraySource::RotatedBinaryReflected(offset) => {
                GrayCode::rotated_binary_reflected(bits, offset)
            }
        }
    }
}

/// Entry (i, j) of the matrix coupling rotation angles to block angles:
/// (−1)^(b_{i−1} · g_{j−1}) with b the binary code and g the binary
/// reflected Gray code. Indices are 1-based.
pub fn angle_matrix_entry(bits: usize, i: usize, j: usize) -> i64 {
    assert!((1..=16).contains(&bits));
    let len = 1usize << bits;
    assert!((1..=len).contains(&i) && (1..=len).contains(&j));
    let b = (i - 1) as u32;
    let g = ((j - 1) ^ ((j - 1) >> 1)) as u32;
    if (b & g).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// In-place Walsh-Hadamard butterfly: v_w <- sum_x (−1)^(w·x) v_x.
fn walsh_hadamard_in_place(v: &mut [f64]) {
    let n = v.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        let step = h * 2;
        let mut base = 0;
        while base < n {
            for j in base..base + h {
                let a = v[j];
                let b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
            base += step;
        }
        h = step;
    }
}

/// Rotation angles solving the block-angle system for an arbitrary cyclic
/// Gray code: slot `l` (0-based) carries the transform coefficient at word
/// `g_l ^ g_0`. O(k·2^k) via the Walsh-Hadamard butterfly.
pub fn solve_rotation_angles_for(code: &GrayCode, block_angles: &[f64]) -> Result<Vec<f64>> {
    let len = block_angles.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::LengthNotPowerOfTwo { len });
    }
    if code.len() != len {
        return Err(Error::CodeWidthMismatch {
            code_bits: code.bits(),
            expected: len.trailing_zeros() as usize,
        });
    }
    let mut transformed = block_angles.to_vec();
    walsh_hadamard_in_place(&mut transformed);
    let scale = 1.0 / len as f64;
    let g0 = code.word(0);
    Ok((0..len)
        .map(|l| scale * transformed[(code.word(l) ^ g0) as usize])
        .collect())
}

/// Rotation angles for the binary reflected Gray code; the inverse is exact
/// because 2^(−k/2) times the coupling matrix is orthogonal.
pub fn solve_rotation_angles(block_angles: &[f64]) -> Result<Vec<f64>> {
    let len = block_angles.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::LengthNotPowerOfTwo { len });
    }
    let bits = len.trailing_zeros() as usize;
    solve_rotation_angles_for(&GrayCode::binary_reflected(bits), block_angles)
}

/// Global position of the splitting factor produced at recursion `level`
/// with within-level index `index` (both 1-based): 2^(n−level−1)·(2·index−1).
pub fn inorder_position(level: usize, index: usize, n: usize) -> usize {
    assert!(n >= 2);
    assert!((1..=n - 1).contains(&level), "level out of range");
    assert!(
        (1..=(1usize << (level - 1))).contains(&index),
        "index out of range"
    );
    (1 << (n - level - 1)) * (2 * index - 1)
}

/// Recursion level that produced the factor at global `position`; inverse of
/// [`inorder_position`] in its first argument.
pub fn level_of_position(position: usize, n: usize) -> usize {
    assert!(n >= 2);
    assert!(
        (1..=(1usize << (n - 1)) - 1).contains(&position),
        "position out of range"
    );
    n - 1 - position.trailing_zeros() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn brgc_small_cases() {
        assert_eq!(GrayCode::binary_reflected(1).words, vec![0, 1]);
        assert_eq!(
            GrayCode::binary_reflected(3).words,
            vec![0b000, 0b001, 0b011, 0b010, 0b110, 0b111, 0b101, 0b100]
        );
        let k2 = GrayCode::binary_reflected(2);
        let last = k2.word(3);
        let first = k2.word(0);
        assert_eq!((last ^ first).count_ones(), 1);
    }

    #[test]
    fn transition_positions_brgc() {
        assert_eq!(
            GrayCode::binary_reflected(3).transition_positions(),
            vec![3, 2, 3, 1, 3, 2, 3, 1]
        );
        assert_eq!(
            GrayCode::binary_reflected(1).transition_positions(),
            vec![1, 1]
        );
    }

    #[test]
    fn every_position_appears_an_even_number_of_times() {
        for bits in 1..=8 {
            for code in [
                GrayCode::binary_reflected(bits),
                GrayCode::rotated_binary_reflected(bits, 3),
            ] {
                let mut counts = vec![0usize; bits + 1];
                for p in code.transition_positions() {
                    counts[p] += 1;
                }
                for p in 1..=bits {
                    assert_eq!(counts[p] % 2, 0, "bits {bits} position {p}");
                }
            }
        }
    }

    #[test]
    fn invalid_words_are_rejected() {
        assert!(matches!(
            GrayCode::new(2, vec![0, 1, 2, 3]),
            Err(Error::NotGray { .. })
        ));
        assert!(matches!(
            GrayCode::new(2, vec![0, 1, 3]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            GrayCode::new(2, vec![0, 1, 3, 1]),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(GrayCode::new(2, vec![0, 1, 3, 2]).is_ok());
    }

    #[test]
    fn angle_matrix_small_cases() {
        for bits in 1..=4 {
            for j in 1..=(1 << bits) {
                assert_eq!(angle_matrix_entry(bits, 1, j), 1);
            }
        }
        assert_eq!(angle_matrix_entry(1, 1, 1), 1);
        assert_eq!(angle_matrix_entry(1, 1, 2), 1);
        assert_eq!(angle_matrix_entry(1, 2, 1), 1);
        assert_eq!(angle_matrix_entry(1, 2, 2), -1);
        // b_2 = 10, g_2 = 11, inner product 1
        assert_eq!(angle_matrix_entry(2, 3, 3), -1);
    }

    #[test]
    fn coupling_matrix_times_transpose_is_scaled_identity() {
        for bits in 1..=6usize {
            let len = 1usize << bits;
            for i in 1..=len {
                for j in 1..=len {
                    let mut acc: i64 = 0;
                    for l in 1..=len {
                        acc += angle_matrix_entry(bits, i, l) * angle_matrix_entry(bits, j, l);
                    }
                    let expect = if i == j { len as i64 } else { 0 };
                    assert_eq!(acc, expect, "bits {bits} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn constant_block_angles_solve_to_single_rotation() {
        let alphas = vec![0.42; 8];
        let thetas = solve_rotation_angles(&alphas).unwrap();
        assert!((thetas[0] - 0.42).abs() < 1e-15);
        for &t in &thetas[1..] {
            assert!(t.abs() < 1e-15);
        }
    }

    #[test]
    fn two_angle_case_matches_closed_form() {
        let thetas = solve_rotation_angles(&[0.9, -0.3]).unwrap();
        assert!((thetas[0] - 0.3).abs() < 1e-15);
        assert!((thetas[1] - 0.6).abs() < 1e-15);
    }

    fn random_angles(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
        (0..len)
            .map(|_| {
                let u = ((rng.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64);
                6.0 * u - 3.0
            })
            .collect()
    }

    #[test]
    fn fast_solve_inverts_the_dense_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for bits in 1..=6usize {
            let len = 1usize << bits;
            for _ in 0..200 {
                let alphas = random_angles(&mut rng, len);
                let thetas = solve_rotation_angles(&alphas).unwrap();
                // Dense check: M theta = alpha
                for i in 1..=len {
                    let mut acc = 0.0;
                    for j in 1..=len {
                        acc += angle_matrix_entry(bits, i, j) as f64 * thetas[j - 1];
                    }
                    assert!((acc - alphas[i - 1]).abs() <= 1e-12, "bits {bits} row {i}");
                }
            }
        }
    }

    #[test]
    fn fast_path_matches_dense_transpose_multiply() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for bits in 1..=6usize {
            let len = 1usize << bits;
            let alphas = random_angles(&mut rng, len);
            let fast = solve_rotation_angles(&alphas).unwrap();
            for j in 1..=len {
                let mut acc = 0.0;
                for i in 1..=len {
                    acc += angle_matrix_entry(bits, i, j) as f64 * alphas[i - 1];
                }
                acc /= len as f64;
                assert!((fast[j - 1] - acc).abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn solve_rejects_bad_lengths() {
        assert!(matches!(
            solve_rotation_angles(&[1.0, 2.0, 3.0]),
            Err(Error::LengthNotPowerOfTwo { len: 3 })
        ));
        assert!(matches!(
            solve_rotation_angles(&[1.0]),
            Err(Error::LengthNotPowerOfTwo { len: 1 })
        ));
    }

    #[test]
    fn split_position_examples() {
        assert_eq!(inorder_position(2, 1, 3), 1);
        assert_eq!(inorder_position(1, 1, 3), 2);
        assert_eq!(inorder_position(2, 2, 3), 3);
        assert_eq!(inorder_position(1, 1, 4), 4);
    }

    #[test]
    fn level_of_position_examples() {
        assert_eq!(level_of_position(1, 3), 2);
        assert_eq!(level_of_position(2, 3), 1);
        assert_eq!(level_of_position(3, 3), 2);
        assert_eq!(level_of_position(4, 4), 1);
    }

    #[test]
    fn positions_form_a_bijection_and_levels_invert() {
        for n in 2..=10usize {
            let total = (1usize << (n - 1)) - 1;
            let mut seen = vec![false; total + 1];
            for level in 1..=n - 1 {
                for index in 1..=(1usize << (level - 1)) {
                    let pos = inorder_position(level, index, n);
                    assert!((1..=total).contains(&pos));
                    assert!(!seen[pos], "duplicate position {pos} at n={n}");
                    seen[pos] = true;
                    assert_eq!(level_of_position(pos, n), level);
                }
            }
            assert!(seen[1..].iter().all(|&s| s));
        }
    }

    proptest! {
        #[test]
        fn rotated_codes_still_solve_exactly(bits in 1usize..=5, offset in 0usize..32, seed in 0u64..1000) {
            let len = 1usize << bits;
            let code = GrayCode::rotated_binary_reflected(bits, offset % len);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let alphas = random_angles(&mut rng, len);
            let thetas = solve_rotation_angles_for(&code, &alphas).unwrap();
            // Effective coupling uses words relative to the first one.
            for x in 0..len {
                let mut acc = 0.0;
                for l in 0..len {
                    let w = (code.word(l) ^ code.word(0)) as usize;
                    let sign = if ((x & w).count_ones()) % 2 == 0 { 1.0 } else { -1.0 };
                    acc += sign * thetas[l];
                }
                prop_assert!((acc - alphas[x]).abs() <= 1e-12);
            }
        }
    }
}
