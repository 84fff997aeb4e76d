//! Uniformly controlled rotations: one rotation of the target qubit per
//! classical value of the control qubits, and their expansion into an
//! alternating chain of rotations and Gray-coded CNOTs.

use crate::bits::{control_value, qubit_mask};
use crate::circuit::{Axis, Gate};
use crate::error::{Error, Result};
use crate::graycode::{solve_rotation_angles_for, GrayCode};
use crate::linalg::{ComplexMatrix, Mat2, UnitaryMatrix, DEFAULT_UNITARITY_TOL};

/// A rotation of `target` about the y or z axis whose angle depends on the
/// classical value of the `controls` (first control = most significant bit).
/// `angles[v]` is applied when the controls read the value `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct UCRotation {
    axis: Axis,
    target: usize,
    controls: Vec<usize>,
    angles: Vec<f64>,
}

impl UCRotation {
    pub fn new(axis: Axis, target: usize, controls: Vec<usize>, angles: Vec<f64>) -> Result<Self> {
        if target == 0 {
            return Err(Error::IndexOutOfRange {
                index: 0,
                limit: usize::MAX,
            });
        }
        let mut seen = controls.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != controls.len() || controls.contains(&0) {
            return Err(Error::IndexOutOfRange {
                index: 0,
                limit: controls.len(),
            });
        }
        if controls.contains(&target) {
            return Err(Error::CnotControlEqualsTarget { qubit: target });
        }
        let expected = 1usize << controls.len();
        if angles.len() != expected {
            return Err(Error::LengthMismatch {
                len: angles.len(),
                expected,
            });
        }
        Ok(Self {
            axis,
            target,
            controls,
            angles,
        })
    }

    #[inline]
    pub fn axis(&self) -> Axis {
        self.axis
    }

    #[inline]
    pub fn target(&self) -> usize {
        self.target
    }

    #[inline]
    pub fn controls(&self) -> &[usize] {
        &self.controls
    }

    #[inline]
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    #[inline]
    pub fn control_count(&self) -> usize {
        self.controls.len()
    }

    /// The exact 2^n x 2^n matrix: block-diagonal in the controls'
    /// computational basis, with block `v` the rotation through `angles[v]`
    /// acting on the target qubit.
    pub fn matrix(&self, n: usize) -> Result<UnitaryMatrix> {
        if self.target > n {
            return Err(Error::IndexOutOfRange {
                index: self.target,
                limit: n,
            });
        }
        if let Some(&bad) = self.controls.iter().find(|&&c| c > n) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                limit: n,
            });
        }
        let dim = 1usize << n;
        let tmask = qubit_mask(n, self.target);
        let mut m = ComplexMatrix::zeros(dim, dim);
        for x in 0..dim {
            if x & tmask != 0 {
                continue;
            }
            let x1 = x | tmask;
            let v = control_value(x, n, &self.controls);
            let r = Mat2::rotation(self.axis, self.angles[v]);
            m.set(x, x, r.m00);
            m.set(x, x1, r.m01);
            m.set(x1, x, r.m10);
            m.set(x1, x1, r.m11);
        }
        Ok(UnitaryMatrix::from_parts_unchecked(
            m,
            DEFAULT_UNITARITY_TOL,
        ))
    }

    /// Gate sequence implementing the rotation: 2^k rotations alternating
    /// with 2^k CNOTs whose controls follow the Gray code's transition
    /// positions. With no controls this is a single rotation.
    pub fn expand(&self, code: &GrayCode) -> Result<Vec<Gate>> {
        let k = self.controls.len();
        if k == 0 {
            return Ok(vec![Gate::Rot {
                axis: self.axis,
                qubit: self.target,
                angle: self.angles[0],
            }]);
        }
        if code.bits() != k {
            return Err(Error::CodeWidthMismatch {
                code_bits: code.bits(),
                expected: k,
            });
        }
        let thetas = solve_rotation_angles_for(code, &self.angles)?;
        let transitions = code.transition_positions();
        let mut gates = Vec::with_capacity(2 << k);
        for l in 0..(1usize << k) {
            gates.push(Gate::Rot {
                axis: self.axis,
                qubit: self.target,
                angle: thetas[l],
            });
            gates.push(Gate::Cnot {
                control: self.controls[transitions[l] - 1],
                target: self.target,
            });
        }
        Ok(gates)
    }

    /// The horizontally mirrored gate sequence: same gates in reverse order.
    /// The same solved angles realize the rotation because the cyclic Gray
    /// transitions accumulate identical parities from either end; the tests
    /// pin this by reconstruction.
    pub fn expand_mirrored(&self, code: &GrayCode) -> Result<Vec<Gate>> {
        let mut gates = self.expand(code)?;
        gates.reverse();
        Ok(gates)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::linalg::frobenius_distance;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_angles(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
        (0..len)
            .map(|_| {
                let u = ((rng.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64);
                6.0 * u - 3.0
            })
            .collect()
    }

    #[test]
    fn conjugation_by_x_negates_the_angle() {
        let x = Mat2::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        );
        for &axis in &[Axis::Y, Axis::Z] {
            for i in 0..24 {
                let a = -6.0 + 0.5 * i as f64;
                let lhs = x.mul(&Mat2::rotation(axis, a)).mul(&x);
                let rhs = Mat2::rotation(axis, -a);
                assert!(lhs.max_abs_diff(&rhs) <= 1e-15);
            }
        }
    }

    #[test]
    fn same_axis_rotations_add() {
        for &axis in &[Axis::Y, Axis::Z] {
            for i in 0..16 {
                let a = -3.0 + 0.4 * i as f64;
                let b = 1.7 - 0.3 * i as f64;
                let lhs = Mat2::rotation(axis, a).mul(&Mat2::rotation(axis, b));
                let rhs = Mat2::rotation(axis, a + b);
                assert!(lhs.max_abs_diff(&rhs) <= 1e-15);
            }
        }
    }

    #[test]
    fn no_controls_is_a_plain_rotation() {
        let ucr = UCRotation::new(Axis::Y, 1, vec![], vec![0.7]).unwrap();
        let m = ucr.matrix(1).unwrap();
        let r = Mat2::rotation(Axis::Y, 0.7);
        assert!((m.matrix().get(0, 0) - r.m00).norm() < 1e-15);
        assert!((m.matrix().get(0, 1) - r.m01).norm() < 1e-15);

        let gates = ucr.expand(&GrayCode::binary_reflected(1)).unwrap();
        assert_eq!(gates.len(), 1);
        assert!(matches!(
            gates[0],
            Gate::Rot {
                axis: Axis::Y,
                qubit: 1,
                ..
            }
        ));
    }

    #[test]
    fn equal_angles_reduce_to_an_uncontrolled_rotation() {
        let ucr = UCRotation::new(Axis::Z, 2, vec![1], vec![0.9, 0.9]).unwrap();
        let m = ucr.matrix(2).unwrap();
        let single = UCRotation::new(Axis::Z, 2, vec![], vec![0.9])
            .unwrap()
            .matrix(2)
            .unwrap();
        assert!(frobenius_distance(m.matrix(), single.matrix()).unwrap() < 1e-14);
    }

    /// Brute-force oracle: the product of the individual controlled
    /// rotations, one per control value, multiplied in an arbitrary order.
    fn controlled_rotation_product(
        axis: Axis,
        target: usize,
        controls: &[usize],
        angles: &[f64],
        n: usize,
        order: &[usize],
    ) -> ComplexMatrix {
        let dim = 1usize << n;
        let mut product = ComplexMatrix::identity(dim);
        for &v in order {
            let mut m = ComplexMatrix::identity(dim);
            let tmask = qubit_mask(n, target);
            let r = Mat2::rotation(axis, angles[v]);
            for x in 0..dim {
                if x & tmask != 0 {
                    continue;
                }
                if control_value(x, n, controls) != v {
                    continue;
                }
                let x1 = x | tmask;
                m.set(x, x, r.m00);
                m.set(x, x1, r.m01);
                m.set(x1, x, r.m10);
                m.set(x1, x1, r.m11);
            }
            product = product.mul(&m);
        }
        product
    }

    #[test]
    fn matrix_matches_brute_force_assembly_in_any_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let angles = random_angles(&mut rng, 4);
        let ucr = UCRotation::new(Axis::Y, 3, vec![1, 2], angles.clone()).unwrap();
        let m = ucr.matrix(3).unwrap();
        for order in [[0usize, 1, 2, 3], [3, 1, 0, 2], [2, 3, 1, 0]] {
            let oracle = controlled_rotation_product(Axis::Y, 3, &[1, 2], &angles, 3, &order);
            assert!(frobenius_distance(m.matrix(), &oracle).unwrap() <= 1e-13);
        }
    }

    #[test]
    fn three_control_expansion_follows_gray_transitions() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let angles = random_angles(&mut rng, 8);
        let ucr = UCRotation::new(Axis::Y, 4, vec![1, 2, 3], angles).unwrap();
        let gates = ucr.expand(&GrayCode::binary_reflected(3)).unwrap();
        assert_eq!(gates.len(), 16);
        let controls: Vec<usize> = gates
            .iter()
            .filter_map(|g| match g {
                Gate::Cnot { control, .. } => Some(*control),
                _ => None,
            })
            .collect();
        assert_eq!(controls, vec![3, 2, 3, 1, 3, 2, 3, 1]);
    }

    fn reconstruction_error(ucr: &UCRotation, gates: Vec<Gate>, n: usize) -> f64 {
        let circuit = Circuit::new(n, gates).unwrap();
        frobenius_distance(
            circuit.reconstruct().matrix(),
            ucr.matrix(n).unwrap().matrix(),
        )
        .unwrap()
    }

    #[test]
    fn expansion_reconstructs_the_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for &axis in &[Axis::Y, Axis::Z] {
            let angles = random_angles(&mut rng, 4);
            let ucr = UCRotation::new(axis, 3, vec![1, 2], angles).unwrap();
            let code = GrayCode::binary_reflected(2);
            let err = reconstruction_error(&ucr, ucr.expand(&code).unwrap(), 3);
            assert!(err <= 1e-12, "normal {err}");
            let err = reconstruction_error(&ucr, ucr.expand_mirrored(&code).unwrap(), 3);
            assert!(err <= 1e-12, "mirrored {err}");
        }
    }

    #[test]
    fn mirrored_expansion_is_structurally_reversed() {
        let ucr = UCRotation::new(Axis::Z, 3, vec![1, 2], vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let gates = ucr.expand_mirrored(&GrayCode::binary_reflected(2)).unwrap();
        assert!(matches!(gates.first(), Some(Gate::Cnot { .. })));
        assert!(matches!(gates.last(), Some(Gate::Rot { .. })));
    }

    #[test]
    fn every_control_wire_appears_an_even_number_of_times() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for k in 1..=4usize {
            let angles = random_angles(&mut rng, 1 << k);
            let controls: Vec<usize> = (1..=k).collect();
            let ucr = UCRotation::new(Axis::Y, k + 1, controls, angles).unwrap();
            let gates = ucr.expand(&GrayCode::binary_reflected(k)).unwrap();
            let mut counts = vec![0usize; k + 2];
            for g in &gates {
                if let Gate::Cnot { control, .. } = g {
                    counts[*control] += 1;
                }
            }
            for q in 1..=k {
                assert_eq!(counts[q] % 2, 0);
            }
        }
    }

    #[test]
    fn code_width_mismatch_is_reported() {
        let ucr = UCRotation::new(Axis::Y, 3, vec![1, 2], vec![0.0; 4]).unwrap();
        assert!(matches!(
            ucr.expand(&GrayCode::binary_reflected(3)),
            Err(Error::CodeWidthMismatch {
                code_bits: 3,
                expected: 2
            })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn any_cyclic_gray_code_works(
            k in 1usize..=3,
            offset in 0usize..8,
            seed in 0u64..500,
            mirrored in proptest::bool::ANY,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let angles = random_angles(&mut rng, 1 << k);
            let controls: Vec<usize> = (1..=k).collect();
            let ucr = UCRotation::new(Axis::Z, k + 1, controls, angles).unwrap();
            let code = GrayCode::rotated_binary_reflected(k, offset % (1 << k));
            let gates = if mirrored {
                ucr.expand_mirrored(&code).unwrap()
            } else {
                ucr.expand(&code).unwrap()
            };
            let err = reconstruction_error(&ucr, gates, k + 1);
            prop_assert!(err <= 1e-12);
        }
    }
}
