//! Elementary-gate intermediate representation and its exact simulator.
//!
//! The gate library is CNOT, y/z rotations, and a single global phase gate.
//! Gate lists are in application order: the first gate in the list acts on
//! the state first. Qubit indices are 1-based; qubit 1 is the most
//! significant bit of a basis-state index.

use num_complex::Complex64;

use crate::bits::qubit_mask;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Mat2, UnitaryMatrix, DEFAULT_UNITARITY_TOL};
use crate::parallel::par_map_indexed;

/// Rotation axis for elementary one-qubit rotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Y,
    Z,
}

/// One elementary gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Cnot {
        control: usize,
        target: usize,
    },
    Rot {
        axis: Axis,
        qubit: usize,
        angle: f64,
    },
    GlobalPhase {
        angle: f64,
    },
}

/// Gate tallies; the global phase counts as a one-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GateCounts {
    pub cnot: usize,
    pub one_qubit: usize,
}

/// Ordered list of gates on an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    /// Validates qubit indices, distinct CNOT wires, and that at most one
    /// global phase gate is present.
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self> {
        assert!(n >= 1, "circuit needs at least one qubit");
        let mut phases = 0usize;
        for gate in &gates {
            match *gate {
                Gate::Cnot { control, target } => {
                    for idx in [control, target] {
                        if idx < 1 || idx > n {
                            return Err(Error::IndexOutOfRange {
                                index: idx,
                                limit: n,
                            });
                        }
                    }
                    if control == target {
                        return Err(Error::CnotControlEqualsTarget { qubit: control });
                    }
                }
                Gate::Rot { qubit, .. } => {
                    if qubit < 1 || qubit > n {
                        return Err(Error::IndexOutOfRange {
                            index: qubit,
                            limit: n,
                        });
                    }
                }
                Gate::GlobalPhase { .. } => {
                    phases += 1;
                    if phases > 1 {
                        return Err(Error::DuplicateGlobalPhase);
                    }
                }
            }
        }
        Ok(Self { n, gates })
    }

    pub(crate) fn from_validated(n: usize, gates: Vec<Gate>) -> Self {
        Self { n, gates }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn counts(&self) -> GateCounts {
        count_gates(&self.gates)
    }

    /// Applies every gate in order to `state` (length 2^n).
    pub fn apply_to(&self, state: &mut [Complex64]) -> Result<()> {
        if state.len() != 1 << self.n {
            return Err(Error::LengthMismatch {
                len: state.len(),
                expected: 1 << self.n,
            });
        }
        for gate in &self.gates {
            apply_gate(state, gate)?;
        }
        Ok(())
    }

    /// Full matrix of the circuit, built by simulating every basis column.
    /// The result includes the exact global phase.
    pub fn reconstruct(&self) -> UnitaryMatrix {
        let dim = 1usize << self.n;
        let cols = par_map_indexed(dim, dim < 32, |j| {
            let mut state = vec![Complex64::new(0.0, 0.0); dim];
            state[j] = Complex64::new(1.0, 0.0);
            self.apply_to(&mut state)
                .expect("gates were validated at construction");
            state
        });
        let matrix = ComplexMatrix::from_columns(dim, &cols);
        UnitaryMatrix::from_parts_unchecked(matrix, DEFAULT_UNITARITY_TOL)
    }

    /// Removes pairs of identical CNOT gates that sit next to each other in
    /// the gate list, repeatedly until none remain. Strictly local: a pair
    /// separated by any other gate is left alone.
    pub fn cancel_adjacent_cnots(&self) -> Circuit {
        Circuit::from_validated(self.n, cancel_adjacent_cnots_in(self.gates.clone()))
    }

    /// Drops rotations with |angle| below `tol`; the global phase is kept.
    pub fn prune_small_rotations(&self, tol: f64) -> Circuit {
        let gates = self
            .gates
            .iter()
            .copied()
            .filter(|g| !matches!(g, Gate::Rot { angle, .. } if angle.abs() < tol))
            .collect();
        Circuit::from_validated(self.n, gates)
    }
}

pub(crate) fn count_gates(gates: &[Gate]) -> GateCounts {
    let mut counts = GateCounts::default();
    for gate in gates {
        match gate {
            Gate::Cnot { .. } => counts.cnot += 1,
            Gate::Rot { .. } | Gate::GlobalPhase { .. } => counts.one_qubit += 1,
        }
    }
    counts
}

pub(crate) fn cancel_adjacent_cnots_in(gates: Vec<Gate>) -> Vec<Gate> {
    let mut out: Vec<Gate> = Vec::with_capacity(gates.len());
    for gate in gates {
        match (out.last(), &gate) {
            (
                Some(Gate::Cnot {
                    control: c1,
                    target: t1,
                }),
                Gate::Cnot {
                    control: c2,
                    target: t2,
                },
            ) if c1 == c2 && t1 == t2 => {
                out.pop();
            }
            _ => out.push(gate),
        }
    }
    out
}

/// Applies one gate to a state vector whose length determines the register
/// width. Norm is preserved to machine precision.
pub fn apply_gate(state: &mut [Complex64], gate: &Gate) -> Result<()> {
    let len = state.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::LengthMismatch { len, expected: 2 });
    }
    let n = len.trailing_zeros() as usize;
    match *gate {
        Gate::Cnot { control, target } => {
            if control < 1 || control > n || target < 1 || target > n {
                return Err(Error::IndexOutOfRange {
                    index: control.max(target),
                    limit: n,
                });
            }
            let cmask = qubit_mask(n, control);
            let tmask = qubit_mask(n, target);
            for x in 0..len {
                if x & cmask != 0 && x & tmask == 0 {
                    state.swap(x, x | tmask);
                }
            }
        }
        Gate::Rot { axis, qubit, angle } => {
            if qubit < 1 || qubit > n {
                return Err(Error::IndexOutOfRange {
                    index: qubit,
                    limit: n,
                });
            }
            let mask = qubit_mask(n, qubit);
            let r = Mat2::rotation(axis, angle);
            for x in 0..len {
                if x & mask == 0 {
                    let x1 = x | mask;
                    let a = state[x];
                    let b = state[x1];
                    state[x] = r.m00 * a + r.m01 * b;
                    state[x1] = r.m10 * a + r.m11 * b;
                }
            }
        }
        Gate::GlobalPhase { angle } => {
            let p = Complex64::from_polar(1.0, angle);
            for x in state.iter_mut() {
                *x *= p;
            }
        }
    }
    Ok(())
}

/// Basis index with the listed qubits set to 1, all others 0.
#[cfg(test)]
pub(crate) fn basis_index(n: usize, ones: &[usize]) -> usize {
    ones.iter().fold(0, |acc, &q| acc | qubit_mask(n, q))
}
