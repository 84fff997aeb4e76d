//! Qubit/bit-index conventions.
//!
//! Qubit 1 is the most significant bit of a basis-state index, qubit `n` the
//! least significant. All qubit indices in the crate are 1-based.

/// Basis-index mask selecting the bit of `qubit` in an `n`-qubit register.
#[inline]
pub(crate) fn qubit_mask(n: usize, qubit: usize) -> usize {
    debug_assert!(qubit >= 1 && qubit <= n);
    1 << (n - qubit)
}

/// Value of `qubit`'s bit (0 or 1) in basis index `x`.
#[inline]
pub(crate) fn qubit_bit(x: usize, n: usize, qubit: usize) -> usize {
    (x >> (n - qubit)) & 1
}

/// Classical value read off the listed qubits, first entry most significant.
#[inline]
pub(crate) fn control_value(x: usize, n: usize, qubits: &[usize]) -> usize {
    let mut v = 0;
    for &q in qubits {
        v = (v << 1) | qubit_bit(x, n, q);
    }
    v
}
