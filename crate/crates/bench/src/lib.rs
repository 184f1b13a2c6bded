//! Benchmark fixtures.

use itf_core::gates::walsh;
use itf_core::random::{random_channel, random_unitary};
use itf_core::{ComplexMatrix, QuantumChannel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Walsh-Hadamard transform on `n` qubits, the starting point of the
/// Grover and Shor traces.
pub fn hadamard_prefix(n: usize) -> ComplexMatrix {
    walsh(n).expect("register width within capacity")
}

pub fn seeded_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    random_unitary(dim, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Random channel with `kraus_count` operators.
pub fn seeded_channel(dim: usize, kraus_count: usize, seed: u64) -> QuantumChannel {
    random_channel(dim, kraus_count, &mut ChaCha8Rng::seed_from_u64(seed))
}
