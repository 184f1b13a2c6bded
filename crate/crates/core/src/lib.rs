//! Quantitative interference of quantum propagators.
//!
//! The crate computes the interference measure `I(P)` of unitaries, Kraus
//! channels and superoperators, and tracks the accumulated measure step by
//! step through gate and channel sequences (teleportation, Grover, Shor),
//! Fock-space optics and user circuits written in a small line language.

pub mod channels;
pub mod circuit;
pub mod error;
pub mod gates;
mod kernels;
pub mod matrix;
pub mod measure;
pub mod optics;
pub mod protocols;
pub mod random;
pub mod scan;

pub use channels::{compose, embed_qubit_channel, kraus_to_superop, QuantumChannel, Superoperator};
pub use circuit::{parse, run, CircuitProgram, Diagnostic, Instruction};
pub use error::{Error, Result};
pub use gates::{apply_gate, apply_gate_in_place, GateKind, GateSpec};
pub use matrix::{ComplexMatrix, C64};
pub use measure::{
    ibits, interference_kraus, interference_superop, interference_unitary, interference_unitary_unchecked,
    phase_sensitivity_estimate, PhaseSensitivityEstimate,
};
pub use optics::{bs_unitary, mz_phase_error_channel, mz_unitary, phase_shifter, FockUnitary};
pub use scan::ScanRow;
pub use protocols::{
    accumulate, grover_trace, run_steps, shor_trace, teleportation_trace, InterferenceTrace, Operation, Propagator,
    Step, TraceRecord,
};

/// Environment variable capping the worker pool used by the kernels.
pub const THREADS_ENV: &str = "ITF_THREADS";

/// Sizes the global rayon pool from `ITF_THREADS` when it is set to a
/// positive integer. Returns the thread count applied, if any. Has no effect
/// once the global pool exists.
pub fn configure_threads_from_env() -> Option<usize> {
    let n: usize = std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok()?;
    Some(n)
}
