//! Step-by-step accumulation of a propagator and its interference.
//!
//! [`run_steps`] keeps the composed propagator of all steps so far, as a
//! single matrix while every step is unitary and as a Kraus set once a
//! channel or measurement appears, and records `I` after every step.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::channels::{outcome_masks, QuantumChannel, PRUNE_TOL};
use crate::error::{capacity, invalid, shape, Result};
use crate::gates::{apply_gate_in_place, qft_stages, GateSpec};
use crate::kernels;
use crate::matrix::{ComplexMatrix, C64};
use crate::measure::{ibits, interference_kraus, interference_unitary_unchecked};

/// What a step does to the register.
#[derive(Clone, Debug, PartialEq)]
pub enum Operation {
    /// Gates applied in order, recorded as one step.
    Gates(Vec<GateSpec>),
    /// A channel on the full register.
    Channel(QuantumChannel),
    /// A single-qubit channel on one qubit.
    LocalChannel { qubit: usize, channel: QuantumChannel },
    /// Computational-basis measurement of the listed qubits, outcomes kept
    /// as separate Kraus branches.
    Measure(Vec<usize>),
    /// Records the current value without changing the propagator.
    Checkpoint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub label: String,
    pub op: Operation,
}

impl Step {
    pub fn new(label: impl Into<String>, op: Operation) -> Self {
        Self { label: label.into(), op }
    }

    pub fn gate(gate: GateSpec) -> Self {
        Self::new(gate.to_string(), Operation::Gates(vec![gate]))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRecord {
    pub step: usize,
    pub label: String,
    pub interference: f64,
    pub ibits: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct InterferenceTrace {
    pub records: Vec<TraceRecord>,
    pub metadata: BTreeMap<String, String>,
}

impl InterferenceTrace {
    pub fn values(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.interference).collect()
    }

    pub fn final_value(&self) -> Option<f64> {
        self.records.last().map(|r| r.interference)
    }

    pub fn max_value(&self) -> Option<f64> {
        self.records.iter().map(|r| r.interference).reduce(f64::max)
    }

    fn with_meta(mut self, entries: &[(&str, String)]) -> Self {
        for (k, v) in entries {
            self.metadata.insert((*k).to_string(), v.clone());
        }
        self
    }
}

/// The composed propagator after the last step.
#[derive(Clone, Debug, PartialEq)]
pub enum Propagator {
    Unitary(ComplexMatrix),
    Channel(QuantumChannel),
}

impl Propagator {
    pub fn interference(&self) -> Result<f64> {
        match self {
            Propagator::Unitary(u) => interference_unitary_unchecked(u),
            Propagator::Channel(c) => interference_kraus(c),
        }
    }

    pub fn into_channel(self) -> QuantumChannel {
        match self {
            Propagator::Unitary(u) => {
                let dim = u.rows();
                QuantumChannel::from_parts(dim, vec![u], true)
            }
            Propagator::Channel(c) => c,
        }
    }
}

fn register_width(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(shape(format!("register dimension {dim} is not a power of two >= 2")));
    }
    Ok(dim.trailing_zeros() as usize)
}

fn drop_zero_operators(kraus: Vec<ComplexMatrix>, dim: usize) -> Vec<ComplexMatrix> {
    let kept: Vec<ComplexMatrix> = kraus.into_iter().filter(|e| e.max_norm() > PRUNE_TOL).collect();
    if kept.is_empty() {
        vec![ComplexMatrix::zeros(dim, dim)]
    } else {
        kept
    }
}

fn advance(state: Propagator, op: &Operation, n: usize) -> Result<Propagator> {
    let dim = 1usize << n;
    match (state, op) {
        (state, Operation::Checkpoint) => Ok(state),
        (Propagator::Unitary(mut u), Operation::Gates(gates)) => {
            for g in gates {
                apply_gate_in_place(&mut u, g, n)?;
            }
            Ok(Propagator::Unitary(u))
        }
        (Propagator::Channel(c), Operation::Gates(gates)) => {
            let tp = c.is_trace_preserving();
            let mut kraus = c.into_kraus();
            for e in &mut kraus {
                for g in gates {
                    apply_gate_in_place(e, g, n)?;
                }
            }
            Ok(Propagator::Channel(QuantumChannel::from_parts(dim, kraus, tp)))
        }
        (state, Operation::Channel(second)) => {
            if second.dim() != dim {
                return Err(shape(format!("channel of dimension {} on a {dim}-dimensional register", second.dim())));
            }
            Ok(Propagator::Channel(QuantumChannel::compose(second, &state.into_channel())?))
        }
        (state, Operation::LocalChannel { qubit, channel }) => {
            if channel.dim() != 2 {
                return Err(shape(format!("local channel must act on one qubit, got dimension {}", channel.dim())));
            }
            if *qubit >= n {
                return Err(invalid(format!("qubit {qubit} out of range for {n} qubits")));
            }
            let first = state.into_channel();
            let tp = first.is_trace_preserving() && channel.is_trace_preserving();
            let mut kraus = Vec::with_capacity(first.kraus().len() * channel.kraus().len());
            for k in channel.kraus() {
                let u = [k.get(0, 0), k.get(0, 1), k.get(1, 0), k.get(1, 1)];
                for e in first.kraus() {
                    let mut m = e.clone();
                    kernels::apply_one_qubit(&mut m, *qubit, u);
                    kraus.push(m);
                }
            }
            Ok(Propagator::Channel(QuantumChannel::from_parts(dim, drop_zero_operators(kraus, dim), tp)))
        }
        (state, Operation::Measure(bits)) => {
            let masks = outcome_masks(dim, bits)?;
            let first = state.into_channel();
            let tp = first.is_trace_preserving();
            let mut kraus = Vec::new();
            for outcome in 0..1usize << bits.len() {
                for e in first.kraus() {
                    let mut m = e.clone();
                    kernels::project_rows(&mut m, |r| masks.matches(r, outcome));
                    kraus.push(m);
                }
            }
            Ok(Propagator::Channel(QuantumChannel::from_parts(dim, drop_zero_operators(kraus, dim), tp)))
        }
    }
}

/// Runs `steps` on a register of dimension `dim = 2^n` starting from the
/// identity and returns the trace together with the final propagator.
pub fn run_steps(steps: &[Step], dim: usize) -> Result<(InterferenceTrace, Propagator)> {
    let n = register_width(dim)?;
    let mut state = Propagator::Unitary(ComplexMatrix::identity(dim));
    let mut records = Vec::with_capacity(steps.len());
    for (idx, step) in steps.iter().enumerate() {
        state = advance(state, &step.op, n)?;
        let value = state.interference()?;
        records.push(TraceRecord {
            step: idx + 1,
            label: step.label.clone(),
            interference: value,
            ibits: ibits(value)?,
        });
    }
    let trace = InterferenceTrace {
        records,
        metadata: BTreeMap::new(),
    };
    Ok((trace, state))
}

/// Accumulated interference after every step.
pub fn accumulate(steps: &[Step], dim: usize) -> Result<InterferenceTrace> {
    Ok(run_steps(steps, dim)?.0)
}

/// Teleportation of qubit 0 to qubit 2 on three qubits: `H 2`, `CNOT 2 1`,
/// `CNOT 0 1`, `H 0`, measurement of qubits 0 and 1, and the corrections
/// `Z^m0 X^m1` on qubit 2 merged into the four measurement branches.
pub fn teleportation_steps() -> Vec<Step> {
    vec![
        Step::gate(GateSpec::H(2)),
        Step::gate(GateSpec::Cnot { control: 2, target: 1 }),
        Step::gate(GateSpec::Cnot { control: 0, target: 1 }),
        Step::gate(GateSpec::H(0)),
        Step::new("MEASURE 0 1", Operation::Measure(vec![0, 1])),
        Step::new("CORRECT", Operation::Channel(teleportation_correction())),
    ]
}

/// Kraus set `{C_o P_o}`: projector on outcome `o` of qubits 0 and 1 followed
/// by `Z^(bit 0 of o) X^(bit 1 of o)` on qubit 2.
fn teleportation_correction() -> QuantumChannel {
    let kraus = (0..4usize)
        .map(|o| {
            let mut m = ComplexMatrix::identity(8);
            kernels::project_rows(&mut m, |r| r & 3 == o);
            if o >> 1 & 1 == 1 {
                kernels::flip_rows(&mut m, 2, None);
            }
            if o & 1 == 1 {
                kernels::scale_rows(&mut m, |r| (r >> 2 & 1 == 1).then_some(C64::new(-1.0, 0.0)));
            }
            m
        })
        .collect();
    QuantumChannel::from_parts(8, kraus, true)
}

pub fn teleportation_trace() -> Result<InterferenceTrace> {
    Ok(accumulate(&teleportation_steps(), 8)?.with_meta(&[("scenario", "teleport".into())]))
}

/// Optimal iteration count `floor(pi / (4 asin(1 / sqrt N)))`.
pub fn grover_iterations(n: usize) -> usize {
    let big_n = (1u64 << n) as f64;
    (std::f64::consts::PI / (4.0 * (1.0 / big_n.sqrt()).asin())).floor() as usize
}

fn check_grover(n: usize, marked: usize) -> Result<()> {
    if !(2..=10).contains(&n) {
        return Err(capacity(format!("Grover traces support 2..=10 qubits, got {n}")));
    }
    if marked >= 1 << n {
        return Err(invalid(format!("marked state {marked} out of range for {n} qubits")));
    }
    Ok(())
}

/// `W` as one step when `include_initial_w`, then `k` rounds of the oracle
/// `R1` followed by the diffusion `D`.
pub fn grover_steps(n: usize, marked: usize, include_initial_w: bool) -> Result<Vec<Step>> {
    check_grover(n, marked)?;
    let mut steps = Vec::new();
    if include_initial_w {
        steps.push(Step::new("W", Operation::Gates((0..n).map(GateSpec::H).collect())));
    }
    for _ in 0..grover_iterations(n) {
        steps.push(Step::new("R1", Operation::Gates(vec![GateSpec::Oracle { marked }])));
        steps.push(Step::new("D", Operation::Gates(vec![GateSpec::Diffusion])));
    }
    Ok(steps)
}

pub fn grover_trace(n: usize, marked: usize, include_initial_w: bool) -> Result<InterferenceTrace> {
    let trace = accumulate(&grover_steps(n, marked, include_initial_w)?, 1 << n)?;
    Ok(trace.with_meta(&[
        ("scenario", if include_initial_w { "grover" } else { "grover-used" }.into()),
        ("n", n.to_string()),
        ("marked", marked.to_string()),
        ("k", grover_iterations(n).to_string()),
        ("include_initial_w", include_initial_w.to_string()),
    ]))
}

/// Register width `L` for the supported moduli.
pub const SHOR_MODULUS: usize = 15;
pub const SHOR_WIDTH: usize = 4;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Shor's period finding for `R = 15` on 12 qubits. The second register is
/// qubits `0..4`, the first qubits `4..12`.
///
/// Part 1 (only with `include_initial_w`) is one Hadamard per first-register
/// qubit. Part 2 multiplies the second register by `a^(2^i) mod R`
/// controlled by bit `i` of the first register. Part 3 is the QFT on the
/// first register, one step per target qubit.
pub fn shor_steps(r: usize, a: usize, include_initial_w: bool) -> Result<Vec<Step>> {
    if r != SHOR_MODULUS {
        return Err(capacity(format!("only R = {SHOR_MODULUS} is supported, got {r}")));
    }
    if a < 2 || a >= r || gcd(a, r) != 1 {
        return Err(invalid(format!("a = {a} must lie in 2..{r} and be coprime to {r}")));
    }
    let l = SHOR_WIDTH;
    let mut steps = Vec::new();
    if include_initial_w {
        steps.extend((l..3 * l).map(|q| Step::gate(GateSpec::H(q))));
    }
    let mut factor = a;
    for i in 0..2 * l {
        let gate = GateSpec::Modmul {
            width: l,
            modulus: r,
            factor,
            control: i,
        };
        steps.push(Step::new(format!("MODMUL {i}"), Operation::Gates(vec![gate])));
        factor = factor * factor % r;
    }
    for (stage, t) in qft_stages(l, 3 * l - 1).into_iter().zip((l..3 * l).rev()) {
        steps.push(Step::new(format!("QFT {t}"), Operation::Gates(stage)));
    }
    Ok(steps)
}

pub fn shor_trace(r: usize, a: usize, include_initial_w: bool) -> Result<InterferenceTrace> {
    let trace = accumulate(&shor_steps(r, a, include_initial_w)?, 1 << (3 * SHOR_WIDTH))?;
    Ok(trace.with_meta(&[
        ("scenario", if include_initial_w { "shor" } else { "shor-used" }.into()),
        ("R", r.to_string()),
        ("a", a.to_string()),
        ("include_initial_w", include_initial_w.to_string()),
    ]))
}
