//! Gate constructors and structured gate application.
//!
//! Qubit `q` of an `n`-qubit register is bit `q` of the basis index, so the
//! two-qubit matrices below treat index bit 1 as the first (control) qubit.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::fmt;

use crate::error::{capacity, invalid, shape, Result};
use crate::kernels;
use crate::matrix::{validate_permutation, ComplexMatrix, C64, ONE};

/// Largest register width for which full matrices are materialized.
pub const MAX_QUBITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    X,
    Z,
    Cnot,
    Cphase,
    Qft,
    Oracle,
    R2,
    Diffusion,
    Modmul,
    Perm,
}

/// A gate on an `n`-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub enum GateSpec {
    H(usize),
    X(usize),
    Z(usize),
    Cnot { control: usize, target: usize },
    /// Phase `exp(i phi)` on states where both qubits are 1.
    Cphase { control: usize, target: usize, phi: f64 },
    /// Staged QFT on the inclusive qubit range `lo..=hi`. The output
    /// significance is bit-reversed; see [`qft_reversed`].
    Qft { lo: usize, hi: usize },
    /// Sign flip of one basis state.
    Oracle { marked: usize },
    /// Sign flip of `|0...0>`.
    R2,
    /// `D_ij = 2/N - delta_ij`.
    Diffusion,
    /// `|x>|y> -> |x>|y * factor mod modulus>` for `y < modulus` when bit
    /// `control` of the high register `x` is set. The low register `y` has
    /// `width` qubits, the high register `2 * width`.
    Modmul { width: usize, modulus: usize, factor: usize, control: usize },
    /// Basis permutation: state `k` moves to `perm[k]`.
    Perm(Vec<usize>),
}

impl GateSpec {
    pub fn kind(&self) -> GateKind {
        match self {
            GateSpec::H(_) => GateKind::H,
            GateSpec::X(_) => GateKind::X,
            GateSpec::Z(_) => GateKind::Z,
            GateSpec::Cnot { .. } => GateKind::Cnot,
            GateSpec::Cphase { .. } => GateKind::Cphase,
            GateSpec::Qft { .. } => GateKind::Qft,
            GateSpec::Oracle { .. } => GateKind::Oracle,
            GateSpec::R2 => GateKind::R2,
            GateSpec::Diffusion => GateKind::Diffusion,
            GateSpec::Modmul { .. } => GateKind::Modmul,
            GateSpec::Perm(_) => GateKind::Perm,
        }
    }

    /// Qubits the gate explicitly addresses.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            GateSpec::H(q) | GateSpec::X(q) | GateSpec::Z(q) => vec![*q],
            GateSpec::Cnot { control, target } | GateSpec::Cphase { control, target, .. } => vec![*control, *target],
            GateSpec::Qft { lo, hi } => (*lo..=*hi).collect(),
            _ => Vec::new(),
        }
    }

    /// True for gates that only permute basis states, possibly with signs.
    pub fn is_permutation_like(&self) -> bool {
        !matches!(self, GateSpec::H(_) | GateSpec::Qft { .. } | GateSpec::Diffusion | GateSpec::Cphase { .. })
    }

    /// Checks the gate against an `n`-qubit register.
    pub fn validate(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(invalid("register needs at least one qubit"));
        }
        let qs = self.qubits();
        for (j, &q) in qs.iter().enumerate() {
            if q >= n {
                return Err(invalid(format!("qubit {q} out of range for {n} qubits")));
            }
            if qs[..j].contains(&q) {
                return Err(invalid(format!("qubit {q} used twice")));
            }
        }
        let dim = 1usize << n;
        match self {
            GateSpec::Cphase { phi, .. } if !phi.is_finite() => Err(invalid(format!("phase {phi} is not finite"))),
            GateSpec::Qft { lo, hi } if lo > hi => Err(invalid(format!("QFT range {lo}..{hi} is empty"))),
            GateSpec::Oracle { marked } if *marked >= dim => {
                Err(invalid(format!("marked state {marked} out of range for {n} qubits")))
            }
            GateSpec::Modmul {
                width,
                modulus,
                factor,
                control,
            } => {
                if 3 * width != n {
                    return Err(shape(format!("modular multiplication on width {width} needs {} qubits, got {n}", 3 * width)));
                }
                check_modmul(*width, *modulus, *factor, *control)
            }
            GateSpec::Perm(perm) => {
                if perm.len() != dim {
                    return Err(shape(format!("permutation of length {} on dimension {dim}", perm.len())));
                }
                validate_permutation(perm)
            }
            _ => Ok(()),
        }
    }

    /// Full-register matrix of the gate.
    pub fn matrix(&self, n: usize) -> Result<ComplexMatrix> {
        if n > MAX_QUBITS {
            return Err(capacity(format!("{n} qubits exceed the {MAX_QUBITS}-qubit matrix limit")));
        }
        apply_gate(&ComplexMatrix::identity(1 << n), self, n)
    }
}

impl fmt::Display for GateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateSpec::H(q) => write!(f, "H {q}"),
            GateSpec::X(q) => write!(f, "X {q}"),
            GateSpec::Z(q) => write!(f, "Z {q}"),
            GateSpec::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            GateSpec::Cphase { control, target, phi } => write!(f, "CPHASE {control} {target} {phi:?}"),
            GateSpec::Qft { lo, hi } => write!(f, "QFT {lo} {hi}"),
            GateSpec::Oracle { marked } => write!(f, "ORACLE {marked}"),
            GateSpec::R2 => write!(f, "R2"),
            GateSpec::Diffusion => write!(f, "DIFFUSION"),
            GateSpec::Modmul { modulus, factor, control, .. } => write!(f, "MODMUL {factor} {modulus} {control}"),
            GateSpec::Perm(_) => write!(f, "PERM"),
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check_modmul(width: usize, modulus: usize, factor: usize, control: usize) -> Result<()> {
    if width == 0 || 3 * width > MAX_QUBITS {
        return Err(capacity(format!("modular multiplication width {width} unsupported (1..=4)")));
    }
    if modulus < 2 || modulus > 1 << width {
        return Err(invalid(format!("modulus {modulus} does not fit {width} qubits")));
    }
    if gcd(factor % modulus, modulus) != 1 {
        return Err(invalid(format!("factor {factor} is not coprime to {modulus}")));
    }
    if control >= 2 * width {
        return Err(invalid(format!("control bit {control} outside the {}-qubit first register", 2 * width)));
    }
    Ok(())
}

fn check_width(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(capacity(format!("{n} qubits outside the supported range 1..={MAX_QUBITS}")));
    }
    Ok(())
}

/// `H_ij = (-1)^(ij) / sqrt 2`.
pub fn hadamard() -> ComplexMatrix {
    let s = FRAC_1_SQRT_2;
    ComplexMatrix::from_real(2, 2, &[s, s, s, -s]).expect("2x2")
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).expect("2x2")
}

/// CNOT with the control on index bit 1.
pub fn cnot() -> ComplexMatrix {
    ComplexMatrix::permutation(&[0, 1, 3, 2]).expect("valid permutation")
}

/// `diag(1, 1, 1, exp(i phi))`.
pub fn cphase(phi: f64) -> ComplexMatrix {
    ComplexMatrix::diagonal(&[ONE, ONE, ONE, C64::from_polar(1.0, phi)])
}

/// Walsh-Hadamard transform, the `n`-fold Kronecker power of `H`.
pub fn walsh(n: usize) -> Result<ComplexMatrix> {
    check_width(n)?;
    let h = hadamard();
    Ok((1..n).fold(h.clone(), |acc, _| acc.kron(&h)))
}

/// Discrete Fourier transform `F_jk = exp(2 pi i jk / N) / sqrt N`, `N = 2^n`.
pub fn qft(n: usize) -> Result<ComplexMatrix> {
    check_width(n)?;
    let dim = 1usize << n;
    Ok(ComplexMatrix::from_fn(dim, dim, |j, k| fourier_entry(j * k, dim)))
}

/// `R F`, with `R` the bit-reversal permutation: the unitary realized by the
/// staged circuit [`GateSpec::Qft`] on `n` qubits.
pub fn qft_reversed(n: usize) -> Result<ComplexMatrix> {
    check_width(n)?;
    let dim = 1usize << n;
    Ok(ComplexMatrix::from_fn(dim, dim, |j, k| fourier_entry(reverse_bits(j, n) * k, dim)))
}

fn fourier_entry(jk: usize, dim: usize) -> C64 {
    // reduce first so the angle stays in [0, 2 pi)
    let phase = TAU * (jk % dim) as f64 / dim as f64;
    C64::from_polar(1.0 / (dim as f64).sqrt(), phase)
}

pub fn reverse_bits(x: usize, n: usize) -> usize {
    (0..n).fold(0, |acc, b| acc | (x >> b & 1) << (n - 1 - b))
}

/// One QFT stage: `H` on `target` followed by controlled phases
/// `pi / 2^(target - m)` from every qubit `m` in `target-1` down to `lo`.
pub fn qft_stage(lo: usize, target: usize) -> Vec<GateSpec> {
    let mut gates = vec![GateSpec::H(target)];
    gates.extend((lo..target).rev().map(|m| GateSpec::Cphase {
        control: m,
        target,
        phi: PI / (1u64 << (target - m)) as f64,
    }));
    gates
}

/// Staged QFT on `lo..=hi`, targets from `hi` down to `lo`.
pub fn qft_stages(lo: usize, hi: usize) -> Vec<Vec<GateSpec>> {
    (lo..=hi).rev().map(|t| qft_stage(lo, t)).collect()
}

/// Diagonal oracle with `-1` at `marked`.
pub fn grover_oracle(n: usize, marked: usize) -> Result<ComplexMatrix> {
    check_width(n)?;
    if marked >= 1 << n {
        return Err(invalid(format!("marked state {marked} out of range for {n} qubits")));
    }
    Ok(sign_flip(1 << n, marked))
}

/// Diagonal with `-1` at index 0.
pub fn r2(n: usize) -> Result<ComplexMatrix> {
    check_width(n)?;
    Ok(sign_flip(1 << n, 0))
}

fn sign_flip(dim: usize, at: usize) -> ComplexMatrix {
    let diag: Vec<C64> = (0..dim).map(|r| if r == at { -ONE } else { ONE }).collect();
    ComplexMatrix::diagonal(&diag)
}

/// Grover diffusion `D_ij = 2/N - delta_ij`. Equals `-(W R2 W)`; the sign is
/// global and does not affect any measured quantity.
pub fn diffusion(n: usize) -> Result<ComplexMatrix> {
    check_width(n)?;
    let dim = 1usize << n;
    let off = 2.0 / dim as f64;
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
        C64::new(if i == j { off - 1.0 } else { off }, 0.0)
    }))
}

/// Destination index of every basis state under controlled modular
/// multiplication on a `3 * width`-qubit register.
pub fn modmul_permutation_indices(width: usize, modulus: usize, factor: usize, control: usize) -> Result<Vec<usize>> {
    check_modmul(width, modulus, factor, control)?;
    let low = 1usize << width;
    let factor = factor % modulus;
    Ok((0..1usize << (3 * width))
        .map(|r| {
            let (x, y) = (r >> width, r & (low - 1));
            if x >> control & 1 == 1 && y < modulus {
                (x << width) | (y * factor % modulus)
            } else {
                r
            }
        })
        .collect())
}

pub fn modmul_permutation(width: usize, modulus: usize, factor: usize, control: usize) -> Result<ComplexMatrix> {
    ComplexMatrix::permutation(&modmul_permutation_indices(width, modulus, factor, control)?)
}

/// `G * accumulated` for the full-register embedding `G` of `gate`.
pub fn apply_gate(accumulated: &ComplexMatrix, gate: &GateSpec, n: usize) -> Result<ComplexMatrix> {
    let mut out = accumulated.clone();
    apply_gate_in_place(&mut out, gate, n)?;
    Ok(out)
}

/// In-place form of [`apply_gate`]. Works on any column count, so state
/// vectors (one column) are accepted too.
pub fn apply_gate_in_place(m: &mut ComplexMatrix, gate: &GateSpec, n: usize) -> Result<()> {
    if n >= usize::BITS as usize || m.rows() != 1 << n {
        return Err(shape(format!("operand has {} rows, register of {n} qubits needs {}", m.rows(), 1u128 << n)));
    }
    gate.validate(n)?;
    let s = FRAC_1_SQRT_2;
    match gate {
        GateSpec::H(q) => kernels::apply_one_qubit(m, *q, [C64::new(s, 0.0), C64::new(s, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0)]),
        GateSpec::X(q) => kernels::flip_rows(m, *q, None),
        GateSpec::Z(q) => kernels::scale_rows(m, |r| (r >> q & 1 == 1).then_some(-ONE)),
        GateSpec::Cnot { control, target } => kernels::flip_rows(m, *target, Some(*control)),
        GateSpec::Cphase { control, target, phi } => {
            let z = C64::from_polar(1.0, *phi);
            kernels::scale_rows(m, |r| (r >> control & 1 == 1 && r >> target & 1 == 1).then_some(z))
        }
        GateSpec::Qft { lo, hi } => {
            for stage in qft_stages(*lo, *hi) {
                for g in &stage {
                    apply_gate_in_place(m, g, n)?;
                }
            }
        }
        GateSpec::Oracle { marked } => kernels::scale_rows(m, |r| (r == *marked).then_some(-ONE)),
        GateSpec::R2 => kernels::scale_rows(m, |r| (r == 0).then_some(-ONE)),
        GateSpec::Diffusion => kernels::diffuse_rows(m),
        GateSpec::Modmul {
            width,
            modulus,
            factor,
            control,
        } => kernels::permute_rows(m, &modmul_permutation_indices(*width, *modulus, *factor, *control)?),
        GateSpec::Perm(perm) => kernels::permute_rows(m, perm),
    }
    Ok(())
}
