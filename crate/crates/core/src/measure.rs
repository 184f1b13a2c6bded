//! The interference measure of a propagator.
//!
//! For a superoperator `P` acting as `rho'_{ij} = sum_{kl} P_{ij,kl} rho_{kl}`
//! the measure is
//!
//! ```text
//! I(P) = sum_{i,k,l} |P_{ii,kl}|^2 - sum_{i,k} |P_{ii,kk}|^2
//! ```
//!
//! It quantifies how strongly the final populations depend on the phases of
//! the initial amplitudes. Three equivalent evaluation routes are provided:
//!
//! * [`interference_unitary`]: `N - sum_{ik} |U_ik|^4`, i.e. `N` minus the
//!   column-summed inverse participation ratio of `U`;
//! * [`interference_kraus`]: the same quantity from a Kraus set `{E_l}`;
//! * [`interference_superop`]: direct evaluation on the superoperator.
//!
//! [`phase_sensitivity_estimate`] is an independent Monte-Carlo route that
//! differentiates final populations with respect to initial phases and
//! averages `tr(S S^T)` over random phases. It satisfies `I = (N^2 / 2) C`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channels::{QuantumChannel, Superoperator, MAX_SUPEROP_DIM};
use crate::error::{capacity, invalid, Error, Result};
use crate::matrix::{ComplexMatrix, C64};

/// Negative results down to `-NEGATIVE_DUST` are rounding noise and clamp to 0.
pub const NEGATIVE_DUST: f64 = 1e-9;

/// Unitarity tolerance required by [`interference_unitary`].
pub const UNITARY_TOL: f64 = 1e-9;

/// Largest channel dimension accepted by the Monte-Carlo estimator.
pub const MAX_ESTIMATOR_DIM: usize = 16;

/// Central finite-difference step for the phase derivatives.
pub const PHASE_STEP: f64 = 1e-5;

fn clamp_dust(value: f64, form: &str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -NEGATIVE_DUST {
        Ok(0.0)
    } else {
        Err(Error::Consistency(format!("{form} interference evaluated to {value}")))
    }
}

/// Sums per-row partial results in row order so the total does not depend on
/// thread scheduling.
fn ordered_sum(parts: Vec<f64>) -> f64 {
    parts.into_iter().sum()
}

/// `N - sum_{ik} |U_ik|^4` for a unitary `u`, checked to 1e-9.
pub fn interference_unitary(u: &ComplexMatrix) -> Result<f64> {
    if !u.is_unitary(UNITARY_TOL)? {
        return Err(invalid("interference_unitary requires a unitary matrix"));
    }
    interference_unitary_unchecked(u)
}

/// Same as [`interference_unitary`] but trusts the caller that `u` is
/// unitary. Costs `O(N^2)` instead of the `O(N^3)` unitarity check, which
/// matters for the 4096-dimensional propagators of the trace engine.
pub fn interference_unitary_unchecked(u: &ComplexMatrix) -> Result<f64> {
    u.require_square()?;
    let n = u.rows();
    let parts: Vec<f64> = u
        .as_slice()
        .par_chunks(n)
        .map(|row| row.iter().map(|z| z.norm_sqr().powi(2)).sum())
        .collect();
    clamp_dust(n as f64 - ordered_sum(parts), "unitary")
}

/// Kraus-form measure
/// `sum_{i,k,m} |sum_l E_l,ik conj(E_l,im)|^2 - sum_{i,k} (sum_l |E_l,ik|^2)^2`.
///
/// The first term is evaluated row by row through the Gram matrix of the
/// Kraus rows, `G_{ll'} = sum_k E_l,ik conj(E_l',ik)`, using
/// `sum_{k,m} |sum_l E_l,ik conj(E_l,im)|^2 = sum_{l,l'} |G_{ll'}|^2`.
/// Cost is `O(L^2 N^2)`.
pub fn interference_kraus(c: &QuantumChannel) -> Result<f64> {
    let n = c.dim();
    let kraus = c.kraus();
    let parts: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let rows: Vec<&[C64]> = kraus.iter().map(|e| e.row(i)).collect();
            let mut first = 0.0;
            for (l, a) in rows.iter().enumerate() {
                let diag: f64 = a.iter().map(|z| z.norm_sqr()).sum();
                first += diag * diag;
                for b in &rows[l + 1..] {
                    let g: C64 = a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum();
                    first += 2.0 * g.norm_sqr();
                }
            }
            let second: f64 = (0..n)
                .map(|k| {
                    let s: f64 = rows.iter().map(|r| r[k].norm_sqr()).sum();
                    s * s
                })
                .sum();
            first - second
        })
        .collect();
    clamp_dust(ordered_sum(parts), "Kraus")
}

/// Superoperator-form measure `sum_{i,k,l} |P_{ii,kl}|^2 - sum_{i,k} |P_{ii,kk}|^2`.
pub fn interference_superop(p: &Superoperator) -> Result<f64> {
    let n = p.dim();
    if n > MAX_SUPEROP_DIM {
        return Err(capacity(format!("superoperator dimension {n} exceeds {MAX_SUPEROP_DIM}")));
    }
    let parts: Vec<f64> = (0..n)
        .map(|i| {
            let mut total = 0.0;
            for k in 0..n {
                for l in 0..n {
                    if k != l {
                        total += p.get(i, i, k, l).norm_sqr();
                    }
                }
            }
            total
        })
        .collect();
    clamp_dust(ordered_sum(parts), "superoperator")
}

/// Number of interference bits, `log2(I + 1)`.
pub fn ibits(interference: f64) -> Result<f64> {
    if interference.is_nan() || interference < 0.0 {
        return Err(invalid(format!("interference must be non-negative, got {interference}")));
    }
    Ok((interference + 1.0).log2())
}

/// Monte-Carlo estimate of the phase-averaged coherence `C(P)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseSensitivityEstimate {
    pub dim: usize,
    /// Sample mean of `tr(S S^T)`.
    pub c_estimate: f64,
    /// Standard error of the mean.
    pub stderr: f64,
    pub samples: usize,
}

impl PhaseSensitivityEstimate {
    /// `(N^2 / 2) C`, which estimates the interference measure.
    pub fn interference(&self) -> f64 {
        self.scale() * self.c_estimate
    }

    pub fn interference_stderr(&self) -> f64 {
        self.scale() * self.stderr
    }

    fn scale(&self) -> f64 {
        (self.dim * self.dim) as f64 / 2.0
    }
}

/// Averages `tr(S S^T)`, `S_il = d p'_i / d phi_l`, over `samples` uniform
/// phase draws for the democratic input `a_j = exp(i phi_j) / sqrt(N)`.
/// Derivatives are central finite differences of the channel's actual
/// output populations. Deterministic in `(samples, seed)`.
pub fn phase_sensitivity_estimate(c: &QuantumChannel, samples: usize, seed: u64) -> Result<PhaseSensitivityEstimate> {
    let n = c.dim();
    if n > MAX_ESTIMATOR_DIM {
        return Err(capacity(format!("estimator supports dimension <= {MAX_ESTIMATOR_DIM}, got {n}")));
    }
    if samples < 100 {
        return Err(invalid(format!("need at least 100 samples, got {samples}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phases: Vec<f64> = (0..samples * n).map(|_| rng.random::<f64>() * TAU).collect();

    let values: Vec<f64> = phases.par_chunks(n).map(|phi| sensitivity_trace(c, phi)).collect();
    let mean = values.iter().sum::<f64>() / samples as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
    Ok(PhaseSensitivityEstimate {
        dim: n,
        c_estimate: mean,
        stderr: (var / samples as f64).sqrt(),
        samples,
    })
}

/// `tr(S S^T)` at one phase configuration.
fn sensitivity_trace(c: &QuantumChannel, phi: &[f64]) -> f64 {
    let n = phi.len();
    let amp = 1.0 / (n as f64).sqrt();
    let a: Vec<C64> = phi.iter().map(|&p| C64::from_polar(amp, p)).collect();
    let outputs: Vec<Vec<C64>> = c
        .kraus()
        .iter()
        .map(|e| (0..n).map(|i| e.row(i).iter().zip(&a).map(|(x, y)| x * y).sum()).collect())
        .collect();

    let populations = |j: usize, shifted: C64| -> Vec<f64> {
        let delta = shifted - a[j];
        let mut p = vec![0.0; n];
        for (e, v) in c.kraus().iter().zip(&outputs) {
            for (i, pi) in p.iter_mut().enumerate() {
                *pi += (v[i] + e.get(i, j) * delta).norm_sqr();
            }
        }
        p
    };

    let mut total = 0.0;
    for (j, &phase) in phi.iter().enumerate() {
        let plus = populations(j, C64::from_polar(amp, phase + PHASE_STEP));
        let minus = populations(j, C64::from_polar(amp, phase - PHASE_STEP));
        for (p, m) in plus.iter().zip(&minus) {
            let s = (p - m) / (2.0 * PHASE_STEP);
            total += s * s;
        }
    }
    total
}

/// Column-summed inverse participation ratio `sum_{ik} |U_ik|^4`.
pub fn ipr_sum(u: &ComplexMatrix) -> f64 {
    u.as_slice().iter().map(|z| z.norm_sqr().powi(2)).sum()
}
