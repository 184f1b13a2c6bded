//! Parameter sweeps over the optical elements and the single-qubit error
//! channels, one row per grid point.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::channels::{compose, QuantumChannel};
use crate::error::{invalid, Result};
use crate::gates::hadamard;
use crate::measure::{interference_kraus, interference_unitary_unchecked};
use crate::optics::{bs_unitary, mz_phase_error_channel, mz_unitary};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub param1: f64,
    pub param2: f64,
    pub interference: f64,
}

/// `points` equally spaced values from `lo` to `hi` inclusive.
pub fn grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    match points {
        0 => Err(invalid("a scan needs at least one point")),
        1 => Ok(vec![lo]),
        _ => Ok((0..points)
            .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
            .collect()),
    }
}

/// Beam splitter: `param1 = theta` over `[0, pi]`, `param2 = N` for
/// `N = 1..=max_photons`.
pub fn beamsplitter_scan(max_photons: usize, points: usize) -> Result<Vec<ScanRow>> {
    let thetas = grid(0.0, PI, points)?;
    let mut rows = Vec::new();
    for n in 1..=max_photons {
        for &theta in &thetas {
            let u = bs_unitary(n, theta)?;
            rows.push(ScanRow {
                param1: theta,
                param2: n as f64,
                interference: interference_unitary_unchecked(u.matrix())?,
            });
        }
    }
    Ok(rows)
}

/// Mach-Zehnder with `photons` photons: `param1 = theta` over `[0, pi]`,
/// `param2 = phi` over `[0, 2 pi]`.
pub fn mz_scan(photons: usize, points: usize) -> Result<Vec<ScanRow>> {
    let thetas = grid(0.0, PI, points)?;
    let phis = grid(0.0, TAU, points)?;
    let mut rows = Vec::with_capacity(points * points);
    for &theta in &thetas {
        for &phi in &phis {
            let u = mz_unitary(photons, theta, phi)?;
            rows.push(ScanRow {
                param1: theta,
                param2: phi,
                interference: interference_unitary_unchecked(u.matrix())?,
            });
        }
    }
    Ok(rows)
}

/// One-photon Mach-Zehnder with arm phase errors at fixed `theta`:
/// `param1 = phi` over `[0, 2 pi]`, `param2 = p` over `[0, 1]`.
pub fn mz_error_scan(theta: f64, points: usize) -> Result<Vec<ScanRow>> {
    let phis = grid(0.0, TAU, points)?;
    let ps = grid(0.0, 1.0, points)?;
    let mut rows = Vec::with_capacity(points * points);
    for &phi in &phis {
        for &p in &ps {
            rows.push(ScanRow {
                param1: phi,
                param2: p,
                interference: interference_kraus(&mz_phase_error_channel(theta, phi, p)?)?,
            });
        }
    }
    Ok(rows)
}

/// Hadamard followed by a bit-flip (`param2 = 0`) or phase-flip
/// (`param2 = 1`) channel, `param1 = p` over `[0, 1]`.
pub fn decoherence_scan(points: usize) -> Result<Vec<ScanRow>> {
    let h = QuantumChannel::unitary(hadamard())?;
    let ps = grid(0.0, 1.0, points)?;
    let mut rows = Vec::with_capacity(2 * points);
    for (kind, make) in [(0.0, QuantumChannel::bitflip as fn(f64) -> Result<QuantumChannel>), (1.0, QuantumChannel::phaseflip)] {
        for &p in &ps {
            rows.push(ScanRow {
                param1: p,
                param2: kind,
                interference: interference_kraus(&compose(&make(p)?, &h)?)?,
            });
        }
    }
    Ok(rows)
}
