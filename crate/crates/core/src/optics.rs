//! Two-mode linear optics in the fixed-photon-number Fock basis.
//!
//! With `N` photons the basis is `|i, N-i>`, `i = 0..=N`, where `i` counts
//! the photons in mode `a`. Matrix index `i` is that count.

use crate::channels::QuantumChannel;
use crate::error::{capacity, invalid, Result};
use crate::gates::pauli_z;
use crate::matrix::{ComplexMatrix, C64};

pub const MAX_PHOTONS: usize = 30;

/// A unitary on the `N + 1` dimensional fixed-`N` Fock block.
#[derive(Clone, Debug, PartialEq)]
pub struct FockUnitary {
    photons: usize,
    matrix: ComplexMatrix,
}

impl FockUnitary {
    pub fn photons(&self) -> usize {
        self.photons
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dagger(&self) -> FockUnitary {
        FockUnitary {
            photons: self.photons,
            matrix: self.matrix.dagger(),
        }
    }

    /// `self * other`.
    pub fn then_after(&self, other: &FockUnitary) -> Result<FockUnitary> {
        Ok(FockUnitary {
            photons: self.photons,
            matrix: self.matrix.matmul(&other.matrix)?,
        })
    }
}

fn check_photons(photons: usize) -> Result<()> {
    if photons == 0 {
        return Err(invalid("at least one photon is required"));
    }
    if photons > MAX_PHOTONS {
        return Err(capacity(format!("{photons} photons exceed the limit of {MAX_PHOTONS}")));
    }
    Ok(())
}

/// `ln k!` for `k = 0..=2 * MAX_PHOTONS`.
fn ln_factorials() -> Vec<f64> {
    let mut table = vec![0.0; 2 * MAX_PHOTONS + 1];
    for k in 1..table.len() {
        table[k] = table[k - 1] + (k as f64).ln();
    }
    table
}

/// Beam splitter `exp(theta (a^dagger b - a b^dagger))` on `photons` photons.
///
/// ```text
/// U_im = sqrt(i! (N-i)! / (m! (N-m)!))
///        sum_l C(m,l) C(N-m, N-i-l) (-1)^l cos^(m+N-i-2l) sin^(i-m+2l)
/// ```
///
/// with `l` from `max(m-i, 0)` to `min(N-i, m)`. Magnitudes of the
/// combinatorial factors go through log-factorials; signs come from `(-1)^l`
/// and the integer powers of `cos` and `sin`.
pub fn bs_unitary(photons: usize, theta: f64) -> Result<FockUnitary> {
    check_photons(photons)?;
    let n = photons;
    let lf = ln_factorials();
    let ln_binom = |a: usize, b: usize| lf[a] - lf[b] - lf[a - b];
    let (c, s) = (theta.cos(), theta.sin());
    let matrix = ComplexMatrix::from_fn(n + 1, n + 1, |i, m| {
        let ln_pref = 0.5 * (lf[i] + lf[n - i] - lf[m] - lf[n - m]);
        let mut sum = 0.0;
        for l in m.saturating_sub(i)..=(n - i).min(m) {
            let magnitude = (ln_pref + ln_binom(m, l) + ln_binom(n - m, n - i - l)).exp();
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * magnitude * c.powi((m + n - i - 2 * l) as i32) * s.powi((i + 2 * l - m) as i32);
        }
        C64::new(sum, 0.0)
    });
    Ok(FockUnitary { photons, matrix })
}

/// Phase shifter `exp(i phi m_a)` with `m_a` the mode-`a` photon count.
pub fn phase_shifter(photons: usize, phi: f64) -> Result<FockUnitary> {
    check_photons(photons)?;
    let diag: Vec<C64> = (0..=photons).map(|i| C64::from_polar(1.0, phi * i as f64)).collect();
    Ok(FockUnitary {
        photons,
        matrix: ComplexMatrix::diagonal(&diag),
    })
}

/// Mach-Zehnder interferometer `U_BS U_P U_BS^dagger`.
pub fn mz_unitary(photons: usize, theta: f64, phi: f64) -> Result<FockUnitary> {
    let bs = bs_unitary(photons, theta)?;
    bs.then_after(&phase_shifter(photons, phi)?)?.then_after(&bs.dagger())
}

/// One-photon Mach-Zehnder with a phase error in one arm: Kraus operators
/// `sqrt(p) U_BS U_P U_BS^dagger` and `sqrt(1-p) U_BS Z U_P U_BS^dagger`,
/// where `p` is the probability of no error.
pub fn mz_phase_error_channel(theta: f64, phi: f64, p: f64) -> Result<QuantumChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("probability {p} outside [0, 1]")));
    }
    let bs = bs_unitary(1, theta)?;
    let arm = phase_shifter(1, phi)?;
    let clean = bs.matrix().matmul(arm.matrix())?.matmul(&bs.matrix().dagger())?;
    let flipped = bs
        .matrix()
        .matmul(&pauli_z())?
        .matmul(arm.matrix())?
        .matmul(&bs.matrix().dagger())?;
    QuantumChannel::new(vec![
        clean.scale(C64::new(p.sqrt(), 0.0)),
        flipped.scale(C64::new((1.0 - p).sqrt(), 0.0)),
    ])
}
