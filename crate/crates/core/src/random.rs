//! Seeded random unitaries, channels and density matrices for property
//! checks and Monte-Carlo estimates.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::channels::QuantumChannel;
use crate::matrix::{ComplexMatrix, C64};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Unitary from Gram-Schmidt orthonormalization of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = (0..n).map(|_| (0..n).map(|_| gaussian(rng)).collect()).collect();
    for j in 0..n {
        // two passes of modified Gram-Schmidt keep the columns orthogonal to
        // machine precision
        for _ in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let proj: C64 = done[k].iter().zip(&rest[0]).map(|(a, b)| a.conj() * b).sum();
                for (x, &q) in rest[0].iter_mut().zip(&done[k]) {
                    *x -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[j].iter_mut().for_each(|z| *z /= norm);
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Trace-preserving channel with `kraus_count` operators, cut from the first
/// `dim` columns of a random `(kraus_count * dim)`-dimensional unitary.
pub fn random_channel<R: Rng + ?Sized>(dim: usize, kraus_count: usize, rng: &mut R) -> QuantumChannel {
    let big = random_unitary(dim * kraus_count, rng);
    let kraus = (0..kraus_count)
        .map(|l| ComplexMatrix::from_fn(dim, dim, |i, k| big.get(l * dim + i, k)))
        .collect();
    QuantumChannel::new(kraus).expect("isometry blocks form a valid channel")
}

/// Full-rank density matrix `G G^dagger / tr(G G^dagger)`.
pub fn random_density_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let rho = g.matmul(&g.dagger()).expect("square");
    let tr = rho.trace().expect("square").re;
    let rho = rho.scale(C64::new(1.0 / tr, 0.0));
    // symmetrize away roundoff so Hermiticity holds exactly
    ComplexMatrix::from_fn(n, n, |i, j| (rho.get(i, j) + rho.get(j, i).conj()) * 0.5)
}

/// Random pure state vector of unit norm.
pub fn random_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}
