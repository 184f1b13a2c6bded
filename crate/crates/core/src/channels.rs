//! Quantum channels in operator-sum form and their superoperator matrices.
//!
//! A [`QuantumChannel`] maps `rho -> sum_l E_l rho E_l^dagger`. The
//! trace-preserving flag is computed from the Kraus set at construction.

use crate::error::{capacity, invalid, shape, Result};
use crate::matrix::{ComplexMatrix, C64, ONE, ZERO};

/// Tolerance for the trace-preservation check `sum E^dagger E = I`.
pub const TRACE_PRESERVING_TOL: f64 = 1e-9;

/// Largest dimension for which a full `N^2 x N^2` superoperator is built.
pub const MAX_SUPEROP_DIM: usize = 64;

/// Kraus operators whose max-norm is at or below this are dropped by
/// [`QuantumChannel::compose`].
pub const PRUNE_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumChannel {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
    trace_preserving: bool,
}

impl QuantumChannel {
    /// Builds a channel from square Kraus operators of equal dimension.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| invalid("a channel needs at least one Kraus operator"))?;
        first.require_square()?;
        let dim = first.rows();
        if let Some((l, k)) = kraus.iter().enumerate().find(|(_, k)| k.rows() != dim || k.cols() != dim) {
            return Err(shape(format!(
                "Kraus operator {l} is {}x{}, expected {dim}x{dim}",
                k.rows(),
                k.cols()
            )));
        }
        let trace_preserving = completeness_defect(&kraus) <= TRACE_PRESERVING_TOL;
        Ok(Self { dim, kraus, trace_preserving })
    }

    /// Single-Kraus channel `{u}`; `u` must be unitary within 1e-9.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        if !u.is_unitary(TRACE_PRESERVING_TOL)? {
            return Err(invalid("unitary channel requires a unitary matrix"));
        }
        Ok(Self {
            dim: u.rows(),
            kraus: vec![u],
            trace_preserving: true,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            kraus: vec![ComplexMatrix::identity(dim)],
            trace_preserving: true,
        }
    }

    /// Channel from Kraus operators known to be valid, with a known flag.
    pub(crate) fn from_parts(dim: usize, kraus: Vec<ComplexMatrix>, trace_preserving: bool) -> Self {
        debug_assert!(kraus.iter().all(|k| k.rows() == dim && k.cols() == dim));
        Self { dim, kraus, trace_preserving }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn into_kraus(self) -> Vec<ComplexMatrix> {
        self.kraus
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    /// `second` applied after `first`: Kraus set `{F_m E_l}` over all pairs,
    /// with numerically zero products removed.
    pub fn compose(second: &Self, first: &Self) -> Result<Self> {
        if second.dim != first.dim {
            return Err(shape(format!(
                "cannot compose channels of dimension {} and {}",
                second.dim, first.dim
            )));
        }
        let mut kraus = Vec::with_capacity(second.kraus.len() * first.kraus.len());
        for f in &second.kraus {
            for e in &first.kraus {
                let product = f.matmul(e)?;
                if product.max_norm() > PRUNE_TOL {
                    kraus.push(product);
                }
            }
        }
        if kraus.is_empty() {
            // Everything annihilated; keep a single zero operator so the
            // channel stays well formed.
            kraus.push(ComplexMatrix::zeros(first.dim, first.dim));
        }
        Ok(Self {
            dim: first.dim,
            kraus,
            trace_preserving: second.trace_preserving && first.trace_preserving,
        })
    }

    /// Replaces each Kraus operator `E` by `E (x) I_m`.
    pub fn tensor_extend(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(invalid("tensor extension factor must be at least 1"));
        }
        let id = ComplexMatrix::identity(m);
        Ok(Self {
            dim: self.dim * m,
            kraus: self.kraus.iter().map(|e| e.kron(&id)).collect(),
            trace_preserving: self.trace_preserving,
        })
    }

    /// Bit-flip channel `{sqrt(p) I, sqrt(1-p) X}`; `p` is the no-error probability.
    pub fn bitflip(p: f64) -> Result<Self> {
        check_probability(p)?;
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])?;
        Self::new(vec![
            ComplexMatrix::identity(2).scale(C64::new(p.sqrt(), 0.0)),
            x.scale(C64::new((1.0 - p).sqrt(), 0.0)),
        ])
    }

    /// Phase-flip channel `{sqrt(p) I, sqrt(1-p) Z}`; `p` is the no-error probability.
    pub fn phaseflip(p: f64) -> Result<Self> {
        check_probability(p)?;
        let z = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])?;
        Self::new(vec![
            ComplexMatrix::identity(2).scale(C64::new(p.sqrt(), 0.0)),
            z.scale(C64::new((1.0 - p).sqrt(), 0.0)),
        ])
    }

    /// Computational-basis measurement of the given bits of a `dim = 2^n`
    /// register. Outcome `o` has bit `j` equal to the measured value of
    /// `measured_bits[j]`; the Kraus list is ordered by `o`.
    pub fn projective_measurement(dim: usize, measured_bits: &[usize]) -> Result<Self> {
        let masks = outcome_masks(dim, measured_bits)?;
        let kraus = (0..1usize << measured_bits.len())
            .map(|outcome| {
                let diag: Vec<C64> = (0..dim)
                    .map(|r| if masks.matches(r, outcome) { ONE } else { ZERO })
                    .collect();
                ComplexMatrix::diagonal(&diag)
            })
            .collect();
        Ok(Self {
            dim,
            kraus,
            trace_preserving: true,
        })
    }

    /// Full superoperator `P[(i*N + j), (k*N + l)] = P_{ij,kl}`.
    pub fn to_superop(&self) -> Result<Superoperator> {
        let n = self.dim;
        if n > MAX_SUPEROP_DIM {
            return Err(capacity(format!(
                "superoperator of dimension {n} exceeds the limit {MAX_SUPEROP_DIM}"
            )));
        }
        let nn = n * n;
        let mut entries = vec![ZERO; nn * nn];
        for e in &self.kraus {
            for i in 0..n {
                for j in 0..n {
                    let row = &mut entries[(i * n + j) * nn..(i * n + j + 1) * nn];
                    for k in 0..n {
                        let a = e.get(i, k);
                        if a == ZERO {
                            continue;
                        }
                        for l in 0..n {
                            row[k * n + l] += a * e.get(j, l).conj();
                        }
                    }
                }
            }
        }
        Ok(Superoperator { dim: n, entries })
    }

    /// `rho' = sum_l E_l rho E_l^dagger` for a unit-trace Hermitian `rho`.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.rows() != self.dim || rho.cols() != self.dim {
            return Err(shape(format!(
                "density matrix is {}x{}, channel dimension is {}",
                rho.rows(),
                rho.cols(),
                self.dim
            )));
        }
        if !rho.is_hermitian(TRACE_PRESERVING_TOL)? {
            return Err(invalid("density matrix must be Hermitian"));
        }
        let tr = rho.trace()?;
        if (tr - ONE).norm() > TRACE_PRESERVING_TOL {
            return Err(invalid(format!("density matrix trace is {tr}, expected 1")));
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for e in &self.kraus {
            out = out.add(&e.matmul(rho)?.matmul(&e.dagger())?)?;
        }
        Ok(out)
    }
}

/// Free-function form: `second` after `first`.
pub fn compose(second: &QuantumChannel, first: &QuantumChannel) -> Result<QuantumChannel> {
    QuantumChannel::compose(second, first)
}

/// Lifts a single-qubit channel onto qubit `qubit` of an `n`-qubit register
/// (qubit 0 is the least significant bit of the basis index).
pub fn embed_qubit_channel(c: &QuantumChannel, qubit: usize, n: usize) -> Result<QuantumChannel> {
    if c.dim != 2 {
        return Err(shape(format!("expected a single-qubit channel, got dimension {}", c.dim)));
    }
    if qubit >= n {
        return Err(invalid(format!("qubit {qubit} out of range for {n} qubits")));
    }
    let high = ComplexMatrix::identity(1 << (n - 1 - qubit));
    let low = ComplexMatrix::identity(1 << qubit);
    Ok(QuantumChannel {
        dim: 1 << n,
        kraus: c.kraus.iter().map(|e| high.kron(e).kron(&low)).collect(),
        trace_preserving: c.trace_preserving,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    dim: usize,
    entries: Vec<C64>,
}

impl Superoperator {
    /// Wraps `N^2 x N^2` row-major entries under the composite-index convention.
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 || dim > MAX_SUPEROP_DIM {
            return Err(capacity(format!("superoperator dimension {dim} outside 1..={MAX_SUPEROP_DIM}")));
        }
        if entries.len() != dim.pow(4) {
            return Err(shape(format!("expected {} entries, got {}", dim.pow(4), entries.len())));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("superoperator entries must be finite"));
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `P_{ij,kl}`.
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        let n = self.dim;
        self.entries[(i * n + j) * n * n + k * n + l]
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.entries
    }

    /// `rho'_{ij} = sum_{kl} P_{ij,kl} rho_{kl}`.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.dim;
        if rho.rows() != n || rho.cols() != n {
            return Err(shape(format!("density matrix must be {n}x{n}")));
        }
        let flat = rho.as_slice();
        Ok(ComplexMatrix::from_fn(n, n, |i, j| {
            let row = &self.entries[(i * n + j) * n * n..(i * n + j + 1) * n * n];
            row.iter().zip(flat).map(|(p, r)| p * r).sum()
        }))
    }
}

pub fn kraus_to_superop(c: &QuantumChannel) -> Result<Superoperator> {
    c.to_superop()
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(format!("probability {p} outside [0, 1]")))
    }
}

/// Bit positions and their layout inside an outcome pattern.
pub(crate) struct OutcomeMasks {
    bits: Vec<usize>,
}

impl OutcomeMasks {
    /// True iff basis state `r` is consistent with `outcome`.
    pub(crate) fn matches(&self, r: usize, outcome: usize) -> bool {
        self.bits
            .iter()
            .enumerate()
            .all(|(j, &b)| (r >> b & 1) == (outcome >> j & 1))
    }
}

pub(crate) fn outcome_masks(dim: usize, measured_bits: &[usize]) -> Result<OutcomeMasks> {
    if !dim.is_power_of_two() || dim < 2 {
        return Err(invalid(format!("measurement needs a qubit register, got dimension {dim}")));
    }
    let n = dim.trailing_zeros() as usize;
    if measured_bits.is_empty() {
        return Err(invalid("measurement needs at least one bit"));
    }
    for (j, &b) in measured_bits.iter().enumerate() {
        if b >= n {
            return Err(invalid(format!("bit {b} out of range for {n} qubits")));
        }
        if measured_bits[..j].contains(&b) {
            return Err(invalid(format!("bit {b} measured twice")));
        }
    }
    Ok(OutcomeMasks {
        bits: measured_bits.to_vec(),
    })
}

/// Max-norm of `sum_l E_l^dagger E_l - I`, skipping zero entries so that
/// sparse Kraus sets (projectors, permutations) stay cheap.
fn completeness_defect(kraus: &[ComplexMatrix]) -> f64 {
    let n = kraus[0].rows();
    let mut gram = vec![ZERO; n * n];
    for e in kraus {
        for i in 0..n {
            let row = e.row(i);
            for (j, a) in row.iter().enumerate() {
                if *a == ZERO {
                    continue;
                }
                let a = a.conj();
                let out = &mut gram[j * n..(j + 1) * n];
                for (o, b) in out.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
    }
    gram.iter()
        .enumerate()
        .map(|(idx, &g)| {
            let target = if idx / n == idx % n { ONE } else { ZERO };
            (g - target).norm()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::gates::{hadamard, pauli_x, pauli_z, walsh};
    use crate::measure::interference_kraus;
    use crate::random::{random_channel, random_density_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn h_channel() -> QuantumChannel {
        QuantumChannel::unitary(hadamard()).unwrap()
    }

    fn kraus_measure(c: &QuantumChannel) -> f64 {
        interference_kraus(c).unwrap()
    }

    #[test]
    fn unitary_channel_examples() {
        let c = h_channel();
        assert_eq!(c.kraus(), &[hadamard()]);
        assert!(c.is_trace_preserving());
        assert!(kraus_measure(&QuantumChannel::unitary(ComplexMatrix::identity(4)).unwrap()).abs() < 1e-12);
        let w3 = QuantumChannel::unitary(walsh(3).unwrap()).unwrap();
        assert!((kraus_measure(&w3) - 7.0).abs() < 1e-9);
        let bad = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.5]).unwrap();
        assert!(matches!(QuantumChannel::unitary(bad), Err(Error::Validation(_))));
    }

    #[test]
    fn new_validates_kraus_set() {
        assert!(matches!(QuantumChannel::new(vec![]), Err(Error::Validation(_))));
        let mixed = vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)];
        assert!(matches!(QuantumChannel::new(mixed), Err(Error::Shape(_))));
        let half = QuantumChannel::new(vec![ComplexMatrix::identity(2).scale(C64::new(0.5, 0.0))]).unwrap();
        assert!(!half.is_trace_preserving());
    }

    #[test]
    fn compose_examples() {
        let hh = compose(&h_channel(), &h_channel()).unwrap();
        assert!(kraus_measure(&hh) < 1e-12);
        assert!(hh.kraus()[0].max_abs_diff(&ComplexMatrix::identity(2)).unwrap() < 1e-12);

        let p = 0.3;
        let c = compose(&QuantumChannel::bitflip(p).unwrap(), &h_channel()).unwrap();
        let e0h = hadamard().scale(C64::new(p.sqrt(), 0.0));
        let e1h = pauli_x().matmul(&hadamard()).unwrap().scale(C64::new((1.0 - p).sqrt(), 0.0));
        assert_eq!(c.kraus().len(), 2);
        assert!(c.kraus()[0].max_abs_diff(&e0h).unwrap() < 1e-15);
        assert!(c.kraus()[1].max_abs_diff(&e1h).unwrap() < 1e-15);
        assert!(c.is_trace_preserving());

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = random_channel(3, 2, &mut rng);
        let with_id = compose(&r, &QuantumChannel::identity(3)).unwrap();
        assert!((kraus_measure(&with_id) - kraus_measure(&r)).abs() < 1e-12);
        let rho = random_density_matrix(3, &mut rng);
        assert!(with_id.apply(&rho).unwrap().max_abs_diff(&r.apply(&rho).unwrap()).unwrap() < 1e-12);

        assert!(matches!(compose(&h_channel(), &QuantumChannel::identity(3)), Err(Error::Shape(_))));
    }

    #[test]
    fn compose_prunes_annihilated_products() {
        let m = QuantumChannel::projective_measurement(4, &[0]).unwrap();
        let twice = compose(&m, &m).unwrap();
        // P0 P1 and P1 P0 vanish
        assert_eq!(twice.kraus().len(), 2);
    }

    #[test]
    fn tensor_extend_examples() {
        let c4 = h_channel().tensor_extend(4).unwrap();
        assert_eq!(c4.dim(), 8);
        assert!((kraus_measure(&c4) - 4.0).abs() < 1e-9);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = random_channel(2, 3, &mut rng);
        assert_eq!(r.tensor_extend(1).unwrap(), r);
        assert!(r.tensor_extend(0).is_err());
    }

    #[test]
    fn error_channel_examples() {
        let b1 = QuantumChannel::bitflip(1.0).unwrap();
        assert_eq!(b1.kraus().len(), 2);
        assert!(b1.kraus()[1].max_norm() == 0.0);
        for p in [0.0, 0.3, 1.0] {
            assert!(kraus_measure(&QuantumChannel::bitflip(p).unwrap()) < 1e-12);
            assert!(kraus_measure(&QuantumChannel::phaseflip(p).unwrap()) < 1e-12);
            assert!(QuantumChannel::bitflip(p).unwrap().is_trace_preserving());
            assert!(QuantumChannel::phaseflip(p).unwrap().is_trace_preserving());
        }
        let after_h = compose(&QuantumChannel::bitflip(0.25).unwrap(), &h_channel()).unwrap();
        assert!((kraus_measure(&after_h) - 0.25).abs() < 1e-9);
        let after_h = compose(&QuantumChannel::phaseflip(0.5).unwrap(), &h_channel()).unwrap();
        assert!((kraus_measure(&after_h) - 1.0).abs() < 1e-9);
        // p = 0: the only surviving operator is Z itself
        let z_only = QuantumChannel::phaseflip(0.0).unwrap();
        assert_eq!(z_only.kraus()[1], pauli_z());
        for bad in [-0.1, 1.5, f64::NAN] {
            assert!(QuantumChannel::bitflip(bad).is_err());
            assert!(QuantumChannel::phaseflip(bad).is_err());
        }
    }

    #[test]
    fn projective_measurement_examples() {
        let m = QuantumChannel::projective_measurement(2, &[0]).unwrap();
        assert_eq!(m.kraus()[0], ComplexMatrix::diagonal(&[ONE, ZERO]));
        assert_eq!(m.kraus()[1], ComplexMatrix::diagonal(&[ZERO, ONE]));

        let m = QuantumChannel::projective_measurement(8, &[0, 1]).unwrap();
        assert_eq!(m.kraus().len(), 4);
        for (outcome, p) in m.kraus().iter().enumerate() {
            // 1 (x) |ij><ij| with bit 1 = i, bit 0 = j
            let ij = ComplexMatrix::from_fn(4, 4, |a, b| if a == b && a == outcome { ONE } else { ZERO });
            assert_eq!(*p, ComplexMatrix::identity(2).kron(&ij));
            assert_eq!(p.matmul(p).unwrap(), *p);
        }
        assert!(m.is_trace_preserving());
        assert!(QuantumChannel::new(m.kraus().to_vec()).unwrap().is_trace_preserving());

        assert!(QuantumChannel::projective_measurement(8, &[3]).is_err());
        assert!(QuantumChannel::projective_measurement(8, &[1, 1]).is_err());
        assert!(QuantumChannel::projective_measurement(6, &[0]).is_err());
    }

    #[test]
    fn superop_examples() {
        let id = QuantumChannel::identity(3).to_superop().unwrap();
        for a in 0..9 {
            for b in 0..9 {
                let expect = if a == b { ONE } else { ZERO };
                assert_eq!(id.as_slice()[a * 9 + b], expect);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = crate::random::random_unitary(3, &mut rng);
        let p = QuantumChannel::unitary(u.clone()).unwrap().to_superop().unwrap();
        for i in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    assert!((p.get(i, i, k, l) - u.get(i, k) * u.get(i, l).conj()).norm() < 1e-15);
                }
            }
        }
        let big = QuantumChannel::identity(65);
        assert!(matches!(big.to_superop(), Err(Error::Capacity(_))));
    }

    #[test]
    fn superop_action_matches_kraus_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let c = random_channel(4, 3, &mut rng);
        let rho = random_density_matrix(4, &mut rng);
        let via_kraus = c.apply(&rho).unwrap();
        let via_superop = c.to_superop().unwrap().apply(&rho).unwrap();
        assert!(via_kraus.max_abs_diff(&via_superop).unwrap() < 1e-12);
    }

    #[test]
    fn apply_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let rho = random_density_matrix(3, &mut rng);
        assert!(QuantumChannel::identity(3).apply(&rho).unwrap().max_abs_diff(&rho).unwrap() < 1e-15);

        let zero = ComplexMatrix::diagonal(&[ONE, ZERO]);
        let mixed = QuantumChannel::bitflip(0.5).unwrap().apply(&zero).unwrap();
        let half = ComplexMatrix::identity(2).scale(C64::new(0.5, 0.0));
        assert!(mixed.max_abs_diff(&half).unwrap() < 1e-15);

        assert!(matches!(QuantumChannel::identity(2).apply(&rho), Err(Error::Shape(_))));
        let not_unit = ComplexMatrix::identity(2);
        assert!(matches!(QuantumChannel::identity(2).apply(&not_unit), Err(Error::Validation(_))));
    }

    #[test]
    fn phase_error_leaves_populations_untouched() {
        for &p in &[0.0, 0.2, 0.5, 0.9, 1.0] {
            let c = compose(&QuantumChannel::phaseflip(p).unwrap(), &h_channel()).unwrap();
            for &phi in &[0.0, 0.4, 1.3, 2.9, 4.4] {
                let psi = [C64::from_polar(1.0, phi) / 2f64.sqrt(), C64::new(1.0 / 2f64.sqrt(), 0.0)];
                let rho = ComplexMatrix::from_fn(2, 2, |i, j| psi[i] * psi[j].conj());
                let out = c.apply(&rho).unwrap();
                assert!((out.get(0, 0).re - (phi / 2.0).cos().powi(2)).abs() < 1e-12);
                assert!((out.get(1, 1).re - (phi / 2.0).sin().powi(2)).abs() < 1e-12);
                // coefficient of |1><0|; Z flips it with weight 1 - p
                let coherence = C64::new(0.0, (p - 0.5) * phi.sin());
                assert!((out.get(1, 0) - coherence).norm() < 1e-12);
                assert!((out.get(0, 1) + coherence).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn embedded_channel_matches_kron() {
        let c = QuantumChannel::bitflip(0.2).unwrap();
        let e = embed_qubit_channel(&c, 1, 3).unwrap();
        assert_eq!(e.dim(), 8);
        let expect = ComplexMatrix::identity(2).kron(&c.kraus()[1]).kron(&ComplexMatrix::identity(2));
        assert_eq!(e.kraus()[1], expect);
        assert!(embed_qubit_channel(&c, 3, 3).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn constructors_are_trace_preserving(p in 0.0f64..=1.0) {
                prop_assert!(QuantumChannel::bitflip(p).unwrap().is_trace_preserving());
                prop_assert!(QuantumChannel::phaseflip(p).unwrap().is_trace_preserving());
            }

            #[test]
            fn compose_is_associative_and_order_free(seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_channel(3, 2, &mut rng);
                let b = random_channel(3, 2, &mut rng);
                let c = random_channel(3, 1, &mut rng);
                let left = compose(&compose(&c, &b).unwrap(), &a).unwrap();
                let right = compose(&c, &compose(&b, &a).unwrap()).unwrap();
                let (ml, mr) = (kraus_measure(&left), kraus_measure(&right));
                prop_assert!((ml - mr).abs() < 1e-9);
                let mut reversed = left.kraus().to_vec();
                reversed.reverse();
                let shuffled = QuantumChannel::new(reversed).unwrap();
                prop_assert!((kraus_measure(&shuffled) - ml).abs() < 1e-9);
                prop_assert!(left.is_trace_preserving());
            }

            #[test]
            fn apply_preserves_trace_hermiticity_positivity(seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let c = random_channel(2, 3, &mut rng);
                let rho = random_density_matrix(2, &mut rng);
                let out = c.apply(&rho).unwrap();
                prop_assert!((out.trace().unwrap() - ONE).norm() < 1e-9);
                prop_assert!(out.is_hermitian(1e-12).unwrap());
                // 2x2 Hermitian: eigenvalues from trace and determinant
                let (a, d) = (out.get(0, 0).re, out.get(1, 1).re);
                let det = a * d - out.get(0, 1).norm_sqr();
                let disc = ((a - d) * (a - d) / 4.0 + out.get(0, 1).norm_sqr()).sqrt();
                prop_assert!((a + d) / 2.0 - disc >= -1e-9);
                prop_assert!(det >= -1e-9);
            }
        }
    }
}
