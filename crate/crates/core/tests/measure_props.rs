use itf_core::channels::QuantumChannel;
use itf_core::gates::walsh;
use itf_core::measure::ipr_sum;
use itf_core::random::{random_channel, random_unitary};
use itf_core::{
    apply_gate, interference_kraus, interference_superop, interference_unitary, phase_sensitivity_estimate,
    ComplexMatrix, GateSpec, C64,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn phases(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let d: Vec<C64> = (0..n).map(|_| C64::from_polar(1.0, rng.random::<f64>() * 6.3)).collect();
    ComplexMatrix::diagonal(&d)
}

fn shuffled(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    ComplexMatrix::permutation(&p).unwrap()
}

fn conjugate(c: &QuantumChannel, p: &ComplexMatrix) -> QuantumChannel {
    let kraus = c
        .kraus()
        .iter()
        .map(|e| p.matmul(e).unwrap().matmul(&p.dagger()).unwrap())
        .collect();
    QuantumChannel::new(kraus).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitary_bound_and_invariances(seed in any::<u64>(), log_n in 1usize..=4) {
        let n = 1 << log_n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unitary(n, &mut rng);
        let i = interference_unitary(&u).unwrap();
        prop_assert!(i >= 0.0 && i <= (n - 1) as f64 + 1e-9);
        prop_assert!((i - (n as f64 - ipr_sum(&u))).abs() < 1e-12);

        let permuted = shuffled(n, &mut rng).matmul(&u).unwrap().matmul(&shuffled(n, &mut rng)).unwrap();
        prop_assert!((interference_unitary(&permuted).unwrap() - i).abs() < 1e-9);
        let phased = phases(n, &mut rng).matmul(&u).unwrap().matmul(&phases(n, &mut rng)).unwrap();
        prop_assert!((interference_unitary(&phased).unwrap() - i).abs() < 1e-9);
        prop_assert!((interference_unitary(&u.dagger()).unwrap() - i).abs() < 1e-9);
    }

    #[test]
    fn channel_permutation_invariance(seed in any::<u64>(), n in 2usize..=5, l in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_channel(n, l, &mut rng);
        let p = shuffled(n, &mut rng);
        let d = conjugate(&c, &p);
        prop_assert!((interference_kraus(&c).unwrap() - interference_kraus(&d).unwrap()).abs() < 1e-9);
        let sc = interference_superop(&c.to_superop().unwrap()).unwrap();
        let sd = interference_superop(&d.to_superop().unwrap()).unwrap();
        prop_assert!((sc - sd).abs() < 1e-9);
    }

    #[test]
    fn tensor_scaling(seed in any::<u64>(), n in 2usize..=3, l in 1usize..=3, m in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_channel(n, l, &mut rng);
        let big = c.tensor_extend(m).unwrap();
        let lhs = interference_kraus(&big).unwrap();
        prop_assert!((lhs - m as f64 * interference_kraus(&c).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn cross_form_equivalence(seed in any::<u64>(), n in 2usize..=8, l in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_channel(n, l, &mut rng);
        let k = interference_kraus(&c).unwrap();
        let s = interference_superop(&c.to_superop().unwrap()).unwrap();
        prop_assert!((k - s).abs() < 1e-9);
        let u = random_unitary(n, &mut rng);
        let uc = QuantumChannel::unitary(u.clone()).unwrap();
        let iu = interference_unitary(&u).unwrap();
        prop_assert!((iu - interference_kraus(&uc).unwrap()).abs() < 1e-9);
        prop_assert!((iu - interference_superop(&uc.to_superop().unwrap()).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn hadamard_counting(n in 1usize..=8, mask in any::<u16>()) {
        let qubits: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
        let mut u = ComplexMatrix::identity(1 << n);
        for &q in &qubits {
            u = apply_gate(&u, &GateSpec::H(q), n).unwrap();
        }
        let expected = (1u32 << n) as f64 - (1u32 << (n - qubits.len())) as f64;
        prop_assert!((interference_unitary(&u).unwrap() - expected).abs() < 1e-9);
    }
}

#[test]
fn equality_at_maximum_needs_equipartition() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2usize, 4, 8, 16] {
        let w = walsh(n.trailing_zeros() as usize).unwrap();
        assert!((interference_unitary(&w).unwrap() - (n - 1) as f64).abs() < 1e-9);
        let u = random_unitary(n, &mut rng);
        assert!(interference_unitary(&u).unwrap() < (n - 1) as f64 - 1e-6);
    }
}

#[test]
fn monte_carlo_matches_random_channels() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for (n, l, seed) in [(2, 2, 1u64), (3, 2, 2), (4, 1, 3)] {
        let c = random_channel(n, l, &mut rng);
        let exact = interference_kraus(&c).unwrap();
        let est = phase_sensitivity_estimate(&c, 10_000, seed).unwrap();
        assert!(est.c_estimate >= -3.0 * est.stderr);
        assert!(
            (est.interference() - exact).abs() < 3.0 * est.interference_stderr(),
            "N = {n}: {} vs {exact} +- {}",
            est.interference(),
            est.interference_stderr()
        );
    }
}
