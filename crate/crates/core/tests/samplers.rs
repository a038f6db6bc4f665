//! Monte Carlo checks of the gate samplers against known moments.

use lxeb_core::ensembles::{
    sample_clifford_two_qubit, sample_haar_orthogonal4, sample_haar_su4, two_qubit_cliffords,
    IDENTITY_INDEX, TWO_QUBIT_CLIFFORD_ORDER,
};
use lxeb_core::estimators::{mean_and_standard_error, porter_thomas_histogram};
use lxeb_core::{run_circuit, EnsembleSpec, GateEnsemble, SeedPlan};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const N: usize = 100_000;

fn within(values: &[f64], expected: f64, sigmas: f64) {
    let m = mean_and_standard_error(values);
    assert!(
        (m.mean - expected).abs() <= sigmas * m.standard_error,
        "mean {} vs {expected} (se {})",
        m.mean,
        m.standard_error
    );
}

#[test]
fn haar_unitary_entry_moments() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut first = Vec::with_capacity(N);
    let mut second = Vec::with_capacity(N);
    for _ in 0..N {
        let u = sample_haar_su4(&mut rng);
        let p = u.get(0, 0).norm_sqr();
        first.push(p);
        second.push(p * p);
    }
    within(&first, 0.25, 5.0);
    within(&second, 0.1, 5.0);
}

#[test]
fn haar_orthogonal_entry_moments() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut second = Vec::with_capacity(N);
    for _ in 0..N {
        let o = sample_haar_orthogonal4(&mut rng);
        assert_eq!(o.max_imag(), 0.0);
        second.push(o.get(0, 0).norm_sqr().powi(2));
    }
    within(&second, 0.125, 5.0);
}

#[test]
fn first_moment_is_isotropic() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut cols = vec![Vec::with_capacity(N / 10); 16];
    for _ in 0..N / 10 {
        let u = sample_haar_su4(&mut rng);
        for (i, c) in cols.iter_mut().enumerate() {
            c.push(u.get(i / 4, i % 4).norm_sqr());
        }
    }
    for c in &cols {
        within(c, 0.25, 5.0);
    }
}

#[test]
fn clifford_identity_frequency() {
    assert_eq!(two_qubit_cliffords().len(), TWO_QUBIT_CLIFFORD_ORDER);
    let identity = &two_qubit_cliffords()[IDENTITY_INDEX];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let draws = 2_000_000u64;
    let mut hits = 0u64;
    for _ in 0..draws {
        if &sample_clifford_two_qubit(&mut rng) == identity {
            hits += 1;
        }
    }
    let p = 1.0 / TWO_QUBIT_CLIFFORD_ORDER as f64;
    let sd = (draws as f64 * p * (1.0 - p)).sqrt();
    assert!((hits as f64 - draws as f64 * p).abs() <= 5.0 * sd, "{hits} identity draws");
}

#[test]
fn porter_thomas_low_bin() {
    let spec = EnsembleSpec::brickwork(GateEnsemble::HaarUnitary, 10, 30);
    let dists: Vec<_> = (0..40)
        .map(|i| run_circuit(&spec.build(&SeedPlan::new(9, i)).unwrap()).unwrap().distribution())
        .collect();
    let h = porter_thomas_histogram(&dists, 100, 10.0).unwrap();
    let expected = 1.0 - (-0.1f64).exp();
    assert!((h.mass(0) - expected).abs() < 0.01, "{} vs {expected}", h.mass(0));
}

#[test]
fn sampling_is_reproducible() {
    let mut a = ChaCha8Rng::seed_from_u64(5);
    let mut b = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        assert_eq!(sample_haar_su4(&mut a), sample_haar_su4(&mut b));
    }
}
