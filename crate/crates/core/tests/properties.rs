mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use structfac_core::correl::{collective_spin_sq, two_point, verify_collective_identity};
use structfac_core::noise::{
    collective_threshold, kraus_crosscheck, noisy_sigma, NoiseModel, KRAUS_SITE_CAP,
};
use structfac_core::qstate::{
    dicke, dicke_ghz_superposition, ghz_superposition, mix_with_white_noise, phased_dicke,
    product_density,
};
use structfac_core::sampling::{estimate_witness, ShotPlan};
use structfac_core::witness::{detects, sigma_operator, sigma_value, witness_value, DETECTION_TOL};
use structfac_core::{Branch, PauliAxis, WitnessSpec, C64};

use common::*;

#[test]
fn fast_path_matches_dense_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=6 {
        for _ in 0..3 {
            let s = random_state(&mut rng, n);
            let rho = s.to_density().unwrap();
            for i in 0..n {
                for j in i + 1..n {
                    for a in PauliAxis::ALL {
                        for b in PauliAxis::ALL {
                            let op = dense_string(n, &[(i, a), (j, b)]);
                            let oracle = expectation(s.amplitudes(), &op).re;
                            let fast = two_point(&s, i, j, a, b).unwrap();
                            let mixed = two_point(&rho, i, j, a, b).unwrap();
                            assert!((fast - oracle).abs() < 1e-12);
                            assert!((mixed - oracle).abs() < 1e-12);
                            assert!(fast.abs() <= 1.0 + 1e-12);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn operator_and_correlator_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 2..=6 {
        for _ in 0..5 {
            let spec = random_spec(&mut rng, n);
            let s = random_state(&mut rng, n);
            let op = sigma_operator(&spec).unwrap();
            let via_op = expectation(s.amplitudes(), &op).re;
            let via_kron = expectation(s.amplitudes(), &dense_sigma(&spec)).re;
            let via_corr = sigma_value(&s, &spec).unwrap();
            assert!((via_op - via_corr).abs() < 1e-10);
            assert!((via_kron - via_corr).abs() < 1e-10);
            assert!((&op - op.adjoint()).norm() < 1e-12);
        }
    }
}

#[test]
fn collective_identity_on_mixed_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 1..=5 {
        let s = random_state(&mut rng, n);
        let rho = mix_with_white_noise(&s, 0.3).unwrap();
        for axis in PauliAxis::ALL {
            let (lhs, rhs) = verify_collective_identity(&rho, axis).unwrap();
            assert!((lhs - rhs).abs() < 1e-10);
            // the J route must also agree with an explicit dense J^2
            let mut j = nalgebra::DMatrix::from_element(1 << n, 1 << n, C64::new(0.0, 0.0));
            for site in 0..n {
                j += dense_string(n, &[(site, axis)]) * C64::new(0.5, 0.0);
            }
            let dense = rho.expectation_dense(&(&j * &j)).re;
            assert!((collective_spin_sq(&rho, axis) - dense).abs() < 1e-12);
        }
    }
}

#[test]
fn kraus_factor_law_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for step in 0..=10 {
        let q = step as f64 / 10.0;
        let n = rng.random_range(2..=6);
        let s = random_state(&mut rng, n);
        let spec = random_spec(&mut rng, n);
        let (a, b) = kraus_crosscheck(&s, &spec, q, KRAUS_SITE_CAP).unwrap();
        assert!((a - b).abs() < 1e-12, "q={q}: {a} vs {b}");
    }
}

#[test]
fn collective_noise_is_affine_and_monotone() {
    let s = phased_dicke(4, 2).unwrap();
    let spec = WitnessSpec::new(4, std::f64::consts::PI, [1.0; 3]).unwrap();
    let clean = sigma_value(&s, &spec).unwrap();
    let mut last = f64::INFINITY;
    for step in 0..=20 {
        let p = step as f64 / 20.0;
        let v = noisy_sigma(&s, &spec, NoiseModel::collective(p).unwrap()).unwrap();
        let dense = sigma_value(&mix_with_white_noise(&s, p).unwrap(), &spec).unwrap();
        assert!((v - dense).abs() < 1e-12);
        assert!((v - (1.0 - p) * clean).abs() < 1e-12);
        assert!(v <= last);
        last = v;
        let q = noisy_sigma(&s, &spec, NoiseModel::individual(p).unwrap()).unwrap();
        assert!(q <= clean + 1e-15);
    }
}

#[test]
fn threshold_matches_noise_scan() {
    for (state, spec) in [
        (
            dicke(4, 2).unwrap(),
            WitnessSpec::new(4, 0.0, [1.0, 1.0, -1.0]).unwrap(),
        ),
        (
            phased_dicke(4, 2).unwrap(),
            WitnessSpec::new(4, std::f64::consts::PI, [1.0; 3]).unwrap(),
        ),
    ] {
        let p_star = collective_threshold(&state, &spec).unwrap();
        for step in 0..=1000 {
            let p = step as f64 * 1e-3;
            let rho = mix_with_white_noise(&state, p).unwrap();
            let detected = detects(&rho, &spec, DETECTION_TOL).unwrap();
            // near the threshold the 1e-9 margin decides; stay clear of it
            if (p - p_star).abs() > 1e-6 {
                assert_eq!(detected, p < p_star, "p={p} p*={p_star}");
            }
        }
    }
}

#[test]
fn sampling_is_unbiased() {
    let s = phased_dicke(4, 2).unwrap();
    let spec = WitnessSpec::new(4, std::f64::consts::PI, [1.0; 3]).unwrap();
    let exact = witness_value(&s, &spec).unwrap();
    let (mut sum, mut var) = (0.0, 0.0);
    for seed in 0..100 {
        let e = estimate_witness(&s, &spec, &ShotPlan::new(500, seed).unwrap()).unwrap();
        assert!(e.settings <= 3);
        sum += e.estimate;
        var += e.std_error * e.std_error;
    }
    let mean = sum / 100.0;
    let pooled = var.sqrt() / 100.0;
    assert!(
        (mean - exact).abs() < 3.0 * pooled,
        "mean {mean} exact {exact} se {pooled}"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn superpositions_are_normalized(theta in -10.0f64..10.0, plus in any::<bool>()) {
        let branch = if plus { Branch::Plus } else { Branch::Minus };
        for s in [ghz_superposition(theta, branch), dicke_ghz_superposition(theta, branch)] {
            let norm: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
            prop_assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sigma_is_even_in_k(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_state(&mut rng, n);
        let spec = random_spec(&mut rng, n);
        let plus = sigma_value(&s, &spec).unwrap();
        let minus = sigma_value(&s, &spec.at_k(-spec.k())).unwrap();
        prop_assert_eq!(plus, minus);
    }

    #[test]
    fn white_noise_is_affine(seed in any::<u64>(), p in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_state(&mut rng, 2);
        let rho0 = mix_with_white_noise(&s, 0.0).unwrap();
        let rho1 = mix_with_white_noise(&s, 1.0).unwrap();
        let rho = mix_with_white_noise(&s, p).unwrap();
        let expected = rho0.entries() * C64::new(1.0 - p, 0.0) + rho1.entries() * C64::new(p, 0.0);
        prop_assert!((rho.entries() - expected).norm() < 1e-14);
        let ev = rho.eigenvalues();
        prop_assert!(ev[0] >= -1e-10);
    }

    #[test]
    fn product_states_never_violate(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let blochs: Vec<_> = (0..n).map(|_| random_bloch(&mut rng)).collect();
        let rho = product_density(&blochs).unwrap();
        let spec = random_spec(&mut rng, n);
        prop_assert!(witness_value(&rho, &spec).unwrap() >= -1e-9);
        prop_assert_eq!(rho.n_qubits(), n);
    }
}
