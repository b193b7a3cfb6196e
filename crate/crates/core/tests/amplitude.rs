use proptest::prelude::*;
use qentropy::amplitude::{
    amplification_rounds, best_delta, fixed_point_amplify, fixed_point_amplify_rounds, fixed_point_closed_form,
    grid_size_for, qae_distribution, qae_error_bound,
};

#[test]
fn qae_coverage_on_a_dense_grid() {
    let floor = 8.0 / std::f64::consts::PI.powi(2);
    for m in [16usize, 64, 256] {
        for i in 0..50 {
            let a = i as f64 / 49.0;
            let d = qae_distribution(a, m).unwrap();
            let total: f64 = d.probs.iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
            let mass = d.mass_within(a, qae_error_bound(a, m));
            assert!(mass >= floor - 1e-9, "a={a} M={m} mass={mass}");
        }
    }
}

#[test]
fn grid_chooser_is_minimal() {
    for (a, t) in [(0.5, 0.01), (0.1, 0.003), (1e-4, 1e-3)] {
        let m = grid_size_for(a, t).unwrap();
        assert!(qae_error_bound(a.min(0.5), m) <= t);
        if m > 2 {
            assert!(qae_error_bound(a.min(0.5), m / 2) > t);
        }
    }
}

#[test]
fn overcooking_is_bounded() {
    // Once enough rounds are used the deficit never exceeds delta^2, and the
    // guaranteed floor only improves with more rounds.
    let delta = 0.1;
    for lambda in [0.3, 0.05, 0.01] {
        let l0 = amplification_rounds(lambda, delta, 1.0);
        let mut prev_floor = 0.0;
        for l in (l0..l0 + 40).step_by(2) {
            let f = fixed_point_amplify_rounds(lambda, delta, l).unwrap().fidelity_sq;
            assert!(f >= 1.0 - delta * delta - 1e-12, "lambda={lambda} L={l} f={f}");
            let floor = 1.0 - best_delta(lambda, l).powi(2);
            assert!(floor >= prev_floor - 1e-12);
            prev_floor = floor;
        }
    }
}

#[test]
fn amplification_rounds_scale_as_inverse_root() {
    let a = fixed_point_amplify(0.01, 0.1, 1.0).unwrap();
    let b = fixed_point_amplify(0.0025, 0.1, 1.0).unwrap();
    let r = b.rounds as f64 / a.rounds as f64;
    assert!((1.8..=2.2).contains(&r), "{r}");
    assert!(a.fidelity_sq >= 0.99 && b.fidelity_sq >= 0.99);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simulation_equals_closed_form(lambda in 0.001f64..1.0, delta in 0.01f64..0.9, half in 0usize..60) {
        let l = 2 * half + 1;
        let sim = fixed_point_amplify_rounds(lambda, delta, l).unwrap().fidelity_sq;
        let closed = fixed_point_closed_form(lambda, delta, l);
        prop_assert!((sim - closed).abs() < 1e-9, "sim {} closed {}", sim, closed);
    }

    #[test]
    fn qae_law_is_a_distribution(a in 0.0f64..=1.0, e in 1u32..9) {
        let d = qae_distribution(a, 1 << e).unwrap();
        let total: f64 = d.probs.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        prop_assert!(d.probs.iter().all(|&p| p >= -1e-15));
    }
}
