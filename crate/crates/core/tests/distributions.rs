use proptest::prelude::*;
use qentropy::{binary_entropy, make_distribution, Distribution, Family};

fn prob_vector() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, 1..40).prop_filter_map("nonzero mass", |w| {
        let z: f64 = w.iter().sum();
        (z > 1e-6).then(|| w.iter().map(|x| x / z).collect())
    })
}

proptest! {
    #[test]
    fn entropy_lies_between_zero_and_log_n(p in prob_vector()) {
        let d = Distribution::new(p).unwrap();
        let h = d.shannon_entropy();
        prop_assert!(h >= -1e-12);
        prop_assert!(h <= (d.n() as f64).log2() + 1e-12);
    }

    #[test]
    fn entropy_is_permutation_invariant(p in prob_vector(), rot in 0usize..40) {
        let mut q = p.clone();
        let len = q.len();
        q.rotate_left(rot % len);
        q.reverse();
        let a = Distribution::new(p).unwrap().shannon_entropy();
        let b = Distribution::new(q).unwrap().shannon_entropy();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn zero_padding_leaves_entropy_unchanged(p in prob_vector(), pad in 0usize..10) {
        let h = Distribution::new(p.clone()).unwrap().shannon_entropy();
        let mut padded = p;
        padded.extend(std::iter::repeat_n(0.0, pad));
        prop_assert!((Distribution::new(padded).unwrap().shannon_entropy() - h).abs() < 1e-14);
    }

    #[test]
    fn text_round_trip_is_exact(p in prob_vector()) {
        let d = Distribution::new(p).unwrap();
        prop_assert_eq!(Distribution::<f64>::parse(&d.to_text()).unwrap(), d);
    }

    #[test]
    fn binary_entropy_symmetric_and_bounded(x in 0.0f64..=1.0) {
        let a = binary_entropy(x).unwrap();
        let b = binary_entropy(1.0 - x).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((0.0..=1.0 + 1e-15).contains(&a));
    }

    #[test]
    fn families_are_normalized(n in 2usize..300, s in 0.2f64..3.0) {
        for fam in [Family::Uniform, Family::Zipf { exponent: s }, Family::Dyadic, Family::TwoPoint { mass: 0.64 }] {
            let d = make_distribution::<f64>(&fam, n).unwrap();
            prop_assert_eq!(d.n(), n);
            let total: f64 = d.probs().iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn uniform_entropy_is_log_n() {
    for n in [2usize, 8, 64, 1024] {
        let d = make_distribution::<f64>(&Family::Uniform, n).unwrap();
        assert!((d.shannon_entropy() - (n as f64).log2()).abs() < 1e-12);
    }
}

#[test]
fn dyadic_entropy_closed_form() {
    // Σ_{i<n} i 2^-i + (n-1) 2^-(n-1) = 2 - 2^{2-n}.
    for n in [2usize, 5, 20] {
        let d = make_distribution::<f64>(&Family::Dyadic, n).unwrap();
        let want = 2.0 - 0.5f64.powi(n as i32 - 2);
        assert!((d.shannon_entropy() - want).abs() < 1e-12, "n={n}");
    }
}
