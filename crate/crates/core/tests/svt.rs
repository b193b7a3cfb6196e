use proptest::prelude::*;
use qentropy::separation::{branch_mass, cascade_state, query_cost_uk, BranchSimulator};
use qentropy::{
    apply_svt, make_distribution, make_sk, power_sum, BoundedPoly, CascadeConfig, CoefficientTable, Distribution,
    Family, OracleModel, StructuredState,
};

fn prob_vector() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, 2..24).prop_filter_map("nonzero mass", |w| {
        let z: f64 = w.iter().sum();
        (z > 1e-6).then(|| w.iter().map(|x| x / z).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn svt_conserves_norm(p in prob_vector(), k in 1usize..5) {
        let mut o = OracleModel::new(Distribution::new(p).unwrap());
        let poly = make_sk(k, 0.05).unwrap();
        let f = apply_svt(&mut o, &poly).unwrap();
        prop_assert!(f.norm_defect() < 1e-12);
        prop_assert!(power_sum(&f) <= 1.0 + 1e-12);
        prop_assert_eq!(o.query_count(), poly.degree() as u64);
    }

    #[test]
    fn identity_svt_gives_collision_probability(p in prob_vector()) {
        let want: f64 = p.iter().map(|x| x * x).sum();
        let mut o = OracleModel::new(Distribution::new(p).unwrap());
        let f = apply_svt(&mut o, &BoundedPoly::identity()).unwrap();
        prop_assert!((power_sum(&f) - want).abs() < 1e-12);
    }

    #[test]
    fn cascade_state_is_normalized(p in prob_vector(), k in 1usize..6) {
        let cfg = CascadeConfig::new(6, 0.1).unwrap();
        let d = Distribution::new(p).unwrap();
        let table = CoefficientTable::build(&cfg, &d.amplitudes()).unwrap();
        let s = StructuredState::from_table(&table, d.probs(), k).unwrap();
        prop_assert!((s.total_norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn table_matches_branch_simulator() {
    let cfg = CascadeConfig::new(8, 0.1).unwrap();
    for (fam, n) in [
        (Family::Uniform, 8),
        (Family::Zipf { exponent: 1.0 }, 64),
        (Family::TwoPoint { mass: 0.64 }, 4),
        (Family::Dyadic, 16),
    ] {
        let d = make_distribution::<f64>(&fam, n).unwrap();
        let xs = d.amplitudes();
        let table = CoefficientTable::build(&cfg, &xs).unwrap();
        let mut sim = BranchSimulator::new(d.probs());
        for k in 1..=8 {
            sim.apply_level(cfg.step_poly(k).unwrap(), &xs).unwrap();
            let s = StructuredState::from_table(&table, d.probs(), k).unwrap();
            for j in 1..=k {
                for i in 0..n {
                    assert!(
                        (s.branches[j - 1][i] - sim.amplitude(j, i)).abs() < 1e-12,
                        "{fam} k={k} j={j} i={i}"
                    );
                }
                assert!((branch_mass(&s, j).unwrap() - sim.branch_mass(j)).abs() < 1e-12);
            }
            for i in 0..n {
                assert!((s.residual[i] - sim.amplitude(0, i)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn cascade_charges_accumulated_degrees() {
    let cfg = CascadeConfig::new(5, 0.1).unwrap();
    let mut o = OracleModel::new(make_distribution(&Family::Uniform, 16).unwrap());
    let mut expect = 0;
    for k in 1..=5 {
        cascade_state(&mut o, &cfg, k).unwrap();
        expect += query_cost_uk(&cfg, k).unwrap();
        assert_eq!(o.query_count(), expect);
    }
    let costs: Vec<u64> = (1..=5).map(|k| query_cost_uk(&cfg, k).unwrap()).collect();
    assert!(costs.windows(2).all(|w| w[1] > w[0]));
}
