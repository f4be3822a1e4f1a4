mod common;

use common::random_state;
use proptest::prelude::*;
use sympent_core::entropy::EntropyOptions;
use sympent_core::{
    entanglement_entropy, ground_state_covariance, mode_entropy, purity_check, random_symplectic,
    thermal_parameter, two_oscillator_model, Beta, CovarianceMatrix, LogBase, ModePartition,
    SymplecticMatrix,
};

/// Entropy of sigma = 1/sqrt(3), frozen from a 40-digit sum
/// `-sum p_n log2 p_n`, `p_n = (1 - e^-b) e^(-n b)`, n <= 400.
const SIGMA_INV_SQRT3_BITS: f64 = 0.401_413_546_085_728_7;

#[test]
fn two_oscillator_entanglement() {
    let g = ground_state_covariance(&two_oscillator_model(1.0, 1.0, 2.0).unwrap()).unwrap();
    let p = ModePartition::parse("1|2", 2).unwrap();
    let r = entanglement_entropy(&g, &p, &EntropyOptions::default()).unwrap();
    assert!((r.spectrum_a.values()[0] - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    assert!((r.total_bits - SIGMA_INV_SQRT3_BITS).abs() < 1e-12);
    assert_eq!(r.s_count, 1);
    assert!(
        (mode_entropy(1.0 / 3f64.sqrt(), LogBase::Bits).unwrap() - SIGMA_INV_SQRT3_BITS).abs()
            < 1e-14
    );
}

#[test]
fn uncoupled_oscillators_are_unentangled() {
    let g = ground_state_covariance(&two_oscillator_model(1.0, 1.0, 0.0).unwrap()).unwrap();
    let p = ModePartition::parse("1|2", 2).unwrap();
    let r = entanglement_entropy(&g, &p, &EntropyOptions::default()).unwrap();
    assert_eq!(r.total_bits, 0.0);
    assert_eq!(r.s_count, 0);
    assert_eq!(r.modes[0].beta, Beta::Infinite);
}

#[test]
fn pure_states_from_any_lambda() {
    for lambda in [0.0, 0.5, 2.0, 8.0] {
        let g = ground_state_covariance(&two_oscillator_model(1.0, 1.0, lambda).unwrap()).unwrap();
        assert!(purity_check(&g, 1e-10).unwrap());
    }
}

#[test]
fn local_symplectic_operations_preserve_entanglement() {
    let g = ground_state_covariance(
        &sympent_core::chain_model(5, 1.0, 1.0, 1.5, sympent_core::Boundary::Open).unwrap(),
    )
    .unwrap();
    let p = ModePartition::parse("1,2|3,4,5", 5).unwrap();
    let before = entanglement_entropy(&g, &p, &EntropyOptions::default()).unwrap();
    for seed in 0..10u64 {
        let s = SymplecticMatrix::direct_sum(
            &random_symplectic(2, seed).unwrap(),
            &random_symplectic(3, seed + 100).unwrap(),
        );
        let after =
            entanglement_entropy(&g.transformed(&s).unwrap(), &p, &EntropyOptions::default())
                .unwrap();
        assert!((before.total_bits - after.total_bits).abs() < 1e-8);
    }
}

#[test]
fn mixed_global_state_reports_subsystem_entropy() {
    let (g, _) = random_state(3, 2, 1.0, 2.0);
    assert!(!purity_check(&g, 1e-8).unwrap());
    let p = ModePartition::parse("1|2,3", 3).unwrap();
    let opts = EntropyOptions {
        with_complement: true,
        base: LogBase::Nats,
        ..Default::default()
    };
    let r = entanglement_entropy(&g, &p, &opts).unwrap();
    assert!(r.total_bits > 0.0);
    assert!((r.total - r.total_bits * std::f64::consts::LN_2).abs() < 1e-14);
}

#[test]
fn report_json_fields() {
    let g = ground_state_covariance(&two_oscillator_model(1.0, 1.0, 2.0).unwrap()).unwrap();
    let p = ModePartition::parse("1|2", 2).unwrap();
    let r = entanglement_entropy(&g, &p, &EntropyOptions::default()).unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    assert_eq!(v["partition"], "1|2");
    assert_eq!(v["s_count"], 1);
    for key in ["sigma", "n_bar", "beta", "entropy_bits"] {
        assert!(v["modes"][0].get(key).is_some(), "{key}");
    }
    assert!(v["total_bits"].is_f64());
    assert!(v["spectrum_a"].is_array());
    let vac = entanglement_entropy(
        &CovarianceMatrix::vacuum(2).unwrap(),
        &p,
        &EntropyOptions::default(),
    )
    .unwrap();
    let v = serde_json::to_value(&vac).unwrap();
    assert_eq!(v["modes"][0]["beta"], "inf");
}

#[test]
fn beta_of_one_quantum() {
    assert!((thermal_parameter(1.5).unwrap().value() - std::f64::consts::LN_2).abs() < 1e-15);
}

proptest! {
    #[test]
    fn monotone_in_sigma(a in 0.5f64..50.0, b in 0.5f64..50.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(mode_entropy(lo, LogBase::Bits).unwrap() <= mode_entropy(hi, LogBase::Bits).unwrap());
    }

    #[test]
    fn bits_are_nats_over_ln2(s in 0.5f64..1e4) {
        let bits = mode_entropy(s, LogBase::Bits).unwrap();
        let nats = mode_entropy(s, LogBase::Nats).unwrap();
        prop_assert_eq!(bits, nats / std::f64::consts::LN_2);
    }

    #[test]
    fn nonnegative_and_zero_only_at_vacuum(s in 0.5f64..100.0) {
        let e = mode_entropy(s, LogBase::Bits).unwrap();
        prop_assert!(e >= 0.0);
        if s > 0.5 + 1e-6 {
            prop_assert!(e > 0.0);
        }
    }
}

#[test]
fn continuous_at_vacuum() {
    let mut prev = 0.0;
    for k in (3..=9).rev() {
        let e = mode_entropy(0.5 + 10f64.powi(-k), LogBase::Bits).unwrap();
        assert!(e >= prev);
        prev = e;
    }
    assert!(mode_entropy(0.5 + 1e-8, LogBase::Bits).unwrap() < 3e-7);
}
