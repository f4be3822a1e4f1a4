#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sympent_core::{random_symplectic, CovarianceMatrix};

/// Random valid state: symplectic spectrum drawn from `[lo, hi]`, then a
/// random symplectic congruence.
pub fn random_state(n: usize, seed: u64, lo: f64, hi: f64) -> (CovarianceMatrix, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let sigmas: Vec<f64> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
    let s = random_symplectic(n, seed).unwrap();
    (
        CovarianceMatrix::from_normal_form(&sigmas, &s).unwrap(),
        sigmas,
    )
}

pub fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}
