#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use starkdyn_core::spectral::{ReducedParams, Spectrum};

pub fn rng(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// Draw from Omega in [0.1, 5], gamma1, gamma2 in [0, 2], delta in [-5, 5],
/// with a random drive frequency and kinetic offset.
pub fn random_params(rng: &mut SplitMix64) -> ReducedParams {
    let mut p = ReducedParams::new(
        rng.gen_range(0.1..=5.0),
        rng.gen_range(0.0..=2.0),
        rng.gen_range(0.0..=2.0),
        rng.gen_range(-5.0..=5.0),
    );
    p.omega_l = rng.gen_range(0.0..=10.0);
    p.e_plus = rng.gen_range(-2.0..=2.0);
    p.p0 = rng.gen_range(-2.0..=2.0);
    p.hbar_k = rng.gen_range(0.1..=2.0);
    p
}

pub fn reduced(omega: f64, g1: f64, g2: f64, delta: f64) -> Spectrum {
    Spectrum::from_reduced(&ReducedParams::new(omega, g1, g2, delta)).unwrap()
}

pub fn grid(t_max: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect()
}

/// `|a - b| <= rel * max(|a|, |b|) + abs`
pub fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + abs
}

/// Least-squares slope of `y` against `x`.
pub fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
