//! Exhaustive-enumeration oracle: every law the library computes over
//! shells is recomputed here by explicit summation over all 2^N
//! configurations, with energies taken from the literal pair products
//! rather than the library's closed forms.

use std::collections::BTreeMap;

use cwmarket::{DistributionTable, ShellLabel};

/// Spins of configuration `mask`: bit set means +1.
pub fn spins_of(mask: u64, n: usize) -> Vec<i64> {
    (0..n)
        .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
        .collect()
}

/// Literal pair sum over i < j.
pub fn raw_pair_sum(mask: u64, n: usize) -> i64 {
    let spins = spins_of(mask, n);
    let mut total = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            total += spins[i] * spins[j];
        }
    }
    total
}

fn scaled_energy(mask: u64, n: usize) -> f64 {
    -(raw_pair_sum(mask, n) as f64) / n as f64
}

/// Uniform law of the pair sum: counts over all configurations.
pub fn brute_independent_law(n: usize) -> Vec<(i64, f64)> {
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    for mask in 0..(1u64 << n) {
        *counts.entry(raw_pair_sum(mask, n)).or_default() += 1;
    }
    let total = (1u64 << n) as f64;
    counts
        .into_iter()
        .map(|(t, c)| (t, c as f64 / total))
        .collect()
}

/// Static law with per-configuration weight exp(beta T / N).
pub fn brute_static_gibbs_law(n: usize, beta: f64) -> Vec<(i64, f64)> {
    let mut weights: BTreeMap<i64, f64> = BTreeMap::new();
    for mask in 0..(1u64 << n) {
        let t = raw_pair_sum(mask, n);
        *weights.entry(t).or_default() += (beta * t as f64 / n as f64).exp();
    }
    let z: f64 = weights.values().sum();
    weights.into_iter().map(|(t, w)| (t, w / z)).collect()
}

/// Conditional law of the next pair sum given the previous configuration,
/// from per-configuration weights exp((beta/N) H(x) H(prev)).
pub fn brute_conditional_shell_law(n: usize, beta: f64, prev_mask: u64) -> Vec<(i64, f64)> {
    let h_prev = scaled_energy(prev_mask, n);
    let mut weights: BTreeMap<i64, f64> = BTreeMap::new();
    for mask in 0..(1u64 << n) {
        let t = raw_pair_sum(mask, n);
        let h = -(t as f64) / n as f64;
        *weights.entry(t).or_default() += (beta / n as f64 * h * h_prev).exp();
    }
    let z: f64 = weights.values().sum();
    weights.into_iter().map(|(t, w)| (t, w / z)).collect()
}

/// Conditional law of the next configuration itself, indexed by mask.
pub fn brute_conditional_config_law(n: usize, beta: f64, prev_mask: u64) -> Vec<f64> {
    let h_prev = scaled_energy(prev_mask, n);
    let weights: Vec<f64> = (0..(1u64 << n))
        .map(|mask| (beta / n as f64 * scaled_energy(mask, n) * h_prev).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / z).collect()
}

/// Conditional law of the next signed spin sum given the previous
/// configuration.
pub fn brute_mean_field_law(n: usize, beta: f64, prev_mask: u64) -> Vec<(i64, f64)> {
    let h_prev = scaled_energy(prev_mask, n);
    let mut weights: BTreeMap<i64, f64> = BTreeMap::new();
    for mask in 0..(1u64 << n) {
        let s: i64 = spins_of(mask, n).iter().sum();
        *weights.entry(s).or_default() += (beta / n as f64 * scaled_energy(mask, n) * h_prev).exp();
    }
    let z: f64 = weights.values().sum();
    weights.into_iter().map(|(s, w)| (s, w / z)).collect()
}

/// Stationary law over pair sums: per-configuration weight is the
/// configuration's own partition value.
pub fn brute_stationary_law(n: usize, beta: f64) -> Vec<(i64, f64)> {
    let size = 1u64 << n;
    let energies: Vec<f64> = (0..size).map(|mask| scaled_energy(mask, n)).collect();
    let mut weights: BTreeMap<i64, f64> = BTreeMap::new();
    for mask in 0..size {
        let z_x: f64 = energies
            .iter()
            .map(|&h| (beta / n as f64 * energies[mask as usize] * h).exp())
            .sum();
        *weights.entry(raw_pair_sum(mask, n)).or_default() += z_x;
    }
    let total: f64 = weights.values().sum();
    weights.into_iter().map(|(t, w)| (t, w / total)).collect()
}

/// Total variation between an oracle law keyed by pair sum and a library
/// table over shell labels.
pub fn tv_against_table(oracle: &[(i64, f64)], table: &DistributionTable<ShellLabel>) -> f64 {
    let mut by_pair_sum: BTreeMap<i64, f64> = oracle.iter().copied().collect();
    let mut diff = 0.0;
    for (label, _, p) in table.iter() {
        let q = by_pair_sum.remove(&label.pair_sum()).unwrap_or(0.0);
        diff += (p - q).abs();
    }
    for (_, q) in by_pair_sum {
        diff += q;
    }
    diff / 2.0
}

/// Total variation between an oracle law keyed by signed spin sum and a
/// vector of (spin_sum, prob) pairs.
pub fn tv_pairs(oracle: &[(i64, f64)], other: &[(i64, f64)]) -> f64 {
    let mut by_key: BTreeMap<i64, f64> = oracle.iter().copied().collect();
    let mut diff = 0.0;
    for &(key, p) in other {
        let q = by_key.remove(&key).unwrap_or(0.0);
        diff += (p - q).abs();
    }
    for (_, q) in by_key {
        diff += q;
    }
    diff / 2.0
}
