//! Exact sampling of the space-time process.
//!
//! No Markov-chain Monte Carlo is involved: the conditional law factors
//! through the energy, so a transition is drawn exactly in two stages —
//! first the next shell from the energy kernel, then a configuration
//! uniformly within that shell.

use num_bigint::BigUint;
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;

use crate::dist::{hamiltonian_kernel, DistributionTable};
use crate::error::{Error, Result};
use crate::spin::{enumerate_shells, Magnetization, ModelParams, ShellLabel, SpinConfiguration};

/// Identifier of the pseudo-random generator backing trajectories, recorded
/// so a stored trajectory documents how to reproduce itself.
pub const GENERATOR_ID: &str = "chacha12 (seed_from_u64)";

/// A full sampling request: model, horizon, seed, and starting state.
#[derive(Debug, Clone)]
pub struct SamplerSpec {
    params: ModelParams,
    steps: usize,
    seed: u64,
    initial: SpinConfiguration,
}

impl SamplerSpec {
    pub fn new(
        params: ModelParams,
        steps: usize,
        seed: u64,
        initial: SpinConfiguration,
    ) -> Result<Self> {
        if steps == 0 {
            return Err(Error::Domain("steps must be at least 1".into()));
        }
        if initial.len() != params.n_traders() {
            return Err(Error::LengthMismatch {
                len: initial.len(),
                n: params.n_traders(),
            });
        }
        Ok(Self {
            params,
            steps,
            seed,
            initial,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn initial(&self) -> &SpinConfiguration {
        &self.initial
    }
}

/// A realized path of the process with its derived observables.
#[derive(Debug, Clone)]
pub struct Trajectory {
    configs: Vec<SpinConfiguration>,
    shells: Vec<ShellLabel>,
    magnetizations: Vec<Magnetization>,
    generator: &'static str,
}

impl Trajectory {
    fn from_configs(configs: Vec<SpinConfiguration>) -> Self {
        let shells = configs.iter().map(ShellLabel::of_configuration).collect();
        let magnetizations = configs
            .iter()
            .map(Magnetization::of_configuration)
            .collect();
        Self {
            configs,
            shells,
            magnetizations,
            generator: GENERATOR_ID,
        }
    }

    pub fn configs(&self) -> &[SpinConfiguration] {
        &self.configs
    }

    pub fn shells(&self) -> &[ShellLabel] {
        &self.shells
    }

    pub fn magnetizations(&self) -> &[Magnetization] {
        &self.magnetizations
    }

    /// Identity of the generator that produced the draw.
    pub fn generator(&self) -> &str {
        self.generator
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }
}

/// Draws the next configuration exactly from the conditional law given
/// `prev`.
///
/// Stage one samples the next shell from the energy kernel row; stage two
/// places the configuration uniformly within the shell — the sign of the
/// spin sum is a fair coin when the shell has two signs, and the positive
/// positions are a uniform subset.
pub fn sample_next<R: Rng + ?Sized>(
    prev: &SpinConfiguration,
    params: &ModelParams,
    rng: &mut R,
) -> Result<SpinConfiguration> {
    let shells = enumerate_shells(params.n_traders())?;
    let prev_label = ShellLabel::of_configuration(prev);
    let shell_idx = shells
        .iter()
        .position(|s| s.pair_sum() == prev_label.pair_sum())
        .ok_or(Error::LengthMismatch {
            len: prev.len(),
            n: params.n_traders(),
        })?;
    let kernel = hamiltonian_kernel(params.n_traders(), params.beta(), &shells[shell_idx])?;
    let cumulative = cumulative_row(kernel.row().probs());
    let next_idx = sample_index(&cumulative, rng);
    draw_within_shell(shells[next_idx].abs_spin_sum(), params.n_traders(), rng)
}

/// Generates a trajectory of `steps` transitions from the initial state.
/// Fully reproducible from the seed.
pub fn simulate_trajectory(spec: &SamplerSpec) -> Result<Trajectory> {
    let n = spec.params.n_traders();
    let shells = enumerate_shells(n)?;
    // one kernel row per conditioning shell, cached as cumulative sums
    let rows: Vec<Vec<f64>> = shells
        .iter()
        .map(|s| {
            hamiltonian_kernel(n, spec.params.beta(), s).map(|k| cumulative_row(k.row().probs()))
        })
        .collect::<Result<_>>()?;

    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    let mut configs = Vec::with_capacity(spec.steps + 1);
    configs.push(spec.initial.clone());
    let mut current_shell = shells
        .iter()
        .position(|s| s.pair_sum() == ShellLabel::of_configuration(&spec.initial).pair_sum())
        .expect("initial configuration lies in some shell");
    for _ in 0..spec.steps {
        let next_shell = sample_index(&rows[current_shell], &mut rng);
        let config = draw_within_shell(shells[next_shell].abs_spin_sum(), n, &mut rng)?;
        configs.push(config);
        current_shell = next_shell;
    }
    Ok(Trajectory::from_configs(configs))
}

/// Normalized shell-occupancy frequencies of a trajectory after discarding
/// `burn_in` leading states. The support is the full shell set, so empty
/// shells appear with probability zero.
pub fn empirical_distribution(
    traj: &Trajectory,
    burn_in: usize,
) -> Result<DistributionTable<ShellLabel>> {
    if burn_in >= traj.len() {
        return Err(Error::Domain(format!(
            "burn-in {burn_in} leaves no observations in a trajectory of length {}",
            traj.len()
        )));
    }
    let n = traj.configs[0].len();
    let shells = enumerate_shells(n)?;
    let mut counts = vec![0u64; shells.len()];
    for label in &traj.shells[burn_in..] {
        let idx = shells
            .iter()
            .position(|s| s.pair_sum() == label.pair_sum())
            .expect("trajectory shell is a shell of N");
        counts[idx] += 1;
    }
    let total = (traj.len() - burn_in) as f64;
    let labels: Vec<ShellLabel> = shells.iter().map(|s| s.label()).collect();
    let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / total).collect();
    let counts: Vec<BigUint> = counts.into_iter().map(BigUint::from).collect();
    Ok(DistributionTable::from_parts(labels, counts, probs))
}

fn cumulative_row(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

fn sample_index<R: Rng + ?Sized>(cumulative: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    cumulative
        .iter()
        .position(|&c| u < c)
        .unwrap_or(cumulative.len() - 1)
}

/// Uniform draw from the shell with the given absolute spin sum.
fn draw_within_shell<R: Rng + ?Sized>(
    abs_spin_sum: i64,
    n: usize,
    rng: &mut R,
) -> Result<SpinConfiguration> {
    let signed = if abs_spin_sum == 0 {
        0
    } else if rng.random::<bool>() {
        abs_spin_sum
    } else {
        -abs_spin_sum
    };
    let positives = ((n as i64 + signed) / 2) as usize;
    let mut spins = vec![-1i8; n];
    for idx in sample_distinct(n, positives, rng) {
        spins[idx] = 1;
    }
    SpinConfiguration::new(spins)
}

/// `k` distinct indices in `0..n`, uniformly, by partial Fisher-Yates.
fn sample_distinct<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    debug_assert!(k <= n);
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::chi_square_survival;
    use std::collections::HashMap;

    fn spec(n: usize, beta: f64, steps: usize, seed: u64) -> SamplerSpec {
        SamplerSpec::new(
            ModelParams::new(n, beta).unwrap(),
            steps,
            seed,
            SpinConfiguration::all_plus(n).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn single_step_gives_length_two() {
        let traj = simulate_trajectory(&spec(4, 1.0, 1, 7)).unwrap();
        assert_eq!(traj.len(), 2);
        assert_eq!(traj.configs()[0], SpinConfiguration::all_plus(4).unwrap());
        assert_eq!(traj.generator(), GENERATOR_ID);
    }

    #[test]
    fn identical_seeds_reproduce_byte_identical_trajectories() {
        let a = simulate_trajectory(&spec(6, 2.0, 500, 42)).unwrap();
        let b = simulate_trajectory(&spec(6, 2.0, 500, 42)).unwrap();
        assert_eq!(a.configs(), b.configs());
        let c = simulate_trajectory(&spec(6, 2.0, 500, 43)).unwrap();
        assert_ne!(a.configs(), c.configs());
    }

    #[test]
    fn derived_sequences_are_consistent() {
        let traj = simulate_trajectory(&spec(5, 1.5, 200, 3)).unwrap();
        for (i, config) in traj.configs().iter().enumerate() {
            assert_eq!(traj.shells()[i], ShellLabel::of_configuration(config));
            assert_eq!(
                traj.magnetizations()[i],
                Magnetization::of_configuration(config)
            );
        }
    }

    #[test]
    fn empirical_distribution_of_constant_trajectory_is_point_mass() {
        let config = SpinConfiguration::all_plus(4).unwrap();
        let traj = Trajectory::from_configs(vec![config.clone(), config.clone(), config]);
        let table = empirical_distribution(&traj, 0).unwrap();
        table.validate().unwrap();
        assert_eq!(table.prob_of(&traj.shells()[0]), Some(1.0));
    }

    #[test]
    fn empirical_distribution_rejects_exhausted_burn_in() {
        // 3 transitions means 4 states
        let traj = simulate_trajectory(&spec(4, 0.0, 3, 1)).unwrap();
        assert_eq!(traj.len(), 4);
        assert!(empirical_distribution(&traj, 5).is_err());
        assert!(empirical_distribution(&traj, 4).is_err());
        assert!(empirical_distribution(&traj, 3).is_ok());
    }

    #[test]
    fn independent_trajectory_occupancy_matches_exact_table() {
        // beta = 0 over 1e5 steps at N=10: occupancy within ±0.01 of the
        // exact ten-trader probabilities per state
        let traj = simulate_trajectory(&spec(10, 0.0, 100_000, 17)).unwrap();
        let table = empirical_distribution(&traj, 0).unwrap();
        let exact = crate::dist::independent_pmf(10).unwrap();
        for ((label, _, freq), p) in table.iter().zip(exact.probs()) {
            assert!(
                (freq - p).abs() <= 0.01,
                "T={}: {freq} vs {p}",
                label.pair_sum()
            );
        }
        // frequencies are normalized
        let total: f64 = table.probs().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_beta_draws_are_uniform_over_configurations() {
        // 200k draws at N=4 against the uniform law on 16 configurations:
        // chi-square goodness of fit should not reject at the 0.001 level
        let n = 4;
        let params = ModelParams::new(n, 0.0).unwrap();
        let prev = SpinConfiguration::all_plus(n).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let draws = 200_000usize;
        let mut counts: HashMap<Vec<i8>, u64> = HashMap::new();
        for _ in 0..draws {
            let c = sample_next(&prev, &params, &mut rng).unwrap();
            *counts.entry(c.spins().to_vec()).or_default() += 1;
        }
        assert_eq!(counts.len(), 16);
        let expected = draws as f64 / 16.0;
        let stat: f64 = counts
            .values()
            .map(|&o| {
                let diff = o as f64 - expected;
                diff * diff / expected
            })
            .sum();
        let p = chi_square_survival(stat, 15);
        assert!(p > 0.001, "stat={stat} p={p}");
    }

    #[test]
    fn equal_energy_configurations_are_equally_likely() {
        // N=4, beta=3: the |spin sum|=2 shell has 8 configurations; their
        // empirical frequencies over 200k draws match a uniform split
        let n = 4;
        let params = ModelParams::new(n, 3.0).unwrap();
        let prev = SpinConfiguration::all_plus(n).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let mut counts: HashMap<Vec<i8>, u64> = HashMap::new();
        let mut in_shell = 0u64;
        for _ in 0..200_000 {
            let c = sample_next(&prev, &params, &mut rng).unwrap();
            if crate::spin::spin_sum(&c).abs() == 2 {
                in_shell += 1;
                *counts.entry(c.spins().to_vec()).or_default() += 1;
            }
        }
        assert_eq!(counts.len(), 8);
        let expected = in_shell as f64 / 8.0;
        let stat: f64 = counts
            .values()
            .map(|&o| {
                let diff = o as f64 - expected;
                diff * diff / expected
            })
            .sum();
        let p = chi_square_survival(stat, 7);
        assert!(p > 0.001, "stat={stat} p={p}");
    }

    #[test]
    fn transition_frequencies_are_time_homogeneous() {
        // estimate the transition law out of the most-visited shell on the
        // two halves of one long path and compare by a two-sample chi-square
        let n = 6;
        let traj = simulate_trajectory(&spec(n, 1.0, 60_000, 99)).unwrap();
        let shells = enumerate_shells(n).unwrap();
        let index_of = |label: &ShellLabel| {
            shells
                .iter()
                .position(|s| s.pair_sum() == label.pair_sum())
                .unwrap()
        };
        let half = traj.len() / 2;
        let mut first = vec![vec![0u64; shells.len()]; shells.len()];
        let mut second = vec![vec![0u64; shells.len()]; shells.len()];
        for t in 0..traj.len() - 1 {
            let from = index_of(&traj.shells()[t]);
            let to = index_of(&traj.shells()[t + 1]);
            if t < half {
                first[from][to] += 1;
            } else {
                second[from][to] += 1;
            }
        }
        for from in 0..shells.len() {
            let n1: u64 = first[from].iter().sum();
            let n2: u64 = second[from].iter().sum();
            if n1 < 500 || n2 < 500 {
                continue;
            }
            // two-sample chi-square across destination cells
            let mut stat = 0.0;
            let mut cells = 0usize;
            for to in 0..shells.len() {
                let pooled = (first[from][to] + second[from][to]) as f64;
                if pooled == 0.0 {
                    continue;
                }
                cells += 1;
                for (count, total) in [(first[from][to], n1), (second[from][to], n2)] {
                    let expected = pooled * total as f64 / (n1 + n2) as f64;
                    let diff = count as f64 - expected;
                    stat += diff * diff / expected;
                }
            }
            let p = chi_square_survival(stat, (cells - 1) as u32);
            assert!(p > 0.001, "shell {from}: stat={stat} p={p}");
        }
    }
}
