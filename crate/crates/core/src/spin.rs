//! Canonical domain types: trader decision vectors, the interaction energy
//! and magnetization identities, and enumeration of the energy shells.
//!
//! Two energy scales appear throughout the crate and both live on every
//! shell. The raw pair sum `T = sum_{i<j} x_i x_j` is the integer scale used
//! by the numeric tables; the interaction energy `H = -T/N` is the scale the
//! Gibbs kernels are written in. `H` is kept as an exact rational so shells
//! can be joined on it without floating-point keys.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::One;

use crate::error::{Error, Result};

/// Largest `n_traders` accepted by shell enumeration. Shells themselves are
/// cheap (N/2 + 1 entries), but multiplicities are exact big integers and
/// callers routinely sum all of them.
pub const MAX_TRADERS: usize = 65_536;

/// Market size and temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n_traders: usize,
    beta: f64,
}

impl ModelParams {
    pub fn new(n_traders: usize, beta: f64) -> Result<Self> {
        if n_traders < 2 {
            return Err(Error::TooFewTraders(n_traders));
        }
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::InvalidBeta(beta));
        }
        Ok(Self { n_traders, beta })
    }

    pub fn n_traders(&self) -> usize {
        self.n_traders
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// One decision per trader: +1 buys, -1 sells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinConfiguration {
    spins: Vec<i8>,
}

impl SpinConfiguration {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if spins.len() < 2 {
            return Err(Error::TooFewTraders(spins.len()));
        }
        for &s in &spins {
            if s != 1 && s != -1 {
                return Err(Error::InvalidSpin(s));
            }
        }
        Ok(Self { spins })
    }

    /// All traders buying.
    pub fn all_plus(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    /// Configuration from the low `n` bits of `mask`: bit set means +1.
    /// Convenient for exhaustive enumeration of small markets.
    pub fn from_bits(mask: u64, n: usize) -> Result<Self> {
        if n > 64 {
            return Err(Error::Capacity { n, max: 64 });
        }
        let spins = (0..n)
            .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
            .collect();
        Self::new(spins)
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    /// Global flip x -> -x.
    pub fn flipped(&self) -> Self {
        Self {
            spins: self.spins.iter().map(|s| -s).collect(),
        }
    }
}

/// Sum of the decisions.
pub fn spin_sum(config: &SpinConfiguration) -> i64 {
    config.spins().iter().map(|&s| i64::from(s)).sum()
}

/// Sum over unordered pairs, `T = sum_{i<j} x_i x_j = (s^2 - N) / 2`.
pub fn pair_sum(config: &SpinConfiguration) -> i64 {
    let s = spin_sum(config);
    let n = config.len() as i64;
    (s * s - n) / 2
}

/// Interaction energy `H = -T/N`, exact. Equals `(1 - N m^2) / 2` where `m`
/// is the magnetization.
pub fn hamiltonian(config: &SpinConfiguration) -> Ratio<i64> {
    Ratio::new(-pair_sum(config), config.len() as i64)
}

/// The mean decision `m = s/N`, stored exactly as its integer numerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Magnetization {
    spin_sum: i64,
    n_traders: usize,
}

impl Magnetization {
    /// From a signed spin sum. Fails unless `|s| <= N` and `s` has the same
    /// parity as `N`.
    pub fn from_spin_sum(spin_sum: i64, n_traders: usize) -> Result<Self> {
        let n = n_traders as i64;
        if spin_sum.abs() > n || (spin_sum - n) % 2 != 0 {
            return Err(Error::InvalidMagnetization {
                numerator: spin_sum,
                n: n_traders,
            });
        }
        Ok(Self {
            spin_sum,
            n_traders,
        })
    }

    pub fn of_configuration(config: &SpinConfiguration) -> Self {
        Self {
            spin_sum: spin_sum(config),
            n_traders: config.len(),
        }
    }

    pub fn spin_sum(&self) -> i64 {
        self.spin_sum
    }

    pub fn n_traders(&self) -> usize {
        self.n_traders
    }

    /// Exact value in [-1, 1].
    pub fn value(&self) -> Ratio<i64> {
        Ratio::new(self.spin_sum, self.n_traders as i64)
    }

    pub fn as_f64(&self) -> f64 {
        self.spin_sum as f64 / self.n_traders as f64
    }

    /// Number of +1 decisions, `(N + s) / 2`.
    pub fn positive_count(&self) -> u64 {
        ((self.n_traders as i64 + self.spin_sum) / 2) as u64
    }
}

/// An equivalence class of configurations sharing `|spin sum|`, with its
/// exact multiplicity and both energy scales.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShellValue {
    abs_spin_sum: i64,
    multiplicity: BigUint,
    pair_sum: i64,
    hamiltonian: Ratio<i64>,
}

impl ShellValue {
    pub fn abs_spin_sum(&self) -> i64 {
        self.abs_spin_sum
    }

    pub fn multiplicity(&self) -> &BigUint {
        &self.multiplicity
    }

    pub fn pair_sum(&self) -> i64 {
        self.pair_sum
    }

    pub fn hamiltonian(&self) -> Ratio<i64> {
        self.hamiltonian
    }

    pub fn label(&self) -> ShellLabel {
        ShellLabel {
            abs_spin_sum: self.abs_spin_sum,
            pair_sum: self.pair_sum,
            hamiltonian: self.hamiltonian,
        }
    }
}

/// Lightweight shell identifier (no multiplicity) used as a distribution
/// label and in trajectories. Ordered by the pair sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShellLabel {
    abs_spin_sum: i64,
    pair_sum: i64,
    hamiltonian: Ratio<i64>,
}

impl ShellLabel {
    pub fn abs_spin_sum(&self) -> i64 {
        self.abs_spin_sum
    }

    pub fn pair_sum(&self) -> i64 {
        self.pair_sum
    }

    pub fn hamiltonian(&self) -> Ratio<i64> {
        self.hamiltonian
    }

    pub fn hamiltonian_f64(&self) -> f64 {
        *self.hamiltonian.numer() as f64 / *self.hamiltonian.denom() as f64
    }

    /// Shell of the given configuration.
    pub fn of_configuration(config: &SpinConfiguration) -> Self {
        let s = spin_sum(config).abs();
        let t = pair_sum(config);
        Self {
            abs_spin_sum: s,
            pair_sum: t,
            hamiltonian: hamiltonian(config),
        }
    }
}

impl PartialOrd for ShellLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ShellLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.pair_sum.cmp(&other.pair_sum)
    }
}

/// All shells of an `n`-trader market, ordered by increasing pair sum.
///
/// There are `floor(N/2) + 1` shells; their multiplicities sum to `2^N`.
pub fn enumerate_shells(n_traders: usize) -> Result<Vec<ShellValue>> {
    if n_traders < 2 {
        return Err(Error::TooFewTraders(n_traders));
    }
    if n_traders > MAX_TRADERS {
        return Err(Error::Capacity {
            n: n_traders,
            max: MAX_TRADERS,
        });
    }
    let n = n_traders as i64;
    let mut shells = Vec::with_capacity(n_traders / 2 + 1);
    // Walk s from N down to 0/1 so pair sums come out increasing. The
    // binomial C(N, (N+s)/2) follows the multiplicative recurrence from
    // C(N, N) = 1.
    let mut binomial = BigUint::one();
    let mut s = n;
    loop {
        let multiplicity = if s == 0 {
            binomial.clone()
        } else {
            &binomial * 2u32
        };
        let t = (s * s - n) / 2;
        shells.push(ShellValue {
            abs_spin_sum: s,
            multiplicity,
            pair_sum: t,
            hamiltonian: Ratio::new(-t, n),
        });
        if s <= 1 {
            break;
        }
        // C(N, k-1) = C(N, k) * k / (N - k + 1) for k = (N+s)/2.
        let k = (n + s) / 2;
        binomial = binomial * BigUint::from(k as u64) / BigUint::from((n - k + 1) as u64);
        s -= 2;
    }
    shells.reverse();
    Ok(shells)
}

/// Find the shell with the given pair sum.
pub fn shell_by_pair_sum(shells: &[ShellValue], pair_sum: i64) -> Result<&ShellValue> {
    shells
        .iter()
        .find(|sh| sh.pair_sum == pair_sum)
        .ok_or_else(|| {
            // N is recoverable from any shell via T = (s^2 - N) / 2.
            let n = shells.first().map_or(0, |s| {
                (s.abs_spin_sum * s.abs_spin_sum - 2 * s.pair_sum) as usize
            });
            Error::NotAShell(pair_sum, n)
        })
}
