//! Deterministic mean-field analysis: the tanh self-consistency equation,
//! critical temperature, stability region, free energy, and the
//! saddle-point partition-function approximation.
//!
//! The one-step behavior equation is `m = tanh(beta m m_prev^2 / 2)`: the
//! equilibrium mean decision given the previous one. Non-zero solutions
//! bifurcate where the slope `beta m_prev^2 / 2` crosses 1, i.e. at
//! `beta = 2` for a fully polarized previous state.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::numeric::{ln_biguint, log_sum_exp};
use crate::spin::enumerate_shells;

const BISECTION_INTERVAL: f64 = 1e-12;

/// Inputs of the self-consistency solve.
#[derive(Debug, Clone, Copy)]
pub struct SelfConsistency {
    beta: f64,
    m_prev: f64,
    tolerance: f64,
}

impl SelfConsistency {
    pub fn new(beta: f64, m_prev: f64, tolerance: f64) -> Result<Self> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::InvalidBeta(beta));
        }
        if !(-1.0..=1.0).contains(&m_prev) {
            return Err(Error::Domain(format!(
                "previous magnetization must lie in [-1, 1] (got {m_prev})"
            )));
        }
        if !(tolerance > 0.0 && tolerance <= 1e-3) {
            return Err(Error::InvalidTolerance(tolerance));
        }
        Ok(Self {
            beta,
            m_prev,
            tolerance,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn m_prev(&self) -> f64 {
        self.m_prev
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Right-hand side of the behavior equation.
    fn map(&self, m: f64) -> f64 {
        (self.beta * m * self.m_prev * self.m_prev / 2.0).tanh()
    }

    /// Slope of the map at a point.
    fn slope(&self, m: f64) -> f64 {
        let a = self.beta * self.m_prev * self.m_prev / 2.0;
        let sech = 1.0 / (a * m).cosh();
        a * sech * sech
    }
}

/// Solutions of the behavior equation in [-1, 1] with their fixed-point
/// stability.
#[derive(Debug, Clone)]
pub struct RootSet {
    roots: Vec<f64>,
    stable: Vec<bool>,
}

impl RootSet {
    /// Roots in increasing order. Zero is always present.
    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    /// Stability flag per root: `|g'(root)| < 1` for the iteration map `g`.
    pub fn stable_flags(&self) -> &[bool] {
        &self.stable
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

/// All fixed points of `m = tanh(beta m m_prev^2 / 2)` in [-1, 1].
///
/// The slope at the origin decides the count: a single root at zero while
/// `beta m_prev^2 / 2 <= 1`, and a symmetric pair `{-m*, +m*}` beyond it,
/// located by bisection on (0, 1].
pub fn solve_magnetization(sc: &SelfConsistency) -> RootSet {
    let slope_at_zero = sc.beta * sc.m_prev * sc.m_prev / 2.0;
    let mut roots = vec![0.0];
    if slope_at_zero > 1.0 {
        // f(m) = m - tanh(a m) with a > 1 is negative on (0, m*) and
        // positive on (m*, 1], so [0, 1] brackets the unique positive root
        let f = |m: f64| m - sc.map(m);
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        while hi - lo > BISECTION_INTERVAL {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let m_star = 0.5 * (lo + hi);
        roots.insert(0, -m_star);
        roots.push(m_star);
    }
    let stable = roots.iter().map(|&r| sc.slope(r).abs() < 1.0).collect();
    RootSet { roots, stable }
}

/// The temperature at which non-zero solutions appear for a given previous
/// magnetization: `beta_c = 2 / m_prev^2`. Equals 2 for `m_prev = ±1`.
pub fn critical_beta(m_prev: f64) -> Result<f64> {
    if m_prev == 0.0 {
        return Err(Error::DegenerateConditioning);
    }
    if !(-1.0..=1.0).contains(&m_prev) {
        return Err(Error::Domain(format!(
            "previous magnetization must lie in [-1, 1] (got {m_prev})"
        )));
    }
    Ok(2.0 / (m_prev * m_prev))
}

/// The spatial stability bound on the previous magnetization,
/// `sqrt(2 / beta)`: below it the zero solution is the only equilibrium.
pub fn stability_threshold(beta: f64) -> Result<f64> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::InvalidBeta(beta));
    }
    Ok((2.0 / beta).sqrt())
}

/// Free energy of the mean decision.
#[derive(Debug, Clone, Copy)]
pub struct FreeEnergyPoint {
    pub m: f64,
    pub m_prev: f64,
    pub value: f64,
    /// Analytic second derivative in `m`: `1/(1-m^2) - (beta/2) m_prev^2`.
    pub curvature: f64,
}

/// `f(m) = ((1+m)/2) ln((1+m)/2) + ((1-m)/2) ln((1-m)/2)
///         - (beta/4) m^2 m_prev^2` with its analytic curvature.
pub fn free_energy(m: f64, m_prev: f64, beta: f64) -> Result<FreeEnergyPoint> {
    if m.abs() >= 1.0 || m.is_nan() {
        return Err(Error::Domain(format!(
            "free energy needs |m| < 1 (got {m})"
        )));
    }
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::InvalidBeta(beta));
    }
    let p = (1.0 + m) / 2.0;
    let q = (1.0 - m) / 2.0;
    // p ln p with the 0 ln 0 = 0 convention is never needed here: |m| < 1
    let entropy = p * p.ln() + q * q.ln();
    let value = entropy - beta / 4.0 * m * m * m_prev * m_prev;
    let curvature = 1.0 / (1.0 - m * m) - beta / 2.0 * m_prev * m_prev;
    Ok(FreeEnergyPoint {
        m,
        m_prev,
        value,
        curvature,
    })
}

/// The printed saddle-point approximation of the partition value,
/// `Z ~ 2^N sqrt(2 pi / (N (1 - (beta/2) m_prev^2)))`.
///
/// Fails outside the stability region, where the Gaussian curvature factor
/// is not positive.
pub fn partition_saddle_point(n_traders: usize, beta: f64, m_prev: f64) -> Result<f64> {
    if n_traders < 2 {
        return Err(Error::TooFewTraders(n_traders));
    }
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::InvalidBeta(beta));
    }
    let curvature = 1.0 - beta / 2.0 * m_prev * m_prev;
    if curvature <= 0.0 {
        return Err(Error::SaddlePointInvalid { curvature });
    }
    let n = n_traders as f64;
    Ok(2f64.powi(n_traders as i32) * (2.0 * std::f64::consts::PI / (n * curvature)).sqrt())
}

/// Saddle-point approximation next to the exact partition value.
#[derive(Debug, Clone, Copy)]
pub struct SaddlePointReport {
    pub approx: f64,
    /// Exact `Z = sum_shells multiplicity * exp((beta/N) H (1 - N m_prev^2)/2)`.
    pub exact: f64,
    pub ratio: f64,
}

/// Companion diagnostic for [`partition_saddle_point`]: the exact
/// shell-summed partition value for a previous state with the given
/// magnetization, and the ratio of the approximation to it.
pub fn saddle_point_diagnostic(
    n_traders: usize,
    beta: f64,
    m_prev: f64,
) -> Result<SaddlePointReport> {
    let approx = partition_saddle_point(n_traders, beta, m_prev)?;
    let shells = enumerate_shells(n_traders)?;
    let n = n_traders as f64;
    let h_prev = (1.0 - n * m_prev * m_prev) / 2.0;
    let terms: Vec<f64> = shells
        .iter()
        .map(|s| {
            ln_biguint(s.multiplicity()) + beta / n * s.hamiltonian().to_f64().unwrap() * h_prev
        })
        .collect();
    let exact = log_sum_exp(&terms).exp();
    Ok(SaddlePointReport {
        approx,
        exact,
        ratio: approx / exact,
    })
}
