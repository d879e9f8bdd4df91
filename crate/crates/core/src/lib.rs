//! Curie-Weiss space-time market model.
//!
//! A market of `N` traders, each deciding to buy (+1) or sell (-1), evolves
//! through a Gibbs kernel that couples the interaction energy of the current
//! decision vector to the energy of the previous one. This crate implements
//! the model end to end:
//!
//! - [`spin`] — decision vectors, the pair-sum/energy identities, and exact
//!   enumeration of the energy shells;
//! - [`dist`] — exact distributions of the energy and of the mean decision,
//!   Markov transition kernels, conditional moments, asymptotic
//!   approximations, and the stationary law;
//! - [`meanfield`] — the tanh self-consistency equation, critical
//!   temperature, stability region, free energy, and the saddle-point
//!   partition-function approximation;
//! - [`simulate`] — exact two-stage sampling of the space-time process and
//!   trajectory generation;
//! - [`inference`] — the chi-square test of trader independence, with a
//!   self-contained chi-square survival function;
//! - [`market`] — trade-record ingestion, time windowing into decision
//!   vectors, and energy-series extraction.

pub mod dist;
pub mod error;
pub mod inference;
pub mod market;
pub mod meanfield;
mod numeric;
pub mod simulate;
pub mod spin;

pub use dist::{
    asymptotic_moments, asymptotic_pmf, asymptotic_pmf_diagnostic, conditional_moments_direct,
    conditional_moments_logz, conditional_moments_logz_with, detailed_balance_residual,
    gibbs_static_pmf, hamiltonian_kernel, independent_pmf, mean_field_kernel,
    pairwise_product_independence_check, printed_kernel_readings, stationary_distribution,
    AsymptoticPmfEntry, AsymptoticPmfReport, DistributionTable, FdSteps, KernelReadingReport,
    MomentMethod, MomentsReport, TransitionKernel,
};
pub use error::{Error, Result};
pub use inference::{
    bin_observations, chi_square_critical, chi_square_statistic, chi_square_survival,
    expected_counts, test_independence, ChiSquareReport, ClassScheme, FrequencyTable,
    INDEPENDENT_WINDOWS_CAVEAT,
};
pub use market::{
    hamiltonian_series, parse_trades, scaled_hamiltonian_series, top_traders, windowize,
    InactiveRule, ParsedTrades, RowError, Side, SpinSeries, SpinWindow, TieRule, TradeFormat,
    TradeRecord, WindowingPolicy, DEFAULT_WINDOW_US,
};
pub use meanfield::{
    critical_beta, free_energy, partition_saddle_point, saddle_point_diagnostic,
    solve_magnetization, stability_threshold, FreeEnergyPoint, RootSet, SaddlePointReport,
    SelfConsistency,
};
pub use simulate::{
    empirical_distribution, sample_next, simulate_trajectory, SamplerSpec, Trajectory, GENERATOR_ID,
};
pub use spin::{
    enumerate_shells, hamiltonian, pair_sum, shell_by_pair_sum, spin_sum, Magnetization,
    ModelParams, ShellLabel, ShellValue, SpinConfiguration, MAX_TRADERS,
};
