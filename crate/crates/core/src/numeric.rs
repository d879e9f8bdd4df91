//! Small numeric helpers shared across modules: logarithms of big integers,
//! log-sum-exp accumulation, and the log-gamma function at integer and
//! half-integer arguments.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// Natural logarithm of a positive big integer.
///
/// Values wider than f64 range are handled by splitting off the high bits,
/// so this stays accurate for binomial coefficients of any size.
pub fn ln_biguint(value: &BigUint) -> f64 {
    debug_assert!(!value.is_zero(), "ln of zero");
    let bits = value.bits();
    if bits <= 1000 {
        return value.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 1000;
    let mantissa = (value >> shift).to_f64().expect("shifted value fits");
    mantissa.ln() + shift as f64 * std::f64::consts::LN_2
}

/// log(sum(exp(x_i))) computed stably around the maximum term.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = terms.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

/// ln Gamma(k/2) for positive integer twice-argument `two_a = 2a`.
///
/// Chi-square machinery only ever needs integer and half-integer arguments,
/// where the recurrence Gamma(a+1) = a Gamma(a) gives machine-precision
/// values without a general-purpose approximation.
pub fn ln_gamma_half(two_a: u64) -> f64 {
    assert!(two_a > 0, "ln_gamma_half needs a positive argument");
    // Gamma(1/2) = sqrt(pi), Gamma(1) = 1.
    let (mut value, mut arg) = if two_a % 2 == 1 {
        (0.5 * std::f64::consts::PI.ln(), 0.5)
    } else {
        (0.0, 1.0)
    };
    let target = two_a as f64 / 2.0;
    while arg < target - 0.25 {
        value += arg.ln();
        arg += 1.0;
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::One;

    #[test]
    fn ln_biguint_matches_f64_for_small_values() {
        let x = BigUint::from(1024u32);
        assert!((ln_biguint(&x) - 1024f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn ln_biguint_handles_huge_values() {
        // 2^5000: ln = 5000 ln 2
        let x = BigUint::one() << 5000;
        let expected = 5000.0 * std::f64::consts::LN_2;
        assert!((ln_biguint(&x) - expected).abs() / expected < 1e-14);
    }

    #[test]
    fn log_sum_exp_basics() {
        let v = [0.0, 0.0];
        assert!((log_sum_exp(&v) - 2f64.ln()).abs() < 1e-15);
        let w = [1000.0, 1000.0];
        assert!((log_sum_exp(&w) - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn ln_gamma_half_integers_and_halves() {
        // Gamma(1) = 1, Gamma(2) = 1, Gamma(3) = 2, Gamma(4) = 6
        assert!(ln_gamma_half(2).abs() < 1e-15);
        assert!(ln_gamma_half(4).abs() < 1e-15);
        assert!((ln_gamma_half(6) - 2f64.ln()).abs() < 1e-14);
        assert!((ln_gamma_half(8) - 6f64.ln()).abs() < 1e-14);
        // Gamma(1/2) = sqrt(pi), Gamma(3/2) = sqrt(pi)/2
        let half_pi_ln = 0.5 * std::f64::consts::PI.ln();
        assert!((ln_gamma_half(1) - half_pi_ln).abs() < 1e-15);
        assert!((ln_gamma_half(3) - (half_pi_ln - 2f64.ln())).abs() < 1e-14);
        // Gamma(5/2) = 3 sqrt(pi) / 4
        let expected = (3.0 * std::f64::consts::PI.sqrt() / 4.0).ln();
        assert!((ln_gamma_half(5) - expected).abs() < 1e-14);
    }
}
