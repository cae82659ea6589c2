//! Modified Bessel functions of the first kind for integer order.
//!
//! Small arguments use the defining power series (all terms positive, so no
//! cancellation). Large arguments use the Hankel asymptotic expansion of the
//! exponentially scaled function, truncated at its smallest term. The seam at
//! `x = 15` keeps both branches within 1e-13 relative of each other for the
//! low orders the densities use.

use crate::error::{Error, Result};

/// Above this argument (and above `order²`) the asymptotic branch is used.
pub const SERIES_SEAM: f64 = 15.0;

/// Largest argument for which `I_ν(x)` itself is finite in `f64` for ν = 0.
const OVERFLOW_ARG: f64 = 713.98;

/// `I_ν(x)` for integer `ν ≥ 0` and `x ≥ 0`.
///
/// Returns [`Error::Range`] when the value overflows `f64`.
pub fn bessel_i(order: u32, x: f64) -> Result<f64> {
    check_arg(x)?;
    if x <= 700.0 && !use_asymptotic(order, x) {
        return Ok(series_unscaled(order, x));
    }
    let scaled = bessel_i_scaled(order, x);
    let value = scaled * x.exp();
    if value.is_finite() {
        Ok(value)
    } else if x > OVERFLOW_ARG || x.exp().is_infinite() {
        // e^x overflows but the product may still fit: combine in log space.
        let log_value = scaled.ln() + x;
        if log_value < f64::MAX.ln() {
            Ok(log_value.exp())
        } else {
            Err(Error::Range(format!("I_{order}({x}) overflows f64")))
        }
    } else {
        Err(Error::Range(format!("I_{order}({x}) overflows f64")))
    }
}

/// Exponentially scaled `e^{-x} I_ν(x)`; finite for every finite `x ≥ 0`.
///
/// Panics on negative or non-finite `x` in debug builds; callers inside the
/// crate only pass magnitudes.
pub fn bessel_i_scaled(order: u32, x: f64) -> f64 {
    debug_assert!(x >= 0.0 && x.is_finite(), "bessel argument {x}");
    if use_asymptotic(order, x) {
        asymptotic_scaled(order, x)
    } else if x <= 700.0 {
        series_unscaled(order, x) * (-x).exp()
    } else {
        series_scaled_log(order, x)
    }
}

/// `I₀(x)`, panicking only if the value overflows.
pub fn i0(x: f64) -> f64 {
    bessel_i(0, x.abs()).expect("I0 overflow")
}

/// `I₁(x)` (odd in `x`).
pub fn i1(x: f64) -> f64 {
    let v = bessel_i(1, x.abs()).expect("I1 overflow");
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `e^{-x} I₁(x) / x` for `x ≥ 0`, with the limit `1/2` at the origin.
///
/// This is the smooth factor left after pulling `√z` terms out of the
/// Bessel-product integrals, so it stays well defined on the support edge.
pub fn i1_over_x_scaled(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 1e-3 {
        // I1(x)/x = 1/2 + x²/16 + x⁴/384 + ...
        let x2 = x * x;
        (0.5 + x2 / 16.0 + x2 * x2 / 384.0) * (-x).exp()
    } else {
        bessel_i_scaled(1, x) / x
    }
}

fn check_arg(x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("Bessel argument must be >= 0, got {x}")));
    }
    if x.is_infinite() {
        return Err(Error::Range("infinite Bessel argument".into()));
    }
    Ok(())
}

fn use_asymptotic(order: u32, x: f64) -> bool {
    let nu = order as f64;
    x > SERIES_SEAM && x > nu * nu
}

fn series_unscaled(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=order {
        term *= half / k as f64;
    }
    if term == 0.0 {
        return 0.0;
    }
    let q = half * half;
    let nu = order as f64;
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + nu));
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    sum
}

fn series_scaled_log(order: u32, x: f64) -> f64 {
    let nu = order as f64;
    let log_q = (0.25 * x * x).ln();
    let mut log_term = nu * (0.5 * x).ln() - ln_factorial(order as usize) - x;
    let mut logs = vec![log_term];
    let mut k = 0.0;
    let mut max = log_term;
    loop {
        k += 1.0;
        log_term += log_q - (k as f64).ln() - (k + nu).ln();
        logs.push(log_term);
        max = max.max(log_term);
        if log_term < max - 40.0 && k > 0.5 * x {
            break;
        }
    }
    let sum: f64 = logs.iter().map(|l| (l - max).exp()).sum();
    (max + sum.ln()).exp()
}

fn asymptotic_scaled(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order as f64).powi(2);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= prev || next == 0.0 {
            break;
        }
        prev = next.abs();
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain truncated series with 60 terms, used as an independent oracle.
    fn oracle(order: u32, x: f64) -> f64 {
        let mut sum = 0.0;
        for k in 0..60u32 {
            let mut term = (0.5 * x).powi((2 * k + order) as i32);
            for j in 1..=k {
                term /= j as f64;
            }
            for j in 1..=(k + order) {
                term /= j as f64;
            }
            sum += term;
        }
        sum
    }

    #[test]
    fn origin_values() {
        assert_eq!(bessel_i(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_i(3, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn i0_at_one_matches_truncated_series() {
        let v = bessel_i(0, 1.0).unwrap();
        assert!((v - 1.2660658777520084).abs() < 1e-15);
        assert!((v - oracle(0, 1.0)).abs() < 1e-15);
    }

    #[test]
    fn series_matches_oracle_small_args() {
        for order in 0..5 {
            for i in 1..=30 {
                let x = i as f64 * 0.5;
                let got = bessel_i(order, x).unwrap();
                let want = oracle(order, x);
                assert!(((got - want) / want).abs() < 1e-13, "I_{order}({x}) {got} vs {want}");
            }
        }
    }

    #[test]
    fn branches_agree_at_seam() {
        for order in 0..4 {
            let x = SERIES_SEAM + 1e-9;
            let series = series_unscaled(order, x) * (-x).exp();
            let asym = asymptotic_scaled(order, x);
            assert!(
                ((series - asym) / series).abs() < 1e-12,
                "order {order}: {series} vs {asym}"
            );
        }
    }

    #[test]
    fn large_arguments() {
        // Reference values from mpmath at 30 digits.
        let cases = [
            (0, 50.0, 2.93255378384933e20),
            (1, 50.0, 2.90307859010355e20),
            (0, 700.0, 1.5295933476718737e302),
            (1, 100.0, 1.068369390338163e42),
        ];
        for (order, x, want) in cases {
            let got = bessel_i(order, x).unwrap();
            assert!(((got - want) / want).abs() < 1e-12, "I_{order}({x}) {got} vs {want}");
        }
    }

    #[test]
    fn overflow_is_range_error() {
        assert!(matches!(bessel_i(0, 800.0), Err(Error::Range(_))));
        assert!(matches!(bessel_i(0, -1.0), Err(Error::Domain(_))));
        assert!(bessel_i_scaled(0, 800.0).is_finite());
    }

    #[test]
    fn high_order_large_argument_uses_log_series() {
        // I_30(710) e^{-710}, mpmath reference.
        let got = bessel_i_scaled(30, 710.0);
        let want = 0.0079423186025280126;
        assert!(((got - want) / want).abs() < 1e-10, "{got}");
    }

    #[test]
    fn i1_over_x_limit() {
        assert!((i1_over_x_scaled(0.0) - 0.5).abs() < 1e-16);
        for &x in &[1e-4, 5e-4, 2e-3, 0.5, 3.0, 40.0] {
            let want = bessel_i_scaled(1, x) / x;
            assert!(((i1_over_x_scaled(x) - want) / want).abs() < 1e-13);
        }
    }
}
