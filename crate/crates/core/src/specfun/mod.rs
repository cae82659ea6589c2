//! Special functions and integration kernels shared by every density.

mod bessel;
pub mod cubature;
mod quadrature;

use crate::error::Result;

pub(crate) use bessel::ln_factorial;
pub use bessel::{bessel_i, bessel_i_scaled, i0, i1, i1_over_x_scaled, SERIES_SEAM};
pub use quadrature::{
    adaptive_integral, gauss_laguerre_rule, gauss_laguerre_sqrt, semi_infinite_estimate, semi_infinite_integral,
    Estimate, GaussLaguerreRule, QuadratureMethod, QuadratureSpec, GAUSS_LAGUERRE_SLOPE_LIMIT,
};

/// `∫₀ᵗ e^{βs} I₀(α√(s(t−s))) ds` in closed form.
///
/// Equals `e^{βt/2} · 2 sinh(tρ/2) / ρ` with `ρ = √(α²+β²)`, and `t` when
/// `ρ = 0`.
pub fn bessel_arc_exp_integral(alpha: f64, beta: f64, t: f64) -> f64 {
    let rho = alpha.hypot(beta);
    (0.5 * beta * t).exp() * t * sinhc(0.5 * t * rho)
}

/// `e^{log_scale} ∫₀^∞ e^{-w²} w^power ∏ᵢ h(aᵢw) dw` with `h(x) = I₁(x)/x`.
///
/// Every density written as a Bessel-product integral reduces to this form
/// once the `√z` factors are absorbed into `h`, which stays finite on the
/// edge of the support. Small `Σaᵢ` uses Gauss–Laguerre; otherwise (or when
/// its error estimate is too large) the Gaussian bump at `w = Σaᵢ/2` is
/// integrated adaptively with the exponential growth of `h` factored out.
pub fn bessel_h_moment(power: i32, args: &[f64], log_scale: f64) -> Result<f64> {
    let slope: f64 = args.iter().sum();
    if slope <= GAUSS_LAGUERRE_SLOPE_LIMIT {
        let spec = QuadratureSpec {
            rel_tol: 1e-12,
            abs_tol: 0.0,
            ..QuadratureSpec::default()
        };
        let f = |w: f64| {
            let prod: f64 = args.iter().map(|&a| i1_over_x_scaled(a * w) * (a * w).exp()).product();
            (-w * w).exp() * w.powi(power) * prod
        };
        if let Ok(v) = semi_infinite_integral(f, &spec) {
            return Ok(v * log_scale.exp());
        }
    }
    let m = 0.5 * slope;
    let f = |w: f64| {
        let prod: f64 = args.iter().map(|&a| i1_over_x_scaled(a * w)).product();
        (-(w - m) * (w - m)).exp() * w.powi(power) * prod
    };
    let lo = (m - 14.0).max(0.0);
    let est = adaptive_integral(&f, lo, m + 14.0 + power as f64, 0.0, 1e-12, 2000)?;
    Ok(est.value * (log_scale + m * m).exp())
}

/// `sinh(x)/x`, continuous at zero.
pub fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 + x * x / 6.0
    } else {
        x.sinh() / x
    }
}

/// Closed form of `∫₀^∞ w³ e^{-w²} I₁(Aw) I₁(Bw) dw`:
/// `(e^{(A²+B²)/4}/4)[((A²+B²)/2) I₁(AB/2) + AB I₀(AB/2)]`.
pub fn bessel_product_integral(a: f64, b: f64) -> f64 {
    let s = a * a + b * b;
    let ab = a * b;
    0.25 * (0.25 * s).exp() * (0.5 * s * i1(0.5 * ab) + ab * i0(0.5 * ab))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_integral_limits() {
        assert_eq!(bessel_arc_exp_integral(0.0, 0.0, 2.0), 2.0);
        let v = bessel_arc_exp_integral(1.0, 0.0, 1.0);
        assert!((v - 2.0 * 0.5f64.sinh()).abs() < 1e-15);
        assert!((v - 1.0421906109874948).abs() < 1e-14);
    }

    #[test]
    fn arc_integral_matches_quadrature_grid() {
        for &alpha in &[0.0, 0.5, 1.0, 2.0, 4.0] {
            for &beta in &[-2.0, -0.5, 0.0, 1.0, 3.0] {
                for &t in &[0.3, 1.0, 2.5] {
                    let f = |s: f64| (beta * s).exp() * i0(alpha * (s * (t - s)).max(0.0).sqrt());
                    let q = adaptive_integral(&f, 0.0, t, 1e-13, 1e-13, 500).unwrap().value;
                    let c = bessel_arc_exp_integral(alpha, beta, t);
                    assert!((q - c).abs() < 1e-9 * c.max(1.0), "({alpha},{beta},{t}): {q} vs {c}");
                }
            }
        }
    }

    #[test]
    fn arc_integral_oracle_value() {
        let want = 0.5f64.exp() * 2.0 * (5f64.sqrt() / 2.0).sinh() / 5f64.sqrt();
        assert!((bessel_arc_exp_integral(2.0, 1.0, 1.0) - want).abs() < 1e-14);
        assert!((want - 2.0143227334583154).abs() < 1e-13);
    }

    #[test]
    fn product_identity_grid() {
        let grid = [0.5, 1.0, 2.0];
        for &a in &grid {
            for &b in &grid {
                let f = |w: f64| w.powi(3) * (-w * w).exp() * i1(a * w) * i1(b * w);
                let q = semi_infinite_integral(f, &QuadratureSpec::default()).unwrap();
                let c = bessel_product_integral(a, b);
                assert!((q - c).abs() < 1e-9 * c.max(1.0), "A={a} B={b}: {q} vs {c}");
            }
        }
    }

    #[test]
    fn product_identity_unit_case() {
        let c = bessel_product_integral(1.0, 1.0);
        let want = 0.5f64.exp() / 4.0 * (i1(0.5) + i0(0.5));
        assert!((c - want).abs() < 1e-15);
    }

    #[test]
    fn product_identity_large_arguments_use_adaptive() {
        let (a, b) = (12.0, 9.0);
        let f = |w: f64| w.powi(3) * (-w * w).exp() * i1(a * w) * i1(b * w);
        let q = semi_infinite_integral(f, &QuadratureSpec::for_gaussian_bump(a + b)).unwrap();
        let c = bessel_product_integral(a, b);
        assert!(((q - c) / c).abs() < 1e-9, "{q} vs {c}");
    }

    #[test]
    fn h_moment_matches_product_identity_across_paths() {
        // ∫ w³e^{-w²}I₁(Aw)I₁(Bw) = AB ∫ w⁵e^{-w²}h(Aw)h(Bw)
        for &(a, b) in &[(0.5, 1.0), (2.0, 3.0), (3.0, 4.0), (7.0, 9.5), (20.0, 15.0)] {
            let c = bessel_product_integral(a, b);
            let m = 0.5 * (a + b);
            let scaled = bessel_h_moment(5, &[a, b], -m * m).unwrap() * a * b;
            let want = c * (-m * m).exp();
            assert!(
                ((scaled - want) / want).abs() < 1e-10,
                "A={a} B={b}: {scaled} vs {want}"
            );
        }
    }

    #[test]
    fn derivative_identity() {
        let h = 1e-5;
        for &a in &[0.5, 1.0, 3.0] {
            let mut x = 0.1;
            while x <= 10.0 {
                let fd = (i0(a * (x + h)) - i0(a * (x - h))) / (2.0 * h);
                let exact = a * i1(a * x);
                assert!((fd - exact).abs() < 1e-8 * exact.abs().max(1.0), "A={a} x={x}");
                x += 0.37;
            }
        }
    }
}
