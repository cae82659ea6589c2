//! One-dimensional telegraph laws.
//!
//! The symmetric telegraph process moves at speed `c`, reversing at the
//! events of a Poisson process with rate `λ`. Its law at time `t` has atoms
//! of mass `e^{-λt}/2` at `±ct` and a density on `(-ct, ct)`, available here
//! in closed, double-series and Bessel-integral form. All three take the
//! classical rate `λ`.
//!
//! The two-speed motion alternates between velocity 1 and velocity 0; its
//! position is an occupation time.

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, Error, Result};
use crate::rng::{exp1, Rng};
use crate::specfun::{bessel_h_moment, bessel_i_scaled, i1_over_x_scaled, ln_factorial};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TelegraphParams {
    pub lambda: f64,
    pub c: f64,
}

impl TelegraphParams {
    pub fn new(lambda: f64, c: f64) -> Result<Self> {
        check_positive("lambda", lambda)?;
        check_positive("c", c)?;
        Ok(Self { lambda, c })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSpeedParams {
    /// Switching rate while moving.
    pub lambda_move: f64,
    /// Switching rate while standing still.
    pub lambda_still: f64,
    /// Probability of starting with velocity 1.
    pub p_move0: f64,
}

impl TwoSpeedParams {
    pub fn new(lambda_move: f64, lambda_still: f64, p_move0: f64) -> Result<Self> {
        check_positive("lambda_move", lambda_move)?;
        check_positive("lambda_still", lambda_still)?;
        if !(0.0..=1.0).contains(&p_move0) {
            return Err(Error::InvalidParameter(format!(
                "p_move0 must lie in [0, 1], got {p_move0}"
            )));
        }
        Ok(Self {
            lambda_move,
            lambda_still,
            p_move0,
        })
    }

    /// Masses at `s = 0` (never moved) and `s = t` (never stopped).
    pub fn border_masses(&self, t: f64) -> (f64, f64) {
        (
            (1.0 - self.p_move0) * (-self.lambda_still * t).exp(),
            self.p_move0 * (-self.lambda_move * t).exp(),
        )
    }
}

fn check_open_interval(t: f64, x: f64, half_width: f64) -> Result<()> {
    check_positive("t", t)?;
    if !(x.abs() < half_width) {
        return Err(Error::Domain(format!(
            "|x| = {} is not below ct = {half_width}",
            x.abs()
        )));
    }
    Ok(())
}

/// Closed form `(e^{-λt}/2c)[λ I₀(λr/c) + ∂ₜ I₀(λr/c)]`, `r = √(c²t²−x²)`.
///
/// `∂ₜ I₀` is expanded through `I₀' = I₁`, giving `(λ/c)² c² t · I₁(z)/z`.
pub fn sym_density_closed(p: &TelegraphParams, t: f64, x: f64) -> Result<f64> {
    check_open_interval(t, x, p.c * t)?;
    let (lambda, c) = (p.lambda, p.c);
    let r = ((c * t - x) * (c * t + x)).sqrt();
    let z = lambda * r / c;
    let damp = (z - lambda * t).exp();
    let i0 = bessel_i_scaled(0, z);
    let i1_over_z = i1_over_x_scaled(z);
    Ok(damp / (2.0 * c) * (lambda * i0 + lambda * lambda * t * i1_over_z))
}

/// The double series over reversal counts to the left and to the right.
pub fn sym_density_series(p: &TelegraphParams, t: f64, x: f64) -> Result<f64> {
    check_open_interval(t, x, p.c * t)?;
    let (lambda, c) = (p.lambda, p.c);
    let la = (2.0 * lambda / c).ln();
    let (lm, ln) = ((c * t - x).ln(), (c * t + x).ln());
    let ln4 = 4f64.ln();
    let log_term = |m: usize, n: usize| {
        let k = (m + n + 1) as f64;
        k * (la - ln4) + m as f64 * lm + n as f64 * ln + ln_factorial(m + n + 2)
            - ln_factorial(m)
            - ln_factorial(m + 1)
            - ln_factorial(n)
            - ln_factorial(n + 1)
    };
    let shells = summed_shells(|n_total| (0..=n_total).map(|m| log_term(m, n_total - m)).collect())?;
    Ok(0.5 * (shells - 2.0 * lambda * t).exp())
}

/// Log of `Σ_N Σ_{terms in shell N}`, stopping when shells are decreasing
/// and a geometric bound on the remaining tail falls below `1e-16`.
pub(crate) fn summed_shells<F: Fn(usize) -> Vec<f64>>(shell_logs: F) -> Result<f64> {
    let mut total = f64::NEG_INFINITY;
    let mut prev = f64::NEG_INFINITY;
    for n in 0..100_000 {
        let shell = log_sum_exp(&shell_logs(n));
        total = log_add(total, shell);
        if n > 2 && shell < prev {
            let ratio = (shell - prev).exp();
            let tail = shell + (ratio / (1.0 - ratio)).ln();
            if tail - total < (1e-16f64).ln() {
                return Ok(total);
            }
        }
        prev = shell;
    }
    Err(Error::NotConverged {
        estimate: total.exp(),
        error: prev.exp(),
    })
}

pub(crate) fn log_sum_exp(logs: &[f64]) -> f64 {
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + logs.iter().map(|l| (l - max).exp()).sum::<f64>().ln()
}

fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

/// `e^{-2λt}/√(c²t²−x²) ∫₀^∞ e^{-w²} w³ I₁(Aw) I₁(Bw) dw` with
/// `A, B = √((2λ/c)(ct ∓ x))`.
pub fn sym_density_integral(p: &TelegraphParams, t: f64, x: f64) -> Result<f64> {
    check_open_interval(t, x, p.c * t)?;
    let (lambda, c) = (p.lambda, p.c);
    let a = (2.0 * lambda / c * (c * t - x)).sqrt();
    let b = (2.0 * lambda / c * (c * t + x)).sqrt();
    // I₁(Aw)I₁(Bw)/√(c²t²−x²) = (2λ/c) w² h(Aw) h(Bw)
    Ok(2.0 * lambda / c * bessel_h_moment(5, &[a, b], -2.0 * lambda * t)?)
}

/// Total mass `e^{-λt}` of the two atoms at `±ct`.
pub fn sym_singular_mass(p: &TelegraphParams, t: f64) -> f64 {
    (-p.lambda * t).exp()
}

/// `P{X(t) ≤ x}` including the atoms.
pub fn sym_cdf(p: &TelegraphParams, t: f64, x: f64) -> Result<f64> {
    check_positive("t", t)?;
    let ct = p.c * t;
    let atom = 0.5 * sym_singular_mass(p, t);
    if x < -ct {
        return Ok(0.0);
    }
    if x >= ct {
        return Ok(1.0);
    }
    let f = |y: f64| {
        if y.abs() < ct {
            sym_density_closed(p, t, y).unwrap_or(0.0)
        } else {
            0.0
        }
    };
    let body = crate::specfun::adaptive_integral(&f, -ct, x, 1e-13, 1e-12, 2000)?.value;
    Ok(atom + body)
}

/// Exact simulation of `X(t)`: uniform initial sign, exponential holding times.
pub fn sample_telegraph<R: Rng + ?Sized>(p: &TelegraphParams, t: f64, rng: &mut R) -> f64 {
    let mut sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    let mut now = 0.0;
    let mut x = 0.0;
    loop {
        let next = now + exp1(rng) / p.lambda;
        if next >= t {
            return x + sign * p.c * (t - now);
        }
        x += sign * p.c * (next - now);
        sign = -sign;
        now = next;
    }
}

/// Density of the moving time `s` at horizon `t` for the two-speed motion.
///
/// Summed over the number `k` of moving spells. With `a`, `b` the moving
/// and still rates, `u = t − s` and `E = e^{-as-bu}`, a path that starts
/// moving and ends still has `k` moving spells (Erlang(k) total `s`) and `k`
/// still spells, the last one censored, contributing
/// `E aᵏ bᵏ⁻¹ sᵏ⁻¹uᵏ⁻¹/((k−1)!)²`; the other three start/end combinations
/// are analogous.
pub fn two_speed_density(p: &TwoSpeedParams, t: f64, s: f64) -> Result<f64> {
    check_positive("t", t)?;
    if !(s > 0.0 && s < t) {
        return Err(Error::Domain(format!("moving time {s} not in (0, {t})")));
    }
    let (a, b, pm) = (p.lambda_move, p.lambda_still, p.p_move0);
    let u = t - s;
    let log_e = -a * s - b * u;
    let y = a * b * s * u;
    let ly = y.ln();
    // Starting moving: end moving (f11) or still (f10); starting still: f00, f01.
    let mut logs = Vec::new();
    let mut j = 0usize;
    loop {
        let jf = j as f64;
        let pow = jf * ly;
        let l2 = 2.0 * ln_factorial(j);
        let l11 = ln_factorial(j) + ln_factorial(j + 1);
        let f10 = a.ln() + pow - l2;
        let f01 = b.ln() + pow - l2;
        let f11 = (a * b * s).ln() + pow - l11;
        let f00 = (a * b * u).ln() + pow - l11;
        let mut group = Vec::with_capacity(4);
        if pm > 0.0 {
            group.push(pm.ln() + log_add(f11, f10));
        }
        if pm < 1.0 {
            group.push((1.0 - pm).ln() + log_add(f00, f01));
        }
        let g = log_sum_exp(&group);
        logs.push(g);
        // Beyond j ≈ √y successive groups shrink at least geometrically
        // with ratio y/(j+1)², which bounds the tail.
        let r = y / ((jf + 1.0) * (jf + 1.0));
        if r < 0.5 {
            let total = log_sum_exp(&logs);
            let tail = g + (r / (1.0 - r)).ln();
            if tail - total < (1e-13f64).ln() + (-8.0) {
                return Ok((total + log_e).exp());
            }
        }
        j += 1;
        if j > 100_000 {
            return Err(Error::NotConverged {
                estimate: (log_sum_exp(&logs) + log_e).exp(),
                error: f64::NAN,
            });
        }
    }
}

/// Exact simulation of the moving time of the two-speed motion.
pub fn sample_two_speed<R: Rng + ?Sized>(p: &TwoSpeedParams, t: f64, rng: &mut R) -> f64 {
    let mut moving = rng.random::<f64>() < p.p_move0;
    let mut now = 0.0;
    let mut s = 0.0;
    loop {
        let rate = if moving { p.lambda_move } else { p.lambda_still };
        let next = now + exp1(rng) / rate;
        let end = next.min(t);
        if moving {
            s += end - now;
        }
        if next >= t {
            return s;
        }
        moving = !moving;
        now = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::path_stream;
    use crate::specfun::{adaptive_integral, i0, i1};

    fn tp(lambda: f64, c: f64) -> TelegraphParams {
        TelegraphParams::new(lambda, c).unwrap()
    }

    #[test]
    fn closed_form_at_origin() {
        let v = sym_density_closed(&tp(1.0, 1.0), 1.0, 0.0).unwrap();
        let oracle = (-1f64).exp() * (i0(1.0) + i1(1.0)) / 2.0;
        assert!((v - oracle).abs() < 1e-15);
        assert!((v - 0.336835011471674).abs() < 1e-13);
    }

    #[test]
    fn three_forms_agree_on_examples() {
        for &(l, c, t, x) in &[
            (1.0, 1.0, 1.0, 0.0),
            (1.0, 1.0, 1.0, 0.7),
            (3.0, 1.0, 0.5, 0.2),
            (2.0, 1.0, 1.0, 0.3),
            (0.5, 2.0, 2.0, 1.0),
        ] {
            let p = tp(l, c);
            let a = sym_density_closed(&p, t, x).unwrap();
            let s = sym_density_series(&p, t, x).unwrap();
            let i = sym_density_integral(&p, t, x).unwrap();
            assert!((a - s).abs() < 1e-9, "series at {l},{c},{t},{x}: {a} vs {s}");
            assert!((a - i).abs() < 1e-9, "integral at {l},{c},{t},{x}: {a} vs {i}");
        }
        assert!((sym_density_closed(&tp(0.5, 2.0), 2.0, 1.0).unwrap() - 0.0832050694225507).abs() < 1e-13);
    }

    #[test]
    fn forms_agree_near_the_front() {
        let p = tp(1.0, 1.0);
        let x = 1.0 - 1e-12;
        let a = sym_density_closed(&p, 1.0, x).unwrap();
        let s = sym_density_series(&p, 1.0, x).unwrap();
        let i = sym_density_integral(&p, 1.0, x).unwrap();
        // Limit: (e^{-λt}/2c)(λ + λ²t/2)
        let limit = (-1f64).exp() / 2.0 * 1.5;
        assert!((a - limit).abs() < 1e-10 && (s - limit).abs() < 1e-10 && (i - limit).abs() < 1e-10);
    }

    #[test]
    fn density_outside_is_domain_error() {
        let p = tp(1.0, 1.0);
        assert!(matches!(sym_density_closed(&p, 1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(sym_density_series(&p, 1.0, -2.0), Err(Error::Domain(_))));
        assert!(matches!(sym_density_integral(&p, 1.0, 1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn total_mass_is_one() {
        for &(l, c, t) in &[(1.0, 1.0, 1.0), (4.0, 0.5, 2.0), (0.2, 3.0, 0.7)] {
            let p = tp(l, c);
            let f = |x: f64| sym_density_closed(&p, t, x).unwrap();
            let ct = c * t;
            let body = adaptive_integral(&f, -ct * (1.0 - 1e-15), ct * (1.0 - 1e-15), 1e-13, 1e-12, 500)
                .unwrap()
                .value;
            assert!((body + sym_singular_mass(&p, t) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn singular_mass_values() {
        assert!((sym_singular_mass(&tp(1.0, 1.0), 1.0) - 0.36787944117144233).abs() < 1e-16);
        assert!((sym_singular_mass(&tp(1e-12, 1.0), 1.0) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn large_rate_does_not_overflow() {
        let p = tp(400.0, 20.0);
        let a = sym_density_closed(&p, 1.0, 0.3).unwrap();
        let i = sym_density_integral(&p, 1.0, 0.3).unwrap();
        assert!(a.is_finite() && a > 0.0);
        assert!(((a - i) / a).abs() < 1e-8, "{a} vs {i}");
    }

    #[test]
    fn two_speed_matches_osm_closed_form() {
        let (lambda, t, s) = (1.0f64, 1.0f64, 0.4f64);
        let p = TwoSpeedParams::new(lambda, lambda / 2.0, 1.0 / 3.0).unwrap();
        let r = (2.0 * s * (t - s)).sqrt();
        let closed = lambda * (-(lambda * (t + s)) / 2.0).exp() / 3.0
            * (2.0 * i0(lambda * r) + (2.0 * t - s) / r * i1(lambda * r));
        let series = two_speed_density(&p, t, s).unwrap();
        assert!((closed - series).abs() < 1e-12, "{closed} vs {series}");
        assert!((series - 0.5125201271920991).abs() < 1e-12);
    }

    #[test]
    fn two_speed_normalizations() {
        let cases = [
            (TwoSpeedParams::new(1.0, 0.5, 1.0 / 3.0).unwrap(), 0.4730197464677636),
            (
                TwoSpeedParams::new(2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0).unwrap(),
                0.3511734199399432,
            ),
        ];
        for (p, want) in cases {
            let f = |s: f64| two_speed_density(&p, 1.0, s).unwrap();
            let v = adaptive_integral(&f, 1e-300, 1.0 - 1e-16, 1e-13, 1e-12, 500)
                .unwrap()
                .value;
            let (m0, m1) = p.border_masses(1.0);
            assert!((v - want).abs() < 1e-10, "{v}");
            assert!((v + m0 + m1 - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn two_speed_large_horizon_is_finite() {
        let p = TwoSpeedParams::new(50.0, 20.0, 0.5).unwrap();
        let v = two_speed_density(&p, 20.0, 7.0).unwrap();
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn sampler_mean_is_zero_and_atoms_split() {
        let p = tp(1e-9, 1.0);
        let mut rng = path_stream(3, 0);
        let hits = (0..10_000)
            .filter(|_| sample_telegraph(&p, 1.0, &mut rng) == 1.0)
            .count();
        assert!((hits as f64 - 5000.0).abs() < 3.0 * 50.0);
    }

    #[test]
    fn cdf_endpoints() {
        let p = tp(1.0, 1.0);
        assert_eq!(sym_cdf(&p, 1.0, -1.5).unwrap(), 0.0);
        assert!((sym_cdf(&p, 1.0, 0.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((sym_cdf(&p, 1.0, -1.0).unwrap() - 0.5 * (-1f64).exp()).abs() < 1e-15);
    }
}
