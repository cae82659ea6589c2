//! Time spent moving along each axis.
//!
//! `T_z` is the position of a two-speed motion: it grows at unit speed while
//! the particle moves vertically and stays put otherwise. The pair
//! `(T_x, T_y)` moves along `(1,0)`, `(0,1)` or `(0,0)` and maps affinely onto
//! the planar three-direction motion.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{check_positive, Error, Result};
use crate::ortho3d::{MotionKind, Path3D};
use crate::planar3::{uniform_integral, TrianglePoint};
use crate::specfun::{i0, i1};
use crate::telegraph::{sym_density_closed, two_speed_density, TelegraphParams, TwoSpeedParams};

const SQRT3: f64 = 1.7320508075688772;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OccupationTriple {
    pub tx: f64,
    pub ty: f64,
    pub tz: f64,
}

/// Occupation times of a path; `tz` is `horizon − tx − ty` so the sum is exact.
pub fn occupation_times(path: &Path3D) -> OccupationTriple {
    let (mut tx, mut ty) = (0.0, 0.0);
    for (d, a, b) in path.segments() {
        match d % 3 {
            0 => tx += b - a,
            1 => ty += b - a,
            _ => {}
        }
    }
    OccupationTriple {
        tx,
        ty,
        tz: path.horizon - tx - ty,
    }
}

/// Two-speed parameters of `T_z`: moving rate, still rate, `P{vertical start} = 1/3`.
pub fn tz_params(kind: MotionKind, lambda: f64) -> Result<TwoSpeedParams> {
    let (kind, f) = kind.analytic_equivalent();
    let lambda = f * lambda;
    match kind {
        MotionKind::Osm => TwoSpeedParams::new(lambda, 0.5 * lambda, 1.0 / 3.0),
        _ => TwoSpeedParams::new(2.0 * lambda / 3.0, lambda / 3.0, 1.0 / 3.0),
    }
}

/// Density of `T_z(t)` on `(0, t)`.
pub fn tz_density(kind: MotionKind, lambda: f64, t: f64, s: f64) -> Result<f64> {
    two_speed_density(&tz_params(kind, lambda)?, t, s)
}

/// OSM closed form `(e^{-λ(t+s)/2}/3)(2λ + 3∂ₜ + 2∂ₛ) I₀(λ√(2s(t−s)))`.
pub fn tz_density_osm_closed(lambda: f64, t: f64, s: f64) -> Result<f64> {
    check_positive("lambda", lambda)?;
    check_positive("t", t)?;
    if !(s > 0.0 && s < t) {
        return Err(Error::Domain(format!("s = {s} not in (0, {t})")));
    }
    let r = (2.0 * s * (t - s)).sqrt();
    let z = lambda * r;
    // (3∂ₜ + 2∂ₛ) r = (3s + 2(t − 2s)) / r = (2t − s)/r
    Ok(lambda * (-0.5 * lambda * (t + s)).exp() / 3.0 * (2.0 * i0(z) + (2.0 * t - s) / r * i1(z)))
}

/// Masses of `T_z(t)` at `0` and at `t`.
pub fn tz_masses(kind: MotionKind, cum_rate: f64) -> (f64, f64) {
    let (kind, f) = kind.analytic_equivalent();
    let l = f * cum_rate;
    match kind {
        MotionKind::Osm => (2.0 / 3.0 * (-0.5 * l).exp(), (-l).exp() / 3.0),
        _ => (2.0 / 3.0 * (-l / 3.0).exp(), (-2.0 * l / 3.0).exp() / 3.0),
    }
}

/// Density of `(T_x, T_y)` at `(s, r)` inside the simplex `s, r > 0, s + r < t`:
/// `(3√3c²/2) q(t, (c/2)(3s−t), (√3c/2)(s+2r−t))` with `q` the planar
/// density of the SD motion (OSM) or the uniform motion (OUM) with rate `λ`.
///
/// The factor `c²` cancels against `q`, so the value does not depend on `c`.
pub fn joint_txty_density(kind: MotionKind, lambda: f64, c: f64, t: f64, s: f64, r: f64) -> Result<f64> {
    check_positive("lambda", lambda)?;
    check_positive("c", c)?;
    check_positive("t", t)?;
    if !(s > 0.0 && r > 0.0 && s + r < t) {
        return Err(Error::Domain(format!(
            "({s}, {r}) is not inside the simplex of side {t}"
        )));
    }
    let (kind, f) = kind.analytic_equivalent();
    let lambda = f * lambda;
    let uniform_rate = match kind {
        MotionKind::Osm => 1.5 * lambda,
        _ => lambda,
    };
    let mut pt = TrianglePoint::new(0.5 * c * (3.0 * s - t), 0.5 * SQRT3 * c * (s + 2.0 * r - t), t, c);
    pt.z = [3.0 * c * s, 3.0 * c * r, 3.0 * c * (t - s - r)];
    Ok(1.5 * SQRT3 * c * c * uniform_integral(uniform_rate, c, &pt)?)
}

/// Absolutely continuous `T_x` density from paths that use exactly two axes
/// (x and one other), matching the interior marginal of [`joint_txty_density`]
/// up to `tz_density`.
pub fn tx_two_axis_density(kind: MotionKind, lambda: f64, t: f64, s: f64) -> Result<f64> {
    let (kind, f) = kind.analytic_equivalent();
    let lambda = f * lambda;
    let (survive, rate) = match kind {
        MotionKind::Osm => ((-0.5 * lambda * t).exp(), 0.5 * lambda),
        _ => ((-lambda * t / 3.0).exp(), lambda / 3.0),
    };
    let p = TwoSpeedParams::new(rate, rate, 0.5)?;
    Ok(2.0 * (2.0 / 3.0) * survive * two_speed_density(&p, t, s)?)
}

/// `P{T_z(t) ∈ ds, Z(t) = cs}/ds` for an OUM:
/// `(5/6)e^{-λt/6}` times the two-speed density with rates `2λ/3`, `λ/6` and
/// vertical start probability `1/5`.
pub fn cond_z_eq_ctz_density_oum(lambda: f64, t: f64, s: f64) -> Result<f64> {
    let p = TwoSpeedParams::new(2.0 * lambda / 3.0, lambda / 6.0, 0.2)?;
    Ok(5.0 / 6.0 * (-lambda * t / 6.0).exp() * two_speed_density(&p, t, s)?)
}

/// `P{Z(t) = cT_z(t)}` for an OUM, `(5/6)e^{-Λ/6}`.
pub fn prob_z_eq_ctz_oum(cum_rate: f64) -> f64 {
    5.0 / 6.0 * (-cum_rate / 6.0).exp()
}

/// `P{T_z(t) = t, Z(t) ∈ dz}/dz` for an OUM on `|z| < ct`:
/// `(1/3)e^{-2λt/3}` times the telegraph density with rate `λ/6`.
pub fn cond_tz_eq_t_density_oum(lambda: f64, c: f64, t: f64, z: f64) -> Result<f64> {
    let tel = TelegraphParams::new(lambda / 6.0, c)?;
    Ok((-2.0 * lambda * t / 3.0).exp() / 3.0 * sym_density_closed(&tel, t, z)?)
}

/// Initial direction class for the OSM run counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStart {
    /// `D(0) = d₂`; `k` counts the vertical displacements after the first.
    Vertical,
    /// `D(0) ∈ {d₀, d₁, d₃, d₄}`; `k` counts all vertical displacements.
    Horizontal,
}

/// `C(n, k)` with `0` outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> i64 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

/// Exact OSM probability that, given `N(t) = n`, the path starts in `start`,
/// never moves along `d₅` (so `Z = cT_z`) and has `k` vertical displacements
/// (`k + 1` for a vertical start).
///
/// Vertical: `(1/6)[2⁻ⁿ C(n−k−1, k−1) + 2^{-(n−1)} C(n−k−1, k)]`, plus the
/// single path `d₂` when `n = 0`.
/// Horizontal: `(1/3)[2^{-(n−1)} C(n−k, k) + 2⁻ⁿ C(n−k, k−1)]`.
pub fn osm_run_probability_exact(n: u32, k: u32, start: RunStart) -> Ratio<i64> {
    let (n, k) = (n as i64, k as i64);
    let pow = 1i64 << n;
    match start {
        RunStart::Vertical => {
            if n == 0 {
                return Ratio::new(if k == 0 { 1 } else { 0 }, 6);
            }
            Ratio::new(binomial(n - k - 1, k - 1) + 2 * binomial(n - k - 1, k), 6 * pow)
        }
        RunStart::Horizontal => Ratio::new(2 * binomial(n - k, k) + binomial(n - k, k - 1), 3 * pow),
    }
}

pub fn osm_run_probability(n: u32, k: u32, start: RunStart) -> f64 {
    let r = osm_run_probability_exact(n, k, start);
    *r.numer() as f64 / *r.denom() as f64
}

/// `P{Z(t) = cT_z(t)}` for an OSM with constant rate, by summing the run
/// probabilities against the Poisson law of `N(t)`.
pub fn prob_z_eq_ctz_osm(cum_rate: f64) -> f64 {
    let mut total = 0.0;
    let mut pois = (-cum_rate).exp();
    for n in 0..60u32 {
        if n > 0 {
            pois *= cum_rate / n as f64;
        }
        let runs: f64 = (0..=n / 2 + 1)
            .map(|k| osm_run_probability(n, k, RunStart::Vertical) + osm_run_probability(n, k, RunStart::Horizontal))
            .sum();
        total += pois * runs;
        if n as f64 > cum_rate && pois < 1e-18 {
            break;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::adaptive_integral;

    fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        adaptive_integral(&f, a, b, 1e-14, 1e-13, 1000).unwrap().value
    }

    #[test]
    fn tz_normalizations() {
        let osm = integrate(|s| tz_density(MotionKind::Osm, 1.0, 1.0, s).unwrap(), 0.0, 1.0);
        let oum = integrate(|s| tz_density(MotionKind::Oum, 1.0, 1.0, s).unwrap(), 0.0, 1.0);
        let e = |x: f64| (-x).exp();
        assert!((osm - (1.0 - 2.0 / 3.0 * e(0.5) - e(1.0) / 3.0)).abs() < 1e-10);
        assert!((oum - (1.0 - 2.0 / 3.0 * e(1.0 / 3.0) - e(2.0 / 3.0) / 3.0)).abs() < 1e-10);
    }

    #[test]
    fn osm_closed_form_agrees_with_series() {
        for &(l, t) in &[(1.0, 1.0), (2.5, 0.8), (0.3, 4.0)] {
            for i in 1..20 {
                let s = t * i as f64 / 20.0;
                let a = tz_density_osm_closed(l, t, s).unwrap();
                let b = tz_density(MotionKind::Osm, l, t, s).unwrap();
                assert!((a - b).abs() < 1e-12 * a.max(1.0), "{l} {t} {s}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn tz_mass_values() {
        let (a, b) = tz_masses(MotionKind::Osm, 1.0);
        assert!((a - 0.40435377314175563).abs() < 1e-15 && (b - 0.12262648039048078).abs() < 1e-15);
        let (a, b) = tz_masses(MotionKind::Oum, 1e-12);
        assert!((a - 2.0 / 3.0).abs() < 1e-11 && (b - 1.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn z_eq_ctz_integral() {
        let v = integrate(|s| cond_z_eq_ctz_density_oum(1.0, 1.0, s).unwrap(), 0.0, 1.0);
        let e = |x: f64| (-x).exp();
        let want = 5.0 / 6.0 * e(1.0 / 6.0) - 2.0 / 3.0 * e(1.0 / 3.0) - e(5.0 / 6.0) / 6.0;
        assert!((v - want).abs() < 1e-10);
        assert!((want - 0.15528086227513926).abs() < 1e-14);
    }

    #[test]
    fn tz_eq_t_integral() {
        let v = integrate(
            |z| cond_tz_eq_t_density_oum(1.0, 1.0, 1.0, z).unwrap(),
            -1.0 + 1e-15,
            1.0 - 1e-15,
        );
        let want = ((-2.0f64 / 3.0).exp() - (-5.0f64 / 6.0).exp()) / 3.0;
        assert!((v - want).abs() < 1e-10);
        assert_eq!(
            cond_tz_eq_t_density_oum(1.0, 1.0, 1.0, 0.4).unwrap(),
            cond_tz_eq_t_density_oum(1.0, 1.0, 1.0, -0.4).unwrap()
        );
    }

    #[test]
    fn conditional_law_does_not_factor() {
        // If P{Z = cs | T_z = s} were a telegraph atom e^{-μs}/2, the log
        // ratio below would be linear in s for some μ.
        let ratio = |s: f64| {
            (cond_z_eq_ctz_density_oum(1.0, 1.0, s).unwrap() / tz_density(MotionKind::Oum, 1.0, 1.0, s).unwrap()).ln()
        };
        let second = ratio(0.3) - 2.0 * ratio(0.4) + ratio(0.5);
        assert!(second.abs() > 1e-3, "{second}");
    }

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(-1, 0), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn run_probability_example() {
        assert_eq!(osm_run_probability_exact(2, 1, RunStart::Vertical), Ratio::new(1, 24));
    }
}
