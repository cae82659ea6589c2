//! Goodness-of-fit statistics for Monte Carlo comparisons.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::grid::DensityGrid;
use crate::specfun::adaptive_integral;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatTest {
    Ks,
    Chi2,
    Tv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub test: StatTest,
    pub statistic: f64,
    pub threshold: f64,
    pub n_samples: u64,
    pub pass: bool,
    /// Asymptotic p-value where one exists.
    pub p_value: Option<f64>,
}

impl StatReport {
    fn new(test: StatTest, statistic: f64, threshold: f64, n_samples: u64, p_value: Option<f64>) -> Self {
        Self {
            test,
            statistic,
            threshold,
            n_samples,
            pass: statistic <= threshold,
            p_value,
        }
    }
}

/// A distribution function with its left limits, so atoms are allowed.
pub trait Cdf {
    fn cdf(&self, x: f64) -> f64;

    /// `P(X < x)`.
    fn cdf_left(&self, x: f64) -> f64 {
        self.cdf(x)
    }
}

impl<F: Fn(f64) -> f64> Cdf for F {
    fn cdf(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Piecewise-linear distribution function built from a density on
/// `[lower, upper]` plus point masses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedCdf {
    knots: Vec<f64>,
    /// Absolutely continuous mass on `[lower, knots[i]]`.
    cumulative: Vec<f64>,
    atoms: Vec<(f64, f64)>,
}

impl TabulatedCdf {
    /// Integrates `density` over `cells` equal cells with a 15-point
    /// Gauss–Kronrod rule per cell.
    pub fn from_density<F: Fn(f64) -> f64>(
        density: F,
        lower: f64,
        upper: f64,
        cells: usize,
        atoms: &[(f64, f64)],
    ) -> Result<Self> {
        if !(lower < upper) || cells == 0 {
            return Err(Error::InvalidParameter(
                "need lower < upper and at least one cell".into(),
            ));
        }
        let h = (upper - lower) / cells as f64;
        let mut knots = Vec::with_capacity(cells + 1);
        let mut cumulative = Vec::with_capacity(cells + 1);
        knots.push(lower);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for i in 0..cells {
            let a = lower + i as f64 * h;
            let b = if i + 1 == cells { upper } else { a + h };
            acc += adaptive_integral(&density, a, b, 1e-14, 1e-10, 64)?.value;
            knots.push(b);
            cumulative.push(acc);
        }
        let mut atoms = atoms.to_vec();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self {
            knots,
            cumulative,
            atoms,
        })
    }

    /// Total mass; 1 for a proper distribution.
    pub fn total_mass(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0) + self.atoms.iter().map(|a| a.1).sum::<f64>()
    }

    fn continuous(&self, x: f64) -> f64 {
        let n = self.knots.len();
        if x <= self.knots[0] {
            return 0.0;
        }
        if x >= self.knots[n - 1] {
            return self.cumulative[n - 1];
        }
        let i = self.knots.partition_point(|&k| k <= x) - 1;
        let w = (x - self.knots[i]) / (self.knots[i + 1] - self.knots[i]);
        self.cumulative[i] + w * (self.cumulative[i + 1] - self.cumulative[i])
    }
}

impl Cdf for TabulatedCdf {
    fn cdf(&self, x: f64) -> f64 {
        self.continuous(x) + self.atoms.iter().filter(|a| a.0 <= x).map(|a| a.1).sum::<f64>()
    }

    fn cdf_left(&self, x: f64) -> f64 {
        self.continuous(x) + self.atoms.iter().filter(|a| a.0 < x).map(|a| a.1).sum::<f64>()
    }
}

/// Kolmogorov survival function `P(K > x)`.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 1.0 {
        let mut s = 0.0;
        for k in 1..=20 {
            let m = (2 * k - 1) as f64;
            s += (-m * m * std::f64::consts::PI.powi(2) / (8.0 * x * x)).exp();
        }
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / x * s
    } else {
        let mut s = 0.0;
        for k in 1..=100 {
            let kf = k as f64;
            let term = (-2.0 * kf * kf * x * x).exp();
            s += if k % 2 == 1 { term } else { -term };
            if term < 1e-17 {
                break;
            }
        }
        (2.0 * s).clamp(0.0, 1.0)
    }
}

/// `x` with `P(K > x) = alpha`.
pub fn kolmogorov_quantile(alpha: f64) -> f64 {
    let (mut lo, mut hi) = (0.1, 5.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_sf(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn effective_sqrt_n(n: f64) -> f64 {
    // Stephens' finite-sample correction.
    n.sqrt() + 0.12 + 0.11 / n.sqrt()
}

/// One-sample Kolmogorov–Smirnov test at level `alpha`.
///
/// Ties and atoms are handled by comparing both one-sided limits at every
/// distinct sample value; the test is conservative when `cdf` has atoms.
pub fn ks_test<C: Cdf + ?Sized>(samples: &[f64], cdf: &C, alpha: f64) -> Result<StatReport> {
    if samples.is_empty() || samples.iter().any(|x| x.is_nan()) {
        return Err(Error::InvalidParameter(
            "KS test needs non-empty, NaN-free samples".into(),
        ));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let v = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == v {
            j += 1;
        }
        let below = i as f64 / n;
        let upto = j as f64 / n;
        d = d.max((upto - cdf.cdf(v)).abs()).max((below - cdf.cdf_left(v)).abs());
        i = j;
    }
    let sn = effective_sqrt_n(n);
    let threshold = kolmogorov_quantile(alpha) / sn;
    Ok(StatReport::new(
        StatTest::Ks,
        d,
        threshold,
        xs.len() as u64,
        Some(kolmogorov_sf(sn * d)),
    ))
}

/// Pearson χ² test of `observed` counts against `expected` probabilities at
/// level `alpha`. Adjacent bins are pooled until each expected count is at
/// least 5.
pub fn chi2_test(observed: &[u64], expected: &[f64], alpha: f64) -> Result<StatReport> {
    if observed.len() != expected.len() || observed.is_empty() {
        return Err(Error::InvalidParameter(
            "observed and expected must be non-empty and aligned".into(),
        ));
    }
    let total_p: f64 = expected.iter().sum();
    if expected.iter().any(|p| *p < 0.0) || (total_p - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidParameter(format!(
            "expected probabilities must sum to 1, got {total_p}"
        )));
    }
    let n: u64 = observed.iter().sum();
    if n == 0 {
        return Err(Error::InvalidParameter("no observations".into()));
    }
    let nf = n as f64;
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&ob, &p) in observed.iter().zip(expected) {
        o += ob as f64;
        e += p * nf;
        if e >= 5.0 {
            pooled.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => pooled.push((o, e)),
        }
    }
    if pooled.len() < 2 {
        return Err(Error::InvalidParameter("fewer than two bins after pooling".into()));
    }
    let stat: f64 = pooled.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dist = ChiSquared::new((pooled.len() - 1) as f64)
        .map_err(|e| Error::InvalidParameter(format!("chi-squared distribution: {e}")))?;
    let threshold = dist.inverse_cdf(1.0 - alpha);
    Ok(StatReport::new(StatTest::Chi2, stat, threshold, n, Some(dist.sf(stat))))
}

/// Total-variation distance `½ Σ |p_a − p_b|` over aligned bins.
pub fn tv_distance(a: &DensityGrid, b: &DensityGrid) -> Result<f64> {
    if a.geometry != b.geometry {
        return Err(Error::InvalidParameter("grids have different bin geometries".into()));
    }
    let pa = a.probabilities();
    let pb = b.probabilities();
    Ok(0.5 * pa.iter().zip(&pb).map(|(x, y)| (x - y).abs()).sum::<f64>())
}

/// [`tv_distance`] as a report against `threshold`.
pub fn tv_test(a: &DensityGrid, b: &DensityGrid, threshold: f64) -> Result<StatReport> {
    let tv = tv_distance(a, b)?;
    Ok(StatReport::new(
        StatTest::Tv,
        tv,
        threshold,
        a.n_samples.min(b.n_samples),
        None,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BinGeometry;
    use crate::rng::{path_stream, Rng};

    #[test]
    fn kolmogorov_reference_values() {
        // Standard tables: K_{0.95} = 1.3581, K_{0.99} = 1.6276.
        assert!((kolmogorov_quantile(0.05) - 1.35810).abs() < 1e-4);
        assert!((kolmogorov_quantile(0.01) - 1.62762).abs() < 1e-4);
        // Both series agree near their switch point.
        let x: f64 = 1.0;
        let mut s = 0.0;
        for k in 1..50 {
            let kf = k as f64;
            s += (if k % 2 == 1 { 1.0 } else { -1.0 }) * (-2.0 * kf * kf * x * x).exp();
        }
        assert!((kolmogorov_sf(0.999_999_999) - 2.0 * s).abs() < 1e-8);
    }

    #[test]
    fn ks_accepts_uniform_and_rejects_shifted() {
        let mut rng = path_stream(11, 0);
        let xs: Vec<f64> = (0..20_000).map(|_| rng.random::<f64>()).collect();
        let unif = |x: f64| x.clamp(0.0, 1.0);
        assert!(ks_test(&xs, &unif, 0.01).unwrap().pass);
        let shifted = |x: f64| (x - 0.02).clamp(0.0, 1.0);
        assert!(!ks_test(&xs, &shifted, 0.01).unwrap().pass);
    }

    #[test]
    fn ks_with_atom() {
        let mut rng = path_stream(12, 0);
        let xs: Vec<f64> = (0..20_000)
            .map(|_| {
                if rng.random::<f64>() < 0.3 {
                    1.0
                } else {
                    rng.random::<f64>()
                }
            })
            .collect();
        let cdf = TabulatedCdf::from_density(|_| 0.7, 0.0, 1.0, 10, &[(1.0, 0.3)]).unwrap();
        assert!((cdf.total_mass() - 1.0).abs() < 1e-12);
        assert!(ks_test(&xs, &cdf, 0.01).unwrap().pass);
        let wrong = TabulatedCdf::from_density(|_| 0.75, 0.0, 1.0, 10, &[(1.0, 0.25)]).unwrap();
        assert!(!ks_test(&xs, &wrong, 0.01).unwrap().pass);
    }

    #[test]
    fn chi2_pools_and_decides() {
        let p = [0.25, 0.25, 0.25, 0.25];
        let r = chi2_test(&[2480, 2530, 2490, 2500], &p, 0.001).unwrap();
        assert!(r.pass && r.p_value.unwrap() > 0.1);
        let r = chi2_test(&[2300, 2700, 2500, 2500], &p, 0.001).unwrap();
        assert!(!r.pass);
        // Tiny bins are pooled rather than dominating the statistic.
        let r = chi2_test(&[0, 500, 498, 1], &[1e-6, 0.499_999, 0.499_999, 1e-6], 0.001).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn identical_grids_have_zero_tv() {
        let g = BinGeometry::regular(&[0.0], &[1.0], &[4]).unwrap();
        let mut a = DensityGrid::zeros(g);
        a.add(&[0.1]);
        a.add(&[0.7]);
        assert_eq!(tv_distance(&a, &a.clone()).unwrap(), 0.0);
    }
}
