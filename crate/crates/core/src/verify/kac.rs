//! Diffusive (Kac) limit: `λ, c → ∞` with `λ/c² = 1`.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::stats::{ks_test, StatReport};
use crate::error::{check_positive, Error, Result};
use crate::ortho3d::{sample_summary, MotionKind, RateFunction};
use crate::rng::par_map_paths;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KacReport {
    pub kind: MotionKind,
    pub scale: f64,
    pub t: f64,
    pub n_samples: u64,
    /// Limit variance of each coordinate, `2t/3`.
    pub target_variance: f64,
    pub variance: [f64; 3],
    /// Standard error of each sample variance.
    pub variance_sigma: [f64; 3],
    pub variance_pass: bool,
    /// KS tests of each coordinate against `N(0, 2t/3)`.
    pub ks: Vec<StatReport>,
    pub pass: bool,
}

/// Simulates with `λ = scale`, `c = √scale` and compares the endpoint with
/// Brownian motion solving `∂ₜp = Δp/3`: per-coordinate variance within
/// `3σ` of `2t/3` and KS normality at level `alpha`.
pub fn kac_limit_check(kind: MotionKind, scale: f64, t: f64, n: u64, seed: u64, alpha: f64) -> Result<KacReport> {
    check_positive("scale", scale)?;
    check_positive("t", t)?;
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two paths".into()));
    }
    let rate = RateFunction::constant(scale)?;
    let c = scale.sqrt();
    let ends = par_map_paths(seed, n, |rng, _| sample_summary(kind, &rate, c, t, rng).endpoint);
    let target = 2.0 * t / 3.0;
    let normal = Normal::new(0.0, target.sqrt()).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let nf = n as f64;
    let mut variance = [0.0; 3];
    let mut sigma = [0.0; 3];
    let mut ks = Vec::with_capacity(3);
    for axis in 0..3 {
        let xs: Vec<f64> = ends.iter().map(|e| e[axis]).collect();
        // The mean is zero by symmetry; use raw moments.
        let m2 = xs.iter().map(|x| x * x).sum::<f64>() / nf;
        let m4 = xs.iter().map(|x| x.powi(4)).sum::<f64>() / nf;
        variance[axis] = m2;
        sigma[axis] = ((m4 - m2 * m2) / nf).sqrt();
        ks.push(ks_test(&xs, &|x: f64| normal.cdf(x), alpha)?);
    }
    let variance_pass = (0..3).all(|i| (variance[i] - target).abs() <= 3.0 * sigma[i]);
    let pass = variance_pass && ks.iter().all(|r| r.pass);
    Ok(KacReport {
        kind,
        scale,
        t,
        n_samples: n,
        target_variance: target,
        variance,
        variance_sigma: sigma,
        variance_pass,
        ks,
        pass,
    })
}
