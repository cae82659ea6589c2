//! Monte Carlo versus analytic comparisons, one function per law.
//!
//! Every suite is deterministic for a fixed seed.

use serde::{Deserialize, Serialize};

use super::stats::{chi2_test, ks_test, tv_test, StatReport, TabulatedCdf};
use crate::error::{Error, Result};
use crate::grid::{BinGeometry, DensityGrid};
use crate::occupation::{cond_tz_eq_t_density_oum, prob_z_eq_ctz_osm, prob_z_eq_ctz_oum, tz_density, tz_masses};
use crate::ortho3d::{
    edge_density, face_density, interior_histogram_mc, mass_edges, mass_faces, mass_interior, mass_vertices,
    sample_summary, MotionKind, PathSummary, RateFunction, SingularClass,
};
use crate::planar3::{self, sample_planar3, support_triangle, Planar3Params};
use crate::rng::{par_fold_paths, par_map_paths};
use crate::specfun::adaptive_integral;
use crate::specfun::cubature::triangle_integral;
use crate::telegraph::{sample_telegraph, sym_density_closed, sym_singular_mass, TelegraphParams};

/// An observed frequency against its exact probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProportionCheck {
    pub label: String,
    pub expected: f64,
    pub observed: f64,
    /// Binomial standard deviation of `observed`.
    pub sigma: f64,
    pub n_samples: u64,
    pub pass: bool,
}

impl ProportionCheck {
    /// Passes when `|observed − expected| ≤ k σ`.
    pub fn new(label: &str, expected: f64, hits: u64, n: u64, k: f64) -> Self {
        let observed = hits as f64 / n as f64;
        let sigma = (expected * (1.0 - expected) / n as f64).sqrt();
        Self {
            label: label.to_string(),
            expected,
            observed,
            sigma,
            n_samples: n,
            pass: (observed - expected).abs() <= k * sigma,
        }
    }
}

fn constant(lambda: f64) -> Result<RateFunction> {
    RateFunction::constant(lambda)
}

fn summaries(kind: MotionKind, lambda: f64, c: f64, t: f64, n: u64, seed: u64) -> Result<Vec<PathSummary>> {
    let rate = constant(lambda)?;
    Ok(par_map_paths(seed, n, |rng, _| sample_summary(kind, &rate, c, t, rng)))
}

/// Vertex, edge, face and interior frequencies against the closed forms, within `k` σ.
pub fn singular_mass_check(
    kind: MotionKind,
    lambda: f64,
    t: f64,
    n: u64,
    seed: u64,
    k: f64,
) -> Result<Vec<ProportionCheck>> {
    let counts = crate::ortho3d::class_frequencies(kind, &constant(lambda)?, 1.0, t, n, seed);
    let cum = lambda * t;
    Ok(vec![
        ProportionCheck::new("vertices", mass_vertices(kind, cum), counts.vertex, n, k),
        ProportionCheck::new("edges", mass_edges(kind, cum), counts.edge, n, k),
        ProportionCheck::new("faces", mass_faces(kind, cum), counts.face, n, k),
        ProportionCheck::new("interior", mass_interior(kind, cum), counts.interior, n, k),
    ])
}

/// KS test of the telegraph sampler against the exact law with its atoms.
pub fn telegraph_ks(lambda: f64, c: f64, t: f64, n: u64, seed: u64, alpha: f64) -> Result<StatReport> {
    let p = TelegraphParams::new(lambda, c)?;
    let ct = c * t;
    let atom = 0.5 * sym_singular_mass(&p, t);
    let cdf = TabulatedCdf::from_density(
        |x| sym_density_closed(&p, t, x).unwrap_or(0.0),
        -ct,
        ct,
        4000,
        &[(-ct, atom), (ct, atom)],
    )?;
    let xs = par_map_paths(seed, n, |rng, _| sample_telegraph(&p, t, rng));
    ks_test(&xs, &cdf, alpha)
}

/// KS test of `T_z(t)` from simulated 3-D paths against the two-speed law,
/// including its atoms at `0` and `t`.
pub fn tz_ks(kind: MotionKind, lambda: f64, t: f64, n: u64, seed: u64, alpha: f64) -> Result<StatReport> {
    let (m0, mt) = tz_masses(kind, lambda * t);
    let cdf = TabulatedCdf::from_density(
        |s| tz_density(kind, lambda, t, s).unwrap_or(0.0),
        0.0,
        t,
        2000,
        &[(0.0, m0), (t, mt)],
    )?;
    let xs: Vec<f64> = summaries(kind, lambda, 1.0, t, n, seed)?
        .iter()
        .map(|s| s.occupation[2])
        .collect();
    ks_test(&xs, &cdf, alpha)
}

fn bin_masses<F: Fn(f64) -> f64>(f: F, lower: f64, upper: f64, bins: usize) -> Result<Vec<f64>> {
    let h = (upper - lower) / bins as f64;
    (0..bins)
        .map(|i| {
            let a = lower + i as f64 * h;
            Ok(adaptive_integral(&f, a, a + h, 1e-14, 1e-11, 200)?.value)
        })
        .collect()
}

/// Coordinate `v = |e_i| − |e_j|` along the edge carrying the endpoint, `i < j`
/// the two axes in use.
fn edge_coordinate(e: &[f64; 3]) -> f64 {
    let nz: Vec<f64> = e.iter().filter(|x| **x != 0.0).map(|x| x.abs()).collect();
    match nz.as_slice() {
        [a, b] => a - b,
        [a] => *a,
        _ => 0.0,
    }
}

/// χ² test of edge endpoints (all twelve edges folded onto one) against the
/// edge density, with the non-edge paths as an extra bin.
pub fn edge_chi2(
    kind: MotionKind,
    lambda: f64,
    c: f64,
    t: f64,
    n: u64,
    bins: usize,
    seed: u64,
    alpha: f64,
) -> Result<StatReport> {
    let ct = c * t;
    let expected_bins = bin_masses(
        |v| 12.0 * edge_density(kind, lambda, c, t, v).unwrap_or(0.0),
        -ct,
        ct,
        bins,
    )?;
    let rate = constant(lambda)?;
    let counts = par_fold_paths(
        seed,
        n,
        || vec![0u64; bins + 1],
        |acc, rng, _| {
            let s = sample_summary(kind, &rate, c, t, rng);
            let i = match s.class() {
                SingularClass::Edge(..) => {
                    let v = edge_coordinate(&s.endpoint);
                    (((v + ct) / (2.0 * ct) * bins as f64) as usize).min(bins - 1)
                }
                _ => bins,
            };
            acc[i] += 1;
        },
        |mut a, b| {
            a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
            a
        },
    );
    let mut expected = expected_bins;
    let rest = 1.0 - expected.iter().sum::<f64>();
    expected.push(rest);
    chi2_test(&counts, &expected, alpha)
}

/// χ² test of `Z(t)` on `{T_z = t}` (OUM) against its density, with the other
/// paths as an extra bin.
pub fn tz_eq_t_chi2(lambda: f64, c: f64, t: f64, n: u64, bins: usize, seed: u64, alpha: f64) -> Result<StatReport> {
    let ct = c * t;
    let mut expected = bin_masses(
        |z| cond_tz_eq_t_density_oum(lambda, c, t, z).unwrap_or(0.0),
        -ct,
        ct,
        bins,
    )?;
    let vertical_only = |s: &PathSummary| s.used & !0b100100 == 0;
    let paths = summaries(MotionKind::Oum, lambda, c, t, n, seed)?;
    let mut counts = vec![0u64; bins + 1];
    for s in &paths {
        let z = s.endpoint[2];
        // Both vertical directions used: an interior point of the vertical segment.
        let i = if vertical_only(s) && s.used.count_ones() == 2 {
            (((z + ct) / (2.0 * ct) * bins as f64) as usize).min(bins - 1)
        } else {
            bins
        };
        counts[i] += 1;
    }
    let rest = 1.0 - expected.iter().sum::<f64>();
    expected.push(rest);
    chi2_test(&counts, &expected, alpha)
}

fn cell_masses<F: Fn(f64, f64) -> f64 + Sync>(f: &F, geometry: &BinGeometry) -> Result<Vec<f64>> {
    use rayon::prelude::*;
    (0..geometry.len())
        .into_par_iter()
        .map(|i| {
            let tri = geometry
                .cell_triangle(i)
                .ok_or_else(|| Error::InvalidParameter("cell masses need a triangle mesh".into()))?;
            let m = triangle_integral(f, tri, 1e-12, 1e-8, 4000)?.value;
            if !m.is_finite() {
                return Err(Error::Range(format!("cell {i} mass is not finite")));
            }
            Ok(m)
        })
        .collect()
}

/// TV distance between face endpoints (all eight faces folded onto `F⁺`)
/// and the face density, both conditioned on the face class, on an
/// `m × m` triangle mesh.
pub fn face_tv(
    kind: MotionKind,
    lambda: f64,
    c: f64,
    t: f64,
    n: u64,
    m: usize,
    seed: u64,
    threshold: f64,
) -> Result<StatReport> {
    let ct = c * t;
    let geometry = BinGeometry::triangle_mesh([[0.0, 0.0], [ct, 0.0], [0.0, ct]], m)?;
    let per_face = mass_faces(kind, lambda * t) / 8.0;
    let f = |x: f64, y: f64| face_density(kind, lambda, c, t, x, y).unwrap_or(f64::NAN) / per_face;
    let exact = DensityGrid::from_probabilities(geometry.clone(), cell_masses(&f, &geometry)?)?;
    let rate = constant(lambda)?;
    let mc = par_fold_paths(
        seed,
        n,
        || DensityGrid::zeros(geometry.clone()),
        |grid, rng, _| {
            let s = sample_summary(kind, &rate, c, t, rng);
            if let SingularClass::Face(_) = s.class() {
                grid.add(&[s.endpoint[0].abs(), s.endpoint[1].abs()]);
            }
        },
        DensityGrid::merge,
    );
    tv_test(&mc, &exact, threshold)
}

/// TV distance between interior endpoints of the planar three-direction
/// motion and its density, both conditioned on the interior, on an
/// `m × m` mesh of the support triangle.
pub fn planar3_tv(params: &Planar3Params, t: f64, n: u64, m: usize, seed: u64, threshold: f64) -> Result<StatReport> {
    let geometry = BinGeometry::triangle_mesh(support_triangle(params.c, t), m)?;
    let mass = params.interior_mass(t);
    let f = |x: f64, y: f64| planar3::density(params, t, x, y).unwrap_or(f64::NAN) / mass;
    let exact = DensityGrid::from_probabilities(geometry.clone(), cell_masses(&f, &geometry)?)?;
    let mc = par_fold_paths(
        seed,
        n,
        || DensityGrid::zeros(geometry.clone()),
        |grid, rng, _| {
            let s = sample_planar3(params, t, rng);
            if s.distinct_directions() == 3 {
                grid.add(&[s.x, s.y]);
            }
        },
        DensityGrid::merge,
    );
    tv_test(&mc, &exact, threshold)
}

/// TV distance between interior endpoint histograms of two motions on a
/// `bins³` lattice.
#[allow(clippy::too_many_arguments)]
pub fn endpoint_tv(
    a: (MotionKind, f64),
    b: (MotionKind, f64),
    c: f64,
    t: f64,
    n: u64,
    bins: usize,
    seeds: (u64, u64),
    threshold: f64,
) -> Result<StatReport> {
    let ga = interior_histogram_mc(a.0, &constant(a.1)?, c, t, bins, n, seeds.0)?;
    let gb = interior_histogram_mc(b.0, &constant(b.1)?, c, t, bins, n, seeds.1)?;
    tv_test(&ga, &gb, threshold)
}

/// Frequency of `{Z(t) = cT_z(t)}` (no downward move) against its exact probability.
pub fn z_eq_ctz_check(kind: MotionKind, lambda: f64, t: f64, n: u64, seed: u64, k: f64) -> Result<ProportionCheck> {
    let expected = match kind.analytic_equivalent() {
        (MotionKind::Osm, _) => prob_z_eq_ctz_osm(lambda * t),
        (_, f) => prob_z_eq_ctz_oum(f * lambda * t),
    };
    let rate = constant(lambda)?;
    let hits = par_fold_paths(
        seed,
        n,
        || 0u64,
        |acc, rng, _| {
            if sample_summary(kind, &rate, 1.0, t, rng).used & (1 << 5) == 0 {
                *acc += 1;
            }
        },
        |a, b| a + b,
    );
    Ok(ProportionCheck::new("z_eq_ctz", expected, hits, n, k))
}
