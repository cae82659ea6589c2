//! Occupation-time laws against independent constructions.

use num_rational::Ratio;
use orthomotion::occupation::*;
use orthomotion::ortho3d::{sample_summary, MotionKind, RateFunction};
use orthomotion::planar3::Planar3Params;
use orthomotion::rng::par_map_paths;
use orthomotion::specfun::adaptive_integral;
use orthomotion::specfun::cubature::triangle_integral;

fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    adaptive_integral(&f, a, b, 1e-13, 1e-12, 2000).unwrap().value
}

/// Exact probability of every `(start, k)` outcome over all OSM direction
/// sequences with `n` switches that avoid `d₅`.
fn enumerate_runs(n: u32) -> Vec<(RunStart, u32, Ratio<i64>)> {
    let mut acc: Vec<(RunStart, u32, Ratio<i64>)> = Vec::new();
    let mut seq = Vec::with_capacity(n as usize + 1);
    for d0 in 0..6u8 {
        seq.clear();
        seq.push(d0);
        extend(&mut seq, n, Ratio::new(1, 6), &mut acc);
    }
    acc
}

fn extend(seq: &mut Vec<u8>, n: u32, weight: Ratio<i64>, acc: &mut Vec<(RunStart, u32, Ratio<i64>)>) {
    if seq.contains(&5) {
        return;
    }
    if seq.len() == n as usize + 1 {
        let start = if seq[0] == 2 {
            RunStart::Vertical
        } else {
            RunStart::Horizontal
        };
        let k = seq[1..].iter().filter(|&&d| d == 2).count() as u32;
        match acc.iter_mut().find(|(s, kk, _)| *s == start && *kk == k) {
            Some(e) => e.2 += weight,
            None => acc.push((start, k, weight)),
        }
        return;
    }
    let last = *seq.last().unwrap();
    for d in 0..6u8 {
        if d % 3 != last % 3 {
            seq.push(d);
            extend(seq, n, weight * Ratio::new(1, 4), acc);
            seq.pop();
        }
    }
}

#[test]
fn run_formulas_match_enumeration_exactly() {
    for n in 0..=8u32 {
        let oracle = enumerate_runs(n);
        for start in [RunStart::Vertical, RunStart::Horizontal] {
            for k in 0..=n + 1 {
                let want = oracle
                    .iter()
                    .find(|(s, kk, _)| *s == start && *kk == k)
                    .map(|e| e.2)
                    .unwrap_or_else(|| Ratio::from_integer(0));
                assert_eq!(osm_run_probability_exact(n, k, start), want, "n={n} k={k} {start:?}");
            }
        }
    }
}

#[test]
fn run_probabilities_sum_to_avoidance_probability() {
    // Transfer matrix of the OSM chain with d₅ removed.
    for n in 0..=8u32 {
        let mut p = [Ratio::new(1i64, 6); 6];
        p[5] = Ratio::from_integer(0);
        for _ in 0..n {
            let mut q = [Ratio::from_integer(0i64); 6];
            for from in 0..6 {
                for to in 0..5 {
                    if from % 3 != to % 3 {
                        q[to] += p[from] * Ratio::new(1, 4);
                    }
                }
            }
            p = q;
        }
        let want: Ratio<i64> = p.iter().sum();
        let total: Ratio<i64> = [RunStart::Vertical, RunStart::Horizontal]
            .iter()
            .flat_map(|&s| (0..=n + 1).map(move |k| osm_run_probability_exact(n, k, s)))
            .sum();
        assert_eq!(total, want, "n={n}");
    }
}

#[test]
fn joint_simplex_integral_is_planar_mass() {
    for (kind, uniform_rate) in [(MotionKind::Osm, 1.5), (MotionKind::Oum, 1.0)] {
        let f = |s: f64, r: f64| {
            if s > 0.0 && r > 0.0 && s + r < 1.0 {
                joint_txty_density(kind, 1.0, 1.0, 1.0, s, r).unwrap()
            } else {
                0.0
            }
        };
        let v = triangle_integral(&f, [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], 1e-11, 1e-10, 200_000)
            .unwrap()
            .value;
        let want = Planar3Params::uniform(uniform_rate, 1.0).unwrap().interior_mass(1.0);
        assert!((v - want).abs() < 1e-5, "{kind:?}: {v} vs {want}");
    }
    let oum = Planar3Params::uniform(1.0, 1.0).unwrap().interior_mass(1.0);
    assert!((oum - (1.0 - (-1.0f64 / 3.0).exp()).powi(2)).abs() < 1e-12);
}

#[test]
fn joint_marginal_matches_two_axis_construction() {
    // T_x marginal of the joint density plus paths using x and one other
    // axis equals the two-speed T_z law relabelled to x.
    for kind in [MotionKind::Osm, MotionKind::Oum] {
        let bins = 100;
        let mut tv = 0.0;
        for i in 0..bins {
            let (a, b) = (i as f64 / bins as f64, (i + 1) as f64 / bins as f64);
            let joint = integrate(
                |s| {
                    integrate(
                        |r| joint_txty_density(kind, 1.0, 1.0, 1.0, s, r).unwrap_or(0.0),
                        0.0,
                        1.0 - s,
                    ) + tx_two_axis_density(kind, 1.0, 1.0, s).unwrap()
                },
                a,
                b,
            );
            let tz = integrate(|s| tz_density(kind, 1.0, 1.0, s).unwrap(), a, b);
            tv += 0.5 * (joint - tz).abs();
        }
        assert!(tv < 1e-6, "{kind:?} {tv}");
    }
}

#[test]
fn tx_histogram_matches_marginal() {
    let rate = RateFunction::constant(1.0).unwrap();
    let n = 400_000u64;
    let bins = 100;
    let tx: Vec<f64> = par_map_paths(21, n, |rng, _| {
        sample_summary(MotionKind::Osm, &rate, 1.0, 1.0, rng).occupation[0]
    });
    let mut counts = vec![0u64; bins];
    for &s in &tx {
        if s > 0.0 && s < 1.0 {
            counts[((s * bins as f64) as usize).min(bins - 1)] += 1;
        }
    }
    let mut tv = 0.0;
    for (i, &c) in counts.iter().enumerate() {
        let (a, b) = (i as f64 / bins as f64, (i + 1) as f64 / bins as f64);
        let p = integrate(|s| tz_density(MotionKind::Osm, 1.0, 1.0, s).unwrap(), a, b);
        tv += 0.5 * (c as f64 / n as f64 - p).abs();
    }
    assert!(tv < 0.02, "{tv}");
}

#[test]
fn tz_normalizations_match_masses() {
    let e = |x: f64| (-x).exp();
    let osm = 1.0 - 2.0 / 3.0 * e(0.5) - e(1.0) / 3.0;
    let oum = 1.0 - 2.0 / 3.0 * e(1.0 / 3.0) - e(2.0 / 3.0) / 3.0;
    for (kind, want) in [(MotionKind::Osm, osm), (MotionKind::Oum, oum)] {
        let v = integrate(|s| tz_density(kind, 1.0, 1.0, s).unwrap(), 0.0, 1.0);
        let (m0, mt) = tz_masses(kind, 1.0);
        assert!((v + m0 + mt - 1.0).abs() < 1e-10);
        assert!((v - want).abs() < 1e-6, "{kind:?} {v}");
    }
}

#[test]
fn z_eq_ctz_integral_value() {
    let v = integrate(|s| cond_z_eq_ctz_density_oum(1.0, 1.0, s).unwrap(), 0.0, 1.0);
    let e = |x: f64| (-x).exp();
    let want = 5.0 / 6.0 * e(1.0 / 6.0) - 2.0 / 3.0 * e(1.0 / 3.0) - e(5.0 / 6.0) / 6.0;
    assert!((v - want).abs() < 1e-6, "{v}");
}
