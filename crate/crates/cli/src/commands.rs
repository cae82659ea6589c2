//! One function per subcommand. Each returns its records and whether every
//! check in them passed.

use std::fs::File;
use std::io::{BufWriter, Write};

use anyhow::{Context, Result};
use orthomotion::occupation::{cond_tz_eq_t_density_oum, cond_z_eq_ctz_density_oum, joint_txty_density, tz_density};
use orthomotion::ortho3d::{
    class_frequencies, edge_density, face_density, interior_histogram_mc, mass_edges, mass_faces, mass_interior,
    mass_vertices, plane_conditioned_density, sample_path, MotionKind, SingularClass,
};
use orthomotion::planar3::{self, in_triangle, support_triangle, Location, Planar3Kind, Planar3Params};
use orthomotion::rng::{par_map_paths, path_stream};
use orthomotion::telegraph::{sym_density_closed, TelegraphParams};
use orthomotion::verify::{self, ProportionCheck, StatReport, IDENTITY_TOL};
use orthomotion::Error;

use crate::cli::*;
use crate::output::Record;

pub type Outcome = (Vec<Record>, bool);

fn positive(name: &str, v: f64) -> orthomotion::Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

fn validate(m: &Motion) -> orthomotion::Result<()> {
    positive("c", m.c)?;
    positive("t", m.t)?;
    m.rate().map(drop)
}

fn count(name: &str, n: u64) -> orthomotion::Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter(format!("{name} must be at least 1")));
    }
    Ok(())
}

fn class_name(c: SingularClass) -> &'static str {
    match c {
        SingularClass::Vertex(_) => "vertex",
        SingularClass::Edge(..) => "edge",
        SingularClass::Face(_) => "face",
        SingularClass::Interior => "interior",
    }
}

fn masses_of(kind: MotionKind, cum: f64) -> [(&'static str, f64); 4] {
    [
        ("vertices", mass_vertices(kind, cum)),
        ("edges", mass_edges(kind, cum)),
        ("faces", mass_faces(kind, cum)),
        ("interior", mass_interior(kind, cum)),
    ]
}

pub fn simulate(a: &SimulateArgs) -> Result<Outcome> {
    validate(&a.motion)?;
    count("n", a.n)?;
    let kind: MotionKind = a.motion.kind.into();
    let rate = a.motion.rate()?;
    let (c, t) = (a.motion.c, a.motion.t);

    if let Some(path) = &a.dump {
        let file = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
        let mut out = BufWriter::new(file);
        for i in 0..a.n {
            let p = sample_path(kind, &rate, c, t, &mut path_stream(a.seed, i))?;
            p.write_jsonl(a.seed, &mut out)?;
        }
        out.flush()?;
    }

    let rows = match a.report {
        Report::Classes => {
            let counts = class_frequencies(kind, &rate, c, t, a.n, a.seed);
            let observed = [counts.vertex, counts.edge, counts.face, counts.interior];
            masses_of(kind, rate.cumulative(t))
                .iter()
                .zip(observed)
                .map(|(&(name, mass), hits)| {
                    let p = ProportionCheck::new(name, mass, hits, a.n, 3.0);
                    Record::new()
                        .with("class", name)
                        .with("count", hits)
                        .with("frequency", p.observed)
                        .with("mass", mass)
                        .with("sigma", p.sigma)
                })
                .collect()
        }
        Report::Endpoints => par_map_paths(a.seed, a.n, |rng, i| {
            let p = sample_path(kind, &rate, c, t, rng).expect("parameters validated");
            (i, p.summary())
        })
        .into_iter()
        .map(|(i, s)| {
            Record::new()
                .with("path", i)
                .with("x", s.endpoint[0])
                .with("y", s.endpoint[1])
                .with("z", s.endpoint[2])
                .with("tx", s.occupation[0])
                .with("ty", s.occupation[1])
                .with("tz", s.occupation[2])
                .with("events", s.events as u64)
                .with("class", class_name(s.class()))
        })
        .collect(),
        Report::Histogram => {
            if a.bins == 0 {
                return Err(Error::InvalidParameter("bins must be at least 1".into()).into());
            }
            let grid = interior_histogram_mc(kind, &rate, c, t, a.bins, a.n, a.seed)?;
            let probs = grid.probabilities();
            (0..grid.geometry.len())
                .map(|i| {
                    let (lo, hi) = grid.geometry.cell_box(i).expect("regular grid");
                    let mid: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
                    Record::new()
                        .with("x", mid[0])
                        .with("y", mid[1])
                        .with("z", mid[2])
                        .with("probability", probs[i])
                })
                .collect()
        }
    };
    Ok((rows, true))
}

pub fn masses(a: &MassesArgs) -> Result<Outcome> {
    validate(&a.motion)?;
    let kind: MotionKind = a.motion.kind.into();
    let rate = a.motion.rate()?;
    let cum = rate.cumulative(a.motion.t);
    let closed = masses_of(kind, cum);
    if !a.mc {
        let rows = closed
            .iter()
            .map(|&(name, m)| Record::new().with("class", name).with("mass", m))
            .collect();
        return Ok((rows, true));
    }
    count("n", a.n)?;
    let seed = a.seed.expect("clap requires a seed with --mc");
    let counts = class_frequencies(kind, &rate, a.motion.c, a.motion.t, a.n, seed);
    let observed = [counts.vertex, counts.edge, counts.face, counts.interior];
    let checks: Vec<ProportionCheck> = closed
        .iter()
        .zip(observed)
        .map(|(&(name, m), hits)| ProportionCheck::new(name, m, hits, a.n, a.sigmas))
        .collect();
    let pass = checks.iter().all(|c| c.pass);
    let rows = checks
        .into_iter()
        .map(|c| {
            Record::new()
                .with("class", c.label)
                .with("mass", c.expected)
                .with("frequency", c.observed)
                .with("sigma", c.sigma)
                .with("pass", c.pass)
        })
        .collect();
    Ok((rows, pass))
}

/// `n` interior points of `(a, b)`, symmetric about the midpoint.
fn interior_points(a: f64, b: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| a + (b - a) * i as f64 / (n + 1) as f64).collect()
}

pub fn density(a: &DensityArgs) -> Result<Outcome> {
    validate(&a.motion)?;
    if a.grid == 0 {
        return Err(Error::InvalidParameter("grid must be at least 1".into()).into());
    }
    let lambda = a.motion.constant_rate()?;
    let kind: MotionKind = a.motion.kind.into();
    let (c, t, n) = (a.motion.c, a.motion.t, a.grid);
    let ct = c * t;

    let line = |name: &'static str, lo: f64, hi: f64, f: &dyn Fn(f64) -> orthomotion::Result<f64>| {
        interior_points(lo, hi, n)
            .into_iter()
            .map(|x| Ok(Record::new().with(name, x).with("density", f(x)?)))
            .collect::<orthomotion::Result<Vec<_>>>()
    };
    let plane = |names: [&'static str; 2],
                 lo: [f64; 2],
                 hi: [f64; 2],
                 inside: &dyn Fn(f64, f64) -> bool,
                 f: &dyn Fn(f64, f64) -> orthomotion::Result<f64>| {
        let mut rows = Vec::new();
        for x in interior_points(lo[0], hi[0], n) {
            for y in interior_points(lo[1], hi[1], n) {
                if inside(x, y) {
                    rows.push(
                        Record::new()
                            .with(names[0], x)
                            .with(names[1], y)
                            .with("density", f(x, y)?),
                    );
                }
            }
        }
        Ok::<_, Error>(rows)
    };
    // OSDM(λ) has the law of OUM(6λ/5).
    let oum_rate = || match kind.analytic_equivalent() {
        (MotionKind::Oum, f) => Ok(f * lambda),
        _ => Err(Error::Unsupported(format!(
            "{:?} target has a closed form for OUM and OSDM only",
            a.target
        ))),
    };

    let rows = match a.target {
        Target::Telegraph => {
            let p = TelegraphParams::new(lambda, c)?;
            line("x", -ct, ct, &|x| sym_density_closed(&p, t, x))?
        }
        Target::Edge => line("v", -ct, ct, &|v| edge_density(kind, lambda, c, t, v))?,
        Target::Tz => line("s", 0.0, t, &|s| tz_density(kind, lambda, t, s))?,
        Target::ZEqCtz => {
            let l = oum_rate()?;
            line("s", 0.0, t, &|s| cond_z_eq_ctz_density_oum(l, t, s))?
        }
        Target::TzEqT => {
            let l = oum_rate()?;
            line("z", -ct, ct, &|z| cond_tz_eq_t_density_oum(l, c, t, z))?
        }
        Target::Face => plane(["x", "y"], [0.0; 2], [ct; 2], &|x, y| x + y < ct, &|x, y| {
            face_density(kind, lambda, c, t, x, y)
        })?,
        Target::Plane => plane(
            ["x", "y"],
            [-ct; 2],
            [ct; 2],
            &|x, y| x.abs() + y.abs() < ct,
            &|x, y| plane_conditioned_density(kind, lambda, c, t, x, y),
        )?,
        Target::JointTxty => plane(["s", "r"], [0.0; 2], [t; 2], &|s, r| s + r < t, &|s, r| {
            joint_txty_density(kind, lambda, c, t, s, r)
        })?,
        Target::Planar3 => {
            let pk = match a.planar_kind {
                PlanarKind::Uniform => Planar3Kind::Uniform,
                PlanarKind::Sd => Planar3Kind::SymmetricallyDeviating,
            };
            let p = Planar3Params::new(pk, lambda, c)?;
            let tri = support_triangle(c, t);
            let lo = [0, 1].map(|k| tri.iter().map(|v| v[k]).fold(f64::INFINITY, f64::min));
            let hi = [0, 1].map(|k| tri.iter().map(|v| v[k]).fold(f64::NEG_INFINITY, f64::max));
            plane(
                ["x", "y"],
                lo,
                hi,
                &|x, y| in_triangle(x, y, t, c) == Location::Interior,
                &|x, y| planar3::density(&p, t, x, y),
            )?
        }
    };
    Ok((rows, true))
}

fn stat_row(suite: &str, label: &str, r: &StatReport) -> Record {
    let test = serde_json::to_value(r.test)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default();
    Record::new()
        .with("suite", suite)
        .with("label", label)
        .with("test", test)
        .with("statistic", r.statistic)
        .with("threshold", r.threshold)
        .with("expected", f64::NAN)
        .with("observed", f64::NAN)
        .with("n_samples", r.n_samples)
        .with("p_value", r.p_value.unwrap_or(f64::NAN))
        .with("pass", r.pass)
}

fn proportion_row(suite: &str, p: &ProportionCheck, k: f64) -> Record {
    Record::new()
        .with("suite", suite)
        .with("label", p.label.as_str())
        .with("test", "proportion")
        .with("statistic", (p.observed - p.expected).abs() / p.sigma)
        .with("threshold", k)
        .with("expected", p.expected)
        .with("observed", p.observed)
        .with("n_samples", p.n_samples)
        .with("p_value", f64::NAN)
        .with("pass", p.pass)
}

const ALL_SUITES: [Suite; 10] = [
    Suite::Masses,
    Suite::Telegraph,
    Suite::Tz,
    Suite::Edge,
    Suite::Face,
    Suite::Planar3,
    Suite::Osdm,
    Suite::ZEqCtz,
    Suite::TzEqT,
    Suite::Kac,
];

pub fn verify(a: &VerifyArgs) -> Result<Outcome> {
    validate(&a.motion)?;
    count("n", a.n)?;
    positive("alpha", a.alpha)?;
    positive("sigmas", a.sigmas)?;
    let lambda = a.motion.constant_rate()?;
    let kind: MotionKind = a.motion.kind.into();
    let (c, t, n, seed, alpha) = (a.motion.c, a.motion.t, a.n, a.seed, a.alpha);
    let suites: Vec<Suite> = if a.suite.is_empty() {
        ALL_SUITES.to_vec()
    } else {
        a.suite.clone()
    };

    let mut rows = Vec::new();
    for suite in suites {
        let name = serde_json::to_value(suite)?.as_str().unwrap_or_default().to_string();
        match suite {
            Suite::Masses => {
                for p in verify::singular_mass_check(kind, lambda, t, n, seed, a.sigmas)? {
                    rows.push(proportion_row(&name, &p, a.sigmas));
                }
            }
            Suite::ZEqCtz => {
                let p = verify::z_eq_ctz_check(kind, lambda, t, n, seed, a.sigmas)?;
                rows.push(proportion_row(&name, &p, a.sigmas));
            }
            Suite::Telegraph => rows.push(stat_row(
                &name,
                "ks",
                &verify::telegraph_ks(lambda, c, t, n, seed, alpha)?,
            )),
            Suite::Tz => rows.push(stat_row(&name, "ks", &verify::tz_ks(kind, lambda, t, n, seed, alpha)?)),
            Suite::Edge => rows.push(stat_row(
                &name,
                "chi2",
                &verify::edge_chi2(kind, lambda, c, t, n, 40, seed, alpha)?,
            )),
            Suite::Face => rows.push(stat_row(
                &name,
                "tv",
                &verify::face_tv(kind, lambda, c, t, n, 10, seed, 0.02)?,
            )),
            Suite::Planar3 => {
                let p = Planar3Params::uniform(lambda, c)?;
                rows.push(stat_row(&name, "tv", &verify::planar3_tv(&p, t, n, 14, seed, 0.01)?));
            }
            Suite::Osdm => {
                let r = verify::endpoint_tv(
                    (MotionKind::Osdm, lambda),
                    (MotionKind::Oum, 1.2 * lambda),
                    c,
                    t,
                    n,
                    8,
                    (seed, seed.wrapping_add(1)),
                    0.015,
                )?;
                rows.push(stat_row(&name, "tv", &r));
            }
            Suite::TzEqT => rows.push(stat_row(
                &name,
                "chi2",
                &verify::tz_eq_t_chi2(lambda, c, t, n, 20, seed, alpha)?,
            )),
            Suite::Kac => {
                let r = verify::kac_limit_check(kind, a.kac_scale, t, n, seed, alpha)?;
                for (i, axis) in ["x", "y", "z"].into_iter().enumerate() {
                    let p = ProportionCheck {
                        label: format!("variance-{axis}"),
                        expected: r.target_variance,
                        observed: r.variance[i],
                        sigma: r.variance_sigma[i],
                        n_samples: r.n_samples,
                        pass: (r.variance[i] - r.target_variance).abs() <= 3.0 * r.variance_sigma[i],
                    };
                    let mut row = proportion_row(&name, &p, 3.0);
                    row.0[2].1 = "variance".into();
                    rows.push(row);
                    rows.push(stat_row(&name, &format!("ks-{axis}"), &r.ks[i]));
                }
            }
        }
    }
    let pass = rows
        .iter()
        .all(|r| r.0.iter().any(|(k, v)| *k == "pass" && *v == true.into()));
    Ok((rows, pass))
}

pub fn pde_check(a: &PdeArgs) -> Result<Outcome> {
    positive("lambda", a.lambda)?;
    positive("c", a.c)?;
    count("functions", a.functions as u64)?;
    let mut rows = Vec::new();
    let mut pass = true;
    for chk in verify::pde_checks(a.lambda)? {
        pass &= chk.pass;
        rows.push(
            Record::new()
                .with("check", chk.equation_id.as_str())
                .with("method", "finite-difference")
                .with("residual", chk.residual.max_rel_residual)
                .with("tolerance", chk.tolerance)
                .with("convergence_ratio", chk.convergence.ratio)
                .with("negative_control", chk.negative_control.max_rel_residual)
                .with("pass", chk.pass),
        );
    }
    for r in verify::identity_checks(a.lambda, a.c, a.functions, a.seed)? {
        let ok = r.holds(IDENTITY_TOL);
        pass &= ok;
        rows.push(
            Record::new()
                .with("check", r.equation_id.as_str())
                .with("method", "operator-identity")
                .with("residual", r.max_discrepancy)
                .with("tolerance", IDENTITY_TOL)
                .with("convergence_ratio", f64::NAN)
                .with("negative_control", f64::NAN)
                .with("pass", ok),
        );
    }
    Ok((rows, pass))
}
