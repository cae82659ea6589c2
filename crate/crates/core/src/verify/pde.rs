//! Standard residual and identity checks of the governing equations.

use serde::{Deserialize, Serialize};

use super::equations::*;
use super::fd::{fd_convergence, fd_residual, tensor_grid, ConvergenceReport, ResidualReport};
use super::operator::{operator_identity_check, IdentityReport, Operator};
use crate::error::Result;
use crate::occupation::tz_density;
use crate::ortho3d::{edge_density, face_density, MotionKind};
use crate::telegraph::{sym_density_closed, TelegraphParams};

/// Relative residual threshold for telegraph and `T_z`.
pub const PDE_TOL: f64 = 1e-3;
/// Thresholds for edge and face, where the rate terms are a small share of
/// `Σ|terms|` and a wrong rate moves the residual less.
pub const EDGE_TOL: f64 = 1e-5;
pub const FACE_TOL: f64 = 1e-5;
/// Tolerance of operator identities.
pub const IDENTITY_TOL: f64 = 1e-8;

/// Rate factor of the negative control.
const WRONG_RATE: f64 = 1.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdeCheck {
    pub equation_id: String,
    pub tolerance: f64,
    pub residual: ResidualReport,
    pub convergence: ConvergenceReport,
    /// Residual of the density with rate `1.1 λ` against the same equation.
    pub negative_control: ResidualReport,
    pub pass: bool,
}

fn check<F, G, S>(
    id: &str,
    tol: f64,
    op: &Operator,
    good: F,
    bad: G,
    pts: &[Vec<f64>],
    h: f64,
    h_conv: f64,
    inside: S,
) -> Result<PdeCheck>
where
    F: Fn(&[f64]) -> Result<f64>,
    G: Fn(&[f64]) -> Result<f64>,
    S: Fn(&[f64]) -> bool,
{
    let d = op.vars();
    let residual = fd_residual(id, &good, op, pts, &vec![h; d], &inside)?;
    let convergence = fd_convergence(id, &good, op, pts, &vec![h_conv; d], &inside)?;
    let negative_control = fd_residual(id, &bad, op, pts, &vec![h; d], &inside)?;
    let pass = residual.passes(tol)
        && (3.0..=5.0).contains(&convergence.ratio)
        && negative_control.max_rel_residual > 10.0 * tol;
    Ok(PdeCheck {
        equation_id: id.to_string(),
        tolerance: tol,
        residual,
        convergence,
        negative_control,
        pass,
    })
}

/// Finite-difference checks of the telegraph, edge, `T_z` and face densities
/// at rate `lambda` and unit speed.
pub fn pde_checks(lambda: f64) -> Result<Vec<PdeCheck>> {
    let cone = |p: &[f64]| p[1].abs() < p[0];
    let strip = |p: &[f64]| p[1] > 0.0 && p[1] < p[0];
    let face = |p: &[f64]| p[1] > 0.0 && p[2] > 0.0 && p[1] + p[2] < p[0];
    let line = tensor_grid(&[0.8, -0.3], &[1.5, 0.3], 5);
    let occupation = tensor_grid(&[0.8, 0.2], &[1.6, 0.6], 5);
    let triangle = tensor_grid(&[1.0, 0.15, 0.15], &[1.3, 0.3, 0.3], 3);

    let tel = |l: f64| move |p: &[f64]| sym_density_closed(&TelegraphParams::new(l, 1.0)?, p[0], p[1]);
    let mut out = vec![check(
        "telegraph",
        PDE_TOL,
        &telegraph_equation(lambda, 1.0),
        tel(lambda),
        tel(WRONG_RATE * lambda),
        &line,
        1e-4,
        2e-2,
        cone,
    )?];
    for kind in [MotionKind::Osm, MotionKind::Oum, MotionKind::Osdm] {
        let name = format!("{kind:?}").to_lowercase();
        let edge = |l: f64| move |p: &[f64]| edge_density(kind, l, 1.0, p[0], p[1]);
        out.push(check(
            &format!("edge-{name}"),
            EDGE_TOL,
            &edge_equation(kind, lambda, 1.0),
            edge(lambda),
            edge(WRONG_RATE * lambda),
            &line,
            1e-3,
            2e-2,
            cone,
        )?);
        let tz = |l: f64| move |p: &[f64]| tz_density(kind, l, p[0], p[1]);
        out.push(check(
            &format!("tz-{name}"),
            PDE_TOL,
            &tz_equation(kind, lambda),
            tz(lambda),
            tz(WRONG_RATE * lambda),
            &occupation,
            1e-3,
            2e-2,
            strip,
        )?);
    }
    for kind in [MotionKind::Osm, MotionKind::Oum] {
        let op = match kind {
            MotionKind::Osm => face_equation_osm(lambda, 1.0),
            _ => face_generator(kind, lambda, 1.0)?,
        };
        let name = format!("{kind:?}").to_lowercase();
        let density = |l: f64| move |p: &[f64]| face_density(kind, l, 1.0, p[0], p[1], p[2]);
        out.push(check(
            &format!("face-{name}"),
            FACE_TOL,
            &op,
            density(lambda),
            density(WRONG_RATE * lambda),
            &triangle,
            1e-2,
            2e-2,
            face,
        )?);
    }
    Ok(out)
}

/// Identities between equivalent forms of the higher-order equations, on
/// `functions` random exponential-polynomial test functions.
pub fn identity_checks(lambda: f64, c: f64, functions: usize, seed: u64) -> Result<Vec<IdentityReport>> {
    let run = |id: &str, a: &Operator, b: &Operator| {
        let v = a.vars();
        let mut lower = vec![-1.0; v];
        let mut upper = vec![1.0; v];
        lower[0] = 0.2;
        upper[0] = 1.5;
        operator_identity_check(id, a, b, functions, &lower, &upper, seed)
    };
    let expanded = joint_tz_z_osm_expanded(lambda, c);
    Ok(vec![
        run(
            "sixth-order-dalembert",
            &sixth_order_osm(lambda, c),
            &sixth_order_dalembert(lambda, c),
        )?,
        run(
            "sixth-order-generator",
            &sixth_order_osm(lambda, c),
            &ortho3d_generator(MotionKind::Osm, lambda, c)?,
        )?,
        run("tz-z-osm-factored", &expanded, &joint_tz_z_osm_factored(lambda, c))?,
        run(
            "tz-z-osm-characteristic",
            &expanded,
            &joint_tz_z_osm_characteristic(lambda, c),
        )?,
        run(
            "tz-z-osm-generator",
            &expanded,
            &joint_tz_z_generator(MotionKind::Osm, lambda, c)?,
        )?,
        run(
            "face-osm-generator",
            &face_equation_osm(lambda, c),
            &face_generator(MotionKind::Osm, lambda, c)?,
        )?,
    ])
}
