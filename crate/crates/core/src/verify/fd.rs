//! Finite-difference residuals of analytic densities.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::operator::Operator;
use crate::error::{Error, Result};

/// Required distance from the support boundary, in steps.
pub const BOUNDARY_MARGIN_STEPS: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub equation_id: String,
    pub grid_points: usize,
    pub max_abs_residual: f64,
    /// `max |L p| / Σ|terms of L p|` over the grid.
    pub max_rel_residual: f64,
    pub step_sizes: Vec<f64>,
}

impl ResidualReport {
    pub fn passes(&self, rel_tol: f64) -> bool {
        self.max_rel_residual < rel_tol
    }
}

/// Second-order central stencil of the `order`-th derivative as
/// `(offset, weight)` pairs, weights for unit step.
fn stencil(order: u8) -> Result<&'static [(i32, f64)]> {
    Ok(match order {
        0 => &[(0, 1.0)],
        1 => &[(-1, -0.5), (1, 0.5)],
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        3 => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
        4 => &[(-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)],
        _ => return Err(Error::Unsupported(format!("finite differences of order {order}"))),
    })
}

/// Applies `op` to `density` at every point by nested central differences.
///
/// `inside` tests membership of the open support, which must be convex: a
/// point is accepted when every corner of the box of half-width
/// [`BOUNDARY_MARGIN_STEPS`]` · h` around it is inside.
pub fn fd_residual<F, S>(
    equation_id: &str,
    density: F,
    op: &Operator,
    points: &[Vec<f64>],
    steps: &[f64],
    inside: S,
) -> Result<ResidualReport>
where
    F: Fn(&[f64]) -> Result<f64>,
    S: Fn(&[f64]) -> bool,
{
    let vars = op.vars();
    if steps.len() != vars || steps.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
        return Err(Error::InvalidParameter(format!("need {vars} positive step sizes")));
    }
    if points.is_empty() {
        return Err(Error::InvalidParameter("empty grid".into()));
    }
    let terms: Vec<(Vec<&'static [(i32, f64)]>, f64, f64)> = op
        .terms()
        .map(|(idx, coef)| {
            let st = idx.iter().map(|&a| stencil(a)).collect::<Result<Vec<_>>>()?;
            let scale: f64 = idx.iter().zip(steps).map(|(&a, h)| h.powi(a as i32)).product();
            Ok((st, coef, scale))
        })
        .collect::<Result<_>>()?;

    let mut max_abs: f64 = 0.0;
    let mut max_rel: f64 = 0.0;
    for p in points {
        if p.len() != vars {
            return Err(Error::InvalidParameter(format!(
                "grid point {p:?} has the wrong dimension"
            )));
        }
        check_margin(p, steps, &inside)?;
        let mut cache: HashMap<Vec<i32>, f64> = HashMap::new();
        let mut eval = |offs: &[i32]| -> Result<f64> {
            if let Some(&v) = cache.get(offs) {
                return Ok(v);
            }
            let x: Vec<f64> = p
                .iter()
                .zip(offs)
                .zip(steps)
                .map(|((x, &o), h)| x + o as f64 * h)
                .collect();
            let v = density(&x)?;
            cache.insert(offs.to_vec(), v);
            Ok(v)
        };
        let mut value = 0.0;
        let mut size = 0.0;
        for (st, coef, scale) in &terms {
            let mut acc = 0.0;
            let mut offs = vec![0i32; vars];
            tensor_sum(st, 0, 1.0, &mut offs, &mut eval, &mut acc)?;
            let term = coef * acc / scale;
            value += term;
            size += term.abs();
        }
        max_abs = max_abs.max(value.abs());
        if size > 0.0 {
            max_rel = max_rel.max(value.abs() / size);
        }
    }
    Ok(ResidualReport {
        equation_id: equation_id.to_string(),
        grid_points: points.len(),
        max_abs_residual: max_abs,
        max_rel_residual: max_rel,
        step_sizes: steps.to_vec(),
    })
}

fn tensor_sum<E>(
    st: &[&[(i32, f64)]],
    dim: usize,
    weight: f64,
    offs: &mut Vec<i32>,
    eval: &mut E,
    acc: &mut f64,
) -> Result<()>
where
    E: FnMut(&[i32]) -> Result<f64>,
{
    if dim == st.len() {
        *acc += weight * eval(offs)?;
        return Ok(());
    }
    for &(o, w) in st[dim] {
        offs[dim] = o;
        tensor_sum(st, dim + 1, weight * w, offs, eval, acc)?;
    }
    offs[dim] = 0;
    Ok(())
}

fn check_margin<S: Fn(&[f64]) -> bool>(p: &[f64], steps: &[f64], inside: &S) -> Result<()> {
    let d = p.len();
    for mask in 0..(1u32 << d) {
        let corner: Vec<f64> = (0..d)
            .map(|i| {
                let s = if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
                p[i] + s * BOUNDARY_MARGIN_STEPS * steps[i]
            })
            .collect();
        if !inside(&corner) {
            return Err(Error::Domain(format!(
                "grid point {p:?} is within {BOUNDARY_MARGIN_STEPS} steps of the support boundary"
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub coarse: ResidualReport,
    pub fine: ResidualReport,
    /// `coarse.max_abs_residual / fine.max_abs_residual`; about 4 for
    /// second-order stencils.
    pub ratio: f64,
}

/// Residuals at steps `h` and `h/2`.
pub fn fd_convergence<F, S>(
    equation_id: &str,
    density: F,
    op: &Operator,
    points: &[Vec<f64>],
    steps: &[f64],
    inside: S,
) -> Result<ConvergenceReport>
where
    F: Fn(&[f64]) -> Result<f64>,
    S: Fn(&[f64]) -> bool,
{
    let coarse = fd_residual(equation_id, &density, op, points, steps, &inside)?;
    let half: Vec<f64> = steps.iter().map(|h| 0.5 * h).collect();
    let fine = fd_residual(equation_id, &density, op, points, &half, &inside)?;
    let ratio = coarse.max_abs_residual / fine.max_abs_residual;
    Ok(ConvergenceReport { coarse, fine, ratio })
}

/// Tensor grid of `n` points per axis on the box `[lower, upper]`.
pub fn tensor_grid(lower: &[f64], upper: &[f64], n: usize) -> Vec<Vec<f64>> {
    let d = lower.len();
    let mut out = vec![vec![]];
    for i in 0..d {
        let mut next = Vec::new();
        for p in &out {
            for j in 0..n {
                let x = if n == 1 {
                    0.5 * (lower[i] + upper[i])
                } else {
                    lower[i] + (upper[i] - lower[i]) * j as f64 / (n - 1) as f64
                };
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    out
}
