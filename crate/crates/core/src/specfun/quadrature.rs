//! Quadrature for the semi-infinite Bessel-product integrals and for
//! finite intervals.

use std::collections::{BinaryHeap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureMethod {
    /// Gauss–Laguerre after the substitution `w = √u`, suited to `e^{-w²}`-weighted integrands.
    GaussLaguerre,
    /// Adaptive Gauss–Kronrod on `[0, truncation_bound]`.
    AdaptiveTruncated,
}

/// How to evaluate `∫₀^∞ f(w) dw`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub method: QuadratureMethod,
    pub nodes: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub truncation_bound: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            method: QuadratureMethod::GaussLaguerre,
            nodes: 64,
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            truncation_bound: 40.0,
        }
    }
}

impl QuadratureSpec {
    pub fn new(
        method: QuadratureMethod,
        nodes: usize,
        abs_tol: f64,
        rel_tol: f64,
        truncation_bound: f64,
    ) -> Result<Self> {
        let spec = Self {
            method,
            nodes,
            abs_tol,
            rel_tol,
            truncation_bound,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Adaptive rule on `[0, bound]` with the default tolerances.
    pub fn adaptive(bound: f64) -> Self {
        Self {
            method: QuadratureMethod::AdaptiveTruncated,
            truncation_bound: bound,
            ..Self::default()
        }
    }

    /// Picks a method for an integrand behaving like `e^{-w² + s·w}`.
    ///
    /// The bump sits at `w = s/2`; Gauss–Laguerre resolves it while it stays
    /// well inside the node range, otherwise the truncated adaptive rule is
    /// placed around it.
    pub fn for_gaussian_bump(exponent_slope: f64) -> Self {
        if exponent_slope <= GAUSS_LAGUERRE_SLOPE_LIMIT {
            Self::default()
        } else {
            Self::adaptive(0.5 * exponent_slope + 12.0)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 8 {
            return Err(Error::InvalidParameter(format!(
                "nodes must be >= 8, got {}",
                self.nodes
            )));
        }
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) || (self.abs_tol == 0.0 && self.rel_tol == 0.0) {
            return Err(Error::InvalidParameter(
                "one of abs_tol, rel_tol must be positive".into(),
            ));
        }
        if self.method == QuadratureMethod::AdaptiveTruncated
            && !(self.truncation_bound.is_finite() && self.truncation_bound > 0.0)
        {
            return Err(Error::InvalidParameter("truncation_bound must be positive".into()));
        }
        Ok(())
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Largest `s` in `e^{-w²+s·w}` for which 64-node Gauss–Laguerre is trusted.
pub const GAUSS_LAGUERRE_SLOPE_LIMIT: f64 = 8.0;

/// Value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// `∫₀^∞ f(w) dw` for integrands decaying like `e^{-w²}` times a polynomial.
///
/// Returns [`Error::NotConverged`] carrying the best estimate when the error
/// estimate exceeds the requested tolerance.
pub fn semi_infinite_integral<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<f64> {
    semi_infinite_estimate(f, spec).map(|e| e.value)
}

pub fn semi_infinite_estimate<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<Estimate> {
    spec.validate()?;
    match spec.method {
        QuadratureMethod::GaussLaguerre => {
            let fine = gauss_laguerre_sqrt(&f, spec.nodes);
            let coarse = gauss_laguerre_sqrt(&f, spec.nodes * 3 / 4);
            let error = (fine - coarse).abs();
            if !fine.is_finite() {
                return Err(Error::NotConverged {
                    estimate: fine,
                    error: f64::INFINITY,
                });
            }
            if error > spec.tolerance(fine) {
                return Err(Error::NotConverged { estimate: fine, error });
            }
            Ok(Estimate { value: fine, error })
        }
        QuadratureMethod::AdaptiveTruncated => {
            adaptive_integral(&f, 0.0, spec.truncation_bound, spec.abs_tol, spec.rel_tol, 400)
        }
    }
}

/// Fixed-rule evaluation of `∫₀^∞ f(w) dw` through `w = √u` and an `n`-node
/// Gauss–Laguerre rule. No error estimate.
pub fn gauss_laguerre_sqrt<F: Fn(f64) -> f64 + ?Sized>(f: &F, n: usize) -> f64 {
    let rule = gauss_laguerre_rule(n);
    rule.nodes
        .iter()
        .zip(&rule.scaled_weights)
        .map(|(&u, &w)| {
            let r = u.sqrt();
            w * f(r) / (2.0 * r)
        })
        .sum()
}

/// Nodes `u_i` and weights `w_i e^{u_i}` of the `n`-point Gauss–Laguerre rule,
/// so that `∫₀^∞ g(u) du ≈ Σ scaled_weights[i] · g(nodes[i])`.
#[derive(Debug, Clone)]
pub struct GaussLaguerreRule {
    pub nodes: Vec<f64>,
    pub scaled_weights: Vec<f64>,
}

pub fn gauss_laguerre_rule(n: usize) -> Arc<GaussLaguerreRule> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<GaussLaguerreRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(rule) = cache.read().expect("rule cache poisoned").get(&n) {
        return rule.clone();
    }
    let rule = Arc::new(build_gauss_laguerre(n));
    cache
        .write()
        .expect("rule cache poisoned")
        .entry(n)
        .or_insert(rule)
        .clone()
}

fn build_gauss_laguerre(n: usize) -> GaussLaguerreRule {
    assert!(n >= 1);
    let nf = n as f64;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut z = 0.0f64;
    for i in 0..n {
        // Initial guesses follow the classic Stroud–Secrest scheme.
        if i == 0 {
            z = 3.0 / (1.0 + 2.4 * nf);
        } else if i == 1 {
            z += 15.0 / (1.0 + 2.5 * nf);
        } else {
            let ai = (i - 1) as f64;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - nodes[i - 2]);
        }
        let mut pp = 0.0;
        let mut p2 = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0 - z) * p2 - jf * p3) / (jf + 1.0);
            }
            pp = (nf * p1 - nf * p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        nodes.push(z);
        // w_i = -1 / (n · L_n'(x_i) · L_{n-1}(x_i)); keep w_i e^{x_i}.
        weights.push((-1.0 / (pp * nf * p2)) * z.exp());
    }
    GaussLaguerreRule {
        nodes,
        scaled_weights: weights,
    }
}

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const GAUSS7_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * GK_WEIGHTS[7];
    let mut gauss = fc * GAUSS7_WEIGHTS[3];
    for j in 0..7 {
        let dx = half * GK_NODES[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += GK_WEIGHTS[j] * pair;
        if j % 2 == 1 {
            gauss += GAUSS7_WEIGHTS[j / 2] * pair;
        }
    }
    Estimate {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

struct Panel {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature on `[a, b]`.
pub fn adaptive_integral<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let mut heap = BinaryHeap::new();
    let first = gk15(f, a, b);
    let mut value = first.value;
    let mut error = first.error;
    heap.push(Panel { a, b, est: first });
    while error > abs_tol.max(rel_tol * value.abs()) {
        if heap.len() >= max_panels {
            return Err(Error::NotConverged { estimate: value, error });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk15(f, worst.a, mid);
        let right = gk15(f, mid, worst.b);
        value += left.value + right.value - worst.est.value;
        error += left.error + right.error - worst.est.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            est: left,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            est: right,
        });
    }
    // Re-sum to shed the drift of incremental updates.
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.est.value, e + p.est.error));
    Ok(Estimate { value, error })
}
