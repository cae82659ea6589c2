//! Linear constant-coefficient differential operators as coefficient tables.
//!
//! An [`Operator`] is a polynomial in the commuting symbols `∂₀, …, ∂_{d−1}`
//! stored as a map from multi-indices to coefficients. Variable 0 is time.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::path_stream;

pub type MultiIndex = Vec<u8>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Operator {
    vars: usize,
    terms: BTreeMap<MultiIndex, f64>,
}

impl Operator {
    pub fn zero(vars: usize) -> Self {
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, value: f64) -> Self {
        Self::zero(vars).with_term(vec![0; vars], value)
    }

    /// The symbol `∂_var`.
    pub fn partial(vars: usize, var: usize) -> Self {
        let mut idx = vec![0; vars];
        idx[var] = 1;
        Self::zero(vars).with_term(idx, 1.0)
    }

    /// Builds an operator from `(coefficient, multi-index)` pairs.
    pub fn from_terms(vars: usize, terms: &[(f64, &[u8])]) -> Result<Self> {
        let mut op = Self::zero(vars);
        for &(coef, idx) in terms {
            if idx.len() != vars {
                return Err(Error::InvalidParameter(format!(
                    "multi-index {idx:?} has {} entries, expected {vars}",
                    idx.len()
                )));
            }
            op = op.with_term(idx.to_vec(), coef);
        }
        Ok(op)
    }

    fn with_term(mut self, idx: MultiIndex, coef: f64) -> Self {
        if coef != 0.0 {
            let e = self.terms.entry(idx).or_insert(0.0);
            *e += coef;
        }
        self
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> + '_ {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn coefficient(&self, idx: &[u8]) -> f64 {
        self.terms.get(idx).copied().unwrap_or(0.0)
    }

    /// Highest total derivative order.
    pub fn order(&self) -> usize {
        self.terms
            .keys()
            .map(|k| k.iter().map(|&a| a as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::zero(self.vars);
        for (k, &v) in &self.terms {
            out = out.with_term(k.clone(), s * v);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.vars, 1.0);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Replaces every `∂_i` by `images[i]`, an operator in possibly different variables.
    pub fn substitute(&self, images: &[Operator]) -> Result<Self> {
        if images.len() != self.vars {
            return Err(Error::InvalidParameter(format!(
                "{} images for an operator in {} variables",
                images.len(),
                self.vars
            )));
        }
        let out_vars = images.first().map_or(0, |o| o.vars);
        if images.iter().any(|o| o.vars != out_vars) {
            return Err(Error::InvalidParameter("images live in different variable sets".into()));
        }
        let mut out = Self::zero(out_vars);
        for (idx, &coef) in &self.terms {
            let mut term = Self::constant(out_vars, coef);
            for (img, &a) in images.iter().zip(idx) {
                term = &term * &img.pow(a as u32);
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// `∂_var → ∂_var + amount`, i.e. conjugation by `e^{amount · x_var}`:
    /// `L(e^{a x} q) = e^{a x} L.shift(var, a) q`.
    pub fn shift(&self, var: usize, amount: f64) -> Self {
        let images: Vec<_> = (0..self.vars)
            .map(|i| {
                let d = Self::partial(self.vars, i);
                if i == var {
                    &d + &Self::constant(self.vars, amount)
                } else {
                    d
                }
            })
            .collect();
        self.substitute(&images).expect("images match the variable count")
    }

    /// Largest coefficient magnitude.
    pub fn norm(&self) -> f64 {
        self.terms.values().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, o: &Operator) -> Operator {
        assert_eq!(self.vars, o.vars, "operators in different variables");
        let mut out = self.clone();
        for (k, &v) in &o.terms {
            out = out.with_term(k.clone(), v);
        }
        out.terms.retain(|_, v| *v != 0.0);
        out
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(-1.0)
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, o: &Operator) -> Operator {
        self + &(-o)
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, o: &Operator) -> Operator {
        assert_eq!(self.vars, o.vars, "operators in different variables");
        let mut out = Operator::zero(self.vars);
        for (a, &x) in &self.terms {
            for (b, &y) in &o.terms {
                let idx = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out = out.with_term(idx, x * y);
            }
        }
        out.terms.retain(|_, v| *v != 0.0);
        out
    }
}

/// Determinant of a square matrix of commuting operators (Laplace expansion).
pub fn determinant(m: &[Vec<Operator>]) -> Result<Operator> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidParameter(
            "determinant needs a non-empty square matrix".into(),
        ));
    }
    let vars = m[0][0].vars;
    let cols: Vec<usize> = (0..n).collect();
    Ok(minor(m, 0, &cols, vars))
}

fn minor(m: &[Vec<Operator>], row: usize, cols: &[usize], vars: usize) -> Operator {
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut out = Operator::zero(vars);
    for (pos, &c) in cols.iter().enumerate() {
        if m[row][c].terms.is_empty() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = &m[row][c] * &minor(m, row + 1, &rest, vars);
        out = if pos % 2 == 0 { &out + &term } else { &out - &term };
    }
    out
}

/// Forward-equation operator of a Markov velocity field.
///
/// State `i` moves with velocity `velocities[i]` (one entry per spatial
/// variable) and jumps to `j` at rate `rates[i][j]`; diagonal entries are
/// ignored. Mass leaves state `i` without re-entering at rate `killing[i]`
/// (an empty slice means no killing). The returned operator, in variables
/// `(t, x₁, …)`, is the determinant of `∂ₜ + v·∇ + (exit rate) − Qᵀ` and
/// annihilates every state density and hence their sum.
pub fn generator_operator(velocities: &[Vec<f64>], rates: &[Vec<f64>], killing: &[f64]) -> Result<Operator> {
    let n = velocities.len();
    if n == 0 || rates.len() != n || rates.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidParameter(
            "velocities and rates must describe the same states".into(),
        ));
    }
    if !killing.is_empty() && killing.len() != n {
        return Err(Error::InvalidParameter("one killing rate per state".into()));
    }
    let dim = velocities[0].len();
    if velocities.iter().any(|v| v.len() != dim) {
        return Err(Error::InvalidParameter("velocities must share one dimension".into()));
    }
    let vars = dim + 1;
    let mut m = vec![vec![Operator::zero(vars); n]; n];
    for j in 0..n {
        let exit: f64 =
            (0..n).filter(|&k| k != j).map(|k| rates[j][k]).sum::<f64>() + killing.get(j).copied().unwrap_or(0.0);
        let mut diag = &Operator::partial(vars, 0) + &Operator::constant(vars, exit);
        for (k, &v) in velocities[j].iter().enumerate() {
            diag = &diag + &Operator::partial(vars, k + 1).scale(v);
        }
        m[j][j] = diag;
        for i in 0..n {
            if i != j {
                m[j][i] = Operator::constant(vars, -rates[i][j]);
            }
        }
    }
    determinant(&m)
}

/// `P(x) e^{k·x}` with a polynomial `P`, differentiated exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    /// Monomial exponents and coefficients of `P`.
    pub poly: Vec<(MultiIndex, f64)>,
    pub rates: Vec<f64>,
}

impl TestFunction {
    /// Random test function with total polynomial degree ≤ `degree`,
    /// coefficients and exponential rates uniform in `[−1, 1]`.
    pub fn random<R: Rng + ?Sized>(vars: usize, degree: u8, rng: &mut R) -> Self {
        let mut poly = Vec::new();
        for idx in monomials(vars, degree) {
            poly.push((idx, rng.random_range(-1.0..1.0)));
        }
        let rates = (0..vars).map(|_| rng.random_range(-1.0..1.0)).collect();
        Self { poly, rates }
    }

    /// `∂^α f` at `x` by the Leibniz rule.
    pub fn derivative(&self, alpha: &[u8], x: &[f64]) -> f64 {
        let expo = self.rates.iter().zip(x).map(|(k, v)| k * v).sum::<f64>().exp();
        let mut total = 0.0;
        for beta in below(alpha) {
            let mut weight = 1.0;
            for i in 0..alpha.len() {
                weight *= binom(alpha[i], beta[i]) * self.rates[i].powi((alpha[i] - beta[i]) as i32);
            }
            if weight == 0.0 {
                continue;
            }
            total += weight * self.poly_derivative(&beta, x);
        }
        total * expo
    }

    fn poly_derivative(&self, beta: &[u8], x: &[f64]) -> f64 {
        let mut s = 0.0;
        'mono: for (e, c) in &self.poly {
            let mut v = *c;
            for i in 0..beta.len() {
                if beta[i] > e[i] {
                    continue 'mono;
                }
                v *= falling(e[i], beta[i]) * x[i].powi((e[i] - beta[i]) as i32);
            }
            s += v;
        }
        s
    }
}

fn monomials(vars: usize, degree: u8) -> Vec<MultiIndex> {
    let mut out = vec![vec![]];
    for _ in 0..vars {
        let mut next = Vec::new();
        for m in &out {
            let used: u8 = m.iter().sum();
            for a in 0..=(degree - used) {
                let mut m2 = m.clone();
                m2.push(a);
                next.push(m2);
            }
        }
        out = next;
    }
    out
}

fn below(alpha: &[u8]) -> Vec<MultiIndex> {
    let mut out = vec![vec![]];
    for &a in alpha {
        let mut next = Vec::new();
        for m in &out {
            for b in 0..=a {
                let mut m2 = m.clone();
                m2.push(b);
                next.push(m2);
            }
        }
        out = next;
    }
    out
}

fn binom(n: u8, k: u8) -> f64 {
    falling(n, k) / falling(k, k)
}

fn falling(n: u8, k: u8) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

/// Applies `op` to `f` at `x`. Returns the value and the sum of term magnitudes.
pub fn apply(op: &Operator, f: &TestFunction, x: &[f64]) -> (f64, f64) {
    let mut value = 0.0;
    let mut scale = 0.0;
    for (idx, coef) in op.terms() {
        let term = coef * f.derivative(idx, x);
        value += term;
        scale += term.abs();
    }
    (value, scale)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub equation_id: String,
    pub test_functions: usize,
    pub evaluations: usize,
    /// `max |L_a f − L_b f| / (Σ|terms of L_a f| + Σ|terms of L_b f|)`.
    pub max_discrepancy: f64,
}

impl IdentityReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_discrepancy < tol
    }
}

/// Compares two operators on random test functions at random points of the
/// box `[lower, upper]`.
pub fn operator_identity_check(
    equation_id: &str,
    form_a: &Operator,
    form_b: &Operator,
    test_functions: usize,
    lower: &[f64],
    upper: &[f64],
    seed: u64,
) -> Result<IdentityReport> {
    let vars = form_a.vars();
    if form_b.vars() != vars || lower.len() != vars || upper.len() != vars {
        return Err(Error::InvalidParameter(
            "operators and box must share the variable count".into(),
        ));
    }
    if lower.iter().zip(upper).any(|(a, b)| !(a < b)) {
        return Err(Error::InvalidParameter("empty box".into()));
    }
    const POINTS: usize = 4;
    let mut rng = path_stream(seed, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..test_functions {
        let f = TestFunction::random(vars, 3, &mut rng);
        for _ in 0..POINTS {
            let x: Vec<f64> = lower.iter().zip(upper).map(|(&a, &b)| rng.random_range(a..b)).collect();
            let (va, sa) = apply(form_a, &f, &x);
            let (vb, sb) = apply(form_b, &f, &x);
            let denom = sa + sb;
            if denom > 0.0 {
                worst = worst.max((va - vb).abs() / denom);
            }
        }
    }
    Ok(IdentityReport {
        equation_id: equation_id.to_string(),
        test_functions,
        evaluations: test_functions * POINTS,
        max_discrepancy: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_basics() {
        let t = Operator::partial(2, 0);
        let x = Operator::partial(2, 1);
        let a = &(&t + &x) * &(&t - &x);
        let b = &t.pow(2) - &x.pow(2);
        assert_eq!(a, b);
        assert_eq!(a.order(), 2);
        assert_eq!(a.coefficient(&[1, 1]), 0.0);
    }

    #[test]
    fn shift_conjugates_exponentials() {
        // L = ∂ₜ: ∂ₜ(e^{at} q) = e^{at}(∂ₜ + a) q.
        let l = Operator::partial(1, 0).pow(2);
        let s = l.shift(0, 2.0);
        assert_eq!(s.coefficient(&[2]), 1.0);
        assert_eq!(s.coefficient(&[1]), 4.0);
        assert_eq!(s.coefficient(&[0]), 4.0);
    }

    #[test]
    fn leibniz_matches_finite_differences() {
        let mut rng = path_stream(3, 0);
        let f = TestFunction::random(3, 3, &mut rng);
        let x = [0.3, -0.2, 0.5];
        let h = 1e-5;
        let mut xp = x;
        let mut xm = x;
        xp[1] += h;
        xm[1] -= h;
        let fd = (f.derivative(&[2, 0, 0], &xp) - f.derivative(&[2, 0, 0], &xm)) / (2.0 * h);
        let exact = f.derivative(&[2, 1, 0], &x);
        assert!((fd - exact).abs() < 1e-7 * (1.0 + exact.abs()));
    }

    #[test]
    fn determinant_of_diagonal_and_swap() {
        let c = |v| Operator::constant(1, v);
        let m = vec![vec![c(2.0), c(1.0)], vec![c(3.0), c(4.0)]];
        assert_eq!(determinant(&m).unwrap(), c(5.0));
    }

    #[test]
    fn telegraph_from_two_state_generator() {
        let lam = 0.7;
        let c = 1.3;
        let g = generator_operator(&[vec![c], vec![-c]], &[vec![0.0, lam], vec![lam, 0.0]], &[]).unwrap();
        // ∂ₜ² + 2λ∂ₜ − c²∂ₓ².
        assert!((g.coefficient(&[2, 0]) - 1.0).abs() < 1e-15);
        assert!((g.coefficient(&[1, 0]) - 2.0 * lam).abs() < 1e-15);
        assert!((g.coefficient(&[0, 2]) + c * c).abs() < 1e-15);
        assert!(g.coefficient(&[0, 0]).abs() < 1e-15);
    }

    #[test]
    fn distinct_operators_are_detected() {
        let a = Operator::partial(2, 0).pow(2);
        let b = &a + &Operator::partial(2, 1).scale(1e-3);
        let r = operator_identity_check("t", &a, &b, 5, &[0.0, 0.0], &[1.0, 1.0], 1).unwrap();
        assert!(r.max_discrepancy > 1e-5);
        let r = operator_identity_check("t", &a, &a, 5, &[0.0, 0.0], &[1.0, 1.0], 1).unwrap();
        assert_eq!(r.max_discrepancy, 0.0);
    }
}
