use serde::{Deserialize, Serialize};

use crate::error::{check_positive, Error, Result};

/// Switching intensity `λ(t)`.
///
/// A tabulated rate is piecewise constant: `values[i]` holds on
/// `[knots[i], knots[i+1])` and the last value continues forever, so `Λ` is
/// exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "form")]
pub enum RateFunction {
    Constant { lambda: f64 },
    Tabulated { knots: Vec<f64>, values: Vec<f64> },
}

impl RateFunction {
    pub fn constant(lambda: f64) -> Result<Self> {
        check_positive("lambda", lambda)?;
        Ok(Self::Constant { lambda })
    }

    pub fn tabulated(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.is_empty() || knots.len() != values.len() {
            return Err(Error::InvalidParameter(
                "knots and values must be non-empty and of equal length".into(),
            ));
        }
        if knots[0] != 0.0 {
            return Err(Error::InvalidParameter("the first knot must be 0".into()));
        }
        if knots.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter("knots must be strictly ascending".into()));
        }
        for &v in &values {
            check_positive("rate value", v)?;
        }
        Ok(Self::Tabulated { knots, values })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Constant { lambda } => Self::constant(*lambda).map(drop),
            Self::Tabulated { knots, values } => Self::tabulated(knots.clone(), values.clone()).map(drop),
        }
    }

    pub fn rate(&self, t: f64) -> f64 {
        match self {
            Self::Constant { lambda } => *lambda,
            Self::Tabulated { knots, values } => {
                let i = knots.partition_point(|&k| k <= t).saturating_sub(1);
                values[i]
            }
        }
    }

    /// `Λ(t) = ∫₀ᵗ λ(s) ds`.
    pub fn cumulative(&self, t: f64) -> f64 {
        match self {
            Self::Constant { lambda } => lambda * t,
            Self::Tabulated { knots, values } => {
                let mut total = 0.0;
                for i in 0..knots.len() {
                    let start = knots[i];
                    if start >= t {
                        break;
                    }
                    let end = knots.get(i + 1).copied().unwrap_or(f64::INFINITY).min(t);
                    total += values[i] * (end - start);
                }
                total
            }
        }
    }

    /// `sup λ` on `[0, t]`.
    pub fn sup_bound_on(&self, t: f64) -> f64 {
        match self {
            Self::Constant { lambda } => *lambda,
            Self::Tabulated { knots, values } => knots
                .iter()
                .zip(values)
                .filter(|(&k, _)| k <= t)
                .map(|(_, &v)| v)
                .fold(0.0, f64::max),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        match self {
            Self::Constant { lambda } => Self::Constant {
                lambda: lambda * factor,
            },
            Self::Tabulated { knots, values } => Self::Tabulated {
                knots: knots.clone(),
                values: values.iter().map(|v| v * factor).collect(),
            },
        }
    }

    /// The constant value, if the rate is constant.
    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Self::Constant { lambda } => Some(*lambda),
            Self::Tabulated { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn piecewise_cumulative() {
        let r = RateFunction::tabulated(vec![0.0, 0.5, 2.0], vec![1.0, 3.0, 0.5]).unwrap();
        assert_eq!(r.cumulative(0.0), 0.0);
        assert!((r.cumulative(0.25) - 0.25).abs() < 1e-15);
        assert!((r.cumulative(1.0) - (0.5 + 1.5)).abs() < 1e-15);
        assert!((r.cumulative(3.0) - (0.5 + 4.5 + 0.5)).abs() < 1e-15);
        assert_eq!(r.rate(0.5), 3.0);
        assert_eq!(r.sup_bound_on(0.4), 1.0);
        assert_eq!(r.sup_bound_on(3.0), 3.0);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(RateFunction::tabulated(vec![0.1], vec![1.0]).is_err());
        assert!(RateFunction::tabulated(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(RateFunction::tabulated(vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
        assert!(RateFunction::constant(-1.0).is_err());
    }
}
