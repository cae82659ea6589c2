//! Planar motion with the three directions `vᵢ = c(cos 2iπ/3, sin 2iπ/3)`.
//!
//! At time `t` the particle lies in the triangle with vertices `t·vᵢ`. With
//! `z₀ = ct+2x`, `z₁ = ct−x+√3y`, `z₂ = ct−x−√3y` (so `z₀+z₁+z₂ = 3ct`) the
//! interior is `{zᵢ > 0}`. The uniform motion redraws its direction among
//! all three at each event; the symmetrically deviating (SD) motion among the
//! other two, and is equal in law to the uniform one with rate `3λ/2`.

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, Error, Result};
use crate::rng::{exp1, Rng};
use crate::specfun::bessel_h_moment;
use crate::specfun::cubature::Triangle;
use crate::specfun::ln_factorial;
use crate::telegraph::summed_shells;

const SQRT3: f64 = 1.7320508075688772;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Planar3Kind {
    Uniform,
    SymmetricallyDeviating,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Planar3Params {
    pub kind: Planar3Kind,
    pub lambda: f64,
    pub c: f64,
}

impl Planar3Params {
    pub fn new(kind: Planar3Kind, lambda: f64, c: f64) -> Result<Self> {
        check_positive("lambda", lambda)?;
        check_positive("c", c)?;
        Ok(Self { kind, lambda, c })
    }

    pub fn uniform(lambda: f64, c: f64) -> Result<Self> {
        Self::new(Planar3Kind::Uniform, lambda, c)
    }

    /// Rate of the uniform motion with the same law.
    pub fn uniform_rate(&self) -> f64 {
        match self.kind {
            Planar3Kind::Uniform => self.lambda,
            Planar3Kind::SymmetricallyDeviating => 1.5 * self.lambda,
        }
    }

    /// Probability of the interior of the triangle, `(1 − e^{-λ't/3})²` with `λ'` the uniform rate.
    pub fn interior_mass(&self, t: f64) -> f64 {
        let e = (-self.uniform_rate() * t / 3.0).exp();
        (1.0 - e) * (1.0 - e)
    }
}

/// A point with its coordinates relative to the sides of the support.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrianglePoint {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub z: [f64; 3],
}

impl TrianglePoint {
    pub fn new(x: f64, y: f64, t: f64, c: f64) -> Self {
        let ct = c * t;
        Self {
            x,
            y,
            t,
            z: [ct + 2.0 * x, ct - x + SQRT3 * y, ct - x - SQRT3 * y],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Interior,
    Boundary,
    Outside,
}

/// Vertices `t·v₀, t·v₁, t·v₂` of the support.
pub fn support_triangle(c: f64, t: f64) -> Triangle {
    let ct = c * t;
    [[ct, 0.0], [-0.5 * ct, 0.5 * SQRT3 * ct], [-0.5 * ct, -0.5 * SQRT3 * ct]]
}

pub fn in_triangle(x: f64, y: f64, t: f64, c: f64) -> Location {
    let tol = 1e-12 * c * t;
    let z = TrianglePoint::new(x, y, t, c).z;
    if z.iter().any(|&zi| zi < -tol) {
        Location::Outside
    } else if z.iter().any(|&zi| zi <= tol) {
        Location::Boundary
    } else {
        Location::Interior
    }
}

fn interior_point(p: &Planar3Params, t: f64, x: f64, y: f64) -> Result<TrianglePoint> {
    check_positive("t", t)?;
    match in_triangle(x, y, t, p.c) {
        Location::Interior => Ok(TrianglePoint::new(x, y, t, p.c)),
        other => Err(Error::Domain(format!(
            "({x}, {y}) is {other:?} for the triangle at t = {t}"
        ))),
    }
}

fn require_kind(p: &Planar3Params, kind: Planar3Kind) -> Result<()> {
    if p.kind == kind {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "expected {kind:?} parameters, got {:?}",
            p.kind
        )))
    }
}

/// Density of the absolutely continuous part for the configured kind.
pub fn density(p: &Planar3Params, t: f64, x: f64, y: f64) -> Result<f64> {
    let pt = interior_point(p, t, x, y)?;
    uniform_integral(p.uniform_rate(), p.c, &pt)
}

/// Uniform-motion density, evaluated by the Bessel integral.
pub fn density_uniform(p: &Planar3Params, t: f64, x: f64, y: f64) -> Result<f64> {
    require_kind(p, Planar3Kind::Uniform)?;
    density(p, t, x, y)
}

/// Uniform-motion density by the triple series over direction counts.
pub fn density_uniform_series(p: &Planar3Params, t: f64, x: f64, y: f64) -> Result<f64> {
    require_kind(p, Planar3Kind::Uniform)?;
    let pt = interior_point(p, t, x, y)?;
    let (lambda, c) = (p.lambda, p.c);
    let lr = (lambda / (9.0 * c)).ln();
    let lz = pt.z.map(f64::ln);
    let log_term = |n: [usize; 3]| {
        let total = n[0] + n[1] + n[2];
        let mut v = (total + 2) as f64 * lr + ln_factorial(total + 3);
        for i in 0..3 {
            v += n[i] as f64 * lz[i] - ln_factorial(n[i]) - ln_factorial(n[i] + 1);
        }
        v
    };
    let log_sum = summed_shells(|shell| {
        let mut logs = Vec::with_capacity((shell + 1) * (shell + 2) / 2);
        for n0 in 0..=shell {
            for n1 in 0..=shell - n0 {
                logs.push(log_term([n0, n1, shell - n0 - n1]));
            }
        }
        logs
    })?;
    Ok(2.0 / SQRT3 * (log_sum - lambda * t).exp())
}

/// SD-motion density: the uniform density at rate `3λ/2`.
pub fn density_sd(p: &Planar3Params, t: f64, x: f64, y: f64) -> Result<f64> {
    require_kind(p, Planar3Kind::SymmetricallyDeviating)?;
    density(p, t, x, y)
}

/// `(32e^{-λt}/(81√3))(λ/c)² ∫₀^∞ e^{-u²}u⁷ ∏ h(aᵢu) du`, `aᵢ = (2/3)√(λzᵢ/c)`.
///
/// This is the Bessel integral with `I₁(aᵢu) = aᵢu·h(aᵢu)` so that the
/// `(z₀z₁z₂)^{-1/2}` prefactor cancels.
pub(crate) fn uniform_integral(lambda: f64, c: f64, pt: &TrianglePoint) -> Result<f64> {
    let args = pt.z.map(|z| 2.0 / 3.0 * (lambda * z.max(0.0) / c).sqrt());
    let r = lambda / c;
    let pref = 32.0 / (81.0 * SQRT3) * r * r;
    Ok(pref * bessel_h_moment(7, &args, -lambda * pt.t)?)
}

/// Endpoint and the sequence of directions taken.
#[derive(Debug, Clone, PartialEq)]
pub struct Planar3Sample {
    pub x: f64,
    pub y: f64,
    pub directions: Vec<u8>,
}

impl Planar3Sample {
    pub fn distinct_directions(&self) -> usize {
        let mut seen = [false; 3];
        for &d in &self.directions {
            seen[d as usize] = true;
        }
        seen.iter().filter(|&&s| s).count()
    }
}

pub fn velocity(c: f64, direction: u8) -> [f64; 2] {
    match direction {
        0 => [c, 0.0],
        1 => [-0.5 * c, 0.5 * SQRT3 * c],
        _ => [-0.5 * c, -0.5 * SQRT3 * c],
    }
}

/// Exact path simulation up to time `t`.
pub fn sample_planar3<R: Rng + ?Sized>(p: &Planar3Params, t: f64, rng: &mut R) -> Planar3Sample {
    let mut d: u8 = rng.random_range(0..3);
    let mut directions = vec![d];
    let (mut x, mut y, mut now) = (0.0, 0.0, 0.0);
    loop {
        let next = (now + exp1(rng) / p.lambda).min(t);
        let v = velocity(p.c, d);
        x += v[0] * (next - now);
        y += v[1] * (next - now);
        if next >= t {
            return Planar3Sample { x, y, directions };
        }
        now = next;
        d = match p.kind {
            Planar3Kind::Uniform => rng.random_range(0..3),
            Planar3Kind::SymmetricallyDeviating => (d + rng.random_range(1..3)) % 3,
        };
        directions.push(d);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        assert_eq!(in_triangle(0.0, 0.0, 1.0, 1.0), Location::Interior);
        assert_eq!(in_triangle(1.0, 0.0, 1.0, 1.0), Location::Boundary);
        assert_eq!(in_triangle(1.01, 0.0, 1.0, 1.0), Location::Outside);
        assert_eq!(in_triangle(-0.5, 0.1, 1.0, 1.0), Location::Boundary);
    }

    #[test]
    fn barycentric_sum() {
        let pt = TrianglePoint::new(0.13, -0.27, 1.3, 0.9);
        assert!((pt.z.iter().sum::<f64>() - 3.0 * 0.9 * 1.3).abs() < 1e-14);
    }

    #[test]
    fn series_matches_integral_at_reference_point() {
        let p = Planar3Params::uniform(1.0, 1.0).unwrap();
        let s = density_uniform_series(&p, 1.0, 0.1, 0.2).unwrap();
        let i = density_uniform(&p, 1.0, 0.1, 0.2).unwrap();
        assert!((s - i).abs() < 1e-12, "{s} vs {i}");
        assert!((s - 0.0625756622621).abs() < 1e-12);
    }

    #[test]
    fn sd_is_uniform_at_three_halves_rate() {
        let sd = Planar3Params::new(Planar3Kind::SymmetricallyDeviating, 2.0, 1.0).unwrap();
        let un = Planar3Params::uniform(3.0, 1.0).unwrap();
        let a = density_sd(&sd, 1.0, 0.2, -0.1).unwrap();
        let b = density_uniform(&un, 1.0, 0.2, -0.1).unwrap();
        assert_eq!(a, b);
        assert!(density_uniform(&sd, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn boundary_and_outside_are_domain_errors() {
        let p = Planar3Params::uniform(1.0, 1.0).unwrap();
        assert!(matches!(density(&p, 1.0, 1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(density(&p, 1.0, 2.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn sampler_zero_events_lands_on_vertex() {
        let p = Planar3Params::uniform(1e-12, 1.0).unwrap();
        let mut rng = crate::rng::path_stream(5, 1);
        let s = sample_planar3(&p, 2.0, &mut rng);
        assert_eq!(s.directions.len(), 1);
        let v = velocity(1.0, s.directions[0]);
        assert!((s.x - 2.0 * v[0]).abs() < 1e-15 && (s.y - 2.0 * v[1]).abs() < 1e-15);
    }
}
