//! Closed-form densities on the boundary of the octahedron, constant rate.

use super::MotionKind;
use crate::error::{check_positive, Error, Result};
use crate::planar3::{self, TrianglePoint};
use crate::telegraph::{sym_density_closed, TelegraphParams};

const SQRT3: f64 = 1.7320508075688772;

/// Density of `X − Y` on the edge `{X + Y = ct, Z = 0}` for an OSM:
/// `(1/3) e^{-3λt/4}` times the telegraph density with rate `λ/4`.
///
/// Equivalently `(e^{-λt}/6c)[(λ/4) I₀(z) + ∂ₜ I₀(z)]`, `z = (λ/4c)√(c²t²−v²)`.
pub fn edge_density_osm(lambda: f64, c: f64, t: f64, v: f64) -> Result<f64> {
    let tel = TelegraphParams::new(lambda / 4.0, c)?;
    Ok((-0.75 * lambda * t).exp() / 3.0 * sym_density_closed(&tel, t, v)?)
}

/// OUM analogue: `(1/3) e^{-2λt/3}` times the telegraph density with rate `λ/6`.
///
/// Paths using only `d₀` and `d₁` have probability `(1/3)e^{-2λt/3}`; given
/// that, events occur at rate `λ/3` and half of them reverse the walker.
pub fn edge_density_oum(lambda: f64, c: f64, t: f64, v: f64) -> Result<f64> {
    let tel = TelegraphParams::new(lambda / 6.0, c)?;
    Ok((-2.0 * lambda * t / 3.0).exp() / 3.0 * sym_density_closed(&tel, t, v)?)
}

/// Edge density for any kind; OSDM is evaluated as OUM with rate `6λ/5`.
pub fn edge_density(kind: MotionKind, lambda: f64, c: f64, t: f64, v: f64) -> Result<f64> {
    let (kind, f) = kind.analytic_equivalent();
    match kind {
        MotionKind::Osm => edge_density_osm(lambda, c, t, v),
        _ => edge_density_oum(f * lambda, c, t, v),
    }
}

/// Joint density of `(X(t), Y(t))` together with `Z ≡ 0` on `[0, t]`, OSM only.
///
/// Given the plane, `X = U + V`, `Y = U − V` with `U`, `V` independent
/// telegraph processes of rate `λ/4` and speed `c/2`, so the density is
/// `(e^{-λt}/3c²) B(x+y) B(x−y)` with
/// `B(w) = (λ/4) I₀(z) + ∂ₜ I₀(z)`, `z = (λ/4c)√(c²t² − w²)`.
pub fn plane_conditioned_density(kind: MotionKind, lambda: f64, c: f64, t: f64, x: f64, y: f64) -> Result<f64> {
    if kind != MotionKind::Osm {
        return Err(Error::Unsupported(format!(
            "plane-conditioned density has no closed form for {kind:?}: the conditioned motion is a planar \
             uniform orthogonal motion whose coordinates are not independent"
        )));
    }
    check_positive("t", t)?;
    if !(x.abs() + y.abs() < c * t) {
        return Err(Error::Domain(format!(
            "|x|+|y| = {} is not below ct",
            x.abs() + y.abs()
        )));
    }
    let half = TelegraphParams::new(lambda / 4.0, c / 2.0)?;
    let fu = sym_density_closed(&half, t, 0.5 * (x + y))?;
    let fv = sym_density_closed(&half, t, 0.5 * (x - y))?;
    Ok((2.0 / 3.0) * (-0.5 * lambda * t).exp() * 0.5 * fu * fv)
}

/// Probability that `Z ≡ 0` on `[0, t]` and the particle is inside the square.
pub fn plane_conditioned_mass(kind: MotionKind, lambda: f64, t: f64) -> Result<f64> {
    match kind {
        MotionKind::Osm => {
            let e = (-0.25 * lambda * t).exp();
            Ok(2.0 / 3.0 * (-0.5 * lambda * t).exp() * (1.0 - e) * (1.0 - e))
        }
        _ => Err(Error::Unsupported(format!("plane-conditioned mass for {kind:?}"))),
    }
}

/// Affine map of the face `F⁺ = {x, y, z > 0, x + y + z = ct}`, given by
/// `(x, y)`, onto the planar three-direction triangle.
pub fn face_to_planar(c: f64, t: f64, x: f64, y: f64) -> (f64, f64) {
    let ct = c * t;
    (0.5 * (3.0 * x - ct), 0.5 * SQRT3 * (x + 2.0 * y - ct))
}

/// Density of `(X(t), Y(t))` on the face `F⁺`:
/// `(3√3/4) e^{-λt/2} q(t, u, v)` with `(u, v)` from [`face_to_planar`] and
/// `q` the uniform three-direction planar density with rate `3λ/4` (OSM) or
/// `λ/2` (OUM).
pub fn face_density(kind: MotionKind, lambda: f64, c: f64, t: f64, x: f64, y: f64) -> Result<f64> {
    check_positive("lambda", lambda)?;
    check_positive("c", c)?;
    check_positive("t", t)?;
    let ct = c * t;
    if !(x > 0.0 && y > 0.0 && x + y < ct) {
        return Err(Error::Domain(format!("({x}, {y}) is not inside the face")));
    }
    let (kind, f) = kind.analytic_equivalent();
    let lambda = f * lambda;
    let q_rate = match kind {
        MotionKind::Osm => 0.75 * lambda,
        _ => 0.5 * lambda,
    };
    let (u, v) = face_to_planar(c, t, x, y);
    // The planar coordinates are exactly (3x, 3y, 3z); use them directly.
    let mut pt = TrianglePoint::new(u, v, t, c);
    pt.z = [3.0 * x, 3.0 * y, 3.0 * (ct - x - y)];
    let q = planar3::uniform_integral(q_rate, c, &pt)?;
    Ok(0.75 * SQRT3 * (-0.5 * lambda * t).exp() * q)
}
