//! Catalogue of governing equations as operators.
//!
//! Functions named after a displayed equation return it as printed (with
//! misprints corrected where noted); `*_generator` functions build the same
//! law's operator independently as the determinant of the forward system.

use super::operator::{generator_operator, Operator};
use crate::error::{Error, Result};
use crate::ortho3d::{direction_vector, MotionKind};

fn d(vars: usize, i: usize) -> Operator {
    Operator::partial(vars, i)
}

fn k(vars: usize, v: f64) -> Operator {
    Operator::constant(vars, v)
}

fn jump_probability(kind: MotionKind, from: u8, to: u8) -> f64 {
    if from == to {
        return 0.0;
    }
    match kind {
        MotionKind::Osm => {
            if from % 3 != to % 3 {
                0.25
            } else {
                0.0
            }
        }
        MotionKind::Oum => 1.0 / 6.0,
        MotionKind::Osdm => 0.2,
    }
}

/// Operator of the 3-D motion restricted to the directions in `dirs`, in
/// the coordinates `projection · (x, y, z)`. Jumps leaving `dirs` kill mass.
pub fn restricted_generator(
    kind: MotionKind,
    lambda: f64,
    c: f64,
    dirs: &[u8],
    projection: &[[f64; 3]],
) -> Result<Operator> {
    if dirs.iter().any(|&d| d > 5) {
        return Err(Error::InvalidParameter("directions are 0..=5".into()));
    }
    let velocities: Vec<Vec<f64>> = dirs
        .iter()
        .map(|&d| {
            let v = direction_vector(d);
            projection
                .iter()
                .map(|row| c * (row[0] * v[0] + row[1] * v[1] + row[2] * v[2]))
                .collect()
        })
        .collect();
    let rates: Vec<Vec<f64>> = dirs
        .iter()
        .map(|&i| dirs.iter().map(|&j| lambda * jump_probability(kind, i, j)).collect())
        .collect();
    let killing: Vec<f64> = dirs
        .iter()
        .map(|&i| {
            lambda
                * (0..6u8)
                    .filter(|j| !dirs.contains(j))
                    .map(|j| jump_probability(kind, i, j))
                    .sum::<f64>()
        })
        .collect();
    generator_operator(&velocities, &rates, &killing)
}

/// `∂ₜ² + 2λ∂ₜ − c²∂ₓ²` in `(t, x)`.
pub fn telegraph_equation(lambda: f64, c: f64) -> Operator {
    let v = 2;
    &(&d(v, 0).pow(2) + &d(v, 0).scale(2.0 * lambda)) - &d(v, 1).pow(2).scale(c * c)
}

/// Edge equation in `(t, v)`. OSM: `∂ₜ² + 2λ∂ₜ + (15/16)λ² − c²∂ᵥ²`;
/// OUM: `∂ₜ² + (5λ/3)∂ₜ + (2/3)λ² − c²∂ᵥ²`.
pub fn edge_equation(kind: MotionKind, lambda: f64, c: f64) -> Operator {
    let (kind, f) = kind.analytic_equivalent();
    let lambda = f * lambda;
    let (a, b) = match kind {
        MotionKind::Osm => (2.0 * lambda, 15.0 / 16.0 * lambda * lambda),
        _ => (5.0 / 3.0 * lambda, 2.0 / 3.0 * lambda * lambda),
    };
    let v = 2;
    &(&(&d(v, 0).pow(2) + &d(v, 0).scale(a)) + &k(v, b)) - &d(v, 1).pow(2).scale(c * c)
}

/// Edge equation for the OSM density conditioned on `Z ≡ 0`:
/// `∂ₜ² + λ∂ₜ + (3/16)λ² − c²∂ᵥ²`.
pub fn edge_conditioned_equation_osm(lambda: f64, c: f64) -> Operator {
    let v = 2;
    &(&(&d(v, 0).pow(2) + &d(v, 0).scale(lambda)) + &k(v, 3.0 / 16.0 * lambda * lambda)) - &d(v, 1).pow(2).scale(c * c)
}

/// Edge `{d₀, d₁}` operator from the forward system, coordinate `v = x − y`.
pub fn edge_generator(kind: MotionKind, lambda: f64, c: f64) -> Result<Operator> {
    restricted_generator(kind, lambda, c, &[0, 1], &[[1.0, -1.0, 0.0]])
}

/// Rates `(a, b)` of the `T_z` equation `∂ₜ² + ∂ₜ∂ₛ + (a + b)∂ₜ + b∂ₛ`:
/// `a` leaves the vertical state, `b` enters it.
fn tz_rates(kind: MotionKind, lambda: f64) -> (f64, f64) {
    let (kind, f) = kind.analytic_equivalent();
    let lambda = f * lambda;
    match kind {
        MotionKind::Osm => (lambda, 0.5 * lambda),
        _ => (2.0 / 3.0 * lambda, lambda / 3.0),
    }
}

/// `∂ₜ² + ∂ₜ∂ₛ + (3λ/2)∂ₜ + (λ/2)∂ₛ` (OSM) in `(t, s)`; OUM uses
/// `(a, b) = (2λ/3, λ/3)` in place of `(λ, λ/2)`.
pub fn tz_equation(kind: MotionKind, lambda: f64) -> Operator {
    let (a, b) = tz_rates(kind, lambda);
    let v = 2;
    let t = d(v, 0);
    let s = d(v, 1);
    &(&(&t.pow(2) + &(&t * &s)) + &t.scale(a + b)) + &s.scale(b)
}

/// Two-state operator of `T_z`: still (velocity 0) and vertical (velocity 1).
pub fn tz_generator(kind: MotionKind, lambda: f64) -> Result<Operator> {
    let (a, b) = tz_rates(kind, lambda);
    generator_operator(&[vec![0.0], vec![1.0]], &[vec![0.0, b], vec![a, 0.0]], &[])
}

/// The third-order face equation (OSM) in `(t, x, y)`:
/// `∂ₜ³ + 3λ∂ₜ² + (45/16)λ²∂ₜ + (25/32)λ³ + c(∂ₓ + ∂ᵧ)(∂ₜ² + 2λ∂ₜ + (15/16)λ²)
/// + c²∂ₓ∂ᵧ(∂ₜ + λ)`.
pub fn face_equation_osm(lambda: f64, c: f64) -> Operator {
    let v = 3;
    let (t, x, y) = (d(v, 0), d(v, 1), d(v, 2));
    let l = lambda;
    let lhs =
        &(&(&t.pow(3) + &t.pow(2).scale(3.0 * l)) + &t.scale(45.0 / 16.0 * l * l)) + &k(v, 25.0 / 32.0 * l.powi(3));
    let tel = &(&t.pow(2) + &t.scale(2.0 * l)) + &k(v, 15.0 / 16.0 * l * l);
    let drift = &(&x + &y).scale(c) * &tel;
    let cross = &(&x * &y).scale(c * c) * &(&t + &k(v, l));
    &(&lhs + &drift) + &cross
}

/// Face `F⁺` operator from the forward system in `(t, x, y)`.
pub fn face_generator(kind: MotionKind, lambda: f64, c: f64) -> Result<Operator> {
    restricted_generator(kind, lambda, c, &[0, 1, 2], &[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
}

/// Operator of the motion restricted to the `(x, y)`-plane in `(t, x, y)`.
pub fn plane_generator(kind: MotionKind, lambda: f64, c: f64) -> Result<Operator> {
    restricted_generator(kind, lambda, c, &[0, 1, 3, 4], &[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
}

/// Full sixth-order operator of the 3-D motion from the forward system.
pub fn ortho3d_generator(kind: MotionKind, lambda: f64, c: f64) -> Result<Operator> {
    restricted_generator(
        kind,
        lambda,
        c,
        &[0, 1, 2, 3, 4, 5],
        &[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    )
}

/// Joint `(T_z, Z)` OSM equation, expanded form, in `(t, s, z)`.
pub fn joint_tz_z_osm_expanded(lambda: f64, c: f64) -> Operator {
    let v = 3;
    let (t, s, z) = (d(v, 0), d(v, 1), d(v, 2));
    let l = lambda;
    let terms = [
        t.pow(3),
        (&t.pow(2) * &s).scale(2.0),
        &t * &s.pow(2),
        t.pow(2).scale(2.5 * l),
        s.pow(2).scale(0.5 * l),
        (&t * &s).scale(3.0 * l),
        t.scale(1.5 * l * l),
        s.scale(0.5 * l * l),
        (&t * &z.pow(2)).scale(-c * c),
        z.pow(2).scale(-0.5 * c * c * l),
    ];
    terms.iter().fold(Operator::zero(v), |acc, x| &acc + x)
}

/// Joint `(T_z, Z)` OSM equation, factored form:
/// `(∂ₜ + λ/2)[(∂ₜ + ∂ₛ)² + 2λ(∂ₜ + ∂ₛ) − c²∂_z²] + (λ²/2)(∂ₜ − ∂ₛ)`.
pub fn joint_tz_z_osm_factored(lambda: f64, c: f64) -> Operator {
    let v = 3;
    let (t, s, z) = (d(v, 0), d(v, 1), d(v, 2));
    let u = &t + &s;
    let tel = &(&u.pow(2) + &u.scale(2.0 * lambda)) - &z.pow(2).scale(c * c);
    &(&(&t + &k(v, 0.5 * lambda)) * &tel) + &(&t - &s).scale(0.5 * lambda * lambda)
}

/// The characteristic form `∂₁∂₂∂₃ − (λ²/8c)(∂₂ + ∂₃)` in
/// `z₁ = t − s, z₂ = cs + z, z₃ = cs − z`, pulled back to `(t, s, z)`,
/// conjugated to `p = e^{−λ(t+s)/2} q` and scaled by `4c²`.
pub fn joint_tz_z_osm_characteristic(lambda: f64, c: f64) -> Operator {
    let v = 3;
    let (t, s, z) = (d(v, 0), d(v, 1), d(v, 2));
    let q = Operator::from_terms(
        3,
        &[
            (1.0, &[1, 1, 1]),
            (-lambda * lambda / (8.0 * c), &[0, 1, 0]),
            (-lambda * lambda / (8.0 * c), &[0, 0, 1]),
        ],
    )
    .expect("three variables");
    let u = (&t + &s).scale(1.0 / c);
    let images = [t.clone(), (&u + &z).scale(0.5), (&u - &z).scale(0.5)];
    let pulled = q.substitute(&images).expect("three images");
    pulled.shift(0, 0.5 * lambda).shift(1, 0.5 * lambda).scale(4.0 * c * c)
}

/// Joint `(T_z, Z)` OUM equation, expanded form, in `(t, s, z)`. The `∂ₜ²`
/// coefficient is `2λ`.
pub fn joint_tz_z_oum_expanded(lambda: f64, c: f64) -> Operator {
    let v = 3;
    let (t, s, z) = (d(v, 0), d(v, 1), d(v, 2));
    let l = lambda;
    let terms = [
        t.pow(3),
        (&t.pow(2) * &s).scale(2.0),
        &t * &s.pow(2),
        t.pow(2).scale(2.0 * l),
        s.pow(2).scale(l / 3.0),
        (&t * &s).scale(7.0 * l / 3.0),
        t.scale(l * l),
        s.scale(l * l / 3.0),
        (&t * &z.pow(2)).scale(-c * c),
        z.pow(2).scale(-c * c * l / 3.0),
    ];
    terms.iter().fold(Operator::zero(v), |acc, x| &acc + x)
}

/// Joint `(T_z, Z)` operator from the three-state forward system: horizontal
/// (velocity 0) and vertical up/down (velocity `(1, ±c)`).
pub fn joint_tz_z_generator(kind: MotionKind, lambda: f64, c: f64) -> Result<Operator> {
    let (a, b) = tz_rates(kind, lambda);
    let vel = [vec![0.0, 0.0], vec![1.0, c], vec![1.0, -c]];
    // Between the two vertical states: OUM switches directly, OSM never does.
    let (kind, f) = kind.analytic_equivalent();
    let vv = match kind {
        MotionKind::Osm => 0.0,
        _ => f * lambda / 6.0,
    };
    let rates = [vec![0.0, b / 2.0, b / 2.0], vec![a, 0.0, vv], vec![a, vv, 0.0]];
    generator_operator(&vel, &rates, &[])
}

/// Joint `(T_x, T_y)` operator in `(t, s, r)`: one state per axis.
pub fn joint_txty_generator(kind: MotionKind, lambda: f64) -> Result<Operator> {
    let (kind, f) = kind.analytic_equivalent();
    let lambda = f * lambda;
    let x = match kind {
        MotionKind::Osm => 0.5 * lambda,
        _ => lambda / 3.0,
    };
    let vel = [vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0]];
    let rates = [vec![0.0, x, x], vec![x, 0.0, x], vec![x, x, 0.0]];
    generator_operator(&vel, &rates, &[])
}

/// Uniform three-direction planar motion (rate `λ`, speed `c`) in `(t, x, y)`.
pub fn planar3_generator(lambda: f64, c: f64) -> Result<Operator> {
    let vel: Vec<Vec<f64>> = (0..3).map(|dir| crate::planar3::velocity(c, dir).to_vec()).collect();
    let x = lambda / 3.0;
    let rates = [vec![0.0, x, x], vec![x, 0.0, x], vec![x, x, 0.0]];
    generator_operator(&vel, &rates, &[])
}

/// The displayed sixth-order OSM equation as `LHS − RHS` in `(t, x, y, z)`.
pub fn sixth_order_osm(lambda: f64, c: f64) -> Operator {
    let v = 4;
    let (x, y, z) = (d(v, 1), d(v, 2), d(v, 3));
    let e = &d(v, 0) + &k(v, lambda);
    let l = lambda;
    let lhs = &(&e.pow(6) - &e.pow(4).scale(0.75 * l * l)) - &e.pow(3).scale(0.25 * l.powi(3));
    let (x2, y2, z2) = (x.pow(2), y.pow(2), z.pow(2));
    let mixed = &(&(&x2 * &y2) + &(&x2 * &z2)) + &(&y2 * &z2);
    let lap = &(&x2 + &y2) + &z2;
    let rhs = &(&(&(&x2 * &y2) * &z2).scale(c.powi(6)) - &(&e.pow(2) * &mixed).scale(c.powi(4)))
        + &(&(&e.pow(4) - &e.pow(2).scale(0.25 * l * l)) * &lap).scale(c * c);
    &lhs - &rhs
}

/// The D'Alembert-product form for `q = e^{λt}p`,
/// `Π(∂ₜ² − c²∂ᵢ²) − (3λ²/4)∂ₜ²(∂ₜ² + (λ/3)∂ₜ − (c²/3)Δ)`, conjugated back to `p`.
pub fn sixth_order_dalembert(lambda: f64, c: f64) -> Operator {
    let v = 4;
    let t = d(v, 0);
    let mut prod = k(v, 1.0);
    let mut lap = Operator::zero(v);
    for i in 1..4 {
        prod = &prod * &(&t.pow(2) - &d(v, i).pow(2).scale(c * c));
        lap = &lap + &d(v, i).pow(2);
    }
    let inner = &(&t.pow(2) + &t.scale(lambda / 3.0)) - &lap.scale(c * c / 3.0);
    let q_form = &prod - &(&t.pow(2) * &inner).scale(0.75 * lambda * lambda);
    q_form.shift(0, lambda)
}

/// The planar fourth-order OSM equation in `(t, x, y)`:
/// `(∂ₜ + λ)²[∂ₜ² + 2λ∂ₜ − c²Δ] + c⁴∂ₓ²∂ᵧ²`.
pub fn planar_fourth_order(lambda: f64, c: f64) -> Operator {
    let v = 3;
    let t = d(v, 0);
    let lap = &d(v, 1).pow(2) + &d(v, 2).pow(2);
    let e = &t + &k(v, lambda);
    let tel = &(&t.pow(2) + &t.scale(2.0 * lambda)) - &lap.scale(c * c);
    &(&e.pow(2) * &tel) + &(&d(v, 1).pow(2) * &d(v, 2).pow(2)).scale(c.powi(4))
}

/// `(∂ₜ² − c²∂ₓ²)(∂ₜ² − c²∂ᵧ²) − λ²∂ₜ²` for `q = e^{λt}p`, conjugated back to `p`.
pub fn planar_dalembert(lambda: f64, c: f64) -> Operator {
    let v = 3;
    let t = d(v, 0);
    let a = &t.pow(2) - &d(v, 1).pow(2).scale(c * c);
    let b = &t.pow(2) - &d(v, 2).pow(2).scale(c * c);
    (&(&a * &b) - &t.pow(2).scale(lambda * lambda)).shift(0, lambda)
}

/// Planar orthogonal standard motion (rate `λ`) from its four-state system.
pub fn planar_orthogonal_generator(lambda: f64, c: f64) -> Result<Operator> {
    let vel = [vec![c, 0.0], vec![0.0, c], vec![-c, 0.0], vec![0.0, -c]];
    let h = 0.5 * lambda;
    let rates = [
        vec![0.0, h, 0.0, h],
        vec![h, 0.0, h, 0.0],
        vec![0.0, h, 0.0, h],
        vec![h, 0.0, h, 0.0],
    ];
    generator_operator(&vel, &rates, &[])
}
