use serde::{Deserialize, Serialize};

use super::MotionKind;

/// Total probabilities of the 6 vertices, 12 edges and 8 faces given `Λ(t)`.
pub fn mass_vertices(kind: MotionKind, cum_rate: f64) -> f64 {
    let (kind, f) = kind.analytic_equivalent();
    let l = f * cum_rate;
    match kind {
        MotionKind::Osm => (-l).exp(),
        _ => (-5.0 * l / 6.0).exp(),
    }
}

pub fn mass_edges(kind: MotionKind, cum_rate: f64) -> f64 {
    let (kind, f) = kind.analytic_equivalent();
    let l = f * cum_rate;
    match kind {
        MotionKind::Osm => 4.0 * ((-0.75 * l).exp() - (-l).exp()),
        _ => 4.0 * ((-2.0 * l / 3.0).exp() - (-5.0 * l / 6.0).exp()),
    }
}

pub fn mass_faces(kind: MotionKind, cum_rate: f64) -> f64 {
    let (kind, f) = kind.analytic_equivalent();
    let l = f * cum_rate;
    match kind {
        MotionKind::Osm => {
            let d = (-0.5 * l).exp() - (-0.25 * l).exp();
            4.0 * d * d
        }
        _ => 4.0 * ((-0.5 * l).exp() - 2.0 * (-2.0 * l / 3.0).exp() + (-5.0 * l / 6.0).exp()),
    }
}

pub fn mass_interior(kind: MotionKind, cum_rate: f64) -> f64 {
    1.0 - mass_vertices(kind, cum_rate) - mass_edges(kind, cum_rate) - mass_faces(kind, cum_rate)
}

pub fn per_edge_mass(kind: MotionKind, cum_rate: f64) -> f64 {
    mass_edges(kind, cum_rate) / 12.0
}

pub fn per_face_mass(kind: MotionKind, cum_rate: f64) -> f64 {
    mass_faces(kind, cum_rate) / 8.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularMasses {
    pub vertices: f64,
    pub edges: f64,
    pub faces: f64,
    pub interior: f64,
}

impl SingularMasses {
    pub fn new(kind: MotionKind, cum_rate: f64) -> Self {
        Self {
            vertices: mass_vertices(kind, cum_rate),
            edges: mass_edges(kind, cum_rate),
            faces: mass_faces(kind, cum_rate),
            interior: mass_interior(kind, cum_rate),
        }
    }
}
