//! The motion in three dimensions.
//!
//! The particle starts at the origin with one of the directions
//! `d₀ = +x, d₁ = +y, d₂ = +z, d₃ = −x, d₄ = −y, d₅ = −z` and switches at
//! the events of a Poisson process with rate `λ(t)`:
//!
//! - OSM picks among the four directions orthogonal to the current one;
//! - OUM picks among all six;
//! - OSDM picks among the five other directions, and equals an OUM with
//!   rate `6λ/5` in law.
//!
//! At time `t` the position lies in the octahedron `|x|+|y|+|z| ≤ ct`. The
//! set of distinct directions used decides whether it sits on a vertex, an
//! edge, a face or in the interior.

mod densities;
mod masses;
mod mc;
mod rate;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, Result};
use crate::rng::{exp1, Rng};

pub use densities::{
    edge_density, edge_density_osm, edge_density_oum, face_density, face_to_planar, plane_conditioned_density,
    plane_conditioned_mass,
};
pub use masses::{mass_edges, mass_faces, mass_interior, mass_vertices, per_edge_mass, per_face_mass, SingularMasses};
pub use mc::{class_frequencies, interior_histogram_mc, ClassCounts};
pub use rate::RateFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MotionKind {
    Osm,
    Oum,
    Osdm,
}

impl MotionKind {
    /// Kind and rate factor of the motion used for closed forms: OSDM(λ) is OUM(6λ/5).
    pub fn analytic_equivalent(self) -> (MotionKind, f64) {
        match self {
            MotionKind::Osdm => (MotionKind::Oum, 1.2),
            other => (other, 1.0),
        }
    }

    /// Draws the direction following `current`.
    pub fn next_direction<R: Rng + ?Sized>(self, current: u8, rng: &mut R) -> u8 {
        match self {
            MotionKind::Oum => rng.random_range(0..6),
            MotionKind::Osdm => (current + rng.random_range(1..6)) % 6,
            MotionKind::Osm => {
                // One of the two other axes, then a sign.
                let axis = current % 3;
                let k: u8 = rng.random_range(0..4);
                let other_axis = (axis + 1 + (k & 1)) % 3;
                other_axis + 3 * (k >> 1)
            }
        }
    }

    /// Whether `to` may follow `from`.
    pub fn allows(self, from: u8, to: u8) -> bool {
        match self {
            MotionKind::Oum => true,
            MotionKind::Osdm => from != to,
            MotionKind::Osm => from % 3 != to % 3,
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "osm" => Some(Self::Osm),
            "oum" => Some(Self::Oum),
            "osdm" => Some(Self::Osdm),
            _ => None,
        }
    }
}

/// Unit vector of direction `d`.
pub fn direction_vector(d: u8) -> [f64; 3] {
    let mut v = [0.0; 3];
    v[(d % 3) as usize] = if d < 3 { 1.0 } else { -1.0 };
    v
}

/// A sample path: initial direction, then one direction per event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path3D {
    pub horizon: f64,
    pub event_times: Vec<f64>,
    pub directions: Vec<u8>,
    pub kind: MotionKind,
    pub c: f64,
}

/// Where the endpoint sits on the octahedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularClass {
    Vertex(u8),
    /// Two orthogonal directions, listed in increasing order.
    Edge(u8, u8),
    /// Octant signs (±1) of the three used directions.
    Face([i8; 3]),
    Interior,
}

impl SingularClass {
    /// Classifies a 6-bit set of used directions.
    ///
    /// Paths using only an opposite pair such as `{d₀, d₃}` are interior:
    /// they stay on a segment through the octahedron, not on its boundary.
    pub fn from_mask(mask: u8) -> Self {
        let dirs: Vec<u8> = (0..6).filter(|d| mask & (1 << d) != 0).collect();
        let opposite = |a: u8, b: u8| a % 3 == b % 3;
        match dirs.as_slice() {
            [d] => Self::Vertex(*d),
            [a, b] if !opposite(*a, *b) => Self::Edge(*a, *b),
            [a, b, c] if !opposite(*a, *b) && !opposite(*a, *c) && !opposite(*b, *c) => {
                let mut signs = [0i8; 3];
                for &d in &[*a, *b, *c] {
                    signs[(d % 3) as usize] = if d < 3 { 1 } else { -1 };
                }
                Self::Face(signs)
            }
            _ => Self::Interior,
        }
    }
}

/// Everything the analyses need from one path, gathered without storing it.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PathSummary {
    pub endpoint: [f64; 3],
    /// Time spent along the x, y and z axes.
    pub occupation: [f64; 3],
    /// Bit `d` set when direction `d` was used.
    pub used: u8,
    pub events: u32,
}

impl PathSummary {
    pub fn class(&self) -> SingularClass {
        SingularClass::from_mask(self.used)
    }
}

/// Runs one path, reporting each segment as `(direction, duration)`.
///
/// Event times come from direct exponential draws for a constant rate and
/// from thinning against the supremum of a tabulated rate.
pub fn walk<R, F>(kind: MotionKind, rate: &RateFunction, t: f64, rng: &mut R, mut visit: F)
where
    R: Rng + ?Sized,
    F: FnMut(Option<f64>, u8, f64),
{
    let mut d: u8 = rng.random_range(0..6);
    let mut now = 0.0;
    let bound = rate.sup_bound_on(t);
    loop {
        let next = match rate {
            RateFunction::Constant { lambda } => now + exp1(rng) / lambda,
            RateFunction::Tabulated { .. } => {
                let mut cand = now;
                loop {
                    cand += exp1(rng) / bound;
                    if cand >= t || rng.random::<f64>() * bound < rate.rate(cand) {
                        break cand;
                    }
                }
            }
        };
        if next >= t {
            visit(None, d, t - now);
            return;
        }
        visit(Some(next), d, next - now);
        d = kind.next_direction(d, rng);
        now = next;
    }
}

/// Summary of one fresh path.
pub fn sample_summary<R: Rng + ?Sized>(
    kind: MotionKind,
    rate: &RateFunction,
    c: f64,
    t: f64,
    rng: &mut R,
) -> PathSummary {
    let mut s = PathSummary::default();
    walk(kind, rate, t, rng, |event, d, dt| {
        let axis = (d % 3) as usize;
        let sign = if d < 3 { 1.0 } else { -1.0 };
        s.endpoint[axis] += sign * c * dt;
        s.occupation[axis] += dt;
        s.used |= 1 << d;
        if event.is_some() {
            s.events += 1;
        }
    });
    s
}

/// Full path record.
pub fn sample_path<R: Rng + ?Sized>(
    kind: MotionKind,
    rate: &RateFunction,
    c: f64,
    t: f64,
    rng: &mut R,
) -> Result<Path3D> {
    check_positive("c", c)?;
    check_positive("t", t)?;
    let mut event_times = Vec::new();
    let mut directions = Vec::new();
    walk(kind, rate, t, rng, |event, d, _| {
        directions.push(d);
        if let Some(at) = event {
            event_times.push(at);
        }
    });
    Ok(Path3D {
        horizon: t,
        event_times,
        directions,
        kind,
        c,
    })
}

impl Path3D {
    /// Segments as `(direction, start, end)`.
    pub fn segments(&self) -> impl Iterator<Item = (u8, f64, f64)> + '_ {
        let n = self.directions.len();
        (0..n).map(move |i| {
            let start = if i == 0 { 0.0 } else { self.event_times[i - 1] };
            let end = if i + 1 < n { self.event_times[i] } else { self.horizon };
            (self.directions[i], start, end)
        })
    }

    /// Checks ordering, lengths and the kind's transition rule.
    pub fn is_consistent(&self) -> bool {
        self.directions.len() == self.event_times.len() + 1
            && self.event_times.windows(2).all(|w| w[0] < w[1])
            && self.event_times.iter().all(|&e| e > 0.0 && e < self.horizon)
            && self.directions.iter().all(|&d| d < 6)
            && self.directions.windows(2).all(|w| self.kind.allows(w[0], w[1]))
    }

    pub fn summary(&self) -> PathSummary {
        let mut s = PathSummary {
            events: self.event_times.len() as u32,
            ..Default::default()
        };
        for (d, a, b) in self.segments() {
            let axis = (d % 3) as usize;
            let sign = if d < 3 { 1.0 } else { -1.0 };
            s.endpoint[axis] += sign * self.c * (b - a);
            s.occupation[axis] += b - a;
            s.used |= 1 << d;
        }
        s
    }

    /// Writes the path as one JSON line, tagged with the seed that produced it.
    pub fn write_jsonl<W: Write>(&self, seed: u64, out: &mut W) -> std::io::Result<()> {
        #[derive(Serialize)]
        struct Record<'a> {
            seed: u64,
            #[serde(flatten)]
            path: &'a Path3D,
        }
        serde_json::to_writer(&mut *out, &Record { seed, path: self })?;
        out.write_all(b"\n")
    }
}

/// Position at the horizon.
pub fn endpoint(path: &Path3D) -> [f64; 3] {
    path.summary().endpoint
}

pub fn classify(path: &Path3D) -> SingularClass {
    SingularClass::from_mask(path.directions.iter().fold(0u8, |m, &d| m | (1 << d)))
}

#[cfg(test)]
mod tests;
