//! Adaptive cubature over triangles.
//!
//! A degree-5 seven-point rule is applied to a triangle and to its four
//! midpoint children; their difference is the local error estimate and the
//! triangle with the largest estimate is refined next.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::specfun::Estimate;

pub type Triangle = [[f64; 2]; 3];

const SQRT15: f64 = 3.872983346207417;

fn rule<F: Fn(f64, f64) -> f64 + ?Sized>(f: &F, tri: &Triangle) -> f64 {
    let a = (6.0 - SQRT15) / 21.0;
    let b = (6.0 + SQRT15) / 21.0;
    let wa = (155.0 - SQRT15) / 1200.0;
    let wb = (155.0 + SQRT15) / 1200.0;
    let at = |l0: f64, l1: f64, l2: f64| {
        let x = l0 * tri[0][0] + l1 * tri[1][0] + l2 * tri[2][0];
        let y = l0 * tri[0][1] + l1 * tri[1][1] + l2 * tri[2][1];
        f(x, y)
    };
    let third = 1.0 / 3.0;
    let mut s = 0.225 * at(third, third, third);
    let (ca, cb) = (1.0 - 2.0 * a, 1.0 - 2.0 * b);
    s += wa * (at(a, a, ca) + at(a, ca, a) + at(ca, a, a));
    s += wb * (at(b, b, cb) + at(b, cb, b) + at(cb, b, b));
    s * area(tri)
}

pub fn area(tri: &Triangle) -> f64 {
    0.5 * ((tri[1][0] - tri[0][0]) * (tri[2][1] - tri[0][1]) - (tri[2][0] - tri[0][0]) * (tri[1][1] - tri[0][1])).abs()
}

/// The four congruent children obtained by joining edge midpoints.
pub fn subdivide(tri: &Triangle) -> [Triangle; 4] {
    let mid = |p: [f64; 2], q: [f64; 2]| [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
    let [a, b, c] = *tri;
    let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
    [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]
}

struct Cell {
    tri: Triangle,
    children: [f64; 4],
    est: Estimate,
}

impl Cell {
    fn new<F: Fn(f64, f64) -> f64 + ?Sized>(f: &F, tri: Triangle, parent: f64) -> Self {
        let kids = subdivide(&tri);
        let children = kids.map(|k| rule(f, &k));
        let value: f64 = children.iter().sum();
        Self {
            tri,
            children,
            est: Estimate {
                value,
                error: (value - parent).abs(),
            },
        }
    }
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// `∫∫_T f` over a triangle.
pub fn triangle_integral<F: Fn(f64, f64) -> f64 + ?Sized>(
    f: &F,
    tri: Triangle,
    abs_tol: f64,
    rel_tol: f64,
    max_cells: usize,
) -> Result<Estimate> {
    let first = Cell::new(f, tri, rule(f, &tri));
    let mut value = first.est.value;
    let mut error = first.est.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    while error > abs_tol.max(rel_tol * value.abs()) {
        if heap.len() >= max_cells {
            return Err(Error::NotConverged { estimate: value, error });
        }
        let worst = heap.pop().expect("heap never empty");
        value -= worst.est.value;
        error -= worst.est.error;
        for (kid, parent) in subdivide(&worst.tri).into_iter().zip(worst.children) {
            let cell = Cell::new(f, kid, parent);
            value += cell.est.value;
            error += cell.est.error;
            heap.push(cell);
        }
    }
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), c| (v + c.est.value, e + c.est.error));
    Ok(Estimate { value, error })
}

/// Sum of `triangle_integral` over a list of triangles with a shared tolerance.
pub fn triangles_integral<F: Fn(f64, f64) -> f64 + ?Sized>(
    f: &F,
    tris: &[Triangle],
    abs_tol: f64,
    rel_tol: f64,
    max_cells: usize,
) -> Result<Estimate> {
    let share = abs_tol / tris.len().max(1) as f64;
    tris.iter().try_fold(Estimate { value: 0.0, error: 0.0 }, |acc, &tri| {
        let e = triangle_integral(f, tri, share, rel_tol, max_cells)?;
        Ok(Estimate {
            value: acc.value + e.value,
            error: acc.error + e.error,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNIT: Triangle = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

    #[test]
    fn exact_for_quintics() {
        // ∫∫ x^a y^b over the unit triangle = a! b! / (a+b+2)!
        let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
        for a in 0..=5u32 {
            for b in 0..=(5 - a) {
                let q = rule(&|x: f64, y: f64| x.powi(a as i32) * y.powi(b as i32), &UNIT);
                let want = fact(a) * fact(b) / fact(a + b + 2);
                assert!((q - want).abs() < 1e-15, "x^{a} y^{b}");
            }
        }
    }

    #[test]
    fn subdivision_preserves_area() {
        let tri = [[0.3, -1.0], [2.0, 0.5], [-0.7, 1.1]];
        let total: f64 = subdivide(&tri).iter().map(area).sum();
        assert!((total - area(&tri)).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_boundary_sqrt() {
        let f = |x: f64, y: f64| (1.0 - x - y).max(0.0).sqrt();
        // ∫∫ √(1−x−y) = ∫₀¹ u √(1−u) du = 4/15
        let e = triangle_integral(&f, UNIT, 1e-8, 1e-8, 200_000).unwrap();
        assert!((e.value - 4.0 / 15.0).abs() < 1e-7, "{}", e.value);
    }
}
