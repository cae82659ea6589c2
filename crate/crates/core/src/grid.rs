//! Binned densities over boxes and triangles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::cubature::Triangle;

/// How points map to bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinGeometry {
    /// Axis-aligned lattice in 1 to 3 dimensions; bins are half-open except
    /// the last one along each axis.
    Regular {
        lower: Vec<f64>,
        upper: Vec<f64>,
        shape: Vec<usize>,
    },
    /// A triangle cut into `m²` congruent sub-triangles by lines parallel to its sides.
    TriangleMesh { vertices: Triangle, m: usize },
}

/// Per-bin weights plus the geometry and the number of contributing samples.
///
/// `values` holds counts for empirical grids and probabilities for analytic
/// ones; [`DensityGrid::probabilities`] normalizes either by `n_samples`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityGrid {
    pub geometry: BinGeometry,
    pub values: Vec<f64>,
    pub n_samples: u64,
}

impl BinGeometry {
    pub fn regular(lower: &[f64], upper: &[f64], shape: &[usize]) -> Result<Self> {
        if lower.len() != upper.len() || lower.len() != shape.len() || !(1..=3).contains(&shape.len()) {
            return Err(Error::InvalidParameter("grid needs 1 to 3 matching axes".into()));
        }
        if shape.iter().any(|&n| n == 0) || lower.iter().zip(upper).any(|(l, u)| !(l < u)) {
            return Err(Error::InvalidParameter(
                "grid axes must be non-empty with lower < upper".into(),
            ));
        }
        Ok(Self::Regular {
            lower: lower.to_vec(),
            upper: upper.to_vec(),
            shape: shape.to_vec(),
        })
    }

    pub fn triangle_mesh(vertices: Triangle, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("triangle mesh needs m >= 1".into()));
        }
        Ok(Self::TriangleMesh { vertices, m })
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Regular { shape, .. } => shape.iter().product(),
            Self::TriangleMesh { m, .. } => m * m,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Bin index of a point, or `None` outside the covered region.
    pub fn locate(&self, point: &[f64]) -> Option<usize> {
        match self {
            Self::Regular { lower, upper, shape } => {
                let mut index = 0;
                for d in 0..shape.len() {
                    let x = point[d];
                    if !(x >= lower[d] && x <= upper[d]) {
                        return None;
                    }
                    let n = shape[d];
                    let i = (((x - lower[d]) / (upper[d] - lower[d])) * n as f64) as usize;
                    index = index * n + i.min(n - 1);
                }
                Some(index)
            }
            Self::TriangleMesh { vertices, m } => {
                let [l0, l1, l2] = barycentric(vertices, point[0], point[1]);
                let eps = -1e-12;
                if l0 < eps || l1 < eps || l2 < eps {
                    return None;
                }
                let m = *m;
                let (u, v) = (l1.max(0.0) * m as f64, l2.max(0.0) * m as f64);
                let mut i = (u as usize).min(m - 1);
                let mut j = (v as usize).min(m - 1);
                if i + j > m - 1 {
                    // Rounding put the point past the outer row.
                    if u - i as f64 > v - j as f64 {
                        j = m - 1 - i
                    } else {
                        i = m - 1 - j
                    }
                }
                let upward = (u - i as f64) + (v - j as f64) < 1.0 || i + j == m - 1;
                Some(mesh_index(m, i, j, upward))
            }
        }
    }

    /// Area (or length, or volume) of bin `index`.
    pub fn measure(&self, index: usize) -> f64 {
        match self {
            Self::Regular { lower, upper, shape } => {
                debug_assert!(index < self.len());
                (0..shape.len())
                    .map(|d| (upper[d] - lower[d]) / shape[d] as f64)
                    .product::<f64>()
            }
            Self::TriangleMesh { vertices, m } => crate::specfun::cubature::area(vertices) / (m * m) as f64,
        }
    }

    /// Sub-triangle of bin `index` for a triangle mesh.
    pub fn cell_triangle(&self, index: usize) -> Option<Triangle> {
        let Self::TriangleMesh { vertices, m } = self else {
            return None;
        };
        let m = *m;
        let ups = m * (m + 1) / 2;
        let (i, j, upward) = if index < ups {
            let (i, j) = unrank(index, m);
            (i, j, true)
        } else {
            let (i, j) = unrank(index - ups, m - 1);
            (i, j, false)
        };
        let at = |a: usize, b: usize| {
            let (l1, l2) = (a as f64 / m as f64, b as f64 / m as f64);
            let l0 = 1.0 - l1 - l2;
            [
                l0 * vertices[0][0] + l1 * vertices[1][0] + l2 * vertices[2][0],
                l0 * vertices[0][1] + l1 * vertices[1][1] + l2 * vertices[2][1],
            ]
        };
        Some(if upward {
            [at(i, j), at(i + 1, j), at(i, j + 1)]
        } else {
            [at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)]
        })
    }

    /// Box `(lower, upper)` of bin `index` for a regular lattice.
    pub fn cell_box(&self, index: usize) -> Option<(Vec<f64>, Vec<f64>)> {
        let Self::Regular { lower, upper, shape } = self else {
            return None;
        };
        let mut rem = index;
        let mut lo = vec![0.0; shape.len()];
        let mut hi = vec![0.0; shape.len()];
        for d in (0..shape.len()).rev() {
            let i = rem % shape[d];
            rem /= shape[d];
            let w = (upper[d] - lower[d]) / shape[d] as f64;
            lo[d] = lower[d] + i as f64 * w;
            hi[d] = lo[d] + w;
        }
        Some((lo, hi))
    }
}

fn barycentric(tri: &Triangle, x: f64, y: f64) -> [f64; 3] {
    let [a, b, c] = *tri;
    let det = (b[1] - c[1]) * (a[0] - c[0]) + (c[0] - b[0]) * (a[1] - c[1]);
    let l0 = ((b[1] - c[1]) * (x - c[0]) + (c[0] - b[0]) * (y - c[1])) / det;
    let l1 = ((c[1] - a[1]) * (x - c[0]) + (a[0] - c[0]) * (y - c[1])) / det;
    [l0, l1, 1.0 - l0 - l1]
}

// Row-major rank of (i, j) with i + j <= n - 1; row r holds n - r entries.
fn rank(n: usize, i: usize, j: usize) -> usize {
    i * n - i * i.saturating_sub(1) / 2 + j
}

fn unrank(mut index: usize, n: usize) -> (usize, usize) {
    let mut i = 0;
    while index >= n - i {
        index -= n - i;
        i += 1;
    }
    (i, index)
}

fn mesh_index(m: usize, i: usize, j: usize, upward: bool) -> usize {
    if upward {
        rank(m, i, j)
    } else {
        m * (m + 1) / 2 + rank(m - 1, i, j)
    }
}

impl DensityGrid {
    pub fn zeros(geometry: BinGeometry) -> Self {
        let n = geometry.len();
        Self {
            geometry,
            values: vec![0.0; n],
            n_samples: 0,
        }
    }

    /// Records one sample; points outside the geometry count toward
    /// `n_samples` but land in no bin.
    pub fn add(&mut self, point: &[f64]) {
        self.n_samples += 1;
        if let Some(i) = self.geometry.locate(point) {
            self.values[i] += 1.0;
        }
    }

    /// Counts a sample without binning it.
    pub fn add_unbinned(&mut self) {
        self.n_samples += 1;
    }

    /// Adds another grid with the same geometry.
    pub fn merge(mut self, other: Self) -> Self {
        debug_assert_eq!(self.geometry, other.geometry);
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += b;
        }
        self.n_samples += other.n_samples;
        self
    }

    /// Bin probabilities relative to all samples.
    pub fn probabilities(&self) -> Vec<f64> {
        let n = self.n_samples.max(1) as f64;
        self.values.iter().map(|v| v / n).collect()
    }

    /// Analytic grid from per-bin probabilities.
    pub fn from_probabilities(geometry: BinGeometry, probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.len() != geometry.len() {
            return Err(Error::InvalidParameter(
                "probability vector length differs from bin count".into(),
            ));
        }
        Ok(Self {
            geometry,
            values: probabilities,
            n_samples: 1,
        })
    }

    /// Total binned probability.
    pub fn binned_mass(&self) -> f64 {
        self.probabilities().iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_unrank_roundtrip() {
        for n in 1..7 {
            let mut k = 0;
            for i in 0..n {
                for j in 0..n - i {
                    assert_eq!(rank(n, i, j), k);
                    assert_eq!(unrank(k, n), (i, j));
                    k += 1;
                }
            }
        }
    }

    #[test]
    fn mesh_cells_contain_their_centroids() {
        let tri = [[1.0, 0.0], [-0.5, 0.8], [-0.5, -0.8]];
        let g = BinGeometry::triangle_mesh(tri, 5).unwrap();
        let mut seen = vec![false; g.len()];
        for k in 0..g.len() {
            let c = g.cell_triangle(k).unwrap();
            let x = (c[0][0] + c[1][0] + c[2][0]) / 3.0;
            let y = (c[0][1] + c[1][1] + c[2][1]) / 3.0;
            assert_eq!(g.locate(&[x, y]), Some(k));
            seen[k] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn regular_locate_and_box() {
        let g = BinGeometry::regular(&[0.0, -1.0], &[1.0, 1.0], &[4, 2]).unwrap();
        let k = g.locate(&[0.6, 0.5]).unwrap();
        let (lo, hi) = g.cell_box(k).unwrap();
        assert_eq!(lo, vec![0.5, 0.0]);
        assert_eq!(hi, vec![0.75, 1.0]);
        assert_eq!(g.locate(&[1.0, 1.0]), Some(7));
        assert_eq!(g.locate(&[1.1, 0.0]), None);
    }
}
