//! Monte Carlo summaries over many paths, deterministic for a fixed seed.

use serde::{Deserialize, Serialize};

use super::{sample_summary, MotionKind, RateFunction, SingularClass};
use crate::error::{check_positive, Result};
use crate::grid::{BinGeometry, DensityGrid};
use crate::rng::par_fold_paths;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassCounts {
    pub vertex: u64,
    pub edge: u64,
    pub face: u64,
    pub interior: u64,
}

impl ClassCounts {
    pub fn total(&self) -> u64 {
        self.vertex + self.edge + self.face + self.interior
    }

    fn record(&mut self, class: SingularClass) {
        match class {
            SingularClass::Vertex(_) => self.vertex += 1,
            SingularClass::Edge(..) => self.edge += 1,
            SingularClass::Face(_) => self.face += 1,
            SingularClass::Interior => self.interior += 1,
        }
    }

    fn merge(mut self, o: Self) -> Self {
        self.vertex += o.vertex;
        self.edge += o.edge;
        self.face += o.face;
        self.interior += o.interior;
        self
    }
}

/// Class counts of `n` endpoints.
pub fn class_frequencies(kind: MotionKind, rate: &RateFunction, c: f64, t: f64, n: u64, seed: u64) -> ClassCounts {
    par_fold_paths(
        seed,
        n,
        ClassCounts::default,
        |acc, rng, _| acc.record(sample_summary(kind, rate, c, t, rng).class()),
        ClassCounts::merge,
    )
}

/// Histogram of interior endpoints on a `bins³` lattice over `[−ct, ct]³`.
///
/// `n_samples` counts every path, so the binned mass estimates the interior
/// probability.
pub fn interior_histogram_mc(
    kind: MotionKind,
    rate: &RateFunction,
    c: f64,
    t: f64,
    bins: usize,
    n: u64,
    seed: u64,
) -> Result<DensityGrid> {
    check_positive("c", c)?;
    check_positive("t", t)?;
    rate.validate()?;
    let ct = c * t;
    let geometry = BinGeometry::regular(&[-ct; 3], &[ct; 3], &[bins; 3])?;
    Ok(par_fold_paths(
        seed,
        n,
        || DensityGrid::zeros(geometry.clone()),
        |grid, rng, _| {
            let s = sample_summary(kind, rate, c, t, rng);
            if s.class() == SingularClass::Interior {
                grid.add(&s.endpoint);
            } else {
                grid.add_unbinned();
            }
        },
        DensityGrid::merge,
    ))
}
