//! Seeded random streams, random points in a chart, and verification grids.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multivector::Chart;
use crate::symbolic::{rational_from_f64, rational_to_f64, Rational};

/// Independent stream `stream` of the generator seeded by `seed`.
///
/// ChaCha is counter based, so distinct streams never overlap and a suite
/// run in parallel draws the same numbers as when run alone.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform point in the chart's domain box.
pub fn random_point<R: Rng>(chart: &Chart, rng: &mut R) -> Vec<f64> {
    chart
        .domain()
        .iter()
        .map(|d| {
            if d.lo == d.hi {
                d.lo
            } else {
                rng.gen_range(d.lo..d.hi)
            }
        })
        .collect()
}

/// Uniform point in `[lo, hi]^n` given per axis.
pub fn random_point_in<R: Rng>(bounds: &[(f64, f64)], rng: &mut R) -> Vec<f64> {
    bounds
        .iter()
        .map(|&(lo, hi)| if lo == hi { lo } else { rng.gen_range(lo..hi) })
        .collect()
}

/// One axis of a tensor-product grid. Periodic axes exclude the upper
/// endpoint (`nodes` points spaced `(hi - lo) / nodes`); other axes include
/// both endpoints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub lo: f64,
    pub hi: f64,
    pub nodes: usize,
    #[serde(default)]
    pub periodic: bool,
}

impl GridAxis {
    pub fn closed(lo: f64, hi: f64, nodes: usize) -> Self {
        GridAxis {
            lo,
            hi,
            nodes,
            periodic: false,
        }
    }

    pub fn periodic(lo: f64, hi: f64, nodes: usize) -> Self {
        GridAxis {
            lo,
            hi,
            nodes,
            periodic: true,
        }
    }

    /// Exact node values: `lo + (hi - lo) i / d` with the bounds read as the
    /// rationals their `f64` values represent.
    pub fn exact_nodes(&self) -> Result<Vec<Rational>> {
        let lo = rational_from_f64(self.lo)?;
        let hi = rational_from_f64(self.hi)?;
        if self.nodes == 0 {
            return Ok(Vec::new());
        }
        if self.nodes == 1 {
            return Ok(vec![lo]);
        }
        let divisions = if self.periodic {
            self.nodes
        } else {
            self.nodes - 1
        };
        let step = (&hi - &lo) / Rational::from_integer(divisions.into());
        Ok((0..self.nodes)
            .map(|i| &lo + &step * Rational::from_integer(i.into()))
            .collect())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axes: Vec<GridAxis>,
}

/// A grid node in exact and floating-point form.
#[derive(Clone, Debug)]
pub struct GridNode {
    pub exact: Vec<Rational>,
    pub point: Vec<f64>,
}

impl GridSpec {
    pub fn new(axes: Vec<GridAxis>) -> Self {
        GridSpec { axes }
    }

    pub fn len(&self) -> usize {
        if self.axes.is_empty() {
            0
        } else {
            self.axes.iter().map(|a| a.nodes).product()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks the grid against the chart: one axis per variable and bounds
    /// inside the domain box (periodic variables are unrestricted).
    pub fn validate(&self, chart: &Chart) -> Result<()> {
        if self.axes.is_empty() {
            return Ok(());
        }
        if self.axes.len() != chart.dimension() {
            return Err(Error::DimensionMismatch {
                expected: chart.dimension(),
                found: self.axes.len(),
            });
        }
        for ((axis, dom), period) in self.axes.iter().zip(chart.domain()).zip(chart.periods()) {
            if !(axis.lo <= axis.hi) {
                return Err(Error::Invalid(format!(
                    "grid axis [{}, {}] is empty",
                    axis.lo, axis.hi
                )));
            }
            if period.is_none() && (axis.lo < dom.lo || axis.hi > dom.hi) {
                return Err(Error::Invalid(format!(
                    "grid axis [{}, {}] leaves the domain [{}, {}]",
                    axis.lo, axis.hi, dom.lo, dom.hi
                )));
            }
        }
        Ok(())
    }

    /// All nodes in lexicographic order (first axis slowest).
    pub fn nodes(&self) -> Result<Vec<GridNode>> {
        if self.is_empty() {
            return Ok(Vec::new());
        }
        let per_axis: Vec<Vec<Rational>> = self
            .axes
            .iter()
            .map(GridAxis::exact_nodes)
            .collect::<Result<_>>()?;
        let per_axis_f64: Vec<Vec<f64>> = per_axis
            .iter()
            .map(|v| v.iter().map(rational_to_f64).collect())
            .collect();
        let total = self.len();
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; self.axes.len()];
        for _ in 0..total {
            out.push(GridNode {
                exact: idx
                    .iter()
                    .enumerate()
                    .map(|(a, &i)| per_axis[a][i].clone())
                    .collect(),
                point: idx
                    .iter()
                    .enumerate()
                    .map(|(a, &i)| per_axis_f64[a][i])
                    .collect(),
            });
            for a in (0..idx.len()).rev() {
                idx[a] += 1;
                if idx[a] < self.axes[a].nodes {
                    break;
                }
                idx[a] = 0;
            }
        }
        Ok(out)
    }
}
