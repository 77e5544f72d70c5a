use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolic::{Rational, ScalarField};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn symmetric(radius: f64) -> Self {
        Interval::new(-radius, radius)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// A coordinate chart: variable names, a closed domain box, per-variable
/// periods and an orientation form `m(x) dx^0 ∧ ... ∧ dx^{n-1}` represented
/// by its coefficient `m`.
#[derive(Clone, Debug)]
pub struct Chart {
    names: Vec<String>,
    domain: Vec<Interval>,
    periods: Vec<Option<f64>>,
    orientation: ScalarField,
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.domain == other.domain && self.periods == other.periods
    }
}

impl Chart {
    /// Chart with standard orientation and no periodic variables.
    pub fn new(names: &[&str], domain: Vec<Interval>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Invalid("a chart needs at least one variable".into()));
        }
        if domain.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: domain.len(),
            });
        }
        if let Some(bad) = domain.iter().find(|d| !(d.lo <= d.hi)) {
            return Err(Error::Invalid(format!(
                "empty interval [{}, {}]",
                bad.lo, bad.hi
            )));
        }
        Ok(Chart {
            names: names.iter().map(|s| s.to_string()).collect(),
            domain,
            periods: vec![None; n],
            orientation: ScalarField::one(n),
        })
    }

    /// `n`-dimensional chart with generic names `x0, ...` on `[-r, r]^n`.
    pub fn euclidean(n: usize, radius: f64) -> Result<Self> {
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Chart::new(&refs, vec![Interval::symmetric(radius); n])
    }

    /// Marks variable `index` periodic with the given period; its domain
    /// becomes `[0, period)`.
    pub fn with_period(mut self, index: usize, period: f64) -> Result<Self> {
        let n = self.dimension();
        if index >= n {
            return Err(Error::IndexOutOfRange {
                index,
                dimension: n,
            });
        }
        if !(period > 0.0) {
            return Err(Error::Invalid("period must be positive".into()));
        }
        self.periods[index] = Some(period);
        self.domain[index] = Interval::new(0.0, period);
        Ok(self)
    }

    /// Replaces the orientation coefficient. Exact constants are checked to
    /// be nonzero; other fields are accepted as given.
    pub fn with_orientation(mut self, coefficient: ScalarField) -> Result<Self> {
        if coefficient.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: coefficient.dimension(),
            });
        }
        if coefficient.is_exact_zero() {
            return Err(Error::Invalid("orientation form vanishes".into()));
        }
        self.orientation = coefficient;
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> Vec<&str> {
        self.names.iter().map(String::as_str).collect()
    }

    pub fn domain(&self) -> &[Interval] {
        &self.domain
    }

    pub fn periods(&self) -> &[Option<f64>] {
        &self.periods
    }

    pub fn orientation(&self) -> &ScalarField {
        &self.orientation
    }

    /// The orientation coefficient when it is an exact constant.
    pub fn orientation_constant(&self) -> Option<Rational> {
        self.orientation.as_exact().and_then(|p| p.as_constant())
    }

    /// Wraps periodic coordinates into `[0, period)`.
    pub fn normalize(&self, x: &mut [f64]) {
        for (xi, p) in x.iter_mut().zip(&self.periods) {
            if let Some(p) = p {
                *xi = xi.rem_euclid(*p);
                if *xi >= *p {
                    *xi = 0.0;
                }
            }
        }
    }

    /// Membership in the domain box (periodic variables always belong).
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension()
            && x.iter()
                .zip(&self.domain)
                .zip(&self.periods)
                .all(|((&v, d), p)| p.is_some() || d.contains(v))
    }
}
