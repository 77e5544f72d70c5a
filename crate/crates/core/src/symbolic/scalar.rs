//! Dual-backend scalar fields.
//!
//! A [`ScalarField`] is either an exact [`Polynomial`] or a smooth numeric
//! evaluator that supplies its own value and gradient (and optionally its
//! Hessian). Arithmetic between two exact fields stays exact; as soon as a
//! smooth operand is involved the result is a smooth field whose derivatives
//! follow the sum and product rules.

use std::fmt;
use std::sync::{Arc, OnceLock};

use super::polynomial::{rational_from_f64, rational_to_f64};
use super::{Polynomial, Rational};
use crate::error::{Error, Result};

type ValueFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type GradFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;
/// Row-major `n x n` Hessian.
type HessFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// Polynomial together with cached floating-point data for fast numeric
/// evaluation.
#[derive(Debug)]
pub struct ExactField {
    poly: Polynomial,
    numeric: Vec<(f64, Vec<i32>)>,
    gradient: OnceLock<Vec<ExactField>>,
    hessian: OnceLock<Vec<ExactField>>,
}

impl ExactField {
    fn new(poly: Polynomial) -> Self {
        let numeric = poly
            .terms()
            .map(|(m, c)| {
                (
                    rational_to_f64(c),
                    m.exponents().iter().map(|&e| e as i32).collect(),
                )
            })
            .collect();
        ExactField {
            poly,
            numeric,
            gradient: OnceLock::new(),
            hessian: OnceLock::new(),
        }
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.numeric
            .iter()
            .map(|(c, exps)| {
                exps.iter().zip(x).fold(
                    *c,
                    |acc, (&e, &xi)| if e == 0 { acc } else { acc * xi.powi(e) },
                )
            })
            .sum()
    }

    /// Partial derivatives, computed once.
    pub fn gradient_fields(&self) -> &[ExactField] {
        self.gradient.get_or_init(|| {
            self.poly
                .gradient()
                .into_iter()
                .map(ExactField::new)
                .collect()
        })
    }

    fn hessian_fields(&self) -> &[ExactField] {
        self.hessian.get_or_init(|| {
            let n = self.poly.dimension();
            let mut out = Vec::with_capacity(n * n);
            for g in self.gradient_fields() {
                for j in 0..n {
                    out.push(ExactField::new(g.poly.diff(j).expect("index in range")));
                }
            }
            out
        })
    }
}

#[derive(Clone)]
pub struct SmoothField {
    dimension: usize,
    value: Arc<ValueFn>,
    gradient: Arc<GradFn>,
    hessian: Option<Arc<HessFn>>,
}

impl SmoothField {
    pub fn new<V, G>(dimension: usize, value: V, gradient: G) -> Self
    where
        V: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        SmoothField {
            dimension,
            value: Arc::new(value),
            gradient: Arc::new(gradient),
            hessian: None,
        }
    }

    pub fn with_hessian<H>(mut self, hessian: H) -> Self
    where
        H: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        self.hessian = Some(Arc::new(hessian));
        self
    }

    pub fn has_hessian(&self) -> bool {
        self.hessian.is_some()
    }
}

#[derive(Clone)]
pub enum ScalarField {
    Exact(Arc<ExactField>),
    Smooth(SmoothField),
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarField::Exact(e) => write!(f, "Exact({})", e.poly),
            ScalarField::Smooth(s) => write!(f, "Smooth(dim={})", s.dimension),
        }
    }
}

impl From<Polynomial> for ScalarField {
    fn from(p: Polynomial) -> Self {
        ScalarField::exact(p)
    }
}

impl From<SmoothField> for ScalarField {
    fn from(s: SmoothField) -> Self {
        ScalarField::Smooth(s)
    }
}

/// Step used for central differences on smooth fields without a Hessian.
const HESSIAN_FD_STEP: f64 = 1e-5;

impl ScalarField {
    pub fn exact(p: Polynomial) -> Self {
        ScalarField::Exact(Arc::new(ExactField::new(p)))
    }

    pub fn constant(dimension: usize, value: Rational) -> Self {
        ScalarField::exact(Polynomial::constant(dimension, value))
    }

    pub fn one(dimension: usize) -> Self {
        ScalarField::exact(Polynomial::one(dimension))
    }

    pub fn zero(dimension: usize) -> Self {
        ScalarField::exact(Polynomial::zero(dimension))
    }

    pub fn variable(dimension: usize, index: usize) -> Result<Self> {
        Ok(ScalarField::exact(Polynomial::variable(dimension, index)?))
    }

    /// Wraps an exact field as a smooth one using its own evaluators.
    /// Used to exercise the numeric code paths against exact ground truth.
    pub fn to_smooth(&self) -> ScalarField {
        match self {
            ScalarField::Smooth(_) => self.clone(),
            ScalarField::Exact(e) => {
                let (a, b, c) = (e.clone(), e.clone(), e.clone());
                let n = e.poly.dimension();
                ScalarField::Smooth(
                    SmoothField::new(
                        n,
                        move |x| a.eval(x),
                        move |x| b.gradient_fields().iter().map(|g| g.eval(x)).collect(),
                    )
                    .with_hessian(move |x| c.hessian_fields().iter().map(|h| h.eval(x)).collect()),
                )
            }
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            ScalarField::Exact(e) => e.poly.dimension(),
            ScalarField::Smooth(s) => s.dimension,
        }
    }

    pub fn as_exact(&self) -> Option<&Polynomial> {
        match self {
            ScalarField::Exact(e) => Some(&e.poly),
            ScalarField::Smooth(_) => None,
        }
    }

    pub fn require_exact(&self) -> Result<&Polynomial> {
        self.as_exact().ok_or(Error::NonExact)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ScalarField::Exact(_))
    }

    /// True only for the exact zero polynomial.
    pub fn is_exact_zero(&self) -> bool {
        self.as_exact().is_some_and(Polynomial::is_zero)
    }

    fn check_point(&self, len: usize) -> Result<()> {
        if len != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: len,
            });
        }
        Ok(())
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x.len())?;
        let v = match self {
            ScalarField::Exact(e) => e.eval(x),
            ScalarField::Smooth(s) => (s.value)(x),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn value_exact(&self, x: &[Rational]) -> Result<Rational> {
        self.require_exact()?.eval(x)
    }

    /// Gradient at a floating-point point: exact derivatives rounded for the
    /// exact backend, the supplied evaluator for the smooth backend.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x.len())?;
        let g = match self {
            ScalarField::Exact(e) => e.gradient_fields().iter().map(|g| g.eval(x)).collect(),
            ScalarField::Smooth(s) => (s.gradient)(x),
        };
        if g.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: g.len(),
            });
        }
        if g.iter().all(|v| v.is_finite()) {
            Ok(g)
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn gradient_exact(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        match self {
            ScalarField::Exact(e) => e.gradient_fields().iter().map(|g| g.poly.eval(x)).collect(),
            ScalarField::Smooth(_) => Err(Error::NonExact),
        }
    }

    /// Row-major Hessian. Smooth fields without a Hessian evaluator fall back
    /// to central differences of their gradient.
    pub fn hessian(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x.len())?;
        let n = self.dimension();
        let h = match self {
            ScalarField::Exact(e) => e.hessian_fields().iter().map(|h| h.eval(x)).collect(),
            ScalarField::Smooth(s) => match &s.hessian {
                Some(h) => h(x),
                None => {
                    let mut out = vec![0.0; n * n];
                    let mut xp = x.to_vec();
                    for j in 0..n {
                        let step = HESSIAN_FD_STEP * x[j].abs().max(1.0);
                        xp[j] = x[j] + step;
                        let gp = (s.gradient)(&xp);
                        xp[j] = x[j] - step;
                        let gm = (s.gradient)(&xp);
                        xp[j] = x[j];
                        for i in 0..n {
                            out[i * n + j] = (gp[i] - gm[i]) / (2.0 * step);
                        }
                    }
                    out
                }
            },
        };
        if h.iter().all(|v| v.is_finite()) {
            Ok(h)
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Exact partial derivative as a field (exact backend only).
    pub fn diff(&self, var: usize) -> Result<ScalarField> {
        let p = self.require_exact()?;
        Ok(ScalarField::exact(p.diff(var)?))
    }

    /// Partial derivative as a field. Exact fields differentiate exactly;
    /// smooth fields use gradient component `var` with the Hessian row as its
    /// gradient.
    pub fn partial(&self, var: usize) -> Result<ScalarField> {
        let n = self.dimension();
        if var >= n {
            return Err(Error::IndexOutOfRange {
                index: var,
                dimension: n,
            });
        }
        match self {
            ScalarField::Exact(e) => Ok(ScalarField::exact(e.poly.diff(var)?)),
            ScalarField::Smooth(_) => {
                let (f, g) = (self.clone(), self.clone());
                Ok(ScalarField::Smooth(SmoothField::new(
                    n,
                    move |x| f.gradient(x).map(|v| v[var]).unwrap_or(f64::NAN),
                    move |x| match g.hessian(x) {
                        Ok(h) => h[var * n..(var + 1) * n].to_vec(),
                        Err(_) => vec![f64::NAN; n],
                    },
                )))
            }
        }
    }

    fn check_dims(&self, other: &ScalarField) -> Result<()> {
        if self.dimension() != other.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: other.dimension(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &ScalarField) -> Result<ScalarField> {
        self.check_dims(other)?;
        if let (Some(a), Some(b)) = (self.as_exact(), other.as_exact()) {
            return Ok(ScalarField::exact(a + b));
        }
        Ok(linear_combination(self, 1.0, other, 1.0))
    }

    pub fn sub(&self, other: &ScalarField) -> Result<ScalarField> {
        self.check_dims(other)?;
        if let (Some(a), Some(b)) = (self.as_exact(), other.as_exact()) {
            return Ok(ScalarField::exact(a - b));
        }
        Ok(linear_combination(self, 1.0, other, -1.0))
    }

    pub fn mul(&self, other: &ScalarField) -> Result<ScalarField> {
        self.check_dims(other)?;
        if let (Some(a), Some(b)) = (self.as_exact(), other.as_exact()) {
            return Ok(ScalarField::exact(a * b));
        }
        Ok(product(self, other))
    }

    pub fn scale(&self, factor: &Rational) -> ScalarField {
        match self {
            ScalarField::Exact(e) => ScalarField::exact(e.poly.scale(factor)),
            ScalarField::Smooth(_) => linear_combination(
                self,
                rational_to_f64(factor),
                &ScalarField::zero(self.dimension()),
                0.0,
            ),
        }
    }

    pub fn neg(&self) -> ScalarField {
        self.scale(&Rational::from_integer((-1).into()))
    }

    /// Reciprocal as a smooth field (exact only for nonzero constants).
    pub fn recip(&self) -> Result<ScalarField> {
        if let Some(c) = self.as_exact().and_then(Polynomial::as_constant) {
            if c == Rational::from_integer(0.into()) {
                return Err(Error::Invalid("reciprocal of zero".into()));
            }
            return Ok(ScalarField::constant(self.dimension(), c.recip()));
        }
        let f = self.clone();
        let g = self.clone();
        let n = self.dimension();
        Ok(ScalarField::Smooth(SmoothField::new(
            n,
            move |x| 1.0 / f.value(x).unwrap_or(f64::NAN),
            move |x| {
                let v = g.value(x).unwrap_or(f64::NAN);
                let grad = g.gradient(x).unwrap_or_else(|_| vec![f64::NAN; n]);
                grad.iter().map(|d| -d / (v * v)).collect()
            },
        )))
    }

    /// `self ∘ (x -> A x + b)` as a smooth field, with `linear` the row-major
    /// matrix `A`. Allows irrational offsets such as a shift by pi.
    pub fn compose_affine_numeric(
        &self,
        linear: Vec<f64>,
        offset: Vec<f64>,
    ) -> Result<ScalarField> {
        let n = self.dimension();
        if linear.len() != n * n || offset.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: offset.len(),
            });
        }
        let apply = {
            let (a, b) = (linear.clone(), offset.clone());
            move |x: &[f64]| -> Vec<f64> {
                (0..n)
                    .map(|i| b[i] + (0..n).map(|j| a[i * n + j] * x[j]).sum::<f64>())
                    .collect()
            }
        };
        let apply = Arc::new(apply);
        let (f, g, h) = (self.clone(), self.clone(), self.clone());
        let (ap1, ap2, ap3) = (apply.clone(), apply.clone(), apply);
        let (a2, a3) = (linear.clone(), linear);
        Ok(ScalarField::Smooth(
            SmoothField::new(
                n,
                move |x| f.value(&ap1(x)).unwrap_or(f64::NAN),
                move |x| {
                    let gy = g.gradient(&ap2(x)).unwrap_or_else(|_| vec![f64::NAN; n]);
                    // chain rule: grad(f∘A)(x) = Aᵀ grad f(Ax+b)
                    (0..n)
                        .map(|j| (0..n).map(|i| a2[i * n + j] * gy[i]).sum())
                        .collect()
                },
            )
            .with_hessian(move |x| {
                let hy = h.hessian(&ap3(x)).unwrap_or_else(|_| vec![f64::NAN; n * n]);
                let mut out = vec![0.0; n * n];
                for r in 0..n {
                    for c in 0..n {
                        let mut s = 0.0;
                        for i in 0..n {
                            for j in 0..n {
                                s += a3[i * n + r] * hy[i * n + j] * a3[j * n + c];
                            }
                        }
                        out[r * n + c] = s;
                    }
                }
                out
            }),
        ))
    }
}

fn linear_combination(a: &ScalarField, ca: f64, b: &ScalarField, cb: f64) -> ScalarField {
    let n = a.dimension();
    let (a1, b1, a2, b2, a3, b3) = (
        a.clone(),
        b.clone(),
        a.clone(),
        b.clone(),
        a.clone(),
        b.clone(),
    );
    let hess = has_hessian(a) && has_hessian(b);
    let mut s = SmoothField::new(
        n,
        move |x| ca * a1.value(x).unwrap_or(f64::NAN) + cb * b1.value(x).unwrap_or(f64::NAN),
        move |x| {
            let ga = a2.gradient(x).unwrap_or_else(|_| vec![f64::NAN; n]);
            let gb = b2.gradient(x).unwrap_or_else(|_| vec![f64::NAN; n]);
            ga.iter().zip(&gb).map(|(p, q)| ca * p + cb * q).collect()
        },
    );
    if hess {
        s = s.with_hessian(move |x| {
            let ha = a3.hessian(x).unwrap_or_else(|_| vec![f64::NAN; n * n]);
            let hb = b3.hessian(x).unwrap_or_else(|_| vec![f64::NAN; n * n]);
            ha.iter().zip(&hb).map(|(p, q)| ca * p + cb * q).collect()
        });
    }
    ScalarField::Smooth(s)
}

fn product(a: &ScalarField, b: &ScalarField) -> ScalarField {
    let n = a.dimension();
    let (a1, b1, a2, b2, a3, b3) = (
        a.clone(),
        b.clone(),
        a.clone(),
        b.clone(),
        a.clone(),
        b.clone(),
    );
    let hess = has_hessian(a) && has_hessian(b);
    let mut s = SmoothField::new(
        n,
        move |x| a1.value(x).unwrap_or(f64::NAN) * b1.value(x).unwrap_or(f64::NAN),
        move |x| {
            let (va, vb) = (
                a2.value(x).unwrap_or(f64::NAN),
                b2.value(x).unwrap_or(f64::NAN),
            );
            let ga = a2.gradient(x).unwrap_or_else(|_| vec![f64::NAN; n]);
            let gb = b2.gradient(x).unwrap_or_else(|_| vec![f64::NAN; n]);
            ga.iter().zip(&gb).map(|(p, q)| p * vb + va * q).collect()
        },
    );
    if hess {
        s = s.with_hessian(move |x| {
            let (va, vb) = (
                a3.value(x).unwrap_or(f64::NAN),
                b3.value(x).unwrap_or(f64::NAN),
            );
            let ga = a3.gradient(x).unwrap_or_else(|_| vec![f64::NAN; n]);
            let gb = b3.gradient(x).unwrap_or_else(|_| vec![f64::NAN; n]);
            let ha = a3.hessian(x).unwrap_or_else(|_| vec![f64::NAN; n * n]);
            let hb = b3.hessian(x).unwrap_or_else(|_| vec![f64::NAN; n * n]);
            let mut out = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    out[i * n + j] =
                        ha[i * n + j] * vb + ga[i] * gb[j] + ga[j] * gb[i] + va * hb[i * n + j];
                }
            }
            out
        });
    }
    ScalarField::Smooth(s)
}

fn has_hessian(f: &ScalarField) -> bool {
    match f {
        ScalarField::Exact(_) => true,
        ScalarField::Smooth(s) => s.has_hessian(),
    }
}

/// Gradient of a field at a point (the `scalar_grad` operation).
pub fn scalar_grad(s: &ScalarField, x: &[f64]) -> Result<Vec<f64>> {
    s.gradient(x)
}

/// Exact gradient at a point given in floating point: the point is first
/// converted to the rational it represents.
pub fn scalar_grad_exact(s: &ScalarField, x: &[f64]) -> Result<Vec<Rational>> {
    let q = x
        .iter()
        .map(|&v| rational_from_f64(v))
        .collect::<Result<Vec<_>>>()?;
    s.gradient_exact(&q)
}
