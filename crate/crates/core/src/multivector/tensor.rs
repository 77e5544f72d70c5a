//! Antisymmetric tensor fields of either variance.
//!
//! Coefficients are keyed by strictly increasing index tuples; a missing key
//! is a zero coefficient. The full antisymmetric tensor is recovered from the
//! stored component by the sign of the sorting permutation, see
//! [`AltTensor::component`].

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::sync::Arc;

use super::Chart;
use crate::error::{Error, Result};
use crate::symbolic::{Polynomial, Rational, ScalarField};

pub trait Variance: Clone + Send + Sync + 'static {
    const NAME: &'static str;
}

#[derive(Clone, Copy, Debug)]
pub struct Contravariant;

#[derive(Clone, Copy, Debug)]
pub struct Covariant;

impl Variance for Contravariant {
    const NAME: &'static str = "multivector";
}

impl Variance for Covariant {
    const NAME: &'static str = "form";
}

#[derive(Clone)]
pub struct AltTensor<V: Variance> {
    chart: Arc<Chart>,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, ScalarField>,
    _variance: PhantomData<V>,
}

pub type MultivectorField = AltTensor<Contravariant>;
pub type DifferentialForm = AltTensor<Covariant>;

/// Levi-Civita symbol of an index sequence: the sign of the permutation that
/// sorts it, or 0 when an index repeats.
pub fn levi_civita(indices: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..indices.len() {
        for j in i + 1..indices.len() {
            match indices[i].cmp(&indices[j]) {
                std::cmp::Ordering::Equal => return 0,
                std::cmp::Ordering::Greater => sign = -sign,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    sign
}

impl<V: Variance> fmt::Debug for AltTensor<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct(V::NAME)
            .field("degree", &self.degree)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl<V: Variance> AltTensor<V> {
    pub fn zero(chart: Arc<Chart>, degree: usize) -> Result<Self> {
        let n = chart.dimension();
        if degree > n {
            return Err(Error::DegreeOverflow { p: degree, q: 0, n });
        }
        Ok(AltTensor {
            chart,
            degree,
            coeffs: BTreeMap::new(),
            _variance: PhantomData,
        })
    }

    /// Degree-0 tensor holding a single scalar.
    pub fn scalar(chart: Arc<Chart>, value: ScalarField) -> Result<Self> {
        let mut t = Self::zero(chart, 0)?;
        t.add_component(&[], value)?;
        Ok(t)
    }

    /// The basis element `e_{i1} ∧ ... ∧ e_{ip}` (indices in any order).
    pub fn basis(chart: Arc<Chart>, indices: &[usize]) -> Result<Self> {
        let n = chart.dimension();
        let mut t = Self::zero(chart, indices.len())?;
        t.add_component(indices, ScalarField::one(n))?;
        Ok(t)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn dimension(&self) -> usize {
        self.chart.dimension()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Stored coefficients keyed by strictly increasing index tuples.
    pub fn coefficients(&self) -> &BTreeMap<Vec<usize>, ScalarField> {
        &self.coeffs
    }

    /// Adds `value` times the basis element with the given indices
    /// (any order; the sorting sign is applied).
    pub fn add_component(&mut self, indices: &[usize], value: ScalarField) -> Result<()> {
        let n = self.dimension();
        if indices.len() != self.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                found: indices.len(),
            });
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                dimension: n,
            });
        }
        if value.dimension() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: value.dimension(),
            });
        }
        let sign = levi_civita(indices);
        if sign == 0 || value.is_exact_zero() {
            return Ok(());
        }
        let mut key = indices.to_vec();
        key.sort_unstable();
        let value = if sign < 0 { value.neg() } else { value };
        let updated = match self.coeffs.remove(&key) {
            Some(prev) => prev.add(&value)?,
            None => value,
        };
        if !updated.is_exact_zero() {
            self.coeffs.insert(key, updated);
        }
        Ok(())
    }

    /// Full antisymmetric component `T^{i1...ip}` for indices in any order.
    pub fn component(&self, indices: &[usize]) -> ScalarField {
        let n = self.dimension();
        let sign = levi_civita(indices);
        if sign == 0 || indices.len() != self.degree {
            return ScalarField::zero(n);
        }
        let mut key = indices.to_vec();
        key.sort_unstable();
        match self.coeffs.get(&key) {
            Some(c) if sign > 0 => c.clone(),
            Some(c) => c.neg(),
            None => ScalarField::zero(n),
        }
    }

    /// Numeric component value at `x` for indices in any order.
    pub fn component_at(&self, indices: &[usize], x: &[f64]) -> Result<f64> {
        let sign = levi_civita(indices);
        if sign == 0 {
            return Ok(0.0);
        }
        let mut key = indices.to_vec();
        key.sort_unstable();
        match self.coeffs.get(&key) {
            Some(c) => Ok(f64::from(sign) * c.value(x)?),
            None => Ok(0.0),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.values().all(ScalarField::is_exact)
    }

    /// True when every coefficient is exact and the tensor has no terms.
    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exact coefficient polynomials (missing keys omitted).
    pub fn exact_coefficients(&self) -> Result<BTreeMap<Vec<usize>, Polynomial>> {
        self.coeffs
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.require_exact()?.clone())))
            .collect()
    }

    fn check_same_chart<W: Variance>(&self, other: &AltTensor<W>) -> Result<()> {
        if !Arc::ptr_eq(&self.chart, &other.chart) && *self.chart != *other.chart {
            return Err(Error::ChartMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_chart(other)?;
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_component(k, v.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&Rational::from_integer((-1).into())))
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let mut out = AltTensor {
            chart: self.chart.clone(),
            degree: self.degree,
            coeffs: BTreeMap::new(),
            _variance: PhantomData,
        };
        for (k, v) in &self.coeffs {
            out.add_component(k, v.scale(factor)).expect("same shape");
        }
        out
    }

    /// Pointwise product with a scalar field.
    pub fn scale_field(&self, factor: &ScalarField) -> Result<Self> {
        let mut out = Self::zero(self.chart.clone(), self.degree)?;
        for (k, v) in &self.coeffs {
            out.add_component(k, v.mul(factor)?)?;
        }
        Ok(out)
    }

    /// Graded-antisymmetric product; `wedge(a, b) = (-1)^{pq} wedge(b, a)`.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_same_chart(other)?;
        let n = self.dimension();
        let degree = self.degree + other.degree;
        if degree > n {
            return Err(Error::DegreeOverflow {
                p: self.degree,
                q: other.degree,
                n,
            });
        }
        let mut out = Self::zero(self.chart.clone(), degree)?;
        for (ka, va) in &self.coeffs {
            for (kb, vb) in &other.coeffs {
                if ka.iter().any(|i| kb.contains(i)) {
                    continue;
                }
                let joined: Vec<usize> = ka.iter().chain(kb).copied().collect();
                out.add_component(&joined, va.mul(vb)?)?;
            }
        }
        Ok(out)
    }

    /// Coefficients evaluated at `x`.
    pub fn eval_at(&self, x: &[f64]) -> Result<BTreeMap<Vec<usize>, f64>> {
        self.coeffs
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.value(x)?)))
            .collect()
    }

    /// Coefficients evaluated exactly at a rational point.
    pub fn eval_exact(&self, x: &[Rational]) -> Result<BTreeMap<Vec<usize>, Rational>> {
        self.coeffs
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.value_exact(x)?)))
            .collect()
    }

    /// Coefficient text keyed by index tuples, using the chart's names.
    pub fn to_text_map(&self) -> Result<BTreeMap<String, String>> {
        let chart_names = self.chart.names();
        self.coeffs
            .iter()
            .map(|(k, v)| {
                let key = k
                    .iter()
                    .map(|&i| chart_names[i])
                    .collect::<Vec<_>>()
                    .join(",");
                Ok((key, v.require_exact()?.to_text(&chart_names)))
            })
            .collect()
    }
}

impl DifferentialForm {
    /// The exterior derivative `df` of a scalar field.
    pub fn differential(chart: Arc<Chart>, f: &ScalarField) -> Result<Self> {
        let n = chart.dimension();
        if f.dimension() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: f.dimension(),
            });
        }
        let mut out = Self::zero(chart, 1)?;
        for i in 0..n {
            out.add_component(&[i], f.partial(i)?)?;
        }
        Ok(out)
    }

    /// Constant-coefficient 1-form.
    pub fn covector(chart: Arc<Chart>, components: &[f64]) -> Result<Self> {
        let n = chart.dimension();
        if components.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: components.len(),
            });
        }
        let mut out = Self::zero(chart, 1)?;
        for (i, &c) in components.iter().enumerate() {
            if c != 0.0 {
                let q = crate::symbolic::rational_from_f64(c)?;
                out.add_component(&[i], ScalarField::constant(n, q))?;
            }
        }
        Ok(out)
    }

    /// Exact exterior derivative.
    pub fn exterior_derivative(&self) -> Result<Self> {
        let n = self.dimension();
        if self.degree + 1 > n {
            return Self::zero(self.chart.clone(), self.degree);
        }
        let mut out = Self::zero(self.chart.clone(), self.degree + 1)?;
        for (k, v) in &self.coeffs {
            let p = v.require_exact()?;
            for j in 0..n {
                if k.contains(&j) {
                    continue;
                }
                let d = p.diff(j)?;
                if d.is_zero() {
                    continue;
                }
                let mut idx = vec![j];
                idx.extend_from_slice(k);
                out.add_component(&idx, ScalarField::exact(d))?;
            }
        }
        Ok(out)
    }

    /// Numeric components of a 1-form at `x`.
    pub fn covector_at(&self, x: &[f64]) -> Result<Vec<f64>> {
        if self.degree != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: self.degree,
            });
        }
        let mut out = vec![0.0; self.dimension()];
        for (k, v) in &self.coeffs {
            out[k[0]] = v.value(x)?;
        }
        Ok(out)
    }
}

impl MultivectorField {
    /// Contracts a degree-`p` multivector with `p` one-forms:
    /// `T(α_1, ..., α_p) = Σ_I T^I det[α_a(∂_{I_b})]`. Exact when all inputs
    /// are exact.
    pub fn contract(&self, forms: &[&DifferentialForm]) -> Result<ScalarField> {
        let n = self.dimension();
        if forms.len() != self.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                found: forms.len(),
            });
        }
        for f in forms {
            self.check_same_chart(*f)?;
            if f.degree != 1 {
                return Err(Error::DimensionMismatch {
                    expected: 1,
                    found: f.degree,
                });
            }
        }
        let components: Vec<Vec<ScalarField>> = forms
            .iter()
            .map(|f| (0..n).map(|i| f.component(&[i])).collect())
            .collect();
        let perms = permutations(self.degree);
        let mut acc = ScalarField::zero(n);
        for (key, coeff) in &self.coeffs {
            let mut det = ScalarField::zero(n);
            for perm in &perms {
                let mut term = ScalarField::one(n);
                for (a, &b) in perm.iter().enumerate() {
                    term = term.mul(&components[a][key[b]])?;
                }
                det = if levi_civita(perm) > 0 {
                    det.add(&term)?
                } else {
                    det.sub(&term)?
                };
            }
            acc = acc.add(&coeff.mul(&det)?)?;
        }
        Ok(acc)
    }

    /// Vector field components from a list of scalar fields.
    pub fn vector(chart: Arc<Chart>, components: Vec<ScalarField>) -> Result<Self> {
        let mut out = Self::zero(chart, 1)?;
        for (i, c) in components.into_iter().enumerate() {
            out.add_component(&[i], c)?;
        }
        Ok(out)
    }
}

/// All permutations of `0..p` (p is at most the chart dimension).
pub(crate) fn permutations(p: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; p], &mut out);
    out
}
