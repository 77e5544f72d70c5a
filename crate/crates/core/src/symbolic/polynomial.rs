//! Sparse multivariate polynomials with arbitrary-precision rational
//! coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic. Zero coefficients are never stored, so structural
//! equality of two polynomials coincides with equality as functions.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Exponent vector of a single monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(dimension: usize) -> Self {
        Monomial(vec![0; dimension])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn quotient(&self, divisor: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&divisor.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dimension: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(dimension: usize) -> Self {
        Polynomial {
            dimension,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dimension: usize, value: Rational) -> Self {
        let mut p = Polynomial::zero(dimension);
        if !value.is_zero() {
            p.terms.insert(Monomial::one(dimension), value);
        }
        p
    }

    pub fn from_integer(dimension: usize, value: i64) -> Self {
        Polynomial::constant(dimension, Rational::from_integer(value.into()))
    }

    pub fn one(dimension: usize) -> Self {
        Polynomial::from_integer(dimension, 1)
    }

    /// The coordinate function `x_index`.
    pub fn variable(dimension: usize, index: usize) -> Result<Self> {
        if index >= dimension {
            return Err(Error::IndexOutOfRange { index, dimension });
        }
        let mut exps = vec![0; dimension];
        exps[index] = 1;
        Ok(Polynomial::monomial(exps, Rational::one()))
    }

    pub fn monomial(exponents: Vec<u32>, coefficient: Rational) -> Self {
        let dimension = exponents.len();
        let mut p = Polynomial::zero(dimension);
        if !coefficient.is_zero() {
            p.terms.insert(Monomial(exponents), coefficient);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials and discarding zeros.
    pub fn from_terms<I>(dimension: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Polynomial::zero(dimension);
        for (exps, c) in terms {
            if exps.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: exps.len(),
                });
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::total_degree)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, factor: &Rational) -> Polynomial {
        if factor.is_zero() {
            return Polynomial::zero(self.dimension);
        }
        Polynomial {
            dimension: self.dimension,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    fn check_dim(&self, other: &Polynomial) -> Result<()> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: other.dimension,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        let mut out = Polynomial::zero(self.dimension);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exponent: u32) -> Polynomial {
        let mut result = Polynomial::one(self.dimension);
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact partial derivative with respect to variable `var`.
    pub fn diff(&self, var: usize) -> Result<Polynomial> {
        if var >= self.dimension {
            return Err(Error::IndexOutOfRange {
                index: var,
                dimension: self.dimension,
            });
        }
        let mut out = Polynomial::zero(self.dimension);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] = e - 1;
            out.add_term(Monomial(exps), c * Rational::from_integer(e.into()));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.dimension)
            .map(|i| self.diff(i).expect("index in range"))
            .collect()
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: x.len(),
            });
        }
        let mut powers: Vec<Vec<Rational>> = vec![vec![Rational::one()]; self.dimension];
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[v];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * &x[v];
                    cache.push(next);
                }
                term *= &cache[e as usize];
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Floating-point evaluation. Coefficients are rounded to `f64` first.
    pub fn eval_f64(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: x.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(x)
                    .fold(rational_to_f64(c), |acc, (&e, &xi)| acc * xi.powi(e as i32))
            })
            .sum())
    }

    /// Substitutes polynomial `images[i]` (all of one common dimension) for
    /// variable `i`.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: images.len(),
            });
        }
        let target = match images.first() {
            Some(p) => p.dimension,
            None => return Ok(self.clone()),
        };
        for p in images {
            if p.dimension != target {
                return Err(Error::DimensionMismatch {
                    expected: target,
                    found: p.dimension,
                });
            }
        }
        let mut powers: Vec<Vec<Polynomial>> = vec![vec![Polynomial::one(target)]; self.dimension];
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[v];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * &images[v];
                    cache.push(next);
                }
                term = &term * &cache[e as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Re-indexes variables into a larger ring: variable `i` becomes variable
    /// `mapping[i]` of a `dimension`-variable polynomial.
    pub fn embed(&self, dimension: usize, mapping: &[usize]) -> Result<Polynomial> {
        if mapping.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: mapping.len(),
            });
        }
        if let Some(&bad) = mapping.iter().find(|&&j| j >= dimension) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                dimension,
            });
        }
        let mut out = Polynomial::zero(dimension);
        for (m, c) in &self.terms {
            let mut exps = vec![0; dimension];
            for (i, &e) in m.0.iter().enumerate() {
                exps[mapping[i]] += e;
            }
            out.add_term(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// Exact quotient `self / divisor` when `divisor` divides `self`,
    /// `None` otherwise.
    pub fn div_exact(&self, divisor: &Polynomial) -> Result<Option<Polynomial>> {
        self.check_dim(divisor)?;
        let (lead_m, lead_c) = match divisor.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::Invalid("division by the zero polynomial".into())),
        };
        let mut remainder = self.clone();
        let mut quotient = Polynomial::zero(self.dimension);
        while let Some((m, c)) = remainder.leading_term() {
            if !lead_m.divides(m) {
                return Ok(None);
            }
            let q = Polynomial::monomial(m.quotient(&lead_m).0, c / &lead_c);
            remainder = &remainder - &(&q * divisor);
            quotient = &quotient + &q;
        }
        Ok(Some(quotient))
    }

    /// True when every exponent of every term is even.
    pub fn is_sum_of_even_monomials(&self) -> bool {
        self.terms.keys().all(|m| m.0.iter().all(|e| e % 2 == 0))
    }

    /// Certifies `p(x) != 0` for all real `x` when the polynomial is a
    /// nonzero constant plus even monomials whose coefficients share the
    /// constant's sign. Returns `false` when the shape does not apply; that
    /// is not a proof of vanishing.
    pub fn certified_nonvanishing(&self) -> bool {
        let constant = self.coefficient(&vec![0; self.dimension]);
        if constant.is_zero() || !self.is_sum_of_even_monomials() {
            return false;
        }
        let positive = constant.is_positive();
        self.terms.values().all(|c| c.is_positive() == positive)
    }

    /// Writes the polynomial with the given variable names (or `x0, x1, ...`
    /// when `names` is empty), highest graded-lex term first.
    pub fn to_text(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(format_rational(&abs));
            }
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = names
                    .get(v)
                    .map(|s| s.to_string())
                    .unwrap_or_else(|| format!("x{v}"));
                if e == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

/// `num/den` for non-integers, plain integer text otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite `f64`.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or(Error::NonFinite)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(&[]))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$try(rhs).expect("polynomial dimensions must agree")
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            dimension: self.dimension,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
