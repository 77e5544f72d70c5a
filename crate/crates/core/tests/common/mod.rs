#![allow(dead_code)]

use std::sync::Arc;

use foliation_core::symbolic::{parse_polynomial, ratio};
use foliation_core::{
    Chart, DifferentialForm, MultivectorField, Polynomial, Rational, ScalarField,
};
use proptest::prelude::*;
use rand::Rng;

pub const DIM: usize = 4;

pub fn chart(radius: f64) -> Arc<Chart> {
    Arc::new(Chart::euclidean(DIM, radius).unwrap())
}

pub fn poly(text: &str, names: &[&str]) -> Polynomial {
    parse_polynomial(text, names.len(), names).unwrap()
}

pub fn field(text: &str, names: &[&str]) -> ScalarField {
    ScalarField::exact(poly(text, names))
}

fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    let mut num = 0;
    while num == 0 {
        num = rng.gen_range(-3..=3);
    }
    ratio(num, rng.gen_range(1..=3))
}

fn exponents<R: Rng>(rng: &mut R, dim: usize, max_degree: u32) -> Vec<u32> {
    let total = rng.gen_range(1..=max_degree);
    let mut e = vec![0u32; dim];
    for _ in 0..total {
        e[rng.gen_range(0..dim)] += 1;
    }
    e
}

/// Non-constant polynomial with up to four terms of degree at most
/// `max_degree` and small rational coefficients.
pub fn random_poly<R: Rng>(rng: &mut R, dim: usize, max_degree: u32) -> Polynomial {
    loop {
        let terms: Vec<(Vec<u32>, Rational)> = (0..rng.gen_range(1..=4))
            .map(|_| (exponents(rng, dim, max_degree), small_rational(rng)))
            .collect();
        let p = Polynomial::from_terms(dim, terms).unwrap();
        if p.total_degree().unwrap_or(0) > 0 {
            return p;
        }
    }
}

pub fn random_field<R: Rng>(rng: &mut R, dim: usize, max_degree: u32) -> ScalarField {
    ScalarField::exact(random_poly(rng, dim, max_degree))
}

/// Exact bivector with random coefficients in every slot; generically not
/// Poisson.
pub fn random_bivector<R: Rng>(
    rng: &mut R,
    chart: &Arc<Chart>,
    max_degree: u32,
) -> MultivectorField {
    let n = chart.dimension();
    let mut pi = MultivectorField::zero(chart.clone(), 2).unwrap();
    for i in 0..n {
        for j in i + 1..n {
            pi.add_component(&[i, j], random_field(rng, n, max_degree))
                .unwrap();
        }
    }
    pi
}

pub fn d(chart: &Arc<Chart>, f: &ScalarField) -> DifferentialForm {
    DifferentialForm::differential(chart.clone(), f).unwrap()
}

pub fn rel_close(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * b.abs().max(a.abs()).max(f64::MIN_POSITIVE)
}

pub fn poly_strategy(dim: usize, max_degree: u32) -> impl Strategy<Value = Polynomial> {
    let term = (
        prop::collection::vec(0..=max_degree, dim),
        -4i64..=4,
        1i64..=4,
    );
    prop::collection::vec(term, 0..5).prop_map(move |terms| {
        let terms = terms.into_iter().map(|(mut e, n, q)| {
            while e.iter().sum::<u32>() > max_degree {
                let i = e.iter().position(|&x| x > 0).unwrap();
                e[i] -= 1;
            }
            (e, ratio(n, q))
        });
        Polynomial::from_terms(dim, terms).unwrap()
    })
}

pub fn point_strategy(dim: usize, radius: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-radius..radius, dim)
}
