//! Bivector-specific operations: pairing with covectors, the anchor map,
//! pointwise rank and the Schouten–Nijenhuis self-bracket.

use nalgebra::DMatrix;

use super::{DifferentialForm, MultivectorField};
use crate::error::{Error, Result};
use crate::linalg;
use crate::symbolic::{rational_from_f64, Polynomial, Rational, ScalarField};

fn require_bivector(pi: &MultivectorField) -> Result<()> {
    if pi.degree() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: pi.degree(),
        });
    }
    Ok(())
}

fn require_one_form(alpha: &DifferentialForm) -> Result<()> {
    if alpha.degree() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: alpha.degree(),
        });
    }
    Ok(())
}

fn same_chart(pi: &MultivectorField, alpha: &DifferentialForm) -> Result<()> {
    if **pi.chart() != **alpha.chart() {
        return Err(Error::ChartMismatch);
    }
    Ok(())
}

/// The full antisymmetric matrix `π^{ij}(x)`.
pub fn bivector_matrix(pi: &MultivectorField, x: &[f64]) -> Result<DMatrix<f64>> {
    require_bivector(pi)?;
    let n = pi.dimension();
    let mut m = DMatrix::zeros(n, n);
    for (key, c) in pi.coefficients() {
        let v = c.value(x)?;
        m[(key[0], key[1])] = v;
        m[(key[1], key[0])] = -v;
    }
    Ok(m)
}

/// `π^{ij}` evaluated exactly at a rational point.
pub fn bivector_matrix_exact(pi: &MultivectorField, x: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    require_bivector(pi)?;
    let n = pi.dimension();
    let zero = Rational::from_integer(0.into());
    let mut m = vec![vec![zero; n]; n];
    for (key, c) in pi.coefficients() {
        let v = c.value_exact(x)?;
        m[key[1]][key[0]] = -v.clone();
        m[key[0]][key[1]] = v;
    }
    Ok(m)
}

/// `π(α, β)(x) = Σ_{i<j} π^{ij}(x)(α_i β_j − α_j β_i)`.
pub fn pair_bivector(
    pi: &MultivectorField,
    alpha: &DifferentialForm,
    beta: &DifferentialForm,
    x: &[f64],
) -> Result<f64> {
    require_bivector(pi)?;
    require_one_form(alpha)?;
    require_one_form(beta)?;
    same_chart(pi, alpha)?;
    same_chart(pi, beta)?;
    let a = alpha.covector_at(x)?;
    let b = beta.covector_at(x)?;
    pair_covectors(pi, &a, &b, x)
}

/// Pairing with covectors given by their components at `x`.
pub fn pair_covectors(pi: &MultivectorField, a: &[f64], b: &[f64], x: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    for (key, c) in pi.coefficients() {
        let (i, j) = (key[0], key[1]);
        acc += c.value(x)? * (a[i] * b[j] - a[j] * b[i]);
    }
    Ok(acc)
}

/// Anchor map `B(α)`, with components `v^i = π(dx^i, α)` at `x`.
pub fn anchor(pi: &MultivectorField, alpha: &DifferentialForm, x: &[f64]) -> Result<Vec<f64>> {
    require_bivector(pi)?;
    require_one_form(alpha)?;
    same_chart(pi, alpha)?;
    let a = alpha.covector_at(x)?;
    anchor_covector(pi, &a, x)
}

/// Anchor map applied to covector components at `x`.
pub fn anchor_covector(pi: &MultivectorField, a: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    let n = pi.dimension();
    if a.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.len(),
        });
    }
    let m = bivector_matrix(pi, x)?;
    Ok((0..n)
        .map(|i| (0..n).map(|j| m[(i, j)] * a[j]).sum())
        .collect())
}

/// Anchor image of a 1-form as a vector field (exact when inputs are).
pub fn anchor_field(pi: &MultivectorField, alpha: &DifferentialForm) -> Result<Vec<ScalarField>> {
    require_bivector(pi)?;
    require_one_form(alpha)?;
    same_chart(pi, alpha)?;
    let n = pi.dimension();
    (0..n)
        .map(|i| {
            let mut acc = ScalarField::zero(n);
            for j in 0..n {
                if i == j {
                    continue;
                }
                let pij = pi.component(&[i, j]);
                let aj = alpha.component(&[j]);
                if pij.is_exact_zero() || aj.is_exact_zero() {
                    continue;
                }
                acc = acc.add(&pij.mul(&aj)?)?;
            }
            Ok(acc)
        })
        .collect()
}

/// Rank of `π` at `x`. Exact coefficients are evaluated at the rational
/// value of `x` and ranked exactly; otherwise a singular-value cutoff
/// applies and the result is rounded to an even number.
pub fn rank_at(pi: &MultivectorField, x: &[f64]) -> Result<usize> {
    if pi.is_exact() {
        let q = x
            .iter()
            .map(|&v| rational_from_f64(v))
            .collect::<Result<Vec<_>>>()?;
        return rank_at_exact(pi, &q);
    }
    Ok(linalg::antisymmetric_rank(&bivector_matrix(pi, x)?))
}

pub fn rank_at_exact(pi: &MultivectorField, x: &[Rational]) -> Result<usize> {
    Ok(linalg::exact_rank(&bivector_matrix_exact(pi, x)?))
}

/// Schouten–Nijenhuis self-bracket `[π, π]` of an exact bivector, with
/// coefficients
/// `[π,π]^{ijk} = 2 Σ_l (π^{il} ∂_l π^{jk} + π^{jl} ∂_l π^{ki} + π^{kl} ∂_l π^{ij})`.
/// With this normalisation `[π,π](df, dg, dh) = 2 Jac(f, g, h)`.
pub fn schouten_self_bracket(pi: &MultivectorField) -> Result<MultivectorField> {
    require_bivector(pi)?;
    let n = pi.dimension();
    let mut out = MultivectorField::zero(pi.chart().clone(), 3.min(n))?;
    if n < 3 {
        return Ok(out);
    }
    let comp = |a: usize, b: usize| -> Result<Polynomial> {
        Ok(pi.component(&[a, b]).require_exact()?.clone())
    };
    // matrix and first derivatives, computed once
    let mut p = vec![vec![Polynomial::zero(n); n]; n];
    let mut dp = vec![vec![Vec::new(); n]; n];
    for a in 0..n {
        for b in 0..n {
            p[a][b] = comp(a, b)?;
            dp[a][b] = p[a][b].gradient();
        }
    }
    let two = Rational::from_integer(2.into());
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut acc = Polynomial::zero(n);
                for l in 0..n {
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        if p[a][l].is_zero() || dp[b][c][l].is_zero() {
                            continue;
                        }
                        acc = &acc + &(&p[a][l] * &dp[b][c][l]);
                    }
                }
                if !acc.is_zero() {
                    out.add_component(&[i, j, k], ScalarField::exact(acc.scale(&two)))?;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::multivector::Chart;
    use crate::symbolic::parse_polynomial;

    fn chart(n: usize) -> Arc<Chart> {
        Arc::new(Chart::euclidean(n, 1.0).unwrap())
    }

    fn bivector(c: &Arc<Chart>, entries: &[(usize, usize, &str)]) -> MultivectorField {
        let n = c.dimension();
        let mut pi = MultivectorField::zero(c.clone(), 2).unwrap();
        for &(i, j, s) in entries {
            pi.add_component(
                &[i, j],
                ScalarField::exact(parse_polynomial(s, n, &[]).unwrap()),
            )
            .unwrap();
        }
        pi
    }

    #[test]
    fn pairing_is_antisymmetric() {
        let c = chart(4);
        let pi = MultivectorField::basis(c.clone(), &[0, 1]).unwrap();
        let dx1 = DifferentialForm::basis(c.clone(), &[0]).unwrap();
        let dx2 = DifferentialForm::basis(c.clone(), &[1]).unwrap();
        let x = [0.0; 4];
        assert_eq!(pair_bivector(&pi, &dx1, &dx2, &x).unwrap(), 1.0);
        assert_eq!(pair_bivector(&pi, &dx2, &dx1, &x).unwrap(), -1.0);
    }

    #[test]
    fn anchor_examples() {
        let c = chart(4);
        let pi = MultivectorField::basis(c.clone(), &[2, 3]).unwrap();
        let dy2 = DifferentialForm::basis(c.clone(), &[3]).unwrap();
        assert_eq!(
            anchor(&pi, &dy2, &[0.0; 4]).unwrap(),
            vec![0.0, 0.0, 1.0, 0.0]
        );
        let zero = DifferentialForm::zero(c.clone(), 1).unwrap();
        assert_eq!(anchor(&pi, &zero, &[0.3; 4]).unwrap(), vec![0.0; 4]);
        let other = DifferentialForm::basis(chart(3), &[0]).unwrap();
        assert_eq!(
            anchor(&pi, &other, &[0.0; 4]).unwrap_err(),
            Error::ChartMismatch
        );
    }

    #[test]
    fn schouten_of_constant_bivector_vanishes() {
        let c = chart(4);
        let pi = MultivectorField::basis(c, &[0, 1]).unwrap();
        assert!(schouten_self_bracket(&pi).unwrap().is_exact_zero());
    }

    #[test]
    fn schouten_three_dimensional_example() {
        // Jac(x1, x2, x3) = x2 by hand, so the coefficient is 2 x2
        let c = chart(3);
        let pi = bivector(&c, &[(0, 1, "x1"), (0, 2, "x0")]);
        let t = schouten_self_bracket(&pi).unwrap();
        let coeff = t.component(&[0, 1, 2]);
        assert_eq!(
            coeff.as_exact().unwrap(),
            &parse_polynomial("2*x1", 3, &[]).unwrap()
        );
    }

    #[test]
    fn schouten_requires_exact() {
        let c = chart(3);
        let pi = bivector(&c, &[(0, 1, "x1")]);
        let mut smooth = MultivectorField::zero(c, 2).unwrap();
        smooth
            .add_component(&[0, 1], pi.component(&[0, 1]).to_smooth())
            .unwrap();
        assert_eq!(schouten_self_bracket(&smooth).unwrap_err(), Error::NonExact);
    }

    #[test]
    fn rank_examples() {
        let c = chart(3);
        let pi = bivector(&c, &[(0, 1, "x2")]);
        assert_eq!(rank_at(&pi, &[0.5, 0.5, 0.0]).unwrap(), 0);
        assert_eq!(rank_at(&pi, &[0.5, 0.5, 1e-300]).unwrap(), 2);
        let mut smooth = MultivectorField::zero(c, 2).unwrap();
        smooth
            .add_component(&[0, 1], pi.component(&[0, 1]).to_smooth())
            .unwrap();
        assert_eq!(rank_at(&smooth, &[0.5, 0.5, 0.0]).unwrap(), 0);
        assert_eq!(rank_at(&smooth, &[0.5, 0.5, 0.25]).unwrap(), 2);
    }

    #[test]
    fn anchor_field_matches_pointwise_anchor() {
        let c = chart(3);
        let pi = bivector(&c, &[(0, 1, "x2"), (1, 2, "x0*x1 - 1")]);
        let f = ScalarField::exact(parse_polynomial("x0^2 + x1*x2", 3, &[]).unwrap());
        let df = DifferentialForm::differential(c, &f).unwrap();
        let v = anchor_field(&pi, &df).unwrap();
        let x = [0.25, -0.5, 0.75];
        let pointwise = anchor(&pi, &df, &x).unwrap();
        for (a, b) in v.iter().zip(pointwise) {
            assert!((a.value(&x).unwrap() - b).abs() < 1e-15);
        }
    }
}
