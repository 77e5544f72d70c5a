//! Poisson structures built from Casimir data, their brackets, Hamiltonian
//! vector fields, and conformal rescaling.
//!
//! The construction defines `{g, h} μ = k dg ∧ dh ∧ dF_1 ∧ ... ∧ dF_{n-2}`
//! for a chart orientation `μ = m dx^0 ∧ ... ∧ dx^{n-1}`, which in
//! coordinates reads
//! `π^{ij} = (k / m) Σ ε^{i j l_1 ... l_{n-2}} ∂_{l_1}F_1 ⋯ ∂_{l_{n-2}}F_{n-2}`.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::multivector::{
    anchor_field, levi_civita, permutations, schouten_self_bracket, Chart, DifferentialForm,
    MultivectorField,
};
use crate::sampling::{random_point, GridAxis, GridSpec};
use crate::symbolic::{Polynomial, Rational, ScalarField};

/// Relative tolerance for sampled (smooth-backend) Jacobi and Casimir checks.
pub const SMOOTH_JACOBI_RTOL: f64 = 1e-9;

/// Nodes per axis used when sampling a conformal factor for zeros.
pub const NONVANISHING_GRID_NODES: usize = 21;

#[derive(Clone, Debug)]
pub struct PoissonStructure {
    chart: Arc<Chart>,
    bivector: MultivectorField,
    casimirs: Vec<ScalarField>,
    conformal_factor: ScalarField,
    model_tag: String,
}

impl PoissonStructure {
    /// Wraps a bivector as a Poisson structure. Exact bivectors must satisfy
    /// `[π, π] = 0` exactly; smooth ones are accepted as given (see
    /// [`verify_jacobi`]).
    pub fn new(
        bivector: MultivectorField,
        casimirs: Vec<ScalarField>,
        conformal_factor: ScalarField,
        model_tag: impl Into<String>,
    ) -> Result<Self> {
        if bivector.degree() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: bivector.degree(),
            });
        }
        let n = bivector.dimension();
        for f in casimirs.iter().chain(std::iter::once(&conformal_factor)) {
            if f.dimension() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: f.dimension(),
                });
            }
        }
        if bivector.is_exact() && !schouten_self_bracket(&bivector)?.is_exact_zero() {
            return Err(Error::Invalid(
                "bivector does not satisfy the Jacobi identity".into(),
            ));
        }
        Ok(PoissonStructure {
            chart: bivector.chart().clone(),
            bivector,
            casimirs,
            conformal_factor,
            model_tag: model_tag.into(),
        })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn bivector(&self) -> &MultivectorField {
        &self.bivector
    }

    pub fn casimirs(&self) -> &[ScalarField] {
        &self.casimirs
    }

    pub fn conformal_factor(&self) -> &ScalarField {
        &self.conformal_factor
    }

    pub fn model_tag(&self) -> &str {
        &self.model_tag
    }

    pub fn dimension(&self) -> usize {
        self.chart.dimension()
    }
}

/// How a conformal factor was shown not to vanish.
#[derive(Clone, Debug, PartialEq)]
pub enum NonVanishing {
    /// Nonzero constant plus even monomials of the same sign.
    Certified,
    /// No zero or sign change found on a dense grid over the domain box.
    Sampled { nodes: usize, min_abs: f64 },
}

/// Checks that `k` has no zero on the chart's domain box.
pub fn check_nonvanishing(k: &ScalarField, chart: &Chart) -> Result<NonVanishing> {
    if k.dimension() != chart.dimension() {
        return Err(Error::DimensionMismatch {
            expected: chart.dimension(),
            found: k.dimension(),
        });
    }
    if let Some(p) = k.as_exact() {
        if p.certified_nonvanishing() {
            return Ok(NonVanishing::Certified);
        }
        if p.is_zero() {
            return Err(Error::VanishingFactor {
                witness: vec![0.0; chart.dimension()],
            });
        }
    }
    let axes = chart
        .domain()
        .iter()
        .zip(chart.periods())
        .map(|(d, p)| match p {
            Some(_) => GridAxis::periodic(d.lo, d.hi, NONVANISHING_GRID_NODES),
            None => GridAxis::closed(d.lo, d.hi, NONVANISHING_GRID_NODES),
        })
        .collect();
    let grid = GridSpec::new(axes);
    let mut sign = 0.0f64;
    let mut min_abs = f64::INFINITY;
    let nodes = grid.nodes()?;
    for node in &nodes {
        let v = k.value(&node.point)?;
        let s = v.signum();
        if v == 0.0 || (sign != 0.0 && s != sign) {
            return Err(Error::VanishingFactor {
                witness: node.point.clone(),
            });
        }
        sign = s;
        min_abs = min_abs.min(v.abs());
    }
    Ok(NonVanishing::Sampled {
        nodes: nodes.len(),
        min_abs,
    })
}

/// Rank-2 Poisson structure with prescribed Casimirs `F` and conformal
/// factor `k` on an `n`-dimensional chart (`n ≥ 3`, `F` has `n − 2` entries).
pub fn build_flaschka_ratiu(
    chart: Arc<Chart>,
    casimirs: Vec<ScalarField>,
    k: ScalarField,
) -> Result<PoissonStructure> {
    let n = chart.dimension();
    if n < 3 {
        return Err(Error::ChartTooSmall(n));
    }
    if casimirs.len() != n - 2 {
        return Err(Error::CasimirCount {
            expected: n - 2,
            found: casimirs.len(),
        });
    }
    for f in casimirs.iter().chain(std::iter::once(&k)) {
        if f.dimension() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: f.dimension(),
            });
        }
    }
    check_nonvanishing(&k, &chart)?;

    let grads: Vec<Vec<ScalarField>> = casimirs
        .iter()
        .map(|f| (0..n).map(|i| f.partial(i)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let orientation = chart.orientation().clone();
    let prefactor = match chart.orientation_constant() {
        Some(m) => k.scale(&m.recip()),
        None => k.mul(&orientation.recip()?)?,
    };

    let perms = permutations(n - 2);
    let mut pi = MultivectorField::zero(chart.clone(), 2)?;
    for i in 0..n {
        for j in i + 1..n {
            let rest: Vec<usize> = (0..n).filter(|&l| l != i && l != j).collect();
            let mut acc = ScalarField::zero(n);
            for perm in &perms {
                let mut idx = vec![i, j];
                idx.extend(perm.iter().map(|&p| rest[p]));
                let sign = levi_civita(&idx);
                let mut term = ScalarField::one(n);
                for (a, &p) in perm.iter().enumerate() {
                    term = term.mul(&grads[a][rest[p]])?;
                }
                acc = if sign > 0 {
                    acc.add(&term)?
                } else {
                    acc.sub(&term)?
                };
            }
            if acc.is_exact_zero() {
                continue;
            }
            pi.add_component(&[i, j], acc.mul(&prefactor)?)?;
        }
    }
    PoissonStructure::new(pi, casimirs, k, "flaschka-ratiu")
}

fn check_field(chart: &Chart, f: &ScalarField) -> Result<()> {
    if f.dimension() != chart.dimension() {
        return Err(Error::DimensionMismatch {
            expected: chart.dimension(),
            found: f.dimension(),
        });
    }
    Ok(())
}

/// `{g, h} = π(dg, dh)` for an arbitrary bivector.
pub fn bracket_with(
    pi: &MultivectorField,
    g: &ScalarField,
    h: &ScalarField,
) -> Result<ScalarField> {
    let chart = pi.chart();
    check_field(chart, g)?;
    check_field(chart, h)?;
    let n = chart.dimension();
    let dg: Vec<ScalarField> = (0..n).map(|i| g.partial(i)).collect::<Result<_>>()?;
    let dh: Vec<ScalarField> = (0..n).map(|i| h.partial(i)).collect::<Result<_>>()?;
    let mut acc = ScalarField::zero(n);
    for (key, c) in pi.coefficients() {
        let (i, j) = (key[0], key[1]);
        let a = dg[i].mul(&dh[j])?;
        let b = dg[j].mul(&dh[i])?;
        let wedge = a.sub(&b)?;
        if wedge.is_exact_zero() {
            continue;
        }
        acc = acc.add(&c.mul(&wedge)?)?;
    }
    Ok(acc)
}

pub fn bracket(p: &PoissonStructure, g: &ScalarField, h: &ScalarField) -> Result<ScalarField> {
    bracket_with(&p.bivector, g, h)
}

/// `X_h` with components `X_h^i = π(dx^i, dh)`.
pub fn hamiltonian_vector_field(p: &PoissonStructure, h: &ScalarField) -> Result<Vec<ScalarField>> {
    check_field(&p.chart, h)?;
    let dh = DifferentialForm::differential(p.chart.clone(), h)?;
    anchor_field(&p.bivector, &dh)
}

/// `{f,{g,h}} + {g,{h,f}} + {h,{f,g}}` computed by nested brackets.
pub fn jacobiator(
    pi: &MultivectorField,
    f: &ScalarField,
    g: &ScalarField,
    h: &ScalarField,
) -> Result<ScalarField> {
    let a = bracket_with(pi, f, &bracket_with(pi, g, h)?)?;
    let b = bracket_with(pi, g, &bracket_with(pi, h, f)?)?;
    let c = bracket_with(pi, h, &bracket_with(pi, f, g)?)?;
    a.add(&b)?.add(&c)
}

/// Numerically evaluated Jacobiator; the second-derivative terms of `f, g, h`
/// are carried through and cancel only up to rounding.
pub fn jacobiator_numeric(
    pi: &MultivectorField,
    f: &ScalarField,
    g: &ScalarField,
    h: &ScalarField,
    x: &[f64],
) -> Result<f64> {
    jacobiator(pi, f, g, h)?.value(x)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Exact(bool),
    /// Largest residual found on the sample and whether it met the
    /// tolerance.
    Sampled {
        max_residual: f64,
        pass: bool,
    },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        match self {
            Verdict::Exact(b) => *b,
            Verdict::Sampled { pass, .. } => *pass,
        }
    }
}

/// Jacobi identity: exact `[π, π] = 0` for exact bivectors; otherwise
/// `|Jac(x^i, x^j, x^k)| ≤ 1e-9 × local scale` at `samples` random points.
pub fn verify_jacobi<R: Rng>(
    pi: &MultivectorField,
    samples: usize,
    rng: &mut R,
) -> Result<Verdict> {
    if pi.is_exact() {
        return Ok(Verdict::Exact(schouten_self_bracket(pi)?.is_exact_zero()));
    }
    let chart = pi.chart();
    let n = chart.dimension();
    let coeff_grad =
        |a: usize, b: usize, x: &[f64]| -> Result<Vec<f64>> { pi.component(&[a, b]).gradient(x) };
    let mut worst = 0.0f64;
    let mut pass = true;
    for _ in 0..samples {
        let x = random_point(chart, rng);
        let m = crate::multivector::bivector_matrix(pi, &x)?;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut value = 0.0;
                    let mut scale = 0.0;
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let grad = coeff_grad(b, c, &x)?;
                        for l in 0..n {
                            let t = m[(a, l)] * grad[l];
                            value += t;
                            scale += t.abs();
                        }
                    }
                    let residual = value.abs() / scale.max(f64::MIN_POSITIVE);
                    if value.abs() > SMOOTH_JACOBI_RTOL * scale {
                        pass = false;
                    }
                    if value != 0.0 {
                        worst = worst.max(residual);
                    }
                }
            }
        }
    }
    Ok(Verdict::Sampled {
        max_residual: worst,
        pass,
    })
}

/// Whether `f` Poisson-commutes with everything: exactly for exact inputs,
/// by the largest anchor component over `samples` for smooth ones.
pub fn is_casimir(p: &PoissonStructure, f: &ScalarField, samples: &[Vec<f64>]) -> Result<Verdict> {
    check_field(&p.chart, f)?;
    let df = DifferentialForm::differential(p.chart.clone(), f)?;
    let field = anchor_field(&p.bivector, &df)?;
    if field.iter().all(ScalarField::is_exact) {
        return Ok(Verdict::Exact(field.iter().all(ScalarField::is_exact_zero)));
    }
    let mut worst = 0.0f64;
    for x in samples {
        for c in &field {
            worst = worst.max(c.value(x)?.abs());
        }
    }
    Ok(Verdict::Sampled {
        max_residual: worst,
        pass: worst <= SMOOTH_JACOBI_RTOL,
    })
}

/// `c π` for a non-vanishing `c`. Casimirs are kept; Jacobi is re-checked
/// exactly when the result is exact.
pub fn conformal_rescale(p: &PoissonStructure, c: &ScalarField) -> Result<PoissonStructure> {
    check_field(&p.chart, c)?;
    check_nonvanishing(c, &p.chart)?;
    let bivector = p.bivector.scale_field(c)?;
    let k = p.conformal_factor.mul(c)?;
    PoissonStructure::new(bivector, p.casimirs.clone(), k, p.model_tag.clone())
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConformalVerdict {
    ProportionalByConstant(Rational),
    ProportionalByField(Polynomial),
    NotProportional,
}

/// Decides whether `a = c b` coefficient-wise for a nonzero rational or a
/// non-vanishing polynomial `c`. Smooth coefficients are never declared
/// proportional.
pub fn compare_conformal(a: &MultivectorField, b: &MultivectorField) -> Result<ConformalVerdict> {
    if **a.chart() != **b.chart() {
        return Err(Error::ChartMismatch);
    }
    if a.degree() != b.degree() {
        return Ok(ConformalVerdict::NotProportional);
    }
    let (Ok(ca), Ok(cb)) = (a.exact_coefficients(), b.exact_coefficients()) else {
        return Ok(ConformalVerdict::NotProportional);
    };
    if ca.len() != cb.len() || ca.keys().ne(cb.keys()) {
        return Ok(ConformalVerdict::NotProportional);
    }
    let Some((key, reference)) = cb.iter().next() else {
        return Ok(ConformalVerdict::ProportionalByConstant(
            Rational::from_integer(1.into()),
        ));
    };
    let Some(ratio) = ca[key].div_exact(reference)? else {
        return Ok(ConformalVerdict::NotProportional);
    };
    for (k, pb) in &cb {
        if ca[k] != &ratio * pb {
            return Ok(ConformalVerdict::NotProportional);
        }
    }
    if let Some(r) = ratio.as_constant() {
        return Ok(ConformalVerdict::ProportionalByConstant(r));
    }
    match check_nonvanishing(&ScalarField::exact(ratio.clone()), a.chart()) {
        Ok(_) => Ok(ConformalVerdict::ProportionalByField(ratio)),
        Err(Error::VanishingFactor { .. }) => Ok(ConformalVerdict::NotProportional),
        Err(e) => Err(e),
    }
}
