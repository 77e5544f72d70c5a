//! The near-symplectic 2-form `ω = dt ∧ df + ∗(dt ∧ df)` on `S^1 × R^3`
//! and its verification on grids.

use std::f64::consts::PI;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bracket::PoissonStructure;
use crate::error::{Error, Result};
use crate::leaf::{area_form_ratio, fit_line};
use crate::linalg::exact_rank;
use crate::models::{ModelKind, SINGULAR_GUARD};
use crate::multivector::{Chart, DifferentialForm, Interval};
use crate::report::{fmt_f64, serialize_f64, serialize_f64_vec, Csv};
use crate::sampling::GridSpec;
use crate::symbolic::{int, rational_to_f64, Polynomial, Rational, ScalarField};

pub const NEAR_SYMPLECTIC_NAMES: [&str; 4] = ["t", "x1", "x2", "x3"];

/// Parity of the zero circle's normal bundle splitting, carried as a label.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CircleParity {
    #[default]
    Even,
    Odd,
}

#[derive(Clone, Debug)]
pub struct NearSymplecticForm {
    pub chart: Arc<Chart>,
    pub omega: DifferentialForm,
    /// The Morse function on the three `x` variables.
    pub f: Polynomial,
    pub parity: CircleParity,
}

/// The chart `S^1_t × [-radius, radius]^3`.
pub fn near_symplectic_chart(radius: f64) -> Result<Chart> {
    Chart::new(&NEAR_SYMPLECTIC_NAMES, vec![Interval::symmetric(radius); 4])?
        .with_period(0, 2.0 * PI)
}

/// ω for a polynomial `f(x1, x2, x3)` on the chart of half-width `radius`,
/// using the product metric and orientation `dt ∧ dx1 ∧ dx2 ∧ dx3`.
pub fn build_near_symplectic(f: &ScalarField, radius: f64) -> Result<NearSymplecticForm> {
    let f = f.require_exact()?.clone();
    if f.dimension() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: f.dimension(),
        });
    }
    let chart = Arc::new(near_symplectic_chart(radius)?);
    let grad: Vec<Polynomial> = f
        .gradient()
        .iter()
        .map(|g| g.embed(4, &[1, 2, 3]))
        .collect::<Result<_>>()?;
    let mut omega = DifferentialForm::zero(chart.clone(), 2)?;
    // dt∧dxi plus its Hodge dual: ∗(dt∧dx1)=dx2∧dx3, ∗(dt∧dx2)=dx3∧dx1, ∗(dt∧dx3)=dx1∧dx2
    let duals = [[2, 3], [3, 1], [1, 2]];
    for (i, g) in grad.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let c = ScalarField::exact(g.clone());
        omega.add_component(&[0, i + 1], c.clone())?;
        omega.add_component(&duals[i], c)?;
    }
    Ok(NearSymplecticForm {
        chart,
        omega,
        f,
        parity: CircleParity::Even,
    })
}

impl NearSymplecticForm {
    /// `dω`, which equals `Δf dx1 ∧ dx2 ∧ dx3` for the product metric.
    pub fn exterior_derivative(&self) -> Result<DifferentialForm> {
        self.omega.exterior_derivative()
    }

    /// `dω = 0` as an exact identity; holds iff `f` is harmonic.
    pub fn is_closed(&self) -> Result<bool> {
        Ok(self.exterior_derivative()?.is_exact_zero())
    }

    /// Coefficient of `ω ∧ ω` on `dt ∧ dx1 ∧ dx2 ∧ dx3`.
    pub fn wedge_square(&self) -> Result<Polynomial> {
        let top = self.omega.wedge(&self.omega)?;
        Ok(top.component(&[0, 1, 2, 3]).require_exact()?.clone())
    }

    /// `2 |∇f|^2` on the four chart variables.
    pub fn twice_gradient_square(&self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(4);
        for g in self.f.gradient() {
            let g = g.embed(4, &[1, 2, 3])?;
            acc = &acc + &(&g * &g);
        }
        Ok(acc.scale(&int(2)))
    }

    fn coefficient_polys(&self) -> Result<Vec<(Vec<usize>, Polynomial)>> {
        let mut out = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                out.push((
                    vec![i, j],
                    self.omega.component(&[i, j]).require_exact()?.clone(),
                ));
            }
        }
        Ok(out)
    }

    /// Euclidean norm `sqrt(Σ_{i<j} ω_ij^2)` at `x`.
    pub fn pointwise_norm(&self, x: &[f64]) -> Result<f64> {
        Ok(self
            .omega
            .eval_at(x)?
            .values()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NearSymplecticNode {
    #[serde(serialize_with = "serialize_f64_vec")]
    pub point: Vec<f64>,
    /// `ω ∧ ω / vol`.
    #[serde(serialize_with = "serialize_f64")]
    pub wedge_ratio: f64,
    pub wedge_nonnegative: bool,
    pub zero: bool,
    pub critical: bool,
    pub form_rank: usize,
    /// Rank of the 6×4 linearization of the coefficients at zero nodes.
    pub gradient_rank: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NearSymplecticReport {
    pub closed: bool,
    pub wedge_identity: bool,
    pub grid: GridSpec,
    pub names: Vec<String>,
    pub nodes: Vec<NearSymplecticNode>,
}

impl NearSymplecticReport {
    pub fn zero_nodes(&self) -> impl Iterator<Item = &NearSymplecticNode> {
        self.nodes.iter().filter(|n| n.zero)
    }

    pub fn wedge_nonnegative(&self) -> bool {
        self.nodes.iter().all(|n| n.wedge_nonnegative)
    }

    /// Zero nodes coincide with critical nodes of `f`.
    pub fn zero_locus_is_critical_set(&self) -> bool {
        self.nodes.iter().all(|n| n.zero == n.critical)
    }

    pub fn gradient_rank_three(&self) -> bool {
        self.zero_nodes().all(|n| n.gradient_rank == Some(3))
    }

    pub fn never_rank_two(&self) -> bool {
        self.nodes
            .iter()
            .all(|n| n.form_rank == 0 || n.form_rank == 4)
    }

    pub fn passed(&self) -> bool {
        self.closed
            && self.wedge_identity
            && self.wedge_nonnegative()
            && self.zero_locus_is_critical_set()
            && self.gradient_rank_three()
            && self.never_rank_two()
    }

    pub fn to_csv(&self) -> String {
        let mut header: Vec<&str> = self.names.iter().map(String::as_str).collect();
        header.extend(["wedge_over_vol", "zero", "form_rank", "gradient_rank"]);
        let mut csv = Csv::new(&header);
        for n in &self.nodes {
            let mut row: Vec<String> = n.point.iter().map(|&v| fmt_f64(v)).collect();
            row.push(fmt_f64(n.wedge_ratio));
            row.push(u8::from(n.zero).to_string());
            row.push(n.form_rank.to_string());
            row.push(n.gradient_rank.map(|r| r.to_string()).unwrap_or_default());
            csv.row(row);
        }
        csv.finish()
    }
}

/// Evaluates the near-symplectic conditions exactly at every grid node.
pub fn check_near_symplectic(
    ns: &NearSymplecticForm,
    grid: &GridSpec,
) -> Result<NearSymplecticReport> {
    grid.validate(&ns.chart)?;
    let wedge = ns.wedge_square()?;
    let wedge_identity = wedge == ns.twice_gradient_square()?;
    let closed = ns.is_closed()?;
    let coeffs = ns.coefficient_polys()?;
    let jac: Vec<Vec<Polynomial>> = coeffs.iter().map(|(_, p)| p.gradient()).collect();
    let fgrad = ns.f.gradient();
    let nodes = grid.nodes()?;
    let checked: Vec<NearSymplecticNode> = nodes
        .par_iter()
        .map(|node| {
            let x = &node.exact;
            let w = wedge.eval(x)?;
            let values: Vec<Rational> = coeffs
                .iter()
                .map(|(_, p)| p.eval(x))
                .collect::<Result<_>>()?;
            let zero = values.iter().all(Zero::is_zero);
            let mut m = vec![vec![int(0); 4]; 4];
            for ((key, _), v) in coeffs.iter().zip(&values) {
                m[key[0]][key[1]] = v.clone();
                m[key[1]][key[0]] = -v.clone();
            }
            let form_rank = exact_rank(&m);
            let gradient_rank = if zero {
                let rows: Vec<Vec<Rational>> = jac
                    .iter()
                    .map(|row| row.iter().map(|d| d.eval(x)).collect::<Result<_>>())
                    .collect::<Result<_>>()?;
                Some(exact_rank(&rows))
            } else {
                None
            };
            let critical = fgrad
                .iter()
                .map(|g| g.eval(&x[1..]))
                .collect::<Result<Vec<_>>>()?
                .iter()
                .all(Zero::is_zero);
            Ok(NearSymplecticNode {
                point: node.point.clone(),
                wedge_ratio: rational_to_f64(&w),
                wedge_nonnegative: !w.is_negative(),
                zero,
                critical,
                form_rank,
                gradient_rank,
            })
        })
        .collect::<Result<_>>()?;
    Ok(NearSymplecticReport {
        closed,
        wedge_identity,
        grid: grid.clone(),
        names: ns.chart.names().into_iter().map(String::from).collect(),
        nodes: checked,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ContrastRow {
    #[serde(serialize_with = "serialize_f64")]
    pub radius: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub omega_norm: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub area_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContrastReport {
    #[serde(serialize_with = "serialize_f64")]
    pub theta: f64,
    pub rows: Vec<ContrastRow>,
    /// Log-log slope of `|ω|` against the radius.
    #[serde(serialize_with = "serialize_f64")]
    pub omega_slope: f64,
    /// Log-log slope of the leaf area ratio against the radius.
    #[serde(serialize_with = "serialize_f64")]
    pub ratio_slope: f64,
}

impl ContrastReport {
    pub fn to_csv(&self) -> String {
        let mut csv = Csv::new(&["radius", "omega_norm", "area_ratio"]);
        for r in &self.rows {
            csv.row([
                fmt_f64(r.radius),
                fmt_f64(r.omega_norm),
                fmt_f64(r.area_ratio),
            ]);
        }
        csv.finish()
    }
}

/// `|ω|` and the fold leaf area ratio along `(θ, r, 0, 0)`, the common
/// approach to the shared singular circle `{x = 0}`.
pub fn contrast_report(
    ns: &NearSymplecticForm,
    p: &PoissonStructure,
    theta: f64,
    radii: &[f64],
) -> Result<ContrastReport> {
    if !ModelKind::from_tag(p.model_tag()).is_some_and(ModelKind::is_fold) {
        return Err(Error::Invalid("contrast needs a fold structure".into()));
    }
    if radii.len() < 2 {
        return Err(Error::Invalid(
            "a contrast table needs at least two radii".into(),
        ));
    }
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        if !(r > SINGULAR_GUARD) || !r.is_finite() {
            return Err(Error::Invalid(format!("radius {r} is not positive")));
        }
        let x = [theta, r, 0.0, 0.0];
        rows.push(ContrastRow {
            radius: r,
            omega_norm: ns.pointwise_norm(&x)?,
            area_ratio: area_form_ratio(p, &x)?,
        });
    }
    let lr: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let lo: Vec<f64> = rows.iter().map(|r| r.omega_norm.ln()).collect();
    let la: Vec<f64> = rows.iter().map(|r| r.area_ratio.abs().ln()).collect();
    Ok(ContrastReport {
        theta,
        rows,
        omega_slope: fit_line(&lr, &lo).0,
        ratio_slope: fit_line(&lr, &la).0,
    })
}
