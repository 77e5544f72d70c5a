//! Symplectic leaves: tangent frames, covector lifts, the induced leaf form,
//! blow-up rate fits and Hamiltonian flows.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::bracket::{hamiltonian_vector_field, PoissonStructure};
use crate::error::{Error, Result};
use crate::linalg::{image_and_kernel, min_norm_solve};
use crate::models::{ModelKind, SINGULAR_GUARD};
use crate::multivector::{bivector_matrix, rank_at};
use crate::report::{fmt_f64, serialize_f64, serialize_f64_vec, Csv};
use crate::symbolic::ScalarField;

/// Relative residual allowed for covector lifts and tangency.
pub const LIFT_RTOL: f64 = 1e-10;

/// Ratio of bivector norms that triggers a step halving in flows.
pub const NORM_GROWTH_LIMIT: f64 = 10.0;

#[derive(Clone, Debug, Serialize)]
pub struct LeafFrame {
    pub point: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    /// `max |<e_a, e_b> - δ_ab|` over the frame.
    pub orthonormality_residual: f64,
    /// `max |dF(e)| / |dF|` over declared Casimirs and frame vectors.
    pub tangency_residual: f64,
}

fn require_regular(p: &PoissonStructure, q: &[f64]) -> Result<DMatrix<f64>> {
    if q.len() != p.dimension() {
        return Err(Error::DimensionMismatch {
            expected: p.dimension(),
            found: q.len(),
        });
    }
    let rank = rank_at(p.bivector(), q)?;
    if rank < 2 {
        return Err(Error::SingularPoint { rank });
    }
    bivector_matrix(p.bivector(), q)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthonormal basis of the leaf plane at `q` (the image of the anchor),
/// ordered so that the leaf form is positive on `(u, v)`.
pub fn leaf_frame(p: &PoissonStructure, q: &[f64]) -> Result<LeafFrame> {
    let m = require_regular(p, q)?;
    let (image, _) = image_and_kernel(&m);
    if image.len() != 2 {
        return Err(Error::SingularPoint { rank: image.len() });
    }
    let u: Vec<f64> = image[0].iter().copied().collect();
    let mut v: Vec<f64> = image[1].iter().copied().collect();
    if form_on(&m, &u, &v)? < 0.0 {
        v.iter_mut().for_each(|c| *c = -*c);
    }
    let orthonormality_residual = [dot(&u, &u) - 1.0, dot(&v, &v) - 1.0, dot(&u, &v)]
        .iter()
        .fold(0.0f64, |a, b| a.max(b.abs()));
    let mut tangency_residual = 0.0f64;
    for f in p.casimirs() {
        let df = f.gradient(q)?;
        let scale = norm(&df);
        if scale == 0.0 {
            continue;
        }
        for e in [&u, &v] {
            tangency_residual = tangency_residual.max(dot(&df, e).abs() / scale);
        }
    }
    Ok(LeafFrame {
        point: q.to_vec(),
        u,
        v,
        orthonormality_residual,
        tangency_residual,
    })
}

fn lift_with(m: &DMatrix<f64>, w: &[f64]) -> Result<Vec<f64>> {
    let b = DVector::from_column_slice(w);
    let (x, residual) = min_norm_solve(m, &b);
    let scale = norm(w).max(m.norm() * x.norm());
    if residual > LIFT_RTOL * scale.max(f64::MIN_POSITIVE) && residual > 0.0 {
        return Err(Error::NotInImage { residual });
    }
    Ok(x.iter().copied().collect())
}

/// Minimum-norm covector `α` with `B(α) = w` at `q`.
pub fn covector_lift(p: &PoissonStructure, q: &[f64], w: &[f64]) -> Result<Vec<f64>> {
    let m = require_regular(p, q)?;
    if w.len() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.ncols(),
            found: w.len(),
        });
    }
    lift_with(&m, w)
}

/// Covectors annihilated by the anchor at `q`; adding any of them to a lift
/// gives another lift.
pub fn lift_kernel(p: &PoissonStructure, q: &[f64]) -> Result<Vec<Vec<f64>>> {
    let m = require_regular(p, q)?;
    let (_, kernel) = image_and_kernel(&m);
    Ok(kernel
        .into_iter()
        .map(|k| k.iter().copied().collect())
        .collect())
}

fn form_on(m: &DMatrix<f64>, u: &[f64], v: &[f64]) -> Result<f64> {
    let alpha = lift_with(m, u).map_err(not_tangent)?;
    let beta = lift_with(m, v).map_err(not_tangent)?;
    Ok(pair(m, &alpha, &beta))
}

fn not_tangent(e: Error) -> Error {
    match e {
        Error::NotInImage { residual } => Error::NotTangent { residual },
        other => other,
    }
}

fn pair(m: &DMatrix<f64>, a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += a[i] * m[(i, j)] * b[j];
        }
    }
    s
}

/// `ω(u, v) = π(α, β)` for lifts `B(α) = u`, `B(β) = v`.
pub fn leaf_form(p: &PoissonStructure, q: &[f64], u: &[f64], v: &[f64]) -> Result<f64> {
    let m = require_regular(p, q)?;
    for w in [u, v] {
        if w.len() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.ncols(),
                found: w.len(),
            });
        }
    }
    form_on(&m, u, v)
}

/// `π(α, β)` at `q` for explicit covectors.
pub fn leaf_form_with_lifts(
    p: &PoissonStructure,
    q: &[f64],
    alpha: &[f64],
    beta: &[f64],
) -> Result<f64> {
    let m = require_regular(p, q)?;
    Ok(pair(&m, alpha, beta))
}

/// `r` with `ω_Σ(q) = r ω_Area(q)` on the positively oriented leaf plane.
pub fn area_form_ratio(p: &PoissonStructure, q: &[f64]) -> Result<f64> {
    let frame = leaf_frame(p, q)?;
    leaf_form(p, q, &frame.u, &frame.v)
}

fn guard(p: &PoissonStructure, x: &[f64]) -> Result<()> {
    if let Some(kind) = ModelKind::from_tag(p.model_tag()) {
        let distance = kind.singular_distance(x);
        if distance < SINGULAR_GUARD {
            return Err(Error::NearSingular { distance });
        }
    }
    Ok(())
}

/// Straight approach path `q(r) = base + r · direction`.
#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct ApproachPath {
    pub base: Vec<f64>,
    pub direction: Vec<f64>,
}

impl ApproachPath {
    /// Radial path towards the model's singular set along the first
    /// normal coordinate.
    pub fn radial(kind: ModelKind, theta: f64) -> Self {
        if kind.is_fold() {
            ApproachPath {
                base: vec![theta, 0.0, 0.0, 0.0],
                direction: vec![0.0, 1.0, 0.0, 0.0],
            }
        } else {
            ApproachPath {
                base: vec![0.0; 4],
                direction: vec![1.0, 0.0, 0.0, 0.0],
            }
        }
    }

    pub fn at(&self, r: f64) -> Vec<f64> {
        self.base
            .iter()
            .zip(&self.direction)
            .map(|(b, d)| b + r * d)
            .collect()
    }
}

/// `count` logarithmically spaced values from `start` to `end`.
pub fn log_spaced(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let (a, b) = (start.ln(), end.ln());
            (0..count)
                .map(|i| {
                    if i == count - 1 {
                        end
                    } else {
                        (a + (b - a) * i as f64 / (count - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingFit {
    pub model: String,
    #[serde(serialize_with = "serialize_f64_vec")]
    pub radii: Vec<f64>,
    #[serde(serialize_with = "serialize_f64_vec")]
    pub values: Vec<f64>,
    #[serde(serialize_with = "serialize_f64")]
    pub slope: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub intercept: f64,
    /// Root-mean-square deviation of the log values from the fitted line.
    #[serde(serialize_with = "serialize_f64")]
    pub residual: f64,
}

/// Least-squares line `y = slope x + intercept` and its RMS residual.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let intercept = my - slope * mx;
    let rms = (x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - slope * a - intercept).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    (slope, intercept, rms)
}

/// Log-log slope of [`area_form_ratio`] along `path` at the given radii.
pub fn scaling_fit(p: &PoissonStructure, path: &ApproachPath, radii: &[f64]) -> Result<ScalingFit> {
    if radii.len() < 2 {
        return Err(Error::Invalid(
            "a scaling fit needs at least two radii".into(),
        ));
    }
    if radii.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
        return Err(Error::Invalid("radii must be positive".into()));
    }
    if radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Invalid("radii must decrease strictly".into()));
    }
    if path.base.len() != p.dimension() || path.direction.len() != p.dimension() {
        return Err(Error::DimensionMismatch {
            expected: p.dimension(),
            found: path.base.len().min(path.direction.len()),
        });
    }
    let mut values = Vec::with_capacity(radii.len());
    for &r in radii {
        let q = path.at(r);
        guard(p, &q)?;
        values.push(area_form_ratio(p, &q)?);
    }
    let lx: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ly: Vec<f64> = values.iter().map(|v| v.abs().ln()).collect();
    let (slope, intercept, residual) = fit_line(&lx, &ly);
    Ok(ScalingFit {
        model: p.model_tag().to_string(),
        radii: radii.to_vec(),
        values,
        slope,
        intercept,
        residual,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepPolicy {
    #[serde(serialize_with = "serialize_f64")]
    pub step: f64,
    /// Flows stop with a [`FlowEvent::StepUnderflow`] below this step.
    #[serde(serialize_with = "serialize_f64")]
    pub min_step: f64,
}

impl StepPolicy {
    pub fn fixed(step: f64) -> Self {
        StepPolicy {
            step,
            min_step: step / 1024.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "kebab-case")]
pub enum FlowEvent {
    BoundaryExit {
        #[serde(serialize_with = "serialize_f64")]
        t: f64,
    },
    StepUnderflow {
        #[serde(serialize_with = "serialize_f64")]
        t: f64,
        #[serde(serialize_with = "serialize_f64")]
        step: f64,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct LeafTrajectory {
    pub hamiltonian: String,
    pub names: Vec<String>,
    #[serde(serialize_with = "serialize_f64_vec")]
    pub times: Vec<f64>,
    #[serde(skip)]
    pub points: Vec<Vec<f64>>,
    #[serde(skip)]
    pub casimir_values: Vec<Vec<f64>>,
    /// Largest `|C(t) - C(0)| / max(|C(0)|, 1)` per declared Casimir.
    #[serde(serialize_with = "serialize_f64_vec")]
    pub drift: Vec<f64>,
    pub events: Vec<FlowEvent>,
}

impl LeafTrajectory {
    pub fn endpoint(&self) -> &[f64] {
        self.points.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn max_drift(&self) -> f64 {
        self.drift.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let casimir_names: Vec<String> = (1..=self.drift.len())
            .map(|i| format!("casimir_{i}"))
            .collect();
        let mut header: Vec<&str> = vec!["t"];
        header.extend(self.names.iter().map(String::as_str));
        header.extend(casimir_names.iter().map(String::as_str));
        let mut csv = Csv::new(&header);
        for ((t, x), c) in self
            .times
            .iter()
            .zip(&self.points)
            .zip(&self.casimir_values)
        {
            let mut row = vec![fmt_f64(*t)];
            row.extend(x.iter().map(|&v| fmt_f64(v)));
            row.extend(c.iter().map(|&v| fmt_f64(v)));
            csv.row(row);
        }
        csv.finish()
    }
}

fn eval_field(field: &[ScalarField], x: &[f64]) -> Result<Vec<f64>> {
    field.iter().map(|c| c.value(x)).collect()
}

fn axpy(x: &[f64], a: f64, k: &[f64]) -> Vec<f64> {
    x.iter().zip(k).map(|(xi, ki)| xi + a * ki).collect()
}

fn rk4(field: &[ScalarField], x: &[f64], h: f64) -> Result<Vec<f64>> {
    let k1 = eval_field(field, x)?;
    let k2 = eval_field(field, &axpy(x, h / 2.0, &k1))?;
    let k3 = eval_field(field, &axpy(x, h / 2.0, &k2))?;
    let k4 = eval_field(field, &axpy(x, h, &k3))?;
    Ok((0..x.len())
        .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// Classical RK4 trajectory of `X_h` from `x0` over `[0, t_end]`.
///
/// The step is `policy.step / 2^m`, with `m` the least integer such that
/// `|π(x)| ≤ 10 · 2^m · |π(x0)|` (Frobenius norms). Periodic coordinates are
/// wrapped after each step. Leaving the domain box or needing a step below
/// `policy.min_step` ends the flow with an event.
pub fn integrate_hamiltonian(
    p: &PoissonStructure,
    h: &ScalarField,
    label: &str,
    x0: &[f64],
    t_end: f64,
    policy: &StepPolicy,
) -> Result<LeafTrajectory> {
    let chart = p.chart().clone();
    if x0.len() != chart.dimension() {
        return Err(Error::DimensionMismatch {
            expected: chart.dimension(),
            found: x0.len(),
        });
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::Invalid(
            "flow time must be finite and non-negative".into(),
        ));
    }
    if !(policy.step > 0.0) || !(policy.min_step > 0.0) {
        return Err(Error::Invalid("flow step must be positive".into()));
    }
    if !chart.contains(x0) {
        return Err(Error::Invalid(
            "flow start lies outside the chart domain".into(),
        ));
    }
    guard(p, x0)?;
    let field = hamiltonian_vector_field(p, h)?;
    let casimirs = p.casimirs();
    let eval_casimirs =
        |x: &[f64]| -> Result<Vec<f64>> { casimirs.iter().map(|c| c.value(x)).collect() };
    let norm0 = bivector_matrix(p.bivector(), x0)?.norm();

    let mut x = x0.to_vec();
    chart.normalize(&mut x);
    let c0 = eval_casimirs(&x)?;
    let mut traj = LeafTrajectory {
        hamiltonian: label.to_string(),
        names: chart.names().into_iter().map(String::from).collect(),
        times: vec![0.0],
        points: vec![x.clone()],
        casimir_values: vec![c0.clone()],
        drift: vec![0.0; c0.len()],
        events: Vec::new(),
    };
    let mut t = 0.0;
    while t < t_end {
        let local = bivector_matrix(p.bivector(), &x)?.norm();
        let mut dt = policy.step;
        let mut limit = NORM_GROWTH_LIMIT * norm0;
        while norm0 > 0.0 && local > limit {
            dt /= 2.0;
            limit *= 2.0;
        }
        if dt < policy.min_step {
            traj.events.push(FlowEvent::StepUnderflow { t, step: dt });
            break;
        }
        let mut hstep = dt.min(t_end - t);
        if t_end - (t + hstep) < 1e-9 * dt {
            hstep = t_end - t;
        }
        let mut next = rk4(&field, &x, hstep)?;
        chart.normalize(&mut next);
        if !chart.contains(&next) {
            traj.events.push(FlowEvent::BoundaryExit { t: t + hstep });
            break;
        }
        t = if hstep == t_end - t { t_end } else { t + hstep };
        let c = eval_casimirs(&next)?;
        for (d, (ci, c0i)) in traj.drift.iter_mut().zip(c.iter().zip(&c0)) {
            *d = d.max((ci - c0i).abs() / c0i.abs().max(1.0));
        }
        x = next;
        traj.times.push(t);
        traj.points.push(x.clone());
        traj.casimir_values.push(c);
    }
    Ok(traj)
}
