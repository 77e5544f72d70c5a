//! Local models at Lefschetz singularities and fold circles, the singular
//! set classifier, the sl(2,R) identification and the involution check for
//! non-orientable fold neighborhoods.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bracket::{bracket, check_nonvanishing, PoissonStructure};
use crate::error::{Error, Result};
use crate::multivector::{rank_at, rank_at_exact, Chart, Interval, MultivectorField};
use crate::report::{fmt_f64, Csv};
use crate::sampling::{random_point, stream, GridSpec};
use crate::symbolic::{int, parse_polynomial, Polynomial, Rational, ScalarField};

/// Half-width of the default model charts.
pub const DEFAULT_RADIUS: f64 = 2.0;

/// Sample count for involution-symmetry checks of smooth `k`.
pub const INVOLUTION_SAMPLES: usize = 1000;

/// Tolerance for sampled involution checks.
pub const INVOLUTION_RTOL: f64 = 1e-9;

/// Points closer than this to the analytic singular set are treated as
/// singular by smooth-mode checks.
pub const SINGULAR_GUARD: f64 = 1e-12;

pub const LEFSCHETZ_NAMES: [&str; 4] = ["x1", "y1", "x2", "y2"];
pub const FOLD_NAMES: [&str; 4] = ["theta", "x1", "x2", "x3"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Lefschetz,
    FoldOrientable,
    FoldNonOrientable,
}

impl ModelKind {
    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::Lefschetz => "lefschetz",
            ModelKind::FoldOrientable => "fold-orientable",
            ModelKind::FoldNonOrientable => "fold-nonorientable",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        [
            ModelKind::Lefschetz,
            ModelKind::FoldOrientable,
            ModelKind::FoldNonOrientable,
        ]
        .into_iter()
        .find(|k| k.tag() == tag)
    }

    pub fn is_fold(self) -> bool {
        !matches!(self, ModelKind::Lefschetz)
    }

    pub fn variable_names(self) -> [&'static str; 4] {
        if self.is_fold() {
            FOLD_NAMES
        } else {
            LEFSCHETZ_NAMES
        }
    }

    /// Euclidean distance to the model's singular set: the origin for
    /// Lefschetz, `{x = 0}` for folds.
    pub fn singular_distance(self, x: &[f64]) -> f64 {
        let tail = if self.is_fold() { &x[1..] } else { x };
        tail.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// The chart `B^4` with variables `x1, y1, x2, y2`.
pub fn lefschetz_chart(radius: f64) -> Result<Chart> {
    Chart::new(&LEFSCHETZ_NAMES, vec![Interval::symmetric(radius); 4])
}

/// The chart `S^1 x B^3` with variables `theta, x1, x2, x3`, `theta`
/// periodic with period `2 pi`.
pub fn fold_chart(radius: f64) -> Result<Chart> {
    Chart::new(&FOLD_NAMES, vec![Interval::symmetric(radius); 4])?.with_period(0, 2.0 * PI)
}

#[derive(Clone, Debug)]
pub struct ModelDescriptor {
    pub kind: ModelKind,
    pub chart: Arc<Chart>,
    pub k: ScalarField,
}

impl ModelDescriptor {
    pub fn new(kind: ModelKind, radius: f64, k: ScalarField) -> Result<Self> {
        let chart = if kind.is_fold() {
            fold_chart(radius)?
        } else {
            lefschetz_chart(radius)?
        };
        if k.dimension() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: k.dimension(),
            });
        }
        Ok(ModelDescriptor {
            kind,
            chart: Arc::new(chart),
            k,
        })
    }

    /// Parses `k` with the model's variable names.
    pub fn parse(kind: ModelKind, radius: f64, k: &str) -> Result<Self> {
        let k = parse_polynomial(k, 4, &kind.variable_names())?;
        Self::new(kind, radius, ScalarField::exact(k))
    }

    pub fn build(&self) -> Result<PoissonStructure> {
        check_nonvanishing(&self.k, &self.chart)?;
        if self.kind == ModelKind::FoldNonOrientable
            && !k_is_involution_symmetric(&self.k, &self.chart)?
        {
            return Err(Error::NotInvolutionSymmetric);
        }
        let (entries, casimirs) = if self.kind.is_fold() {
            (FOLD_ENTRIES, FOLD_CASIMIRS)
        } else {
            (LEFSCHETZ_ENTRIES, LEFSCHETZ_CASIMIRS)
        };
        let names = self.kind.variable_names();
        let mut pi = MultivectorField::zero(self.chart.clone(), 2)?;
        for &(i, j, text) in entries {
            let c = ScalarField::exact(parse_polynomial(text, 4, &names)?);
            pi.add_component(&[i, j], c.mul(&self.k)?)?;
        }
        let casimirs = casimirs
            .iter()
            .map(|t| parse_polynomial(t, 4, &names).map(ScalarField::exact))
            .collect::<Result<Vec<_>>>()?;
        PoissonStructure::new(pi, casimirs, self.k.clone(), self.kind.tag())
    }
}

const LEFSCHETZ_ENTRIES: &[(usize, usize, &str)] = &[
    (0, 1, "x2^2 + y2^2"),
    (2, 3, "x1^2 + y1^2"),
    (0, 3, "-(y1*y2 + x1*x2)"),
    (1, 2, "x1*x2 + y1*y2"),
    (1, 3, "-x1*y2 + y1*x2"),
    (0, 2, "-x1*y2 + y1*x2"),
];
const LEFSCHETZ_CASIMIRS: &[&str] = &["x1^2 - y1^2 + x2^2 - y2^2", "2*(x1*y1 + x2*y2)"];

const FOLD_ENTRIES: &[(usize, usize, &str)] = &[(2, 3, "x1"), (1, 3, "x2"), (1, 2, "-x3")];
const FOLD_CASIMIRS: &[&str] = &["theta", "-x1^2 + x2^2 + x3^2"];

/// Lefschetz model on the default chart.
pub fn lefschetz_model(k: ScalarField) -> Result<PoissonStructure> {
    ModelDescriptor::new(ModelKind::Lefschetz, DEFAULT_RADIUS, k)?.build()
}

/// Fold model on the default chart.
pub fn fold_model(k: ScalarField, orientable: bool) -> Result<PoissonStructure> {
    let kind = if orientable {
        ModelKind::FoldOrientable
    } else {
        ModelKind::FoldNonOrientable
    };
    ModelDescriptor::new(kind, DEFAULT_RADIUS, k)?.build()
}

/// `ι(θ, x1, x2, x3) = (θ + π, −x1, −x2, x3)`.
pub fn involution(x: &[f64]) -> Vec<f64> {
    vec![x[0] + PI, -x[1], -x[2], x[3]]
}

/// Representative of `x` in the fundamental domain `θ ∈ [0, π)` of the
/// non-orientable quotient.
pub fn quotient_representative(x: &[f64]) -> Vec<f64> {
    let theta = x[0].rem_euclid(2.0 * PI);
    if theta >= PI {
        vec![theta - PI, -x[1], -x[2], x[3]]
    } else {
        vec![theta, x[1], x[2], x[3]]
    }
}

/// `p ∘ ι_s` as a polynomial in `(θ, x1, x2, x3, s)` where `ι_s` shifts `θ`
/// by the formal variable `s`. Since `π` is transcendental, a polynomial in
/// these variables vanishes at `s = π` iff it vanishes identically.
fn shifted(p: &Polynomial) -> Result<Polynomial> {
    let v = |i| Polynomial::variable(5, i);
    let images = [&v(0)? + &v(4)?, -&v(1)?, -&v(2)?, v(3)?];
    p.compose(&images)
}

fn lifted(p: &Polynomial) -> Result<Polynomial> {
    p.embed(5, &[0, 1, 2, 3])
}

/// Whether `k ∘ ι = k`: exactly for polynomials, at seeded sample points
/// otherwise.
pub fn k_is_involution_symmetric(k: &ScalarField, chart: &Chart) -> Result<bool> {
    if let Some(p) = k.as_exact() {
        return Ok(shifted(p)? == lifted(p)?);
    }
    let mut rng = stream(0, 0x696f7461);
    for _ in 0..INVOLUTION_SAMPLES {
        let x = random_point(chart, &mut rng);
        let a = k.value(&x)?;
        let b = k.value(&involution(&x))?;
        if (a - b).abs() > INVOLUTION_RTOL * a.abs().max(1.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Common constant `r` with `{x1,x2} = −r x3`, `{x2,x3} = r x1`,
/// `{x1,x3} = r x2`, if there is one.
pub fn sl2_structure_constant(p: &PoissonStructure) -> Result<Option<Rational>> {
    if p.dimension() != 4 || !p.bivector().is_exact() {
        return Ok(None);
    }
    let e = |i| ScalarField::variable(4, i);
    let (e1, e2, e3) = (e(1)?, e(2)?, e(3)?);
    let pairs = [
        (bracket(p, &e1, &e2)?, e3.neg()),
        (bracket(p, &e2, &e3)?, e1.clone()),
        (bracket(p, &e1, &e3)?, e2.clone()),
    ];
    let mut common: Option<Rational> = None;
    for (lhs, basis) in &pairs {
        let (Some(l), Some(b)) = (lhs.as_exact(), basis.as_exact()) else {
            return Ok(None);
        };
        let Some(q) = l.div_exact(b)? else {
            return Ok(None);
        };
        let Some(r) = q.as_constant() else {
            return Ok(None);
        };
        match &common {
            None => common = Some(r),
            Some(c) if *c == r => {}
            Some(_) => return Ok(None),
        }
    }
    Ok(common.filter(|r| *r != int(0)))
}

/// The displayed sl(2,R) relations on the coordinate functions, strictly.
pub fn sl2_check(p: &PoissonStructure) -> Result<bool> {
    Ok(sl2_structure_constant(p)? == Some(int(1)))
}

/// The relations up to a common nonzero constant factor.
pub fn sl2_check_normalized(p: &PoissonStructure) -> Result<bool> {
    Ok(sl2_structure_constant(p)?.is_some())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvolutionReport {
    /// Whether the verdict is an exact identity check.
    pub exact: bool,
    pub holds: bool,
    /// Largest absolute residual over the sample points.
    pub max_residual: f64,
    /// Sample point attaining `max_residual` when the check fails.
    pub witness: Option<Vec<f64>>,
}

fn bracket_polys(
    coeffs: &[(usize, usize, Polynomial)],
    a: &Polynomial,
    b: &Polynomial,
) -> Result<Polynomial> {
    let n = a.dimension();
    let mut acc = Polynomial::zero(n);
    for (i, j, c) in coeffs {
        let w = &(&a.diff(*i)? * &b.diff(*j)?) - &(&a.diff(*j)? * &b.diff(*i)?);
        if !w.is_zero() {
            acc = &acc + &(c * &w);
        }
    }
    Ok(acc)
}

/// Tests `{g∘ι, h∘ι} = {g,h}∘ι` on the fold chart. Exact inputs give an
/// identity check with a witness searched among `samples` on failure;
/// smooth inputs are compared at `samples` with relative tolerance
/// [`INVOLUTION_RTOL`].
pub fn involution_poisson_check(
    p: &PoissonStructure,
    g: &ScalarField,
    h: &ScalarField,
    samples: &[Vec<f64>],
) -> Result<InvolutionReport> {
    if p.dimension() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: p.dimension(),
        });
    }
    let exact = match (
        p.bivector().exact_coefficients(),
        g.as_exact(),
        h.as_exact(),
    ) {
        (Ok(c), Some(g), Some(h)) => Some((c, g, h)),
        _ => None,
    };
    if let Some((coeffs, g, h)) = exact {
        let lifted_coeffs: Vec<(usize, usize, Polynomial)> = coeffs
            .iter()
            .map(|(key, c)| Ok((key[0], key[1], lifted(c)?)))
            .collect::<Result<_>>()?;
        let lhs = bracket_polys(&lifted_coeffs, &shifted(g)?, &shifted(h)?)?;
        let plain: Vec<(usize, usize, Polynomial)> = coeffs
            .into_iter()
            .map(|(key, c)| (key[0], key[1], c))
            .collect();
        let rhs = shifted(&bracket_polys(&plain, g, h)?)?;
        let residual = &lhs - &rhs;
        if residual.is_zero() {
            return Ok(InvolutionReport {
                exact: true,
                holds: true,
                max_residual: 0.0,
                witness: None,
            });
        }
        let mut best: Option<(f64, Vec<f64>)> = None;
        for x in samples {
            let r = residual.eval_f64(&[x[0], x[1], x[2], x[3], PI])?.abs();
            if r > 0.0 && best.as_ref().map_or(true, |(b, _)| r > *b) {
                best = Some((r, x.clone()));
            }
        }
        let (max_residual, witness) = match best {
            Some((r, x)) => (r, Some(x)),
            None => (0.0, None),
        };
        return Ok(InvolutionReport {
            exact: true,
            holds: false,
            max_residual,
            witness,
        });
    }

    // pullback of a gradient through ι flips the x1, x2 components
    let flip = |mut v: Vec<f64>| {
        v[1] = -v[1];
        v[2] = -v[2];
        v
    };
    let pair = |m: &nalgebra::DMatrix<f64>, a: &[f64], b: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                s += m[(i, j)] * a[i] * b[j];
            }
        }
        s
    };
    let mut worst = 0.0f64;
    let mut witness = None;
    let mut holds = true;
    for x in samples {
        let ix = involution(x);
        let dg = g.gradient(&ix)?;
        let dh = h.gradient(&ix)?;
        let lhs = pair(
            &crate::multivector::bivector_matrix(p.bivector(), x)?,
            &flip(dg.clone()),
            &flip(dh.clone()),
        );
        let rhs = pair(
            &crate::multivector::bivector_matrix(p.bivector(), &ix)?,
            &dg,
            &dh,
        );
        let r = (lhs - rhs).abs();
        if r > INVOLUTION_RTOL * rhs.abs().max(1.0) {
            holds = false;
        }
        if r > worst {
            worst = r;
            witness = Some(x.clone());
        }
    }
    Ok(InvolutionReport {
        exact: false,
        holds,
        max_residual: worst,
        witness: if holds { None } else { witness },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingularLabel {
    LefschetzPoint,
    FoldCircle,
    /// Rank below two on a structure that is not one of the models.
    Singular,
    Regular,
}

impl SingularLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SingularLabel::LefschetzPoint => "LefschetzPoint",
            SingularLabel::FoldCircle => "FoldCircle",
            SingularLabel::Singular => "Singular",
            SingularLabel::Regular => "Regular",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularNode {
    pub point: Vec<f64>,
    pub rank: usize,
    pub label: SingularLabel,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularSetReport {
    pub kind: Option<ModelKind>,
    pub exact: bool,
    pub grid: GridSpec,
    pub names: Vec<String>,
    pub nodes: Vec<SingularNode>,
}

impl SingularSetReport {
    pub fn singular_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.rank < 2).count()
    }

    pub fn all_even(&self) -> bool {
        self.nodes.iter().all(|n| n.rank % 2 == 0)
    }

    /// Nodes whose rank disagrees with the analytic singular set of the
    /// model. Smooth reports skip the rank-two assertion within
    /// [`SINGULAR_GUARD`] of that set.
    pub fn mismatches(&self) -> Vec<&SingularNode> {
        let Some(kind) = self.kind else {
            return Vec::new();
        };
        self.nodes
            .iter()
            .filter(|n| {
                let d = kind.singular_distance(&n.point);
                if d == 0.0 {
                    n.rank != 0
                } else if !self.exact && d < SINGULAR_GUARD {
                    false
                } else {
                    n.rank != 2
                }
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut header: Vec<&str> = self.names.iter().map(String::as_str).collect();
        header.extend(["rank", "label"]);
        let mut csv = Csv::new(&header);
        for n in &self.nodes {
            let mut row: Vec<String> = n.point.iter().map(|&v| fmt_f64(v)).collect();
            row.push(n.rank.to_string());
            row.push(n.label.as_str().to_string());
            csv.row(row);
        }
        csv.finish()
    }
}

/// Rank and label at every node of `grid`, in lexicographic node order.
/// Exact bivectors are ranked exactly at the rational grid nodes.
pub fn classify_singular_set(p: &PoissonStructure, grid: &GridSpec) -> Result<SingularSetReport> {
    grid.validate(p.chart())?;
    let kind = ModelKind::from_tag(p.model_tag());
    let exact = p.bivector().is_exact();
    let nodes = grid.nodes()?;
    let ranked: Vec<SingularNode> = nodes
        .par_iter()
        .map(|node| {
            let rank = if exact {
                rank_at_exact(p.bivector(), &node.exact)?
            } else {
                rank_at(p.bivector(), &node.point)?
            };
            let label = match (rank, kind) {
                (r, _) if r >= 2 => SingularLabel::Regular,
                (_, Some(ModelKind::Lefschetz)) => SingularLabel::LefschetzPoint,
                (_, Some(_)) => SingularLabel::FoldCircle,
                (_, None) => SingularLabel::Singular,
            };
            Ok(SingularNode {
                point: node.point.clone(),
                rank,
                label,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SingularSetReport {
        kind,
        exact,
        grid: grid.clone(),
        names: p.chart().names().into_iter().map(String::from).collect(),
        nodes: ranked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::{
        build_flaschka_ratiu, compare_conformal, is_casimir, ConformalVerdict, Verdict,
    };
    use crate::multivector::{bivector_matrix, schouten_self_bracket};
    use crate::sampling::GridAxis;

    fn lk(s: &str) -> ScalarField {
        ScalarField::exact(parse_polynomial(s, 4, &LEFSCHETZ_NAMES).unwrap())
    }

    fn fk(s: &str) -> ScalarField {
        ScalarField::exact(parse_polynomial(s, 4, &FOLD_NAMES).unwrap())
    }

    #[test]
    fn lefschetz_model_values() {
        let p = lefschetz_model(ScalarField::one(4)).unwrap();
        let m = bivector_matrix(p.bivector(), &[1.0, 0.0, 0.0, 0.0]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = match (i, j) {
                    (2, 3) => 1.0,
                    (3, 2) => -1.0,
                    _ => 0.0,
                };
                assert_eq!(m[(i, j)], expected);
            }
        }
        assert_eq!(rank_at(p.bivector(), &[0.0; 4]).unwrap(), 0);
        assert_eq!(rank_at(p.bivector(), &[1.0, 0.0, 0.0, 0.0]).unwrap(), 2);
        assert!(schouten_self_bracket(p.bivector()).unwrap().is_exact_zero());
        for f in p.casimirs() {
            assert_eq!(is_casimir(&p, f, &[]).unwrap(), Verdict::Exact(true));
        }
    }

    #[test]
    fn fold_brackets() {
        let p = fold_model(ScalarField::one(4), true).unwrap();
        let b = |a: &str, c: &str| {
            bracket(&p, &fk(a), &fk(c))
                .unwrap()
                .as_exact()
                .unwrap()
                .clone()
        };
        let e = |s: &str| fk(s).as_exact().unwrap().clone();
        assert_eq!(b("x1", "x2"), e("-x3"));
        assert_eq!(b("x2", "x3"), e("x1"));
        assert_eq!(b("x1", "x3"), e("x2"));
        assert!(b("theta", "x1^3 + x2*x3").is_zero());
        assert!(sl2_check(&p).unwrap());
        assert_eq!(rank_at(p.bivector(), &[1.0, 0.0, 0.0, 0.0]).unwrap(), 0);
    }

    #[test]
    fn sl2_variants() {
        assert!(!sl2_check(&lefschetz_model(ScalarField::one(4)).unwrap()).unwrap());
        let doubled = fold_model(fk("2"), true).unwrap();
        assert!(!sl2_check(&doubled).unwrap());
        assert!(sl2_check_normalized(&doubled).unwrap());
    }

    #[test]
    fn builder_constants_against_models() {
        let one = ScalarField::one(4);
        for (kind, expected) in [(ModelKind::Lefschetz, 4), (ModelKind::FoldOrientable, -2)] {
            let m = ModelDescriptor::new(kind, DEFAULT_RADIUS, one.clone())
                .unwrap()
                .build()
                .unwrap();
            let built = build_flaschka_ratiu(m.chart().clone(), m.casimirs().to_vec(), one.clone())
                .unwrap();
            assert_eq!(
                compare_conformal(built.bivector(), m.bivector()).unwrap(),
                ConformalVerdict::ProportionalByConstant(int(expected))
            );
        }
    }

    #[test]
    fn nonorientable_requires_symmetric_k() {
        assert!(fold_model(fk("2 + x1^2 + x1*x2 + x2^2"), false).is_ok());
        let chart = fold_chart(0.5).unwrap();
        assert!(!k_is_involution_symmetric(&fk("1 + x1"), &chart).unwrap());
        let d = ModelDescriptor::new(ModelKind::FoldNonOrientable, 0.5, fk("1 + x1")).unwrap();
        assert_eq!(d.build().unwrap_err(), Error::NotInvolutionSymmetric);
        assert!(k_is_involution_symmetric(&fk("1 + x3").to_smooth(), &chart).unwrap());
    }

    #[test]
    fn involution_examples() {
        let p = fold_model(ScalarField::one(4), false).unwrap();
        let pts = vec![vec![0.3, 0.2, -0.1, 0.4]];
        assert!(
            involution_poisson_check(&p, &fk("x1"), &fk("x2"), &pts)
                .unwrap()
                .holds
        );
        assert!(
            involution_poisson_check(&p, &fk("theta"), &fk("x1"), &pts)
                .unwrap()
                .holds
        );
        let s = involution_poisson_check(&p, &fk("x1").to_smooth(), &fk("x2*theta"), &pts).unwrap();
        assert!(!s.exact && s.holds);

        let bad = ModelDescriptor::new(ModelKind::FoldOrientable, 0.5, fk("1 + x1"))
            .unwrap()
            .build()
            .unwrap();
        let r = involution_poisson_check(&bad, &fk("x1"), &fk("x2"), &pts).unwrap();
        assert!(r.exact && !r.holds);
        // residual is -2 x1 x3
        assert!((r.max_residual - 2.0 * 0.2 * 0.4).abs() < 1e-15);
        assert_eq!(r.witness, Some(pts[0].clone()));
    }

    #[test]
    fn quotient_representatives() {
        let x = quotient_representative(&[PI + 0.5, 1.0, 2.0, 3.0]);
        assert!((x[0] - 0.5).abs() < 1e-15);
        assert_eq!(&x[1..], &[-1.0, -2.0, 3.0]);
        assert_eq!(
            quotient_representative(&[0.25, 1.0, 2.0, 3.0]),
            vec![0.25, 1.0, 2.0, 3.0]
        );
    }

    #[test]
    fn small_grid_classification() {
        let p = lefschetz_model(lk("1 + x1^2")).unwrap();
        let grid = GridSpec::new(vec![GridAxis::closed(-1.0, 1.0, 3); 4]);
        let r = classify_singular_set(&p, &grid).unwrap();
        assert_eq!(r.nodes.len(), 81);
        assert_eq!(r.singular_count(), 1);
        assert_eq!(r.nodes[40].label, SingularLabel::LefschetzPoint);
        assert!(r.mismatches().is_empty());
        let csv = r.to_csv();
        assert!(csv.starts_with("x1,y1,x2,y2,rank,label\n"));
        assert_eq!(csv.lines().count(), 82);
        let empty = classify_singular_set(&p, &GridSpec::default()).unwrap();
        assert!(empty.nodes.is_empty());
    }
}
