use std::sync::Arc;

use anyhow::{bail, Context, Result};
use foliation_core::bracket::{check_nonvanishing, NonVanishing};
use foliation_core::leaf::{log_spaced, FlowEvent};
use foliation_core::models::{
    k_is_involution_symmetric, sl2_check_normalized, sl2_structure_constant, DEFAULT_RADIUS,
};
use foliation_core::multivector::schouten_self_bracket;
use foliation_core::sampling::{random_point, stream};
use foliation_core::symbolic::parse_polynomial;
use foliation_core::{
    build_flaschka_ratiu, build_near_symplectic, check_near_symplectic, classify_singular_set,
    compare_conformal, contrast_report, integrate_hamiltonian, involution_poisson_check,
    is_casimir, scaling_fit, verify_jacobi, ApproachPath, Chart, ConformalVerdict, Error, GridAxis,
    GridSpec, Interval, ModelDescriptor, ModelKind, PoissonStructure, ScalarField, StepPolicy,
};

use crate::config::{FitSpec, RadiiSpec, ScenarioConfig, ScenarioKind};
use crate::summary::{Check, Summary};

/// Largest relative Casimir drift accepted along a flow.
pub const FLOW_DRIFT_TOL: f64 = 1e-8;

/// Allowed deviation of fitted log-log slopes from their predicted values.
pub const SLOPE_TOL: f64 = 0.01;

pub const MODEL_MORSE_FUNCTION: &str = "-x1^2 + x2^2 + x3^2";
const MORSE_NAMES: [&str; 3] = ["x1", "x2", "x3"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pipeline {
    Verify,
    Flow,
    Scaling,
    NearSymplectic,
    Contrast,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Verify,
    Flow,
    Scaling,
    NearSymplectic,
    Contrast,
    All,
}

impl CommandKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandKind::Verify => "verify",
            CommandKind::Flow => "flow",
            CommandKind::Scaling => "scaling",
            CommandKind::NearSymplectic => "near-symplectic",
            CommandKind::Contrast => "contrast",
            CommandKind::All => "all",
        }
    }
}

pub fn pipelines(command: CommandKind, scenario: ScenarioKind) -> Vec<Pipeline> {
    use Pipeline as P;
    match (command, scenario) {
        (CommandKind::Verify, ScenarioKind::NearSymplectic) => vec![P::NearSymplectic],
        (CommandKind::Verify, ScenarioKind::Contrast) => vec![P::Contrast],
        (CommandKind::Verify, _) => vec![P::Verify],
        (CommandKind::Flow, s) if s.has_structure() => vec![P::Flow],
        (CommandKind::Scaling, s) if s.has_structure() => vec![P::Scaling],
        (CommandKind::Flow | CommandKind::Scaling, _) => vec![],
        (CommandKind::NearSymplectic, _) => vec![P::NearSymplectic],
        (CommandKind::Contrast, _) => vec![P::Contrast],
        (CommandKind::All, ScenarioKind::NearSymplectic) => vec![P::NearSymplectic],
        (CommandKind::All, ScenarioKind::Contrast) => vec![P::NearSymplectic, P::Contrast],
        (CommandKind::All, ScenarioKind::CustomCasimirs) => vec![P::Verify, P::Flow],
        (CommandKind::All, _) => vec![P::Verify, P::Flow, P::Scaling],
    }
}

/// Files produced by a run, written by the caller.
pub type Artifacts = Vec<(String, String)>;

struct Built {
    structure: PoissonStructure,
    kind: Option<ModelKind>,
    names: Vec<String>,
}

fn model_kind(s: ScenarioKind) -> Option<ModelKind> {
    match s {
        ScenarioKind::Lefschetz => Some(ModelKind::Lefschetz),
        ScenarioKind::Fold | ScenarioKind::Contrast => Some(ModelKind::FoldOrientable),
        ScenarioKind::FoldNonorientable => Some(ModelKind::FoldNonOrientable),
        _ => None,
    }
}

fn radius(cfg: &ScenarioConfig) -> f64 {
    cfg.radius.unwrap_or(DEFAULT_RADIUS)
}

fn names_of(chart: &Chart) -> Vec<String> {
    chart.names().into_iter().map(String::from).collect()
}

fn parse_on(text: &str, names: &[String]) -> Result<ScalarField> {
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let p =
        parse_polynomial(text, names.len(), &refs).with_context(|| format!("parsing `{text}`"))?;
    Ok(ScalarField::exact(p))
}

fn witness_check(name: &str, err: &Error) -> Option<Check> {
    match err {
        Error::VanishingFactor { witness } => {
            Some(Check::new(name, false, false).point("witness", witness))
        }
        _ => None,
    }
}

/// Builds the scenario's structure, recording the checks that gate it.
/// Returns `None` when a gating check failed.
fn build_structure(cfg: &ScenarioConfig, summary: &mut Summary) -> Result<Option<Built>> {
    if let Some(kind) = model_kind(cfg.scenario) {
        let desc = ModelDescriptor::parse(kind, radius(cfg), &cfg.k)
            .with_context(|| format!("parsing k = `{}`", cfg.k))?;
        match check_nonvanishing(&desc.k, &desc.chart) {
            Ok(how) => summary.push(nonvanishing_check(&how)),
            Err(e) => {
                let check = witness_check("nonvanishing_k", &e).ok_or(e)?;
                summary.push(check);
                return Ok(None);
            }
        }
        let mut build_kind = kind;
        if kind == ModelKind::FoldNonOrientable {
            let symmetric = k_is_involution_symmetric(&desc.k, &desc.chart)?;
            summary.push(Check::new(
                "k_involution_symmetric",
                symmetric,
                desc.k.is_exact(),
            ));
            if !symmetric {
                // the involution check still runs on the orientable double cover
                build_kind = ModelKind::FoldOrientable;
            }
        }
        let desc = ModelDescriptor {
            kind: build_kind,
            ..desc
        };
        let structure = desc.build()?;
        let names = names_of(&desc.chart);
        return Ok(Some(Built {
            structure,
            kind: Some(kind),
            names,
        }));
    }
    let n = cfg.casimirs.len() + 2;
    let names: Vec<String> = if cfg.names.is_empty() {
        (0..n).map(|i| format!("x{i}")).collect()
    } else {
        cfg.names.clone()
    };
    if names.len() != n {
        bail!(
            "{} casimirs need {} variable names, got {}",
            cfg.casimirs.len(),
            n,
            names.len()
        );
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let chart = Arc::new(Chart::new(
        &refs,
        vec![Interval::symmetric(radius(cfg)); n],
    )?);
    let casimirs = cfg
        .casimirs
        .iter()
        .map(|c| parse_on(c, &names))
        .collect::<Result<Vec<_>>>()?;
    let k = parse_on(&cfg.k, &names)?;
    match check_nonvanishing(&k, &chart) {
        Ok(how) => summary.push(nonvanishing_check(&how)),
        Err(e) => {
            let check = witness_check("nonvanishing_k", &e).ok_or(e)?;
            summary.push(check);
            return Ok(None);
        }
    }
    let structure = match build_flaschka_ratiu(chart, casimirs, k) {
        Ok(p) => p,
        Err(Error::Invalid(msg)) => {
            summary.push(Check::new("jacobi", false, true).text("error", &msg));
            return Ok(None);
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Some(Built {
        structure,
        kind: None,
        names,
    }))
}

fn nonvanishing_check(how: &NonVanishing) -> Check {
    match how {
        NonVanishing::Certified => {
            Check::new("nonvanishing_k", true, true).text("method", "certified")
        }
        NonVanishing::Sampled { nodes, min_abs } => Check::new("nonvanishing_k", true, false)
            .text("method", "sampled")
            .value("nodes", nodes)
            .num("min_abs", *min_abs),
    }
}

fn default_grid(kind: Option<ModelKind>, chart: &Chart) -> GridSpec {
    match kind {
        Some(ModelKind::Lefschetz) => GridSpec::new(vec![GridAxis::closed(-1.0, 1.0, 21); 4]),
        Some(_) => {
            let mut axes = vec![GridAxis::periodic(0.0, 2.0 * std::f64::consts::PI, 8)];
            axes.extend(vec![GridAxis::closed(-1.0, 1.0, 21); 3]);
            GridSpec::new(axes)
        }
        None => GridSpec::new(
            chart
                .domain()
                .iter()
                .map(|d| GridAxis::closed(d.lo, d.hi, 11))
                .collect(),
        ),
    }
}

fn verify(
    cfg: &ScenarioConfig,
    built: &Built,
    summary: &mut Summary,
    files: &mut Artifacts,
) -> Result<()> {
    let p = &built.structure;
    let chart = p.chart().clone();
    let mut rng = stream(cfg.seed, 1);
    let jacobi = verify_jacobi(p.bivector(), cfg.samples, &mut rng)?;
    let mut check = Check::new("jacobi", jacobi.passed(), p.bivector().is_exact());
    if let foliation_core::Verdict::Sampled { max_residual, .. } = jacobi {
        check = check.num("max_residual", max_residual);
    } else if !jacobi.passed() {
        let t = schouten_self_bracket(p.bivector())?;
        check = check.value("schouten", &t.to_text_map()?);
    }
    summary.push(check);

    let points: Vec<Vec<f64>> = (0..cfg.samples)
        .map(|_| random_point(&chart, &mut rng))
        .collect();
    let mut all = true;
    let mut worst = 0.0f64;
    for f in p.casimirs() {
        match is_casimir(p, f, &points)? {
            foliation_core::Verdict::Exact(ok) => all &= ok,
            foliation_core::Verdict::Sampled { max_residual, pass } => {
                all &= pass;
                worst = worst.max(max_residual);
            }
        }
    }
    summary.push(
        Check::new("casimirs", all, p.bivector().is_exact())
            .value("count", &p.casimirs().len())
            .num("max_residual", worst),
    );

    if let Some(kind) = built.kind {
        let from_casimirs = build_flaschka_ratiu(
            chart.clone(),
            p.casimirs().to_vec(),
            p.conformal_factor().clone(),
        )?;
        let verdict = compare_conformal(from_casimirs.bivector(), p.bivector())?;
        let check = match &verdict {
            ConformalVerdict::ProportionalByConstant(r) => {
                Check::new("proportionality", true, true).rational("proportionality_constant", r)
            }
            ConformalVerdict::ProportionalByField(f) => Check::new("proportionality", true, true)
                .text("proportionality_field", &f.to_text(&chart.names())),
            ConformalVerdict::NotProportional => Check::new("proportionality", false, true),
        };
        summary.push(check);

        let constant_k = p
            .conformal_factor()
            .as_exact()
            .and_then(|k| k.as_constant())
            .is_some();
        if kind.is_fold() && constant_k {
            let strict = sl2_structure_constant(p)?;
            let mut check = Check::new("sl2", sl2_check_normalized(p)?, true).value(
                "strict",
                &(strict == Some(foliation_core::symbolic::int(1))),
            );
            if let Some(r) = &strict {
                check = check.rational("structure_constant", r);
            }
            summary.push(check);
        }
        if kind == ModelKind::FoldNonOrientable {
            involution(cfg, built, summary)?;
        }
    }

    let grid = cfg
        .grid
        .clone()
        .unwrap_or_else(|| default_grid(built.kind, &chart));
    let report = classify_singular_set(p, &grid)?;
    let max_rank = report.nodes.iter().map(|n| n.rank).max().unwrap_or(0);
    let mismatches = report.mismatches().len();
    summary.push(
        Check::new(
            "rank_stratification",
            mismatches == 0 && report.all_even() && max_rank <= 2,
            report.exact,
        )
        .value("nodes", &report.nodes.len())
        .value("singular_nodes", &report.singular_count())
        .value("mismatches", &mismatches),
    );
    files.push(("singular_set.csv".into(), report.to_csv()));
    Ok(())
}

fn involution(cfg: &ScenarioConfig, built: &Built, summary: &mut Summary) -> Result<()> {
    let p = &built.structure;
    let mut rng = stream(cfg.seed, 2);
    let points: Vec<Vec<f64>> = (0..cfg.samples.max(1))
        .map(|_| random_point(p.chart(), &mut rng))
        .collect();
    let mut pairs: Vec<(String, String)> =
        vec![("x1".into(), "x2".into()), ("theta".into(), "x1".into())];
    pairs.extend(cfg.involution_pairs.iter().cloned());
    let mut failure = None;
    for (g, h) in &pairs {
        let r = involution_poisson_check(
            p,
            &parse_on(g, &built.names)?,
            &parse_on(h, &built.names)?,
            &points,
        )?;
        if !r.holds && failure.is_none() {
            failure = Some((g.clone(), h.clone(), r));
        }
    }
    let check = match failure {
        None => Check::new("involution", true, true).value("pairs", &pairs.len()),
        Some((g, h, r)) => {
            let mut c = Check::new("involution", false, r.exact)
                .value("pairs", &pairs.len())
                .value("failing_pair", &[g, h])
                .num("residual", r.max_residual);
            if let Some(w) = &r.witness {
                c = c.point("witness", w);
            }
            c
        }
    };
    summary.push(check);
    Ok(())
}

fn flows(
    cfg: &ScenarioConfig,
    built: &Built,
    summary: &mut Summary,
    files: &mut Artifacts,
) -> Result<()> {
    for (i, spec) in cfg.flows.iter().enumerate() {
        let h = parse_on(&spec.h, &built.names)?;
        let traj = integrate_hamiltonian(
            &built.structure,
            &h,
            &spec.h,
            &spec.x0,
            spec.t,
            &StepPolicy::fixed(spec.step),
        )
        .with_context(|| format!("flow {i} of `{}`", spec.h))?;
        let underflow = traj
            .events
            .iter()
            .any(|e| matches!(e, FlowEvent::StepUnderflow { .. }));
        let name = format!("flow_{i}");
        summary.push(
            Check::new(
                &name,
                traj.max_drift() <= FLOW_DRIFT_TOL && !underflow,
                false,
            )
            .text("h", &spec.h)
            .num("t_end", *traj.times.last().unwrap_or(&0.0))
            .point("endpoint", traj.endpoint())
            .point("drift", &traj.drift)
            .value("events", &traj.events),
        );
        files.push((format!("{name}.csv"), traj.to_csv()));
    }
    Ok(())
}

fn scaling(
    cfg: &ScenarioConfig,
    built: &Built,
    summary: &mut Summary,
    files: &mut Artifacts,
) -> Result<()> {
    let fit = cfg.fit.clone().unwrap_or_default();
    let path = match (&fit.path, built.kind) {
        (Some(path), _) => path.clone(),
        (None, Some(kind)) => ApproachPath::radial(kind, fit.theta),
        (None, None) => bail!("a scaling fit on custom Casimirs needs an explicit path"),
    };
    let result = scaling_fit(&built.structure, &path, &fit.radii.values())?;
    let expected = built.kind.map(|k| if k.is_fold() { -1.0 } else { -2.0 });
    let pass = match expected {
        Some(e) => (result.slope - e).abs() <= SLOPE_TOL,
        None => result.slope.is_finite(),
    };
    let mut check = Check::new("scaling_slope", pass, false).num("slope", result.slope);
    if let Some(e) = expected {
        check = check.num("expected", e);
    }
    summary.push(check.num("residual", result.residual));
    files.push(("scaling.json".into(), pretty(&result)?));
    Ok(())
}

fn pretty<T: serde::Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn morse_function(cfg: &ScenarioConfig) -> Result<ScalarField> {
    let text = cfg.f.as_deref().unwrap_or(MODEL_MORSE_FUNCTION);
    let p =
        parse_polynomial(text, 3, &MORSE_NAMES).with_context(|| format!("parsing f = `{text}`"))?;
    Ok(ScalarField::exact(p))
}

fn near_symplectic(
    cfg: &ScenarioConfig,
    summary: &mut Summary,
    files: &mut Artifacts,
) -> Result<()> {
    let ns = build_near_symplectic(&morse_function(cfg)?, radius(cfg))?;
    let grid = cfg
        .grid
        .clone()
        .unwrap_or_else(|| default_grid(Some(ModelKind::FoldOrientable), &ns.chart));
    let report = check_near_symplectic(&ns, &grid)?;
    let names = ns.chart.names();
    let d = ns.exterior_derivative()?;
    summary.push(Check::new("closed", report.closed, true).value("d_omega", &d.to_text_map()?));
    summary.push(
        Check::new("wedge_identity", report.wedge_identity, true)
            .text("wedge_over_vol", &ns.wedge_square()?.to_text(&names)),
    );
    summary.push(Check::new(
        "wedge_nonnegative",
        report.wedge_nonnegative(),
        true,
    ));
    summary.push(
        Check::new("zero_locus", report.zero_locus_is_critical_set(), true)
            .value("zero_nodes", &report.zero_nodes().count()),
    );
    summary.push(Check::new(
        "gradient_rank",
        report.gradient_rank_three(),
        true,
    ));
    summary.push(
        Check::new("never_rank_two", report.never_rank_two(), true)
            .value("nodes", &report.nodes.len()),
    );
    files.push(("near_symplectic.csv".into(), report.to_csv()));
    Ok(())
}

fn contrast(cfg: &ScenarioConfig, summary: &mut Summary, files: &mut Artifacts) -> Result<()> {
    let ns = build_near_symplectic(&morse_function(cfg)?, radius(cfg))?;
    let desc = ModelDescriptor::parse(ModelKind::FoldOrientable, radius(cfg), &cfg.k)?;
    let p = desc.build()?;
    let fit = cfg.fit.clone().unwrap_or(FitSpec {
        radii: RadiiSpec::List(log_spaced(1.0, 1e-3, 7)),
        path: None,
        theta: 0.0,
    });
    let report = contrast_report(&ns, &p, fit.theta, &fit.radii.values())?;
    let pass = (report.omega_slope - 1.0).abs() <= SLOPE_TOL
        && (report.ratio_slope + 1.0).abs() <= SLOPE_TOL;
    summary.push(
        Check::new("contrast_slopes", pass, false)
            .num("omega_slope", report.omega_slope)
            .num("ratio_slope", report.ratio_slope),
    );
    files.push(("contrast.csv".into(), report.to_csv()));
    files.push(("contrast.json".into(), pretty(&report)?));
    Ok(())
}

/// Runs the pipelines of `command` for `cfg` and returns the summary with
/// the artifacts to write.
pub fn execute(cfg: &ScenarioConfig, command: CommandKind) -> Result<(Summary, Artifacts)> {
    let mut summary = Summary::new(command.as_str(), cfg.scenario.as_str(), cfg.seed);
    let mut files = Artifacts::new();
    let todo = pipelines(command, cfg.scenario);
    let needs_structure = todo.iter().any(|p| match p {
        Pipeline::Verify | Pipeline::Scaling => true,
        Pipeline::Flow => !cfg.flows.is_empty(),
        _ => false,
    });
    let built = if needs_structure {
        build_structure(cfg, &mut summary)?
    } else {
        None
    };
    if needs_structure && built.is_none() {
        return Ok((summary, files));
    }
    for step in todo {
        match (step, &built) {
            (Pipeline::Verify, Some(b)) => verify(cfg, b, &mut summary, &mut files)?,
            (Pipeline::Flow, Some(b)) => flows(cfg, b, &mut summary, &mut files)?,
            (Pipeline::Scaling, Some(b)) => scaling(cfg, b, &mut summary, &mut files)?,
            (Pipeline::NearSymplectic, _) => near_symplectic(cfg, &mut summary, &mut files)?,
            (Pipeline::Contrast, _) => contrast(cfg, &mut summary, &mut files)?,
            _ => {}
        }
    }
    Ok((summary, files))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_lefschetz() -> ScenarioConfig {
        let mut c = ScenarioConfig::new(ScenarioKind::Lefschetz);
        c.grid = Some(GridSpec::new(vec![GridAxis::closed(-1.0, 1.0, 3); 4]));
        c.samples = 10;
        c
    }

    #[test]
    fn lefschetz_verify_reports_constant() {
        let (s, files) = execute(&small_lefschetz(), CommandKind::Verify).unwrap();
        assert!(s.passed);
        let json = s.to_json();
        assert!(json.contains("\"proportionality_constant\": \"4\""));
        assert_eq!(files[0].0, "singular_set.csv");
    }

    #[test]
    fn counterexample_fails_with_witness() {
        let mut c = ScenarioConfig::new(ScenarioKind::FoldNonorientable);
        c.k = "1 + x1".into();
        c.radius = Some(0.5);
        c.samples = 20;
        c.grid = Some(GridSpec::new(vec![
            GridAxis::periodic(0.0, 6.0, 2),
            GridAxis::closed(-0.5, 0.5, 3),
            GridAxis::closed(-0.5, 0.5, 3),
            GridAxis::closed(-0.5, 0.5, 3),
        ]));
        let (s, _) = execute(&c, CommandKind::Verify).unwrap();
        assert!(!s.passed);
        let inv = s.checks.iter().find(|c| c.name == "involution").unwrap();
        assert!(!inv.pass);
        assert!(serde_json::to_string(inv).unwrap().contains("witness"));
    }

    #[test]
    fn vanishing_k_is_a_finding() {
        let mut c = small_lefschetz();
        c.k = "x1".into();
        let (s, _) = execute(&c, CommandKind::Verify).unwrap();
        assert!(!s.passed);
        assert_eq!(s.checks.len(), 1);
    }

    #[test]
    fn flow_without_specs_is_empty() {
        let (s, files) =
            execute(&ScenarioConfig::new(ScenarioKind::Fold), CommandKind::Flow).unwrap();
        assert!(s.passed && s.checks.is_empty() && files.is_empty());
    }
}
