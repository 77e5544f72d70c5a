use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use foliation_core::leaf::{log_spaced, ApproachPath};
use foliation_core::{GridAxis, GridSpec};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Lefschetz,
    Fold,
    FoldNonorientable,
    CustomCasimirs,
    NearSymplectic,
    Contrast,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Lefschetz => "lefschetz",
            ScenarioKind::Fold => "fold",
            ScenarioKind::FoldNonorientable => "fold-nonorientable",
            ScenarioKind::CustomCasimirs => "custom-casimirs",
            ScenarioKind::NearSymplectic => "near-symplectic",
            ScenarioKind::Contrast => "contrast",
        }
    }

    pub fn has_structure(self) -> bool {
        !matches!(self, ScenarioKind::NearSymplectic | ScenarioKind::Contrast)
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSpec {
    pub h: String,
    pub x0: Vec<f64>,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(default = "default_step")]
    pub step: f64,
}

fn default_step() -> f64 {
    1e-3
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum RadiiSpec {
    List(Vec<f64>),
    Range { from: f64, to: f64, count: usize },
}

impl RadiiSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            RadiiSpec::List(v) => v.clone(),
            RadiiSpec::Range { from, to, count } => log_spaced(*from, *to, *count),
        }
    }
}

impl Default for RadiiSpec {
    fn default() -> Self {
        RadiiSpec::Range {
            from: 1e-1,
            to: 1e-3,
            count: 9,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSpec {
    #[serde(default)]
    pub radii: RadiiSpec,
    pub path: Option<ApproachPath>,
    #[serde(default)]
    pub theta: f64,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(default = "default_k")]
    pub k: String,
    /// Half-width of the chart box.
    pub radius: Option<f64>,
    #[serde(default)]
    pub casimirs: Vec<String>,
    /// Variable names of a custom chart.
    #[serde(default)]
    pub names: Vec<String>,
    /// Morse function for the near-symplectic form.
    pub f: Option<String>,
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub flows: Vec<FlowSpec>,
    pub fit: Option<FitSpec>,
    /// Extra `(g, h)` pairs for the involution check.
    #[serde(default)]
    pub involution_pairs: Vec<(String, String)>,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub seed: u64,
    /// Size of the randomized suites run by `verify`.
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_k() -> String {
    "1".into()
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

fn default_samples() -> usize {
    100
}

impl ScenarioConfig {
    pub fn new(scenario: ScenarioKind) -> Self {
        ScenarioConfig {
            scenario,
            k: default_k(),
            radius: None,
            casimirs: Vec::new(),
            names: Vec::new(),
            f: None,
            grid: None,
            flows: Vec::new(),
            fit: None,
            involution_pairs: Vec::new(),
            output: default_output(),
            seed: 0,
            samples: default_samples(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// `lo:hi:n` or `lo:hi:n:p` (periodic) per axis, comma separated.
pub fn parse_grid(text: &str) -> Result<GridSpec> {
    let axes = text
        .split(',')
        .map(|axis| {
            let parts: Vec<&str> = axis.trim().split(':').collect();
            let (periodic, parts) = match parts.as_slice() {
                [lo, hi, n] => (false, [*lo, *hi, *n]),
                [lo, hi, n, "p"] => (true, [*lo, *hi, *n]),
                _ => bail!("grid axis `{axis}` is not lo:hi:n or lo:hi:n:p"),
            };
            let lo: f64 = parts[0]
                .trim()
                .parse()
                .with_context(|| format!("grid bound `{}`", parts[0]))?;
            let hi: f64 = parts[1]
                .trim()
                .parse()
                .with_context(|| format!("grid bound `{}`", parts[1]))?;
            let n: usize = parts[2]
                .trim()
                .parse()
                .with_context(|| format!("node count `{}`", parts[2]))?;
            Ok(if periodic {
                GridAxis::periodic(lo, hi, n)
            } else {
                GridAxis::closed(lo, hi, n)
            })
        })
        .collect::<Result<_>>()?;
    Ok(GridSpec::new(axes))
}

/// Comma-separated numbers.
pub fn parse_point(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("number `{s}`"))
        })
        .collect()
}

/// `a..b` for logarithmically spaced radii from `a` to `b`, otherwise a
/// comma-separated list.
pub fn parse_radii(text: &str, count: usize) -> Result<RadiiSpec> {
    if let Some((a, b)) = text.split_once("..") {
        let from = a.trim().parse().with_context(|| format!("radius `{a}`"))?;
        let to = b.trim().parse().with_context(|| format!("radius `{b}`"))?;
        return Ok(RadiiSpec::Range { from, to, count });
    }
    Ok(RadiiSpec::List(parse_point(text)?))
}
