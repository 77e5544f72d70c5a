//! Command-line driver: scenario configs, verification pipelines and
//! deterministic artifacts.

pub mod config;
pub mod pipeline;
pub mod summary;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use config::{parse_grid, parse_point, parse_radii, FlowSpec, ScenarioConfig, ScenarioKind};
use pipeline::CommandKind;
use summary::Summary;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "foliation-forge",
    version,
    about = "Verify singular Poisson structures and their leaves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structural checks: Jacobi, Casimirs, models, rank stratification.
    Verify(Overrides),
    /// Integrate Hamiltonian flows and track Casimir drift.
    Flow(Overrides),
    /// Fit the blow-up rate of the leaf area form.
    Scaling(Overrides),
    /// Check the near-symplectic form.
    NearSymplectic(Overrides),
    /// Tabulate the near-symplectic form against the fold leaf form.
    Contrast(Overrides),
    /// Every pipeline that applies to the scenario.
    All(Overrides),
    /// Every pipeline for the scenario in a config file.
    Run {
        #[arg(value_name = "CONFIG")]
        config_file: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Debug, Default, clap::Args)]
pub struct Overrides {
    /// JSON scenario config.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub scenario: Option<ScenarioKind>,
    /// Conformal factor.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Casimir functions, separated by `;`.
    #[arg(long, value_delimiter = ';', allow_hyphen_values = true)]
    pub casimirs: Vec<String>,
    /// Variable names of a custom chart, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub names: Vec<String>,
    /// Morse function on the 3-manifold.
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    /// Grid axes as `lo:hi:n` or `lo:hi:n:p`, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Hamiltonian of a single flow.
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    /// `a..b` or a comma-separated list.
    #[arg(long, allow_hyphen_values = true)]
    pub radii: Option<String>,
    #[arg(long, default_value_t = 9)]
    pub radii_count: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Half-width of the chart box.
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
}

impl Overrides {
    fn resolve(&self, config: Option<&Path>) -> Result<ScenarioConfig> {
        let mut cfg = match (config.or(self.config.as_deref()), self.scenario) {
            (Some(path), scenario) => {
                let mut c = ScenarioConfig::load(path)?;
                if let Some(s) = scenario {
                    c.scenario = s;
                }
                c
            }
            (None, Some(s)) => ScenarioConfig::new(s),
            (None, None) => bail!("either --config or --scenario is required"),
        };
        if let Some(k) = &self.k {
            cfg.k = k.clone();
        }
        if !self.casimirs.is_empty() {
            cfg.casimirs = self.casimirs.clone();
        }
        if !self.names.is_empty() {
            cfg.names = self.names.clone();
        }
        if let Some(f) = &self.f {
            cfg.f = Some(f.clone());
        }
        if let Some(g) = &self.grid {
            cfg.grid = Some(parse_grid(g)?);
        }
        if self.h.is_some() || self.x0.is_some() || self.t.is_some() || self.step.is_some() {
            let base = cfg.flows.first().cloned();
            let h = self
                .h
                .clone()
                .or(base.as_ref().map(|b| b.h.clone()))
                .context("--h is required")?;
            let x0 = match &self.x0 {
                Some(x) => parse_point(x)?,
                None => base
                    .as_ref()
                    .map(|b| b.x0.clone())
                    .context("--x0 is required")?,
            };
            let t = self
                .t
                .or(base.as_ref().map(|b| b.t))
                .context("--T is required")?;
            let step = self.step.or(base.as_ref().map(|b| b.step)).unwrap_or(1e-3);
            cfg.flows = vec![FlowSpec { h, x0, t, step }];
        }
        if self.radii.is_some() || self.theta.is_some() {
            let mut fit = cfg.fit.clone().unwrap_or_default();
            if let Some(r) = &self.radii {
                fit.radii = parse_radii(r, self.radii_count)?;
            }
            if let Some(theta) = self.theta {
                fit.theta = theta;
            }
            cfg.fit = Some(fit);
        }
        if let Some(r) = self.radius {
            cfg.radius = Some(r);
        }
        if let Some(o) = &self.output {
            cfg.output = o.clone();
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(n) = self.samples {
            cfg.samples = n;
        }
        Ok(cfg)
    }
}

impl Command {
    fn split(&self) -> (CommandKind, &Overrides, Option<&Path>) {
        match self {
            Command::Verify(o) => (CommandKind::Verify, o, None),
            Command::Flow(o) => (CommandKind::Flow, o, None),
            Command::Scaling(o) => (CommandKind::Scaling, o, None),
            Command::NearSymplectic(o) => (CommandKind::NearSymplectic, o, None),
            Command::Contrast(o) => (CommandKind::Contrast, o, None),
            Command::All(o) => (CommandKind::All, o, None),
            Command::Run {
                config_file,
                overrides,
            } => (CommandKind::All, overrides, Some(config_file.as_path())),
        }
    }
}

/// Runs a parsed command, writes its artifacts and returns the summary.
pub fn run(cli: &Cli) -> Result<Summary> {
    let (kind, overrides, config) = cli.command.split();
    let cfg = overrides.resolve(config)?;
    let (mut summary, files) = pipeline::execute(&cfg, kind)?;
    std::fs::create_dir_all(&cfg.output)
        .with_context(|| format!("creating {}", cfg.output.display()))?;
    for (name, contents) in &files {
        let path = cfg.output.join(name);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        summary.artifacts.push(name.clone());
    }
    summary.artifacts.push("summary.json".into());
    let path = cfg.output.join("summary.json");
    std::fs::write(&path, summary.to_json())
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(summary)
}

/// Parses `args`, runs and maps the outcome to an exit code, echoing one
/// line per check to stdout.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_args(args, &mut std::io::stdout())
}

/// Like [`main_with_args`] with the check lines written to `out`.
pub fn run_args<I, T, W>(args: I, out: &mut W) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(summary) => {
            for c in &summary.checks {
                let _ = writeln!(out, "{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name);
            }
            if summary.passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}
