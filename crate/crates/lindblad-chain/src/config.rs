//! JSON run configuration: parsing, validation, and defaulting.
//!
//! A config names one experiment plus the blocks that experiment needs.
//! Model and drive blocks are dispatched on their `kind`/`family` tag by
//! hand so that unknown keys are rejected with the offending names, which
//! `deny_unknown_fields` cannot do through an internally tagged enum.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::drive::{DriveSpec, SixAmplitudes};
use crate::error::{Error, Result};
use crate::experiments::{BenchmarkParameters, SuiteGrid};
use crate::lindblad::{SolveStrategy, SolverOptions};
use crate::model::ChainModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Solve,
    OneWay,
    Benchmark3,
    ParityScan,
    SymmetrySuite,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Solve => "solve",
            Experiment::OneWay => "one_way",
            Experiment::Benchmark3 => "benchmark3",
            Experiment::ParityScan => "parity_scan",
            Experiment::SymmetrySuite => "symmetry_suite",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

fn default_tolerance() -> f64 {
    1e-10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "default_tolerance")]
    pub rank_tolerance: f64,
    #[serde(default = "default_tolerance")]
    pub residual_tolerance: f64,
    #[serde(default)]
    pub strategy: SolveStrategy,
    #[serde(default)]
    pub time_evolution_crosscheck: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            rank_tolerance: default_tolerance(),
            residual_tolerance: default_tolerance(),
            strategy: SolveStrategy::default(),
            time_evolution_crosscheck: false,
        }
    }
}

impl SolverConfig {
    pub fn options(&self) -> SolverOptions {
        SolverOptions {
            rank_tolerance: self.rank_tolerance,
            residual_tolerance: self.residual_tolerance,
            strategy: self.strategy,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("solver.rank_tolerance", self.rank_tolerance),
            ("solver.residual_tolerance", self.residual_tolerance),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::Config(format!("{name} = {value} must be > 0")));
            }
        }
        Ok(())
    }
}

/// Model block. `kind` selects which coupling fields apply: XXZ takes a
/// scalar `alpha` and per-bond `delta`; XXX takes per-bond `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct XxzModelConfig {
    kind: String,
    n_sites: usize,
    alpha: f64,
    delta: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct XxxModelConfig {
    kind: String,
    n_sites: usize,
    alpha: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<Vec<f64>>,
}

fn tag_of(value: &Value, block: &str, key: &str) -> Result<String> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Config(format!("{block} must be an object")))?;
    obj.get(key)
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| Error::Config(format!("{block} needs a string `{key}` field")))
}

fn from_value<T: serde::de::DeserializeOwned>(value: Value, block: &str) -> Result<T> {
    serde_json::from_value(value).map_err(|e| Error::Config(format!("{block}: {e}")))
}

/// Build the validated chain model out of the raw `model` JSON block.
pub fn model_from_value(value: &Value) -> Result<ChainModel> {
    match tag_of(value, "model", "kind")?.as_str() {
        "xxz" => {
            let c: XxzModelConfig = from_value(value.clone(), "model")?;
            ChainModel::xxz(c.n_sites, c.alpha, c.delta, c.field)
        }
        "xxx" => {
            let c: XxxModelConfig = from_value(value.clone(), "model")?;
            ChainModel::xxx(c.n_sites, c.alpha, c.field)
        }
        other => Err(Error::Config(format!(
            "model.kind = {other:?} is not one of \"xxz\", \"xxx\""
        ))),
    }
}

fn default_gamma() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ZTargetConfig {
    family: String,
    #[serde(default = "default_gamma")]
    gamma: f64,
    /// Shorthand for the antisymmetric pair f_left = f, f_right = −f.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    f: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    f_left: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    f_right: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TwistedConfig {
    family: String,
    #[serde(default = "default_gamma")]
    gamma: f64,
    f: f64,
    theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SixOpConfig {
    family: String,
    alpha: f64,
    beta: f64,
    p: f64,
    q: f64,
    u: f64,
    v: f64,
}

/// Build the drive spec out of the raw `drive` JSON block.
pub fn drive_from_value(value: &Value) -> Result<DriveSpec> {
    let family = tag_of(value, "drive", "family")?;
    let spec = match family.as_str() {
        "z_target" => {
            let c: ZTargetConfig = from_value(value.clone(), "drive")?;
            let (f_left, f_right) = match (c.f, c.f_left, c.f_right) {
                (Some(f), None, None) => (f, -f),
                (None, Some(l), Some(r)) => (l, r),
                (None, None, None) => {
                    return Err(Error::Config(
                        "z_target drive needs either `f` or both `f_left` and `f_right`".into(),
                    ))
                }
                _ => {
                    return Err(Error::Config(
                        "z_target drive takes `f` alone or the `f_left`/`f_right` pair, \
                         not a mixture"
                            .into(),
                    ))
                }
            };
            DriveSpec::ZTarget { gamma: c.gamma, f_left, f_right }
        }
        "twisted_xy" | "twisted_zx" => {
            let c: TwistedConfig = from_value(value.clone(), "drive")?;
            if family == "twisted_xy" {
                DriveSpec::TwistedXy { gamma: c.gamma, f: c.f, theta: c.theta }
            } else {
                DriveSpec::TwistedZx { gamma: c.gamma, f: c.f, theta: c.theta }
            }
        }
        "six_op_xxz" | "six_op_xxx" => {
            let c: SixOpConfig = from_value(value.clone(), "drive")?;
            let amps = SixAmplitudes {
                alpha: c.alpha,
                beta: c.beta,
                p: c.p,
                q: c.q,
                u: c.u,
                v: c.v,
            };
            if family == "six_op_xxz" {
                DriveSpec::SixOpXxz(amps)
            } else {
                DriveSpec::SixOpXxx(amps)
            }
        }
        other => {
            return Err(Error::Config(format!(
                "drive.family = {other:?} is not one of \"z_target\", \"twisted_xy\", \
                 \"six_op_xxz\", \"twisted_zx\", \"six_op_xxx\""
            )))
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn default_anisotropy() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Benchmark3Config {
    #[serde(default = "default_anisotropy")]
    pub anisotropy: f64,
    pub grading: f64,
    pub f: f64,
    #[serde(default)]
    pub field: f64,
}

impl Benchmark3Config {
    pub fn parameters(&self) -> BenchmarkParameters {
        BenchmarkParameters {
            anisotropy: self.anisotropy,
            grading: self.grading,
            f: self.f,
            field: self.field,
        }
    }
}

fn default_f_grid() -> Vec<f64> {
    vec![0.05, 0.1, 0.2]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParityScanConfig {
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_f_grid")]
    pub f_grid: Vec<f64>,
}

impl Default for ParityScanConfig {
    fn default() -> Self {
        ParityScanConfig { gamma: default_gamma(), f_grid: default_f_grid() }
    }
}

fn default_suite_sites() -> Vec<usize> {
    vec![3, 4, 5]
}

fn default_theta_grid() -> Vec<f64> {
    (0..8).map(|k| k as f64 * std::f64::consts::PI / 8.0).collect()
}

fn default_draws() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetrySuiteConfig {
    #[serde(default = "default_suite_sites")]
    pub n_sites: Vec<usize>,
    #[serde(default = "default_theta_grid")]
    pub theta_grid: Vec<f64>,
    #[serde(default = "default_draws")]
    pub draws: usize,
}

impl Default for SymmetrySuiteConfig {
    fn default() -> Self {
        SymmetrySuiteConfig {
            n_sites: default_suite_sites(),
            theta_grid: default_theta_grid(),
            draws: default_draws(),
        }
    }
}

impl SymmetrySuiteConfig {
    pub fn grid(&self, seed: u64) -> SuiteGrid {
        SuiteGrid {
            n_sites: self.n_sites.clone(),
            theta_grid: self.theta_grid.clone(),
            draws: self.draws,
            seed,
        }
    }
}

fn default_seed() -> u64 {
    42
}

/// A fully parsed run configuration. The raw model/drive blocks are kept
/// as JSON so the resolved config embedded in reports round-trips exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drive: Option<Value>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub benchmark3: Option<Benchmark3Config>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity_scan: Option<ParityScanConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetry_suite: Option<SymmetrySuiteConfig>,
}

impl RunConfig {
    /// The chain model; errors when the experiment needs one and the
    /// config has none.
    pub fn model(&self) -> Result<ChainModel> {
        match &self.model {
            Some(v) => model_from_value(v),
            None => Err(Error::Config(format!(
                "experiment {} needs a `model` block",
                self.experiment.name()
            ))),
        }
    }

    pub fn drive(&self) -> Result<DriveSpec> {
        match &self.drive {
            Some(v) => drive_from_value(v),
            None => Err(Error::Config(format!(
                "experiment {} needs a `drive` block",
                self.experiment.name()
            ))),
        }
    }

    pub fn solver_options(&self) -> SolverOptions {
        self.solver.options()
    }

    fn forbid(&self, present: bool, block: &str) -> Result<()> {
        if present {
            return Err(Error::Config(format!(
                "experiment {} does not take a `{block}` block",
                self.experiment.name()
            )));
        }
        Ok(())
    }

    /// Structural validation: every block the experiment needs is
    /// present and well-formed, and no foreign block sneaks in.
    pub fn validate(&self) -> Result<()> {
        self.solver.validate()?;
        match self.experiment {
            Experiment::Solve | Experiment::OneWay => {
                let model = self.model()?;
                let spec = self.drive()?;
                if !spec.compatible_with(model.kind()) {
                    return Err(Error::Config(format!(
                        "drive family {} does not drive {:?} chains",
                        spec.family(),
                        model.kind()
                    )));
                }
                self.forbid(self.benchmark3.is_some(), "benchmark3")?;
                self.forbid(self.parity_scan.is_some(), "parity_scan")?;
                self.forbid(self.symmetry_suite.is_some(), "symmetry_suite")
            }
            Experiment::Benchmark3 => {
                if self.benchmark3.is_none() {
                    return Err(Error::Config(
                        "experiment benchmark3 needs a `benchmark3` block".into(),
                    ));
                }
                self.forbid(self.model.is_some(), "model")?;
                self.forbid(self.drive.is_some(), "drive")?;
                self.forbid(self.parity_scan.is_some(), "parity_scan")?;
                self.forbid(self.symmetry_suite.is_some(), "symmetry_suite")
            }
            Experiment::ParityScan => {
                let model = self.model()?;
                if model.field().iter().any(|b| *b != 0.0) {
                    return Err(Error::Config(
                        "parity_scan needs a zero-field model".into(),
                    ));
                }
                self.forbid(self.drive.is_some(), "drive")?;
                self.forbid(self.benchmark3.is_some(), "benchmark3")?;
                self.forbid(self.symmetry_suite.is_some(), "symmetry_suite")
            }
            Experiment::SymmetrySuite => {
                self.forbid(self.model.is_some(), "model")?;
                self.forbid(self.drive.is_some(), "drive")?;
                self.forbid(self.benchmark3.is_some(), "benchmark3")?;
                self.forbid(self.parity_scan.is_some(), "parity_scan")
            }
        }
    }

    /// The config with every default made explicit, as embedded in
    /// reports. Parsing the result reproduces `self` exactly.
    pub fn resolved(&self) -> RunConfig {
        let mut out = self.clone();
        if out.experiment == Experiment::ParityScan && out.parity_scan.is_none() {
            out.parity_scan = Some(ParityScanConfig::default());
        }
        if out.experiment == Experiment::SymmetrySuite && out.symmetry_suite.is_none() {
            out.symmetry_suite = Some(SymmetrySuiteConfig::default());
        }
        out
    }
}

/// Parse and validate a JSON config document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let config: RunConfig =
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    config.validate()?;
    Ok(config.resolved())
}
