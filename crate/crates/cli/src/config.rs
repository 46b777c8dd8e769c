//! Scenario configuration files.
//!
//! One JSON document per scenario:
//!
//! ```json
//! {
//!   "id": "example1",
//!   "kind": "cm-test",
//!   "observation": {"lo": 1, "hi": 100},
//!   "prior": [0.8, 0.2],
//!   "classes": [{"center": 30, "stddev": 15}, {"center": 70, "stddev": 10}],
//!   "start": [50],
//!   "max_iters": 20,
//!   "expectations": [{"quantity": "dividing_point_1", "value": 54, "origin": "published"}]
//! }
//! ```

use serde::{Deserialize, Serialize};

use semchan_core::mixture::{CmEmSettings, MixtureParams};
use semchan_core::{Distribution, ParametricTruth, Support};

use crate::error::CliError;

/// Integer grid `lo..=hi` or explicit points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SupportSpec {
    Range { lo: i64, hi: i64 },
    Points { points: Vec<f64> },
}

impl SupportSpec {
    pub fn build(&self) -> Result<Support, CliError> {
        match self {
            SupportSpec::Range { lo, hi } => Support::integer_range(*lo, *hi),
            SupportSpec::Points { points } => Support::new(points.clone()),
        }
        .map_err(|e| CliError::Config(format!("support: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianSpec {
    pub center: f64,
    pub stddev: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub weight: f64,
    pub center: f64,
    pub stddev: f64,
}

/// A distribution over a support: explicit weights (normalized on load) or a
/// weighted mixture of discretized Gaussians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DistSpec {
    Weights(Vec<f64>),
    Mixture { mixture: Vec<ComponentSpec> },
}

impl DistSpec {
    pub fn build(&self, support: &Support) -> Result<Distribution, CliError> {
        match self {
            DistSpec::Weights(w) => {
                if w.len() != support.len() {
                    return Err(CliError::Config(format!(
                        "{} weights for a support of {} points",
                        w.len(),
                        support.len()
                    )));
                }
                Distribution::from_weights(support.clone(), w.clone())
                    .map_err(|e| CliError::Config(format!("weights: {e}")))
            }
            DistSpec::Mixture { mixture } => {
                let params = mixture_params(mixture)?;
                semchan_core::mixture::predicted_mixture(&params, support)
                    .map_err(|e| CliError::Config(format!("mixture: {e}")))
            }
        }
    }
}

pub fn mixture_params(spec: &[ComponentSpec]) -> Result<MixtureParams, CliError> {
    let total: f64 = spec.iter().map(|c| c.weight).sum();
    if !(total > 0.0) {
        return Err(CliError::Config("mixture weights must be positive".into()));
    }
    MixtureParams::from_triples(
        &spec
            .iter()
            .map(|c| (c.weight / total, c.center, c.stddev))
            .collect::<Vec<_>>(),
    )
    .map_err(|e| CliError::Config(format!("mixture: {e}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `|actual − value| ≤ tol`
    Approx,
    /// `actual ≤ value + tol`
    AtMost,
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    /// A published reference value.
    Published,
    /// Worked out independently (hand evaluation, oracle script).
    Derived,
    /// An algebraic identity or self-consistency check.
    Identity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub quantity: String,
    pub value: f64,
    #[serde(default)]
    pub tol: f64,
    #[serde(default = "default_comparison")]
    pub comparison: Comparison,
    pub origin: Origin,
}

fn default_comparison() -> Comparison {
    Comparison::Approx
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountsSpec {
    pub np: u64,
    pub nc: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestSpec {
    pub sensitivity: f64,
    pub specificity: f64,
    pub prevalence: f64,
}

/// Observation-grid partition problem shared by `cm-test` and `cm-estimate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmSpec {
    pub observation: SupportSpec,
    pub prior: Vec<f64>,
    pub classes: Vec<GaussianSpec>,
    pub start: Vec<f64>,
    #[serde(default = "default_cm_iters")]
    pub max_iters: usize,
}

fn default_cm_iters() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScenarioKind {
    /// Truth function and prior in, semantic likelihood and logical
    /// probability out, then back again.
    Bayes3Demo {
        support: SupportSpec,
        prior: DistSpec,
        truth: ParametricTruth,
    },
    /// Position estimate from a reading with Gaussian error and a prior.
    GpsDemo {
        support: SupportSpec,
        prior: DistSpec,
        reading: f64,
        stddev: f64,
    },
    /// Single-label selection boundary for a family of shifted priors
    /// `P(x) ∝ 1 − 1/(1 + exp(−rate (x − c)))`.
    OldAge {
        support: SupportSpec,
        truth: ParametricTruth,
        prior_rate: f64,
        prior_centers: Vec<f64>,
    },
    /// Two-class partition iteration.
    CmTest(CmSpec),
    /// Multi-class partition iteration.
    CmEstimate(CmSpec),
    /// Mixture fitting.
    CmEm {
        support: SupportSpec,
        real: Vec<ComponentSpec>,
        start: Vec<ComponentSpec>,
        #[serde(default)]
        settings: CmEmSettings,
        #[serde(default = "default_snapshot")]
        snapshot_iteration: usize,
    },
    /// Confirmation measures from counts and/or test characteristics.
    Confirm {
        #[serde(default)]
        counts: Vec<CountsSpec>,
        #[serde(default)]
        tests: Vec<TestSpec>,
    },
}

fn default_snapshot() -> usize {
    5
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Bayes3Demo { .. } => "bayes3-demo",
            ScenarioKind::GpsDemo { .. } => "gps-demo",
            ScenarioKind::OldAge { .. } => "old-age",
            ScenarioKind::CmTest(_) => "cm-test",
            ScenarioKind::CmEstimate(_) => "cm-estimate",
            ScenarioKind::CmEm { .. } => "cm-em",
            ScenarioKind::Confirm { .. } => "confirm",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub id: String,
    #[serde(default)]
    pub description: String,
    #[serde(flatten)]
    pub kind: ScenarioKind,
    #[serde(default)]
    pub expectations: Vec<Expectation>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Cross-field checks that the schema alone cannot express.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.id.is_empty()
            || !self
                .id
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
        {
            return Err(CliError::Config(format!(
                "id {:?} must be non-empty and use only [A-Za-z0-9_-]",
                self.id
            )));
        }
        for e in &self.expectations {
            if !(e.tol >= 0.0) || !e.value.is_finite() {
                return Err(CliError::Config(format!(
                    "expectation {}: value must be finite and tol non-negative",
                    e.quantity
                )));
            }
        }
        match &self.kind {
            ScenarioKind::CmTest(cm) | ScenarioKind::CmEstimate(cm) => {
                if cm.prior.len() != cm.classes.len() {
                    return Err(CliError::Config(format!(
                        "prior has {} entries for {} classes",
                        cm.prior.len(),
                        cm.classes.len()
                    )));
                }
                if cm.start.len() + 1 != cm.classes.len() {
                    return Err(CliError::Config(format!(
                        "start needs {} dividing points for {} classes",
                        cm.classes.len().saturating_sub(1),
                        cm.classes.len()
                    )));
                }
                if cm.max_iters == 0 {
                    return Err(CliError::Config("max_iters must be at least 1".into()));
                }
            }
            ScenarioKind::CmEm { real, start, .. } => {
                if real.is_empty() || start.is_empty() {
                    return Err(CliError::Config("real and start need components".into()));
                }
            }
            ScenarioKind::Confirm { counts, tests } => {
                if counts.is_empty() && tests.is_empty() {
                    return Err(CliError::Config("confirm needs counts or tests".into()));
                }
            }
            ScenarioKind::OldAge { prior_centers, .. } => {
                if prior_centers.is_empty() {
                    return Err(CliError::Config("prior_centers is empty".into()));
                }
            }
            ScenarioKind::Bayes3Demo { .. } | ScenarioKind::GpsDemo { .. } => {}
        }
        Ok(())
    }
}
