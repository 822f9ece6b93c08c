use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use fractalts_core::{AnalysisConfig, GeneratorSpec};

use crate::args::Format;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSpec {
    pub path: PathBuf,
    pub column: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date_column: Option<String>,
}

/// Grid flags after defaulting. Scale bounds that depend on the series
/// length stay `None` here; the per-series grids are recorded separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub q_min: f64,
    pub q_max: f64,
    pub q_step: f64,
    pub order: usize,
    pub tau_min: Option<usize>,
    pub tau_max: Option<usize>,
    pub tau_count: usize,
    pub fit_min: Option<usize>,
    pub fit_max: Option<usize>,
}

/// Everything needed to reproduce a run, minus the output location.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Invocation {
    Analyze {
        inputs: Vec<InputSpec>,
        grid: GridSpec,
        format: Format,
    },
    Fluct {
        input: InputSpec,
        grid: GridSpec,
        format: Format,
    },
    Xcorr {
        a: InputSpec,
        b: InputSpec,
        max_lag: usize,
        format: Format,
    },
    Generate {
        spec: GeneratorSpec,
        file_name: String,
        format: Format,
    },
}

impl Invocation {
    pub fn command(&self) -> &'static str {
        match self {
            Invocation::Analyze { .. } => "analyze",
            Invocation::Fluct { .. } => "fluct",
            Invocation::Xcorr { .. } => "xcorr",
            Invocation::Generate { .. } => "generate",
        }
    }

    pub fn inputs(&self) -> Vec<PathBuf> {
        match self {
            Invocation::Analyze { inputs, .. } => inputs.iter().map(|i| i.path.clone()).collect(),
            Invocation::Fluct { input, .. } => vec![input.path.clone()],
            Invocation::Xcorr { a, b, .. } => vec![a.path.clone(), b.path.clone()],
            Invocation::Generate { .. } => Vec::new(),
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Invocation::Generate { spec, .. } => Some(spec.seed()),
            _ => None,
        }
    }
}

/// Analysis grids actually used for one series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveConfig {
    pub series: String,
    pub length: usize,
    pub config: AnalysisConfig<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub inputs: Vec<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub invocation: Invocation,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub effective: Vec<EffectiveConfig>,
}

impl RunManifest {
    pub fn new(invocation: Invocation, effective: Vec<EffectiveConfig>) -> Self {
        Self {
            command: invocation.command().to_owned(),
            tool_version: TOOL_VERSION.to_owned(),
            inputs: invocation.inputs(),
            seed: invocation.seed(),
            invocation,
            effective,
        }
    }
}
