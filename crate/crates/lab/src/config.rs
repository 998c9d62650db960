//! Experiment configuration: one JSON document, with CLI flags layered on top.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use edcs_core::edcs::{EdcsParams, ParamMode};
use edcs_core::graph::io::read_edge_list;
use edcs_core::instances::{
    adversarial_h, gen_four_layer, gen_random, gen_three_layer, InstanceMeta, LayeredInstance, RandomFamily,
};
use edcs_core::protocol::{FallbackRule, ProtocolConfig};
use edcs_core::{EdgeId, Graph};
use serde::{Deserialize, Serialize};

use crate::error::{io_err, LabError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InstanceSource {
    ThreeLayer { m: usize },
    FourLayer { m: usize },
    Random { family: RandomFamily, n: usize, density: f64, seed: u64 },
    File { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProtocolSettings {
    pub k: usize,
    pub epsilon: f64,
    pub lambda: f64,
    pub beta: u64,
    pub mode: ParamMode,
    pub p: Option<f64>,
    pub fallback: FallbackRule,
    pub inject_adversarial_h: bool,
}

impl Default for ProtocolSettings {
    fn default() -> Self {
        Self {
            k: 2,
            epsilon: 0.1,
            lambda: 0.25,
            beta: 8,
            mode: ParamMode::Practical,
            p: None,
            fallback: FallbackRule::default(),
            inject_adversarial_h: false,
        }
    }
}

impl ProtocolSettings {
    pub fn params(&self) -> Result<EdcsParams, LabError> {
        let r = match self.mode {
            ParamMode::Theory => EdcsParams::theory(self.epsilon, self.lambda, self.beta),
            ParamMode::Practical => EdcsParams::practical(self.epsilon, self.lambda, self.beta),
        };
        r.map_err(|e| LabError::usage(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum VerifierKind {
    /// Peeling invariants, plus the `(2/3 - ε)` size bound under injected `H`.
    Peeling,
    /// Exact expectation identity by enumeration over `M'`.
    Expectation,
    /// `y` feasibility, blossom check, and integral extraction.
    YChain,
    /// Exhaustive `|M| + ½ μ(G - V(M))` search on a layered instance.
    AugmentBound,
    /// Per-coordinate self-bounding checks.
    SelfBounding,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Assertions {
    pub ratio_min: Option<f64>,
    pub ratio_max: Option<f64>,
    /// Allowed range of the fitted growth exponent in a sweep.
    pub exponent_range: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSettings {
    pub ns: Vec<usize>,
    /// Expected average degree; the edge probability is `avg_degree/(n - 1)`.
    pub avg_degree: f64,
    #[serde(default = "default_sweep_family")]
    pub family: RandomFamily,
}

fn default_sweep_family() -> RandomFamily {
    RandomFamily::Gnp
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Required by `run` and `verify`; a sweep generates its own graphs.
    #[serde(default)]
    pub instance: Option<InstanceSource>,
    #[serde(default)]
    pub protocol: ProtocolSettings,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub verifiers: Vec<VerifierKind>,
    #[serde(default)]
    pub assertions: Assertions,
    #[serde(default)]
    pub sweep: Option<SweepSettings>,
    /// Assignments and probed coordinates per instance for the
    /// self-bounding verifier.
    #[serde(default = "default_self_bounding")]
    pub self_bounding: (usize, usize),
}

fn default_trials() -> usize {
    1
}

fn default_self_bounding() -> (usize, usize) {
    (20, 50)
}

impl ExperimentConfig {
    pub fn new(instance: InstanceSource) -> Self {
        Self {
            instance: Some(instance),
            protocol: ProtocolSettings::default(),
            trials: 1,
            master_seed: 0,
            out: None,
            verifiers: Vec::new(),
            assertions: Assertions::default(),
            sweep: None,
            self_bounding: default_self_bounding(),
        }
    }

    pub fn from_path(path: &Path) -> Result<Self, LabError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let cfg: Self = serde_json::from_str(&text).map_err(|e| LabError::Input {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), LabError> {
        if self.trials == 0 {
            return Err(LabError::usage("trial count must be at least 1"));
        }
        if let Some(InstanceSource::File { path }) = &self.instance {
            if !path.exists() {
                return Err(LabError::Io {
                    path: path.clone(),
                    source: std::io::Error::new(std::io::ErrorKind::NotFound, "instance file not found"),
                });
            }
        }
        if let Some(s) = &self.sweep {
            if s.ns.is_empty() {
                return Err(LabError::usage("sweep needs at least one n"));
            }
        }
        self.protocol.params()?;
        Ok(())
    }

    pub fn instance(&self) -> Result<&InstanceSource, LabError> {
        self.instance.as_ref().ok_or_else(|| LabError::usage("no instance given"))
    }

    /// Protocol config for one trial seed; `injected` is shared across trials.
    pub fn protocol_config(&self, seed: u64, injected: Option<&[EdgeId]>) -> Result<ProtocolConfig, LabError> {
        let s = &self.protocol;
        let mut cfg = ProtocolConfig::new(s.k, s.params()?, seed);
        cfg.p = s.p;
        cfg.fallback = s.fallback;
        cfg.injected_h = injected.map(<[EdgeId]>::to_vec);
        Ok(cfg)
    }
}

/// A loaded instance, with its layout when it came from a layered generator.
pub struct Instance {
    pub graph: Graph,
    pub layered: Option<LayeredInstance>,
    pub meta: Option<InstanceMeta>,
}

impl Instance {
    pub fn load(source: &InstanceSource) -> Result<Self, LabError> {
        let usage = |e: edcs_core::instances::InstanceError| LabError::usage(e.to_string());
        Ok(match source {
            InstanceSource::ThreeLayer { m } => Self::layered(gen_three_layer(*m).map_err(usage)?),
            InstanceSource::FourLayer { m } => Self::layered(gen_four_layer(*m).map_err(usage)?),
            InstanceSource::Random { family, n, density, seed } => Self {
                graph: gen_random(*family, *n, *density, *seed).map_err(usage)?,
                layered: None,
                meta: Some(InstanceMeta::Random {
                    family: *family,
                    n: *n,
                    density: *density,
                    seed: *seed,
                }),
            },
            InstanceSource::File { path } => {
                let f = fs::File::open(path).map_err(io_err(path))?;
                let graph = read_edge_list(BufReader::new(f)).map_err(|e| LabError::Input {
                    path: path.clone(),
                    msg: e.to_string(),
                })?;
                Self {
                    graph,
                    layered: None,
                    meta: None,
                }
            }
        })
    }

    fn layered(inst: LayeredInstance) -> Self {
        Self {
            graph: inst.graph.clone(),
            meta: Some(InstanceMeta::Layered(inst.spec.clone())),
            layered: Some(inst),
        }
    }

    /// The circulant adversarial `H` for the configured `β` and `k`.
    pub fn adversarial_h(&self, settings: &ProtocolSettings) -> Result<Vec<EdgeId>, LabError> {
        let inst = self
            .layered
            .as_ref()
            .ok_or_else(|| LabError::usage("--inject-adversarial-h needs a layered instance"))?;
        let h = adversarial_h(&self.graph, &inst.spec, settings.beta, Some(settings.k))
            .map_err(|e| LabError::usage(e.to_string()))?;
        Ok(h.ids())
    }
}
