//! Command-line front end. Flags override the values of a `--config` file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use edcs_core::edcs::ParamMode;
use edcs_core::graph::io::format_edge_list;
use edcs_core::instances::RandomFamily;
use edcs_core::protocol::FallbackRule;

use crate::config::{ExperimentConfig, Instance, InstanceSource, SweepSettings, VerifierKind};
use crate::error::{io_err, LabError};
use crate::report::SummaryReport;
use crate::run::run_experiment;
use crate::sweep::sweep_experiment;
use crate::verify::verify_experiment;

#[derive(Debug, Parser)]
#[command(name = "edcs-lab", version, about = "EDCS matching protocol laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write an instance as an edge list plus a `.json` sidecar.
    Gen {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Edge-list path; the sidecar goes to `<out>.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the protocol over seeded trials.
    Run(ExperimentArgs),
    /// Run the protocol with analysis oracles attached.
    Verify {
        #[command(flatten)]
        common: ExperimentArgs,
        /// Oracle suite to run; repeat for several.
        #[arg(long = "suite", value_enum)]
        suites: Vec<VerifierKind>,
    },
    /// Communication growth over random graphs of fixed average degree.
    Sweep {
        #[command(flatten)]
        common: ExperimentArgs,
        /// Graph sizes, comma separated.
        #[arg(long, value_delimiter = ',')]
        ns: Vec<usize>,
        #[arg(long)]
        avg_degree: Option<f64>,
        /// Fitted exponent must lie in this range, given as `lo,hi`.
        #[arg(long, value_delimiter = ',', num_args = 2)]
        exponent_range: Option<Vec<f64>>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    ThreeLayer,
    FourLayer,
    Gnp,
    BipartiteGnp,
    PlantedMatching,
}

#[derive(Debug, Default, Args)]
pub struct InstanceArgs {
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Block size for layered families.
    #[arg(long)]
    pub m: Option<usize>,
    /// Vertex count for random families.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub density: Option<f64>,
    #[arg(long)]
    pub instance_seed: Option<u64>,
    /// Read the instance from an edge-list file.
    #[arg(long, conflicts_with = "family")]
    pub instance_file: Option<PathBuf>,
}

impl InstanceArgs {
    fn source(&self) -> Result<Option<InstanceSource>, LabError> {
        if let Some(path) = &self.instance_file {
            return Ok(Some(InstanceSource::File { path: path.clone() }));
        }
        let Some(family) = self.family else {
            return Ok(None);
        };
        let need = |v: Option<usize>, name: &str| v.ok_or_else(|| LabError::usage(format!("--{name} is required for this family")));
        let random = |family| -> Result<InstanceSource, LabError> {
            Ok(InstanceSource::Random {
                family,
                n: need(self.n, "n")?,
                density: self.density.ok_or_else(|| LabError::usage("--density is required for this family"))?,
                seed: self.instance_seed.unwrap_or(0),
            })
        };
        Ok(Some(match family {
            Family::ThreeLayer => InstanceSource::ThreeLayer { m: need(self.m, "m")? },
            Family::FourLayer => InstanceSource::FourLayer { m: need(self.m, "m")? },
            Family::Gnp => random(RandomFamily::Gnp)?,
            Family::BipartiteGnp => random(RandomFamily::BipartiteGnp)?,
            Family::PlantedMatching => random(RandomFamily::PlantedMatching)?,
        }))
    }
}

#[derive(Debug, Default, Args)]
pub struct ExperimentArgs {
    /// JSON experiment config; flags given alongside override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Master seed; trial seeds are derived from it.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub beta: Option<u64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Overrides the default `p = 1/k`.
    #[arg(long)]
    pub p: Option<f64>,
    /// Use the theory-mode parameter checks instead of the practical ones.
    #[arg(long)]
    pub theory: bool,
    /// Replace `H` with the circulant adversarial subgraph (layered instances).
    #[arg(long)]
    pub inject_adversarial_h: bool,
    /// Never forward all edges, whatever the local edge count.
    #[arg(long)]
    pub no_fallback: bool,
    #[arg(long)]
    pub min_ratio: Option<f64>,
    #[arg(long)]
    pub max_ratio: Option<f64>,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ExperimentArgs {
    fn config(&self) -> Result<ExperimentConfig, LabError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_path(path)?,
            None => ExperimentConfig {
                instance: None,
                ..ExperimentConfig::new(InstanceSource::ThreeLayer { m: 1 })
            },
        };
        if let Some(src) = self.instance.source()? {
            cfg.instance = Some(src);
        }
        let p = &mut cfg.protocol;
        if let Some(v) = self.k {
            p.k = v;
        }
        if let Some(v) = self.epsilon {
            p.epsilon = v;
        }
        if let Some(v) = self.beta {
            p.beta = v;
        }
        if let Some(v) = self.lambda {
            p.lambda = v;
        }
        if self.p.is_some() {
            p.p = self.p;
        }
        if self.theory {
            p.mode = ParamMode::Theory;
        }
        if self.inject_adversarial_h {
            p.inject_adversarial_h = true;
        }
        if self.no_fallback {
            p.fallback = FallbackRule::Never;
        }
        if let Some(v) = self.seed {
            cfg.master_seed = v;
        }
        if let Some(v) = self.trials {
            cfg.trials = v;
        }
        if self.min_ratio.is_some() {
            cfg.assertions.ratio_min = self.min_ratio;
        }
        if self.max_ratio.is_some() {
            cfg.assertions.ratio_max = self.max_ratio;
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        Ok(cfg)
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), LabError> {
    fs::write(path, text).map_err(io_err(path))
}

fn emit(report: &SummaryReport) -> Result<(), LabError> {
    let json = report.to_json();
    match &report.config.out {
        Some(path) => write_file(path, &json)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(json.as_bytes()).map_err(io_err("<stdout>"))?;
        }
    }
    for c in &report.checks {
        eprintln!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
    }
    if report.passed() {
        Ok(())
    } else {
        Err(LabError::Assertion(report.failed_checks().join(", ")))
    }
}

fn gen(instance: &InstanceArgs, out: &Path) -> Result<(), LabError> {
    let src = instance
        .source()?
        .ok_or_else(|| LabError::usage("gen needs --family"))?;
    if matches!(src, InstanceSource::File { .. }) {
        return Err(LabError::usage("gen cannot read --instance-file"));
    }
    let inst = Instance::load(&src)?;
    write_file(out, &format_edge_list(&inst.graph))?;
    let mut sidecar = out.as_os_str().to_owned();
    sidecar.push(".json");
    let meta = serde_json::to_string_pretty(&inst.meta).expect("metadata serializes");
    write_file(Path::new(&sidecar), &(meta + "\n"))
}

pub fn execute(cli: Cli) -> Result<(), LabError> {
    match cli.command {
        Command::Gen { instance, out } => gen(&instance, &out),
        Command::Run(args) => emit(&run_experiment(&args.config()?)?),
        Command::Verify { common, suites } => {
            let mut cfg = common.config()?;
            if !suites.is_empty() {
                cfg.verifiers = suites;
            }
            emit(&verify_experiment(&cfg)?)
        }
        Command::Sweep {
            common,
            ns,
            avg_degree,
            exponent_range,
        } => {
            let mut cfg = common.config()?;
            if !ns.is_empty() || avg_degree.is_some() {
                let base = cfg.sweep.take();
                cfg.sweep = Some(SweepSettings {
                    ns: if ns.is_empty() { base.as_ref().map(|s| s.ns.clone()).unwrap_or_default() } else { ns },
                    avg_degree: avg_degree.or(base.as_ref().map(|s| s.avg_degree)).unwrap_or(32.0),
                    family: base.map_or(RandomFamily::Gnp, |s| s.family),
                });
            }
            if let Some(r) = exponent_range {
                cfg.assertions.exponent_range = Some((r[0], r[1]));
            }
            emit(&sweep_experiment(&cfg)?)
        }
    }
}

/// Parses `args`, runs the command, and returns the process exit code:
/// 0 success, 1 assertion failure, 2 usage or configuration error, 3 IO error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("edcs-lab: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_override_defaults() {
        let cli = Cli::try_parse_from([
            "edcs-lab", "run", "--family", "three-layer", "--m", "5", "--k", "3", "--beta", "6", "--no-fallback",
        ])
        .unwrap();
        let Command::Run(args) = cli.command else { panic!() };
        let cfg = args.config().unwrap();
        assert_eq!(cfg.instance, Some(InstanceSource::ThreeLayer { m: 5 }));
        assert_eq!((cfg.protocol.k, cfg.protocol.beta), (3, 6));
        assert_eq!(cfg.protocol.fallback, FallbackRule::Never);
    }

    #[test]
    fn random_family_needs_n_and_density() {
        assert_eq!(main_with_args(["edcs-lab", "run", "--family", "gnp", "--n", "10"]), 2);
        assert_eq!(main_with_args(["edcs-lab", "run", "--bogus"]), 2);
    }
}
