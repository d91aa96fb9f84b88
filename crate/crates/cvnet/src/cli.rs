// Copyright 2026 The cvnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Command-line interface.

use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cvnet_core::emergent::{correlation_network, StateTag};
use cvnet_core::ensemble::Subtraction;
use cvnet_core::gaussian::{
    cluster_covariance, gaussian_emergent, gaussian_photon_covariance, pair_contractions,
    SqueezingParam,
};
use cvnet_core::graph::{generate, highest_degree_node, ImprintedNetwork, ModelSpec};
use cvnet_core::seed::{self, Stream};
use cvnet_core::wick::{locality_filter, subtracted_photon_covariance, SubtractionSpec};
use rand::Rng;

use crate::config::{ClusteringArg, ModelConfig, RunConfig, SubtractionArg};
use crate::io::{
    read_edge_list, write_covariance_csv, write_edge_list, write_emergent_csv, EmergentJson,
};
use crate::{output, report, runner, CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "cvnet", version, about = "Emergent correlation networks of photon-subtracted cluster states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an imprinted network and write it as an edge list.
    Generate(GenerateArgs),
    /// Run an ensemble and write a run directory.
    Run(RunArgs),
    /// Print the moment table of a run directory.
    Report(ReportArgs),
    /// Compute the emergent networks of one edge list.
    Emergent(EmergentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Ba,
    Ws,
    Er,
    Complete,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// Number of nodes.
    #[arg(long)]
    pub n: Option<usize>,
    /// Links per new node (ba).
    #[arg(long)]
    pub m: Option<usize>,
    /// Neighbours on each side in the ring (ws).
    #[arg(long)]
    pub k: Option<usize>,
    /// Rewiring (ws) or link (er) probability.
    #[arg(long)]
    pub p: Option<f64>,
}

impl ModelArgs {
    fn model_config(&self, kind: ModelKind) -> Result<ModelConfig> {
        let need = |v: Option<usize>, flag: &str| {
            v.ok_or_else(|| CliError::Config(format!("--model {kind:?} requires --{flag}").to_lowercase()))
        };
        let need_p = || {
            self.p
                .ok_or_else(|| CliError::Config(format!("--model {kind:?} requires --p").to_lowercase()))
        };
        Ok(match kind {
            ModelKind::Ba => ModelConfig::Ba { m: need(self.m, "m")? },
            ModelKind::Ws => ModelConfig::Ws {
                k: need(self.k, "k")?,
                p: need_p()?,
            },
            ModelKind::Er => ModelConfig::Er { p: need_p()? },
            ModelKind::Complete => ModelConfig::Complete,
        })
    }

    fn any_parameter(&self) -> bool {
        self.m.is_some() || self.k.is_some() || self.p.is_some()
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON configuration or a previous run's manifest. Flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub squeezing_db: Option<f64>,
    /// none, hub:<photons> or random:<photons>.
    #[arg(long, alias = "subtraction")]
    pub subtract: Option<SubtractionArg>,
    #[arg(long)]
    pub realizations: Option<usize>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Compute every covariance entry without the locality shortcut.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, value_enum)]
    pub clustering: Option<ClusteringArg>,
    #[arg(long)]
    pub bootstrap_resamples: Option<usize>,
    /// Run directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Run directory.
    pub dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct EmergentArgs {
    /// Edge list file.
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long, default_value_t = 15.0)]
    pub squeezing_db: f64,
    /// none, hub:<photons> or random:<photons>.
    #[arg(long, alias = "subtraction", default_value = "none")]
    pub subtract: SubtractionArg,
    /// Seed for choosing a random subtraction node.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub exact: bool,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| CliError::io(path, e)
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<ImprintedNetwork> {
    let kind = args
        .model
        .model
        .ok_or_else(|| CliError::Config("--model is required".into()))?;
    let n = args
        .model
        .n
        .ok_or_else(|| CliError::Config("--n is required".into()))?;
    let model = args.model.model_config(kind)?;
    let net = generate(&ModelSpec::new(model.into(), n, args.seed))?;
    match &args.out {
        Some(path) => {
            let mut w = std::io::BufWriter::new(std::fs::File::create(path).map_err(io_err(path))?);
            write_edge_list(&net, &mut w).map_err(io_err(path))?;
            w.flush().map_err(io_err(path))?;
        }
        None => match write_edge_list(&net, std::io::stdout().lock()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                return Err(CliError::io("<stdout>", e))
            }
            _ => {}
        },
    }
    Ok(net)
}

/// Resolves the configuration from `--config` and override flags.
pub fn resolve_config(args: &RunArgs) -> Result<RunConfig> {
    let mut config = match &args.config {
        Some(path) => {
            let mut c = RunConfig::load(path)?;
            if let Some(kind) = args.model.model {
                c.model = args.model.model_config(kind)?;
            } else if args.model.any_parameter() {
                let kind = match c.model {
                    ModelConfig::Ba { .. } => ModelKind::Ba,
                    ModelConfig::Ws { .. } => ModelKind::Ws,
                    ModelConfig::Er { .. } => ModelKind::Er,
                    ModelConfig::Complete => ModelKind::Complete,
                };
                let mut merged = args.model.clone();
                match c.model {
                    ModelConfig::Ba { m } => merged.m = merged.m.or(Some(m)),
                    ModelConfig::Ws { k, p } => {
                        merged.k = merged.k.or(Some(k));
                        merged.p = merged.p.or(Some(p));
                    }
                    ModelConfig::Er { p } => merged.p = merged.p.or(Some(p)),
                    ModelConfig::Complete => {}
                }
                c.model = merged.model_config(kind)?;
            }
            if let Some(n) = args.model.n {
                c.n = n;
            }
            c
        }
        None => {
            let kind = args
                .model
                .model
                .ok_or_else(|| CliError::Config("--model is required without --config".into()))?;
            let n = args
                .model
                .n
                .ok_or_else(|| CliError::Config("--n is required without --config".into()))?;
            RunConfig::new(args.model.model_config(kind)?, n)
        }
    };
    if let Some(v) = args.seed {
        config.master_seed = v;
    }
    if let Some(v) = args.squeezing_db {
        config.squeezing_db = v;
    }
    if let Some(v) = args.subtract {
        config.subtraction = v;
    }
    if let Some(v) = args.realizations {
        config.realizations = v;
    }
    if let Some(v) = args.workers {
        if v == 0 {
            return Err(CliError::Config("--workers must be at least 1".into()));
        }
        config.workers = Some(v);
    }
    if args.exact {
        config.exact = true;
    }
    if let Some(v) = args.clustering {
        config.clustering = v;
    }
    if let Some(v) = args.bootstrap_resamples {
        config.bootstrap_resamples = v;
    }
    if let Some(v) = &args.out {
        config.out = Some(v.display().to_string());
    }
    Ok(config)
}

/// Runs the configured ensemble and writes the run directory.
pub fn cmd_run(config: &RunConfig) -> Result<output::MomentsFile> {
    let out = config
        .out
        .as_ref()
        .ok_or_else(|| CliError::Config("an output directory (--out) is required".into()))?;
    let spec = config.experiment()?;
    let workers = config.workers.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    let ensemble = runner::run_parallel(&spec, workers)?;
    output::write_run(Path::new(out), config, &ensemble)
}

pub fn cmd_report(args: &ReportArgs) -> Result<String> {
    let (manifest, moments) = report::load_run(&args.dir)?;
    Ok(report::render(&manifest, &moments))
}

fn write_file(path: &Path, write: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path).map_err(io_err(path))?);
    write(&mut w).map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

fn write_emergent(dir: &Path, stem: &str, net: &cvnet_core::emergent::EmergentNetwork) -> Result<()> {
    write_file(&dir.join(format!("{stem}.csv")), |w| write_emergent_csv(net, w))?;
    let json = dir.join(format!("{stem}.json"));
    write_file(&json, |w| {
        serde_json::to_writer(&mut *w, &EmergentJson::from(net))?;
        writeln!(w)
    })
}

/// Writes `covariance.csv`, `gaussian.{csv,json}` and, with a subtraction,
/// `subtracted.{csv,json}`.
pub fn cmd_emergent(args: &EmergentArgs) -> Result<()> {
    let file = std::fs::File::open(&args.edges).map_err(io_err(&args.edges))?;
    let net = read_edge_list(BufReader::new(file))
        .map_err(|msg| CliError::format(&args.edges, msg))?;
    let s = SqueezingParam::from_db(args.squeezing_db)?;
    std::fs::create_dir_all(&args.out).map_err(io_err(&args.out))?;

    let cov = cluster_covariance(&net, s);
    write_file(&args.out.join("covariance.csv"), |w| write_covariance_csv(&cov, w))?;
    write_emergent(&args.out, "gaussian", &gaussian_emergent(&net, s))?;

    let source = match args.subtract.0 {
        Subtraction::None => None,
        Subtraction::Hub { .. } => highest_degree_node(&net),
        Subtraction::RandomNode { .. } if net.node_count() > 0 => {
            Some(seed::rng(args.seed, Stream::SubtractionNode).random_range(0..net.node_count()))
        }
        Subtraction::RandomNode { .. } => None,
    };
    if let (Some(source), Some(photons)) = (source, args.subtract.0.photons()) {
        let table = pair_contractions(&cov)?;
        let filter = if args.exact {
            None
        } else {
            Some(locality_filter(&net, source)?)
        };
        let sub = subtracted_photon_covariance(
            &table,
            SubtractionSpec::new(source, photons),
            &gaussian_photon_covariance(&net, s),
            filter.as_ref(),
        )?;
        let em = correlation_network(&sub, StateTag::Subtracted { mode: source, photons })?;
        write_emergent(&args.out, "subtracted", &em)?;
    }
    Ok(())
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Generate(args) => cmd_generate(args).map(|_| ()),
        Command::Run(args) => {
            let config = resolve_config(args)?;
            let moments = cmd_run(&config)?;
            let c = &moments.census;
            println!(
                "wrote {} ({} of {} realizations completed, {} skipped)",
                config.out.as_deref().unwrap_or(""),
                c.completed,
                c.requested,
                c.skipped
            );
            Ok(())
        }
        Command::Report(args) => {
            print!("{}", cmd_report(args)?);
            Ok(())
        }
        Command::Emergent(args) => cmd_emergent(args),
    }
}
