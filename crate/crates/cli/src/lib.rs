//! The `clustertree` command line.
//!
//! Subcommands read one input file and write one output, to `--out` or
//! standard output:
//!
//! | subcommand   | input              | output                |
//! |--------------|--------------------|-----------------------|
//! | `tree`       | points CSV         | tree JSON             |
//! | `cut`        | tree JSON          | labels CSV            |
//! | `prune`      | tree JSON          | pruned tree JSON      |
//! | `dendrogram` | tree JSON          | SVG                   |
//! | `synth`      | density JSON       | points CSV            |
//! | `validate`   | experiment JSON    | report JSON           |
//!
//! Exit codes: 0 success, 2 usage, 3 data, 4 numeric or parameter error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use clustertree::io::{
    labels_to_csv, points_to_csv, read_points_csv, tree_from_json, tree_to_json,
};
use clustertree::scales::c_delta_from;
use clustertree::synthetic::DensitySpec;
use clustertree::{
    build_tree, prune, ClusterTree, EdgeRule, Error, PruneOptions, Rule, ScaleParams,
};

pub mod config;
pub mod error;
pub mod experiments;
pub mod svg;

pub use config::RunConfig;
pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "clustertree",
    version,
    about = "Cluster trees from point samples"
)]
pub struct Cli {
    /// Config file (.toml or .json) with flag names as keys. Defaults to
    /// $CLUSTERTREE_CONFIG.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub flags: RunConfig,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a cluster tree from a points CSV (needs --k).
    Tree { input: Option<PathBuf> },
    /// Label points by component at --cut-r or at r(--cut-lambda).
    Cut { input: Option<PathBuf> },
    /// Prune a tree with --eps-tilde, --delta and --c0.
    Prune { input: Option<PathBuf> },
    /// Draw a tree as an SVG dendrogram.
    Dendrogram { input: Option<PathBuf> },
    /// Sample --n points from a density JSON.
    Synth { input: Option<PathBuf> },
    /// Run an experiment file and write its report.
    Validate { input: Option<PathBuf> },
}

impl Command {
    fn input(&self) -> Option<&PathBuf> {
        match self {
            Command::Tree { input }
            | Command::Cut { input }
            | Command::Prune { input }
            | Command::Dendrogram { input }
            | Command::Synth { input }
            | Command::Validate { input } => input.as_ref(),
        }
    }
}

/// Resolves the configuration and runs the subcommand.
pub fn run(cli: Cli) -> CliResult<()> {
    let file = match RunConfig::default_path(cli.config.clone()) {
        Some(path) => RunConfig::load(&path)?,
        None => RunConfig::default(),
    };
    let flags = RunConfig {
        input: cli.command.input().cloned(),
        ..cli.flags.clone()
    };
    let cfg = flags.over(file);
    let output = match cli.command {
        Command::Tree { .. } => cmd_tree(&cfg)?,
        Command::Cut { .. } => cmd_cut(&cfg)?,
        Command::Prune { .. } => cmd_prune(&cfg)?,
        Command::Dendrogram { .. } => cmd_dendrogram(&cfg)?,
        Command::Synth { .. } => cmd_synth(&cfg)?,
        Command::Validate { .. } => cmd_validate(&cfg)?,
    };
    write_output(cfg.out.as_deref(), &output)
}

fn write_output(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Data(format!("stdout: {e}"))),
    }
}

fn input_path(cfg: &RunConfig) -> CliResult<&Path> {
    cfg.input
        .as_deref()
        .ok_or_else(|| CliError::Usage("an input file is required".into()))
}

fn read_input(cfg: &RunConfig) -> CliResult<String> {
    let path = input_path(cfg)?;
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn read_tree(cfg: &RunConfig) -> CliResult<ClusterTree> {
    Ok(tree_from_json(&read_input(cfg)?)?)
}

/// Scale parameters for a stored tree. Settings come from flags, then the
/// tree's provenance, then defaults (`delta = 0.1`, `C_delta = 0`,
/// `eps_tilde = 0`).
pub fn tree_params(cfg: &RunConfig, tree: &ClusterTree) -> CliResult<ScaleParams> {
    let meta = tree.meta();
    let prov = &tree.provenance;
    let delta = cfg.delta.or(prov.delta).unwrap_or(0.1);
    let c_delta = match cfg.c0 {
        Some(c0) => c_delta_from(c0, delta),
        None => prov.c_delta.unwrap_or(0.0),
    };
    let params = ScaleParams {
        n: tree.n(),
        k: cfg.k.unwrap_or(meta.k),
        d: meta.d,
        alpha: cfg.alpha.unwrap_or(meta.alpha),
        delta,
        c_delta,
        eps_tilde: cfg.eps_tilde.or(prov.eps_tilde).unwrap_or(0.0),
    };
    params.validate()?;
    Ok(params)
}

pub fn cmd_tree(cfg: &RunConfig) -> CliResult<String> {
    let path = input_path(cfg)?;
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let ps = read_points_csv(std::io::BufReader::new(file))?;
    let k = cfg.require_k()?;
    let rule = EdgeRule::new(cfg.rule.unwrap_or(Rule::Rsl), cfg.alpha.unwrap_or(1.0))?;
    let mut tree = build_tree(&ps, k, &rule)?;
    tree.provenance.seed = cfg.seed;
    if cfg.delta.is_some() || cfg.c0.is_some() {
        let delta = cfg.delta.unwrap_or(0.1);
        tree.provenance.delta = Some(delta);
        tree.provenance.c_delta = Some(c_delta_from(cfg.c0.unwrap_or(0.0), delta));
    }
    Ok(tree_to_json(&tree)?)
}

pub fn cmd_cut(cfg: &RunConfig) -> CliResult<String> {
    let tree = read_tree(cfg)?;
    let r = match (cfg.cut_r, cfg.cut_lambda) {
        (Some(r), None) => r,
        (None, Some(lambda)) => {
            let p = tree_params(cfg, &tree)?;
            if p.k != tree.meta().k {
                return Err(Error::ParameterMismatch {
                    field: "k",
                    tree: tree.meta().k.to_string(),
                    params: p.k.to_string(),
                }
                .into());
            }
            p.r_of_lambda(lambda)?
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --cut-r and --cut-lambda".into(),
            ))
        }
    };
    Ok(labels_to_csv(&tree.labels_at(r)?))
}

pub fn cmd_prune(cfg: &RunConfig) -> CliResult<String> {
    let tree = read_tree(cfg)?;
    if cfg.eps_tilde.is_none() {
        return Err(CliError::Usage("--eps-tilde is required".into()));
    }
    let p = tree_params(cfg, &tree)?;
    let options = PruneOptions {
        prune_low_levels: cfg.prune_low_levels.unwrap_or(false),
    };
    let pruned = prune(&tree, &p, options)?;
    Ok(tree_to_json(pruned.tree())?)
}

pub fn cmd_dendrogram(cfg: &RunConfig) -> CliResult<String> {
    let tree = read_tree(cfg)?;
    svg::render(&tree, cfg.max_points.unwrap_or(svg::DEFAULT_MAX_POINTS))
}

pub fn cmd_synth(cfg: &RunConfig) -> CliResult<String> {
    let spec: DensitySpec = serde_json::from_str(&read_input(cfg)?)
        .map_err(|e| CliError::Data(format!("density file: {e}")))?;
    let n = cfg
        .n
        .ok_or_else(|| CliError::Usage("--n is required".into()))?;
    let ps = spec.sample(n, cfg.seed.unwrap_or(0))?;
    Ok(points_to_csv(&ps))
}

pub fn cmd_validate(cfg: &RunConfig) -> CliResult<String> {
    let spec = experiments::parse(&read_input(cfg)?)?;
    let report = experiments::run(&spec, cfg)?;
    let mut s = serde_json::to_string_pretty(&report).map_err(|e| CliError::Data(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
