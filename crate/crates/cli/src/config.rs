//! Run configuration: command-line flags layered over an optional TOML or
//! JSON file whose keys are the flag names.
//!
//! ```toml
//! k = 10
//! alpha = 1.4142135623730951
//! rule = "mknn"
//! eps-tilde = 0.5
//! out = "tree.json"
//! ```
//!
//! Flags win over the file. The file comes from `--config`, or else from
//! the path in `CLUSTERTREE_CONFIG`; the variable sets nothing else.

use std::path::{Path, PathBuf};

use clap::Args;
use clustertree::Rule;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const CONFIG_ENV: &str = "CLUSTERTREE_CONFIG";

/// Every setting a subcommand may read. Unset fields fall back to the
/// subcommand's default or are required by it.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    /// Input file (points CSV, tree JSON, density or experiment JSON).
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,

    /// Neighborhood size; r_k counts the point itself.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,

    /// Edge length multiplier, at least 1.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,

    /// Edge rule.
    #[arg(long, global = true, value_parser = parse_rule)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<Rule>,

    /// Confidence parameter in (0, 1).
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,

    /// Absolute constant C_o; C_delta = 2 C_o ln(2/delta).
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0: Option<f64>,

    /// Pruning tolerance.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_tilde: Option<f64>,

    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    /// Reconnect all components at radii above the low-level cutoff.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prune_low_levels: Option<bool>,

    /// Cut at this radius.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut_r: Option<f64>,

    /// Cut at the radius r(lambda) of this density level.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut_lambda: Option<f64>,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,

    /// Sample size for `synth`.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,

    /// Largest tree `dendrogram` will draw.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_points: Option<usize>,
}

fn parse_rule(s: &str) -> Result<Rule, String> {
    s.parse::<Rule>().map_err(|e| e.to_string())
}

impl RunConfig {
    /// `self` with unset fields taken from `file`.
    pub fn over(self, file: RunConfig) -> RunConfig {
        RunConfig {
            input: self.input.or(file.input),
            k: self.k.or(file.k),
            alpha: self.alpha.or(file.alpha),
            rule: self.rule.or(file.rule),
            delta: self.delta.or(file.delta),
            c0: self.c0.or(file.c0),
            eps_tilde: self.eps_tilde.or(file.eps_tilde),
            seed: self.seed.or(file.seed),
            prune_low_levels: self.prune_low_levels.or(file.prune_low_levels),
            cut_r: self.cut_r.or(file.cut_r),
            cut_lambda: self.cut_lambda.or(file.cut_lambda),
            out: self.out.or(file.out),
            n: self.n.or(file.n),
            max_points: self.max_points.or(file.max_points),
        }
    }

    /// Parses a config file; the format follows the extension, `.toml` or
    /// `.json`.
    pub fn load(path: &Path) -> CliResult<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        let bad = |e: String| CliError::Usage(format!("config {}: {e}", path.display()));
        match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => toml::from_str(&text).map_err(|e| bad(e.to_string())),
            Some("json") => serde_json::from_str(&text).map_err(|e| bad(e.to_string())),
            _ => Err(bad("expected a .toml or .json file".into())),
        }
    }

    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::Usage(e.to_string()))
    }

    /// The config file to read: `explicit`, or else the one named by
    /// `CLUSTERTREE_CONFIG`.
    pub fn default_path(explicit: Option<PathBuf>) -> Option<PathBuf> {
        explicit.or_else(|| {
            std::env::var_os(CONFIG_ENV)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from)
        })
    }

    pub fn require_k(&self) -> CliResult<usize> {
        self.k
            .ok_or_else(|| CliError::Usage("--k is required".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full() -> RunConfig {
        RunConfig {
            input: Some("points.csv".into()),
            k: Some(10),
            alpha: Some(2f64.sqrt()),
            rule: Some(Rule::Mknn),
            delta: Some(0.1),
            c0: Some(0.25),
            eps_tilde: Some(0.1 + 0.2),
            seed: Some(u64::MAX),
            prune_low_levels: Some(true),
            cut_r: Some(1e-300),
            cut_lambda: Some(4.0),
            out: Some("tree.json".into()),
            n: Some(1000),
            max_points: Some(50),
        }
    }

    #[test]
    fn toml_round_trip() {
        // TOML integers are signed, so seeds stop at 2^63 - 1 there.
        let c = RunConfig {
            seed: Some(i64::MAX as u64),
            ..full()
        };
        let text = c.to_toml().unwrap();
        assert_eq!(toml::from_str::<RunConfig>(&text).unwrap(), c);
        assert!(text.contains("eps-tilde = 0.30000000000000004"));
        assert!(text.contains("rule = \"mknn\""));
    }

    #[test]
    fn toml_refuses_seeds_it_cannot_hold() {
        assert!(full().to_toml().is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = full();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), c);
    }

    #[test]
    fn flags_win() {
        let flags = RunConfig {
            k: Some(3),
            ..RunConfig::default()
        };
        let merged = flags.over(full());
        assert_eq!(merged.k, Some(3));
        assert_eq!(merged.alpha, Some(2f64.sqrt()));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("kk = 3").is_err());
    }
}
