//! Experiment files for `clustertree validate`.
//!
//! ```json
//! {"experiment": "pruning",
//!  "density": {"kind": "two_bump", "lambda": 1, "Lambda": 16},
//!  "n": 10000, "level": 16, "eps": 0.45, "rules": ["rsl", "mknn"], "trials": 100,
//!  "params": {"k": 400, "alpha": 1.4142135623730951, "delta": 0.1, "C_delta": 1.48, "eps_tilde": 0.5}}
//! ```
//!
//! Flags `--k --alpha --delta --c0 --eps-tilde` override `params`, and
//! `--seed` seeds the run.

use clustertree::scales::c_delta_from;
use clustertree::synthetic::DensitySpec;
use clustertree::validation::{self, ExperimentReport, KSchedule};
use clustertree::{PruneOptions, Rule, ScaleParams};
use serde::Deserialize;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub k: Option<usize>,
    pub alpha: Option<f64>,
    pub delta: Option<f64>,
    pub c0: Option<f64>,
    #[serde(rename = "C_delta")]
    pub c_delta: Option<f64>,
    pub eps_tilde: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "experiment", rename_all = "snake_case")]
pub enum ExperimentSpec {
    SeparationConnectedness {
        density: DensitySpec,
        n: usize,
        level: f64,
        rules: Vec<Rule>,
        trials: usize,
        #[serde(default)]
        params: ParamsSpec,
    },
    KnnDisconnection {
        lambda: f64,
        #[serde(rename = "Lambda")]
        lambda_max: f64,
        k: usize,
        alpha: f64,
        n: usize,
        trials: usize,
    },
    Pruning {
        density: DensitySpec,
        n: usize,
        level: f64,
        eps: f64,
        rules: Vec<Rule>,
        trials: usize,
        #[serde(default)]
        params: ParamsSpec,
    },
    HartiganConsistency {
        density: DensitySpec,
        level: f64,
        rule: Rule,
        schedule: KSchedule,
        n_grid: Vec<usize>,
        trials: usize,
        #[serde(default)]
        params: ParamsSpec,
    },
}

impl ParamsSpec {
    /// One-dimensional scale parameters for `n` samples, flags first.
    fn resolve(&self, cfg: &RunConfig, n: usize) -> CliResult<ScaleParams> {
        let k = cfg
            .k
            .or(self.k)
            .ok_or_else(|| CliError::Usage("the experiment needs `params.k` or --k".into()))?;
        let delta = cfg.delta.or(self.delta).unwrap_or(0.1);
        let c_delta = match (cfg.c0, self.c0, self.c_delta) {
            (Some(c0), _, _) | (None, Some(c0), None) => c_delta_from(c0, delta),
            (None, None, Some(c)) => c,
            (None, None, None) => 0.0,
            (None, Some(_), Some(_)) => {
                return Err(CliError::Usage("give `c0` or `C_delta`, not both".into()))
            }
        };
        let alpha = cfg.alpha.or(self.alpha).unwrap_or(1.0);
        let eps_tilde = cfg.eps_tilde.or(self.eps_tilde).unwrap_or(0.0);
        Ok(ScaleParams::new(n, k, 1, alpha, delta, c_delta, eps_tilde)?)
    }
}

pub fn parse(text: &str) -> CliResult<ExperimentSpec> {
    serde_json::from_str(text).map_err(|e| CliError::Data(format!("experiment file: {e}")))
}

pub fn run(spec: &ExperimentSpec, cfg: &RunConfig) -> CliResult<ExperimentReport> {
    let seed = cfg.seed.unwrap_or(0);
    let report = match spec {
        ExperimentSpec::SeparationConnectedness {
            density,
            n,
            level,
            rules,
            trials,
            params,
        } => {
            let p = params.resolve(cfg, *n)?;
            validation::check_separation_connectedness(
                &density.as_piecewise()?,
                *n,
                &p,
                *level,
                rules,
                *trials,
                seed,
            )?
        }
        ExperimentSpec::KnnDisconnection {
            lambda,
            lambda_max,
            k,
            alpha,
            n,
            trials,
        } => validation::knn_disconnection_experiment(
            *lambda,
            *lambda_max,
            cfg.k.unwrap_or(*k),
            cfg.alpha.unwrap_or(*alpha),
            *n,
            *trials,
            seed,
        )?,
        ExperimentSpec::Pruning {
            density,
            n,
            level,
            eps,
            rules,
            trials,
            params,
        } => {
            let p = params.resolve(cfg, *n)?;
            let options = PruneOptions {
                prune_low_levels: cfg.prune_low_levels.unwrap_or(false),
            };
            validation::pruning_experiment(
                &density.as_piecewise()?,
                *n,
                &p,
                *level,
                *eps,
                options,
                rules,
                *trials,
                seed,
            )?
        }
        ExperimentSpec::HartiganConsistency {
            density,
            level,
            rule,
            schedule,
            n_grid,
            trials,
            params,
        } => {
            let n_max = n_grid.iter().copied().max().unwrap_or(0);
            let k = schedule.k_for(n_max);
            let with_k = ParamsSpec {
                k: Some(params.k.unwrap_or(k)),
                ..params.clone()
            };
            let p = with_k.resolve(
                &RunConfig {
                    k: None,
                    ..cfg.clone()
                },
                n_max.max(k),
            )?;
            validation::hartigan_consistency_curve(
                &density.as_piecewise()?,
                &p,
                *level,
                *rule,
                *schedule,
                n_grid,
                *trials,
                seed,
            )?
        }
    };
    Ok(report)
}
