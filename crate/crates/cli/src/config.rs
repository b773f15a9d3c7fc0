//! Pipeline configuration: a TOML file with every threshold, overridable
//! flag by flag on the command line (flags win).

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};

use sensegraph::{CurvatureParams, HyperlexParams, StrongLinkParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Curvature,
    Hyperlex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub min_cond_prob: f64,
    pub min_dice_query: f64,
    pub min_dice_edge: f64,
    pub min_coefficient: f64,
    pub min_norm_degree: f64,
    pub min_avg_dice: f64,
    pub min_hubs: usize,
    /// Default algorithm when the flag is absent.
    pub algorithm: Option<Algorithm>,
    /// Corpus files for `build` when no --corpus flag is given.
    pub corpus: Vec<PathBuf>,
    pub stopwords: Option<PathBuf>,
    /// BFS sources for the average path length; graphs with at most this
    /// many vertices are measured exactly.
    pub path_sample: usize,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let strong = StrongLinkParams::default();
        let curvature = CurvatureParams::default();
        let hyperlex = HyperlexParams::default();
        PipelineConfig {
            min_cond_prob: strong.min_cond_prob,
            min_dice_query: strong.min_dice_query,
            min_dice_edge: strong.min_dice_edge,
            min_coefficient: curvature.min_coefficient,
            min_norm_degree: hyperlex.min_norm_degree,
            min_avg_dice: hyperlex.min_avg_dice,
            min_hubs: hyperlex.min_hubs,
            algorithm: None,
            corpus: Vec::new(),
            stopwords: None,
            path_sample: 200,
            seed: 0,
        }
    }
}

impl PipelineConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        match path {
            None => Ok(PipelineConfig::default()),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                toml::from_str(&text)
                    .with_context(|| format!("parsing config {}", path.display()))
            }
        }
    }
}

/// Threshold flags shared by `induce` and `cluster`.
#[derive(Debug, Clone, clap::Args)]
pub struct ThresholdArgs {
    /// Minimum conditional frequency for a strong query neighbor.
    #[arg(long)]
    pub min_cond_prob: Option<f64>,
    /// Minimum Dice between the query and a corpus neighbor.
    #[arg(long)]
    pub min_dice_query: Option<f64>,
    /// Minimum Dice for a query graph edge.
    #[arg(long)]
    pub min_dice_edge: Option<f64>,
    /// Curvature: clustering coefficient below which vertices are deleted.
    #[arg(long)]
    pub min_coefficient: Option<f64>,
    /// Hyperlex: minimum normalized degree of a hub.
    #[arg(long)]
    pub min_norm_degree: Option<f64>,
    /// Hyperlex: minimum average Dice over a hub's edges.
    #[arg(long)]
    pub min_avg_dice: Option<f64>,
    /// Hyperlex: keep scanning past bad candidates until this many hubs.
    #[arg(long)]
    pub min_hubs: Option<usize>,
}

impl ThresholdArgs {
    pub fn strong_params(&self, cfg: &PipelineConfig) -> StrongLinkParams {
        StrongLinkParams {
            min_cond_prob: self.min_cond_prob.unwrap_or(cfg.min_cond_prob),
            min_dice_query: self.min_dice_query.unwrap_or(cfg.min_dice_query),
            min_dice_edge: self.min_dice_edge.unwrap_or(cfg.min_dice_edge),
        }
    }

    pub fn curvature_params(&self, cfg: &PipelineConfig) -> CurvatureParams {
        CurvatureParams {
            min_coefficient: self.min_coefficient.unwrap_or(cfg.min_coefficient),
        }
    }

    pub fn hyperlex_params(&self, cfg: &PipelineConfig) -> HyperlexParams {
        HyperlexParams {
            min_norm_degree: self.min_norm_degree.unwrap_or(cfg.min_norm_degree),
            min_avg_dice: self.min_avg_dice.unwrap_or(cfg.min_avg_dice),
            min_hubs: self.min_hubs.unwrap_or(cfg.min_hubs),
        }
    }
}
