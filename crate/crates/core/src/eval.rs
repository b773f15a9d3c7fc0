//! Cluster-count evaluation against a gold standard of sense counts.

use std::collections::BTreeMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::clusterer::ClusteredSerp;
use crate::corpus::Lemma;
use crate::error::{Error, Result};

/// Which cluster count a produced SERP contributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    /// All clusters of the sense inventory.
    Inventory,
    /// Only clusters that received at least one document.
    Populated,
}

/// Expert-provided number of senses per query.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldSenseCounts {
    entries: BTreeMap<Lemma, u32>,
    average_senses: f64,
}

impl GoldSenseCounts {
    pub fn new(entries: BTreeMap<Lemma, u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyGold);
        }
        if entries.values().any(|&c| c == 0) {
            return Err(Error::InputFormat {
                line: 0,
                message: "gold sense counts must be >= 1".into(),
            });
        }
        let sum: u64 = entries.values().map(|&c| c as u64).sum();
        let average_senses = sum as f64 / entries.len() as f64;
        Ok(GoldSenseCounts {
            entries,
            average_senses,
        })
    }

    /// Parses TSV lines of `query<TAB>count`, lowercasing queries.
    pub fn from_tsv_reader<R: BufRead>(reader: R) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let (Some(query), Some(count), None) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(Error::InputFormat {
                    line: line_no,
                    message: "expected `query<TAB>count`".into(),
                });
            };
            let query = Lemma::lowercased(query.trim()).map_err(|e| Error::InputFormat {
                line: line_no,
                message: e.to_string(),
            })?;
            let count: u32 = count.trim().parse().map_err(|_| Error::InputFormat {
                line: line_no,
                message: format!("bad sense count {count:?}"),
            })?;
            if count == 0 {
                return Err(Error::InputFormat {
                    line: line_no,
                    message: "gold sense counts must be >= 1".into(),
                });
            }
            if entries.insert(query.clone(), count).is_some() {
                return Err(Error::InputFormat {
                    line: line_no,
                    message: format!("duplicate gold entry for {query:?}"),
                });
            }
        }
        GoldSenseCounts::new(entries)
    }

    pub fn count(&self, query: &Lemma) -> Option<u32> {
        self.entries.get(query).copied()
    }

    /// Mean sense count over all gold entries.
    pub fn average_senses(&self) -> f64 {
        self.average_senses
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Per-query outcome of the comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryEval {
    pub query: Lemma,
    pub produced: usize,
    pub gold: u32,
    /// `|produced - gold|`.
    pub deviation: u32,
}

/// Deviation of produced cluster counts from the gold standard.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_query: Vec<QueryEval>,
    pub mean_deviation: f64,
    /// `100 * mean_deviation / average_senses`.
    pub mean_deviation_pct: f64,
}

/// Mean deviation expressed as a percentage of the average gold sense
/// count.
pub fn deviation_pct(mean_deviation: f64, average_senses: f64) -> f64 {
    100.0 * mean_deviation / average_senses
}

/// Compares produced cluster counts with the gold counts, query by query.
/// Every clustered query must be present in the gold standard.
pub fn evaluate(
    clustered: &[ClusteredSerp],
    gold: &GoldSenseCounts,
    mode: CountMode,
) -> Result<EvalReport> {
    let mut per_query = Vec::with_capacity(clustered.len());
    let mut deviation_sum: u64 = 0;
    for serp in clustered {
        let gold_count = gold
            .count(&serp.query)
            .ok_or_else(|| Error::MissingGoldEntry {
                query: serp.query.clone(),
            })?;
        let produced = match mode {
            CountMode::Inventory => serp.inventory.clusters.len(),
            CountMode::Populated => serp.n_populated_clusters,
        };
        let deviation = (produced as i64 - gold_count as i64).unsigned_abs() as u32;
        deviation_sum += deviation as u64;
        per_query.push(QueryEval {
            query: serp.query.clone(),
            produced,
            gold: gold_count,
            deviation,
        });
    }
    let mean_deviation = if per_query.is_empty() {
        0.0
    } else {
        deviation_sum as f64 / per_query.len() as f64
    };
    Ok(EvalReport {
        per_query,
        mean_deviation,
        mean_deviation_pct: deviation_pct(mean_deviation, gold.average_senses()),
    })
}
