//! Mapping search results onto induced senses by lemma-set overlap.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::corpus::Lemma;
use crate::error::{Error, Result};
use crate::querygraph::Serp;
use crate::wsi::SenseInventory;

/// The sense chosen for one search result. `sense_id` is `None` when no
/// sense shares a lemma with the result (and force-assignment is off).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub rank: u32,
    pub sense_id: Option<usize>,
    pub score: f64,
}

/// A SERP with every document mapped to a sense of the inventory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteredSerp {
    pub query: Lemma,
    pub inventory: SenseInventory,
    pub assignments: Vec<Assignment>,
    /// Number of distinct senses that received at least one document.
    pub n_populated_clusters: usize,
}

/// Similarity of a result to a sense: the fraction of the result's
/// distinct lemmas that the sense contains. Empty results score 0.
pub fn similarity(result_lemmas: &BTreeSet<Lemma>, sense_lemmas: &BTreeSet<Lemma>) -> f64 {
    if result_lemmas.is_empty() {
        return 0.0;
    }
    let common = result_lemmas
        .iter()
        .filter(|l| sense_lemmas.contains(*l))
        .count();
    common as f64 / result_lemmas.len() as f64
}

/// Assigns every document of `serp` to the most similar sense. Ties are
/// broken in inventory order. A document that shares nothing with any
/// sense stays unassigned unless `force_assign` is set, in which case it
/// falls to the first sense with score 0.
pub fn assign_senses(
    serp: &Serp,
    inventory: &SenseInventory,
    force_assign: bool,
) -> Result<ClusteredSerp> {
    if inventory.clusters.is_empty() {
        return Err(Error::EmptyInventory {
            query: serp.query.clone(),
        });
    }
    let mut assignments = Vec::with_capacity(serp.documents.len());
    for doc in &serp.documents {
        let result_lemmas: BTreeSet<Lemma> = doc.lemmas.iter().cloned().collect();
        let mut best: Option<(usize, f64)> = None;
        for cluster in &inventory.clusters {
            let score = similarity(&result_lemmas, &cluster.lemmas);
            if score > best.map(|(_, s)| s).unwrap_or(0.0) {
                best = Some((cluster.id, score));
            }
        }
        let (sense_id, score) = match best {
            Some((id, score)) => (Some(id), score),
            None if force_assign => (Some(inventory.clusters[0].id), 0.0),
            None => (None, 0.0),
        };
        assignments.push(Assignment {
            rank: doc.rank,
            sense_id,
            score,
        });
    }
    let populated: BTreeSet<usize> = assignments.iter().filter_map(|a| a.sense_id).collect();
    Ok(ClusteredSerp {
        query: serp.query.clone(),
        inventory: inventory.clone(),
        assignments,
        n_populated_clusters: populated.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::querygraph::SerpDocument;
    use crate::wsi::{SenseCluster, WsiAlgorithm};

    fn lemma(s: &str) -> Lemma {
        Lemma::new(s).unwrap()
    }

    fn set(items: &[&str]) -> BTreeSet<Lemma> {
        items.iter().map(|s| lemma(s)).collect()
    }

    fn inventory(clusters: &[&[&str]]) -> SenseInventory {
        SenseInventory {
            query: lemma("q"),
            algorithm: WsiAlgorithm::Curvature,
            clusters: clusters
                .iter()
                .enumerate()
                .map(|(id, lemmas)| SenseCluster {
                    id,
                    hub: None,
                    lemmas: set(lemmas),
                    label: None,
                })
                .collect(),
        }
    }

    fn serp(docs: &[&[&str]]) -> Serp {
        Serp {
            query: lemma("q"),
            documents: docs
                .iter()
                .enumerate()
                .map(|(i, lemmas)| SerpDocument {
                    rank: (i + 1) as u32,
                    title: String::new(),
                    snippet: String::new(),
                    lemmas: lemmas.iter().map(|s| lemma(s)).collect(),
                })
                .collect(),
        }
    }

    #[test]
    fn similarity_counts_shared_fraction() {
        assert_eq!(
            similarity(&set(&["a", "b", "c"]), &set(&["b", "c", "d"])),
            2.0 / 3.0
        );
        assert_eq!(similarity(&set(&["a", "b"]), &set(&["a", "b"])), 1.0);
        assert_eq!(similarity(&set(&["a"]), &set(&["b"])), 0.0);
        assert_eq!(similarity(&set(&[]), &set(&["a"])), 0.0);
    }

    #[test]
    fn assigns_the_best_matching_sense() {
        // The first sense list mirrors a five-word hockey sense, the second
        // a two-word movie sense.
        let inv = inventory(&[
            &["клуб", "игра", "болельщик", "команда", "цвет"],
            &["любовь", "фильм"],
        ]);
        let serp = serp(&[&["клуб", "болельщик"]]);
        let clustered = assign_senses(&serp, &inv, false).unwrap();
        assert_eq!(clustered.assignments[0].sense_id, Some(0));
        assert_eq!(clustered.assignments[0].score, 1.0);
    }

    #[test]
    fn unmatched_documents_stay_unassigned() {
        let inv = inventory(&[&["a"], &["b"]]);
        let serp = serp(&[&["z", "w"]]);
        let clustered = assign_senses(&serp, &inv, false).unwrap();
        assert_eq!(clustered.assignments[0].sense_id, None);
        assert_eq!(clustered.assignments[0].score, 0.0);
        assert_eq!(clustered.n_populated_clusters, 0);
    }

    #[test]
    fn force_assign_falls_to_first_cluster() {
        let inv = inventory(&[&["a"], &["b"]]);
        let serp = serp(&[&["z"]]);
        let clustered = assign_senses(&serp, &inv, true).unwrap();
        assert_eq!(clustered.assignments[0].sense_id, Some(0));
        assert_eq!(clustered.assignments[0].score, 0.0);
        assert_eq!(clustered.n_populated_clusters, 1);
    }

    #[test]
    fn ties_prefer_inventory_order() {
        let inv = inventory(&[&["a", "x"], &["b", "y"]]);
        // Document shares one lemma with each sense: score 0.5 both ways.
        let serp = serp(&[&["a", "b"]]);
        let clustered = assign_senses(&serp, &inv, false).unwrap();
        assert_eq!(clustered.assignments[0].sense_id, Some(0));
        assert_eq!(clustered.assignments[0].score, 0.5);
    }

    #[test]
    fn duplicate_lemmas_count_once() {
        let inv = inventory(&[&["a", "b"]]);
        let serp = serp(&[&["a", "a", "z"]]);
        let clustered = assign_senses(&serp, &inv, false).unwrap();
        // Distinct lemmas {a, z}: shared 1 of 2.
        assert_eq!(clustered.assignments[0].score, 0.5);
    }

    #[test]
    fn populated_count_tracks_distinct_senses() {
        let inv = inventory(&[&["a"], &["b"], &["c"]]);
        let serp = serp(&[&["a"], &["a", "z"], &["b"]]);
        let clustered = assign_senses(&serp, &inv, false).unwrap();
        assert_eq!(clustered.n_populated_clusters, 2);
    }

    #[test]
    fn empty_inventory_is_an_error() {
        let inv = inventory(&[]);
        let serp = serp(&[&["a"]]);
        assert!(matches!(
            assign_senses(&serp, &inv, false),
            Err(Error::EmptyInventory { .. })
        ));
    }
}
