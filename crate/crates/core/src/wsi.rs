//! Word sense induction: partitioning a query graph into sense clusters
//! with the Curvature and Hyperlex algorithms.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::Lemma;
use crate::error::{Error, Result};
use crate::graph::{local_clustering_coefficient, LemmaPair, UndirectedGraph};
use crate::querygraph::QueryGraph;

pub use crate::graph::connected_components;

/// The sense induction algorithm that produced an inventory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WsiAlgorithm {
    Curvature,
    Hyperlex,
}

impl fmt::Display for WsiAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WsiAlgorithm::Curvature => f.write_str("curvature"),
            WsiAlgorithm::Hyperlex => f.write_str("hyperlex"),
        }
    }
}

/// One induced sense: a set of related lemmas, optionally rooted at a hub
/// (Hyperlex). Labels are assigned by humans, never by the algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenseCluster {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hub: Option<Lemma>,
    pub lemmas: BTreeSet<Lemma>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// The induced senses of one query, largest cluster first (ties broken by
/// the lexicographically smallest member).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenseInventory {
    pub query: Lemma,
    pub algorithm: WsiAlgorithm,
    pub clusters: Vec<SenseCluster>,
}

impl SenseInventory {
    fn from_components(
        query: Lemma,
        algorithm: WsiAlgorithm,
        mut components: Vec<(BTreeSet<Lemma>, Option<Lemma>)>,
    ) -> Self {
        components.sort_by(|(a, _), (b, _)| {
            b.len()
                .cmp(&a.len())
                .then_with(|| a.first().cmp(&b.first()))
        });
        let clusters = components
            .into_iter()
            .enumerate()
            .map(|(id, (lemmas, hub))| SenseCluster {
                id,
                hub,
                lemmas,
                label: None,
            })
            .collect();
        SenseInventory {
            query,
            algorithm,
            clusters,
        }
    }

    /// Drops single-lemma clusters and renumbers the rest. The algorithms
    /// keep singletons; callers that do not want them filter here.
    pub fn drop_singletons(mut self) -> Self {
        self.clusters.retain(|c| c.lemmas.len() > 1);
        for (id, cluster) in self.clusters.iter_mut().enumerate() {
            cluster.id = id;
        }
        self
    }
}

/// Curvature pruning threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureParams {
    /// Vertices with clustering coefficient strictly between 0 and this
    /// value are deleted.
    pub min_coefficient: f64,
}

impl Default for CurvatureParams {
    fn default() -> Self {
        CurvatureParams {
            min_coefficient: 0.3,
        }
    }
}

/// Hyperlex hub selection thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperlexParams {
    /// Minimum `degree / (|V| - 1)` for a hub.
    pub min_norm_degree: f64,
    /// Minimum mean Dice over a hub's incident edges.
    pub min_avg_dice: f64,
    /// The scan does not stop at a non-qualifying vertex until at least
    /// this many hubs were found.
    pub min_hubs: usize,
}

impl Default for HyperlexParams {
    fn default() -> Self {
        HyperlexParams {
            min_norm_degree: 0.05,
            min_avg_dice: 0.007,
            min_hubs: 2,
        }
    }
}

/// Induces senses by deleting inter-sense link words: vertices whose local
/// clustering coefficient is positive but below the threshold. Vertices
/// with coefficient exactly 0 are kept, because deleting them would strand
/// their neighbors. Vertices left with degree 0 are removed and the
/// remaining connected components become the sense clusters.
pub fn curvature_induce(gq: &QueryGraph, params: &CurvatureParams) -> Result<SenseInventory> {
    let mut kept: BTreeSet<&Lemma> = BTreeSet::new();
    for (v, _) in gq.vertices_with_info() {
        let coefficient = local_clustering_coefficient(gq, v)?;
        if coefficient == 0.0 || coefficient >= params.min_coefficient {
            kept.insert(v);
        }
    }

    let retained_edges: Vec<&LemmaPair> = gq
        .edges()
        .map(|(pair, _)| pair)
        .filter(|pair| kept.contains(pair.first()) && kept.contains(pair.second()))
        .collect();

    // Degree-0 survivors disappear here: only edge endpoints are united.
    let vertices: Vec<&Lemma> = kept.into_iter().collect();
    let index: BTreeMap<&Lemma, usize> = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut dsu = DisjointSets::new(vertices.len());
    let mut connected: HashSet<usize> = HashSet::new();
    for pair in retained_edges {
        let a = index[pair.first()];
        let b = index[pair.second()];
        dsu.union(a, b);
        connected.insert(a);
        connected.insert(b);
    }

    let mut groups: BTreeMap<usize, BTreeSet<Lemma>> = BTreeMap::new();
    for (&v, &i) in &index {
        if connected.contains(&i) {
            groups.entry(dsu.find(i)).or_default().insert(v.clone());
        }
    }
    if groups.is_empty() {
        return Err(Error::EmptyInventory {
            query: gq.query().clone(),
        });
    }
    let components = groups.into_values().map(|lemmas| (lemmas, None)).collect();
    Ok(SenseInventory::from_components(
        gq.query().clone(),
        WsiAlgorithm::Curvature,
        components,
    ))
}

/// Mean Dice over the incident edges of `v`; 0 for degree-0 vertices.
fn average_dice(gq: &QueryGraph, v: &Lemma) -> f64 {
    let neighbors = gq.neighbors(v);
    if neighbors.is_empty() {
        return 0.0;
    }
    let sum: f64 = neighbors
        .iter()
        .map(|u| gq.edge_dice(v, u).expect("adjacency implies edge"))
        .sum();
    sum / neighbors.len() as f64
}

/// Selects Hyperlex hubs.
///
/// Vertices are scanned in decreasing corpus frequency (ties resolved
/// lexicographically). A vertex qualifies when its normalized degree and
/// mean edge Dice clear the thresholds; it is then recorded as a hub and
/// removed, together with its neighbors, from the remaining scan list. A
/// non-qualifying vertex stops the scan once at least `min_hubs` hubs were
/// found; before that it is skipped. Constraints are always evaluated on
/// the original graph.
pub fn select_hubs(gq: &QueryGraph, params: &HyperlexParams) -> Vec<Lemma> {
    let mut order: Vec<(&Lemma, u64)> = gq
        .vertices_with_info()
        .map(|(l, info)| (l, info.corpus_freq))
        .collect();
    order.sort_by(|(la, fa), (lb, fb)| fb.cmp(fa).then_with(|| la.cmp(lb)));

    let denom = gq.vertex_count().saturating_sub(1);
    let mut removed: HashSet<&Lemma> = HashSet::new();
    let mut hubs = Vec::new();
    for (v, _) in order {
        if removed.contains(v) {
            continue;
        }
        let norm_degree = if denom == 0 {
            0.0
        } else {
            gq.degree(v) as f64 / denom as f64
        };
        let qualifies =
            norm_degree >= params.min_norm_degree && average_dice(gq, v) >= params.min_avg_dice;
        if qualifies {
            hubs.push(v.clone());
            removed.insert(v);
            removed.extend(gq.neighbors(v));
        } else if hubs.len() >= params.min_hubs {
            break;
        }
    }
    hubs
}

/// Computes a maximum-weight spanning forest with Kruskal's algorithm.
///
/// Among equal weights the edge with the lexicographically smaller endpoint
/// pair wins, which makes the selection deterministic and invariant under
/// positive rescaling of the weights.
pub fn maximum_spanning_tree(
    edges: impl IntoIterator<Item = (LemmaPair, f64)>,
) -> Vec<(LemmaPair, f64)> {
    let mut edges: Vec<(LemmaPair, f64)> = edges.into_iter().collect();
    edges.sort_by(|(pa, wa), (pb, wb)| wb.total_cmp(wa).then_with(|| pa.cmp(pb)));

    let mut index: BTreeMap<Lemma, usize> = BTreeMap::new();
    for (pair, _) in &edges {
        for v in [pair.first(), pair.second()] {
            let next = index.len();
            index.entry(v.clone()).or_insert(next);
        }
    }
    let mut dsu = DisjointSets::new(index.len());
    let mut forest = Vec::new();
    for (pair, weight) in edges {
        let a = index[pair.first()];
        let b = index[pair.second()];
        if dsu.union(a, b) {
            forest.push((pair, weight));
        }
    }
    forest
}

/// Induces senses around hubs via a maximum spanning tree.
///
/// The query vertex is temporarily added and wired to every hub with a
/// weight exceeding all graph weights, so the spanning forest keeps every
/// hub directly under the query. Removing the query afterwards splits its
/// tree into one subtree per hub; each surviving subtree becomes a sense
/// cluster. Forest trees that never connected to the query keep their
/// vertices together and are reported as hubless clusters; isolated
/// non-hub vertices are dropped.
pub fn hyperlex_induce(
    gq: &QueryGraph,
    q: &Lemma,
    params: &HyperlexParams,
) -> Result<SenseInventory> {
    let hubs = select_hubs(gq, params);
    if hubs.is_empty() {
        return Err(Error::NoHubs { query: q.clone() });
    }

    let query_weight = gq.max_dice() + 1.0;
    let mut edges: Vec<(LemmaPair, f64)> =
        gq.edges().map(|(pair, dice)| (pair.clone(), dice)).collect();
    for hub in &hubs {
        let pair = LemmaPair::new(q.clone(), hub.clone())
            .expect("query lemma is never a graph vertex");
        edges.push((pair, query_weight));
    }
    let forest = maximum_spanning_tree(edges);

    // Components of the forest after removing the query vertex.
    let vertices: Vec<&Lemma> = gq.vertices().collect();
    let index: BTreeMap<&Lemma, usize> = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut dsu = DisjointSets::new(vertices.len());
    for (pair, _) in &forest {
        if pair.contains(q) {
            continue;
        }
        dsu.union(index[pair.first()], index[pair.second()]);
    }
    let mut groups: BTreeMap<usize, BTreeSet<Lemma>> = BTreeMap::new();
    for (&v, &i) in &index {
        groups.entry(dsu.find(i)).or_default().insert(v.clone());
    }

    let hub_set: BTreeSet<&Lemma> = hubs.iter().collect();
    let mut components = Vec::new();
    for lemmas in groups.into_values() {
        let contained: Vec<Lemma> = lemmas
            .iter()
            .filter(|l| hub_set.contains(l))
            .cloned()
            .collect();
        debug_assert!(contained.len() <= 1, "query removal separates hubs");
        match contained.into_iter().next() {
            Some(hub) => components.push((lemmas, Some(hub))),
            // A singleton without a hub is a vertex disconnected by the
            // query removal; larger hubless trees are senses the query
            // never reached and are kept as they are.
            None if lemmas.len() > 1 => components.push((lemmas, None)),
            None => {}
        }
    }
    Ok(SenseInventory::from_components(
        q.clone(),
        WsiAlgorithm::Hyperlex,
        components,
    ))
}

/// Plain union-find with path halving and union by size.
struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when both elements were already in one set.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }
}
