//! Corpus-wide co-occurrence graph: lemma vertices, Dice-weighted edges,
//! graph statistics and the small-world check.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, Lemma};
use crate::error::{Error, Result};
use crate::graph::{bfs_distance_sum, local_clustering_coefficient, LemmaPair, UndirectedGraph};

/// One undirected co-occurrence edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoEdge {
    /// Number of adjacency events between the two lemmas.
    pub cooc_count: u64,
    /// Collocation strength: `2 * cooc / (freq(a) + freq(b))`.
    pub dice: f64,
}

/// Undirected graph of corpus lemmas. Vertices carry absolute frequencies,
/// edges carry adjacency counts and Dice weights.
///
/// Immutable after construction; safe for concurrent reads.
#[derive(Debug, Clone, Default)]
pub struct CoGraph {
    vertices: BTreeMap<Lemma, u64>,
    edges: BTreeMap<LemmaPair, CoEdge>,
    adjacency: BTreeMap<Lemma, Vec<Lemma>>,
}

impl PartialEq for CoGraph {
    fn eq(&self, other: &Self) -> bool {
        // Adjacency lists are derived data; their order may differ.
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl CoGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Absolute corpus frequency of `w`, 0 when absent.
    pub fn frequency(&self, w: &Lemma) -> u64 {
        self.vertices.get(w).copied().unwrap_or(0)
    }

    /// Number of adjacency events between `a` and `b`, 0 when not adjacent.
    pub fn cooc_count(&self, a: &Lemma, b: &Lemma) -> u64 {
        self.edge(a, b).map(|e| e.cooc_count).unwrap_or(0)
    }

    pub fn edge(&self, a: &Lemma, b: &Lemma) -> Option<CoEdge> {
        let pair = LemmaPair::new(a.clone(), b.clone())?;
        self.edges.get(&pair).copied()
    }

    /// Vertices with frequencies, in lexicographic order.
    pub fn vertices_with_freq(&self) -> impl Iterator<Item = (&Lemma, u64)> {
        self.vertices.iter().map(|(l, &f)| (l, f))
    }

    /// Edges in lexicographic pair order.
    pub fn edges(&self) -> impl Iterator<Item = (&LemmaPair, &CoEdge)> {
        self.edges.iter()
    }

    fn insert_edge(&mut self, pair: LemmaPair, edge: CoEdge) {
        self.adjacency
            .entry(pair.first().clone())
            .or_default()
            .push(pair.second().clone());
        self.adjacency
            .entry(pair.second().clone())
            .or_default()
            .push(pair.first().clone());
        self.edges.insert(pair, edge);
    }
}

impl UndirectedGraph for CoGraph {
    fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    fn contains_vertex(&self, v: &Lemma) -> bool {
        self.vertices.contains_key(v)
    }

    fn vertices(&self) -> impl Iterator<Item = &Lemma> {
        self.vertices.keys()
    }

    fn neighbors(&self, v: &Lemma) -> &[Lemma] {
        self.adjacency.get(v).map(Vec::as_slice).unwrap_or(&[])
    }

    fn has_edge(&self, a: &Lemma, b: &Lemma) -> bool {
        LemmaPair::new(a.clone(), b.clone()).is_some_and(|p| self.edges.contains_key(&p))
    }
}

/// Dice collocation strength between `w` and `w2`: the stored edge weight,
/// or 0 when the lemmas were never adjacent. Symmetric in its arguments.
pub fn dice(graph: &CoGraph, w: &Lemma, w2: &Lemma) -> f64 {
    graph.edge(w, w2).map(|e| e.dice).unwrap_or(0.0)
}

/// Builds the co-occurrence graph of a corpus.
///
/// Every corpus lemma becomes a vertex. For each pair of adjacent tokens
/// with distinct lemmas inside a sentence, the unordered pair's adjacency
/// count is incremented; self-pairs are skipped. Each edge is then weighted
/// with the Dice coefficient of its endpoints.
pub fn build_cooccurrence_graph(corpus: &Corpus) -> Result<CoGraph> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut graph = CoGraph {
        vertices: corpus
            .vocabulary()
            .map(|(l, f)| (l.clone(), f))
            .collect(),
        ..CoGraph::default()
    };
    let mut counts: BTreeMap<LemmaPair, u64> = BTreeMap::new();
    for sentence in corpus.sentences() {
        for window in sentence.windows(2) {
            if let Some(pair) = LemmaPair::new(window[0].clone(), window[1].clone()) {
                *counts.entry(pair).or_insert(0) += 1;
            }
        }
    }
    for (pair, cooc_count) in counts {
        let freq_sum = graph.frequency(pair.first()) + graph.frequency(pair.second());
        let edge = CoEdge {
            cooc_count,
            dice: 2.0 * cooc_count as f64 / freq_sum as f64,
        };
        graph.insert_edge(pair, edge);
    }
    Ok(graph)
}

/// How to sample BFS sources for the average path length of large graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathSampling {
    pub sources: usize,
    pub seed: u64,
}

/// Summary statistics of a co-occurrence graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphStats {
    pub n_vertices: usize,
    pub n_edges: usize,
    /// `2 * E / V`.
    pub avg_degree: f64,
    /// Mean BFS distance over connected vertex pairs; 0 when no pair is
    /// connected.
    pub avg_path_length: f64,
    /// Mean local clustering coefficient over all vertices.
    pub clustering_coefficient: f64,
    /// False when the path length was estimated from sampled sources.
    pub path_length_exact: bool,
    /// The sampling parameters actually used, when any.
    pub path_sampling: Option<PathSampling>,
}

/// Computes graph statistics.
///
/// With `sampling` absent (or at least as many sources as vertices) the
/// path length is exact all-pairs BFS; otherwise it is the mean distance
/// from the sampled sources to all vertices reachable from them.
pub fn graph_stats(graph: &CoGraph, sampling: Option<PathSampling>) -> Result<GraphStats> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let n_vertices = graph.vertex_count();
    let n_edges = graph.edge_count();
    let avg_degree = 2.0 * n_edges as f64 / n_vertices as f64;

    let mut coefficient_sum = 0.0;
    for v in graph.vertices.keys() {
        coefficient_sum += local_clustering_coefficient(graph, v)?;
    }
    let clustering_coefficient = coefficient_sum / n_vertices as f64;

    let sampling = sampling.filter(|s| s.sources < n_vertices);
    let (sum, count) = match sampling {
        None => {
            let mut sum = 0u128;
            let mut count = 0u64;
            for v in graph.vertices.keys() {
                let (s, c) = bfs_distance_sum(graph, v);
                sum += s;
                count += c;
            }
            (sum, count)
        }
        Some(PathSampling { sources, seed }) => {
            let all: Vec<&Lemma> = graph.vertices.keys().collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut sum = 0u128;
            let mut count = 0u64;
            for idx in rand::seq::index::sample(&mut rng, all.len(), sources) {
                let (s, c) = bfs_distance_sum(graph, all[idx]);
                sum += s;
                count += c;
            }
            (sum, count)
        }
    };
    let avg_path_length = if count == 0 {
        0.0
    } else {
        sum as f64 / count as f64
    };

    Ok(GraphStats {
        n_vertices,
        n_edges,
        avg_degree,
        avg_path_length,
        clustering_coefficient,
        path_length_exact: sampling.is_none(),
        path_sampling: sampling,
    })
}

/// Verdict thresholds for [`small_world_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallWorldParams {
    /// The observed path length must be within this factor of the random
    /// baseline (in both directions).
    pub max_path_ratio: f64,
    /// The observed clustering coefficient must exceed the random baseline
    /// by at least this factor.
    pub min_clustering_ratio: f64,
}

impl Default for SmallWorldParams {
    fn default() -> Self {
        SmallWorldParams {
            max_path_ratio: 2.0,
            min_clustering_ratio: 10.0,
        }
    }
}

/// Comparison of a graph against a random graph of the same size.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallWorldReport {
    /// `log(V) / log(avg_degree)`.
    pub expected_path_length_random: f64,
    /// `2 * avg_degree / V`.
    pub expected_clustering_random: f64,
    pub is_small_world: bool,
}

/// Checks whether the graph behind `stats` looks like a small world:
/// path length comparable to a random graph of the same size while the
/// clustering coefficient is far higher.
pub fn small_world_check(stats: &GraphStats, params: &SmallWorldParams) -> Result<SmallWorldReport> {
    if stats.n_vertices <= 1 || stats.avg_degree <= 1.0 {
        return Err(Error::UndefinedBaseline {
            n_vertices: stats.n_vertices,
            avg_degree: stats.avg_degree,
        });
    }
    let expected_path_length_random = (stats.n_vertices as f64).ln() / stats.avg_degree.ln();
    let expected_clustering_random = 2.0 * stats.avg_degree / stats.n_vertices as f64;
    let path_ok = stats.avg_path_length >= expected_path_length_random / params.max_path_ratio
        && stats.avg_path_length <= expected_path_length_random * params.max_path_ratio;
    let clustering_ok = stats.clustering_coefficient
        >= params.min_clustering_ratio * expected_clustering_random;
    Ok(SmallWorldReport {
        expected_path_length_random,
        expected_clustering_random,
        is_small_world: path_ok && clustering_ok,
    })
}

const VERTEX_SECTION: &str = "#vertices";
const EDGE_SECTION: &str = "#edges";

/// Writes the graph as a two-section UTF-8 text file: `#vertices` with
/// `lemma<TAB>freq` lines, then `#edges` with
/// `lemma1<TAB>lemma2<TAB>cooc<TAB>dice` lines, lemma1 < lemma2. Dice is
/// serialized with 17 significant digits so the value round-trips exactly.
pub fn save_graph<W: Write>(graph: &CoGraph, mut sink: W) -> Result<()> {
    writeln!(sink, "{VERTEX_SECTION}")?;
    for (lemma, freq) in &graph.vertices {
        writeln!(sink, "{lemma}\t{freq}")?;
    }
    writeln!(sink, "{EDGE_SECTION}")?;
    for (pair, edge) in &graph.edges {
        writeln!(
            sink,
            "{}\t{}\t{}\t{:.16e}",
            pair.first(),
            pair.second(),
            edge.cooc_count,
            edge.dice
        )?;
    }
    Ok(())
}

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::GraphFormat {
        line,
        message: message.into(),
    }
}

/// Reads a graph saved by [`save_graph`], validating section structure,
/// endpoint integrity and value ranges.
pub fn load_graph<R: BufRead>(source: R) -> Result<CoGraph> {
    let mut graph = CoGraph::default();
    let mut in_edges = false;
    let mut seen_vertices = false;
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        if line == VERTEX_SECTION {
            if seen_vertices {
                return Err(format_err(line_no, "duplicate #vertices section"));
            }
            seen_vertices = true;
            continue;
        }
        if line == EDGE_SECTION {
            if !seen_vertices || in_edges {
                return Err(format_err(line_no, "unexpected #edges section"));
            }
            in_edges = true;
            continue;
        }
        if !seen_vertices {
            return Err(format_err(line_no, "expected #vertices header"));
        }
        if !in_edges {
            parse_vertex_line(&line, line_no, &mut graph)?;
        } else {
            parse_edge_line(&line, line_no, &mut graph)?;
        }
    }
    if !seen_vertices || !in_edges {
        let line = 0;
        return Err(format_err(line, "missing #vertices or #edges section"));
    }
    Ok(graph)
}

fn parse_vertex_line(line: &str, line_no: usize, graph: &mut CoGraph) -> Result<()> {
    let mut fields = line.split('\t');
    let (Some(lemma), Some(freq), None) = (fields.next(), fields.next(), fields.next()) else {
        return Err(format_err(line_no, "expected `lemma<TAB>freq`"));
    };
    let lemma = Lemma::new(lemma).map_err(|e| format_err(line_no, e.to_string()))?;
    let freq: u64 = freq
        .parse()
        .map_err(|_| format_err(line_no, format!("bad frequency {freq:?}")))?;
    if freq == 0 {
        return Err(format_err(line_no, "vertex frequency must be >= 1"));
    }
    if graph.vertices.insert(lemma, freq).is_some() {
        return Err(format_err(line_no, "duplicate vertex"));
    }
    Ok(())
}

fn parse_edge_line(line: &str, line_no: usize, graph: &mut CoGraph) -> Result<()> {
    let fields: Vec<&str> = line.split('\t').collect();
    let [a, b, cooc, dice] = fields.as_slice() else {
        return Err(format_err(
            line_no,
            "expected `lemma1<TAB>lemma2<TAB>cooc<TAB>dice`",
        ));
    };
    let a = Lemma::new(*a).map_err(|e| format_err(line_no, e.to_string()))?;
    let b = Lemma::new(*b).map_err(|e| format_err(line_no, e.to_string()))?;
    if a >= b {
        return Err(format_err(
            line_no,
            "edge endpoints must satisfy lemma1 < lemma2",
        ));
    }
    for endpoint in [&a, &b] {
        if !graph.vertices.contains_key(endpoint) {
            return Err(format_err(
                line_no,
                format!("edge endpoint {endpoint:?} is not a vertex"),
            ));
        }
    }
    let cooc_count: u64 = cooc
        .parse()
        .map_err(|_| format_err(line_no, format!("bad co-occurrence count {cooc:?}")))?;
    if cooc_count == 0 {
        return Err(format_err(line_no, "co-occurrence count must be >= 1"));
    }
    let dice: f64 = dice
        .parse()
        .map_err(|_| format_err(line_no, format!("bad dice value {dice:?}")))?;
    if !dice.is_finite() || dice <= 0.0 {
        return Err(format_err(line_no, "dice must be finite and positive"));
    }
    let pair = LemmaPair::new(a, b).expect("endpoints are distinct");
    if graph.edges.contains_key(&pair) {
        return Err(format_err(line_no, "duplicate edge"));
    }
    graph.insert_edge(pair, CoEdge { cooc_count, dice });
    Ok(())
}
