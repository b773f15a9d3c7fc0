//! Per-query graphs: SERP lemmas plus strong corpus neighbors of the query,
//! connected by Dice-weighted corpus edges.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::cograph::CoGraph;
use crate::corpus::Lemma;
use crate::error::{Error, Result};
use crate::graph::{LemmaPair, UndirectedGraph};

/// One search result: rank, raw text and its pre-lemmatized content words.
/// The lemma list is expected to exclude stopwords and the query itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerpDocument {
    pub rank: u32,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub snippet: String,
    pub lemmas: Vec<Lemma>,
}

/// A search engine results page for a single-lemma query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Serp {
    pub query: Lemma,
    pub documents: Vec<SerpDocument>,
}

impl Serp {
    /// Parses a SERP from JSON, lowercasing document lemmas, dropping any
    /// occurrence of the query lemma and validating rank uniqueness.
    pub fn from_json_reader<R: Read>(reader: R) -> Result<Serp> {
        let mut serp: Serp = serde_json::from_reader(reader)?;
        serp.normalize()?;
        Ok(serp)
    }

    fn normalize(&mut self) -> Result<()> {
        let mut ranks = BTreeSet::new();
        for doc in &mut self.documents {
            if doc.rank == 0 {
                return Err(Error::SerpFormat {
                    message: "document ranks must be >= 1".into(),
                });
            }
            if !ranks.insert(doc.rank) {
                return Err(Error::SerpFormat {
                    message: format!("duplicate document rank {}", doc.rank),
                });
            }
            let mut lemmas = Vec::with_capacity(doc.lemmas.len());
            for lemma in doc.lemmas.drain(..) {
                let lemma = Lemma::lowercased(lemma.as_str())?;
                if lemma != self.query {
                    lemmas.push(lemma);
                }
            }
            doc.lemmas = lemmas;
        }
        Ok(())
    }
}

/// Thresholds for attaching corpus words to a query graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrongLinkParams {
    /// Minimum conditional frequency `cooc(q, w) / freq(q)`.
    pub min_cond_prob: f64,
    /// Minimum Dice between the query and a corpus neighbor.
    pub min_dice_query: f64,
    /// Minimum Dice for an edge between two query-graph vertices.
    pub min_dice_edge: f64,
}

impl Default for StrongLinkParams {
    fn default() -> Self {
        StrongLinkParams {
            min_cond_prob: 0.01,
            min_dice_query: 0.005,
            min_dice_edge: 0.005,
        }
    }
}

/// Where a query-graph vertex came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexOrigin {
    /// Appeared in a search result.
    Serp,
    /// Added as a strong corpus neighbor of the query.
    Corpus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryVertex {
    pub origin: VertexOrigin,
    pub corpus_freq: u64,
}

/// The graph a query is disambiguated on. The query lemma itself is not a
/// vertex; every vertex has degree >= 1 and every edge carries the corpus
/// Dice weight of its endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryGraph {
    query: Lemma,
    vertices: BTreeMap<Lemma, QueryVertex>,
    edges: BTreeMap<LemmaPair, f64>,
    adjacency: BTreeMap<Lemma, Vec<Lemma>>,
}

impl QueryGraph {
    /// Builds a query graph from explicit parts, validating the type's
    /// invariants. Mostly useful for tests and tools; the pipeline path is
    /// [`build_query_graph`].
    pub fn from_parts(
        query: Lemma,
        vertices: impl IntoIterator<Item = (Lemma, QueryVertex)>,
        edges: impl IntoIterator<Item = (Lemma, Lemma, f64)>,
    ) -> Result<Self> {
        let vertices: BTreeMap<Lemma, QueryVertex> = vertices.into_iter().collect();
        if vertices.contains_key(&query) {
            return Err(Error::InvalidGraph {
                message: format!("query lemma {query:?} must not be a vertex"),
            });
        }
        let mut graph = QueryGraph {
            query,
            vertices,
            edges: BTreeMap::new(),
            adjacency: BTreeMap::new(),
        };
        for (a, b, dice) in edges {
            if !graph.vertices.contains_key(&a) || !graph.vertices.contains_key(&b) {
                return Err(Error::InvalidGraph {
                    message: format!("edge {a:?}-{b:?} references a missing vertex"),
                });
            }
            if !dice.is_finite() || dice <= 0.0 {
                return Err(Error::InvalidGraph {
                    message: format!("edge {a:?}-{b:?} has non-positive weight"),
                });
            }
            let pair = LemmaPair::new(a, b).ok_or_else(|| Error::InvalidGraph {
                message: "self-loop edge".into(),
            })?;
            if graph.edges.contains_key(&pair) {
                return Err(Error::InvalidGraph {
                    message: format!("duplicate edge {pair:?}"),
                });
            }
            graph.insert_edge(pair, dice);
        }
        if let Some(isolated) = graph.vertices.keys().find(|v| graph.degree(v) == 0) {
            return Err(Error::InvalidGraph {
                message: format!("vertex {isolated:?} has degree 0"),
            });
        }
        Ok(graph)
    }

    fn insert_edge(&mut self, pair: LemmaPair, dice: f64) {
        self.adjacency
            .entry(pair.first().clone())
            .or_default()
            .push(pair.second().clone());
        self.adjacency
            .entry(pair.second().clone())
            .or_default()
            .push(pair.first().clone());
        self.edges.insert(pair, dice);
    }

    pub fn query(&self) -> &Lemma {
        &self.query
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, v: &Lemma) -> Option<&QueryVertex> {
        self.vertices.get(v)
    }

    pub fn vertices_with_info(&self) -> impl Iterator<Item = (&Lemma, &QueryVertex)> {
        self.vertices.iter()
    }

    pub fn edge_dice(&self, a: &Lemma, b: &Lemma) -> Option<f64> {
        let pair = LemmaPair::new(a.clone(), b.clone())?;
        self.edges.get(&pair).copied()
    }

    /// Edges in lexicographic pair order.
    pub fn edges(&self) -> impl Iterator<Item = (&LemmaPair, f64)> {
        self.edges.iter().map(|(p, &d)| (p, d))
    }

    /// Largest edge weight, 0 for an edgeless graph.
    pub fn max_dice(&self) -> f64 {
        self.edges.values().copied().fold(0.0, f64::max)
    }
}

impl UndirectedGraph for QueryGraph {
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

/// Corpus words strongly connected to `q`: neighbors whose conditional
/// frequency and Dice both clear the thresholds. Empty when `q` is not in
/// the graph.
pub fn strong_neighbors(
    graph: &CoGraph,
    q: &Lemma,
    params: &StrongLinkParams,
) -> BTreeSet<Lemma> {
    let freq_q = graph.frequency(q);
    if freq_q == 0 {
        return BTreeSet::new();
    }
    let mut strong = BTreeSet::new();
    for w in graph.neighbors(q) {
        let edge = graph.edge(q, w).expect("adjacency implies edge");
        let cond = edge.cooc_count as f64 / freq_q as f64;
        if cond >= params.min_cond_prob && edge.dice >= params.min_dice_query {
            strong.insert(w.clone());
        }
    }
    strong
}

/// Builds the query graph for `serp` against a corpus graph.
///
/// Vertex candidates are the union of all document lemmas (origin `serp`)
/// and the strong corpus neighbors of the query (origin `corpus`; the serp
/// origin wins on overlap). Candidate pairs whose corpus Dice clears
/// `min_dice_edge` are connected; vertices left with degree 0 are removed.
pub fn build_query_graph(
    graph: &CoGraph,
    serp: &Serp,
    params: &StrongLinkParams,
) -> Result<QueryGraph> {
    let mut candidates: BTreeMap<Lemma, VertexOrigin> = BTreeMap::new();
    for doc in &serp.documents {
        for lemma in &doc.lemmas {
            if *lemma != serp.query {
                candidates.insert(lemma.clone(), VertexOrigin::Serp);
            }
        }
    }
    for lemma in strong_neighbors(graph, &serp.query, params) {
        candidates.entry(lemma).or_insert(VertexOrigin::Corpus);
    }

    let mut result = QueryGraph {
        query: serp.query.clone(),
        vertices: BTreeMap::new(),
        edges: BTreeMap::new(),
        adjacency: BTreeMap::new(),
    };
    let lemmas: Vec<&Lemma> = candidates.keys().collect();
    for (i, a) in lemmas.iter().enumerate() {
        for b in &lemmas[i + 1..] {
            if let Some(edge) = graph.edge(a, b) {
                if edge.dice >= params.min_dice_edge {
                    let pair = LemmaPair::new((*a).clone(), (*b).clone())
                        .expect("candidates are distinct");
                    result.insert_edge(pair, edge.dice);
                }
            }
        }
    }
    for (lemma, origin) in candidates {
        if result.adjacency.contains_key(&lemma) {
            let corpus_freq = graph.frequency(&lemma);
            result
                .vertices
                .insert(lemma, QueryVertex { origin, corpus_freq });
        }
    }
    if result.vertices.is_empty() {
        return Err(Error::EmptyQueryGraph {
            query: serp.query.clone(),
        });
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cograph::build_cooccurrence_graph;
    use crate::corpus::{load_corpus, FilterConfig};

    fn lemma(s: &str) -> Lemma {
        Lemma::new(s).unwrap()
    }

    fn graph_of(lines: &str) -> CoGraph {
        let corpus = load_corpus(lines.as_bytes(), &FilterConfig::keep_all()).unwrap();
        build_cooccurrence_graph(&corpus).unwrap()
    }

    /// A corpus where q has two neighbors: w passes both constraints,
    /// x fails the conditional-frequency constraint.
    ///
    /// freq(q) = 1000 via padding; cooc(q, w) = 100 of freq(w) = 200:
    /// cond 0.1, dice 200/1200. cooc(q, x) = 5, freq(x) = 10:
    /// cond 0.005 < 0.01 despite dice 10/1010 ~ 0.0099 >= 0.005.
    fn strong_fixture() -> CoGraph {
        let mut text = String::new();
        for _ in 0..100 {
            text.push_str("q w\n");
        }
        for _ in 0..5 {
            text.push_str("q x\nx\n");
        }
        for _ in 0..895 {
            text.push_str("q\n");
        }
        for _ in 0..100 {
            text.push_str("w\n");
        }
        graph_of(&text)
    }

    #[test]
    fn strong_neighbors_apply_both_constraints() {
        let graph = strong_fixture();
        assert_eq!(graph.frequency(&lemma("q")), 1000);
        assert_eq!(graph.frequency(&lemma("x")), 10);
        let strong = strong_neighbors(&graph, &lemma("q"), &StrongLinkParams::default());
        assert!(strong.contains(&lemma("w")));
        assert!(!strong.contains(&lemma("x")));
        assert_eq!(strong.len(), 1);
    }

    #[test]
    fn strong_neighbors_of_absent_query_is_empty() {
        let graph = graph_of("a b\n");
        let strong = strong_neighbors(&graph, &lemma("q"), &StrongLinkParams::default());
        assert!(strong.is_empty());
    }

    #[test]
    fn strong_neighbors_simple_inclusion() {
        // freq(q) = 100, cooc(q, w) = 5, freq(w) = 100:
        // cond 0.05 >= 0.01 and dice 10/200 = 0.05 >= 0.005.
        let mut text = String::new();
        for _ in 0..5 {
            text.push_str("q w\n");
        }
        for _ in 0..95 {
            text.push_str("q\nw\n");
        }
        let graph = graph_of(&text);
        let strong = strong_neighbors(&graph, &lemma("q"), &StrongLinkParams::default());
        assert_eq!(strong, BTreeSet::from([lemma("w")]));
    }

    fn serp_with(query: &str, docs: &[&[&str]]) -> Serp {
        Serp {
            query: lemma(query),
            documents: docs
                .iter()
                .enumerate()
                .map(|(i, lemmas)| SerpDocument {
                    rank: (i + 1) as u32,
                    title: String::new(),
                    snippet: String::new(),
                    lemmas: lemmas.iter().map(|l| lemma(l)).collect(),
                })
                .collect(),
        }
    }

    /// Corpus dices: a-b = 2/(50+50) = 0.02 passes the edge cutoff;
    /// a-c = 2/(50+617) < 0.005 fails; b-c never co-occur.
    fn edge_cutoff_fixture() -> CoGraph {
        let mut text = String::new();
        text.push_str("a b\na c\n");
        for _ in 0..48 {
            text.push_str("a\n");
        }
        for _ in 0..49 {
            text.push_str("b\n");
        }
        for _ in 0..616 {
            text.push_str("c\n");
        }
        graph_of(&text)
    }

    #[test]
    fn build_applies_edge_cutoff_and_prunes_isolated() {
        let graph = edge_cutoff_fixture();
        let serp = serp_with("q", &[&["a", "b", "c"]]);
        let gq = build_query_graph(&graph, &serp, &StrongLinkParams::default()).unwrap();
        assert_eq!(gq.vertex_count(), 2);
        assert!(gq.vertex(&lemma("a")).is_some());
        assert!(gq.vertex(&lemma("b")).is_some());
        assert!(gq.vertex(&lemma("c")).is_none());
        assert_eq!(gq.edge_count(), 1);
        assert_eq!(gq.edge_dice(&lemma("a"), &lemma("b")), Some(0.02));
    }

    #[test]
    fn build_records_origin_and_corpus_freq() {
        let graph = strong_fixture();
        // w arrives both from the SERP and as a strong neighbor: serp wins.
        let serp = serp_with("q", &[&["w", "v"]]);
        // v is unknown to the corpus, so it cannot get edges; the only
        // surviving pair must come through a strong corpus neighbor. Here
        // w's only candidate partner is v, so nothing survives.
        let err = build_query_graph(&graph, &serp, &StrongLinkParams::default()).unwrap_err();
        assert!(matches!(err, Error::EmptyQueryGraph { .. }));
    }

    #[test]
    fn build_adds_strong_neighbors_with_corpus_origin() {
        // SERP contributes a and b; corpus contributes w (strong neighbor
        // of q) which is adjacent to a in the corpus.
        let mut text = String::new();
        for _ in 0..10 {
            text.push_str("q w\n");
        }
        for _ in 0..10 {
            text.push_str("w a\na b\n");
        }
        let graph = graph_of(&text);
        let serp = serp_with("q", &[&["a"], &["b"]]);
        let gq = build_query_graph(&graph, &serp, &StrongLinkParams::default()).unwrap();
        assert_eq!(
            gq.vertex(&lemma("w")).map(|v| v.origin),
            Some(VertexOrigin::Corpus)
        );
        assert_eq!(
            gq.vertex(&lemma("a")).map(|v| v.origin),
            Some(VertexOrigin::Serp)
        );
        assert_eq!(gq.vertex(&lemma("a")).map(|v| v.corpus_freq), Some(20));
        // Every query-graph edge weight equals the corpus Dice bit-for-bit.
        for (pair, dice_val) in gq.edges() {
            assert_eq!(
                dice_val,
                crate::cograph::dice(&graph, pair.first(), pair.second())
            );
        }
    }

    #[test]
    fn query_lemma_never_becomes_a_vertex() {
        let mut text = String::new();
        for _ in 0..10 {
            text.push_str("q w\nw a\n");
        }
        let graph = graph_of(&text);
        // The SERP lemma list claims to contain the query itself.
        let serp = serp_with("q", &[&["q", "a", "w"]]);
        let gq = build_query_graph(&graph, &serp, &StrongLinkParams::default()).unwrap();
        assert!(gq.vertex(&lemma("q")).is_none());
        assert!(gq.vertex(&lemma("w")).is_some());
    }

    #[test]
    fn fully_disconnected_candidates_error() {
        let graph = graph_of("a b\n");
        let serp = serp_with("q", &[&["x", "y"]]);
        let err = build_query_graph(&graph, &serp, &StrongLinkParams::default()).unwrap_err();
        assert!(matches!(err, Error::EmptyQueryGraph { .. }));
    }

    #[test]
    fn from_parts_validates_invariants() {
        let v = |o, f| QueryVertex {
            origin: o,
            corpus_freq: f,
        };
        let ok = QueryGraph::from_parts(
            lemma("q"),
            [
                (lemma("a"), v(VertexOrigin::Serp, 3)),
                (lemma("b"), v(VertexOrigin::Corpus, 2)),
            ],
            [(lemma("a"), lemma("b"), 0.5)],
        );
        assert!(ok.is_ok());

        // Query as vertex.
        assert!(QueryGraph::from_parts(
            lemma("a"),
            [(lemma("a"), v(VertexOrigin::Serp, 1))],
            [],
        )
        .is_err());

        // Degree-0 vertex.
        assert!(QueryGraph::from_parts(
            lemma("q"),
            [(lemma("a"), v(VertexOrigin::Serp, 1))],
            [],
        )
        .is_err());

        // Dangling edge endpoint.
        assert!(QueryGraph::from_parts(
            lemma("q"),
            [(lemma("a"), v(VertexOrigin::Serp, 1))],
            [(lemma("a"), lemma("b"), 0.1)],
        )
        .is_err());
    }

    #[test]
    fn serp_json_round_trip_and_normalization() {
        let json = r#"{
            "query": "лук",
            "documents": [
                {"rank": 1, "title": "T", "snippet": "S", "lemmas": ["Стрела", "лук", "охотник"]}
            ]
        }"#;
        let serp = Serp::from_json_reader(json.as_bytes()).unwrap();
        assert_eq!(serp.documents[0].lemmas, vec![lemma("стрела"), lemma("охотник")]);
    }

    #[test]
    fn serp_rejects_duplicate_ranks() {
        let json = r#"{
            "query": "q",
            "documents": [
                {"rank": 1, "lemmas": ["a"]},
                {"rank": 1, "lemmas": ["b"]}
            ]
        }"#;
        assert!(matches!(
            Serp::from_json_reader(json.as_bytes()),
            Err(Error::SerpFormat { .. })
        ));
    }

    #[test]
    fn serp_rejects_rank_zero() {
        let json = r#"{"query": "q", "documents": [{"rank": 0, "lemmas": []}]}"#;
        assert!(Serp::from_json_reader(json.as_bytes()).is_err());
    }
}
