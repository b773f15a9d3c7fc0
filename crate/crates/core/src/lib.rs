//! Graph-based word sense induction over lexical co-occurrence networks.
//!
//! The pipeline has five stages:
//!
//! 1. [`corpus`] loads pre-lemmatized text and indexes token frequencies.
//! 2. [`cograph`] builds the corpus-wide co-occurrence graph with
//!    Dice-weighted edges and computes small-world statistics.
//! 3. [`querygraph`] assembles a per-query graph from search result lemmas
//!    plus corpus words strongly connected to the query.
//! 4. [`wsi`] partitions the query graph into sense clusters with the
//!    Curvature or Hyperlex algorithm.
//! 5. [`clusterer`] maps each search result to its closest sense and
//!    [`eval`] scores the produced cluster counts against a gold standard.

pub mod cograph;
pub mod clusterer;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod graph;
pub mod querygraph;
pub mod wsi;

pub use cograph::{
    build_cooccurrence_graph, dice, graph_stats, load_graph, save_graph, small_world_check,
    CoEdge, CoGraph, GraphStats, PathSampling, SmallWorldParams, SmallWorldReport,
};
pub use clusterer::{assign_senses, similarity, Assignment, ClusteredSerp};
pub use corpus::{load_corpus, load_stopwords, Corpus, FilterConfig, Lemma, DEFAULT_NOUN_TAGS};
pub use error::{Error, Result};
pub use eval::{deviation_pct, evaluate, CountMode, EvalReport, GoldSenseCounts, QueryEval};
pub use graph::{connected_components, local_clustering_coefficient, LemmaPair, UndirectedGraph};
pub use querygraph::{
    build_query_graph, strong_neighbors, QueryGraph, QueryVertex, Serp, SerpDocument,
    StrongLinkParams, VertexOrigin,
};
pub use wsi::{
    curvature_induce, hyperlex_induce, maximum_spanning_tree, select_hubs, CurvatureParams,
    HyperlexParams, SenseCluster, SenseInventory, WsiAlgorithm,
};
