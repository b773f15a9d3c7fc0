use thiserror::Error;

use crate::corpus::Lemma;

/// Errors produced by the pipeline stages.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lemma {text:?}: {reason}")]
    InvalidLemma { text: String, reason: &'static str },

    #[error("input format error at line {line}: {message}")]
    InputFormat { line: usize, message: String },

    #[error("graph file error at line {line}: {message}")]
    GraphFormat { line: usize, message: String },

    #[error("invalid SERP: {message}")]
    SerpFormat { message: String },

    #[error("invalid graph: {message}")]
    InvalidGraph { message: String },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("graph is empty")]
    EmptyGraph,

    #[error("vertex {lemma:?} is not in the graph")]
    UnknownVertex { lemma: Lemma },

    #[error(
        "random-graph baseline undefined for {n_vertices} vertices and average degree {avg_degree}"
    )]
    UndefinedBaseline { n_vertices: usize, avg_degree: f64 },

    #[error("query graph for {query:?} is empty: the corpus cannot support this query")]
    EmptyQueryGraph { query: Lemma },

    #[error("sense inventory for {query:?} is empty: every vertex was deleted")]
    EmptyInventory { query: Lemma },

    #[error("no hubs found for {query:?}: the query graph is too sparse")]
    NoHubs { query: Lemma },

    #[error("query {query:?} is missing from the gold standard")]
    MissingGoldEntry { query: Lemma },

    #[error("gold standard contains no entries")]
    EmptyGold,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
