//! Shared oracles and generators for the integration and acceptance suites.
//!
//! The reference implementations here deliberately take the slow, obvious
//! route so they stay independent of the library's data structures.

#![allow(dead_code)]

use std::collections::BTreeMap;

use sensegraph::corpus::{load_corpus, Corpus, FilterConfig, Lemma};
use sensegraph::querygraph::{QueryGraph, QueryVertex, Serp, SerpDocument, VertexOrigin};
use sensegraph::CoGraph;

pub fn lemma(s: &str) -> Lemma {
    Lemma::new(s).unwrap()
}

// ---------------------------------------------------------------------
// Naive quadratic co-occurrence reference
// ---------------------------------------------------------------------

/// Reference co-occurrence graph: frequencies and per-pair adjacency counts
/// recomputed from scratch for every vocabulary pair.
pub struct ReferenceGraph {
    pub freqs: BTreeMap<Lemma, u64>,
    pub edges: BTreeMap<(Lemma, Lemma), (u64, f64)>,
}

pub fn naive_reference(corpus: &Corpus) -> ReferenceGraph {
    let mut freqs: BTreeMap<Lemma, u64> = BTreeMap::new();
    for sentence in corpus.sentences() {
        for lemma in sentence {
            *freqs.entry(lemma.clone()).or_insert(0) += 1;
        }
    }
    let vocab: Vec<&Lemma> = freqs.keys().collect();
    let mut edges = BTreeMap::new();
    for i in 0..vocab.len() {
        for j in (i + 1)..vocab.len() {
            let (a, b) = (vocab[i], vocab[j]);
            let mut count = 0u64;
            for sentence in corpus.sentences() {
                for w in sentence.windows(2) {
                    if (&w[0] == a && &w[1] == b) || (&w[0] == b && &w[1] == a) {
                        count += 1;
                    }
                }
            }
            if count > 0 {
                let dice = 2.0 * count as f64 / (freqs[a] + freqs[b]) as f64;
                edges.insert((a.clone(), b.clone()), (count, dice));
            }
        }
    }
    ReferenceGraph { freqs, edges }
}

/// Panics unless `graph` matches the reference exactly (Dice to 1e-12).
pub fn assert_matches_reference(graph: &CoGraph, reference: &ReferenceGraph) {
    let got_vertices: BTreeMap<Lemma, u64> = graph
        .vertices_with_freq()
        .map(|(l, f)| (l.clone(), f))
        .collect();
    assert_eq!(got_vertices, reference.freqs, "vertex frequencies differ");

    let got_edges: BTreeMap<(Lemma, Lemma), (u64, f64)> = graph
        .edges()
        .map(|(p, e)| {
            (
                (p.first().clone(), p.second().clone()),
                (e.cooc_count, e.dice),
            )
        })
        .collect();
    assert_eq!(
        got_edges.keys().collect::<Vec<_>>(),
        reference.edges.keys().collect::<Vec<_>>(),
        "edge sets differ"
    );
    for (key, (count, dice)) in &reference.edges {
        let (got_count, got_dice) = got_edges[key];
        assert_eq!(got_count, *count, "count differs on {key:?}");
        assert!(
            (got_dice - dice).abs() <= 1e-12,
            "dice differs on {key:?}: {got_dice} vs {dice}"
        );
    }
}

// ---------------------------------------------------------------------
// Exhaustive maximum spanning tree
// ---------------------------------------------------------------------

/// Maximum total weight over all spanning trees of a graph on vertices
/// `0..n`, found by trying every (n-1)-subset of the edges. `None` when the
/// graph is disconnected.
pub fn brute_force_max_spanning_weight(n: usize, edges: &[(usize, usize, f64)]) -> Option<f64> {
    if n <= 1 {
        return Some(0.0);
    }
    let mut best = None;
    let mut chosen = Vec::with_capacity(n - 1);
    enumerate_subsets(edges, n, 0, &mut chosen, &mut best);
    best
}

fn enumerate_subsets(
    edges: &[(usize, usize, f64)],
    n: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    best: &mut Option<f64>,
) {
    if chosen.len() == n - 1 {
        if spans(n, edges, chosen) {
            let weight: f64 = chosen.iter().map(|&i| edges[i].2).sum();
            *best = Some(best.map_or(weight, |b: f64| b.max(weight)));
        }
        return;
    }
    let need = n - 1 - chosen.len();
    if edges.len() - start < need {
        return;
    }
    for i in start..=(edges.len() - need) {
        chosen.push(i);
        enumerate_subsets(edges, n, i + 1, chosen, best);
        chosen.pop();
    }
}

fn spans(n: usize, edges: &[(usize, usize, f64)], chosen: &[usize]) -> bool {
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut parent: Vec<usize> = (0..n).collect();
    let mut merged = 0;
    for &i in chosen {
        let (a, b, _) = edges[i];
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            merged += 1;
        }
    }
    merged == n - 1
}

// ---------------------------------------------------------------------
// Corpus and query graph construction helpers
// ---------------------------------------------------------------------

/// Renders id sentences as corpus text, one `w{id}` token per id.
pub fn corpus_text_from_ids(sentences: &[Vec<usize>]) -> String {
    let mut text = String::new();
    for sentence in sentences {
        let words: Vec<String> = sentence.iter().map(|id| format!("w{id}")).collect();
        text.push_str(&words.join(" "));
        text.push('\n');
    }
    text
}

pub fn corpus_from_ids(sentences: &[Vec<usize>]) -> Corpus {
    let text = corpus_text_from_ids(sentences);
    load_corpus(text.as_bytes(), &FilterConfig::keep_all()).unwrap()
}

/// Builds a validated query graph on vertices `v{i}` from raw edge triples
/// (weights given in thousandths). Returns `None` when no usable edge
/// remains after dropping self-loops and duplicates.
pub fn query_graph_from_triples(
    freqs: &[u64],
    triples: &[(usize, usize, u32)],
) -> Option<QueryGraph> {
    let mut edges: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for &(a, b, w) in triples {
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        edges.entry(key).or_insert(w.max(1) as f64 / 1000.0);
    }
    if edges.is_empty() {
        return None;
    }
    let mut vertices: BTreeMap<Lemma, QueryVertex> = BTreeMap::new();
    for &(a, b) in edges.keys() {
        for v in [a, b] {
            vertices.insert(
                Lemma::new(format!("v{v}")).unwrap(),
                QueryVertex {
                    origin: VertexOrigin::Serp,
                    corpus_freq: freqs.get(v).copied().unwrap_or(1),
                },
            );
        }
    }
    let edge_list: Vec<(Lemma, Lemma, f64)> = edges
        .into_iter()
        .map(|((a, b), w)| {
            (
                Lemma::new(format!("v{a}")).unwrap(),
                Lemma::new(format!("v{b}")).unwrap(),
                w,
            )
        })
        .collect();
    Some(QueryGraph::from_parts(lemma("запрос"), vertices, edge_list).unwrap())
}

// ---------------------------------------------------------------------
// Planted two-sense fixture
// ---------------------------------------------------------------------

pub const PLANTED_QUERY: &str = "ключ";
pub const SENSE_A: [&str; 5] = ["дверь", "замок", "квартира", "металл", "карман"];
pub const SENSE_B: [&str; 5] = ["вода", "родник", "лес", "поляна", "ручей"];
const FILLER: [&str; 8] = [
    "город",
    "дом",
    "человек",
    "работа",
    "улица",
    "машина",
    "день",
    "ночь",
];
const JUNK: [&str; 6] = ["сайт", "страница", "портал", "форум", "новость", "реклама"];

/// A 200-sentence corpus with two planted senses of one ambiguous query,
/// plus a ten-document SERP (five per sense) whose ground truth is known.
pub struct PlantedFixture {
    pub corpus_text: String,
    pub serp: Serp,
    /// Index into [`SENSE_A`]/[`SENSE_B`] marker sets per document.
    pub truth: Vec<Sense>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    A,
    B,
}

pub fn planted_fixture() -> PlantedFixture {
    let mut lines = Vec::with_capacity(200);
    for sense in [&SENSE_A, &SENSE_B] {
        for i in 0..80 {
            let j = i % 5;
            let k = if (i / 5) % 2 == 0 {
                (j + 1) % 5
            } else {
                (j + 2) % 5
            };
            lines.push(format!("{PLANTED_QUERY} {} {}", sense[j], sense[k]));
        }
    }
    for i in 0..40 {
        lines.push(format!(
            "{} {} {}",
            FILLER[i % 8],
            FILLER[(i + 1) % 8],
            FILLER[(i + 3) % 8]
        ));
    }
    assert_eq!(lines.len(), 200);
    let corpus_text = lines.join("\n") + "\n";

    let docs: [(&[&str], Sense); 10] = [
        (&[SENSE_A[0], SENSE_A[1], JUNK[0]], Sense::A),
        (&[SENSE_A[2], SENSE_A[3]], Sense::A),
        (&[SENSE_A[1], SENSE_A[4], JUNK[1]], Sense::A),
        (&[SENSE_A[0], SENSE_A[2], SENSE_A[3]], Sense::A),
        (&[SENSE_A[4], SENSE_A[1], JUNK[2]], Sense::A),
        (&[SENSE_B[0], SENSE_B[1], JUNK[3]], Sense::B),
        (&[SENSE_B[2], SENSE_B[3]], Sense::B),
        (&[SENSE_B[4], SENSE_B[0], JUNK[4]], Sense::B),
        (&[SENSE_B[1], SENSE_B[2], SENSE_B[3]], Sense::B),
        (&[SENSE_B[4], SENSE_B[3], JUNK[5]], Sense::B),
    ];
    let documents = docs
        .iter()
        .enumerate()
        .map(|(i, (lemmas, _))| SerpDocument {
            rank: (i + 1) as u32,
            title: format!("результат {}", i + 1),
            snippet: String::new(),
            lemmas: lemmas.iter().map(|l| lemma(l)).collect(),
        })
        .collect();
    PlantedFixture {
        corpus_text,
        serp: Serp {
            query: lemma(PLANTED_QUERY),
            documents,
        },
        truth: docs.iter().map(|(_, s)| *s).collect(),
    }
}
