//! Graphviz export of query graphs before and after sense partitioning.
//!
//! Conventions: SERP vertices are ellipses, corpus-introduced vertices are
//! triangles, the query vertex is a diamond, and vertices about to be
//! deleted are drawn dashed and gray.

use std::collections::BTreeSet;
use std::fmt::Write;

use sensegraph::corpus::Lemma;
use sensegraph::querygraph::{QueryGraph, VertexOrigin};
use sensegraph::wsi::SenseInventory;
use sensegraph::LemmaPair;

fn quoted(text: &str) -> String {
    format!("\"{}\"", text.replace('\\', "\\\\").replace('"', "\\\""))
}

fn vertex_line(gq: &QueryGraph, lemma: &Lemma, extra: &str) -> String {
    let shape = match gq.vertex(lemma).map(|v| v.origin) {
        Some(VertexOrigin::Corpus) => "triangle",
        _ => "ellipse",
    };
    format!("  {} [shape={shape}{extra}];\n", quoted(lemma.as_str()))
}

fn edge_line(pair: &LemmaPair, weight: f64) -> String {
    format!(
        "  {} -- {} [label=\"{weight:.3}\"];\n",
        quoted(pair.first().as_str()),
        quoted(pair.second().as_str())
    )
}

/// The query graph as built, with `marked` vertices (scheduled for
/// deletion by Curvature) drawn dashed.
pub fn query_graph_dot(gq: &QueryGraph, marked: &BTreeSet<Lemma>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {} {{", quoted(gq.query().as_str()));
    for (lemma, _) in gq.vertices_with_info() {
        let extra = if marked.contains(lemma) {
            ", style=dashed, color=gray50"
        } else {
            ""
        };
        out.push_str(&vertex_line(gq, lemma, extra));
    }
    for (pair, weight) in gq.edges() {
        out.push_str(&edge_line(pair, weight));
    }
    out.push_str("}\n");
    out
}

/// The query graph augmented with the query vertex wired to every hub,
/// as Hyperlex sees it before taking the spanning tree.
pub fn augmented_graph_dot(gq: &QueryGraph, query: &Lemma, hubs: &[Lemma]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {} {{", quoted(query.as_str()));
    let _ = writeln!(out, "  {} [shape=diamond];", quoted(query.as_str()));
    let hub_set: BTreeSet<&Lemma> = hubs.iter().collect();
    for (lemma, _) in gq.vertices_with_info() {
        let extra = if hub_set.contains(lemma) {
            ", penwidth=2"
        } else {
            ""
        };
        out.push_str(&vertex_line(gq, lemma, extra));
    }
    for hub in hubs {
        let _ = writeln!(
            out,
            "  {} -- {} [style=bold];",
            quoted(query.as_str()),
            quoted(hub.as_str())
        );
    }
    for (pair, weight) in gq.edges() {
        out.push_str(&edge_line(pair, weight));
    }
    out.push_str("}\n");
    out
}

/// The partitioned graph: one subgraph per sense cluster, edges restricted
/// to `edges` (Curvature keeps the surviving graph edges, Hyperlex the
/// spanning forest).
pub fn inventory_dot(
    gq: &QueryGraph,
    inventory: &SenseInventory,
    edges: &[(LemmaPair, f64)],
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {} {{", quoted(inventory.query.as_str()));
    for cluster in &inventory.clusters {
        let _ = writeln!(out, "  subgraph cluster_{} {{", cluster.id);
        let _ = writeln!(out, "    label=\"sense {}\";", cluster.id);
        for lemma in &cluster.lemmas {
            let bold = cluster.hub.as_ref() == Some(lemma);
            let extra = if bold { ", penwidth=2" } else { "" };
            out.push_str("  ");
            out.push_str(&vertex_line(gq, lemma, extra));
        }
        out.push_str("  }\n");
    }
    for (pair, weight) in edges {
        out.push_str(&edge_line(pair, *weight));
    }
    out.push_str("}\n");
    out
}
