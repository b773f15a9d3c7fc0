//! Shared undirected-graph machinery: unordered edge keys, neighborhood
//! queries, clustering coefficients, components and BFS distances.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::corpus::Lemma;
use crate::error::{Error, Result};

/// An unordered pair of distinct lemmas; the smaller endpoint is stored
/// first, so `(a, b)` and `(b, a)` map to the same key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LemmaPair {
    first: Lemma,
    second: Lemma,
}

impl LemmaPair {
    /// Returns `None` for self-pairs.
    pub fn new(a: Lemma, b: Lemma) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(LemmaPair {
                first: a,
                second: b,
            }),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(LemmaPair {
                first: b,
                second: a,
            }),
        }
    }

    pub fn first(&self) -> &Lemma {
        &self.first
    }

    pub fn second(&self) -> &Lemma {
        &self.second
    }

    /// The endpoint opposite to `v`, if `v` is an endpoint.
    pub fn other(&self, v: &Lemma) -> Option<&Lemma> {
        if *v == self.first {
            Some(&self.second)
        } else if *v == self.second {
            Some(&self.first)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &Lemma) -> bool {
        *v == self.first || *v == self.second
    }
}

/// Read access to an undirected graph over lemma vertices.
pub trait UndirectedGraph {
    fn vertex_count(&self) -> usize;
    fn contains_vertex(&self, v: &Lemma) -> bool;
    fn vertices(&self) -> impl Iterator<Item = &Lemma>;
    /// Neighbors of `v`; empty for unknown vertices.
    fn neighbors(&self, v: &Lemma) -> &[Lemma];
    fn has_edge(&self, a: &Lemma, b: &Lemma) -> bool;

    fn degree(&self, v: &Lemma) -> usize {
        self.neighbors(v).len()
    }
}

/// Watts-Strogatz local clustering coefficient of `v`: the fraction of
/// possible edges among its neighbors that are present. Vertices of degree
/// 0 or 1 get coefficient 0.
pub fn local_clustering_coefficient<G: UndirectedGraph>(graph: &G, v: &Lemma) -> Result<f64> {
    if !graph.contains_vertex(v) {
        return Err(Error::UnknownVertex { lemma: v.clone() });
    }
    let neighbors = graph.neighbors(v);
    let degree = neighbors.len();
    if degree < 2 {
        return Ok(0.0);
    }
    let neighborhood: HashSet<&Lemma> = neighbors.iter().collect();
    // Each neighbor-neighbor edge is seen from both endpoints.
    let mut links2: u64 = 0;
    for u in neighbors {
        links2 += graph
            .neighbors(u)
            .iter()
            .filter(|w| neighborhood.contains(w))
            .count() as u64;
    }
    let links = (links2 / 2) as f64;
    let possible = (degree * (degree - 1) / 2) as f64;
    Ok(links / possible)
}

/// Partitions the graph into maximal connected vertex sets, ordered by
/// descending size, ties broken by the lexicographically smallest member.
pub fn connected_components<G: UndirectedGraph>(graph: &G) -> Vec<BTreeSet<Lemma>> {
    let mut seen: HashSet<&Lemma> = HashSet::with_capacity(graph.vertex_count());
    let mut components = Vec::new();
    for start in graph.vertices() {
        if seen.contains(start) {
            continue;
        }
        let mut component = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(v) = queue.pop_front() {
            component.insert(v.clone());
            for u in graph.neighbors(v) {
                if seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        components.push(component);
    }
    sort_components(&mut components);
    components
}

/// Orders components by descending size, then by smallest member.
pub(crate) fn sort_components(components: &mut [BTreeSet<Lemma>]) {
    components.sort_by(|a, b| {
        b.len()
            .cmp(&a.len())
            .then_with(|| a.first().cmp(&b.first()))
    });
}

/// Sum and count of BFS distances from `source` to every other reachable
/// vertex.
pub(crate) fn bfs_distance_sum<G: UndirectedGraph>(graph: &G, source: &Lemma) -> (u128, u64) {
    let mut dist: HashMap<&Lemma, u64> = HashMap::new();
    dist.insert(source, 0);
    let mut queue = VecDeque::from([source]);
    let mut sum: u128 = 0;
    let mut count: u64 = 0;
    while let Some(v) = queue.pop_front() {
        let d = dist[v];
        for u in graph.neighbors(v) {
            if !dist.contains_key(u) {
                dist.insert(u, d + 1);
                sum += (d + 1) as u128;
                count += 1;
                queue.push_back(u);
            }
        }
    }
    (sum, count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lemma(s: &str) -> Lemma {
        Lemma::new(s).unwrap()
    }

    #[test]
    fn pair_is_unordered_and_rejects_self_loops() {
        let ab = LemmaPair::new(lemma("a"), lemma("b")).unwrap();
        let ba = LemmaPair::new(lemma("b"), lemma("a")).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(ab.first().as_str(), "a");
        assert!(LemmaPair::new(lemma("a"), lemma("a")).is_none());
    }

    #[test]
    fn pair_other_endpoint() {
        let ab = LemmaPair::new(lemma("a"), lemma("b")).unwrap();
        assert_eq!(ab.other(&lemma("a")), Some(&lemma("b")));
        assert_eq!(ab.other(&lemma("b")), Some(&lemma("a")));
        assert_eq!(ab.other(&lemma("c")), None);
    }
}
