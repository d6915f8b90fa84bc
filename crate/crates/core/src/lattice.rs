//! The directed graph of clusters: nodes are concept extents, edges the
//! covering pairs of the subset order (the Hasse diagram), directed from the
//! smaller cluster to the larger one.

use alloc::vec::Vec;

use crate::bitset::{cmp_size_then_members, BitSet};
use crate::error::{Error, Result};
use crate::eval::ClusterHierarchy;
use crate::miner::ConceptSet;

/// Clusters of data points linked by the covering relation.
///
/// Graphs built here number their nodes by ascending cluster size, then
/// lexicographic member list, so the empty cluster (when present) is node 0
/// and the full point set is the last node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeGraph {
    n: usize,
    nodes: Vec<BitSet>,
    edges: Vec<(usize, usize)>,
}

impl LatticeGraph {
    /// Computes the covering graph of an arbitrary family of distinct
    /// clusters over `{0..n}`.
    pub fn from_clusters(n: usize, clusters: Vec<BitSet>) -> Result<Self> {
        let nodes = sorted_distinct(n, clusters)?;
        let edges = covers_by_subset_scan(&nodes);
        Ok(LatticeGraph { n, nodes, edges })
    }

    /// Reassembles a graph from stored parts without recomputing edges.
    pub fn from_parts(
        n: usize,
        nodes: Vec<BitSet>,
        mut edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        for node in &nodes {
            if node.universe() != n {
                return Err(Error::UniverseMismatch {
                    expected: n,
                    found: node.universe(),
                });
            }
        }
        let mut sorted: Vec<&BitSet> = nodes.iter().collect();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateCluster(w[0].to_vec()));
        }
        for &(a, b) in &edges {
            let bad = a.max(b);
            if bad >= nodes.len() {
                return Err(Error::IndexOutOfRange {
                    index: bad,
                    len: nodes.len(),
                });
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(LatticeGraph { n, nodes, edges })
    }

    /// Number of data points the clusters range over.
    pub fn num_points(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[BitSet] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &BitSet {
        &self.nodes[id]
    }

    /// Edges `(from, to)` with `node(from) ⊊ node(to)`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Out-neighbors of each node.
    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut adj = alloc::vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
        }
        adj
    }

    /// Nodes reachable from `from` (including itself).
    pub fn reachable_from(&self, from: usize) -> BitSet {
        let adj = self.successors();
        let mut seen = BitSet::new(self.nodes.len());
        let mut stack = alloc::vec![from];
        seen.insert(from);
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// The node clusters as a hierarchy for purity evaluation.
    pub fn hierarchy(&self) -> Result<ClusterHierarchy> {
        ClusterHierarchy::new(self.n, self.nodes.clone())
    }
}

fn sorted_distinct(n: usize, mut clusters: Vec<BitSet>) -> Result<Vec<BitSet>> {
    if let Some(bad) = clusters.iter().find(|c| c.universe() != n) {
        return Err(Error::UniverseMismatch {
            expected: n,
            found: bad.universe(),
        });
    }
    clusters.sort_by(cmp_size_then_members);
    if let Some(w) = clusters.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateCluster(w[0].to_vec()));
    }
    Ok(clusters)
}

/// Builds the Hasse diagram of the concept extents.
///
/// When the formal context is known (attached by the miner, or recoverable
/// from the object concepts) and the concepts check out against it, upper
/// covers are found by closing `A ∪ {g}` for each concept `A`. Otherwise the
/// generic size-ordered subset scan is used.
pub fn build_hasse(concepts: &ConceptSet) -> Result<LatticeGraph> {
    let n = concepts.num_objects();
    let mut pairs: Vec<(&BitSet, &BitSet)> =
        concepts.iter().map(|c| (&c.extent, &c.intent)).collect();
    pairs.sort_by(|a, b| cmp_size_then_members(a.0, b.0));
    if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::DuplicateCluster(w[0].0.to_vec()));
    }
    let nodes: Vec<BitSet> = pairs.iter().map(|p| p.0.clone()).collect();
    let intents: Vec<&BitSet> = pairs.iter().map(|p| p.1).collect();

    let rows = match concepts.context() {
        Some(rows) => Some(rows.to_vec()),
        None => recover_rows(n, concepts.num_items(), &nodes, &intents),
    };
    let edges = rows
        .filter(|rows| all_are_concepts(rows, concepts.num_items(), &nodes, &intents))
        .and_then(|rows| covers_by_closure(&rows, concepts.num_items(), &nodes, &intents))
        .unwrap_or_else(|| covers_by_subset_scan(&nodes));
    Ok(LatticeGraph { n, nodes, edges })
}

/// Row `g` is the intent of the smallest extent containing `g`, which for
/// a complete lattice is the object concept of `g`.
fn recover_rows(
    n: usize,
    num_items: usize,
    nodes: &[BitSet],
    intents: &[&BitSet],
) -> Option<Vec<BitSet>> {
    let mut rows: Vec<Option<BitSet>> = alloc::vec![None; n];
    let mut missing = n;
    for (extent, intent) in nodes.iter().zip(intents) {
        for g in extent.iter() {
            if rows[g].is_none() {
                rows[g] = Some((*intent).clone());
                missing -= 1;
            }
        }
        if missing == 0 {
            break;
        }
    }
    let rows: Option<Vec<BitSet>> = rows.into_iter().collect();
    rows.filter(|r| r.iter().all(|row| row.universe() == num_items))
}

fn columns(rows: &[BitSet], num_items: usize) -> Vec<BitSet> {
    let mut cols = alloc::vec![BitSet::new(rows.len()); num_items];
    for (t, row) in rows.iter().enumerate() {
        for j in row.iter() {
            cols[j].insert(t);
        }
    }
    cols
}

fn extent_of(intent: &BitSet, cols: &[BitSet], n: usize) -> BitSet {
    let mut ext = BitSet::full(n);
    for j in intent.iter() {
        ext.intersect_with(&cols[j]);
    }
    ext
}

/// Every (extent, intent) pair must be a concept of `rows`.
fn all_are_concepts(
    rows: &[BitSet],
    num_items: usize,
    nodes: &[BitSet],
    intents: &[&BitSet],
) -> bool {
    let n = rows.len();
    let cols = columns(rows, num_items);
    nodes.iter().zip(intents).all(|(extent, intent)| {
        if extent.universe() != n {
            return false;
        }
        let mut derived = BitSet::full(num_items);
        for t in extent.iter() {
            derived.intersect_with(&rows[t]);
        }
        derived == **intent && extent_of(intent, &cols, n) == *extent
    })
}

/// Upper neighbors of each concept via closure of `A ∪ {g}`, keeping only
/// the minimal ones. Returns `None` if some closure is not a node, which
/// means the family is not closed upward and the shortcut does not apply.
fn covers_by_closure(
    rows: &[BitSet],
    num_items: usize,
    nodes: &[BitSet],
    intents: &[&BitSet],
) -> Option<Vec<(usize, usize)>> {
    let n = rows.len();
    let cols = columns(rows, num_items);
    let find = |set: &BitSet| {
        nodes
            .binary_search_by(|probe| cmp_size_then_members(probe, set))
            .ok()
    };

    let mut edges = Vec::new();
    let mut outside = BitSet::new(n);
    let mut minimal = BitSet::new(n);
    let mut cand_intent = BitSet::new(num_items);
    let everyone = BitSet::full(n);
    for (v, (extent, intent)) in nodes.iter().zip(intents).enumerate() {
        outside.copy_from(&everyone);
        outside.difference_with(extent);
        minimal.copy_from(&outside);
        let first_edge = edges.len();
        for g in outside.iter() {
            cand_intent.copy_from(intent);
            cand_intent.intersect_with(&rows[g]);
            let mut grown = extent_of(&cand_intent, &cols, n);
            grown.difference_with(extent);
            grown.remove(g);
            if grown.is_disjoint(&minimal) {
                grown.union_with(extent);
                grown.insert(g);
                edges.push((v, find(&grown)?));
            } else {
                minimal.remove(g);
            }
        }
        edges[first_edge..].sort_unstable();
    }
    Some(edges)
}

/// For each node in size order, a strict superset is a cover unless it
/// contains a cover already found for that node.
fn covers_by_subset_scan(nodes: &[BitSet]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut covers: Vec<usize> = Vec::new();
    for (v, small) in nodes.iter().enumerate() {
        covers.clear();
        for (w, big) in nodes.iter().enumerate().skip(v + 1) {
            if small.is_subset(big) && !covers.iter().any(|&c| nodes[c].is_subset(big)) {
                covers.push(w);
            }
        }
        edges.extend(covers.iter().map(|&w| (v, w)));
    }
    edges
}
