//! JSON documents and DOT export.
//!
//! Index sets are written as ascending integer arrays. JSON output is
//! compact and followed by a newline, so files are byte-stable across runs.

use std::fmt::Write as _;
use std::path::Path;

use fcagraph_core::{
    BitSet, ClusterHierarchy, Concept, ConceptSet, Dendrogram, LatticeGraph, PurityReport,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{io_error, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptDoc {
    pub extent: Vec<usize>,
    pub intent: Vec<usize>,
}

/// Mined concepts, in the miner's order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptsDoc {
    /// Number of objects (transactions).
    pub n: usize,
    pub num_items: usize,
    pub min_support: usize,
    pub concepts: Vec<ConceptDoc>,
}

impl From<&ConceptSet> for ConceptsDoc {
    fn from(set: &ConceptSet) -> Self {
        ConceptsDoc {
            n: set.num_objects(),
            num_items: set.num_items(),
            min_support: set.min_support(),
            concepts: set
                .iter()
                .map(|c| ConceptDoc {
                    extent: c.extent.to_vec(),
                    intent: c.intent.to_vec(),
                })
                .collect(),
        }
    }
}

impl ConceptsDoc {
    pub fn to_concept_set(&self) -> Result<ConceptSet> {
        let concepts = self
            .concepts
            .iter()
            .map(|c| {
                Ok(Concept {
                    extent: index_set(self.n, &c.extent)?,
                    intent: index_set(self.num_items, &c.intent)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ConceptSet::new(
            self.n,
            self.num_items,
            self.min_support,
            concepts,
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: usize,
    pub members: Vec<usize>,
}

/// A cluster graph. `n` may be omitted on input, in which case it is one
/// past the largest member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<[usize; 2]>,
}

impl From<&LatticeGraph> for LatticeDoc {
    fn from(g: &LatticeGraph) -> Self {
        LatticeDoc {
            n: Some(g.num_points()),
            nodes: g
                .nodes()
                .iter()
                .enumerate()
                .map(|(id, members)| NodeDoc {
                    id,
                    members: members.to_vec(),
                })
                .collect(),
            edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

impl LatticeDoc {
    /// Node ids must be `0, 1, 2, ...` in order.
    pub fn to_graph(&self) -> Result<LatticeGraph> {
        let n = self
            .n
            .unwrap_or_else(|| universe_of(self.nodes.iter().map(|v| &v.members)));
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for (pos, node) in self.nodes.iter().enumerate() {
            if node.id != pos {
                return Err(Error::Document(format!(
                    "node at position {pos} has id {}",
                    node.id
                )));
            }
            nodes.push(index_set(n, &node.members)?);
        }
        let edges = self.edges.iter().map(|&[a, b]| (a, b)).collect();
        Ok(LatticeGraph::from_parts(n, nodes, edges)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergeDoc {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

/// A flat list of clusters, e.g. the `2n - 1` nodes of a dendrogram (listed
/// by node id) with its merges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterListDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub clusters: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub merges: Vec<MergeDoc>,
}

impl From<&Dendrogram> for ClusterListDoc {
    fn from(d: &Dendrogram) -> Self {
        ClusterListDoc {
            n: Some(d.num_points()),
            clusters: d.node_sets().iter().map(BitSet::to_vec).collect(),
            merges: d
                .merges()
                .iter()
                .map(|m| MergeDoc {
                    left: m.left,
                    right: m.right,
                    height: m.height,
                    size: m.size,
                })
                .collect(),
        }
    }
}

/// Anything purity can be evaluated on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HierarchyDoc {
    Lattice(LatticeDoc),
    Clusters(ClusterListDoc),
}

impl HierarchyDoc {
    pub fn to_hierarchy(&self) -> Result<ClusterHierarchy> {
        let (n, lists): (Option<usize>, Vec<&Vec<usize>>) = match self {
            HierarchyDoc::Lattice(doc) => (doc.n, doc.nodes.iter().map(|v| &v.members).collect()),
            HierarchyDoc::Clusters(doc) => (doc.n, doc.clusters.iter().collect()),
        };
        let n = n.unwrap_or_else(|| universe_of(lists.iter().copied()));
        let clusters = lists
            .into_iter()
            .map(|m| index_set(n, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(ClusterHierarchy::new(n, clusters)?)
    }
}

/// `{ "dp": real, "num_clusters": int, "num_pairs": int }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsDoc {
    pub dp: f64,
    pub num_clusters: usize,
    pub num_pairs: usize,
}

impl From<PurityReport> for MetricsDoc {
    fn from(r: PurityReport) -> Self {
        MetricsDoc {
            dp: r.dp,
            num_clusters: r.num_clusters,
            num_pairs: r.num_pairs,
        }
    }
}

fn universe_of<'a>(lists: impl Iterator<Item = &'a Vec<usize>>) -> usize {
    lists.flatten().map(|&i| i + 1).max().unwrap_or(0)
}

fn index_set(universe: usize, members: &[usize]) -> Result<BitSet> {
    let mut set = BitSet::new(universe);
    for &i in members {
        if i >= universe {
            return Err(fcagraph_core::Error::ItemOutOfRange { item: i, universe }.into());
        }
        set.insert(i);
    }
    Ok(set)
}

/// Graphviz digraph with edges from each cluster to its covering clusters.
/// Nodes are labeled with their members.
pub fn lattice_dot(g: &LatticeGraph) -> String {
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
    for (id, members) in g.nodes().iter().enumerate() {
        let label = members
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        writeln!(out, "  \"{id}\" [label=\"{{{label}}}\"];").expect("writing to a String");
    }
    for &(a, b) in g.edges() {
        writeln!(out, "  \"{a}\" -> \"{b}\";").expect("writing to a String");
    }
    out.push_str("}\n");
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(value: &T, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_json(value)?).map_err(io_error(path))
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(io_error(path))?;
    Ok(serde_json::from_str(&text)?)
}
