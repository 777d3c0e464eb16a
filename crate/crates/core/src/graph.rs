//! Labeled property graph data model shared by every stage.
//!
//! A [`ModelGraph`] is one reified conceptual model (a "transaction" for the
//! miner). Nodes carry an ordered set of construct labels plus free-form
//! properties; edges are undirected and carry one of five role labels that
//! encode how a reified connector attaches to its neighbours.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Dense node index within one [`ModelGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A construct label such as `kind`, `gen`, `BusinessProcess` or `1..*`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(String);

impl Label {
    /// Builds a label, trimming surrounding whitespace. Empty labels are rejected.
    pub fn new(text: impl AsRef<str>) -> Result<Self> {
        let trimmed = text.as_ref().trim();
        if trimmed.is_empty() {
            return Err(Error::InvalidLabel(text.as_ref().to_string()));
        }
        Ok(Label(trimmed.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Label {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Role label of an edge. Variants are declared in lexicographic order of
/// their text so the derived `Ord` agrees with string order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeLabel {
    Cardinalities,
    General,
    Source,
    Specific,
    Target,
}

impl EdgeLabel {
    pub const ALL: [EdgeLabel; 5] = [
        EdgeLabel::Cardinalities,
        EdgeLabel::General,
        EdgeLabel::Source,
        EdgeLabel::Specific,
        EdgeLabel::Target,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeLabel::Cardinalities => "cardinalities",
            EdgeLabel::General => "general",
            EdgeLabel::Source => "source",
            EdgeLabel::Specific => "specific",
            EdgeLabel::Target => "target",
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EdgeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EdgeLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::UnknownEdgeLabel(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub construct_labels: BTreeSet<Label>,
    pub properties: BTreeMap<String, String>,
}

impl Node {
    pub fn has_label(&self, text: &str) -> bool {
        self.construct_labels.iter().any(|l| l.as_str() == text)
    }

    pub fn name(&self) -> Option<&str> {
        self.properties.get("name").map(String::as_str)
    }
}

/// Undirected edge; `a` and `b` are kept with `a <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub a: NodeId,
    pub b: NodeId,
    pub label: EdgeLabel,
}

impl Edge {
    pub fn new(x: NodeId, y: NodeId, label: EdgeLabel) -> Self {
        let (a, b) = if x <= y { (x, y) } else { (y, x) };
        Edge { a, b, label }
    }

    pub fn other(&self, end: NodeId) -> NodeId {
        if self.a == end {
            self.b
        } else {
            self.a
        }
    }

    pub fn touches(&self, n: NodeId) -> bool {
        self.a == n || self.b == n
    }
}

/// One conceptual model as a labeled property graph.
///
/// Edges are kept sorted by `(min endpoint, max endpoint, label)` and free of
/// duplicates, which makes structural equality a plain `==`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelGraph {
    pub model_id: String,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
}

impl ModelGraph {
    pub fn new(model_id: impl Into<String>) -> Self {
        ModelGraph {
            model_id: model_id.into(),
            nodes: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// Appends a node and returns its id. At least one construct label is required.
    pub fn add_node<I, S>(&mut self, labels: I) -> Result<NodeId>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let construct_labels = labels
            .into_iter()
            .map(Label::new)
            .collect::<Result<BTreeSet<_>>>()?;
        if construct_labels.is_empty() {
            return Err(Error::NodeWithoutLabels(self.nodes.len()));
        }
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(Node {
            id,
            construct_labels,
            properties: BTreeMap::new(),
        });
        Ok(id)
    }

    pub fn set_property(&mut self, node: NodeId, key: &str, value: impl Into<String>) {
        self.nodes[node.index()]
            .properties
            .insert(key.to_string(), value.into());
    }

    /// Adds an undirected edge. Returns `Ok(false)` when an identical
    /// `(endpoints, label)` edge already exists, in which case nothing changes.
    pub fn add_edge(&mut self, x: NodeId, y: NodeId, label: EdgeLabel) -> Result<bool> {
        for end in [x, y] {
            if end.index() >= self.nodes.len() {
                return Err(Error::DanglingEndpoint {
                    endpoint: end.0,
                    node_count: self.nodes.len(),
                });
            }
        }
        if x == y {
            return Err(Error::SelfLoop(x.0));
        }
        let edge = Edge::new(x, y, label);
        match self.edges.binary_search(&edge) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.edges.insert(pos, edge);
                Ok(true)
            }
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn incident(&self, n: NodeId) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(move |e| e.touches(n))
    }

    pub fn degree(&self, n: NodeId) -> usize {
        self.incident(n).count()
    }

    /// Adjacency lists `(neighbour, label)` indexed by node.
    pub fn adjacency(&self) -> Vec<Vec<(NodeId, EdgeLabel)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.a.index()].push((e.b, e.label));
            adj[e.b.index()].push((e.a, e.label));
        }
        adj
    }

    pub fn has_edge(&self, x: NodeId, y: NodeId, label: EdgeLabel) -> bool {
        self.edges.binary_search(&Edge::new(x, y, label)).is_ok()
    }

    /// True when every node is reachable from node 0. Graphs with no nodes
    /// are not connected.
    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return false;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[v] {
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    stack.push(w.index());
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Drops every property from every node.
    pub fn strip_properties(&mut self) {
        for n in &mut self.nodes {
            n.properties.clear();
        }
    }

    /// Builds the subgraph made of the nodes for which `keep_node` holds and
    /// the edges between kept nodes for which `keep_edge` holds. Kept nodes
    /// are renumbered densely in their original order; the returned vector
    /// maps new ids to the original ones.
    pub fn retain<N, E>(&self, mut keep_node: N, mut keep_edge: E) -> (ModelGraph, Vec<NodeId>)
    where
        N: FnMut(&Node) -> bool,
        E: FnMut(&Edge) -> bool,
    {
        let mut remap = vec![None; self.nodes.len()];
        let mut origin = Vec::new();
        let mut out = ModelGraph::new(self.model_id.clone());
        for n in &self.nodes {
            if keep_node(n) {
                let id = NodeId(out.nodes.len() as u32);
                remap[n.id.index()] = Some(id);
                origin.push(n.id);
                out.nodes.push(Node {
                    id,
                    construct_labels: n.construct_labels.clone(),
                    properties: n.properties.clone(),
                });
            }
        }
        for e in &self.edges {
            if let (Some(a), Some(b)) = (remap[e.a.index()], remap[e.b.index()]) {
                if keep_edge(e) {
                    out.edges.push(Edge::new(a, b, e.label));
                }
            }
        }
        out.edges.sort();
        (out, origin)
    }

    /// Subgraph spanned by an explicit node and edge selection (original ids).
    pub fn induced_by_edges(&self, nodes: &[NodeId], edges: &[Edge]) -> ModelGraph {
        let node_set: BTreeSet<NodeId> = nodes.iter().copied().collect();
        let edge_set: BTreeSet<Edge> = edges.iter().copied().collect();
        self.retain(|n| node_set.contains(&n.id), |e| edge_set.contains(e)).0
    }
}

/// Ordered collection of model graphs plus the construct label vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphDataset {
    graphs: Vec<ModelGraph>,
}

impl GraphDataset {
    pub fn new(graphs: Vec<ModelGraph>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for g in &graphs {
            if !seen.insert(g.model_id.as_str()) {
                return Err(Error::DuplicateModelId(g.model_id.clone()));
            }
        }
        Ok(GraphDataset { graphs })
    }

    pub fn graphs(&self) -> &[ModelGraph] {
        &self.graphs
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn get(&self, model_id: &str) -> Option<&ModelGraph> {
        self.graphs.iter().find(|g| g.model_id == model_id)
    }

    pub fn model_ids(&self) -> impl Iterator<Item = &str> + '_ {
        self.graphs.iter().map(|g| g.model_id.as_str())
    }

    /// Union of all construct labels in the dataset.
    pub fn label_vocabulary(&self) -> BTreeSet<Label> {
        self.graphs
            .iter()
            .flat_map(|g| g.nodes.iter())
            .flat_map(|n| n.construct_labels.iter().cloned())
            .collect()
    }

    pub fn map_graphs<F>(&self, f: F) -> GraphDataset
    where
        F: Fn(&ModelGraph) -> ModelGraph,
    {
        GraphDataset {
            graphs: self.graphs.iter().map(f).collect(),
        }
    }
}

/// Structural role of a reified node, inferred from its construct labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeRole {
    Element,
    Relation,
    Generalization,
    GeneralizationSet,
    Cardinality,
}

pub const GEN_LABEL: &str = "gen";
/// ArchiMate counterpart of [`GEN_LABEL`].
pub const SPECIALIZATION_LABEL: &str = "Specialization";
pub const GENSET_LABEL: &str = "genset";
pub const DISJOINT_LABEL: &str = "disjoint";
pub const COMPLETE_LABEL: &str = "complete";
pub const CARD_SRC_LABEL: &str = "card-src";
pub const CARD_TGT_LABEL: &str = "card-tgt";

/// Relation stereotypes and relationship types recognised as reified
/// connectors. OntoUML stereotypes are lower camel case, ArchiMate
/// relationship types upper camel case.
pub const RELATION_LABELS: &[&str] = &[
    // OntoUML / UML
    "association",
    "characterization",
    "comparative",
    "componentOf",
    "creation",
    "derivation",
    "externalDependence",
    "formal",
    "historicalDependence",
    "instantiation",
    "manifestation",
    "material",
    "mediation",
    "memberOf",
    "participation",
    "participational",
    "subCollectionOf",
    "subQuantityOf",
    "termination",
    "triggers",
    "bringsAbout",
    "aggregation",
    "composition",
    // ArchiMate
    "Access",
    "Aggregation",
    "Assignment",
    "Association",
    "Composition",
    "Flow",
    "Influence",
    "Realization",
    "Serving",
    "Triggering",
    // generic flows
    "sequenceFlow",
    "messageFlow",
    "flow",
    "relation",
];

impl NodeRole {
    /// Classifies a node. Returns the conflicting roles when the labels
    /// claim more than one connector role.
    pub fn classify(node: &Node) -> std::result::Result<NodeRole, Vec<NodeRole>> {
        let mut roles = Vec::new();
        if node.has_label(GEN_LABEL) || node.has_label(SPECIALIZATION_LABEL) {
            roles.push(NodeRole::Generalization);
        }
        if node.has_label(GENSET_LABEL) {
            roles.push(NodeRole::GeneralizationSet);
        }
        if node.has_label(CARD_SRC_LABEL) || node.has_label(CARD_TGT_LABEL) {
            roles.push(NodeRole::Cardinality);
        }
        if node
            .construct_labels
            .iter()
            .any(|l| RELATION_LABELS.contains(&l.as_str()))
        {
            roles.push(NodeRole::Relation);
        }
        match roles.len() {
            0 => Ok(NodeRole::Element),
            1 => Ok(roles[0]),
            _ => Err(roles),
        }
    }
}
