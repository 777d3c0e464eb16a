//! DFS codes, the gSpan edge order and canonical (minimum) codes.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{EdgeLabel, ModelGraph, NodeId};
use crate::mining::label::{composite_label, CompositeLabel};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DfsEdge {
    pub from: usize,
    pub to: usize,
    pub from_label: CompositeLabel,
    pub edge_label: EdgeLabel,
    pub to_label: CompositeLabel,
}

impl DfsEdge {
    pub fn is_forward(&self) -> bool {
        self.from < self.to
    }
}

impl Ord for DfsEdge {
    fn cmp(&self, other: &Self) -> Ordering {
        position_order(self.from, self.to, other.from, other.to).then_with(|| {
            (&self.from_label, self.edge_label, &self.to_label).cmp(&(
                &other.from_label,
                other.edge_label,
                &other.to_label,
            ))
        })
    }
}

impl PartialOrd for DfsEdge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DfsEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{},{})",
            self.from, self.to, self.from_label, self.edge_label, self.to_label
        )
    }
}

/// Ordered list of DFS edges. The derived order is the lexicographic gSpan
/// order on edge sequences (a proper prefix sorts first).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DfsCode {
    pub edges: Vec<DfsEdge>,
}

impl DfsCode {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.edges
            .iter()
            .map(|e| e.from.max(e.to) + 1)
            .max()
            .unwrap_or(0)
    }

    /// Labels of the pattern vertices, indexed by DFS id.
    pub fn vertex_labels(&self) -> Vec<CompositeLabel> {
        let mut labels = vec![None; self.node_count()];
        for e in &self.edges {
            labels[e.from].get_or_insert_with(|| e.from_label.clone());
            labels[e.to].get_or_insert_with(|| e.to_label.clone());
        }
        labels.into_iter().map(|l| l.expect("every DFS id appears in an edge")).collect()
    }

    /// Materializes the pattern graph. Vertex `i` becomes `NodeId(i)` and
    /// receives the labels of its composite label.
    pub fn to_graph(&self, model_id: &str) -> ModelGraph {
        let mut g = ModelGraph::new(model_id);
        for l in self.vertex_labels() {
            g.add_node(l.parts()).expect("composite labels hold non-empty parts");
        }
        for e in &self.edges {
            g.add_edge(NodeId(e.from as u32), NodeId(e.to as u32), e.edge_label)
                .expect("DFS code endpoints are valid");
        }
        g
    }

    /// Well-formedness: vertex 0 and 1 start the code, forward edges
    /// discover exactly the next id, backward edges point to earlier ids,
    /// and every vertex keeps a single label.
    pub fn is_well_formed(&self) -> bool {
        let mut labels: Vec<&CompositeLabel> = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if i == 0 && (e.from, e.to) != (0, 1) {
                return false;
            }
            if i == 0 {
                labels.push(&e.from_label);
            }
            if e.from >= labels.len() || labels[e.from] != &e.from_label {
                return false;
            }
            if e.is_forward() {
                if e.to != labels.len() {
                    return false;
                }
                labels.push(&e.to_label);
            } else if e.to >= e.from || labels[e.to] != &e.to_label {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for DfsCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.edges {
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// The structural part of the gSpan edge order, ignoring labels.
pub(crate) fn position_order(af: usize, at: usize, bf: usize, bt: usize) -> Ordering {
    match (af < at, bf < bt) {
        (true, true) => at.cmp(&bt).then(bf.cmp(&af)),
        (false, false) => af.cmp(&bf).then(at.cmp(&bt)),
        (false, true) => {
            if af < bt {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        (true, false) => {
            if at <= bf {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
    }
}

// Integer-labeled working representation shared with the miner. Node labels
// are ranks in a sorted label table, so integer order equals string order.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct IAdj {
    pub to: u32,
    pub el: EdgeLabel,
    pub eid: u32,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct IGraph {
    pub labels: Vec<u32>,
    pub adj: Vec<Vec<IAdj>>,
    pub edge_count: usize,
}

impl IGraph {
    pub fn with_nodes(labels: Vec<u32>) -> Self {
        let n = labels.len();
        IGraph {
            labels,
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn add_edge(&mut self, a: u32, b: u32, el: EdgeLabel) {
        let eid = self.edge_count as u32;
        self.adj[a as usize].push(IAdj { to: b, el, eid });
        self.adj[b as usize].push(IAdj { to: a, el, eid });
        self.edge_count += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct IEdge {
    pub from: u32,
    pub to: u32,
    pub fl: u32,
    pub el: EdgeLabel,
    pub tl: u32,
}

impl IEdge {
    pub fn is_forward(&self) -> bool {
        self.from < self.to
    }
}

impl Ord for IEdge {
    fn cmp(&self, other: &Self) -> Ordering {
        position_order(
            self.from as usize,
            self.to as usize,
            other.from as usize,
            other.to as usize,
        )
        .then_with(|| (self.fl, self.el, self.tl).cmp(&(other.fl, other.el, other.tl)))
    }
}

impl PartialOrd for IEdge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// DFS ids on the rightmost path, from the rightmost vertex up to the root.
pub(crate) fn rightmost_path(code: &[IEdge]) -> Vec<u32> {
    let mut path = Vec::new();
    let mut expect: Option<u32> = None;
    for e in code.iter().rev() {
        if e.is_forward() && expect.is_none_or(|x| x == e.to) {
            if path.is_empty() {
                path.push(e.to);
            }
            path.push(e.from);
            expect = Some(e.from);
        }
    }
    path
}

/// Partial embedding of a code prefix into a graph: DFS id -> node, plus
/// the graph edges already consumed.
#[derive(Debug, Clone)]
struct Partial {
    map: Vec<u32>,
    used: Vec<bool>,
}

/// Rightmost extensions of one partial embedding, in no particular order.
/// Backward edges leave the rightmost vertex towards the rightmost path;
/// forward edges leave any rightmost-path vertex towards an unmapped node.
pub(crate) fn extensions(g: &IGraph, map: &[u32], used: impl Fn(u32) -> bool, rmpath: &[u32], out: &mut Vec<(IEdge, u32, u32)>) {
    let rm = rmpath[0];
    let rm_node = map[rm as usize];
    for a in &g.adj[rm_node as usize] {
        if used(a.eid) {
            continue;
        }
        if let Some(&j) = rmpath[1..].iter().find(|&&j| map[j as usize] == a.to) {
            out.push((
                IEdge { from: rm, to: j, fl: g.labels[rm_node as usize], el: a.el, tl: g.labels[a.to as usize] },
                a.eid,
                a.to,
            ));
        }
    }
    let next = map.len() as u32;
    for &i in rmpath {
        let node = map[i as usize];
        for a in &g.adj[node as usize] {
            if !map.contains(&a.to) {
                out.push((
                    IEdge { from: i, to: next, fl: g.labels[node as usize], el: a.el, tl: g.labels[a.to as usize] },
                    a.eid,
                    a.to,
                ));
            }
        }
    }
}

/// Builds the minimum DFS code of a connected graph greedily, keeping every
/// embedding that realises the best prefix so far. When `target` is given
/// the construction stops at the first position where it beats the target
/// and returns `None`.
fn greedy_min(g: &IGraph, target: Option<&[IEdge]>) -> Option<Vec<IEdge>> {
    let mut first: Option<IEdge> = None;
    for (u, adj) in g.adj.iter().enumerate() {
        for a in adj {
            let e = IEdge { from: 0, to: 1, fl: g.labels[u], el: a.el, tl: g.labels[a.to as usize] };
            if first.is_none_or(|f| e < f) {
                first = Some(e);
            }
        }
    }
    let first = first?;
    let mut partials: Vec<Partial> = Vec::new();
    for (u, adj) in g.adj.iter().enumerate() {
        for a in adj {
            if g.labels[u] == first.fl && a.el == first.el && g.labels[a.to as usize] == first.tl {
                let mut used = vec![false; g.edge_count];
                used[a.eid as usize] = true;
                partials.push(Partial { map: vec![u as u32, a.to], used });
            }
        }
    }
    let mut code = vec![first];
    if let Some(t) = target {
        match first.cmp(&t[0]) {
            Ordering::Less => return None,
            Ordering::Greater => return Some(code),
            Ordering::Equal => {}
        }
    }
    let mut cands = Vec::new();
    while code.len() < g.edge_count {
        let rmpath = rightmost_path(&code);
        let mut best: Option<IEdge> = None;
        let mut per_partial: Vec<Vec<(IEdge, u32, u32)>> = Vec::with_capacity(partials.len());
        for p in &partials {
            cands.clear();
            extensions(g, &p.map, |eid| p.used[eid as usize], &rmpath, &mut cands);
            for (e, _, _) in &cands {
                if best.is_none_or(|b| *e < b) {
                    best = Some(*e);
                }
            }
            per_partial.push(cands.clone());
        }
        let best = best.expect("connected graph always has an extension");
        let mut next = Vec::new();
        for (p, cs) in partials.iter().zip(per_partial) {
            for (e, eid, node) in cs {
                if e == best {
                    let mut q = p.clone();
                    q.used[eid as usize] = true;
                    if e.is_forward() {
                        q.map.push(node);
                    }
                    next.push(q);
                }
            }
        }
        partials = next;
        let pos = code.len();
        code.push(best);
        if let Some(t) = target {
            match best.cmp(&t[pos]) {
                Ordering::Less => return None,
                Ordering::Greater => return Some(code),
                Ordering::Equal => {}
            }
        }
    }
    Some(code)
}

/// True when `code` is the minimum code of the graph it denotes.
pub(crate) fn is_min_ints(code: &[IEdge]) -> bool {
    if code.len() <= 1 {
        return code.first().is_none_or(|e| e.fl <= e.tl);
    }
    let n = code.iter().map(|e| e.from.max(e.to) + 1).max().unwrap_or(0) as usize;
    let mut labels = vec![0u32; n];
    for e in code {
        labels[e.from as usize] = e.fl;
        labels[e.to as usize] = e.tl;
    }
    let mut g = IGraph::with_nodes(labels);
    for e in code {
        g.add_edge(e.from, e.to, e.el);
    }
    greedy_min(&g, Some(code)).is_some()
}

/// Interning table from composite labels to order-preserving ranks.
#[derive(Debug, Clone, Default)]
pub(crate) struct LabelTable {
    pub names: Vec<CompositeLabel>,
    index: BTreeMap<CompositeLabel, u32>,
}

impl LabelTable {
    pub fn new<I: IntoIterator<Item = CompositeLabel>>(labels: I) -> Self {
        let mut names: Vec<CompositeLabel> = labels.into_iter().collect();
        names.sort();
        names.dedup();
        let index = names.iter().enumerate().map(|(i, l)| (l.clone(), i as u32)).collect();
        LabelTable { names, index }
    }

    pub fn get(&self, l: &CompositeLabel) -> Option<u32> {
        self.index.get(l).copied()
    }

    pub fn graph(&self, g: &ModelGraph) -> Option<IGraph> {
        let labels = g
            .nodes()
            .iter()
            .map(|n| self.get(&composite_label(n)))
            .collect::<Option<Vec<_>>>()?;
        let mut ig = IGraph::with_nodes(labels);
        for e in g.edges() {
            ig.add_edge(e.a.0, e.b.0, e.label);
        }
        Some(ig)
    }

    pub fn decode(&self, code: &[IEdge]) -> DfsCode {
        DfsCode {
            edges: code
                .iter()
                .map(|e| DfsEdge {
                    from: e.from as usize,
                    to: e.to as usize,
                    from_label: self.names[e.fl as usize].clone(),
                    edge_label: e.el,
                    to_label: self.names[e.tl as usize].clone(),
                })
                .collect(),
        }
    }

    pub fn encode(&self, code: &DfsCode) -> Option<Vec<IEdge>> {
        code.edges
            .iter()
            .map(|e| {
                Some(IEdge {
                    from: e.from as u32,
                    to: e.to as u32,
                    fl: self.get(&e.from_label)?,
                    el: e.edge_label,
                    tl: self.get(&e.to_label)?,
                })
            })
            .collect()
    }
}

/// Minimum DFS code of a connected graph with at least one edge.
pub fn min_dfs_code(graph: &ModelGraph) -> Result<DfsCode> {
    if graph.edge_count() == 0 {
        return Err(Error::NoEdges(graph.model_id.clone()));
    }
    if !graph.is_connected() {
        return Err(Error::Disconnected(graph.model_id.clone()));
    }
    let table = LabelTable::new(graph.nodes().iter().map(composite_label));
    let ig = table.graph(graph).expect("table built from this graph");
    let code = greedy_min(&ig, None).expect("graph has edges");
    Ok(table.decode(&code))
}

/// True iff `code` equals the minimum code of the graph it denotes.
/// Malformed codes are never minimal.
pub fn is_min(code: &DfsCode) -> bool {
    if !code.is_well_formed() {
        return false;
    }
    let table = LabelTable::new(code.edges.iter().flat_map(|e| [e.from_label.clone(), e.to_label.clone()]));
    let ints = table.encode(code).expect("table built from this code");
    is_min_ints(&ints)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(from: usize, to: usize, fl: &str, el: EdgeLabel, tl: &str) -> DfsEdge {
        DfsEdge { from, to, from_label: fl.into(), edge_label: el, to_label: tl.into() }
    }

    fn graph(labels: &[&str], edges: &[(u32, u32, EdgeLabel)]) -> ModelGraph {
        let mut g = ModelGraph::new("t");
        for l in labels {
            g.add_node([*l]).unwrap();
        }
        for &(a, b, l) in edges {
            g.add_edge(NodeId(a), NodeId(b), l).unwrap();
        }
        g
    }

    #[test]
    fn single_edge_code() {
        let g = graph(&["B", "A"], &[(0, 1, EdgeLabel::Source)]);
        let code = min_dfs_code(&g).unwrap();
        assert_eq!(code.to_string(), "(0,1,A,source,B)");
        assert!(is_min(&code));
    }

    #[test]
    fn uniform_triangle_closes_with_backward_edge() {
        let l = EdgeLabel::General;
        let g = graph(&["X", "X", "X"], &[(0, 1, l), (1, 2, l), (0, 2, l)]);
        let code = min_dfs_code(&g).unwrap();
        let pos: Vec<(usize, usize)> = code.edges.iter().map(|e| (e.from, e.to)).collect();
        assert_eq!(pos, vec![(0, 1), (1, 2), (2, 0)]);
    }

    #[test]
    fn forward_before_backward_rules() {
        let s = EdgeLabel::Source;
        // backward (2,0) sorts before forward (2,3) and after forward (1,2)
        assert!(edge(2, 0, "Z", s, "Z") < edge(2, 3, "A", s, "A"));
        assert!(edge(1, 2, "Z", s, "Z") < edge(2, 0, "A", s, "A"));
        // deeper forward start wins for the same target
        assert!(edge(2, 3, "Z", s, "Z") < edge(0, 3, "A", s, "A"));
        // backward edges: smaller target first
        assert!(edge(3, 0, "Z", s, "Z") < edge(3, 1, "A", s, "A"));
    }

    #[test]
    fn path_started_in_middle_is_not_minimal() {
        let s = EdgeLabel::Source;
        // A - B - C path; starting at B gives (0,1,B,A)(0,2,B,C)
        let bad = DfsCode { edges: vec![edge(0, 1, "B", s, "A"), edge(0, 2, "B", s, "C")] };
        assert!(bad.is_well_formed());
        assert!(!is_min(&bad));
        let g = graph(&["A", "B", "C"], &[(0, 1, s), (1, 2, s)]);
        let min = min_dfs_code(&g).unwrap();
        assert_eq!(min.to_string(), "(0,1,A,source,B)(1,2,B,source,C)");
        assert!(is_min(&min));
    }

    #[test]
    fn parallel_edges_with_different_labels() {
        let g = graph(&["rel", "kind"], &[(0, 1, EdgeLabel::Source), (0, 1, EdgeLabel::Target)]);
        let code = min_dfs_code(&g).unwrap();
        assert_eq!(code.to_string(), "(0,1,kind,source,rel)(1,0,rel,target,kind)");
        assert!(is_min(&code));
    }

    #[test]
    fn code_round_trips_through_graph() {
        let s = EdgeLabel::Source;
        let t = EdgeLabel::Target;
        let g = graph(&["J", "B", "D", "J"], &[(0, 1, s), (0, 2, t), (3, 1, s)]);
        let code = min_dfs_code(&g).unwrap();
        let back = code.to_graph("p");
        assert_eq!(min_dfs_code(&back).unwrap(), code);
        assert_eq!(back.node_count(), 4);
    }

    #[test]
    fn rejects_disconnected_and_edgeless() {
        let g = graph(&["A", "B", "C"], &[(0, 1, EdgeLabel::Source)]);
        assert!(matches!(min_dfs_code(&g), Err(Error::Disconnected(_))));
        let g = graph(&["A"], &[]);
        assert!(matches!(min_dfs_code(&g), Err(Error::NoEdges(_))));
    }
}
