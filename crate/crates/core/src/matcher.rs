//! Pattern occurrence search used for deepening and for support checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Edge, GraphDataset, ModelGraph, Node, NodeId};
use crate::mining::Pattern;

/// Per (pattern, model) pair enumeration stops after this many occurrences.
pub const OCCURRENCE_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchSemantics {
    /// Pattern and model nodes carry identical construct-label sets, the
    /// notion of equality the miner uses.
    Strict,
    /// Every pattern label must be present on the model node; the model
    /// node may carry more.
    #[default]
    Subset,
}

impl MatchSemantics {
    pub fn node_matches(self, pattern: &Node, model: &Node) -> bool {
        match self {
            MatchSemantics::Strict => pattern.construct_labels == model.construct_labels,
            MatchSemantics::Subset => pattern.construct_labels.is_subset(&model.construct_labels),
        }
    }
}

impl fmt::Display for MatchSemantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatchSemantics::Strict => "strict",
            MatchSemantics::Subset => "subset",
        })
    }
}

impl FromStr for MatchSemantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(MatchSemantics::Strict),
            "subset" => Ok(MatchSemantics::Subset),
            other => Err(Error::Config(format!("unknown match semantics {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occurrence {
    pub pattern_index: usize,
    pub model_id: String,
    /// `binding[i]` is the model node bound to pattern node `i`.
    pub binding: Vec<NodeId>,
    pub bound_properties: BTreeMap<NodeId, BTreeMap<String, String>>,
}

impl Occurrence {
    pub fn image_nodes(&self) -> BTreeSet<NodeId> {
        self.binding.iter().copied().collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Occurrences {
    pub list: Vec<Occurrence>,
    /// True when enumeration stopped at [`OCCURRENCE_CAP`].
    pub capped: bool,
}

type Image = (Vec<NodeId>, Vec<Edge>);

fn image_of(pattern: &ModelGraph, binding: &[NodeId]) -> Image {
    let mut nodes = binding.to_vec();
    nodes.sort();
    let mut edges: Vec<Edge> = pattern
        .edges()
        .iter()
        .map(|e| Edge::new(binding[e.a.index()], binding[e.b.index()], e.label))
        .collect();
    edges.sort();
    (nodes, edges)
}

/// Pattern nodes in an order where every node after the first of its
/// component has an earlier neighbour.
fn search_order(pattern: &ModelGraph) -> Vec<usize> {
    let n = pattern.node_count();
    let adj = pattern.adjacency();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    while order.len() < n {
        let start = (0..n)
            .filter(|&v| !seen[v])
            .max_by_key(|&v| (adj[v].len(), std::cmp::Reverse(v)))
            .unwrap();
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(w, _) in &adj[v] {
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    queue.push_back(w.index());
                }
            }
        }
    }
    order
}

struct Matcher<'a> {
    pattern: &'a ModelGraph,
    model: &'a ModelGraph,
    semantics: MatchSemantics,
    order: Vec<usize>,
    model_adj: Vec<Vec<(NodeId, crate::graph::EdgeLabel)>>,
    pattern_adj: Vec<Vec<(NodeId, crate::graph::EdgeLabel)>>,
}

impl<'a> Matcher<'a> {
    fn new(pattern: &'a ModelGraph, model: &'a ModelGraph, semantics: MatchSemantics) -> Self {
        Matcher {
            pattern,
            model,
            semantics,
            order: search_order(pattern),
            model_adj: model.adjacency(),
            pattern_adj: pattern.adjacency(),
        }
    }

    fn consistent(&self, p: usize, m: NodeId, binding: &[Option<NodeId>]) -> bool {
        if binding.contains(&Some(m)) {
            return false;
        }
        if !self
            .semantics
            .node_matches(self.pattern.node(NodeId(p as u32)), self.model.node(m))
        {
            return false;
        }
        self.pattern_adj[p].iter().all(|&(q, label)| match binding[q.index()] {
            Some(mq) => self.model.has_edge(m, mq, label),
            None => true,
        })
    }

    /// Calls `visit` on every embedding until it returns false.
    fn run(&self, visit: &mut dyn FnMut(&[NodeId]) -> bool) {
        let mut binding = vec![None; self.pattern.node_count()];
        self.step(0, &mut binding, visit);
    }

    fn step(&self, depth: usize, binding: &mut Vec<Option<NodeId>>, visit: &mut dyn FnMut(&[NodeId]) -> bool) -> bool {
        if depth == self.order.len() {
            let full: Vec<NodeId> = binding.iter().map(|b| b.unwrap()).collect();
            return visit(&full);
        }
        let p = self.order[depth];
        let anchor = self.pattern_adj[p].iter().find_map(|&(q, _)| binding[q.index()]);
        let candidates: Vec<NodeId> = match anchor {
            Some(m) => {
                let mut c: Vec<NodeId> = self.model_adj[m.index()].iter().map(|&(w, _)| w).collect();
                c.sort();
                c.dedup();
                c
            }
            None => self.model.nodes().iter().map(|n| n.id).collect(),
        };
        for m in candidates {
            if self.consistent(p, m, binding) {
                binding[p] = Some(m);
                let go_on = self.step(depth + 1, binding, visit);
                binding[p] = None;
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
}

fn collect_images(
    pattern: &ModelGraph,
    cap: usize,
    enumerate: impl FnOnce(&mut dyn FnMut(&[NodeId]) -> bool),
) -> (Vec<Vec<NodeId>>, bool) {
    let mut best: BTreeMap<Image, Vec<NodeId>> = BTreeMap::new();
    let mut capped = false;
    enumerate(&mut |binding| {
        let image = image_of(pattern, binding);
        match best.get_mut(&image) {
            Some(b) => {
                if binding < b.as_slice() {
                    *b = binding.to_vec();
                }
            }
            None => {
                if best.len() == cap {
                    capped = true;
                    return false;
                }
                best.insert(image, binding.to_vec());
            }
        }
        true
    });
    let mut bindings: Vec<Vec<NodeId>> = best.into_values().collect();
    bindings.sort_by(|a, b| {
        let mut sa = a.clone();
        let mut sb = b.clone();
        sa.sort();
        sb.sort();
        sa.cmp(&sb).then_with(|| a.cmp(b))
    });
    (bindings, capped)
}

fn to_occurrences(
    pattern_index: usize,
    model: &ModelGraph,
    bindings: Vec<Vec<NodeId>>,
    capped: bool,
) -> Occurrences {
    let list = bindings
        .into_iter()
        .map(|binding| {
            let bound_properties = binding
                .iter()
                .enumerate()
                .filter(|(_, m)| !model.node(**m).properties.is_empty())
                .map(|(p, m)| (NodeId(p as u32), model.node(*m).properties.clone()))
                .collect();
            Occurrence {
                pattern_index,
                model_id: model.model_id.clone(),
                binding,
                bound_properties,
            }
        })
        .collect();
    Occurrences { list, capped }
}

/// Distinct occurrences of `pattern` in `model`, deduplicated by image
/// (node set plus edge set). Each keeps its lexicographically smallest
/// binding; the list is ordered by sorted bound node ids.
pub fn find_graph_occurrences(
    pattern: &ModelGraph,
    pattern_index: usize,
    model: &ModelGraph,
    semantics: MatchSemantics,
) -> Occurrences {
    if pattern.node_count() == 0 || pattern.node_count() > model.node_count() {
        return Occurrences::default();
    }
    let matcher = Matcher::new(pattern, model, semantics);
    let (bindings, capped) = collect_images(pattern, OCCURRENCE_CAP, |visit| matcher.run(visit));
    if capped {
        log::warn!(
            "pattern {pattern_index} in model {}: occurrence enumeration capped at {OCCURRENCE_CAP}",
            model.model_id
        );
    }
    to_occurrences(pattern_index, model, bindings, capped)
}

pub fn find_occurrences(pattern: &Pattern, model: &ModelGraph, semantics: MatchSemantics) -> Occurrences {
    find_graph_occurrences(&pattern.graph, pattern.pattern_index, model, semantics)
}

/// True when `model` holds at least one embedding of `pattern`.
pub fn contains(pattern: &ModelGraph, model: &ModelGraph, semantics: MatchSemantics) -> bool {
    if pattern.node_count() == 0 || pattern.node_count() > model.node_count() {
        return false;
    }
    let mut found = false;
    Matcher::new(pattern, model, semantics).run(&mut |_| {
        found = true;
        false
    });
    found
}

/// Exhaustive oracle: tries every injective node mapping. Only meant for
/// small inputs.
pub fn brute_force_occurrences(
    pattern: &ModelGraph,
    pattern_index: usize,
    model: &ModelGraph,
    semantics: MatchSemantics,
) -> Occurrences {
    let (k, n) = (pattern.node_count(), model.node_count());
    if k == 0 || k > n {
        return Occurrences::default();
    }
    let valid = |binding: &[NodeId]| {
        (0..k).all(|p| semantics.node_matches(pattern.node(NodeId(p as u32)), model.node(binding[p])))
            && pattern
                .edges()
                .iter()
                .all(|e| model.has_edge(binding[e.a.index()], binding[e.b.index()], e.label))
    };
    fn rec(k: usize, n: usize, cur: &mut Vec<NodeId>, visit: &mut dyn FnMut(&[NodeId]) -> bool) -> bool {
        if cur.len() == k {
            return visit(cur);
        }
        for m in 0..n as u32 {
            if !cur.contains(&NodeId(m)) {
                cur.push(NodeId(m));
                let go_on = rec(k, n, cur, visit);
                cur.pop();
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
    let (bindings, capped) = collect_images(pattern, usize::MAX, |visit| {
        rec(k, n, &mut Vec::new(), &mut |b| if valid(b) { visit(b) } else { true });
    });
    to_occurrences(pattern_index, model, bindings, capped)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyReport {
    pub pattern_index: usize,
    pub per_model_counts: BTreeMap<String, usize>,
    pub total_frequency: usize,
    pub model_frequency: usize,
    pub capped: bool,
}

/// Occurrences of a pattern in every model of the store, plus the counts.
pub fn deepen(
    pattern: &Pattern,
    store: &GraphDataset,
    semantics: MatchSemantics,
) -> (Vec<Occurrences>, FrequencyReport) {
    let per_model: Vec<Occurrences> = store
        .graphs()
        .par_iter()
        .map(|g| find_occurrences(pattern, g, semantics))
        .collect();
    let mut report = FrequencyReport {
        pattern_index: pattern.pattern_index,
        per_model_counts: BTreeMap::new(),
        total_frequency: 0,
        model_frequency: 0,
        capped: false,
    };
    for (g, occ) in store.graphs().iter().zip(&per_model) {
        report.per_model_counts.insert(g.model_id.clone(), occ.list.len());
        report.total_frequency += occ.list.len();
        report.model_frequency += usize::from(!occ.list.is_empty());
        report.capped |= occ.capped;
    }
    (per_model, report)
}

pub fn frequency_report(pattern: &Pattern, store: &GraphDataset, semantics: MatchSemantics) -> FrequencyReport {
    deepen(pattern, store, semantics).1
}
