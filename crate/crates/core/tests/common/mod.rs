//! Random generators and exhaustive oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use cmine_core::{EdgeLabel, GraphDataset, ModelGraph, NodeId};
use rand::seq::SliceRandom;
use rand::Rng;

pub const NODE_LABELS: [&str; 3] = ["A", "B", "C"];
pub const EDGE_LABELS: [EdgeLabel; 2] = [EdgeLabel::Source, EdgeLabel::Target];

/// Random graph with `n` nodes. A random spanning tree is laid first when
/// `connected` is set, then `extra` edges are attempted.
pub fn random_graph<R: Rng>(rng: &mut R, id: &str, n: usize, extra: usize, labels: usize, edge_labels: usize, connected: bool) -> ModelGraph {
    let mut g = ModelGraph::new(id);
    for _ in 0..n {
        g.add_node([NODE_LABELS[rng.gen_range(0..labels)]]).unwrap();
    }
    let el = |rng: &mut R| EDGE_LABELS[rng.gen_range(0..edge_labels)];
    if connected {
        for v in 1..n {
            let u = rng.gen_range(0..v);
            let l = el(rng);
            g.add_edge(NodeId(u as u32), NodeId(v as u32), l).unwrap();
        }
    }
    if n >= 2 {
        for _ in 0..extra {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            let l = el(rng);
            g.add_edge(NodeId(a as u32), NodeId(b as u32), l).unwrap();
        }
    }
    g
}

/// Dataset of up to 8 graphs with up to 7 nodes, 3 node labels and 2 edge labels.
pub fn random_dataset<R: Rng>(rng: &mut R) -> GraphDataset {
    let count = rng.gen_range(2..=8);
    let graphs = (0..count)
        .map(|i| {
            let n = rng.gen_range(2..=7);
            let extra = rng.gen_range(0..=n);
            let connected = rng.gen_bool(0.7);
            random_graph(rng, &format!("t{i}"), n, extra, 3, 2, connected)
        })
        .collect();
    GraphDataset::new(graphs).unwrap()
}

/// Applies a node permutation: node `i` becomes node `perm[i]`.
pub fn permute(g: &ModelGraph, perm: &[usize]) -> ModelGraph {
    let mut inverse = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inverse[p] = i;
    }
    let mut out = ModelGraph::new(g.model_id.clone());
    for &old in &inverse {
        let n = g.node(NodeId(old as u32));
        let id = out.add_node(n.construct_labels.iter().map(|l| l.as_str())).unwrap();
        for (k, v) in &n.properties {
            out.set_property(id, k, v.clone());
        }
    }
    for e in g.edges() {
        out.add_edge(NodeId(perm[e.a.index()] as u32), NodeId(perm[e.b.index()] as u32), e.label)
            .unwrap();
    }
    out
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

fn node_key(g: &ModelGraph, n: usize) -> String {
    let labels: Vec<&str> = g.node(NodeId(n as u32)).construct_labels.iter().map(|l| l.as_str()).collect();
    labels.join("+")
}

/// Canonical string of a small graph: nodes grouped by label, then the
/// smallest sorted edge list over every permutation inside each group.
pub fn canonical_form(g: &ModelGraph) -> String {
    let n = g.node_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| node_key(g, v));
    let keys: Vec<String> = order.iter().map(|&v| node_key(g, v)).collect();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        if i > 0 && keys[i] == keys[i - 1] {
            groups.last_mut().unwrap().push(v);
        } else {
            groups.push(vec![v]);
        }
    }
    let mut best: Option<Vec<(usize, usize, EdgeLabel)>> = None;
    let mut slots = vec![0usize; n];
    fn rec(
        g: &ModelGraph,
        groups: &[Vec<usize>],
        gi: usize,
        next: usize,
        slots: &mut Vec<usize>,
        best: &mut Option<Vec<(usize, usize, EdgeLabel)>>,
    ) {
        if gi == groups.len() {
            let mut edges: Vec<(usize, usize, EdgeLabel)> = g
                .edges()
                .iter()
                .map(|e| {
                    let (x, y) = (slots[e.a.index()], slots[e.b.index()]);
                    (x.min(y), x.max(y), e.label)
                })
                .collect();
            edges.sort();
            if best.as_ref().is_none_or(|b| edges < *b) {
                *best = Some(edges);
            }
            return;
        }
        let mut group = groups[gi].clone();
        permutations(&mut group, 0, &mut |perm| {
            for (k, &v) in perm.iter().enumerate() {
                slots[v] = next + k;
            }
            rec(g, groups, gi + 1, next + perm.len(), slots, best);
        });
    }
    rec(g, &groups, 0, 0, &mut slots, &mut best);
    format!("{keys:?}|{:?}", best.unwrap_or_default())
}

fn permutations(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Connected edge-induced subgraphs of `g`, one per distinct edge subset.
pub fn connected_edge_subgraphs(g: &ModelGraph) -> Vec<ModelGraph> {
    let m = g.edge_count();
    assert!(m <= 20, "edge subset enumeration is exponential");
    let mut out = Vec::new();
    for mask in 1u32..(1 << m) {
        let edges: Vec<_> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| g.edges()[i]).collect();
        let nodes: BTreeSet<NodeId> = edges.iter().flat_map(|e| [e.a, e.b]).collect();
        let nodes: Vec<NodeId> = nodes.into_iter().collect();
        let sub = g.induced_by_edges(&nodes, &edges);
        if sub.is_connected() {
            out.push(sub);
        }
    }
    out
}

/// Exhaustive frequent subgraph enumeration: every connected edge subset of
/// every transaction, grouped by canonical form, kept when it occurs in at
/// least `min_support` transactions and has at least `min_nodes` nodes.
/// Returns canonical form -> (support, representative).
pub fn brute_force_frequent(dataset: &GraphDataset, min_support: usize, min_nodes: usize) -> BTreeMap<String, (usize, ModelGraph)> {
    let mut seen: BTreeMap<String, (BTreeSet<usize>, ModelGraph)> = BTreeMap::new();
    for (t, g) in dataset.graphs().iter().enumerate() {
        for sub in connected_edge_subgraphs(g) {
            let key = canonical_form(&sub);
            seen.entry(key).or_insert_with(|| (BTreeSet::new(), sub)).0.insert(t);
        }
    }
    seen.into_iter()
        .filter(|(_, (ts, g))| ts.len() >= min_support && g.node_count() >= min_nodes)
        .map(|(k, (ts, g))| (k, (ts.len(), g)))
        .collect()
}

/// One `(from, to, from label, edge label, to label)` step of a DFS code.
pub type CodeEdge = (usize, usize, String, EdgeLabel, String);

/// Smallest DFS code over every traversal that follows the rightmost-path
/// discipline, found by exhaustive search. `less` compares two code edges.
pub fn brute_force_min_code(g: &ModelGraph, less: &dyn Fn(&CodeEdge, &CodeEdge) -> std::cmp::Ordering) -> Vec<CodeEdge> {
    let n = g.node_count();
    let m = g.edge_count();
    let mut best: Option<Vec<CodeEdge>> = None;
    let cmp_codes = |a: &[CodeEdge], b: &[CodeEdge]| {
        for (x, y) in a.iter().zip(b) {
            let o = less(x, y);
            if o != std::cmp::Ordering::Equal {
                return o;
            }
        }
        a.len().cmp(&b.len())
    };
    struct State {
        order: Vec<usize>,
        index: Vec<Option<usize>>,
        parent: Vec<Option<usize>>,
        used: Vec<bool>,
        code: Vec<CodeEdge>,
    }
    fn rightmost_path(s: &State) -> Vec<usize> {
        let mut path = Vec::new();
        let mut v = s.order.last().copied();
        while let Some(x) = v {
            path.push(x);
            v = s.parent[x];
        }
        path
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        g: &ModelGraph,
        m: usize,
        s: &mut State,
        best: &mut Option<Vec<CodeEdge>>,
        cmp_codes: &dyn Fn(&[CodeEdge], &[CodeEdge]) -> std::cmp::Ordering,
    ) {
        if let Some(b) = best.as_ref() {
            let k = s.code.len();
            if cmp_codes(&s.code, &b[..k.min(b.len())]) == std::cmp::Ordering::Greater {
                return;
            }
        }
        if s.code.len() == m {
            if best.as_ref().is_none_or(|b| cmp_codes(&s.code, b) == std::cmp::Ordering::Less) {
                *best = Some(s.code.clone());
            }
            return;
        }
        let path = rightmost_path(s);
        let rm = path[0];
        let key = |v: usize| super_key(g, v);
        for (ei, e) in g.edges().iter().enumerate() {
            if s.used[ei] {
                continue;
            }
            let (a, b) = (e.a.index(), e.b.index());
            for (x, y) in [(a, b), (b, a)] {
                let (Some(ix), iy) = (s.index[x], s.index[y]) else { continue };
                match iy {
                    Some(iy) if x == rm && path.contains(&y) => {
                        s.used[ei] = true;
                        s.code.push((ix, iy, key(x), e.label, key(y)));
                        rec(g, m, s, best, cmp_codes);
                        s.code.pop();
                        s.used[ei] = false;
                    }
                    None if path.contains(&x) => {
                        let iy = s.order.len();
                        s.used[ei] = true;
                        s.index[y] = Some(iy);
                        s.parent[y] = Some(x);
                        s.order.push(y);
                        s.code.push((ix, iy, key(x), e.label, key(y)));
                        rec(g, m, s, best, cmp_codes);
                        s.code.pop();
                        s.order.pop();
                        s.parent[y] = None;
                        s.index[y] = None;
                        s.used[ei] = false;
                    }
                    _ => {}
                }
            }
        }
    }
    fn super_key(g: &ModelGraph, v: usize) -> String {
        node_key(g, v)
    }
    for start in 0..n {
        let mut s = State {
            order: vec![start],
            index: vec![None; n],
            parent: vec![None; n],
            used: vec![false; m],
            code: Vec::new(),
        };
        s.index[start] = Some(0);
        rec(g, m, &mut s, &mut best, &cmp_codes);
    }
    best.unwrap_or_default()
}

/// Number of connected pattern/model pairs where the pattern has a
/// non-trivial automorphism (some permutation other than the identity maps
/// it onto itself).
pub fn has_nontrivial_automorphism(g: &ModelGraph) -> bool {
    let n = g.node_count();
    let mut found = false;
    let mut items: Vec<usize> = (0..n).collect();
    permutations(&mut items, 0, &mut |perm| {
        if found || perm.iter().enumerate().all(|(i, &p)| i == p) {
            return;
        }
        let labels_ok = (0..n).all(|i| g.node(NodeId(i as u32)).construct_labels == g.node(NodeId(perm[i] as u32)).construct_labels);
        if labels_ok
            && g
                .edges()
                .iter()
                .all(|e| g.has_edge(NodeId(perm[e.a.index()] as u32), NodeId(perm[e.b.index()] as u32), e.label))
        {
            found = true;
        }
    });
    found
}
