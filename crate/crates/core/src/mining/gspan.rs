use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering as AtomicOrdering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{GraphDataset, ModelGraph};
use crate::mining::dfs::{extensions, is_min_ints, min_dfs_code, rightmost_path, IEdge, IGraph, LabelTable};
use crate::mining::label::composite_label;
use crate::mining::DfsCode;

/// Upper bound on embeddings held in memory at once across all workers.
/// Reaching it stops the search like a timeout does.
pub const EMBEDDING_BUDGET: usize = 4_000_000;

#[derive(Debug, Clone)]
pub struct MiningConfig {
    pub min_support: usize,
    pub min_nodes: usize,
    pub max_edges: Option<usize>,
    pub known_patterns: Vec<ModelGraph>,
    pub timeout: Option<Duration>,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            min_support: 2,
            min_nodes: 2,
            max_edges: None,
            known_patterns: Vec::new(),
            timeout: None,
            threads: None,
        }
    }
}

impl MiningConfig {
    pub fn new(min_support: usize, min_nodes: usize) -> Self {
        MiningConfig {
            min_support,
            min_nodes,
            ..MiningConfig::default()
        }
    }

    pub fn validate(&self, dataset_size: usize) -> Result<()> {
        if self.min_support == 0 {
            return Err(Error::InvalidMiningConfig("min_support must be positive".into()));
        }
        if self.min_nodes == 0 {
            return Err(Error::InvalidMiningConfig("min_nodes must be positive".into()));
        }
        if self.max_edges == Some(0) {
            return Err(Error::InvalidMiningConfig("max_edges must be positive".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidMiningConfig("threads must be positive".into()));
        }
        if self.min_support > dataset_size + 1 {
            log::warn!(
                "min_support {} exceeds dataset size {dataset_size}; nothing can be frequent",
                self.min_support
            );
        }
        for k in &self.known_patterns {
            min_dfs_code(k)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub pattern_index: usize,
    pub graph: ModelGraph,
    pub code: DfsCode,
    pub model_support: usize,
    /// Indices into the mined dataset, ascending.
    pub supporting_models: Vec<usize>,
}

impl Pattern {
    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Support as a fraction of the dataset size.
    pub fn support_ratio(&self, dataset_size: usize) -> f64 {
        if dataset_size == 0 {
            0.0
        } else {
            self.model_support as f64 / dataset_size as f64
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct MiningOutcome {
    pub patterns: Vec<Pattern>,
    /// Set when the timeout or the embedding budget stopped the search early.
    pub truncated: bool,
    /// Frequent patterns visited before the `min_nodes` and known filters.
    pub explored: usize,
}

#[derive(Debug, Clone)]
struct Emb {
    gid: u32,
    map: Vec<u32>,
    used: Vec<u32>,
}

struct Search<'a> {
    graphs: &'a [IGraph],
    min_support: usize,
    max_edges: usize,
    deadline: Option<Instant>,
    truncated: &'a AtomicBool,
    live: &'a AtomicUsize,
}

struct Found {
    code: Vec<IEdge>,
    gids: Vec<usize>,
}

fn distinct_graphs(embs: &[Emb]) -> Vec<usize> {
    let mut ids: Vec<usize> = embs.iter().map(|e| e.gid as usize).collect();
    ids.dedup();
    ids
}

impl Search<'_> {
    fn expired(&self) -> bool {
        if self.truncated.load(AtomicOrdering::Relaxed) {
            return true;
        }
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.truncated.store(true, AtomicOrdering::Relaxed);
            return true;
        }
        false
    }

    /// Every embedding list handed to `grow` is counted in `live`; it is
    /// released once its children are built or the branch is abandoned.
    fn grow(&self, code: &mut Vec<IEdge>, embs: Vec<Emb>, out: &mut Vec<Found>) {
        if self.expired() || !is_min_ints(code) {
            self.release(embs.len());
            return;
        }
        out.push(Found {
            code: code.clone(),
            gids: distinct_graphs(&embs),
        });
        if code.len() >= self.max_edges {
            self.release(embs.len());
            return;
        }
        let rmpath = rightmost_path(code);
        let mut children: BTreeMap<IEdge, Vec<Emb>> = BTreeMap::new();
        let mut cands = Vec::new();
        let mut held = 0usize;
        let mut counted = 0usize;
        for (i, emb) in embs.iter().enumerate() {
            if i % 1024 == 1023 {
                self.hold(held - counted);
                counted = held;
                if self.expired() {
                    self.release(embs.len() + counted);
                    return;
                }
            }
            cands.clear();
            let g = &self.graphs[emb.gid as usize];
            extensions(g, &emb.map, |eid| emb.used.contains(&eid), &rmpath, &mut cands);
            for &(e, eid, node) in &cands {
                let mut next = emb.clone();
                next.used.push(eid);
                if e.is_forward() {
                    next.map.push(node);
                }
                children.entry(e).or_default().push(next);
                held += 1;
            }
        }
        self.hold(held - counted);
        self.release(embs.len());
        drop(embs);
        // Embeddings are generated graph by graph, so per-child lists stay
        // grouped by graph id and `distinct_graphs` only has to dedup runs.
        let mut pending: Vec<(IEdge, Vec<Emb>)> = children.into_iter().rev().collect();
        while let Some((e, child)) = pending.pop() {
            if self.expired() || distinct_graphs(&child).len() < self.min_support {
                self.release(child.len());
                continue;
            }
            code.push(e);
            self.grow(code, child, out);
            code.pop();
        }
    }

    fn hold(&self, n: usize) {
        let total = self.live.fetch_add(n, AtomicOrdering::Relaxed) + n;
        if total > EMBEDDING_BUDGET && !self.truncated.swap(true, AtomicOrdering::Relaxed) {
            log::warn!("embedding budget of {EMBEDDING_BUDGET} exhausted");
        }
    }

    fn release(&self, n: usize) {
        self.live.fetch_sub(n, AtomicOrdering::Relaxed);
    }
}

/// Mines every connected subgraph occurring in at least `min_support`
/// models. Results are sorted by descending support, then ascending code,
/// and numbered from 0.
pub fn mine(dataset: &GraphDataset, config: &MiningConfig) -> Result<MiningOutcome> {
    config.validate(dataset.len())?;
    let run = || mine_inner(dataset, config);
    match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidMiningConfig(e.to_string()))?
            .install(run),
        None => run(),
    }
}

fn mine_inner(dataset: &GraphDataset, config: &MiningConfig) -> Result<MiningOutcome> {
    let table = LabelTable::new(
        dataset
            .graphs()
            .iter()
            .flat_map(|g| g.nodes().iter().map(composite_label)),
    );
    let graphs: Vec<IGraph> = dataset
        .graphs()
        .iter()
        .map(|g| table.graph(g).expect("table covers the dataset"))
        .collect();

    let mut seeds: BTreeMap<IEdge, Vec<Emb>> = BTreeMap::new();
    for (gid, g) in graphs.iter().enumerate() {
        for (u, adj) in g.adj.iter().enumerate() {
            for a in adj {
                let (fl, tl) = (g.labels[u], g.labels[a.to as usize]);
                if fl > tl {
                    continue;
                }
                let e = IEdge { from: 0, to: 1, fl, el: a.el, tl };
                seeds.entry(e).or_default().push(Emb {
                    gid: gid as u32,
                    map: vec![u as u32, a.to],
                    used: vec![a.eid],
                });
            }
        }
    }
    let seeds: Vec<(IEdge, Vec<Emb>)> = seeds
        .into_iter()
        .filter(|(_, embs)| distinct_graphs(embs).len() >= config.min_support)
        .collect();

    let truncated = AtomicBool::new(false);
    let live = AtomicUsize::new(0);
    let search = Search {
        graphs: &graphs,
        min_support: config.min_support,
        max_edges: config.max_edges.unwrap_or(usize::MAX),
        deadline: config.timeout.map(|t| Instant::now() + t),
        truncated: &truncated,
        live: &live,
    };
    search.hold(seeds.iter().map(|(_, e)| e.len()).sum());
    let found: Vec<Found> = seeds
        .into_par_iter()
        .flat_map_iter(|(e, embs)| {
            let mut out = Vec::new();
            search.grow(&mut vec![e], embs, &mut out);
            out
        })
        .collect();
    let explored = found.len();

    let known: BTreeSet<DfsCode> = config
        .known_patterns
        .iter()
        .map(min_dfs_code)
        .collect::<Result<_>>()?;

    let mut patterns: Vec<Pattern> = found
        .into_iter()
        .map(|f| {
            let code = table.decode(&f.code);
            Pattern {
                pattern_index: 0,
                graph: code.to_graph("pattern"),
                model_support: f.gids.len(),
                supporting_models: f.gids,
                code,
            }
        })
        .filter(|p| p.node_count() >= config.min_nodes && !known.contains(&p.code))
        .collect();
    patterns.sort_by(|a, b| b.model_support.cmp(&a.model_support).then_with(|| a.code.cmp(&b.code)));
    for (i, p) in patterns.iter_mut().enumerate() {
        p.pattern_index = i;
        p.graph.model_id = format!("pattern_{i}");
    }
    let truncated = truncated.into_inner();
    if truncated {
        log::warn!("mining stopped by timeout; {} patterns kept", patterns.len());
    }
    Ok(MiningOutcome {
        patterns,
        truncated,
        explored,
    })
}

/// Drops every pattern isomorphic to one of `known`; the rest keep their
/// order and indices.
pub fn exclude_known(patterns: Vec<Pattern>, known: &[ModelGraph]) -> Result<Vec<Pattern>> {
    let codes: BTreeSet<DfsCode> = known.iter().map(min_dfs_code).collect::<Result<_>>()?;
    Ok(patterns.into_iter().filter(|p| !codes.contains(&p.code)).collect())
}
