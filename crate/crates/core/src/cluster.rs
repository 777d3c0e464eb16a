//! Pattern clustering by cosine similarity and single linkage.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use pathfinding::prelude::{kuhn_munkres, Matrix};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Label, ModelGraph};
use crate::mining::Pattern;

/// `[α, β, count(label_0), count(label_1), ...]` over a shared vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub node_count: usize,
    pub edge_count: usize,
    pub label_counts: Vec<usize>,
}

impl FeatureVector {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 + self.label_counts.len());
        v.push(self.node_count as f64);
        v.push(self.edge_count as f64);
        v.extend(self.label_counts.iter().map(|&c| c as f64));
        v
    }
}

/// Feature vectors for a set of pattern graphs, plus the sorted vocabulary
/// giving the meaning of each label coordinate.
pub fn featurize_graphs(graphs: &[&ModelGraph]) -> (Vec<Label>, Vec<FeatureVector>) {
    let vocabulary: Vec<Label> = graphs
        .iter()
        .flat_map(|g| g.nodes().iter().flat_map(|n| n.construct_labels.iter().cloned()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let position: BTreeMap<&Label, usize> = vocabulary.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let vectors = graphs
        .iter()
        .map(|g| {
            let mut label_counts = vec![0; vocabulary.len()];
            for n in g.nodes() {
                for l in &n.construct_labels {
                    label_counts[position[l]] += 1;
                }
            }
            FeatureVector {
                node_count: g.node_count(),
                edge_count: g.edge_count(),
                label_counts,
            }
        })
        .collect();
    (vocabulary, vectors)
}

pub fn featurize(patterns: &[Pattern]) -> (Vec<Label>, Vec<FeatureVector>) {
    let graphs: Vec<&ModelGraph> = patterns.iter().map(|p| &p.graph).collect();
    featurize_graphs(&graphs)
}

/// Plain cosine similarity. Zero vectors have similarity 0 with everything.
pub fn cosine(u: &[f64], v: &[f64]) -> f64 {
    assert_eq!(u.len(), v.len(), "cosine of vectors with different dimensions");
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        0.0
    } else {
        (dot / (nu * nv)).clamp(-1.0, 1.0)
    }
}

/// How feature columns are scaled before the cosine is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FeatureScaling {
    /// Raw counts.
    Raw,
    /// Each column centred on its mean and divided by its standard deviation
    /// over the pattern set; negative similarities are clamped to 0 and
    /// patterns with identical raw vectors get similarity 1.
    #[default]
    Standardized,
}

impl fmt::Display for FeatureScaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureScaling::Raw => "raw",
            FeatureScaling::Standardized => "zscore",
        })
    }
}

impl FromStr for FeatureScaling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(FeatureScaling::Raw),
            "zscore" | "standardized" => Ok(FeatureScaling::Standardized),
            other => Err(Error::Config(format!("unknown feature scaling {other:?}"))),
        }
    }
}

fn standardize(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = rows.len() as f64;
    let dim = rows.first().map_or(0, Vec::len);
    let mut out = rows.to_vec();
    for c in 0..dim {
        let mean = rows.iter().map(|r| r[c]).sum::<f64>() / n;
        let var = rows.iter().map(|r| (r[c] - mean).powi(2)).sum::<f64>() / n;
        let sd = var.sqrt();
        for r in out.iter_mut() {
            r[c] = if sd > 0.0 { (r[c] - mean) / sd } else { 0.0 };
        }
    }
    out
}

/// Symmetric similarity matrix with unit diagonal.
pub fn similarity_matrix(vectors: &[FeatureVector], scaling: FeatureScaling) -> Vec<Vec<f64>> {
    let raw: Vec<Vec<f64>> = vectors.iter().map(FeatureVector::to_vec).collect();
    let rows = match scaling {
        FeatureScaling::Raw => raw.clone(),
        FeatureScaling::Standardized => standardize(&raw),
    };
    let n = rows.len();
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .map(|j| {
                    if raw[i] == raw[j] {
                        1.0
                    } else {
                        cosine(&rows[i], &rows[j]).max(0.0)
                    }
                })
                .collect()
        })
        .collect();
    let mut m = vec![vec![1.0; n]; n];
    for i in 0..n {
        for (k, &s) in upper[i].iter().enumerate() {
            let j = i + 1 + k;
            m[i][j] = s;
            m[j][i] = s;
        }
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusteringConfig {
    pub gamma: f64,
    pub scaling: FeatureScaling,
}

impl ClusteringConfig {
    pub fn new(gamma: f64) -> Self {
        ClusteringConfig {
            gamma,
            scaling: FeatureScaling::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.gamma.is_nan() || self.gamma < 0.0 {
            return Err(Error::InvalidClustering(format!("threshold {} must be >= 0", self.gamma)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cluster {
    pub cluster_id: usize,
    pub members: Vec<usize>,
}

/// Connected components of the graph joining items with similarity ≥ γ.
/// Members are item positions; cluster ids follow the smallest member.
pub fn cluster_by_similarity(sim: &[Vec<f64>], gamma: f64) -> Vec<Cluster> {
    let n = sim.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, row) in sim.iter().enumerate() {
        for (j, &s) in row.iter().enumerate().skip(i + 1) {
            if s >= gamma {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    let mut members: Vec<Vec<usize>> = groups.into_values().collect();
    members.sort_by_key(|m| m[0]);
    members
        .into_iter()
        .enumerate()
        .map(|(cluster_id, members)| Cluster { cluster_id, members })
        .collect()
}

pub fn cluster_vectors(vectors: &[FeatureVector], config: &ClusteringConfig) -> Result<Vec<Cluster>> {
    config.validate()?;
    if vectors.is_empty() {
        return Err(Error::InvalidClustering("no patterns to cluster".into()));
    }
    Ok(cluster_by_similarity(&similarity_matrix(vectors, config.scaling), config.gamma))
}

/// Clusters patterns; members are pattern indices.
pub fn cluster(patterns: &[Pattern], config: &ClusteringConfig) -> Result<Vec<Cluster>> {
    let (_, vectors) = featurize(patterns);
    let mut clusters = cluster_vectors(&vectors, config)?;
    for c in &mut clusters {
        for m in &mut c.members {
            *m = patterns[*m].pattern_index;
        }
        c.members.sort_unstable();
    }
    Ok(clusters)
}

fn assignment(clusters: &[Cluster]) -> Result<BTreeMap<usize, usize>> {
    let mut out = BTreeMap::new();
    for c in clusters {
        for &m in &c.members {
            if out.insert(m, c.cluster_id).is_some() {
                return Err(Error::InvalidClustering(format!("item {m} belongs to two clusters")));
            }
        }
    }
    Ok(out)
}

fn same_universe(predicted: &[Cluster], truth: &[Cluster]) -> Result<(BTreeMap<usize, usize>, BTreeMap<usize, usize>)> {
    let p = assignment(predicted)?;
    let t = assignment(truth)?;
    if !p.keys().eq(t.keys()) {
        return Err(Error::InvalidClustering("clusterings cover different items".into()));
    }
    Ok((p, t))
}

/// Fraction of unordered item pairs on which both clusterings agree about
/// co-membership. A single item scores 1.
pub fn pairwise_accuracy(predicted: &[Cluster], truth: &[Cluster]) -> Result<f64> {
    let (p, t) = same_universe(predicted, truth)?;
    let items: Vec<usize> = p.keys().copied().collect();
    let (mut agree, mut total) = (0usize, 0usize);
    for (i, a) in items.iter().enumerate() {
        for b in &items[i + 1..] {
            total += 1;
            if (p[a] == p[b]) == (t[a] == t[b]) {
                agree += 1;
            }
        }
    }
    Ok(if total == 0 { 1.0 } else { agree as f64 / total as f64 })
}

/// Overlap counts, `table[i][j]` = items in `predicted[i]` and `truth[j]`.
pub fn contingency(predicted: &[Cluster], truth: &[Cluster]) -> Result<Vec<Vec<usize>>> {
    let (p, t) = same_universe(predicted, truth)?;
    let prow: BTreeMap<usize, usize> = predicted.iter().enumerate().map(|(i, c)| (c.cluster_id, i)).collect();
    let tcol: BTreeMap<usize, usize> = truth.iter().enumerate().map(|(i, c)| (c.cluster_id, i)).collect();
    let mut table = vec![vec![0; truth.len()]; predicted.len()];
    for (item, pc) in &p {
        table[prow[pc]][tcol[&t[item]]] += 1;
    }
    Ok(table)
}

/// Predicted cluster id -> truth cluster id maximizing total overlap
/// (Hungarian algorithm). With more predicted than truth clusters the
/// surplus stays unmapped, and vice versa.
pub fn align_clusters(predicted: &[Cluster], truth: &[Cluster]) -> Result<BTreeMap<usize, usize>> {
    let table = contingency(predicted, truth)?;
    let n = predicted.len().max(truth.len());
    if n == 0 {
        return Ok(BTreeMap::new());
    }
    let mut weights = Matrix::new(n, n, 0i64);
    for (i, row) in table.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            weights[(i, j)] = c as i64;
        }
    }
    let (_, cols) = kuhn_munkres(&weights);
    Ok(cols
        .into_iter()
        .enumerate()
        .filter(|&(i, j)| i < predicted.len() && j < truth.len())
        .map(|(i, j)| (predicted[i].cluster_id, truth[j].cluster_id))
        .collect())
}

/// Items whose predicted cluster is not aligned with their true cluster.
pub fn misplaced(predicted: &[Cluster], truth: &[Cluster], alignment: &BTreeMap<usize, usize>) -> Result<usize> {
    let (p, t) = same_universe(predicted, truth)?;
    Ok(p.iter().filter(|(item, pc)| alignment.get(pc) != Some(&t[item])).count())
}

pub const CLUSTERS_FILE: &str = "clusters.tsv";

pub fn clusters_to_tsv(clusters: &[Cluster]) -> String {
    let mut out = String::from("cluster_id\tmembers\n");
    for c in clusters {
        let members: Vec<String> = c.members.iter().map(usize::to_string).collect();
        writeln!(out, "{}\t{}", c.cluster_id, members.join(",")).unwrap();
    }
    out
}

/// Parses the `clusters.tsv` layout (header optional).
pub fn clusters_from_tsv(text: &str) -> Result<Vec<Cluster>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || (i == 0 && line.starts_with("cluster_id")) {
            continue;
        }
        let bad = || Error::InvalidClustering(format!("line {}: expected `id<TAB>m1,m2,...`", i + 1));
        let (id, members) = line.split_once('\t').ok_or_else(bad)?;
        let cluster_id = id.trim().parse().map_err(|_| bad())?;
        let members = members
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect::<Result<Vec<usize>>>()?;
        if members.is_empty() {
            return Err(bad());
        }
        out.push(Cluster { cluster_id, members });
    }
    assignment(&out)?;
    Ok(out)
}
