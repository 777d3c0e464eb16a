//! Frequent connected subgraph mining (gSpan).

mod dfs;
mod gspan;
mod label;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

pub use dfs::{is_min, min_dfs_code, DfsCode, DfsEdge};
pub use gspan::{exclude_known, mine, MiningConfig, MiningOutcome, Pattern, EMBEDDING_BUDGET};
pub use label::{composite_label, CompositeLabel};

use crate::error::{Error, Result};
use crate::graph::{GraphDataset, ModelGraph};
use crate::matcher::{contains, MatchSemantics};
use crate::store::{read_graph, write_graph};

/// Number of models holding the candidate (composite-label equality), and
/// their indices.
pub fn support(candidate: &ModelGraph, dataset: &GraphDataset) -> (usize, Vec<usize>) {
    let ids: Vec<usize> = dataset
        .graphs()
        .iter()
        .enumerate()
        .filter(|(_, g)| contains(candidate, g, MatchSemantics::Strict))
        .map(|(i, _)| i)
        .collect();
    (ids.len(), ids)
}

pub const PATTERN_INDEX: &str = "index.tsv";

pub fn pattern_file_name(index: usize) -> String {
    format!("pattern_{index}.lpg")
}

/// Writes `pattern_<k>.lpg` files and `index.tsv`. Stale pattern files in
/// the directory are removed first.
pub fn write_patterns(patterns: &[Pattern], dataset: &GraphDataset, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if name.starts_with("pattern_") && name.ends_with(".lpg") {
            fs::remove_file(&path).map_err(|e| Error::io(&path, e))?;
        }
    }
    let mut index = String::from("pattern_index\tmodel_support\tnode_count\tedge_count\tsupporting_model_ids\n");
    for p in patterns {
        write_graph(&p.graph, &dir.join(pattern_file_name(p.pattern_index)))?;
        let ids: Vec<&str> = p
            .supporting_models
            .iter()
            .map(|&i| dataset.graphs()[i].model_id.as_str())
            .collect();
        writeln!(
            index,
            "{}\t{}\t{}\t{}\t{}",
            p.pattern_index,
            p.model_support,
            p.node_count(),
            p.edge_count(),
            ids.join(",")
        )
        .unwrap();
    }
    let path = dir.join(PATTERN_INDEX);
    fs::write(&path, index).map_err(|e| Error::io(&path, e))
}

/// Reads patterns written by [`write_patterns`]; supporting model ids are
/// resolved against `dataset`.
pub fn read_patterns(dir: &Path, dataset: &GraphDataset) -> Result<Vec<Pattern>> {
    let path = dir.join(PATTERN_INDEX);
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate().skip(1) {
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::parse(&path, lineno + 1, msg);
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 5 {
            return Err(bad("expected 5 columns"));
        }
        let pattern_index: usize = cols[0].parse().map_err(|_| bad("bad pattern_index"))?;
        let model_support: usize = cols[1].parse().map_err(|_| bad("bad model_support"))?;
        let supporting_models = cols[4]
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|id| {
                dataset
                    .model_ids()
                    .position(|m| m == id)
                    .ok_or_else(|| bad(&format!("unknown model id {id:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut graph = read_graph(&dir.join(pattern_file_name(pattern_index)))?;
        graph.model_id = format!("pattern_{pattern_index}");
        let code = min_dfs_code(&graph)?;
        out.push(Pattern {
            pattern_index,
            graph,
            code,
            model_support,
            supporting_models,
        });
    }
    Ok(out)
}
