//! Construct filters applied to the mining copy of a dataset.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{EdgeLabel, GraphDataset, Label, ModelGraph};

/// Which constructs survive into the mining copy.
///
/// A node survives when it carries at least one `select` label (or `select`
/// is unset) and none of the `remove` labels. Edges survive when both
/// endpoints survive and their label is not in `remove_edges`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterSpec {
    select: Option<BTreeSet<Label>>,
    remove: BTreeSet<Label>,
    remove_edges: BTreeSet<EdgeLabel>,
    pub drop_properties: bool,
}

impl Default for FilterSpec {
    fn default() -> Self {
        FilterSpec {
            select: None,
            remove: BTreeSet::new(),
            remove_edges: BTreeSet::new(),
            drop_properties: true,
        }
    }
}

impl FilterSpec {
    pub fn new(
        select: Option<BTreeSet<Label>>,
        remove: BTreeSet<Label>,
        remove_edges: BTreeSet<EdgeLabel>,
    ) -> Result<Self> {
        if let Some(sel) = &select {
            let both: Vec<&str> = sel.intersection(&remove).map(Label::as_str).collect();
            if !both.is_empty() {
                return Err(Error::InvalidFilter(format!(
                    "labels both selected and removed: {}",
                    both.join(", ")
                )));
            }
        }
        Ok(FilterSpec {
            select,
            remove,
            remove_edges,
            drop_properties: true,
        })
    }

    /// Convenience constructor from plain strings.
    pub fn from_strs(select: Option<&[&str]>, remove: &[&str], remove_edges: &[EdgeLabel]) -> Result<Self> {
        let labels = |xs: &[&str]| xs.iter().map(Label::new).collect::<Result<BTreeSet<_>>>();
        FilterSpec::new(
            select.map(labels).transpose()?,
            labels(remove)?,
            remove_edges.iter().copied().collect(),
        )
    }

    pub fn select(&self) -> Option<&BTreeSet<Label>> {
        self.select.as_ref()
    }

    pub fn remove(&self) -> &BTreeSet<Label> {
        &self.remove
    }

    pub fn remove_edges(&self) -> &BTreeSet<EdgeLabel> {
        &self.remove_edges
    }

    /// True when the spec leaves graphs untouched apart from properties.
    pub fn is_identity(&self) -> bool {
        self.select.is_none() && self.remove.is_empty() && self.remove_edges.is_empty()
    }

    pub fn apply_graph(&self, g: &ModelGraph) -> ModelGraph {
        let (mut out, _) = g.retain(
            |n| {
                let selected = match &self.select {
                    Some(sel) => n.construct_labels.iter().any(|l| sel.contains(l)),
                    None => true,
                };
                selected && !n.construct_labels.iter().any(|l| self.remove.contains(l))
            },
            |e| !self.remove_edges.contains(&e.label),
        );
        if self.drop_properties {
            out.strip_properties();
        }
        out
    }
}

/// Filters every graph of the dataset. The input is left untouched.
pub fn apply_filter(dataset: &GraphDataset, spec: &FilterSpec) -> GraphDataset {
    dataset.map_graphs(|g| spec.apply_graph(g))
}

/// Node and edge deltas (after minus before) for one model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterDelta {
    pub model_id: String,
    pub nodes: i64,
    pub edges: i64,
}

pub fn filter_deltas(before: &GraphDataset, after: &GraphDataset) -> Result<Vec<FilterDelta>> {
    if before.len() != after.len() {
        let index = before.len().min(after.len());
        let name = |d: &GraphDataset| d.graphs().get(index).map(|g| g.model_id.clone()).unwrap_or_default();
        return Err(Error::ModelMismatch {
            index,
            before: name(before),
            after: name(after),
        });
    }
    before
        .graphs()
        .iter()
        .zip(after.graphs())
        .enumerate()
        .map(|(index, (b, a))| {
            if a.model_id != b.model_id {
                return Err(Error::ModelMismatch {
                    index,
                    before: b.model_id.clone(),
                    after: a.model_id.clone(),
                });
            }
            Ok(FilterDelta {
                model_id: b.model_id.clone(),
                nodes: a.node_count() as i64 - b.node_count() as i64,
                edges: a.edge_count() as i64 - b.edge_count() as i64,
            })
        })
        .collect()
}

/// Tab-separated per-model summary: model id, node delta, edge delta.
pub fn filter_report(before: &GraphDataset, after: &GraphDataset) -> Result<String> {
    let mut out = String::from("model_id\tnode_delta\tedge_delta\n");
    for d in filter_deltas(before, after)? {
        writeln!(out, "{}\t{}\t{}", d.model_id, d.nodes, d.edges).unwrap();
    }
    Ok(out)
}
