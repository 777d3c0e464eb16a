use std::fmt;

use crate::graph::{Label, Node};

/// Single mining label standing for a node's whole construct-label set:
/// the sorted labels joined with `+`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompositeLabel(String);

impl CompositeLabel {
    pub fn from_labels<'a, I>(labels: I) -> Self
    where
        I: IntoIterator<Item = &'a Label>,
    {
        let mut parts: Vec<&str> = labels.into_iter().map(Label::as_str).collect();
        parts.sort_unstable();
        parts.dedup();
        CompositeLabel(parts.join("+"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The individual labels, in sorted order.
    pub fn parts(&self) -> impl Iterator<Item = &str> {
        self.0.split('+')
    }
}

impl From<&str> for CompositeLabel {
    fn from(s: &str) -> Self {
        CompositeLabel(s.to_string())
    }
}

impl fmt::Display for CompositeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn composite_label(node: &Node) -> CompositeLabel {
    CompositeLabel::from_labels(&node.construct_labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ModelGraph;

    fn label_of(labels: &[&str]) -> String {
        let mut g = ModelGraph::new("m");
        let n = g.add_node(labels.iter().copied()).unwrap();
        composite_label(g.node(n)).to_string()
    }

    #[test]
    fn joins_sorted_labels() {
        assert_eq!(label_of(&["kind"]), "kind");
        assert_eq!(label_of(&["card-src", "1"]), "1+card-src");
        assert_eq!(label_of(&["b", "a", "c"]), "a+b+c");
    }
}
