//! Frequent structure discovery in conceptual models.
//!
//! Models are reified into labeled property graphs ([`graph`]), filtered
//! ([`filter`]), mined for frequent connected subgraphs with gSpan
//! ([`mining`]), matched back against the full models ([`matcher`]),
//! clustered ([`cluster`]) and rendered as PlantUML text ([`render`]).
//! [`pipeline`] chains the stages over an output directory.

pub mod cluster;
pub mod error;
pub mod filter;
pub mod fixtures;
pub mod graph;
pub mod import;
pub mod matcher;
pub mod mining;
pub mod pipeline;
pub mod render;
pub mod store;

pub use error::{Error, Result};
pub use filter::{apply_filter, FilterSpec};
pub use graph::{Edge, EdgeLabel, GraphDataset, Label, ModelGraph, Node, NodeId, NodeRole};
pub use import::{CanonicalModelDoc, ImportReport, Language};
pub use matcher::{MatchSemantics, Occurrence};
pub use mining::{mine, CompositeLabel, DfsCode, MiningConfig, MiningOutcome, Pattern};
