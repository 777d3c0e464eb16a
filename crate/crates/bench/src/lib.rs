//! Benchmark inputs.

use cmine_core::cluster::{featurize_graphs, FeatureVector};
use cmine_core::fixtures::{self, ontouml};
use cmine_core::{GraphDataset, ModelGraph};

/// The 50-model ArchiMate-like timing corpus.
pub fn timing_corpus() -> GraphDataset {
    fixtures::performance_corpus(50, 2024)
}

pub fn ontouml_targets() -> Vec<ModelGraph> {
    ontouml::OntoPattern::ALL.iter().map(|p| ontouml::target(*p)).collect()
}

pub fn clustering_vectors() -> Vec<FeatureVector> {
    let (graphs, _) = fixtures::clustering_fixture(6);
    let refs: Vec<&ModelGraph> = graphs.iter().collect();
    featurize_graphs(&refs).1
}
