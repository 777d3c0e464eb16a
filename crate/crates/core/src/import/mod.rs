//! Reification of model documents into [`ModelGraph`]s.
//!
//! Every construct becomes a node: classes and elements keep their
//! stereotype or type as construct label, relations become connector nodes
//! attached by `source`/`target` edges, generalizations become `gen` nodes
//! attached by `general`/`specific` edges, declared multiplicities become
//! nodes attached to their relation by a `cardinalities` edge, and
//! generalization sets become `genset` nodes linked to their member
//! generalizations.

mod doc;

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

pub use doc::{
    CanonicalModelDoc, ClassDoc, GeneralizationDoc, GeneralizationSetDoc, Language, RelationDoc,
};

use crate::error::{Error, Result};
use crate::graph::{
    EdgeLabel, GraphDataset, ModelGraph, NodeId, CARD_SRC_LABEL, CARD_TGT_LABEL, COMPLETE_LABEL,
    DISJOINT_LABEL, GENSET_LABEL, GEN_LABEL, SPECIALIZATION_LABEL,
};

pub const ONTOUML_CLASS_STEREOTYPES: &[&str] = &[
    "abstract",
    "category",
    "collective",
    "datatype",
    "enumeration",
    "event",
    "historicalRole",
    "historicalRoleMixin",
    "kind",
    "mixin",
    "mode",
    "phase",
    "phaseMixin",
    "quality",
    "quantity",
    "relator",
    "role",
    "roleMixin",
    "situation",
    "subkind",
    "type",
];

pub const ONTOUML_RELATION_STEREOTYPES: &[&str] = &[
    "association",
    "bringsAbout",
    "characterization",
    "comparative",
    "componentOf",
    "creation",
    "derivation",
    "externalDependence",
    "formal",
    "historicalDependence",
    "instantiation",
    "manifestation",
    "material",
    "mediation",
    "memberOf",
    "participation",
    "participational",
    "subCollectionOf",
    "subQuantityOf",
    "termination",
    "triggers",
];

pub const ARCHIMATE_ELEMENT_TYPES: &[&str] = &[
    "ApplicationCollaboration",
    "ApplicationComponent",
    "ApplicationEvent",
    "ApplicationFunction",
    "ApplicationInteraction",
    "ApplicationInterface",
    "ApplicationProcess",
    "ApplicationService",
    "Artifact",
    "BusinessActor",
    "BusinessCollaboration",
    "BusinessEvent",
    "BusinessFunction",
    "BusinessInteraction",
    "BusinessInterface",
    "BusinessObject",
    "BusinessProcess",
    "BusinessRole",
    "BusinessService",
    "Capability",
    "CommunicationNetwork",
    "Contract",
    "CourseOfAction",
    "DataObject",
    "Deliverable",
    "Device",
    "Goal",
    "Grouping",
    "Junction",
    "Location",
    "Node",
    "Principle",
    "Product",
    "Representation",
    "Requirement",
    "Resource",
    "Stakeholder",
    "SystemSoftware",
    "TechnologyCollaboration",
    "TechnologyEvent",
    "TechnologyFunction",
    "TechnologyInterface",
    "TechnologyProcess",
    "TechnologyService",
    "ValueStream",
    "WorkPackage",
];

pub const ARCHIMATE_RELATIONSHIP_TYPES: &[&str] = &[
    "Access",
    "Aggregation",
    "Assignment",
    "Association",
    "Composition",
    "Flow",
    "Influence",
    "Realization",
    "Serving",
    "Specialization",
    "Triggering",
];

/// Skipped construct with the reason it was not mapped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skipped {
    pub kind: String,
    pub id: String,
    pub reason: String,
}

/// Per-document import outcome.
///
/// `mapped` counts constructs by kind (`class`, `relation`, `generalization`,
/// `cardinality`, `generalizationSet`); every construct of the document is
/// either counted there or listed in `skipped`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ImportReport {
    pub document: String,
    pub mapped: BTreeMap<String, usize>,
    pub skipped: Vec<Skipped>,
    pub notes: Vec<String>,
}

impl ImportReport {
    fn new(document: &str) -> Self {
        ImportReport {
            document: document.to_string(),
            ..Default::default()
        }
    }

    fn mapped(&mut self, kind: &str) {
        *self.mapped.entry(kind.to_string()).or_default() += 1;
    }

    fn skip(&mut self, kind: &str, id: &str, reason: impl Into<String>) {
        self.skipped.push(Skipped {
            kind: kind.into(),
            id: id.into(),
            reason: reason.into(),
        });
    }

    pub fn mapped_total(&self) -> usize {
        self.mapped.values().sum()
    }
}

/// Number of constructs a document declares: classes, relations, declared
/// cardinalities, generalizations and generalization sets.
pub fn construct_count(doc: &CanonicalModelDoc) -> usize {
    let cards: usize = doc
        .relations
        .iter()
        .map(|r| r.source_cardinality.is_some() as usize + r.target_cardinality.is_some() as usize)
        .sum();
    doc.classes.len()
        + doc.relations.len()
        + cards
        + doc.generalizations.len()
        + doc.generalization_sets.len()
}

fn lower_first(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_lowercase().chain(c).collect(),
        None => String::new(),
    }
}

fn upper_camel(s: &str) -> String {
    s.split_whitespace()
        .map(|w| {
            let mut c = w.chars();
            match c.next() {
                Some(f) => f.to_uppercase().chain(c).collect::<String>(),
                None => String::new(),
            }
        })
        .collect()
}

struct Builder<'a> {
    graph: ModelGraph,
    report: ImportReport,
    doc_id: &'a str,
    ids: HashMap<String, NodeId>,
}

impl<'a> Builder<'a> {
    fn new(model_id: &'a str) -> Self {
        Builder {
            graph: ModelGraph::new(model_id),
            report: ImportReport::new(model_id),
            doc_id: model_id,
            ids: HashMap::new(),
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Import {
            doc: self.doc_id.to_string(),
            message: message.into(),
        }
    }

    fn node(&mut self, id: &str, labels: &[&str], name: Option<&str>) -> Result<NodeId> {
        if self.ids.contains_key(id) {
            return Err(self.err(format!("duplicate id {id:?}")));
        }
        let n = self
            .graph
            .add_node(labels.iter().copied())
            .map_err(|e| self.err(format!("{id}: {e}")))?;
        if let Some(name) = name.filter(|s| !s.trim().is_empty()) {
            self.graph.set_property(n, "name", name.trim());
        }
        self.ids.insert(id.to_string(), n);
        Ok(n)
    }

    fn anon_node(&mut self, labels: &[&str]) -> Result<NodeId> {
        self.graph
            .add_node(labels.iter().copied())
            .map_err(|e| self.err(e.to_string()))
    }

    fn edge(&mut self, x: NodeId, y: NodeId, label: EdgeLabel) -> Result<()> {
        let added = self
            .graph
            .add_edge(x, y, label)
            .map_err(|e| self.err(e.to_string()))?;
        if !added {
            log::warn!(
                "{}: collapsed duplicate {label} edge between nodes {x} and {y}",
                self.doc_id
            );
            self.report
                .notes
                .push(format!("collapsed duplicate {label} edge between nodes {x} and {y}"));
        }
        Ok(())
    }

    fn lookup(&self, id: &str) -> Option<NodeId> {
        self.ids.get(id).copied()
    }

    fn cardinalities(&mut self, rel: &RelationDoc, rel_node: NodeId) -> Result<()> {
        for (card, marker) in [
            (&rel.source_cardinality, CARD_SRC_LABEL),
            (&rel.target_cardinality, CARD_TGT_LABEL),
        ] {
            if let Some(value) = card {
                let value = value.trim();
                if value.is_empty() {
                    self.report.skip("cardinality", &rel.id, "empty cardinality");
                    continue;
                }
                let n = self.anon_node(&[value, marker])?;
                self.edge(n, rel_node, EdgeLabel::Cardinalities)?;
                self.report.mapped("cardinality");
            }
        }
        Ok(())
    }

    fn skip_relation(&mut self, rel: &RelationDoc, reason: String) {
        self.report.skip("relation", &rel.id, reason.clone());
        for card in [&rel.source_cardinality, &rel.target_cardinality] {
            if card.is_some() {
                self.report
                    .skip("cardinality", &rel.id, format!("owning relation skipped: {reason}"));
            }
        }
    }

    fn generalization_node(
        &mut self,
        id: &str,
        label: &str,
        general: NodeId,
        specific: NodeId,
    ) -> Result<()> {
        let n = self.node(id, &[label], None)?;
        self.edge(n, general, EdgeLabel::General)?;
        self.edge(n, specific, EdgeLabel::Specific)?;
        self.report.mapped("generalization");
        Ok(())
    }

    fn finish(mut self, doc: &CanonicalModelDoc) -> (ModelGraph, ImportReport) {
        for (kind, id, key) in doc.unknown_keys() {
            let owner = if id.is_empty() { kind } else { format!("{kind} {id}") };
            self.report.notes.push(format!("ignored unknown key {key:?} on {owner}"));
        }
        (self.graph, self.report)
    }
}

fn check_language(doc: &CanonicalModelDoc, expected: Language, model_id: &str) -> Result<()> {
    if doc.language != expected {
        return Err(Error::Import {
            doc: model_id.to_string(),
            message: format!("expected a {expected} document, found {}", doc.language),
        });
    }
    Ok(())
}

/// Language-independent reification: concepts become nodes, each relation
/// becomes a connector node with `source` and `target` edges.
pub fn import_generic(doc: &CanonicalModelDoc, model_id: &str) -> Result<(ModelGraph, ImportReport)> {
    check_language(doc, Language::Generic, model_id)?;
    let mut b = Builder::new(model_id);
    for c in &doc.classes {
        let label = c.stereotype.as_deref().map(str::trim).filter(|s| !s.is_empty()).unwrap_or("concept");
        b.node(&c.id, &[label], c.name.as_deref())?;
        b.report.mapped("class");
    }
    strict_relations(&mut b, doc, |k| k.map(str::trim).filter(|s| !s.is_empty()).unwrap_or("relation").to_string())?;
    for g in &doc.generalizations {
        let (general, specific) = resolve_pair(&b, &g.id, &g.general, &g.specific)?;
        b.generalization_node(&g.id, GEN_LABEL, general, specific)?;
    }
    for s in &doc.generalization_sets {
        b.report.skip("generalizationSet", &s.id, "generalization sets are only mapped for ontouml");
    }
    Ok(b.finish(doc))
}

fn resolve_pair(b: &Builder<'_>, owner: &str, x: &str, y: &str) -> Result<(NodeId, NodeId)> {
    let rx = b.lookup(x).ok_or_else(|| b.err(format!("{owner}: unresolvable reference {x:?}")))?;
    let ry = b.lookup(y).ok_or_else(|| b.err(format!("{owner}: unresolvable reference {y:?}")))?;
    Ok((rx, ry))
}

/// Relations whose endpoints must resolve; any dangling reference rejects
/// the whole document.
fn strict_relations<F>(b: &mut Builder<'_>, doc: &CanonicalModelDoc, label_of: F) -> Result<()>
where
    F: Fn(Option<&str>) -> String,
{
    for r in &doc.relations {
        let (src, tgt) = resolve_pair(b, &r.id, &r.source, &r.target)?;
        let label = label_of(r.kind.as_deref());
        let n = b.node(&r.id, &[label.as_str()], r.name.as_deref())?;
        b.edge(n, src, EdgeLabel::Source)?;
        b.edge(n, tgt, EdgeLabel::Target)?;
        b.report.mapped("relation");
        b.cardinalities(r, n)?;
    }
    Ok(())
}

/// OntoUML reification. Stereotypes are normalized to lower camel case;
/// unstereotyped associations get the label `association`. Relations or
/// generalizations with a missing endpoint are skipped, classes are kept.
pub fn import_ontouml(doc: &CanonicalModelDoc, model_id: &str) -> Result<(ModelGraph, ImportReport)> {
    check_language(doc, Language::Ontouml, model_id)?;
    let mut b = Builder::new(model_id);
    for c in &doc.classes {
        let label = match c.stereotype.as_deref().map(str::trim).filter(|s| !s.is_empty()) {
            Some(s) => lower_first(s),
            None => {
                b.report.notes.push(format!("class {} has no stereotype", c.id));
                "class".to_string()
            }
        };
        if label != "class" && !ONTOUML_CLASS_STEREOTYPES.contains(&label.as_str()) {
            b.report
                .notes
                .push(format!("class {}: unknown stereotype {label:?} kept as literal label", c.id));
        }
        b.node(&c.id, &[label.as_str()], c.name.as_deref())?;
        b.report.mapped("class");
    }
    for r in &doc.relations {
        let (Some(src), Some(tgt)) = (b.lookup(&r.source), b.lookup(&r.target)) else {
            let missing = if b.lookup(&r.source).is_none() { &r.source } else { &r.target };
            b.skip_relation(r, format!("missing endpoint {missing:?}"));
            continue;
        };
        let label = match r.kind.as_deref().map(str::trim).filter(|s| !s.is_empty()) {
            Some(s) => lower_first(s),
            None => "association".to_string(),
        };
        if !ONTOUML_RELATION_STEREOTYPES.contains(&label.as_str()) {
            b.report
                .notes
                .push(format!("relation {}: unknown stereotype {label:?} kept as literal label", r.id));
        }
        let n = b.node(&r.id, &[label.as_str()], r.name.as_deref())?;
        b.edge(n, src, EdgeLabel::Source)?;
        b.edge(n, tgt, EdgeLabel::Target)?;
        b.report.mapped("relation");
        b.cardinalities(r, n)?;
    }
    for g in &doc.generalizations {
        match (b.lookup(&g.general), b.lookup(&g.specific)) {
            (Some(general), Some(specific)) => {
                b.generalization_node(&g.id, GEN_LABEL, general, specific)?
            }
            _ => b.report.skip("generalization", &g.id, "missing endpoint"),
        }
    }
    for s in &doc.generalization_sets {
        let members: Option<Vec<NodeId>> = s.generalizations.iter().map(|m| b.lookup(m)).collect();
        let members = match members {
            Some(m) if !m.is_empty() => m,
            Some(_) => {
                b.report.skip("generalizationSet", &s.id, "no member generalizations");
                continue;
            }
            None => {
                b.report.skip("generalizationSet", &s.id, "unresolvable member generalization");
                continue;
            }
        };
        if members
            .iter()
            .any(|&m| !b.graph.node(m).has_label(GEN_LABEL))
        {
            b.report.skip("generalizationSet", &s.id, "member is not a generalization");
            continue;
        }
        let mut labels = vec![GENSET_LABEL];
        if s.is_disjoint {
            labels.push(DISJOINT_LABEL);
        }
        if s.is_complete {
            labels.push(COMPLETE_LABEL);
        }
        let n = b.node(&s.id, &labels, None)?;
        for m in members {
            b.edge(n, m, EdgeLabel::General)?;
        }
        b.report.mapped("generalizationSet");
    }
    Ok(b.finish(doc))
}

/// ArchiMate reification. Element and relationship types are normalized to
/// upper camel case. `Specialization` relationships and explicit
/// generalizations become `Specialization` nodes with `general` (to the
/// parent) and `specific` (to the child) edges.
pub fn import_archimate(doc: &CanonicalModelDoc, model_id: &str) -> Result<(ModelGraph, ImportReport)> {
    check_language(doc, Language::Archimate, model_id)?;
    let mut b = Builder::new(model_id);
    for c in &doc.classes {
        let label = c
            .stereotype
            .as_deref()
            .map(upper_camel)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| b.err(format!("element {} has no type", c.id)))?;
        if !ARCHIMATE_ELEMENT_TYPES.contains(&label.as_str()) {
            b.report
                .notes
                .push(format!("element {}: unknown type {label:?} kept as literal label", c.id));
        }
        b.node(&c.id, &[label.as_str()], c.name.as_deref())?;
        b.report.mapped("class");
    }
    for r in &doc.relations {
        let (src, tgt) = resolve_pair(&b, &r.id, &r.source, &r.target)?;
        let label = r
            .kind
            .as_deref()
            .map(upper_camel)
            .filter(|s| !s.is_empty())
            .unwrap_or_else(|| "Association".to_string());
        if label == SPECIALIZATION_LABEL {
            // source specializes target
            b.generalization_node(&r.id, SPECIALIZATION_LABEL, tgt, src)?;
            continue;
        }
        if !ARCHIMATE_RELATIONSHIP_TYPES.contains(&label.as_str()) {
            b.report
                .notes
                .push(format!("relationship {}: unknown type {label:?} kept as literal label", r.id));
        }
        let n = b.node(&r.id, &[label.as_str()], r.name.as_deref())?;
        b.edge(n, src, EdgeLabel::Source)?;
        b.edge(n, tgt, EdgeLabel::Target)?;
        b.report.mapped("relation");
        b.cardinalities(r, n)?;
    }
    for g in &doc.generalizations {
        let (general, specific) = resolve_pair(&b, &g.id, &g.general, &g.specific)?;
        b.generalization_node(&g.id, SPECIALIZATION_LABEL, general, specific)?;
    }
    for s in &doc.generalization_sets {
        b.report.skip("generalizationSet", &s.id, "generalization sets are only mapped for ontouml");
    }
    Ok(b.finish(doc))
}

/// Dispatches on the document's declared language.
pub fn import_document(doc: &CanonicalModelDoc, model_id: &str) -> Result<(ModelGraph, ImportReport)> {
    match doc.language {
        Language::Generic => import_generic(doc, model_id),
        Language::Ontouml => import_ontouml(doc, model_id),
        Language::Archimate => import_archimate(doc, model_id),
    }
}

/// Imports every `*.json` document of `dir` in lexicographic filename order.
///
/// Documents that fail to parse, declare another language or fail to import
/// are skipped and reported with a report whose `skipped` list names the
/// document. Zero successful imports is an error.
pub fn load_directory(dir: &Path, language: Language) -> Result<(GraphDataset, Vec<ImportReport>)> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().and_then(|e| e.to_str()) == Some("json"))
        .collect();
    files.sort();
    let mut graphs = Vec::new();
    let mut reports = Vec::new();
    for path in files {
        let model_id = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default()
            .to_string();
        let outcome = fs::read_to_string(&path)
            .map_err(|e| Error::io(&path, e))
            .and_then(|text| {
                CanonicalModelDoc::from_json(&text).map_err(|e| Error::Import {
                    doc: model_id.clone(),
                    message: e.to_string(),
                })
            })
            .and_then(|doc| {
                if doc.language != language {
                    Err(Error::Import {
                        doc: model_id.clone(),
                        message: format!("declares {} but {language} was requested", doc.language),
                    })
                } else {
                    import_document(&doc, &model_id)
                }
            });
        match outcome {
            Ok((g, r)) => {
                graphs.push(g);
                reports.push(r);
            }
            Err(e) => {
                log::warn!("skipping {}: {e}", path.display());
                let mut r = ImportReport::new(&model_id);
                r.skip("document", &model_id, e.to_string());
                reports.push(r);
            }
        }
    }
    if graphs.is_empty() {
        return Err(Error::NothingImported(dir.to_path_buf()));
    }
    Ok((GraphDataset::new(graphs)?, reports))
}
