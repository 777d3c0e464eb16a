//! Reconstructed evaluation datasets.
//!
//! Everything here is deterministic: hand-built pattern instances for the
//! OntoUML and ArchiMate validation corpora, the three-graph toy dataset,
//! a seeded random ArchiMate-like corpus for timing and a family-labelled
//! pattern set for clustering evaluation.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cluster::Cluster;
use crate::error::{Error, Result};
use crate::filter::FilterSpec;
use crate::graph::{EdgeLabel, GraphDataset, ModelGraph, NodeId};
use crate::import::{import_document, CanonicalModelDoc, Language, ARCHIMATE_ELEMENT_TYPES};
use crate::mining::{min_dfs_code, DfsCode};

/// Three small graphs sharing the path `B -source- J -target- D`.
pub fn three_graphs() -> GraphDataset {
    let build = |id: &str, extra: &[(&str, &str, EdgeLabel)]| {
        let mut g = ModelGraph::new(id);
        let b = g.add_node(["B"]).unwrap();
        let j = g.add_node(["J"]).unwrap();
        let d = g.add_node(["D"]).unwrap();
        g.add_edge(b, j, EdgeLabel::Source).unwrap();
        g.add_edge(j, d, EdgeLabel::Target).unwrap();
        for (at, label, el) in extra {
            let anchor = match *at {
                "B" => b,
                "J" => j,
                _ => d,
            };
            let n = g.add_node([*label]).unwrap();
            g.add_edge(anchor, n, *el).unwrap();
        }
        g
    };
    GraphDataset::new(vec![
        build("g1", &[("B", "A", EdgeLabel::General), ("D", "C", EdgeLabel::Specific)]),
        build("g2", &[("J", "E", EdgeLabel::Source)]),
        build("g3", &[("B", "F", EdgeLabel::Target), ("D", "G", EdgeLabel::Source), ("D", "A", EdgeLabel::General)]),
    ])
    .unwrap()
}

/// Incrementally builds a model document with unique ids and names.
struct DocBuilder {
    doc: CanonicalModelDoc,
    next: usize,
    classes: Vec<String>,
}

impl DocBuilder {
    fn new(language: Language) -> Self {
        DocBuilder {
            doc: CanonicalModelDoc::new(language),
            next: 0,
            classes: Vec::new(),
        }
    }

    fn id(&mut self, prefix: &str) -> String {
        self.next += 1;
        format!("{prefix}{}", self.next)
    }

    fn class(&mut self, stereotype: &str, name: &str) -> String {
        let id = self.id("c");
        let name = format!("{name} {}", self.next);
        self.doc.class(&id, &name, stereotype);
        self.classes.push(id.clone());
        id
    }

    fn relation(&mut self, kind: Option<&str>, source: &str, target: &str) -> String {
        let id = self.id("r");
        self.doc.relation(&id, kind, source, target);
        id
    }

    fn relation_with_cards(&mut self, kind: &str, source: &str, target: &str, sc: &str, tc: &str) {
        let id = self.id("r");
        self.doc.relation_with_cards(&id, Some(kind), source, target, sc, tc);
    }

    fn gen(&mut self, general: &str, specific: &str) -> String {
        let id = self.id("g");
        self.doc.generalization(&id, general, specific);
        id
    }

    fn genset(&mut self, members: &[&str], disjoint: bool, complete: bool) {
        let id = self.id("s");
        self.doc.generalization_set(&id, members, disjoint, complete);
    }
}

pub mod ontouml {
    //! Ten OntoUML models embedding six modelling patterns.

    use super::*;

    #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
    pub enum OntoPattern {
        Relator,
        RoleMixin,
        Characterization,
        Category,
        Subkind,
        Phase,
    }

    impl OntoPattern {
        pub const ALL: [OntoPattern; 6] = [
            OntoPattern::Relator,
            OntoPattern::RoleMixin,
            OntoPattern::Characterization,
            OntoPattern::Category,
            OntoPattern::Subkind,
            OntoPattern::Phase,
        ];

        pub fn name(self) -> &'static str {
            match self {
                OntoPattern::Relator => "Relator",
                OntoPattern::RoleMixin => "RoleMixin",
                OntoPattern::Characterization => "Characterization",
                OntoPattern::Category => "Category",
                OntoPattern::Subkind => "Subkind",
                OntoPattern::Phase => "Phase",
            }
        }
    }

    /// Instances per model, columns in [`OntoPattern::ALL`] order.
    pub const DISTRIBUTION: [[usize; 6]; 10] = [
        [0, 0, 1, 1, 1, 1],
        [0, 0, 2, 1, 0, 1],
        [0, 0, 1, 1, 0, 2],
        [1, 0, 1, 0, 0, 0],
        [1, 0, 1, 1, 0, 0],
        [0, 1, 0, 2, 0, 0],
        [0, 1, 1, 0, 1, 0],
        [1, 0, 1, 1, 0, 0],
        [0, 1, 0, 2, 0, 0],
        [0, 1, 1, 0, 1, 0],
    ];

    fn add(b: &mut DocBuilder, p: OntoPattern) {
        match p {
            OntoPattern::Relator => {
                let rel = b.class("relator", "Enrollment");
                for (kind, role) in [("Person", "Student"), ("Organization", "School")] {
                    let k = b.class("kind", kind);
                    let r = b.class("role", role);
                    b.gen(&k, &r);
                    b.relation_with_cards("mediation", &rel, &r, "1..*", "1");
                }
            }
            OntoPattern::RoleMixin => {
                let rm = b.class("roleMixin", "Customer");
                let mut member_gens = Vec::new();
                for (kind, role) in [("Person", "PersonalCustomer"), ("Company", "CorporateCustomer")] {
                    let k = b.class("kind", kind);
                    let r = b.class("role", role);
                    member_gens.push(b.gen(&rm, &r));
                    b.gen(&k, &r);
                }
                let refs: Vec<&str> = member_gens.iter().map(String::as_str).collect();
                b.genset(&refs, true, true);
            }
            OntoPattern::Characterization => {
                let m = b.class("mode", "Headache");
                let k = b.class("kind", "Patient");
                b.relation_with_cards("characterization", &m, &k, "1..*", "1");
            }
            OntoPattern::Category => {
                let c = b.class("category", "PhysicalObject");
                for kind in ["Car", "Building"] {
                    let k = b.class("kind", kind);
                    b.gen(&c, &k);
                }
            }
            OntoPattern::Subkind | OntoPattern::Phase => {
                let (st, names, complete) = if p == OntoPattern::Subkind {
                    ("subkind", ["Man", "Woman"], false)
                } else {
                    ("phase", ["Child", "Adult"], true)
                };
                let k = b.class("kind", "Person");
                let gens: Vec<String> = names
                    .iter()
                    .map(|n| {
                        let s = b.class(st, n);
                        b.gen(&k, &s)
                    })
                    .collect();
                let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
                b.genset(&refs, true, complete);
            }
        }
    }

    /// The ten model documents, ids `01`..`10`.
    pub fn documents() -> Vec<(String, CanonicalModelDoc)> {
        DISTRIBUTION
            .iter()
            .enumerate()
            .map(|(m, row)| {
                let mut b = DocBuilder::new(Language::Ontouml);
                for (p, &count) in OntoPattern::ALL.iter().zip(row) {
                    for _ in 0..count {
                        add(&mut b, *p);
                    }
                }
                // an unstereotyped association tying the first and last class
                let (first, last) = (b.classes[0].clone(), b.classes[b.classes.len() - 1].clone());
                b.relation(None, &first, &last);
                (format!("{:02}", m + 1), b.doc)
            })
            .collect()
    }

    pub fn dataset() -> GraphDataset {
        super::import_all(documents())
    }

    /// One imported instance of a pattern, with names removed.
    pub fn target(p: OntoPattern) -> ModelGraph {
        let mut b = DocBuilder::new(Language::Ontouml);
        add(&mut b, p);
        let (mut g, _) = import_document(&b.doc, p.name()).expect("pattern documents import");
        g.strip_properties();
        g
    }

    /// The seven mining configurations: a neutral run and one run per
    /// pattern. Select sets list the pattern's class stereotypes plus the
    /// connector constructs it needs.
    pub fn trials() -> Vec<Trial<OntoPattern>> {
        let cards = ["card-src", "card-tgt"];
        vec![
            Trial::new("Neutral", None, 3, 5, None, &[]),
            Trial::new(
                "Relator",
                Some(OntoPattern::Relator),
                3,
                12,
                Some([&["kind", "role", "relator", "gen", "mediation"][..], &cards].concat()),
                &["characterization"],
            ),
            Trial::new(
                "RoleMixin",
                Some(OntoPattern::RoleMixin),
                4,
                10,
                Some(vec!["kind", "role", "roleMixin", "gen", "genset"]),
                &["association"],
            ),
            Trial::new(
                "Characterization",
                Some(OntoPattern::Characterization),
                8,
                4,
                Some([&["kind", "mode", "characterization"][..], &cards].concat()),
                &["gen"],
            ),
            Trial::new(
                "Category",
                Some(OntoPattern::Category),
                6,
                4,
                Some(vec!["kind", "category", "gen"]),
                &["association"],
            ),
            Trial::new(
                "Subkind",
                Some(OntoPattern::Subkind),
                3,
                4,
                Some(vec!["kind", "subkind", "gen", "genset"]),
                &["association"],
            ),
            Trial::new(
                "Phase",
                Some(OntoPattern::Phase),
                3,
                4,
                Some(vec!["kind", "phase", "gen", "genset"]),
                &["association"],
            ),
        ]
    }
}

pub mod archimate {
    //! Ten ArchiMate models embedding six EA smells.

    use super::*;

    #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
    pub enum EaSmell {
        ChattyService,
        CombinatorialExplosion,
        CyclicDependency,
        DataService,
        MultifacetedAbstraction,
        WrongCuts,
    }

    impl EaSmell {
        pub const ALL: [EaSmell; 6] = [
            EaSmell::ChattyService,
            EaSmell::CombinatorialExplosion,
            EaSmell::CyclicDependency,
            EaSmell::DataService,
            EaSmell::MultifacetedAbstraction,
            EaSmell::WrongCuts,
        ];

        pub fn code(self) -> &'static str {
            match self {
                EaSmell::ChattyService => "CS",
                EaSmell::CombinatorialExplosion => "CE",
                EaSmell::CyclicDependency => "CD",
                EaSmell::DataService => "DS",
                EaSmell::MultifacetedAbstraction => "MA",
                EaSmell::WrongCuts => "WC",
            }
        }
    }

    /// Instances per model, columns in [`EaSmell::ALL`] order.
    pub const DISTRIBUTION: [[usize; 6]; 10] = [
        [1, 0, 1, 0, 1, 0],
        [0, 1, 1, 0, 0, 2],
        [0, 1, 0, 1, 0, 1],
        [1, 0, 0, 1, 1, 0],
        [0, 1, 0, 0, 1, 2],
        [0, 0, 2, 0, 0, 1],
        [0, 0, 1, 0, 1, 1],
        [1, 0, 1, 1, 0, 0],
        [0, 1, 0, 0, 2, 1],
        [0, 0, 2, 0, 0, 1],
    ];

    fn add(b: &mut DocBuilder, s: EaSmell) {
        match s {
            EaSmell::ChattyService => {
                let hub = b.class("BusinessProcess", "Handle Claim");
                let t1 = b.class("BusinessProcess", "Check Policy");
                let t2 = b.class("BusinessProcess", "Assess Damage");
                let f = b.class("BusinessProcess", "Pay Out");
                let s = b.class("BusinessProcess", "Register Claim");
                b.relation(Some("Triggering"), &hub, &t1);
                b.relation(Some("Triggering"), &hub, &t2);
                b.relation(Some("Flow"), &hub, &f);
                b.relation(Some("Serving"), &s, &hub);
            }
            EaSmell::CombinatorialExplosion => {
                let art = b.class("Artifact", "Shared Library");
                let ts = b.class("TechnologyService", "Hosting");
                b.relation(Some("Realization"), &art, &ts);
                for n in ["Billing", "Invoicing", "Reporting"] {
                    let s = b.class("ApplicationService", n);
                    b.relation(Some("Access"), &s, &art);
                }
            }
            EaSmell::CyclicDependency => {
                let ids: Vec<String> = ["Queue", "Scheduler", "Worker", "Monitor"]
                    .iter()
                    .map(|n| b.class("TechnologyService", n))
                    .collect();
                for i in 0..ids.len() {
                    b.relation(Some("Triggering"), &ids[i], &ids[(i + 1) % ids.len()]);
                }
            }
            EaSmell::DataService => {
                let s = b.class("ApplicationService", "Customer Data");
                for n in ["Customer Record", "Address Record"] {
                    let d = b.class("DataObject", n);
                    b.relation(Some("Access"), &s, &d);
                }
                let bs = b.class("BusinessService", "Customer Care");
                b.relation(Some("Serving"), &s, &bs);
            }
            EaSmell::MultifacetedAbstraction => {
                let a = b.class("BusinessActor", "Clerk");
                for n in ["Approve Loan", "Archive Files"] {
                    let p = b.class("BusinessProcess", n);
                    b.relation(Some("Assignment"), &a, &p);
                }
            }
            EaSmell::WrongCuts => {
                let c = b.class("ApplicationComponent", "Frontend");
                for n in ["Compute Tax", "Store Orders"] {
                    let f = b.class("ApplicationFunction", n);
                    b.relation(Some("Realization"), &c, &f);
                }
            }
        }
    }

    pub fn documents() -> Vec<(String, CanonicalModelDoc)> {
        DISTRIBUTION
            .iter()
            .enumerate()
            .map(|(m, row)| {
                let mut b = DocBuilder::new(Language::Archimate);
                for (s, &count) in EaSmell::ALL.iter().zip(row) {
                    for _ in 0..count {
                        add(&mut b, *s);
                    }
                }
                let first = b.classes[0].clone();
                let obj = b.class("BusinessObject", "Note");
                b.relation(Some("Association"), &obj, &first);
                (format!("{:02}", m + 1), b.doc)
            })
            .collect()
    }

    pub fn dataset() -> GraphDataset {
        super::import_all(documents())
    }

    pub fn target(s: EaSmell) -> ModelGraph {
        let mut b = DocBuilder::new(Language::Archimate);
        add(&mut b, s);
        let (mut g, _) = import_document(&b.doc, s.code()).expect("smell documents import");
        g.strip_properties();
        g
    }

    pub fn trials() -> Vec<Trial<EaSmell>> {
        let t = |s: EaSmell, sup, nodes, sel: &[&'static str]| Trial::new(s.code(), Some(s), sup, nodes, Some(sel.to_vec()), &[]);
        vec![
            Trial::new("Neutral", None, 3, 5, None, &[]),
            t(EaSmell::ChattyService, 3, 9, &["BusinessProcess", "Flow", "Serving", "Triggering"]),
            t(
                EaSmell::CombinatorialExplosion,
                4,
                9,
                &["TechnologyService", "Artifact", "ApplicationService", "Realization", "Access"],
            ),
            t(EaSmell::CyclicDependency, 6, 8, &["TechnologyService", "Triggering"]),
            t(
                EaSmell::DataService,
                3,
                7,
                &["ApplicationService", "BusinessService", "DataObject", "Access", "Serving"],
            ),
            t(EaSmell::MultifacetedAbstraction, 5, 5, &["BusinessActor", "BusinessProcess", "Assignment"]),
            t(EaSmell::WrongCuts, 7, 5, &["ApplicationComponent", "ApplicationFunction", "Realization"]),
        ]
    }
}

/// One mining run of a validation experiment.
#[derive(Debug, Clone)]
pub struct Trial<T> {
    pub name: &'static str,
    pub target: Option<T>,
    pub min_support: usize,
    pub min_nodes: usize,
    pub select: Option<Vec<&'static str>>,
    pub remove: Vec<&'static str>,
}

impl<T> Trial<T> {
    fn new(
        name: &'static str,
        target: Option<T>,
        min_support: usize,
        min_nodes: usize,
        select: Option<Vec<&'static str>>,
        remove: &[&'static str],
    ) -> Self {
        Trial {
            name,
            target,
            min_support,
            min_nodes,
            select,
            remove: remove.to_vec(),
        }
    }

    pub fn filter(&self) -> FilterSpec {
        FilterSpec::from_strs(self.select.as_deref(), &self.remove, &[]).expect("trial filters are consistent")
    }
}

fn import_all(docs: Vec<(String, CanonicalModelDoc)>) -> GraphDataset {
    let graphs = docs
        .iter()
        .map(|(id, doc)| import_document(doc, id).expect("fixture documents import").0)
        .collect();
    GraphDataset::new(graphs).expect("fixture ids are unique")
}

/// Writes `<id>.json` files for an importer run.
pub fn write_documents(docs: &[(String, CanonicalModelDoc)], dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (id, doc) in docs {
        let path = dir.join(format!("{id}.json"));
        fs::write(&path, doc.to_json()).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

/// Random ArchiMate-like models with `min_rel..=max_rel` relationships
/// each. Relationships are drawn from a fixed random set of allowed
/// (source type, relationship, target type) triples over 12 element
/// types, mimicking a metamodel; endpoints reuse an existing element of
/// the right type with probability 0.7.
pub fn performance_documents(models: usize, min_rel: usize, max_rel: usize, seed: u64) -> Vec<(String, CanonicalModelDoc)> {
    const RELATIONS: [&str; 8] = [
        "Access",
        "Aggregation",
        "Assignment",
        "Composition",
        "Flow",
        "Realization",
        "Serving",
        "Triggering",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let types: Vec<&str> = ARCHIMATE_ELEMENT_TYPES
        .choose_multiple(&mut rng, 12)
        .copied()
        .collect();
    let triples: Vec<(&str, &str, &str)> = (0..20)
        .map(|_| {
            (
                *types.choose(&mut rng).unwrap(),
                *RELATIONS.choose(&mut rng).unwrap(),
                *types.choose(&mut rng).unwrap(),
            )
        })
        .collect();
    (0..models)
        .map(|m| {
            let mut b = DocBuilder::new(Language::Archimate);
            let mut by_type: std::collections::BTreeMap<&str, Vec<String>> = Default::default();
            let rels = rng.gen_range(min_rel..=max_rel);
            let mut pick = |b: &mut DocBuilder, rng: &mut ChaCha8Rng, t: &'static str, avoid: Option<&str>| {
                let pool = by_type.entry(t).or_default();
                let reusable: Vec<&String> = pool.iter().filter(|e| Some(e.as_str()) != avoid).collect();
                if !reusable.is_empty() && rng.gen_bool(0.7) {
                    (*reusable.choose(rng).unwrap()).clone()
                } else {
                    let id = b.class(t, t);
                    pool.push(id.clone());
                    id
                }
            };
            for _ in 0..rels {
                let (s, r, t) = *triples.choose(&mut rng).unwrap();
                let src = pick(&mut b, &mut rng, s, None);
                let tgt = pick(&mut b, &mut rng, t, Some(&src));
                b.relation(Some(r), &src, &tgt);
            }
            (format!("m{:03}", m + 1), b.doc)
        })
        .collect()
}

pub fn performance_corpus(models: usize, seed: u64) -> GraphDataset {
    import_all(performance_documents(models, 30, 80, seed))
}

/// Connected subgraphs obtained by deleting one edge (and any node left
/// isolated), deduplicated up to isomorphism.
pub fn one_edge_deletions(g: &ModelGraph) -> Vec<ModelGraph> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for skip in 0..g.edge_count() {
        let kept: Vec<_> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, e)| *e)
            .collect();
        let nodes: Vec<NodeId> = g
            .nodes()
            .iter()
            .map(|n| n.id)
            .filter(|n| kept.iter().any(|e| e.touches(*n)))
            .collect();
        let h = g.induced_by_edges(&nodes, &kept);
        if h.edge_count() == 0 || !h.is_connected() {
            continue;
        }
        let code = min_dfs_code(&h).expect("connected with edges");
        if seen.insert(code) {
            out.push(h);
        }
    }
    out
}

/// Pattern variants for clustering evaluation: each OntoUML target plus
/// distinct connected one- and two-edge-deletion variants, `per_family`
/// graphs per family at most. Returns the graphs and the family clusters.
pub fn clustering_fixture(per_family: usize) -> (Vec<ModelGraph>, Vec<Cluster>) {
    let mut graphs = Vec::new();
    let mut truth = Vec::new();
    for (fid, p) in ontouml::OntoPattern::ALL.iter().enumerate() {
        let target = ontouml::target(*p);
        let mut seen: BTreeSet<DfsCode> = BTreeSet::from([min_dfs_code(&target).unwrap()]);
        let mut family = vec![target];
        let mut frontier = family.clone();
        for _ in 0..2 {
            let mut next = Vec::new();
            for h in &frontier {
                for v in one_edge_deletions(h) {
                    if seen.insert(min_dfs_code(&v).unwrap()) {
                        next.push(v.clone());
                        family.push(v);
                    }
                }
            }
            frontier = next;
        }
        family.truncate(per_family);
        let start = graphs.len();
        for (i, mut g) in family.into_iter().enumerate() {
            g.model_id = format!("{}_{i}", p.name());
            graphs.push(g);
        }
        truth.push(Cluster {
            cluster_id: fid,
            members: (start..graphs.len()).collect(),
        });
    }
    (graphs, truth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ontouml_targets_have_expected_sizes() {
        use ontouml::OntoPattern::*;
        let sizes: Vec<usize> = ontouml::OntoPattern::ALL.iter().map(|p| ontouml::target(*p).node_count()).collect();
        assert_eq!(sizes, vec![13, 10, 5, 5, 6, 6]);
        assert_eq!(ontouml::target(Characterization).edge_count(), 4);
        assert!(ontouml::target(Relator).is_connected());
    }

    #[test]
    fn archimate_targets_have_expected_sizes() {
        let sizes: Vec<usize> = archimate::EaSmell::ALL.iter().map(|s| archimate::target(*s).node_count()).collect();
        assert_eq!(sizes, vec![9, 9, 8, 7, 5, 5]);
    }

    #[test]
    fn datasets_have_ten_models() {
        assert_eq!(ontouml::dataset().len(), 10);
        assert_eq!(archimate::dataset().len(), 10);
        assert_eq!(three_graphs().len(), 3);
    }

    #[test]
    fn performance_corpus_is_deterministic() {
        let a = performance_documents(3, 30, 80, 7);
        let b = performance_documents(3, 30, 80, 7);
        assert_eq!(a, b);
        for (_, d) in &a {
            assert!((30..=80).contains(&d.relations.len()));
        }
    }

    #[test]
    fn clustering_fixture_size() {
        let (graphs, truth) = clustering_fixture(6);
        assert!(graphs.len() >= 30, "{}", graphs.len());
        assert_eq!(truth.len(), 6);
        assert!(graphs.iter().all(|g| g.is_connected()));
    }
}
