//! De-reification of pattern graphs and PlantUML text emitters.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{
    EdgeLabel, ModelGraph, Node, NodeId, NodeRole, CARD_SRC_LABEL, CARD_TGT_LABEL, COMPLETE_LABEL,
    DISJOINT_LABEL, GENSET_LABEL,
};
use crate::matcher::Occurrence;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramBox {
    pub id: String,
    pub name: String,
    /// Construct labels joined with `, `; `None` for placeholders.
    pub stereotype: Option<String>,
    pub placeholder: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LinkKind {
    Association,
    Generalization,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub kind: LinkKind,
    /// Construct label of the reified connector (`mediation`, `Triggering`,
    /// `gen`, ...).
    pub relation_type: String,
    /// Bound name of the connector, if any.
    pub name: Option<String>,
    pub source: String,
    pub target: String,
    pub source_multiplicity: Option<String>,
    pub target_multiplicity: Option<String>,
    pub origin: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GensetNote {
    pub id: String,
    pub disjoint: bool,
    pub complete: bool,
    /// Boxes (the specific ends of member generalizations) the note hangs on.
    pub attached: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiagramModel {
    pub boxes: Vec<DiagramBox>,
    pub links: Vec<Link>,
    pub notes: Vec<GensetNote>,
}

impl DiagramModel {
    pub fn placeholder_count(&self) -> usize {
        self.boxes.iter().filter(|b| b.placeholder).count()
    }
}

fn stereotype(node: &Node) -> String {
    node.construct_labels
        .iter()
        .map(|l| l.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

fn cardinality_value(node: &Node) -> String {
    let parts: Vec<&str> = node
        .construct_labels
        .iter()
        .map(|l| l.as_str())
        .filter(|l| *l != CARD_SRC_LABEL && *l != CARD_TGT_LABEL)
        .collect();
    parts.join(" ")
}

fn box_id(n: NodeId) -> String {
    format!("n{}", n.0)
}

/// Turns a reified graph back into boxes and links.
pub fn dereify(graph: &ModelGraph) -> Result<DiagramModel> {
    let roles: Vec<NodeRole> = graph
        .nodes()
        .iter()
        .map(|n| {
            NodeRole::classify(n).map_err(|roles| Error::ContradictoryRoles {
                node: n.id.0,
                roles: roles.iter().map(|r| format!("{r:?}")).collect::<Vec<_>>().join("+"),
            })
        })
        .collect::<Result<_>>()?;
    let adj = graph.adjacency();
    let role = |n: NodeId| roles[n.index()];
    let neighbour = |n: NodeId, label: EdgeLabel, want: NodeRole| {
        adj[n.index()]
            .iter()
            .find(|&&(w, l)| l == label && role(w) == want)
            .map(|&(w, _)| w)
    };

    let mut model = DiagramModel::default();
    for n in graph.nodes() {
        if role(n.id) == NodeRole::Element {
            model.boxes.push(DiagramBox {
                id: box_id(n.id),
                name: n.name().map(str::to_string).unwrap_or_else(|| stereotype(n)),
                stereotype: Some(stereotype(n)),
                placeholder: false,
            });
        }
    }
    let mut placeholders = 0usize;
    let mut end = |found: Option<NodeId>, boxes: &mut Vec<DiagramBox>| match found {
        Some(w) => box_id(w),
        None => {
            let id = format!("class_{placeholders}");
            placeholders += 1;
            boxes.push(DiagramBox {
                id: id.clone(),
                name: id.clone(),
                stereotype: None,
                placeholder: true,
            });
            id
        }
    };

    for n in graph.nodes() {
        match role(n.id) {
            NodeRole::Relation => {
                let source = end(neighbour(n.id, EdgeLabel::Source, NodeRole::Element), &mut model.boxes);
                let target = end(neighbour(n.id, EdgeLabel::Target, NodeRole::Element), &mut model.boxes);
                let mut link = Link {
                    kind: LinkKind::Association,
                    relation_type: stereotype(n),
                    name: n.name().map(str::to_string),
                    source,
                    target,
                    source_multiplicity: None,
                    target_multiplicity: None,
                    origin: n.id,
                };
                for &(w, l) in &adj[n.id.index()] {
                    if l != EdgeLabel::Cardinalities || role(w) != NodeRole::Cardinality {
                        continue;
                    }
                    let card = graph.node(w);
                    let value = cardinality_value(card);
                    if card.has_label(CARD_SRC_LABEL) {
                        link.source_multiplicity = Some(value);
                    } else {
                        link.target_multiplicity = Some(value);
                    }
                }
                model.links.push(link);
            }
            NodeRole::Generalization => {
                let child = end(neighbour(n.id, EdgeLabel::Specific, NodeRole::Element), &mut model.boxes);
                let parent = end(neighbour(n.id, EdgeLabel::General, NodeRole::Element), &mut model.boxes);
                model.links.push(Link {
                    kind: LinkKind::Generalization,
                    relation_type: stereotype(n),
                    name: n.name().map(str::to_string),
                    source: child,
                    target: parent,
                    source_multiplicity: None,
                    target_multiplicity: None,
                    origin: n.id,
                });
            }
            _ => {}
        }
    }

    let child_of: BTreeMap<NodeId, String> = model
        .links
        .iter()
        .filter(|l| l.kind == LinkKind::Generalization)
        .map(|l| (l.origin, l.source.clone()))
        .collect();
    for n in graph.nodes() {
        if role(n.id) != NodeRole::GeneralizationSet {
            continue;
        }
        let mut attached: Vec<String> = adj[n.id.index()]
            .iter()
            .filter_map(|(w, _)| child_of.get(w).cloned())
            .collect();
        attached.sort();
        attached.dedup();
        model.notes.push(GensetNote {
            id: format!("GS{}", model.notes.len()),
            disjoint: n.has_label(DISJOINT_LABEL),
            complete: n.has_label(COMPLETE_LABEL),
            attached,
        });
    }

    model.links.sort_by(|a, b| {
        (&a.source, &a.target, &a.relation_type, a.origin).cmp(&(&b.source, &b.target, &b.relation_type, b.origin))
    });
    Ok(model)
}

/// Copy of the pattern graph carrying the properties (names) bound by an
/// occurrence.
pub fn bind_occurrence(pattern: &ModelGraph, occurrence: &Occurrence) -> ModelGraph {
    let mut g = pattern.clone();
    for (p, props) in &occurrence.bound_properties {
        for (k, v) in props {
            g.set_property(*p, k, v.clone());
        }
    }
    g
}

fn quote(s: &str) -> String {
    s.replace('"', "'")
}

pub const START_MARKER: &str = "@startuml";
pub const END_MARKER: &str = "@enduml";

/// PlantUML class diagram.
pub fn emit_class_diagram(diagram: &DiagramModel) -> String {
    let mut out = format!("{START_MARKER}\n");
    if !diagram.boxes.is_empty() {
        out.push_str("hide empty members\n");
    }
    for b in &diagram.boxes {
        match (&b.stereotype, b.placeholder) {
            (_, true) => writeln!(out, "class \"{}\" as {} #line.dashed", quote(&b.name), b.id),
            (Some(st), false) => writeln!(out, "class \"{}\" as {} <<{}>>", quote(&b.name), b.id, quote(st)),
            (None, false) => writeln!(out, "class \"{}\" as {}", quote(&b.name), b.id),
        }
        .unwrap();
    }
    for l in &diagram.links {
        match l.kind {
            LinkKind::Generalization => writeln!(out, "{} --|> {}", l.source, l.target).unwrap(),
            LinkKind::Association => {
                let mult = |m: &Option<String>| m.as_ref().map(|m| format!(" \"{}\"", quote(m))).unwrap_or_default();
                let label = match &l.name {
                    Some(name) => format!("{} <<{}>>", quote(name), quote(&l.relation_type)),
                    None => format!("<<{}>>", quote(&l.relation_type)),
                };
                writeln!(
                    out,
                    "{}{} --{} {} : {}",
                    l.source,
                    mult(&l.source_multiplicity),
                    mult(&l.target_multiplicity),
                    l.target,
                    label
                )
                .unwrap();
            }
        }
    }
    for n in &diagram.notes {
        let mut flags = Vec::new();
        if n.disjoint {
            flags.push(DISJOINT_LABEL);
        }
        if n.complete {
            flags.push(COMPLETE_LABEL);
        }
        writeln!(out, "note \"{GENSET_LABEL} {{{}}}\" as {} #line.dashed", flags.join(", "), n.id).unwrap();
        for a in &n.attached {
            writeln!(out, "{} .. {}", n.id, a).unwrap();
        }
    }
    out.push_str(END_MARKER);
    out.push('\n');
    out
}

/// ArchiMate element type -> PlantUML ArchiMate macro.
fn archimate_element_macro(kind: &str) -> Option<&'static str> {
    Some(match kind {
        "BusinessActor" => "Business_Actor",
        "BusinessRole" => "Business_Role",
        "BusinessCollaboration" => "Business_Collaboration",
        "BusinessInterface" => "Business_Interface",
        "BusinessProcess" => "Business_Process",
        "BusinessFunction" => "Business_Function",
        "BusinessInteraction" => "Business_Interaction",
        "BusinessEvent" => "Business_Event",
        "BusinessService" => "Business_Service",
        "BusinessObject" => "Business_Object",
        "Contract" => "Business_Contract",
        "Representation" => "Business_Representation",
        "Product" => "Business_Product",
        "ApplicationComponent" => "Application_Component",
        "ApplicationCollaboration" => "Application_Collaboration",
        "ApplicationInterface" => "Application_Interface",
        "ApplicationFunction" => "Application_Function",
        "ApplicationInteraction" => "Application_Interaction",
        "ApplicationProcess" => "Application_Process",
        "ApplicationEvent" => "Application_Event",
        "ApplicationService" => "Application_Service",
        "DataObject" => "Application_DataObject",
        "Node" => "Technology_Node",
        "Device" => "Technology_Device",
        "SystemSoftware" => "Technology_SystemSoftware",
        "TechnologyCollaboration" => "Technology_Collaboration",
        "TechnologyInterface" => "Technology_Interface",
        "CommunicationNetwork" => "Technology_CommunicationNetwork",
        "TechnologyFunction" => "Technology_Function",
        "TechnologyProcess" => "Technology_Process",
        "TechnologyEvent" => "Technology_Event",
        "TechnologyService" => "Technology_Service",
        "Artifact" => "Technology_Artifact",
        "Stakeholder" => "Motivation_Stakeholder",
        "Goal" => "Motivation_Goal",
        "Principle" => "Motivation_Principle",
        "Requirement" => "Motivation_Requirement",
        "Resource" => "Strategy_Resource",
        "Capability" => "Strategy_Capability",
        "CourseOfAction" => "Strategy_CourseOfAction",
        "ValueStream" => "Strategy_ValueStream",
        "WorkPackage" => "Implementation_WorkPackage",
        "Deliverable" => "Implementation_Deliverable",
        "Grouping" => "Grouping",
        "Location" => "Location",
        _ => return None,
    })
}

fn archimate_relation_macro(kind: &str) -> Option<&'static str> {
    Some(match kind {
        "Access" => "Rel_Access",
        "Aggregation" => "Rel_Aggregation",
        "Assignment" => "Rel_Assignment",
        "Association" => "Rel_Association",
        "Composition" => "Rel_Composition",
        "Flow" => "Rel_Flow",
        "Influence" => "Rel_Influence",
        "Realization" => "Rel_Realization",
        "Serving" => "Rel_Serving",
        "Specialization" => "Rel_Specialization",
        "Triggering" => "Rel_Triggering",
        _ => return None,
    })
}

/// PlantUML diagram using the ArchiMate standard library macros.
pub fn emit_archimate_diagram(diagram: &DiagramModel) -> String {
    let mut out = format!("{START_MARKER}\n!include <archimate/Archimate>\n");
    for b in &diagram.boxes {
        let kind = b.stereotype.as_deref().unwrap_or("");
        if b.placeholder {
            writeln!(out, "rectangle \"{}\" as {} #line.dashed", quote(&b.name), b.id).unwrap();
        } else if let Some(m) = archimate_element_macro(kind) {
            writeln!(out, "{m}({}, \"{}\")", b.id, quote(&b.name)).unwrap();
        } else {
            writeln!(out, "rectangle \"{}\" <<{}>> as {}", quote(&b.name), quote(kind), b.id).unwrap();
        }
    }
    for l in &diagram.links {
        let kind = match l.kind {
            LinkKind::Generalization => "Specialization",
            LinkKind::Association => l.relation_type.as_str(),
        };
        let label = quote(l.name.as_deref().unwrap_or(kind));
        match archimate_relation_macro(kind) {
            Some(m) => writeln!(out, "{m}({}, {}, \"{label}\")", l.source, l.target).unwrap(),
            None => writeln!(out, "{} --> {} : {label}", l.source, l.target).unwrap(),
        }
    }
    for n in &diagram.notes {
        writeln!(out, "note \"{GENSET_LABEL}\" as {}", n.id).unwrap();
        for a in &n.attached {
            writeln!(out, "{} .. {}", n.id, a).unwrap();
        }
    }
    out.push_str(END_MARKER);
    out.push('\n');
    out
}
