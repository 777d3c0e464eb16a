use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Generic,
    Ontouml,
    Archimate,
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Language::Generic => "generic",
            Language::Ontouml => "ontouml",
            Language::Archimate => "archimate",
        })
    }
}

impl FromStr for Language {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "generic" => Ok(Language::Generic),
            "ontouml" => Ok(Language::Ontouml),
            "archimate" => Ok(Language::Archimate),
            other => Err(Error::Config(format!("unknown language {other:?}"))),
        }
    }
}

/// A class (OntoUML/generic) or element (ArchiMate).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, alias = "type", skip_serializing_if = "Option::is_none")]
    pub stereotype: Option<String>,
    #[serde(flatten, skip_serializing)]
    pub extra: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RelationDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, rename = "type", alias = "stereotype", skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub source: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_cardinality: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_cardinality: Option<String>,
    #[serde(flatten, skip_serializing)]
    pub extra: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralizationDoc {
    pub id: String,
    pub general: String,
    pub specific: String,
    #[serde(flatten, skip_serializing)]
    pub extra: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GeneralizationSetDoc {
    pub id: String,
    #[serde(default)]
    pub generalizations: Vec<String>,
    #[serde(default)]
    pub is_disjoint: bool,
    #[serde(default)]
    pub is_complete: bool,
    #[serde(flatten, skip_serializing)]
    pub extra: BTreeMap<String, Value>,
}

/// Language-neutral JSON model document consumed by the importers.
///
/// ArchiMate documents may use `elements` instead of `classes` and `type`
/// instead of `stereotype`; both spellings are accepted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CanonicalModelDoc {
    pub language: Language,
    #[serde(default, alias = "elements")]
    pub classes: Vec<ClassDoc>,
    #[serde(default)]
    pub relations: Vec<RelationDoc>,
    #[serde(default)]
    pub generalizations: Vec<GeneralizationDoc>,
    #[serde(default)]
    pub generalization_sets: Vec<GeneralizationSetDoc>,
    #[serde(flatten, skip_serializing)]
    pub extra: BTreeMap<String, Value>,
}

impl CanonicalModelDoc {
    pub fn new(language: Language) -> Self {
        CanonicalModelDoc {
            language,
            classes: Vec::new(),
            relations: Vec::new(),
            generalizations: Vec::new(),
            generalization_sets: Vec::new(),
            extra: BTreeMap::new(),
        }
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model documents always serialize")
    }

    pub fn class(&mut self, id: &str, name: &str, stereotype: &str) -> &mut Self {
        self.classes.push(ClassDoc {
            id: id.into(),
            name: Some(name.into()),
            stereotype: Some(stereotype.into()),
            extra: BTreeMap::new(),
        });
        self
    }

    pub fn relation(&mut self, id: &str, kind: Option<&str>, source: &str, target: &str) -> &mut Self {
        self.relations.push(RelationDoc {
            id: id.into(),
            name: None,
            kind: kind.map(Into::into),
            source: source.into(),
            target: target.into(),
            source_cardinality: None,
            target_cardinality: None,
            extra: BTreeMap::new(),
        });
        self
    }

    pub fn relation_with_cards(
        &mut self,
        id: &str,
        kind: Option<&str>,
        source: &str,
        target: &str,
        source_card: &str,
        target_card: &str,
    ) -> &mut Self {
        self.relation(id, kind, source, target);
        let r = self.relations.last_mut().unwrap();
        r.source_cardinality = Some(source_card.into());
        r.target_cardinality = Some(target_card.into());
        self
    }

    pub fn generalization(&mut self, id: &str, general: &str, specific: &str) -> &mut Self {
        self.generalizations.push(GeneralizationDoc {
            id: id.into(),
            general: general.into(),
            specific: specific.into(),
            extra: BTreeMap::new(),
        });
        self
    }

    pub fn generalization_set(
        &mut self,
        id: &str,
        members: &[&str],
        is_disjoint: bool,
        is_complete: bool,
    ) -> &mut Self {
        self.generalization_sets.push(GeneralizationSetDoc {
            id: id.into(),
            generalizations: members.iter().map(|m| m.to_string()).collect(),
            is_disjoint,
            is_complete,
            extra: BTreeMap::new(),
        });
        self
    }

    /// `(construct kind, id, unknown key)` for every key no importer reads.
    pub fn unknown_keys(&self) -> Vec<(String, String, String)> {
        let mut out = Vec::new();
        let mut push = |kind: &str, id: &str, extra: &BTreeMap<String, Value>| {
            for k in extra.keys() {
                out.push((kind.to_string(), id.to_string(), k.clone()));
            }
        };
        push("document", "", &self.extra);
        for c in &self.classes {
            push("class", &c.id, &c.extra);
        }
        for r in &self.relations {
            push("relation", &r.id, &r.extra);
        }
        for g in &self.generalizations {
            push("generalization", &g.id, &g.extra);
        }
        for s in &self.generalization_sets {
            push("generalizationSet", &s.id, &s.extra);
        }
        out
    }
}
