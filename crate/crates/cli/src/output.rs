//! JSON-lines concept listings: one header line, then one line per concept.

use cproj_core::{BooleanDatabase, Concept};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub attributes: usize,
    pub objects: usize,
    pub constraint: String,
    pub concepts: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub intent: Vec<String>,
    pub extent: Vec<String>,
}

impl Record {
    pub fn new(db: &BooleanDatabase, concept: &Concept) -> Self {
        Self {
            intent: db.attribute_labels(&concept.intent).into_iter().map(str::to_string).collect(),
            extent: db.object_labels(&concept.extent).into_iter().map(str::to_string).collect(),
        }
    }
}

/// Which concepts a listing leaves out.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Filter {
    pub drop_empty_extent: bool,
    pub drop_empty_intent: bool,
}

impl Filter {
    pub fn keeps(&self, concept: &Concept) -> bool {
        !(self.drop_empty_extent && concept.extent.is_empty() || self.drop_empty_intent && concept.intent.is_empty())
    }
}

/// Render concepts in the order given. Names inside each set are listed by
/// index order.
pub fn render_concepts(db: &BooleanDatabase, constraint: &str, concepts: &[Concept], filter: Filter) -> String {
    let kept: Vec<&Concept> = concepts.iter().filter(|c| filter.keeps(c)).collect();
    let header = Header {
        attributes: db.n_attributes(),
        objects: db.n_objects(),
        constraint: constraint.to_string(),
        concepts: kept.len(),
    };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for c in kept {
        out.push_str(&serde_json::to_string(&Record::new(db, c)).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// Parse a listing back into its header and records.
pub fn read_concepts(text: &str) -> serde_json::Result<(Header, Vec<Record>)> {
    let mut lines = text.lines();
    let header = serde_json::from_str(lines.next().unwrap_or_default())?;
    let records = lines.map(serde_json::from_str).collect::<serde_json::Result<_>>()?;
    Ok((header, records))
}
