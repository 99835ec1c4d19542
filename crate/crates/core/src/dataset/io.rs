//! Dense CSV, sparse line and attribute-value readers, plus the dense writer.

use std::collections::HashMap;

use thiserror::Error;

use super::{AttributeValues, BooleanDatabase};
use crate::bitset::AttributeSet;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("line {line}: expected {expected} cells, found {found}")]
    Ragged { line: u64, expected: usize, found: usize },
    #[error("line {line}: cell {column} is {cell:?}, expected \"0\" or \"1\"")]
    NonBinary { line: u64, column: usize, cell: String },
    #[error("line {line}: duplicate {kind} name {name:?}")]
    Duplicate { line: u64, kind: &'static str, name: String },
    #[error("line {line}: {message}")]
    Syntax { line: u64, message: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Shape(String),
    #[error("no value given for attribute {0:?}")]
    MissingValue(String),
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes())
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

/// Header `,a1,a2,...` (or `id,a1,...`), then one `name,0,1,...` row per object.
pub fn load_dense(text: &str) -> Result<BooleanDatabase, LoadError> {
    let mut records = reader(text).into_records();
    let header = match records.next() {
        Some(r) => r?,
        None => return BooleanDatabase::from_rows(Vec::new(), Vec::new(), Vec::new()),
    };
    let header_line = line_of(&header);
    let first = header.get(0).unwrap_or("");
    if !(first.is_empty() || first == "id") {
        return Err(LoadError::Syntax {
            line: header_line,
            message: format!("first header cell must be empty or \"id\", found {first:?}"),
        });
    }
    let mut attribute_names = Vec::with_capacity(header.len().saturating_sub(1));
    let mut seen = HashMap::new();
    for name in header.iter().skip(1) {
        if seen.insert(name.to_string(), ()).is_some() {
            return Err(LoadError::Duplicate { line: header_line, kind: "attribute", name: name.into() });
        }
        attribute_names.push(name.to_string());
    }

    let n_attributes = attribute_names.len();
    let mut object_names = Vec::new();
    let mut rows = Vec::new();
    let mut seen_objects = HashMap::new();
    for record in records {
        let record = record?;
        let line = line_of(&record);
        if record.len() != n_attributes + 1 {
            return Err(LoadError::Ragged { line, expected: n_attributes + 1, found: record.len() });
        }
        let name = &record[0];
        if seen_objects.insert(name.to_string(), ()).is_some() {
            return Err(LoadError::Duplicate { line, kind: "object", name: name.into() });
        }
        let mut row = AttributeSet::empty(n_attributes);
        for (a, cell) in record.iter().skip(1).enumerate() {
            match cell {
                "1" => row.insert(a),
                "0" => {}
                _ => return Err(LoadError::NonBinary { line, column: a + 2, cell: cell.into() }),
            }
        }
        object_names.push(name.to_string());
        rows.push(row);
    }
    BooleanDatabase::from_rows(attribute_names, object_names, rows)
}

/// One `object: attr attr ...` line per object. Attribute indices follow
/// first appearance. Blank lines are skipped.
pub fn load_sparse(text: &str) -> Result<BooleanDatabase, LoadError> {
    let mut attribute_names: Vec<String> = Vec::new();
    let mut attribute_index: HashMap<String, usize> = HashMap::new();
    let mut object_names = Vec::new();
    let mut object_index = HashMap::new();
    let mut members: Vec<Vec<usize>> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i as u64 + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let Some((name, body)) = raw.split_once(':') else {
            return Err(LoadError::Syntax { line, message: "expected \"name: attributes...\"".into() });
        };
        let name = name.trim();
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(LoadError::Syntax { line, message: format!("bad object name {name:?}") });
        }
        if object_index.insert(name.to_string(), object_names.len()).is_some() {
            return Err(LoadError::Duplicate { line, kind: "object", name: name.into() });
        }
        object_names.push(name.to_string());
        let row = body
            .split_whitespace()
            .map(|attr| {
                *attribute_index.entry(attr.to_string()).or_insert_with(|| {
                    attribute_names.push(attr.to_string());
                    attribute_names.len() - 1
                })
            })
            .collect();
        members.push(row);
    }

    let n_attributes = attribute_names.len();
    let rows = members.into_iter().map(|m| AttributeSet::from_indices(n_attributes, m)).collect();
    BooleanDatabase::from_rows(attribute_names, object_names, rows)
}

/// CSV with header `attribute,value`; every attribute of `db` needs a value.
pub fn load_values(text: &str, db: &BooleanDatabase) -> Result<AttributeValues, LoadError> {
    let mut records = reader(text).into_records();
    let header = records.next().ok_or_else(|| LoadError::Syntax { line: 1, message: "empty values file".into() })??;
    if header.iter().collect::<Vec<_>>() != ["attribute", "value"] {
        return Err(LoadError::Syntax { line: line_of(&header), message: "header must be \"attribute,value\"".into() });
    }
    let mut values = vec![None; db.n_attributes()];
    for record in records {
        let record = record?;
        let line = line_of(&record);
        if record.len() != 2 {
            return Err(LoadError::Ragged { line, expected: 2, found: record.len() });
        }
        let name = &record[0];
        let id = db
            .attribute_id(name)
            .ok_or_else(|| LoadError::Syntax { line, message: format!("unknown attribute {name:?}") })?;
        let value: f64 = record[1]
            .parse()
            .map_err(|_| LoadError::Syntax { line, message: format!("value {:?} is not a number", &record[1]) })?;
        if !value.is_finite() {
            return Err(LoadError::Syntax { line, message: "value must be finite".into() });
        }
        if values[id.0].replace(value).is_some() {
            return Err(LoadError::Duplicate { line, kind: "attribute", name: name.into() });
        }
    }
    values
        .into_iter()
        .enumerate()
        .map(|(a, v)| v.ok_or_else(|| LoadError::MissingValue(db.attribute_names()[a].clone())))
        .collect::<Result<Vec<_>, _>>()
        .map(AttributeValues::new)
}

/// Inverse of [`load_dense`], with an empty first header cell.
pub fn write_dense(db: &BooleanDatabase) -> String {
    let mut writer = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    let mut header = vec![""];
    header.extend(db.attribute_names().iter().map(String::as_str));
    writer.write_record(&header).expect("writing to memory");
    for (o, name) in db.object_names().iter().enumerate() {
        let row = &db.by_object[o];
        let mut record = vec![name.as_str()];
        record.extend((0..db.n_attributes()).map(|a| if row.contains(a) { "1" } else { "0" }));
        writer.write_record(&record).expect("writing to memory");
    }
    String::from_utf8(writer.into_inner().expect("flushing to memory")).expect("csv output is utf-8")
}
