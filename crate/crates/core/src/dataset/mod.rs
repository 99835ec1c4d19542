//! The boolean relation between attributes and objects, kept in both
//! orientations, together with the Galois operators over it.

mod io;

pub use io::{load_dense, load_sparse, load_values, write_dense, LoadError};

use std::collections::HashMap;

use crate::bitset::{AttributeSet, ObjectSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttributeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectId(pub usize);

/// `by_object[o]` and `by_attribute[a]` always describe the same relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanDatabase {
    attribute_names: Vec<String>,
    object_names: Vec<String>,
    attribute_index: HashMap<String, usize>,
    object_index: HashMap<String, usize>,
    by_object: Vec<AttributeSet>,
    by_attribute: Vec<ObjectSet>,
}

impl BooleanDatabase {
    /// Build from per-object rows. Each row must live in a universe of
    /// `attribute_names.len()` attributes.
    pub fn from_rows(
        attribute_names: Vec<String>,
        object_names: Vec<String>,
        by_object: Vec<AttributeSet>,
    ) -> Result<Self, LoadError> {
        if by_object.len() != object_names.len() {
            return Err(LoadError::Shape(format!(
                "{} object rows for {} object names",
                by_object.len(),
                object_names.len()
            )));
        }
        let n_attributes = attribute_names.len();
        if let Some(row) = by_object.iter().find(|r| r.universe_len() != n_attributes) {
            return Err(LoadError::Shape(format!(
                "row over {} attributes, expected {n_attributes}",
                row.universe_len()
            )));
        }
        let attribute_index = index_names(&attribute_names, "attribute")?;
        let object_index = index_names(&object_names, "object")?;

        let mut by_attribute = vec![ObjectSet::empty(object_names.len()); n_attributes];
        for (o, row) in by_object.iter().enumerate() {
            for a in row {
                by_attribute[a].insert(o);
            }
        }
        Ok(Self { attribute_names, object_names, attribute_index, object_index, by_object, by_attribute })
    }

    /// Convenience constructor with generated names `a1..` and `o1..`.
    pub fn from_object_rows(n_attributes: usize, rows: &[&[usize]]) -> Self {
        let attribute_names = (1..=n_attributes).map(|i| format!("a{i}")).collect();
        let object_names = (1..=rows.len()).map(|i| format!("o{i}")).collect();
        let by_object = rows.iter().map(|r| AttributeSet::from_indices(n_attributes, r.iter().copied())).collect();
        Self::from_rows(attribute_names, object_names, by_object).expect("generated names are unique")
    }

    pub fn n_attributes(&self) -> usize {
        self.attribute_names.len()
    }

    pub fn n_objects(&self) -> usize {
        self.object_names.len()
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    pub fn object_names(&self) -> &[String] {
        &self.object_names
    }

    pub fn attribute_name(&self, id: AttributeId) -> &str {
        &self.attribute_names[id.0]
    }

    pub fn object_name(&self, id: ObjectId) -> &str {
        &self.object_names[id.0]
    }

    pub fn attribute_id(&self, name: &str) -> Option<AttributeId> {
        self.attribute_index.get(name).copied().map(AttributeId)
    }

    pub fn object_id(&self, name: &str) -> Option<ObjectId> {
        self.object_index.get(name).copied().map(ObjectId)
    }

    /// Attributes held by one object (a row of the original matrix).
    pub fn object_row(&self, o: ObjectId) -> &AttributeSet {
        &self.by_object[o.0]
    }

    /// Objects holding one attribute (a row of the transposed matrix).
    pub fn attribute_row(&self, a: AttributeId) -> &ObjectSet {
        &self.by_attribute[a.0]
    }

    pub fn holds(&self, a: AttributeId, o: ObjectId) -> bool {
        self.by_object[o.0].contains(a.0)
    }

    pub fn empty_attributes(&self) -> AttributeSet {
        AttributeSet::empty(self.n_attributes())
    }

    pub fn empty_objects(&self) -> ObjectSet {
        ObjectSet::empty(self.n_objects())
    }

    pub fn all_attributes(&self) -> AttributeSet {
        AttributeSet::full(self.n_attributes())
    }

    pub fn all_objects(&self) -> ObjectSet {
        ObjectSet::full(self.n_objects())
    }

    /// `f(O)`: attributes shared by every object of `objects`. `f(∅)` is the
    /// whole attribute universe.
    pub fn intension(&self, objects: &ObjectSet) -> AttributeSet {
        let mut out = self.all_attributes();
        for o in objects {
            out.intersect_with(&self.by_object[o]);
        }
        out
    }

    /// `g(A)`: objects holding every attribute of `attributes`. `g(∅)` is the
    /// whole object universe.
    pub fn extension(&self, attributes: &AttributeSet) -> ObjectSet {
        let mut out = self.all_objects();
        for a in attributes {
            out.intersect_with(&self.by_attribute[a]);
        }
        out
    }

    /// Same result as [`extension`](Self::extension), computed by testing
    /// each object row for containment. Faster when `attributes` is large.
    pub fn extension_by_rows(&self, attributes: &AttributeSet) -> ObjectSet {
        let mut out = self.empty_objects();
        for (o, row) in self.by_object.iter().enumerate() {
            if attributes.is_subset(row) {
                out.insert(o);
            }
        }
        out
    }

    /// `g(f(O))`.
    pub fn close_objects(&self, objects: &ObjectSet) -> ObjectSet {
        self.extension_by_rows(&self.intension(objects))
    }

    /// `f(g(A))`.
    pub fn close_attributes(&self, attributes: &AttributeSet) -> AttributeSet {
        self.intension(&self.extension(attributes))
    }

    pub fn is_closed_objects(&self, objects: &ObjectSet) -> bool {
        self.close_objects(objects) == *objects
    }

    pub fn is_closed_attributes(&self, attributes: &AttributeSet) -> bool {
        self.close_attributes(attributes) == *attributes
    }

    /// `Freq(A) = |g(A)|`.
    pub fn frequency(&self, attributes: &AttributeSet) -> usize {
        self.extension(attributes).count()
    }

    /// `|f(O)|`, the frequency of `objects` in the transposed matrix.
    pub fn object_frequency(&self, objects: &ObjectSet) -> usize {
        self.intension(objects).count()
    }

    /// Sum of attribute values over the transposed rows containing `objects`.
    pub fn weighted_frequency(&self, values: &AttributeValues, objects: &ObjectSet) -> f64 {
        values.sum_over(&self.intension(objects))
    }

    /// Swap the roles of attributes and objects.
    pub fn transpose(&self) -> BooleanDatabase {
        BooleanDatabase {
            attribute_names: self.object_names.clone(),
            object_names: self.attribute_names.clone(),
            attribute_index: self.object_index.clone(),
            object_index: self.attribute_index.clone(),
            by_object: self.by_attribute.iter().map(|r| r.cast()).collect(),
            by_attribute: self.by_object.iter().map(|r| r.cast()).collect(),
        }
    }

    pub fn attribute_set_from_names<'n, I>(&self, names: I) -> Result<AttributeSet, String>
    where
        I: IntoIterator<Item = &'n str>,
    {
        let mut set = self.empty_attributes();
        for name in names {
            set.insert(self.attribute_id(name).ok_or_else(|| name.to_string())?.0);
        }
        Ok(set)
    }

    pub fn object_set_from_names<'n, I>(&self, names: I) -> Result<ObjectSet, String>
    where
        I: IntoIterator<Item = &'n str>,
    {
        let mut set = self.empty_objects();
        for name in names {
            set.insert(self.object_id(name).ok_or_else(|| name.to_string())?.0);
        }
        Ok(set)
    }

    pub fn attribute_labels(&self, set: &AttributeSet) -> Vec<&str> {
        set.iter().map(|a| self.attribute_names[a].as_str()).collect()
    }

    pub fn object_labels(&self, set: &ObjectSet) -> Vec<&str> {
        set.iter().map(|o| self.object_names[o].as_str()).collect()
    }
}

fn index_names(names: &[String], kind: &str) -> Result<HashMap<String, usize>, LoadError> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(LoadError::Shape(format!("duplicate {kind} name {name:?}")));
        }
    }
    Ok(index)
}

/// One real value per attribute, indexed like the attribute universe.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeValues {
    values: Vec<f64>,
}

impl AttributeValues {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, a: AttributeId) -> f64 {
        self.values[a.0]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn all_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    pub fn sum_over(&self, set: &AttributeSet) -> f64 {
        set.iter().map(|a| self.values[a]).sum()
    }

    pub fn min_over(&self, set: &AttributeSet) -> f64 {
        set.iter().map(|a| self.values[a]).fold(f64::INFINITY, f64::min)
    }

    pub fn max_over(&self, set: &AttributeSet) -> f64 {
        set.iter().map(|a| self.values[a]).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Attributes whose value satisfies `keep`.
    pub fn select(&self, keep: impl Fn(f64) -> bool) -> AttributeSet {
        AttributeSet::from_indices(
            self.values.len(),
            self.values.iter().enumerate().filter(|(_, &v)| keep(v)).map(|(i, _)| i),
        )
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// o1↔{a1,a2,a3}, o2↔{a1,a2,a3}, o3↔{a2,a3,a4}.
    pub(crate) fn db1() -> BooleanDatabase {
        BooleanDatabase::from_object_rows(4, &[&[0, 1, 2], &[0, 1, 2], &[1, 2, 3]])
    }

    fn attrs(ix: &[usize]) -> AttributeSet {
        AttributeSet::from_indices(4, ix.iter().copied())
    }

    fn objs(ix: &[usize]) -> ObjectSet {
        ObjectSet::from_indices(3, ix.iter().copied())
    }

    #[test]
    fn orientations_agree() {
        let db = db1();
        assert_eq!(*db.attribute_row(AttributeId(0)), objs(&[0, 1]));
        for a in 0..4 {
            for o in 0..3 {
                assert_eq!(db.object_row(ObjectId(o)).contains(a), db.attribute_row(AttributeId(a)).contains(o));
            }
        }
    }

    #[test]
    fn intension_examples() {
        let db = db1();
        assert_eq!(db.intension(&objs(&[0, 1])), attrs(&[0, 1, 2]));
        assert_eq!(db.intension(&objs(&[])), attrs(&[0, 1, 2, 3]));
        assert_eq!(db.intension(&objs(&[0, 1, 2])), attrs(&[1, 2]));
    }

    #[test]
    fn extension_examples() {
        let db = db1();
        assert_eq!(db.extension(&attrs(&[1, 2])), objs(&[0, 1, 2]));
        assert_eq!(db.extension(&attrs(&[0, 1, 2, 3])), objs(&[]));
        assert_eq!(db.extension(&attrs(&[])), objs(&[0, 1, 2]));
        for a in [attrs(&[]), attrs(&[3]), attrs(&[0, 3]), attrs(&[1, 2])] {
            assert_eq!(db.extension(&a), db.extension_by_rows(&a));
        }
    }

    #[test]
    fn closures() {
        let db = db1();
        assert_eq!(db.close_objects(&objs(&[0])), objs(&[0, 1]));
        assert_eq!(db.close_objects(&objs(&[0, 1])), objs(&[0, 1]));
        assert_eq!(db.close_objects(&objs(&[])), objs(&[]));
        assert_eq!(db.close_attributes(&attrs(&[1])), attrs(&[1, 2]));
        assert_eq!(db.close_attributes(&attrs(&[0, 1, 2])), attrs(&[0, 1, 2]));
        assert_eq!(db.close_attributes(&attrs(&[])), attrs(&[1, 2]));
        assert!(db.is_closed_objects(&objs(&[2])));
        assert!(!db.is_closed_objects(&objs(&[0])));
        assert!(db.is_closed_attributes(&db.all_attributes()));
    }

    #[test]
    fn frequencies() {
        let db = db1();
        assert_eq!(db.frequency(&attrs(&[1, 2])), 3);
        assert_eq!(db.frequency(&attrs(&[])), 3);
        assert_eq!(db.frequency(&attrs(&[0, 3])), 0);
        assert_eq!(db.object_frequency(&objs(&[0, 1])), 3);
        assert_eq!(db.object_frequency(&objs(&[])), 4);
        assert_eq!(db.object_frequency(&objs(&[0, 1, 2])), 2);

        let values = AttributeValues::new(vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(db.weighted_frequency(&values, &objs(&[0, 1])), 6.0);
        assert_eq!(db.weighted_frequency(&values, &objs(&[])), 10.0);
        let zeros = AttributeValues::new(vec![0.0; 4]);
        assert_eq!(db.weighted_frequency(&zeros, &objs(&[2])), 0.0);
    }

    #[test]
    fn transpose_is_involution() {
        let db = db1();
        let t = db.transpose();
        assert_eq!(t.n_attributes(), 3);
        assert_eq!(t.n_objects(), 4);
        assert_eq!(t.object_row(ObjectId(3)).to_vec(), vec![2]);
        assert_eq!(t.transpose(), db);

        let one = BooleanDatabase::from_object_rows(1, &[&[0]]);
        assert_eq!(one.transpose().object_row(ObjectId(0)).to_vec(), vec![0]);
    }

    #[test]
    fn duplicate_names_rejected() {
        let err = BooleanDatabase::from_rows(vec!["x".into(), "x".into()], vec![], vec![]);
        assert!(err.is_err());
    }
}
