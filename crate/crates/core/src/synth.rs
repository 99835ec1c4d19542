//! Seeded generators for synthetic databases and constraints, shared by the
//! test suites and the benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bitset::{AttributeSet, BitSet, Obj, ObjectSet, Space};
use crate::constraints::{Aggregate, Cmp, ConceptConstraint, SetRelation, Var};
use crate::dataset::{AttributeValues, BooleanDatabase};

/// Each cell is 1 with probability `density`.
pub fn random_database<R: Rng>(rng: &mut R, n_attributes: usize, n_objects: usize, density: f64) -> BooleanDatabase {
    let rows = (0..n_objects)
        .map(|_| AttributeSet::from_indices(n_attributes, (0..n_attributes).filter(|_| rng.gen_bool(density))))
        .collect();
    from_rows(n_attributes, n_objects, rows)
}

#[derive(Debug, Clone, Copy)]
pub struct PlantedBlocks {
    pub n_attributes: usize,
    pub n_objects: usize,
    pub blocks: usize,
    /// Inclusive range of objects per block.
    pub block_objects: (usize, usize),
    /// Inclusive range of attributes per block.
    pub block_attributes: (usize, usize),
    pub noise: f64,
}

impl PlantedBlocks {
    /// A wide matrix, 2000 attributes by 25 objects, with about a thousand
    /// concepts.
    pub fn wide() -> Self {
        Self {
            n_attributes: 2000,
            n_objects: 25,
            blocks: 10,
            block_objects: (3, 6),
            block_attributes: (40, 200),
            noise: 0.002,
        }
    }
}

/// Sparse noise with all-ones blocks planted on random object and
/// attribute subsets.
pub fn planted_blocks<R: Rng>(rng: &mut R, params: &PlantedBlocks) -> BooleanDatabase {
    let mut rows: Vec<AttributeSet> = (0..params.n_objects)
        .map(|_| {
            AttributeSet::from_indices(
                params.n_attributes,
                (0..params.n_attributes).filter(|_| rng.gen_bool(params.noise)),
            )
        })
        .collect();
    let objects: Vec<usize> = (0..params.n_objects).collect();
    let attributes: Vec<usize> = (0..params.n_attributes).collect();
    for _ in 0..params.blocks {
        let k = rng.gen_range(params.block_objects.0..=params.block_objects.1).min(params.n_objects);
        let m = rng.gen_range(params.block_attributes.0..=params.block_attributes.1).min(params.n_attributes);
        let block_attrs: Vec<usize> = attributes.choose_multiple(rng, m).copied().collect();
        for &o in objects.choose_multiple(rng, k) {
            for &a in &block_attrs {
                rows[o].insert(a);
            }
        }
    }
    from_rows(params.n_attributes, params.n_objects, rows)
}

fn from_rows(n_attributes: usize, n_objects: usize, rows: Vec<AttributeSet>) -> BooleanDatabase {
    BooleanDatabase::from_rows(
        (1..=n_attributes).map(|i| format!("a{i}")).collect(),
        (1..=n_objects).map(|i| format!("o{i}")).collect(),
        rows,
    )
    .expect("generated names are unique")
}

/// Integer-valued weights in `[lo, hi]`, so sums compare exactly.
pub fn random_values<R: Rng>(rng: &mut R, n_attributes: usize, lo: i32, hi: i32) -> AttributeValues {
    AttributeValues::new((0..n_attributes).map(|_| f64::from(rng.gen_range(lo..=hi))).collect())
}

#[derive(Debug, Clone, Copy)]
pub struct ConstraintShape {
    pub max_depth: usize,
    /// Emit aggregate leaves (needs a values table when evaluated).
    pub aggregates: bool,
    /// Emit leaves on the extent, and area leaves.
    pub extent_leaves: bool,
}

impl Default for ConstraintShape {
    fn default() -> Self {
        Self { max_depth: 3, aggregates: true, extent_leaves: true }
    }
}

/// A random constraint over the universes of `db`, covering every leaf kind
/// the shape allows.
pub fn random_constraint<R: Rng>(rng: &mut R, db: &BooleanDatabase, shape: &ConstraintShape) -> ConceptConstraint {
    random_node(rng, db, shape, shape.max_depth)
}

fn random_node<R: Rng>(rng: &mut R, db: &BooleanDatabase, shape: &ConstraintShape, depth: usize) -> ConceptConstraint {
    if depth > 0 && rng.gen_bool(0.55) {
        return match rng.gen_range(0..3) {
            0 => ConceptConstraint::not(random_node(rng, db, shape, depth - 1)),
            k => {
                let n = rng.gen_range(2..=3);
                let cs = (0..n).map(|_| random_node(rng, db, shape, depth - 1)).collect();
                if k == 1 {
                    ConceptConstraint::And(cs)
                } else {
                    ConceptConstraint::Or(cs)
                }
            }
        };
    }
    random_leaf(rng, db, shape)
}

fn random_var<R: Rng>(rng: &mut R, shape: &ConstraintShape) -> Var {
    if shape.extent_leaves && rng.gen_bool(0.35) {
        Var::Extent
    } else {
        Var::Intent
    }
}

fn random_cmp<R: Rng>(rng: &mut R) -> Cmp {
    *Cmp::ALL.choose(rng).unwrap()
}

fn random_leaf<R: Rng>(rng: &mut R, db: &BooleanDatabase, shape: &ConstraintShape) -> ConceptConstraint {
    let (na, no) = (db.n_attributes(), db.n_objects());
    let kinds = if shape.aggregates { 6 } else { 5 };
    match rng.gen_range(0..kinds) {
        0 => {
            let var = random_var(rng, shape);
            let bound = if var == Var::Intent { no } else { na };
            ConceptConstraint::Freq { var, cmp: random_cmp(rng), threshold: rng.gen_range(0..=bound + 1) }
        }
        1 => {
            let var = random_var(rng, shape);
            let bound = if var == Var::Intent { na } else { no };
            ConceptConstraint::Size { var, cmp: random_cmp(rng), threshold: rng.gen_range(0..=bound + 1) }
        }
        2 | 3 => {
            let rel = *SetRelation::ALL.choose(rng).unwrap();
            match random_var(rng, shape) {
                Var::Intent => ConceptConstraint::intent(rel, random_subset(rng, na)),
                Var::Extent => ConceptConstraint::extent(rel, random_subset::<_, Obj>(rng, no)),
            }
        }
        4 if shape.extent_leaves && rng.gen_bool(0.3) => {
            ConceptConstraint::Area { cmp: random_cmp(rng), threshold: rng.gen_range(0..=na * no / 2 + 1) }
        }
        4 => ConceptConstraint::True,
        _ => ConceptConstraint::Agg {
            agg: *Aggregate::ALL.choose(rng).unwrap(),
            cmp: random_cmp(rng),
            threshold: f64::from(rng.gen_range(-3..=12)) / 2.0,
        },
    }
}

fn random_subset<R: Rng, S: Space>(rng: &mut R, n: usize) -> BitSet<S> {
    let p = rng.gen_range(0.15..0.6);
    BitSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(p)))
}

/// Every subset of a universe of `n < 64` elements.
pub fn all_object_subsets(n: usize) -> impl Iterator<Item = ObjectSet> {
    (0u64..1 << n).map(move |mask| ObjectSet::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1)))
}

pub fn all_attribute_subsets(n: usize) -> impl Iterator<Item = AttributeSet> {
    all_object_subsets(n).map(|s| s.cast())
}
