//! Brute-force reference: enumerate every subset of the smaller universe.
//! No projection, no pruning.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::bitset::{BitSet, Space};
use crate::constraints::{ConceptConstraint, ConstraintError};
use crate::dataset::{AttributeId, AttributeValues, BooleanDatabase, ObjectId};
use crate::miner::Concept;

/// Largest universe the oracle enumerates by default.
pub const DEFAULT_MAX_BITS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("smaller universe has {size} elements; the oracle enumerates at most 2^{limit} subsets")]
    TooLarge { size: usize, limit: usize },
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Attributes,
    Objects,
}

#[derive(Debug, Clone)]
pub struct OracleReport {
    pub concepts: Vec<Concept>,
    pub elapsed: Duration,
    pub universe_sizes: (usize, usize),
}

pub fn brute_concepts(db: &BooleanDatabase) -> Result<Vec<Concept>, OracleError> {
    brute_concepts_bounded(db, DEFAULT_MAX_BITS)
}

pub fn brute_concepts_bounded(db: &BooleanDatabase, max_bits: usize) -> Result<Vec<Concept>, OracleError> {
    let side = if db.n_objects() <= db.n_attributes() { Side::Objects } else { Side::Attributes };
    brute_concepts_via(db, side, max_bits)
}

/// Enumerate the subsets of one chosen side.
pub fn brute_concepts_via(db: &BooleanDatabase, side: Side, max_bits: usize) -> Result<Vec<Concept>, OracleError> {
    let size = match side {
        Side::Objects => db.n_objects(),
        Side::Attributes => db.n_attributes(),
    };
    if size > max_bits || size >= usize::BITS as usize {
        return Err(OracleError::TooLarge { size, limit: max_bits.min(usize::BITS as usize - 1) });
    }
    let mut concepts: Vec<Concept> = match side {
        Side::Objects => {
            let rows: Vec<_> = (0..size).map(|o| db.object_row(ObjectId(o)).clone()).collect();
            fixed_points(&rows, db.all_attributes())
                .into_iter()
                .map(|(extent, intent)| Concept { intent, extent })
                .collect()
        }
        Side::Attributes => {
            let rows: Vec<_> = (0..size).map(|a| db.attribute_row(AttributeId(a)).clone()).collect();
            fixed_points(&rows, db.all_objects())
                .into_iter()
                .map(|(intent, extent)| Concept { intent, extent })
                .collect()
        }
    };
    concepts.sort();
    concepts.dedup();
    Ok(concepts)
}

/// Every subset `X` of the row indices whose image, the intersection of its
/// rows, is contained in no row outside `X`. Paired with that image.
fn fixed_points<S: Space, T: Space>(rows: &[BitSet<T>], top: BitSet<T>) -> Vec<(BitSet<S>, BitSet<T>)> {
    let n = rows.len();
    let mut images = vec![top; n + 1];
    let mut chosen = BitSet::<S>::empty(n);
    let mut out = Vec::new();
    walk(rows, 0, 0, &mut images, &mut chosen, &mut out);
    out
}

/// Visit `chosen` (with `images[depth]` its image), then each extension by
/// one index at or above `next`.
fn walk<S: Space, T: Space>(
    rows: &[BitSet<T>],
    next: usize,
    depth: usize,
    images: &mut [BitSet<T>],
    chosen: &mut BitSet<S>,
    out: &mut Vec<(BitSet<S>, BitSet<T>)>,
) {
    let image = &images[depth];
    if (0..rows.len()).all(|e| chosen.contains(e) || !image.is_subset(&rows[e])) {
        out.push((chosen.clone(), image.clone()));
    }
    for i in next..rows.len() {
        let (done, rest) = images.split_at_mut(depth + 1);
        rest[0].clone_from(&done[depth]);
        rest[0].intersect_with(&rows[i]);
        chosen.insert(i);
        walk(rows, i + 1, depth + 1, images, chosen, out);
        chosen.remove(i);
    }
}

/// Concepts satisfying `constraint`, filtered with the direct semantics.
pub fn brute_mine(
    db: &BooleanDatabase,
    constraint: &ConceptConstraint,
    values: Option<&AttributeValues>,
) -> Result<Vec<Concept>, OracleError> {
    brute_mine_bounded(db, constraint, values, DEFAULT_MAX_BITS)
}

pub fn brute_mine_bounded(
    db: &BooleanDatabase,
    constraint: &ConceptConstraint,
    values: Option<&AttributeValues>,
    max_bits: usize,
) -> Result<Vec<Concept>, OracleError> {
    constraint.check_values(db, values)?;
    let mut out = Vec::new();
    for c in brute_concepts_bounded(db, max_bits)? {
        if constraint.evaluate(&c.intent, &c.extent, db, values)? {
            out.push(c);
        }
    }
    Ok(out)
}

pub fn brute_report(
    db: &BooleanDatabase,
    constraint: &ConceptConstraint,
    values: Option<&AttributeValues>,
) -> Result<OracleReport, OracleError> {
    let start = Instant::now();
    let concepts = brute_mine(db, constraint, values)?;
    Ok(OracleReport { concepts, elapsed: start.elapsed(), universe_sizes: (db.n_attributes(), db.n_objects()) })
}
