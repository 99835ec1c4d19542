//! Mining formal concepts under constraints on both intent and extent.
//!
//! A constraint `C(A, O)` on concepts is projected into a constraint on
//! object sets alone, and the closed object sets satisfying it are
//! enumerated in the transposed matrix. Each surviving extent `O` yields the
//! concept `(f(O), O)`.

pub mod bitset;
pub mod constraints;
pub mod dataset;
pub mod miner;
pub mod oracle;
pub mod projection;
pub mod synth;

pub use bitset::{Attr, AttributeSet, BitSet, Obj, ObjectSet, Space};
pub use constraints::{Aggregate, Cmp, ConceptConstraint, ConstraintError, Monotonicity, SetOperand, SetRelation, Var};
pub use dataset::{
    load_dense, load_sparse, load_values, write_dense, AttributeId, AttributeValues, BooleanDatabase, LoadError,
    ObjectId,
};
pub use miner::{all_concepts, enumerate_closed, mine_concepts, ClosedSet, Concept, MinerConfig};
pub use oracle::{brute_concepts, brute_mine, OracleError, OracleReport};
pub use projection::{
    classify_projected, project_definitional, project_dual, DualProjection, ProjectedConstraint, ProjectionContext,
    SubsetRewrite,
};
