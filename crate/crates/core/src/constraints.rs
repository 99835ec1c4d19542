//! Constraints over concepts `(A, O)`: the AST, its direct semantics,
//! rewriting of syntactic sugar into core leaves, and monotonicity
//! classification.

use std::fmt;

use thiserror::Error;

use crate::bitset::{AttributeSet, ObjectSet};
use crate::dataset::{AttributeValues, BooleanDatabase};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstraintError {
    #[error("constraint uses {0} but no attribute values were supplied")]
    MissingValues(Aggregate),
    #[error("values table has {found} entries for {expected} attributes")]
    ValuesShape { expected: usize, found: usize },
    #[error("{0}")]
    Usage(String),
}

/// Which component of a concept a leaf talks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    Intent,
    Extent,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::Intent => Var::Extent,
            Var::Extent => Var::Intent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cmp {
    Lt,
    Gt,
    Le,
    Ge,
}

impl Cmp {
    pub const ALL: [Cmp; 4] = [Cmp::Lt, Cmp::Gt, Cmp::Le, Cmp::Ge];

    pub fn holds<T: PartialOrd>(self, lhs: T, rhs: T) -> bool {
        match self {
            Cmp::Lt => lhs < rhs,
            Cmp::Gt => lhs > rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Ge => lhs >= rhs,
        }
    }

    /// `>` and `>=`: satisfied by large values.
    pub fn is_lower_bound(self) -> bool {
        matches!(self, Cmp::Gt | Cmp::Ge)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Gt => ">",
            Cmp::Le => "<=",
            Cmp::Ge => ">=",
        }
    }
}

impl fmt::Display for Cmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Aggregate {
    Min,
    Max,
    Sum,
    Avg,
}

impl Aggregate {
    pub const ALL: [Aggregate; 4] = [Aggregate::Min, Aggregate::Max, Aggregate::Sum, Aggregate::Avg];

    pub fn keyword(self) -> &'static str {
        match self {
            Aggregate::Min => "min",
            Aggregate::Max => "max",
            Aggregate::Sum => "sum",
            Aggregate::Avg => "avg",
        }
    }
}

impl fmt::Display for Aggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetRelation {
    /// `X ⊆ K`
    SubsetOf,
    /// `X ⊇ K`
    SupersetOf,
    /// `X ∩ K = ∅`
    Disjoint,
    /// `X ∩ K ≠ ∅`
    Intersects,
}

impl SetRelation {
    pub const ALL: [SetRelation; 4] =
        [SetRelation::SubsetOf, SetRelation::SupersetOf, SetRelation::Disjoint, SetRelation::Intersects];

    pub fn keyword(self) -> &'static str {
        match self {
            SetRelation::SubsetOf => "subset",
            SetRelation::SupersetOf => "superset",
            SetRelation::Disjoint => "disjoint",
            SetRelation::Intersects => "intersects",
        }
    }

    fn holds<S: crate::bitset::Space>(self, x: &crate::bitset::BitSet<S>, k: &crate::bitset::BitSet<S>) -> bool {
        match self {
            SetRelation::SubsetOf => x.is_subset(k),
            SetRelation::SupersetOf => k.is_subset(x),
            SetRelation::Disjoint => x.is_disjoint(k),
            SetRelation::Intersects => !x.is_disjoint(k),
        }
    }
}

/// A constant set together with the component it is compared against.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetOperand {
    Intent(AttributeSet),
    Extent(ObjectSet),
}

impl SetOperand {
    pub fn var(&self) -> Var {
        match self {
            SetOperand::Intent(_) => Var::Intent,
            SetOperand::Extent(_) => Var::Extent,
        }
    }

    fn complement(&self) -> SetOperand {
        match self {
            SetOperand::Intent(k) => SetOperand::Intent(k.complement()),
            SetOperand::Extent(k) => SetOperand::Extent(k.complement()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConceptConstraint {
    True,
    Not(Box<ConceptConstraint>),
    And(Vec<ConceptConstraint>),
    Or(Vec<ConceptConstraint>),
    /// `Freq(A) ◦ n` for the intent; `|f(O)| ◦ n` for the extent.
    Freq {
        var: Var,
        cmp: Cmp,
        threshold: usize,
    },
    /// `|A| ◦ n` or `|O| ◦ n`.
    Size {
        var: Var,
        cmp: Cmp,
        threshold: usize,
    },
    Set {
        rel: SetRelation,
        operand: SetOperand,
    },
    /// Aggregate over the values of the intent's attributes.
    Agg {
        agg: Aggregate,
        cmp: Cmp,
        threshold: f64,
    },
    /// `|A|·|O| ◦ n`.
    Area {
        cmp: Cmp,
        threshold: usize,
    },
}

/// Classes are ordered by strength: `Both` implies either, `Unknown`
/// claims nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Monotonicity {
    AntiMonotone,
    Monotone,
    Both,
    Unknown,
}

impl Monotonicity {
    pub fn negate(self) -> Self {
        match self {
            Monotonicity::AntiMonotone => Monotonicity::Monotone,
            Monotonicity::Monotone => Monotonicity::AntiMonotone,
            other => other,
        }
    }

    /// Class of a conjunction or disjunction of two operands.
    pub fn join(self, other: Self) -> Self {
        use Monotonicity::*;
        match (self, other) {
            (Both, x) | (x, Both) => x,
            (x, y) if x == y => x,
            _ => Unknown,
        }
    }

    pub fn is_anti_monotone(self) -> bool {
        matches!(self, Monotonicity::AntiMonotone | Monotonicity::Both)
    }

    pub fn is_monotone(self) -> bool {
        matches!(self, Monotonicity::Monotone | Monotonicity::Both)
    }

    /// Class of a leaf that grows with its argument set being compared by `cmp`.
    pub(crate) fn of_increasing(cmp: Cmp) -> Self {
        if cmp.is_lower_bound() {
            Monotonicity::Monotone
        } else {
            Monotonicity::AntiMonotone
        }
    }

    pub(crate) fn of_decreasing(cmp: Cmp) -> Self {
        Self::of_increasing(cmp).negate()
    }
}

impl ConceptConstraint {
    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: ConceptConstraint) -> Self {
        ConceptConstraint::Not(Box::new(inner))
    }

    pub fn falsum() -> Self {
        Self::not(ConceptConstraint::True)
    }

    pub fn intent(rel: SetRelation, set: AttributeSet) -> Self {
        ConceptConstraint::Set { rel, operand: SetOperand::Intent(set) }
    }

    pub fn extent(rel: SetRelation, set: ObjectSet) -> Self {
        ConceptConstraint::Set { rel, operand: SetOperand::Extent(set) }
    }

    /// True when some leaf is an aggregate.
    pub fn uses_values(&self) -> bool {
        self.any_leaf(&mut |c| matches!(c, ConceptConstraint::Agg { .. }))
    }

    /// True when some leaf reads `var` (area reads both).
    pub fn mentions(&self, var: Var) -> bool {
        self.any_leaf(&mut |c| match c {
            ConceptConstraint::Freq { var: v, .. } | ConceptConstraint::Size { var: v, .. } => *v == var,
            ConceptConstraint::Set { operand, .. } => operand.var() == var,
            ConceptConstraint::Agg { .. } => var == Var::Intent,
            ConceptConstraint::Area { .. } => true,
            _ => false,
        })
    }

    fn any_leaf(&self, pred: &mut impl FnMut(&ConceptConstraint) -> bool) -> bool {
        match self {
            ConceptConstraint::Not(c) => c.any_leaf(pred),
            ConceptConstraint::And(cs) | ConceptConstraint::Or(cs) => cs.iter().any(|c| c.any_leaf(pred)),
            leaf => pred(leaf),
        }
    }

    /// Check that a values table is present and sized for `db` when needed.
    pub fn check_values(&self, db: &BooleanDatabase, values: Option<&AttributeValues>) -> Result<(), ConstraintError> {
        let mut missing = None;
        self.any_leaf(&mut |c| match c {
            ConceptConstraint::Agg { agg, .. } if values.is_none() => {
                missing = Some(*agg);
                true
            }
            _ => false,
        });
        if let Some(agg) = missing {
            return Err(ConstraintError::MissingValues(agg));
        }
        match values {
            Some(v) if self.uses_values() && v.len() != db.n_attributes() => {
                Err(ConstraintError::ValuesShape { expected: db.n_attributes(), found: v.len() })
            }
            _ => Ok(()),
        }
    }

    /// Direct semantics on the pair `(intent, extent)`.
    pub fn evaluate(
        &self,
        intent: &AttributeSet,
        extent: &ObjectSet,
        db: &BooleanDatabase,
        values: Option<&AttributeValues>,
    ) -> Result<bool, ConstraintError> {
        Ok(match self {
            ConceptConstraint::True => true,
            ConceptConstraint::Not(c) => !c.evaluate(intent, extent, db, values)?,
            ConceptConstraint::And(cs) => {
                for c in cs {
                    if !c.evaluate(intent, extent, db, values)? {
                        return Ok(false);
                    }
                }
                true
            }
            ConceptConstraint::Or(cs) => {
                for c in cs {
                    if c.evaluate(intent, extent, db, values)? {
                        return Ok(true);
                    }
                }
                false
            }
            ConceptConstraint::Freq { var, cmp, threshold } => {
                let freq = match var {
                    Var::Intent => db.frequency(intent),
                    Var::Extent => db.object_frequency(extent),
                };
                cmp.holds(freq, *threshold)
            }
            ConceptConstraint::Size { var, cmp, threshold } => {
                let size = match var {
                    Var::Intent => intent.count(),
                    Var::Extent => extent.count(),
                };
                cmp.holds(size, *threshold)
            }
            ConceptConstraint::Set { rel, operand } => match operand {
                SetOperand::Intent(k) => rel.holds(intent, k),
                SetOperand::Extent(k) => rel.holds(extent, k),
            },
            ConceptConstraint::Agg { agg, cmp, threshold } => {
                let values = values.ok_or(ConstraintError::MissingValues(*agg))?;
                match agg {
                    // min(∅) = +∞ and max(∅) = -∞ fall out of the folds.
                    Aggregate::Min => cmp.holds(values.min_over(intent), *threshold),
                    Aggregate::Max => cmp.holds(values.max_over(intent), *threshold),
                    Aggregate::Sum => cmp.holds(values.sum_over(intent), *threshold),
                    Aggregate::Avg => {
                        let n = intent.count();
                        n > 0 && cmp.holds(values.sum_over(intent) / n as f64, *threshold)
                    }
                }
            }
            ConceptConstraint::Area { cmp, threshold } => cmp.holds(intent.count() * extent.count(), *threshold),
        })
    }

    /// Rewrite into core leaves only: `Disjoint`/`Intersects` become subset
    /// tests against the complement, and `min`/`max` become subset tests
    /// against a threshold set of attributes. `sum`/`avg` stay as they are.
    pub fn desugar(&self, values: Option<&AttributeValues>) -> Result<ConceptConstraint, ConstraintError> {
        Ok(match self {
            ConceptConstraint::Not(c) => Self::not(c.desugar(values)?),
            ConceptConstraint::And(cs) => {
                ConceptConstraint::And(cs.iter().map(|c| c.desugar(values)).collect::<Result<_, _>>()?)
            }
            ConceptConstraint::Or(cs) => {
                ConceptConstraint::Or(cs.iter().map(|c| c.desugar(values)).collect::<Result<_, _>>()?)
            }
            ConceptConstraint::Set { rel: SetRelation::Disjoint, operand } => {
                ConceptConstraint::Set { rel: SetRelation::SubsetOf, operand: operand.complement() }
            }
            ConceptConstraint::Set { rel: SetRelation::Intersects, operand } => {
                Self::not(ConceptConstraint::Set { rel: SetRelation::SubsetOf, operand: operand.complement() })
            }
            ConceptConstraint::Agg { agg: agg @ (Aggregate::Min | Aggregate::Max), cmp, threshold } => {
                let values = values.ok_or(ConstraintError::MissingValues(*agg))?;
                let t = *threshold;
                let subset = |keep: &dyn Fn(f64) -> bool| Self::intent(SetRelation::SubsetOf, values.select(keep));
                match (agg, cmp) {
                    // min(A) > t  ⇔  A ⊆ {v > t}
                    (Aggregate::Min, Cmp::Gt) => subset(&|v| v > t),
                    (Aggregate::Min, Cmp::Le) => Self::not(subset(&|v| v > t)),
                    (Aggregate::Min, Cmp::Ge) => subset(&|v| v >= t),
                    (Aggregate::Min, Cmp::Lt) => Self::not(subset(&|v| v >= t)),
                    // max(A) <= t  ⇔  A ⊆ {v <= t}, the complement of {v > t}
                    (_, Cmp::Le) => subset(&|v| v <= t),
                    (_, Cmp::Gt) => Self::not(subset(&|v| v <= t)),
                    (_, Cmp::Lt) => subset(&|v| v < t),
                    (_, Cmp::Ge) => Self::not(subset(&|v| v < t)),
                }
            }
            leaf => leaf.clone(),
        })
    }

    /// Flatten nested connectives of the same kind, cancel double negation
    /// and collapse single-operand connectives.
    pub fn simplify(&self) -> ConceptConstraint {
        match self {
            ConceptConstraint::Not(inner) => match inner.simplify() {
                ConceptConstraint::Not(x) => *x,
                x => Self::not(x),
            },
            ConceptConstraint::And(cs) => {
                let mut out = Vec::with_capacity(cs.len());
                for c in cs {
                    match c.simplify() {
                        ConceptConstraint::And(inner) => out.extend(inner),
                        ConceptConstraint::True => {}
                        x => out.push(x),
                    }
                }
                match out.len() {
                    0 => ConceptConstraint::True,
                    1 => out.pop().unwrap(),
                    _ => ConceptConstraint::And(out),
                }
            }
            ConceptConstraint::Or(cs) => {
                let mut out = Vec::with_capacity(cs.len());
                for c in cs {
                    match c.simplify() {
                        ConceptConstraint::Or(inner) => out.extend(inner),
                        ConceptConstraint::True => return ConceptConstraint::True,
                        x => out.push(x),
                    }
                }
                match out.len() {
                    0 => Self::falsum(),
                    1 => out.pop().unwrap(),
                    _ => ConceptConstraint::Or(out),
                }
            }
            leaf => leaf.clone(),
        }
    }

    /// Monotonicity in `var`, with the other component held fixed. Sound but
    /// not complete: `Unknown` may be returned where a class does hold.
    pub fn classify(&self, var: Var, values: Option<&AttributeValues>) -> Monotonicity {
        use Monotonicity::*;
        match self {
            ConceptConstraint::True => Both,
            ConceptConstraint::Not(c) => c.classify(var, values).negate(),
            ConceptConstraint::And(cs) | ConceptConstraint::Or(cs) => {
                cs.iter().fold(Both, |acc, c| acc.join(c.classify(var, values)))
            }
            ConceptConstraint::Freq { var: v, cmp, .. } => {
                if *v == var {
                    // Freq(A) = |g(A)| and |f(O)| both shrink as their argument grows.
                    Monotonicity::of_decreasing(*cmp)
                } else {
                    Both
                }
            }
            ConceptConstraint::Size { var: v, cmp, .. } => {
                if *v == var {
                    Monotonicity::of_increasing(*cmp)
                } else {
                    Both
                }
            }
            ConceptConstraint::Set { rel, operand } => {
                if operand.var() != var {
                    return Both;
                }
                match rel {
                    SetRelation::SubsetOf | SetRelation::Disjoint => AntiMonotone,
                    SetRelation::SupersetOf | SetRelation::Intersects => Monotone,
                }
            }
            ConceptConstraint::Agg { agg, cmp, .. } => {
                if var == Var::Extent {
                    return Both;
                }
                match agg {
                    Aggregate::Sum => match values {
                        Some(v) if v.all_nonnegative() => Monotonicity::of_increasing(*cmp),
                        _ => Unknown,
                    },
                    // min decreases as A grows, max increases
                    Aggregate::Min => Monotonicity::of_decreasing(*cmp),
                    Aggregate::Max => Monotonicity::of_increasing(*cmp),
                    Aggregate::Avg => Unknown,
                }
            }
            ConceptConstraint::Area { .. } => Unknown,
        }
    }
}
