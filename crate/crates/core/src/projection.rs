//! Rewriting a concept constraint into a constraint on object sets only.
//!
//! A concept `(A, O)` is determined by its extent `O`, with `A = f(O)`, so
//! any constraint `C(A, O)` can be read as `C(f(O), O)`. That reading is
//! [`project_definitional`]. [`ProjectionContext::project`] goes further and
//! rewrites every leaf into a test that no longer mentions `f(O)`, with the
//! constant sets it needs resolved against the database once. The rewritten
//! form is only valid on closed object sets.

use std::collections::HashMap;

use crate::bitset::{AttributeSet, ObjectSet};
use crate::constraints::{
    Aggregate, Cmp, ConceptConstraint, ConstraintError, Monotonicity, SetOperand, SetRelation, Var,
};
use crate::dataset::{AttributeValues, BooleanDatabase};

#[derive(Debug, Clone, PartialEq)]
pub enum ProjectedConstraint {
    True,
    Not(Box<ProjectedConstraint>),
    And(Vec<ProjectedConstraint>),
    Or(Vec<ProjectedConstraint>),
    /// `|O| ◦ n`
    Size {
        cmp: Cmp,
        threshold: usize,
    },
    /// `|f(O)| ◦ n`, the frequency of `O` in the transposed matrix.
    Freq {
        cmp: Cmp,
        threshold: usize,
    },
    /// `K ⊆ O`
    Contains(ObjectSet),
    /// `O ⊆ K`
    ContainedIn(ObjectSet),
    /// `Freq_p(O) ◦ t`: sum of values of the attributes in `f(O)`.
    WeightedFreq {
        cmp: Cmp,
        threshold: f64,
    },
    /// `Freq_p(O) / |f(O)| ◦ t`; false when `f(O)` is empty.
    WeightedAvg {
        cmp: Cmp,
        threshold: f64,
    },
    /// `|f(O)|·|O| ◦ n`
    Area {
        cmp: Cmp,
        threshold: usize,
    },
    /// Evaluate the original constraint on `(f(O), O)`.
    Definitional(ConceptConstraint),
}

impl ProjectedConstraint {
    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: ProjectedConstraint) -> Self {
        ProjectedConstraint::Not(Box::new(inner))
    }

    pub fn falsum() -> Self {
        Self::not(ProjectedConstraint::True)
    }

    /// True when evaluation will need `f(O)`.
    pub fn needs_intent(&self) -> bool {
        match self {
            ProjectedConstraint::True
            | ProjectedConstraint::Size { .. }
            | ProjectedConstraint::Contains(_)
            | ProjectedConstraint::ContainedIn(_) => false,
            ProjectedConstraint::Not(c) => c.needs_intent(),
            ProjectedConstraint::And(cs) | ProjectedConstraint::Or(cs) => cs.iter().any(Self::needs_intent),
            _ => true,
        }
    }

    /// Same flattening as [`ConceptConstraint::simplify`].
    pub fn simplify(&self) -> ProjectedConstraint {
        match self {
            ProjectedConstraint::Not(inner) => match inner.simplify() {
                ProjectedConstraint::Not(x) => *x,
                x => Self::not(x),
            },
            ProjectedConstraint::And(cs) => {
                let mut out = Vec::with_capacity(cs.len());
                for c in cs {
                    match c.simplify() {
                        ProjectedConstraint::And(inner) => out.extend(inner),
                        ProjectedConstraint::True => {}
                        x => out.push(x),
                    }
                }
                match out.len() {
                    0 => ProjectedConstraint::True,
                    1 => out.pop().unwrap(),
                    _ => ProjectedConstraint::And(out),
                }
            }
            ProjectedConstraint::Or(cs) => {
                let mut out = Vec::with_capacity(cs.len());
                for c in cs {
                    match c.simplify() {
                        ProjectedConstraint::Or(inner) => out.extend(inner),
                        ProjectedConstraint::True => return ProjectedConstraint::True,
                        x => out.push(x),
                    }
                }
                match out.len() {
                    0 => Self::falsum(),
                    1 => out.pop().unwrap(),
                    _ => ProjectedConstraint::Or(out),
                }
            }
            leaf => leaf.clone(),
        }
    }
}

/// `C ↦ C(f(O), O)` without any rewriting.
pub fn project_definitional(constraint: &ConceptConstraint) -> ProjectedConstraint {
    ProjectedConstraint::Definitional(constraint.clone())
}

/// How `A ⊆ E` is rewritten.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetRewrite {
    /// `g(E) ⊆ O` when `E` is closed, the singleton decomposition otherwise.
    Auto,
    /// Always `⋀ O ⊄ g(f)` over `f ∉ E`, valid whether or not `E` is closed.
    Decompose,
}

/// Database, optional attribute values and a memo of `g(E)` for the
/// constant attribute sets met while projecting.
#[derive(Debug, Clone)]
pub struct ProjectionContext<'a> {
    db: &'a BooleanDatabase,
    values: Option<&'a AttributeValues>,
    extensions: HashMap<AttributeSet, ObjectSet>,
}

impl<'a> ProjectionContext<'a> {
    pub fn new(db: &'a BooleanDatabase, values: Option<&'a AttributeValues>) -> Self {
        Self { db, values, extensions: HashMap::new() }
    }

    pub fn db(&self) -> &'a BooleanDatabase {
        self.db
    }

    pub fn values(&self) -> Option<&'a AttributeValues> {
        self.values
    }

    /// Memoised `g(E)`.
    pub fn extension_of(&mut self, set: &AttributeSet) -> ObjectSet {
        if let Some(ext) = self.extensions.get(set) {
            return ext.clone();
        }
        let ext = self.db.extension(set);
        self.extensions.insert(set.clone(), ext.clone());
        ext
    }

    pub fn cached_extensions(&self) -> usize {
        self.extensions.len()
    }

    pub fn project(&mut self, constraint: &ConceptConstraint) -> Result<ProjectedConstraint, ConstraintError> {
        self.project_with(constraint, SubsetRewrite::Auto)
    }

    pub fn project_with(
        &mut self,
        constraint: &ConceptConstraint,
        rewrite: SubsetRewrite,
    ) -> Result<ProjectedConstraint, ConstraintError> {
        constraint.check_values(self.db, self.values)?;
        let core = constraint.desugar(self.values)?.simplify();
        Ok(self.project_core(&core, rewrite).simplify())
    }

    fn project_core(&mut self, c: &ConceptConstraint, rewrite: SubsetRewrite) -> ProjectedConstraint {
        use ProjectedConstraint as P;
        match c {
            ConceptConstraint::True => P::True,
            ConceptConstraint::Not(inner) => P::not(self.project_core(inner, rewrite)),
            ConceptConstraint::And(cs) => P::And(cs.iter().map(|c| self.project_core(c, rewrite)).collect()),
            ConceptConstraint::Or(cs) => P::Or(cs.iter().map(|c| self.project_core(c, rewrite)).collect()),
            // Freq(f(O)) = |cl(O)| = |O| on closed O.
            ConceptConstraint::Freq { var: Var::Intent, cmp, threshold } => {
                P::Size { cmp: *cmp, threshold: *threshold }
            }
            ConceptConstraint::Freq { var: Var::Extent, cmp, threshold } => {
                P::Freq { cmp: *cmp, threshold: *threshold }
            }
            ConceptConstraint::Size { var: Var::Intent, cmp, threshold } => {
                P::Freq { cmp: *cmp, threshold: *threshold }
            }
            ConceptConstraint::Size { var: Var::Extent, cmp, threshold } => {
                P::Size { cmp: *cmp, threshold: *threshold }
            }
            ConceptConstraint::Set { rel, operand: SetOperand::Extent(k) } => match rel {
                SetRelation::SubsetOf => P::ContainedIn(k.clone()),
                SetRelation::SupersetOf => P::Contains(k.clone()),
                // removed by desugar; kept total for direct callers
                SetRelation::Disjoint => P::ContainedIn(k.complement()),
                SetRelation::Intersects => P::not(P::ContainedIn(k.complement())),
            },
            ConceptConstraint::Set { rel, operand: SetOperand::Intent(e) } => match rel {
                // E ⊆ f(O)  ⇔  O ⊆ g(E)
                SetRelation::SupersetOf => P::ContainedIn(self.extension_of(e)),
                SetRelation::SubsetOf => self.project_subset(e, rewrite),
                SetRelation::Disjoint => self.project_subset(&e.complement(), rewrite),
                SetRelation::Intersects => P::not(self.project_subset(&e.complement(), rewrite)),
            },
            ConceptConstraint::Agg { agg: Aggregate::Sum, cmp, threshold } => {
                P::WeightedFreq { cmp: *cmp, threshold: *threshold }
            }
            ConceptConstraint::Agg { agg: Aggregate::Avg, cmp, threshold } => {
                P::WeightedAvg { cmp: *cmp, threshold: *threshold }
            }
            // min/max survive only if desugaring was bypassed
            agg @ ConceptConstraint::Agg { .. } => P::Definitional(agg.clone()),
            ConceptConstraint::Area { cmp, threshold } => P::Area { cmp: *cmp, threshold: *threshold },
        }
    }

    /// `f(O) ⊆ E`.
    fn project_subset(&mut self, e: &AttributeSet, rewrite: SubsetRewrite) -> ProjectedConstraint {
        if rewrite == SubsetRewrite::Auto && self.db.is_closed_attributes(e) {
            return ProjectedConstraint::Contains(self.extension_of(e));
        }
        // f(O) ⊆ E  ⇔  no attribute outside E is shared by all of O
        let parts = e
            .complement()
            .iter()
            .map(|a| {
                let single = AttributeSet::from_indices(e.universe_len(), [a]);
                ProjectedConstraint::not(ProjectedConstraint::ContainedIn(self.extension_of(&single)))
            })
            .collect();
        ProjectedConstraint::And(parts)
    }

    /// Evaluate on a closed object set.
    pub fn evaluate(&self, p: &ProjectedConstraint, objects: &ObjectSet) -> Result<bool, ConstraintError> {
        let intent = p.needs_intent().then(|| self.db.intension(objects));
        self.evaluate_with_intent(p, objects, intent.as_ref())
    }

    /// Evaluate when `f(O)` is already known. `intent` may be `None` only if
    /// `p` does not need it.
    pub fn evaluate_with_intent(
        &self,
        p: &ProjectedConstraint,
        objects: &ObjectSet,
        intent: Option<&AttributeSet>,
    ) -> Result<bool, ConstraintError> {
        use ProjectedConstraint as P;
        let intent_of = || -> Result<&AttributeSet, ConstraintError> {
            intent.ok_or_else(|| ConstraintError::Usage("intent required but not supplied".into()))
        };
        let values = |agg| self.values.ok_or(ConstraintError::MissingValues(agg));
        Ok(match p {
            P::True => true,
            P::Not(c) => !self.evaluate_with_intent(c, objects, intent)?,
            P::And(cs) => {
                for c in cs {
                    if !self.evaluate_with_intent(c, objects, intent)? {
                        return Ok(false);
                    }
                }
                true
            }
            P::Or(cs) => {
                for c in cs {
                    if self.evaluate_with_intent(c, objects, intent)? {
                        return Ok(true);
                    }
                }
                false
            }
            P::Size { cmp, threshold } => cmp.holds(objects.count(), *threshold),
            P::Freq { cmp, threshold } => cmp.holds(intent_of()?.count(), *threshold),
            P::Contains(k) => k.is_subset(objects),
            P::ContainedIn(k) => objects.is_subset(k),
            P::WeightedFreq { cmp, threshold } => cmp.holds(values(Aggregate::Sum)?.sum_over(intent_of()?), *threshold),
            P::WeightedAvg { cmp, threshold } => {
                let intent = intent_of()?;
                let n = intent.count();
                n > 0 && cmp.holds(values(Aggregate::Avg)?.sum_over(intent) / n as f64, *threshold)
            }
            P::Area { cmp, threshold } => cmp.holds(intent_of()?.count() * objects.count(), *threshold),
            P::Definitional(c) => c.evaluate(intent_of()?, objects, self.db, self.values)?,
        })
    }

    /// Monotonicity in the object set.
    pub fn classify(&self, p: &ProjectedConstraint) -> Monotonicity {
        classify_projected(p, self.values)
    }
}

/// Monotonicity of a projected constraint in `O`.
pub fn classify_projected(p: &ProjectedConstraint, values: Option<&AttributeValues>) -> Monotonicity {
    use Monotonicity::*;
    use ProjectedConstraint as P;
    match p {
        P::True => Both,
        P::Not(c) => classify_projected(c, values).negate(),
        P::And(cs) | P::Or(cs) => cs.iter().fold(Both, |acc, c| acc.join(classify_projected(c, values))),
        P::Size { cmp, .. } => Monotonicity::of_increasing(*cmp),
        // f is antitone, so |f(O)| and Freq_p(O) (nonnegative weights) shrink as O grows
        P::Freq { cmp, .. } => Monotonicity::of_decreasing(*cmp),
        P::Contains(_) => Monotone,
        P::ContainedIn(_) => AntiMonotone,
        P::WeightedFreq { cmp, .. } => match values {
            Some(v) if v.all_nonnegative() => Monotonicity::of_decreasing(*cmp),
            _ => Unknown,
        },
        P::WeightedAvg { .. } | P::Area { .. } | P::Definitional(_) => Unknown,
    }
}

/// Attribute-space image of a constraint on extents: the same rewriting with
/// the roles of `f` and `g` exchanged, carried out on the transposed matrix.
#[derive(Debug, Clone)]
pub struct DualProjection {
    transposed: BooleanDatabase,
    constraint: ProjectedConstraint,
}

impl DualProjection {
    /// The rewritten constraint. Its object sets index attributes of the
    /// original database.
    pub fn constraint(&self) -> &ProjectedConstraint {
        &self.constraint
    }

    pub fn transposed(&self) -> &BooleanDatabase {
        &self.transposed
    }

    /// Evaluate on a closed attribute set of the original database.
    pub fn evaluate(&self, attributes: &AttributeSet) -> Result<bool, ConstraintError> {
        ProjectionContext::new(&self.transposed, None).evaluate(&self.constraint, &attributes.cast())
    }
}

/// Project a constraint whose leaves only read the extent into a constraint
/// on intents.
pub fn project_dual(db: &BooleanDatabase, constraint: &ConceptConstraint) -> Result<DualProjection, ConstraintError> {
    if constraint.mentions(Var::Intent) {
        return Err(ConstraintError::Usage("dual projection needs a constraint on the extent only".into()));
    }
    let transposed = db.transpose();
    let mirrored = mirror(constraint);
    let constraint = ProjectionContext::new(&transposed, None).project(&mirrored)?;
    Ok(DualProjection { transposed, constraint })
}

/// Swap intent and extent in every leaf. Only called on extent-only input.
fn mirror(c: &ConceptConstraint) -> ConceptConstraint {
    match c {
        ConceptConstraint::Not(inner) => ConceptConstraint::not(mirror(inner)),
        ConceptConstraint::And(cs) => ConceptConstraint::And(cs.iter().map(mirror).collect()),
        ConceptConstraint::Or(cs) => ConceptConstraint::Or(cs.iter().map(mirror).collect()),
        ConceptConstraint::Freq { var, cmp, threshold } => {
            ConceptConstraint::Freq { var: var.other(), cmp: *cmp, threshold: *threshold }
        }
        ConceptConstraint::Size { var, cmp, threshold } => {
            ConceptConstraint::Size { var: var.other(), cmp: *cmp, threshold: *threshold }
        }
        ConceptConstraint::Set { rel, operand } => ConceptConstraint::Set {
            rel: *rel,
            operand: match operand {
                SetOperand::Intent(k) => SetOperand::Extent(k.cast()),
                SetOperand::Extent(k) => SetOperand::Intent(k.cast()),
            },
        },
        leaf => leaf.clone(),
    }
}
