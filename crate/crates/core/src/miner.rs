//! Closed object set enumeration in the transposed matrix, and concept
//! mining on top of it.
//!
//! The search is a depth-first close-by-one walk: a node is a closed object
//! set `O` with its intent `f(O)`, and a child adds one object `o` beyond the
//! node's core index, closes the result, and is kept only if the closure
//! brought in no object below `o` that was not already in `O`. Every closed
//! set is reached exactly once.
//!
//! Every descendant `P` of a node satisfies `O ⊆ P ⊆ O ∪ tail`, where the
//! tail holds all objects past the core index. Subformulas with a known
//! monotonicity class can therefore be decided for the whole subtree from
//! their value at the two ends of that interval. A subtree is skipped only
//! when the whole formula is decided false.

use std::cmp::Ordering;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::bitset::{AttributeSet, ObjectSet};
use crate::constraints::{ConceptConstraint, ConstraintError, Monotonicity};
use crate::dataset::{AttributeValues, BooleanDatabase, ObjectId};
use crate::projection::{classify_projected, ProjectedConstraint, ProjectionContext};

/// A formal concept: `f(extent) = intent` and `g(intent) = extent`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Concept {
    pub intent: AttributeSet,
    pub extent: ObjectSet,
}

impl Concept {
    pub fn from_extent(db: &BooleanDatabase, extent: ObjectSet) -> Self {
        Concept { intent: db.intension(&extent), extent }
    }

    pub fn is_valid(&self, db: &BooleanDatabase) -> bool {
        db.intension(&self.extent) == self.intent && db.extension(&self.intent) == self.extent
    }
}

/// Extent first, each in shortlex order.
impl Ord for Concept {
    fn cmp(&self, other: &Self) -> Ordering {
        self.extent.cmp(&other.extent).then_with(|| self.intent.cmp(&other.intent))
    }
}

impl PartialOrd for Concept {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinerConfig {
    /// Cut subtrees that cannot contain a satisfying set. Never changes results.
    pub prune_antimonotone: bool,
    /// Explore the subtrees below the root on the rayon pool.
    pub parallel_subtrees: bool,
}

impl Default for MinerConfig {
    fn default() -> Self {
        Self { prune_antimonotone: true, parallel_subtrees: false }
    }
}

/// A closed object set found by the search, with its intent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedSet {
    pub objects: ObjectSet,
    pub intent: AttributeSet,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub visited: usize,
    pub pruned: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tri {
    False,
    True,
    Unknown,
}

impl Tri {
    fn from_bool(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    fn not(self) -> Tri {
        match self {
            Tri::False => Tri::True,
            Tri::True => Tri::False,
            Tri::Unknown => Tri::Unknown,
        }
    }
}

/// A projected constraint annotated with the class of every subformula.
struct Plan<'p> {
    node: &'p ProjectedConstraint,
    class: Monotonicity,
    children: Vec<Plan<'p>>,
}

impl<'p> Plan<'p> {
    fn new(node: &'p ProjectedConstraint, values: Option<&AttributeValues>) -> Self {
        let children = match node {
            ProjectedConstraint::Not(c) => vec![Plan::new(c, values)],
            ProjectedConstraint::And(cs) | ProjectedConstraint::Or(cs) => {
                cs.iter().map(|c| Plan::new(c, values)).collect()
            }
            _ => Vec::new(),
        };
        Plan { node, class: classify_projected(node, values), children }
    }
}

/// `[lower, upper]` bounds every set in a subtree; only `lower` is closed.
struct Interval<'n> {
    lower: &'n ObjectSet,
    lower_intent: &'n AttributeSet,
    upper: ObjectSet,
    upper_intent: OnceLock<AttributeSet>,
}

struct Search<'a, 'p> {
    ctx: &'a ProjectionContext<'a>,
    db: &'a BooleanDatabase,
    plan: Plan<'p>,
    prune: bool,
}

impl Search<'_, '_> {
    fn exact(
        &self,
        p: &ProjectedConstraint,
        objects: &ObjectSet,
        intent: &AttributeSet,
    ) -> Result<bool, ConstraintError> {
        self.ctx.evaluate_with_intent(p, objects, Some(intent))
    }

    /// Can any set in the interval satisfy `plan`?
    fn feasible(&self, plan: &Plan<'_>, iv: &Interval<'_>) -> Result<Tri, ConstraintError> {
        let at_lower = || self.exact(plan.node, iv.lower, iv.lower_intent);
        let at_upper = || {
            let intent = iv.upper_intent.get_or_init(|| self.db.intension(&iv.upper));
            self.exact(plan.node, &iv.upper, intent)
        };
        match plan.class {
            Monotonicity::Both => return Ok(Tri::from_bool(at_lower()?)),
            Monotonicity::Monotone => {
                if at_lower()? {
                    return Ok(Tri::True);
                }
                if !at_upper()? {
                    return Ok(Tri::False);
                }
                return Ok(Tri::Unknown);
            }
            Monotonicity::AntiMonotone => {
                if !at_lower()? {
                    return Ok(Tri::False);
                }
                if at_upper()? {
                    return Ok(Tri::True);
                }
                return Ok(Tri::Unknown);
            }
            Monotonicity::Unknown => {}
        }
        Ok(match plan.node {
            ProjectedConstraint::Not(_) => self.feasible(&plan.children[0], iv)?.not(),
            ProjectedConstraint::And(_) => {
                let mut out = Tri::True;
                for c in &plan.children {
                    match self.feasible(c, iv)? {
                        Tri::False => return Ok(Tri::False),
                        Tri::Unknown => out = Tri::Unknown,
                        Tri::True => {}
                    }
                }
                out
            }
            ProjectedConstraint::Or(_) => {
                let mut out = Tri::False;
                for c in &plan.children {
                    match self.feasible(c, iv)? {
                        Tri::True => return Ok(Tri::True),
                        Tri::Unknown => out = Tri::Unknown,
                        Tri::False => {}
                    }
                }
                out
            }
            _ => Tri::Unknown,
        })
    }

    fn root(&self) -> ClosedSet {
        let intent = self.db.all_attributes();
        let objects = self.db.extension_by_rows(&intent);
        ClosedSet { objects, intent }
    }

    /// Canonical children of `node` whose core index is at least `start`.
    fn children(&self, node: &ClosedSet, start: usize) -> Vec<(ClosedSet, usize)> {
        let mut out = Vec::new();
        for o in start..self.db.n_objects() {
            if node.objects.contains(o) {
                continue;
            }
            let intent = node.intent.intersection(self.db.object_row(ObjectId(o)));
            let objects = self.db.extension_by_rows(&intent);
            if objects.agrees_below(&node.objects, o) {
                out.push((ClosedSet { objects, intent }, o + 1));
            }
        }
        out
    }

    fn visit(
        &self,
        node: ClosedSet,
        start: usize,
        out: &mut Vec<ClosedSet>,
        stats: &mut SearchStats,
    ) -> Result<(), ConstraintError> {
        let mut stack = vec![(node, start)];
        while let Some((node, start)) = stack.pop() {
            stats.visited += 1;
            if self.prune {
                let mut upper = node.objects.clone();
                for o in start..self.db.n_objects() {
                    upper.insert(o);
                }
                let iv =
                    Interval { lower: &node.objects, lower_intent: &node.intent, upper, upper_intent: OnceLock::new() };
                if self.feasible(&self.plan, &iv)? == Tri::False {
                    stats.pruned += 1;
                    continue;
                }
            }
            let children = self.children(&node, start);
            if self.exact(self.plan.node, &node.objects, &node.intent)? {
                out.push(node);
            }
            // reversed so the walk pops children in ascending object order
            stack.extend(children.into_iter().rev());
        }
        Ok(())
    }
}

/// Every closed object set satisfying `constraint`, in shortlex order.
pub fn enumerate_closed(
    ctx: &ProjectionContext<'_>,
    constraint: &ProjectedConstraint,
    cfg: &MinerConfig,
) -> Result<Vec<ClosedSet>, ConstraintError> {
    enumerate_closed_with_stats(ctx, constraint, cfg).map(|(sets, _)| sets)
}

pub fn enumerate_closed_with_stats(
    ctx: &ProjectionContext<'_>,
    constraint: &ProjectedConstraint,
    cfg: &MinerConfig,
) -> Result<(Vec<ClosedSet>, SearchStats), ConstraintError> {
    let search = Search { ctx, db: ctx.db(), plan: Plan::new(constraint, ctx.values()), prune: cfg.prune_antimonotone };
    let root = search.root();
    let mut found = Vec::new();
    let mut stats = SearchStats::default();

    if cfg.parallel_subtrees {
        // the root alone, then each of its subtrees as an independent job
        stats.visited += 1;
        let pruned_root = search.prune && {
            let mut upper = root.objects.clone();
            upper.union_with(&ctx.db().all_objects());
            let iv =
                Interval { lower: &root.objects, lower_intent: &root.intent, upper, upper_intent: OnceLock::new() };
            search.feasible(&search.plan, &iv)? == Tri::False
        };
        if pruned_root {
            stats.pruned += 1;
        } else {
            let children = search.children(&root, 0);
            if search.exact(constraint, &root.objects, &root.intent)? {
                found.push(root);
            }
            let parts = children
                .into_par_iter()
                .map(|(child, start)| {
                    let mut out = Vec::new();
                    let mut stats = SearchStats::default();
                    search.visit(child, start, &mut out, &mut stats).map(|()| (out, stats))
                })
                .collect::<Result<Vec<_>, _>>()?;
            for (sets, s) in parts {
                found.extend(sets);
                stats.visited += s.visited;
                stats.pruned += s.pruned;
            }
        }
    } else {
        search.visit(root, 0, &mut found, &mut stats)?;
    }

    found.sort_by(|a, b| a.objects.cmp(&b.objects));
    Ok((found, stats))
}

/// Concepts satisfying `constraint`: desugar, project, enumerate, and pair
/// each surviving extent with the intent computed during the search.
pub fn mine_concepts(
    db: &BooleanDatabase,
    constraint: &ConceptConstraint,
    values: Option<&AttributeValues>,
    cfg: &MinerConfig,
) -> Result<Vec<Concept>, ConstraintError> {
    let mut ctx = ProjectionContext::new(db, values);
    let projected = ctx.project(constraint)?;
    mine_projected(&ctx, &projected, cfg)
}

pub fn mine_projected(
    ctx: &ProjectionContext<'_>,
    projected: &ProjectedConstraint,
    cfg: &MinerConfig,
) -> Result<Vec<Concept>, ConstraintError> {
    let concepts: Vec<Concept> = enumerate_closed(ctx, projected, cfg)?
        .into_iter()
        .map(|c| Concept { intent: c.intent, extent: c.objects })
        .collect();
    debug_assert!(concepts.iter().all(|c| c.is_valid(ctx.db())));
    Ok(concepts)
}

/// Every concept of `db`.
pub fn all_concepts(db: &BooleanDatabase) -> Vec<Concept> {
    mine_concepts(db, &ConceptConstraint::True, None, &MinerConfig::default())
        .expect("the trivial constraint needs no values")
}
