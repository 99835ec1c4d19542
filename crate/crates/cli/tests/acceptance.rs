//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use cproj_cli::{execute, parse_constraint, print_constraint, run_to_string, Command, RunConfig};
use cproj_core::synth::{
    planted_blocks, random_constraint, random_database, random_values, ConstraintShape, PlantedBlocks,
};
use cproj_core::{
    all_concepts, brute_concepts, brute_mine, classify_projected, mine_concepts, write_dense, AttributeSet,
    AttributeValues, BooleanDatabase, ConceptConstraint, MinerConfig, ObjectSet, ProjectionContext, SubsetRewrite, Var,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN_BUDGET: Duration = Duration::from_millis(1);
const SWEEP_BUDGET: Duration = Duration::from_secs(60);
const WIDE_BUDGET: Duration = Duration::from_secs(5);
const SWEEP_DATABASES: usize = 500;
const SWEEP_CONSTRAINTS: usize = 50;
const ROUND_TRIPS: usize = 1000;
const WIDE_SEED: u64 = 7;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn db1() -> BooleanDatabase {
    BooleanDatabase::from_object_rows(4, &[&[0, 1, 2], &[0, 1, 2], &[1, 2, 3]])
}

/// Concepts as (intent names, extent names) strings, e.g. `a2a3/o1o2o3`.
fn labelled(listing: &str) -> BTreeSet<String> {
    let (_, records) = cproj_cli::read_concepts(listing).expect("listing parses");
    records.into_iter().map(|r| format!("{}/{}", r.intent.concat(), r.extent.concat())).collect()
}

fn golden(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn cfg(command: Command, constraint: Option<&str>, no_prune: bool) -> RunConfig {
    let mut cfg = RunConfig::new(command, "db1.csv");
    cfg.constraint = constraint.map(str::to_string);
    cfg.no_prune = no_prune;
    cfg
}

/// Run a command on DB1, returning the output and the elapsed time.
fn on_db1(command: Command, constraint: Option<&str>, no_prune: bool) -> (String, Duration) {
    let db = db1();
    let start = Instant::now();
    let out = execute(&cfg(command, constraint, no_prune), &db, None).expect("command succeeds");
    (out, start.elapsed())
}

fn criterion_1(no_prune: bool) -> (Outcome, String) {
    let (out, elapsed) = on_db1(if no_prune { Command::Mine } else { Command::Concepts }, None, no_prune);
    let expected = golden(&["a2a3/o1o2o3", "a2a3a4/o3", "a1a2a3/o1o2", "a1a2a3a4/"]);
    let got = labelled(&out);
    let pass = got == expected && elapsed < GOLDEN_BUDGET;
    (outcome(pass, format!("all concepts of DB1: {got:?} in {elapsed:?}")), out)
}

fn criterion_2(no_prune: bool) -> (Outcome, String) {
    let (out, elapsed) = on_db1(Command::Mine, Some("not (A superset {a4})"), no_prune);
    let got = labelled(&out);
    let pass = got == golden(&["a1a2a3/o1o2", "a2a3/o1o2o3"]) && elapsed < GOLDEN_BUDGET;
    (outcome(pass, format!("not (A superset {{a4}}) on DB1: {got:?} in {elapsed:?}")), out)
}

fn criterion_3(no_prune: bool) -> (Outcome, String) {
    let (projected, _) =
        on_db1(Command::Project, Some("(size(A) > 4 and freq(A) > 2) or A intersects {a1,a4}"), no_prune);
    let projected_ok = projected.trim_end() == "(freq(O) > 4 and size(O) > 2) or not (O superset {o1,o2,o3})";
    let (mined, _) = on_db1(Command::Mine, Some("A intersects {a1,a4}"), no_prune);
    let got = labelled(&mined);
    let mined_ok = got == golden(&["a1a2a3a4/", "a2a3a4/o3", "a1a2a3/o1o2"]);
    let detail = format!("projected to {:?}; A intersects {{a1,a4}} gives {got:?}", projected.trim_end());
    (outcome(projected_ok && mined_ok, detail), projected + &mined)
}

/// A random database of at most 8 attributes and 6 objects with values.
fn sweep_case(rng: &mut ChaCha8Rng) -> (BooleanDatabase, AttributeValues) {
    let na = rng.gen_range(1..=8);
    let no = rng.gen_range(1..=6);
    let density = rng.gen_range(0.2..0.8);
    let db = random_database(rng, na, no, density);
    let values = if rng.gen_bool(0.5) { random_values(rng, na, 0, 4) } else { random_values(rng, na, -3, 4) };
    (db, values)
}

fn leaf_kinds(c: &ConceptConstraint, out: &mut BTreeSet<String>) {
    match c {
        ConceptConstraint::Not(x) => leaf_kinds(x, out),
        ConceptConstraint::And(cs) | ConceptConstraint::Or(cs) => cs.iter().for_each(|x| leaf_kinds(x, out)),
        ConceptConstraint::True => {
            out.insert("true".into());
        }
        ConceptConstraint::Freq { var, .. } => {
            out.insert(format!("freq {var:?}"));
        }
        ConceptConstraint::Size { var, .. } => {
            out.insert(format!("size {var:?}"));
        }
        ConceptConstraint::Set { rel, operand } => {
            out.insert(format!("{rel:?} {:?}", operand.var()));
        }
        ConceptConstraint::Agg { agg, .. } => {
            out.insert(format!("{agg:?}"));
        }
        ConceptConstraint::Area { .. } => {
            out.insert("area".into());
        }
    }
}

/// Expected number of distinct leaf kinds: true, area, freq and size on both
/// variables, four relations on both variables, four aggregates.
const LEAF_KINDS: usize = 2 + 4 + 8 + 4;

fn criterion_4(no_prune: bool) -> (Outcome, String) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let shape = ConstraintShape::default();
    let miner = MinerConfig { prune_antimonotone: !no_prune, ..MinerConfig::default() };
    let (mut evaluations, mut disagreements, mut mismatched_runs) = (0usize, 0usize, 0usize);
    let mut kinds = BTreeSet::new();
    let mut transcript = String::new();
    for _ in 0..SWEEP_DATABASES {
        let (db, values) = sweep_case(&mut rng);
        let closed = brute_concepts(&db).expect("small database");
        for _ in 0..SWEEP_CONSTRAINTS {
            let c = random_constraint(&mut rng, &db, &shape);
            leaf_kinds(&c, &mut kinds);
            let mut ctx = ProjectionContext::new(&db, Some(&values));
            let auto = ctx.project(&c).expect("values supplied");
            let decomposed = ctx.project_with(&c, SubsetRewrite::Decompose).expect("values supplied");
            for concept in &closed {
                let direct = c.evaluate(&concept.intent, &concept.extent, &db, Some(&values)).unwrap();
                let a = ctx.evaluate(&auto, &concept.extent).unwrap();
                let d = ctx.evaluate(&decomposed, &concept.extent).unwrap();
                evaluations += 1;
                if a != direct || d != direct {
                    disagreements += 1;
                }
            }
            let mined = mine_concepts(&db, &c, Some(&values), &miner).unwrap();
            let brute = brute_mine(&db, &c, Some(&values)).unwrap();
            if mined != brute {
                mismatched_runs += 1;
            }
            let text = print_constraint(&c, &db);
            transcript.push_str(&cproj_cli::render_concepts(&db, &text, &mined, Default::default()));
        }
    }
    let elapsed = start.elapsed();
    let pass = disagreements == 0 && mismatched_runs == 0 && kinds.len() == LEAF_KINDS && elapsed < SWEEP_BUDGET;
    let detail = format!(
        "{} databases x {} constraints, {} leaf kinds: {disagreements} of {evaluations} closed-set evaluations \
         disagree, {mismatched_runs} mine/oracle mismatches, {elapsed:.1?}",
        SWEEP_DATABASES,
        SWEEP_CONSTRAINTS,
        kinds.len()
    );
    (outcome(pass, detail), transcript)
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let shape = ConstraintShape { extent_leaves: false, ..ConstraintShape::default() };
    let (mut anti, mut mono, mut pairs, mut violations, mut class_errors) = (0usize, 0usize, 0usize, 0usize, 0usize);
    for _ in 0..SWEEP_DATABASES {
        let (db, values) = sweep_case(&mut rng);
        let closed: Vec<ObjectSet> = brute_concepts(&db).unwrap().into_iter().map(|c| c.extent).collect();
        for _ in 0..SWEEP_CONSTRAINTS {
            let c = random_constraint(&mut rng, &db, &shape);
            let class = c.classify(Var::Intent, Some(&values));
            if !class.is_anti_monotone() && !class.is_monotone() {
                continue;
            }
            let mut ctx = ProjectionContext::new(&db, Some(&values));
            let p = ctx.project(&c).unwrap();
            let flipped = classify_projected(&p, Some(&values));
            if class.is_anti_monotone() {
                anti += 1;
                class_errors += usize::from(!flipped.is_monotone());
            }
            if class.is_monotone() {
                mono += 1;
                class_errors += usize::from(!flipped.is_anti_monotone());
            }
            let holds: Vec<bool> = closed.iter().map(|o| ctx.evaluate(&p, o).unwrap()).collect();
            for (i, o) in closed.iter().enumerate() {
                for (j, q) in closed.iter().enumerate() {
                    if !o.is_subset(q) {
                        continue;
                    }
                    pairs += 1;
                    // Anti-monotone in A means monotone in O, and conversely.
                    let bad = (class.is_anti_monotone() && holds[i] && !holds[j])
                        || (class.is_monotone() && holds[j] && !holds[i]);
                    violations += usize::from(bad);
                }
            }
        }
    }
    let pass = violations == 0 && class_errors == 0 && anti > 0 && mono > 0;
    outcome(
        pass,
        format!(
            "{anti} anti-monotone and {mono} monotone constraints, {pairs} closed pairs: {violations} violations, \
             {class_errors} unflipped classes"
        ),
    )
}

fn criterion_6(first: &[String]) -> Outcome {
    let rerun = [criterion_1(true).1, criterion_2(true).1, criterion_3(true).1, criterion_4(true).1];
    let identical = first.iter().zip(&rerun).filter(|(a, b)| a == b).count();
    outcome(identical == rerun.len(), format!("{identical} of {} outputs byte-identical with --no-prune", rerun.len()))
}

fn scratch_dir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    fs::create_dir_all(&dir).expect("scratch directory");
    dir
}

fn criterion_7() -> Outcome {
    let db = planted_blocks(&mut ChaCha8Rng::seed_from_u64(WIDE_SEED), &PlantedBlocks::wide());
    let dir = scratch_dir();
    let input = dir.join(format!("wide-{WIDE_SEED}.csv"));
    let matrix = write_dense(&db);
    if fs::read_to_string(&input).ok().as_deref() != Some(matrix.as_str()) {
        fs::write(&input, &matrix).expect("write matrix");
    }
    let constraint = "size(O) >= 3";

    let mut mine = RunConfig::new(Command::Mine, &input);
    mine.constraint = Some(constraint.into());
    let start = Instant::now();
    let mined = run_to_string(&mine).expect("mine succeeds");
    let elapsed = start.elapsed();

    let cached = dir.join(format!("wide-{WIDE_SEED}.oracle.jsonl"));
    let (oracle, fresh) = match fs::read_to_string(&cached) {
        Ok(text) => (text, false),
        Err(_) => {
            let mut cfg = RunConfig::new(Command::Oracle, &input);
            cfg.constraint = Some(constraint.into());
            cfg.oracle_bits = 25;
            let text = run_to_string(&cfg).expect("oracle succeeds");
            fs::write(&cached, &text).expect("cache oracle");
            (text, true)
        }
    };
    let total = all_concepts(&db).len();
    let (header, _) = cproj_cli::read_concepts(&mined).unwrap();
    let pass = mined == oracle && elapsed < WIDE_BUDGET && (300..=3000).contains(&total);
    outcome(
        pass,
        format!(
            "2000x25 planted, {total} concepts, {} with |O| >= 3 mined in {elapsed:.2?}; {} oracle",
            header.concepts,
            if mined == oracle { "matches" } else { "differs from" }
        ) + if fresh { " (oracle computed)" } else { " (oracle cached)" },
    )
}

fn criterion_8() -> Outcome {
    let db = db1();
    let values = AttributeValues::new(vec![1.0, 2.0, 3.0, 4.0]);
    let mut failures = Vec::new();
    for text in ["sum(A) <= 6", "min(A) > 1"] {
        let c = parse_constraint(text, &db).unwrap();
        let mined = mine_concepts(&db, &c, Some(&values), &MinerConfig::default()).unwrap();
        if mined != brute_mine(&db, &c, Some(&values)).unwrap() {
            failures.push(text.to_string());
        }
    }
    // A database whose top concept has an empty intent.
    let with_empty_top = BooleanDatabase::from_object_rows(4, &[&[0, 1, 2], &[0, 1, 2], &[1, 2, 3], &[0], &[3]]);
    let mut emitted = 0;
    for db in [&db, &with_empty_top] {
        for t in ["2.5", "0", "-1", "10"] {
            for cmp in ["<", ">", "<=", ">="] {
                let text = format!("avg(A) {cmp} {t}");
                let c = parse_constraint(&text, db).unwrap();
                let mined = mine_concepts(db, &c, Some(&values), &MinerConfig::default()).unwrap();
                emitted += mined.len();
                let finite = mined.iter().all(|m| {
                    !m.intent.is_empty() && (values.sum_over(&m.intent) / m.intent.count() as f64).is_finite()
                });
                if !finite || mined != brute_mine(db, &c, Some(&values)).unwrap() {
                    failures.push(text);
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "sum(A) <= 6 and min(A) > 1 on DB1, 32 avg(A) constraints ({emitted} emitted concepts); failures: {failures:?}"
        ),
    )
}

/// Names that need quoting, to exercise the literal syntax.
fn odd_names(rng: &mut ChaCha8Rng) -> BooleanDatabase {
    let (na, no) = (rng.gen_range(1..=6), rng.gen_range(1..=5));
    let base = random_database(rng, na, no, 0.5);
    let rename = |prefix: &str, n: usize| -> Vec<String> {
        (0..n)
            .map(|i| match i % 4 {
                0 => format!("{prefix} {i}"),
                1 => format!("{prefix},{i}"),
                2 => format!("{prefix}\"{i}\""),
                _ => format!("{prefix}{i}"),
            })
            .collect()
    };
    let rows: Vec<AttributeSet> =
        (0..base.n_objects()).map(|o| base.object_row(cproj_core::ObjectId(o)).clone()).collect();
    BooleanDatabase::from_rows(rename("gene", base.n_attributes()), rename("cond", base.n_objects()), rows).unwrap()
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ok = 0;
    let mut first_failure = None;
    for i in 0..ROUND_TRIPS {
        let db = if i % 2 == 0 { odd_names(&mut rng) } else { sweep_case(&mut rng).0 };
        let c = random_constraint(&mut rng, &db, &ConstraintShape { max_depth: 4, ..ConstraintShape::default() });
        let t = print_constraint(&c, &db);
        let round = parse_constraint(&t, &db).and_then(|p| {
            let again = parse_constraint(&print_constraint(&p, &db), &db)?;
            Ok((p, again))
        });
        match round {
            Ok((p, again)) if p == again && p == c => ok += 1,
            other => {
                first_failure.get_or_insert(format!("{t:?}: {other:?}"));
            }
        }
    }
    let detail = match first_failure {
        None => format!("{ok} of {ROUND_TRIPS} constraints round-trip"),
        Some(f) => format!("{ok} of {ROUND_TRIPS} constraints round-trip; first failure {f}"),
    };
    outcome(ok == ROUND_TRIPS, detail)
}

fn report(number: usize, name: &str, o: &Outcome) -> bool {
    println!("{} criterion {number} ({name}): {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    o.pass
}

fn main() {
    // Warm up allocator and code paths so the golden timings are not skewed.
    let _ = criterion_1(false);

    let (c1, out1) = criterion_1(false);
    let (c2, out2) = criterion_2(false);
    let (c3, out3) = criterion_3(false);
    let (c4, out4) = criterion_4(false);
    let results = [
        report(1, "golden concepts", &c1),
        report(2, "golden negated superset", &c2),
        report(3, "golden projection", &c3),
        report(4, "projection soundness sweep", &c4),
        report(5, "monotonicity flip", &criterion_5()),
        report(6, "pruning neutrality", &criterion_6(&[out1, out2, out3, out4])),
        report(7, "wide matrix", &criterion_7()),
        report(8, "aggregates", &criterion_8()),
        report(9, "parser round trip", &criterion_9()),
    ];
    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
