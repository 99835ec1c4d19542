use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

const DB1: &str = ",a1,a2,a3,a4\no1,1,1,1,0\no2,1,1,1,0\no3,0,1,1,1\n";

fn cproj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cproj")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixture(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn mine_db1() {
    let dir = TempDir::new().unwrap();
    let db = fixture(&dir, "db1.csv", DB1);
    let out = stdout(&cproj(&["mine", "--input", &db, "--constraint", "NOT (a SUPERSET {a4})"]));
    assert_eq!(
        out,
        concat!(
            r#"{"attributes":4,"objects":3,"constraint":"not (A superset {a4})","concepts":2}"#,
            "\n",
            r#"{"intent":["a1","a2","a3"],"extent":["o1","o2"]}"#,
            "\n",
            r#"{"intent":["a2","a3"],"extent":["o1","o2","o3"]}"#,
            "\n"
        )
    );
}

#[test]
fn mine_matches_oracle_and_flags() {
    let dir = TempDir::new().unwrap();
    let db = fixture(&dir, "db1.csv", DB1);
    for constraint in ["true", "A intersects {a1,a4}", "area >= 6 or O disjoint {o3}"] {
        let mined = stdout(&cproj(&["mine", "--input", &db, "--constraint", constraint]));
        let unpruned = stdout(&cproj(&["mine", "--input", &db, "--constraint", constraint, "--no-prune"]));
        let parallel = stdout(&cproj(&["mine", "--input", &db, "--constraint", constraint, "--parallel"]));
        let oracle = stdout(&cproj(&["oracle", "--input", &db, "--constraint", constraint]));
        assert_eq!(mined, oracle);
        assert_eq!(mined, unpruned);
        assert_eq!(mined, parallel);
    }
    let all = stdout(&cproj(&["concepts", "--input", &db, "--drop-empty-extent", "--drop-empty-intent"]));
    assert_eq!(all.lines().count(), 1 + 3);
}

#[test]
fn values_and_output_file() {
    let dir = TempDir::new().unwrap();
    let db = fixture(&dir, "db1.csv", DB1);
    let values = fixture(&dir, "values.csv", "attribute,value\na1,1\na2,2\na3,3\na4,4\n");
    let target = dir.path().join("out.jsonl");
    let out = cproj(&[
        "mine",
        "--input",
        &db,
        "--values",
        &values,
        "--constraint",
        "sum(A) <= 6",
        "--output",
        target.to_str().unwrap(),
    ]);
    assert!(stdout(&out).is_empty());
    let written = fs::read_to_string(&target).unwrap();
    assert!(written.contains(r#"{"intent":["a1","a2","a3"],"extent":["o1","o2"]}"#));
    assert_eq!(written.lines().count(), 1 + 2);
}

#[test]
fn sparse_input() {
    let dir = TempDir::new().unwrap();
    let db = fixture(&dir, "db1.txt", "o1: a1 a2 a3\no2: a1 a2 a3\n\no3: a2 a3 a4\n");
    let out = stdout(&cproj(&["concepts", "--input", &db, "--format", "sparse"]));
    assert_eq!(out.lines().count(), 1 + 4);
}

#[test]
fn project_prints_object_constraint() {
    let dir = TempDir::new().unwrap();
    let db = fixture(&dir, "db1.csv", DB1);
    let out = stdout(&cproj(&[
        "project",
        "--input",
        &db,
        "--constraint",
        "(size(A) > 4 and freq(A) > 2) or A intersects {a1,a4}",
    ]));
    assert_eq!(out, "(freq(O) > 4 and size(O) > 2) or not (O superset {o1,o2,o3})\n");
}

#[test]
fn transpose_twice_is_identity() {
    let dir = TempDir::new().unwrap();
    let db = fixture(&dir, "db1.csv", DB1);
    let once = stdout(&cproj(&["transpose", "--input", &db]));
    assert!(once.starts_with(",o1,o2,o3\na1,1,1,0\n"));
    let t = fixture(&dir, "t.csv", &once);
    assert_eq!(stdout(&cproj(&["transpose", "--input", &t])), DB1);
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let db = fixture(&dir, "db1.csv", DB1);
    let ragged = fixture(&dir, "ragged.csv", ",a1,a2\no1,1\n");
    let missing = dir.path().join("missing.csv");
    assert_eq!(code(&cproj(&["mine"])), 2);
    assert_eq!(code(&cproj(&["mine", "--input", missing.to_str().unwrap()])), 3);
    assert_eq!(code(&cproj(&["mine", "--input", &ragged])), 4);
    let bad = cproj(&["mine", "--input", &db, "--constraint", "A subset {a5}"]);
    assert_eq!(code(&bad), 5);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("did you mean"));
    assert_eq!(code(&cproj(&["mine", "--input", &db, "--constraint", "O superset {a1}"])), 5);
    assert_eq!(code(&cproj(&["mine", "--input", &db, "--constraint", "avg(A) > 1"])), 6);
    assert_eq!(code(&cproj(&["concepts", "--input", &db, "--constraint", "true"])), 6);
    assert_eq!(code(&cproj(&["oracle", "--input", &db, "--max-bits", "2"])), 7);
}
