use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cubicsym::corpus::example;
use cubicsym::forms::{fermat, fixes, form_from_text, form_to_text, group_to_text};
use cubicsym::groups::{modular_order, DEFAULT_CAP};
use cubicsym::reps::{AbelianSpec, RepClass};
use serde_json::Value;

fn cubicsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubicsym")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn export(id: &str, dir: &Path) -> (String, String) {
    let ex = example(id).unwrap();
    let stem = id.replace('\'', "p");
    let f = dir.join(format!("{stem}.form"));
    let g = dir.join(format!("{stem}.group"));
    fs::write(&f, form_to_text(&ex.form)).unwrap();
    fs::write(&g, group_to_text(&ex.gens, ex.form.nvars())).unwrap();
    (f.display().to_string(), g.display().to_string())
}

#[test]
fn smooth_and_singular() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("fermat.form");
    fs::write(&good, form_to_text(&fermat(4, 3))).unwrap();
    let o = cubicsym(&["smooth", "--form", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "SMOOTH");

    // x1^3 + … + x6^3 in seven variables
    let mut text = form_to_text(&fermat(6, 3));
    text = text.replacen("form 6 3", "form 7 3", 1);
    let text: String = text
        .lines()
        .map(|l| match l.split_once(" |") {
            Some((e, c)) => format!("{e} 0 |{c}\n"),
            None => format!("{l}\n"),
        })
        .collect();
    let bad = dir.path().join("cone.form");
    fs::write(&bad, text).unwrap();
    let o = cubicsym(&["smooth", "--form", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("SINGULAR L38-i i=7"), "{}", stdout(&o));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.form");
    fs::write(&junk, "form 3 3\n1 1 1 | oops\n").unwrap();
    assert_eq!(cubicsym(&["smooth", "--form", junk.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(cubicsym(&["smooth", "--form", "/no/such/file"]).status.code(), Some(2));
    assert_eq!(cubicsym(&["reps", "--abelian", "4,6,0", "--vars", "7", "--degree", "3"]).status.code(), Some(2));
}

#[test]
fn order_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let (_, g) = export("X20", dir.path());
    let o = cubicsym(&["order", "--group", &g]);
    assert_eq!(o.status.code(), Some(0));
    let lib = modular_order(&example("X20").unwrap().gens, DEFAULT_CAP).unwrap();
    assert!(stdout(&o).starts_with(&format!("{} ", lib.projective())));
    assert!(stdout(&o).starts_with("301 "));
    let o = cubicsym(&["order", "--group", &g, "--cap", "10"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn invariance_lift_and_symplectic() {
    let dir = tempfile::tempdir().unwrap();
    let (f, g) = export("X5'", dir.path());
    let o = cubicsym(&["check-invariance", "--group", &g, "--form", &f]);
    assert!(stdout(&o).contains("INVARIANT"));
    let lifted = dir.path().join("lift.group");
    let o = cubicsym(&["lift", "--group", &g, "--degree", "3", "--form", &f, "--output", lifted.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("lifted group fixes"));
    // one generator of the fourfold is not symplectic
    let ex = example("X5'").unwrap();
    let m = dir.path().join("a.matrix");
    fs::write(&m, cubicsym::forms::matrix_to_text(&ex.gens[0])).unwrap();
    let o = cubicsym(&["symplectic", "--matrix", m.to_str().unwrap(), "--form", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("NO"), "{}", stdout(&o));
}

#[test]
fn invariants_and_rank() {
    let dir = tempfile::tempdir().unwrap();
    let (f, g) = export("X20", dir.path());
    let o = cubicsym(&["invariants", "--group", &g, "--degree", "3"]);
    assert_eq!(stdout(&o).lines().next(), Some("dimension 1"));
    let o = cubicsym(&["rank", "--form", &f, "--order", "1"]);
    assert_eq!(stdout(&o).trim(), "7");
    let o = cubicsym(&["partition", "--form", &f]);
    assert!(stdout(&o).contains("certified MonomialSupport"));
}

#[test]
fn reps_writes_fixed_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w");
    let o = cubicsym(&["reps", "--abelian", "2", "--vars", "7", "--degree", "3", "--filter", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let accepted: Vec<&str> = text.lines().filter(|l| l.contains("\tACCEPTED\t")).collect();
    assert_eq!(accepted.len(), 3);
    for line in accepted {
        let mut parts = line.split('\t');
        let exp: Vec<u32> =
            parts.next().unwrap().trim_matches(|c| c == '[' || c == ']').split(' ').map(|e| e.parse().unwrap()).collect();
        let path = parts.nth(1).unwrap();
        let w = form_from_text(&fs::read_to_string(path).unwrap()).unwrap();
        let class = RepClass { spec: AbelianSpec::new(vec![2]).unwrap(), m: 7, d: 3, exp: vec![exp] };
        assert!(class.generators().iter().all(|g| fixes(g, &w).unwrap()));
    }
}

#[test]
fn output_does_not_depend_on_threads() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_cubicsym"))
            .args(["reps", "--abelian", "11", "--vars", "7", "--degree", "3", "--filter"])
            .env("CUBICSYM_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn example_subcommands() {
    let o = cubicsym(&["example", "verify", "X20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("301 (expected 301"));
    let o = cubicsym(&["example", "list"]);
    assert!(stdout(&o).lines().any(|l| l == "X15'"));
    assert_eq!(cubicsym(&["example", "verify", "X99"]).status.code(), Some(2));
}

fn records(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn manifests() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.jsonl");
    fs::write(&empty, "").unwrap();
    let o = cubicsym(&["run", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());

    export("X20", dir.path());
    let m = dir.path().join("m.jsonl");
    fs::write(
        &m,
        r#"{"task": "smooth", "inputs": {"form": "missing.form"}}
{"task": "order", "inputs": {"group": "X20.group"}, "expect": 301}
{"task": "example", "inputs": {"id": "X20"}, "expect": "PASS"}
"#,
    )
    .unwrap();
    let o = cubicsym(&["run", m.to_str().unwrap()]);
    assert_ne!(o.status.code(), Some(0));
    let recs = records(&o);
    assert_eq!(recs.len(), 3);
    assert_eq!(recs[0]["status"], "ERROR");
    assert_eq!(recs[1]["status"], "PASS");
    assert_eq!(recs[1]["result"]["value"], 301);
    assert_eq!(recs[2]["status"], "PASS");
    for r in &recs {
        assert!(r.get("task").is_some() && r.get("inputs").is_some() && r.get("elapsed").is_some());
    }

    fs::write(&m, r#"{"task": "order", "inputs": {"group": "X20.group"}, "expect": 300}"#).unwrap();
    let o = cubicsym(&["run", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(records(&o)[0]["status"], "FAIL");
}

#[test]
fn shipped_rep_count_manifest() {
    let m = Path::new(env!("CARGO_MANIFEST_DIR")).join("manifests/rep_counts.jsonl");
    let o = cubicsym(&["run", m.to_str().unwrap()]);
    let recs = records(&o);
    assert_eq!(recs.len(), 5);
    assert!(recs.iter().all(|r| r["status"] == "PASS"), "{}", stdout(&o));
    assert_eq!(o.status.code(), Some(0));
}
