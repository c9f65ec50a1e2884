use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn quadgor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadgor")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn family_seven_text_report() {
    let o = quadgor(&["family", "--c", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("h-vector: (1, 7, 14, 7, 1)"));
    assert!(s.contains("    1 | -- 14 21  --  -- -- -- --"));
    assert!(s.contains("    2 | -- -- 36 126 126 36 -- --"));
    assert!(s.contains("    3 | -- -- --  --  -- 21 14 --"));
    assert!(s.contains("Koszul certificate: not Koszul: β^R_{3,4}(k) = 1"));
    assert!(s.contains("(agrees)"));
    assert!(s.contains("syzygy obstruction: witness found, verified yes"));
}

#[test]
fn family_json_is_deterministic() {
    let a = quadgor(&["family", "--c", "8", "--json"]);
    let b = quadgor(&["family", "--c", "8", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["h_vector"], serde_json::json!([1, 8, 16, 8, 1]));
    assert_eq!(v["config"]["command"], "family");
    assert_eq!(v["config"]["field"], serde_json::json!({ "PrimeField": 32003 }));
    assert!(v["config"]["engine_version"].is_string());
    assert_eq!(v["certificates"]["expected"]["quadric_count"], true);
    assert!(v["certificates"]["koszul"]["verdict"]["NotKoszul"].is_object());
}

#[test]
fn family_six_warns() {
    let o = quadgor(&["family", "--c", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("below the family's range"));
    assert!(err.contains("(2, 2, 2, 2, 2, 2, 2, 2, 2, 3, 3)"));
}

#[test]
fn example_g6_checks() {
    let o = quadgor(&["example-g6"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("field q"));
    for line in [
        "check: 9 quadrics: yes",
        "check: h-vector (1, 6, 12, 6, 1): yes",
        "check: Betti table (1; 9, 4; 40, 72, 40; 4, 9; 1): yes",
        "check: degree-two bound rules out Koszulness: yes",
        "degree-two bound: not Koszul (β_{2,4} = 40 > 36)",
    ] {
        assert!(s.contains(line), "missing {line:?}");
    }
}

#[test]
fn deviation_two_seeded() {
    let a = quadgor(&["deviation-two", "--c", "4", "--seed", "3", "--json"]);
    let b = quadgor(&["deviation-two", "--c", "4", "--seed", "3", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 3);
    assert_eq!(v["certificates"]["validity"]["failure"], Value::Null);
    assert_eq!(v["multiplicity"], 10);
    assert_eq!(v["certificates"]["koszul"]["verdict"]["KoszulUpTo"], 4);
}

#[test]
fn grid_cells() {
    let o = quadgor(&["grid", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let cells = v["result"].as_array().unwrap();
    let find = |c: u64, r: u64| cells.iter().find(|x| x["c"] == c && x["r"] == r).unwrap().clone();
    assert_eq!(find(6, 4)["status"], "No");
    assert_eq!(find(6, 4)["witness"]["base"], "ExampleG");
    assert_eq!(find(5, 4)["status"], "Yes");
    assert_eq!(find(7, 3)["status"], "Unknown");
    let text = stdout(&quadgor(&["grid"]));
    assert!(text.contains("r= 3 |  .  .  .  Y  Y  Y  ?  ?  ?  N  N  N"));
}

#[test]
fn betti_golden() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ci.ideal", "field q\nvars 3\nideal\nx0\nx1\nx2\n");
    let o = quadgor(&["betti", "--ideal", &f]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let golden = "\
Betti table:
      | 0 1 2 3
------+--------
    0 | 1 3 3 1
total | 1 3 3 1
";
    assert!(s.contains(golden), "{s}");
}

#[test]
fn ann_link_pfaffian_tensor() {
    let dir = tempfile::tempdir().unwrap();
    let inv = write(dir.path(), "f.inv", "field q\nvars y0 y1\ninverse\ny0*y1\n");
    let o = quadgor(&["ann", "--input", &inv]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("ideal\nx1^2\nx0^2\n") || s.contains("ideal\nx0^2\nx1^2\n"), "{s}");

    let l = write(dir.path(), "l.ideal", "vars 2\nideal\nx0^2\nx1^2\n");
    let i = write(dir.path(), "i.ideal", "vars 2\nideal\nx0^2\nx0*x1\nx1^2\n");
    let o = quadgor(&["link", "--ci", &l, "--ideal", &i]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("linkage h-vector identity: holds"));
    assert!(s.contains("(L : J) = I: yes"));

    let m = write(dir.path(), "m.ideal", "vars a b c d e f\nalternating 4\na\nb\nc\nd\ne\nf\n");
    let o = quadgor(&["pfaffian", "--matrix", &m, "--field", "q"]);
    assert!(stdout(&o).contains("Pf(M) = c*d - b*e + a*f"));

    let e = write(dir.path(), "e.ideal", "vars y\nideal\ny^2\n");
    let o = quadgor(&["tensor", "--ideal", &l, "--with", &e]);
    let s = stdout(&o);
    assert!(s.contains("vars x0 x1 y"));
    assert!(s.contains("# h-polynomial (1, 3, 3, 1)"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = quadgor(&["family", "--c", "7", "--json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["betti"].as_array().unwrap().len(), 10);
}

#[test]
fn exit_codes() {
    assert_eq!(quadgor(&["family"]).status.code(), Some(2));
    assert_eq!(quadgor(&["nonsense"]).status.code(), Some(2));
    assert_eq!(quadgor(&["family", "--c", "7", "--field", "gf:12"]).status.code(), Some(2));
    assert_eq!(quadgor(&["betti", "--ideal", "/nonexistent/x.ideal"]).status.code(), Some(2));
    assert_eq!(quadgor(&["family", "--c", "2"]).status.code(), Some(1));
    assert_eq!(quadgor(&["--help"]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.ideal", "vars 2\nideal\nx0^2 + z\n");
    assert_eq!(quadgor(&["betti", "--ideal", &bad]).status.code(), Some(2));
    let l = write(dir.path(), "l.ideal", "vars 2\nideal\nx0^2\nx1^2\n");
    let o = quadgor(&["link", "--ci", &l, "--ideal", &l]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("precondition"));
}
