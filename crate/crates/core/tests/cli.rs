use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_collapse-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn tmp(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("collapse-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

const PSL2_13_INVOLUTION: [&str; 12] =
    ["detect", "--family", "sl", "--n", "2", "--q", "13", "--projective", "--rep", "[[5,0],[0,8]]", "--kind", "d"];

#[test]
fn field_info_reports_the_tower() {
    let v = json(&run(&["--no-meta", "field-info", "--q", "9"]));
    assert_eq!(v["p"], 3);
    assert_eq!(v["m"], 2);
    assert_eq!(v["q"], 9);
}

#[test]
fn meta_block_present_unless_suppressed() {
    let with = json(&run(&["field-info", "--q", "4"]));
    assert_eq!(with["meta"]["tool"], "collapse-lab");
    assert!(with["meta"]["timestamp"].is_u64());
    let without = json(&run(&["--no-meta", "field-info", "--q", "4"]));
    assert!(without.get("meta").is_none());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["no-such-verb"]).status.code(), Some(2));
    assert_eq!(run(&["field-info"]).status.code(), Some(2));
    assert_eq!(run(&["field-info", "--q", "6"]).status.code(), Some(2));
    assert_eq!(run(&["--format", "csv", "field-info", "--q", "4"]).status.code(), Some(2));
    assert_eq!(run(&["class-info", "--family", "sl", "--n", "2", "--rep", "[[1,0],[0,1]]"]).status.code(), Some(2));
}

#[test]
fn refused_recipe_exits_2_with_reason() {
    let out = run(&["certify", "--family", "sp", "--n", "2", "--q", "2", "--recipe", "split", "--rep", "[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("split torus is trivial"));
}

#[test]
fn class_bound_abort_exits_3_and_names_the_bound() {
    let out = bin()
        .env("COLLAPSE_LAB_MEM_LIMIT", "10")
        .args(["class-info", "--family", "sl", "--n", "2", "--q", "13", "--rep", "[[5,0],[0,8]]"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound 10"));
}

#[test]
fn class_info_on_central_element() {
    let v = json(&run(&["--no-meta", "class-info", "--family", "sp", "--n", "2", "--q", "3", "--rep", "[[2,0,0,0],[0,2,0,0],[0,0,2,0],[0,0,0,2]]"]));
    assert_eq!(v["class_size"], 1);
    assert_eq!(v["central"], true);
    assert_eq!(v["order"], 2);
}

#[test]
fn class_info_reports_twist_data_in_sl() {
    let v = json(&run(&["--no-meta", "class-info", "--family", "sl", "--n", "3", "--q", "2", "--rep", "[[0,0,1],[1,0,1],[0,1,0]]"]));
    assert_eq!(v["class_size"], 24);
    assert_eq!(v["irreducible"], true);
    assert_eq!(v["twist"]["j"], 3);
}

#[test]
fn type_d_on_psl2_13_involutions() {
    let mut args = vec!["--no-meta"];
    args.extend(PSL2_13_INVOLUTION);
    let v = json(&run(&args));
    assert_eq!(v["kind"], "typeD");
    assert!(v["checks"].as_object().unwrap().values().all(|c| c == true));
}

#[test]
fn default_output_is_deterministic() {
    let mut args = vec!["--no-meta"];
    args.extend(PSL2_13_INVOLUTION);
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn certificate_round_trip_through_verify() {
    let path = tmp("split.json");
    let out = run(&[
        "certify", "--family", "sp", "--n", "2", "--q", "5", "--projective", "--recipe", "split", "--rep",
        "[[2,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,3]]", "--out", &path,
    ]);
    assert_eq!(json(&out)["kind"], "typeC");
    let v = json(&run(&["--no-meta", "detect", "--verify", &path]));
    assert_eq!(v["ok"], true);

    // stdout of certify is itself a certificate, meta block included
    let stdout_path = tmp("split-stdout.json");
    std::fs::write(&stdout_path, &out.stdout).unwrap();
    assert_eq!(json(&run(&["detect", "--verify", &stdout_path]))["ok"], true);
}

#[test]
fn detect_out_file_verifies() {
    let path = tmp("d13.json");
    let mut args: Vec<&str> = PSL2_13_INVOLUTION.to_vec();
    args.extend(["--out", &path]);
    assert!(run(&args).status.success());
    assert_eq!(json(&run(&["detect", "--verify", &path]))["ok"], true);
}

#[test]
fn tampered_certificate_fails_verification_with_exit_1() {
    let path = tmp("tampered.json");
    let mut args: Vec<&str> = PSL2_13_INVOLUTION.to_vec();
    args.extend(["--out", &path]);
    assert!(run(&args).status.success());
    let mut cert: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    cert["witness"]["s"] = cert["witness"]["r"].clone();
    std::fs::write(&path, cert.to_string()).unwrap();
    let out = run(&["--no-meta", "detect", "--verify", &path]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ok"], false);
    assert!(!v["mismatches"].as_array().unwrap().is_empty());
}

#[test]
fn psl2_small_table_rows() {
    let v = json(&run(&["--no-meta", "table", "--which", "psl2-small", "--qmax", "9"]));
    let rows = v["rows"].as_array().unwrap();
    let find = |q: u64, label: &str| -> Vec<&Value> {
        rows.iter().filter(|r| r["q"] == q && r["label"] == label).collect()
    };
    let verdicts = |q, label| find(q, label).iter().map(|r| r["verdict"].as_str().unwrap().to_string()).collect::<Vec<_>>();
    assert_eq!(verdicts(2, "(3)"), ["abelian"]);
    assert_eq!(verdicts(3, "(2^2)"), ["abelian"]);
    assert_eq!(verdicts(4, "(5)"), ["sober", "sober"]);
    assert_eq!(verdicts(4, "(3)"), ["typeC"]);
    assert_eq!(verdicts(5, "(1,2^2)"), ["sober"]);
    assert_eq!(verdicts(5, "(3)"), ["typeC"]);
    assert_eq!(verdicts(9, "(1^2,2^2)"), ["typeC"]);
    assert_eq!(find(4, "(5)")[0]["size"], 12);
    assert_eq!(find(5, "(1,2^2)")[0]["size"], 15);
    assert!(rows.iter().all(|r| r["status"] == "agrees" || r["status"] == "bounded"));
    assert!(rows.iter().filter(|r| r["q"].as_u64().unwrap() <= 5).all(|r| r["status"] == "agrees"));
}

#[test]
fn table_csv_has_header_and_rows() {
    let out = run(&["--format", "csv", "table", "--which", "psl2-small", "--qmax", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "group,q,class,label,order,size,verdict,expected,status");
    assert_eq!(lines.count(), 9);
}

#[test]
fn kthulhu_table_marks_open_and_out_of_scope_rows() {
    let v = json(&run(&["--no-meta", "table", "--which", "kthulhu", "--qmax", "2"]));
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["group"] == "PSp_4(7)" && r["status"] == "open"));
    assert!(rows.iter().any(|r| r["status"] == "out-of-scope"));
    assert!(rows.iter().filter(|r| r["size"].as_u64().unwrap() > 0).all(|r| r["status"] == "agrees"));
}

#[test]
fn weyl_lists_cuspidal_classes_with_torus_orders() {
    let v = json(&run(&["--no-meta", "weyl", "--type", "b", "--n", "4", "--list-cuspidal", "--q", "3"]));
    assert_eq!(v["cuspidal_count"], 5);
    assert_eq!(v["coxeter"]["torus_order"], "82");
    let mut orders: Vec<u64> =
        v["cuspidal"].as_array().unwrap().iter().map(|c| c["torus_order"].as_str().unwrap().parse().unwrap()).collect();
    orders.sort_unstable();
    // (q^4+1), (q^3+1)(q+1), (q^2+1)^2, (q^2+1)(q+1)^2, (q+1)^4 at q = 3
    assert_eq!(orders, [82, 100, 112, 160, 256]);
}

#[test]
fn weyl_type_a_coxeter_torus() {
    let v = json(&run(&["--no-meta", "weyl", "--type", "a", "--n", "3", "--q", "4"]));
    assert_eq!(v["coxeter"]["torus_order"], "63");
    assert_eq!(v["coxeter"]["cuspidal"], true);
}

#[test]
fn text_format_flattens_reports() {
    let out = run(&["--no-meta", "--format", "text", "field-info", "--q", "8"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "p: 2"));
    assert!(text.lines().any(|l| l == "m: 3"));
}
