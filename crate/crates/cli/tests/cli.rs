use std::io::Write;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn trs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trs")).args(args).env_remove("TRS_BUDGET").output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn temp_json(v: &Value) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{v}").unwrap();
    f
}

#[test]
fn enumerate_s0_n3_k2() {
    let out = trs(&["enumerate", "--space", "param", "--t", "0", "--n", "3", "--k", "2", "--format", "json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["records"].as_array().unwrap().len(), 3);
    assert_eq!(v["records"][0]["data"], json!([0, 0, 1]));
}

#[test]
fn enumerate_csv_has_header_and_rows() {
    let out = trs(&["enumerate", "--space", "param", "--t", "1", "--n", "2", "--k", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,n,k,data");
    // one-class words of length 2 over {0} ∪ {block}: 01, 10, 11
    assert_eq!(lines.len(), 4);
}

#[test]
fn check_axioms_gapw_all_pass() {
    let out = trs(&["check-axioms", "--space", "gapw", "--t", "1", "--m", "2", "--max-extent", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["complete"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 13);
}

#[test]
fn check_axioms_permissive_gpart_fails_a7b() {
    let out = trs(&["check-axioms", "--space", "gpart", "--group", "Z2", "--max-extent", "3", "--clause", "A7b"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["all_pass"], false);
    let strict = trs(&["check-axioms", "--space", "gpart", "--group", "Z2", "--strict", "--max-extent", "3", "--clause", "A7b"]);
    assert_eq!(strict.status.code(), Some(0));
}

#[test]
fn check_axioms_budget_exit_3() {
    let out = trs(&["check-axioms", "--space", "param", "--t", "1", "--max-extent", "3", "--budget", "5"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_of(&out)["complete"], false);
}

#[test]
fn corrupted_gapw_reports_condition() {
    // row 1 holds two cells of class 1
    let bad = json!({"space": "gapw", "t": 1, "m": 2, "n": 2, "k": 1, "data": [0, 0, 1, 1, 0, 0]});
    let f = temp_json(&bad);
    let out = trs(&["validate", "--space", "gapw", "--t", "1", "--m", "2", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["valid"], false);
    assert_eq!(v["condition"], 2);

    let good = json!({"space": "gapw", "t": 1, "m": 2, "n": 2, "k": 1, "data": [0, 0, 0, 1, 0, 1]});
    let out = trs(&["validate", "--space", "gapw", "--t", "1", "--m", "2", &good.to_string()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn compose_project_restrict_round_trip() {
    let a = json!({"space": "param", "t": 0, "n": 4, "k": 2, "data": [0, 1, 0, 1]});
    let b = json!({"space": "param", "t": 0, "n": 2, "k": 1, "data": [0, 0]});
    let fa = temp_json(&a);
    let fb = temp_json(&b);
    let (pa, pb) = (fa.path().to_str().unwrap(), fb.path().to_str().unwrap());
    let out = json_of(&trs(&["compose", "--space", "param", "--t", "0", pa, pb]));
    assert_eq!(out["result"]["data"], json!([0, 0, 0, 0]));

    let out = json_of(&trs(&["restrict", "--space", "param", "--t", "0", "--n", "1", pa]));
    assert_eq!(out["result"]["data"], json!([0]));

    let out = json_of(&trs(&["project", "--space", "param", "--t", "0", "--k", "1", pa]));
    assert_eq!(out["result"]["k"], 1);

    let mismatch = trs(&["compose", "--space", "param", "--t", "0", pb, pb]);
    assert_eq!(mismatch.status.code(), Some(1));
}

#[test]
fn s_approx_sequence_is_increasing() {
    let x = json!({"space": "param", "t": 1, "n": 4, "k": 1, "data": [0, 1, 0, 0]});
    let out = json_of(&trs(&["s-approx", "--space", "param", "--t", "1", &x.to_string()]));
    let seq = out["sequence"].as_array().unwrap();
    assert!(seq.len() >= 2);
    let lens: Vec<usize> = seq.iter().map(|v| v["data"].as_array().unwrap().len()).collect();
    assert!(lens.windows(2).all(|w| w[0] < w[1]), "{lens:?}");
    assert_eq!(seq.last().unwrap()["data"], x["data"]);
}

#[test]
fn search_exit_codes() {
    let found = trs(&["search", "--space", "param", "--t", "0", "--n", "5", "--coloring", "parity-len", "--min-width", "2"]);
    assert_eq!(found.status.code(), Some(0));
    let v = json_of(&found);
    assert_eq!(v["verified"], true);

    let exhausted = trs(&["search", "--space", "param", "--t", "0", "--n", "3", "--coloring", "parity-len", "--min-width", "3"]);
    assert_eq!(exhausted.status.code(), Some(2));

    let spent = trs(&["search", "--space", "param", "--t", "0", "--n", "5", "--coloring", "parity-len", "--min-width", "2", "--budget", "1"]);
    assert_eq!(spent.status.code(), Some(3));

    let bad = trs(&["search", "--space", "param", "--n", "3", "--mode", "pigeonhole", "--coloring", "constant"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn search_job_file_and_env_budget() {
    let job = json!({
        "mode": "projected",
        "space": {"name": "param", "t": 1},
        "bound": {"identity": 4},
        "k": 1,
        "coloring": "cylinder:2:parity-len"
    });
    let f = temp_json(&job);
    let out = trs(&["search", "--job", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["mode"], "projected");

    let limited = Command::new(env!("CARGO_BIN_EXE_trs"))
        .args(["search", "--job", f.path().to_str().unwrap()])
        .env("TRS_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(limited.status.code(), Some(3));
}

#[test]
fn seed_is_reported_as_ignored() {
    let out = trs(&["search", "--space", "param", "--t", "0", "--n", "5", "--min-width", "2", "--seed", "42"]);
    assert_eq!(json_of(&out)["seed_note"], "seed ignored: exhaustive mode");
}

#[test]
fn search_is_deterministic_across_threads() {
    let args = ["search", "--space", "gapw", "--m", "2", "--mode", "pigeonhole", "--n", "4", "--coloring", "support-parity"];
    let one = json_of(&trs(&[&args[..], &["--threads", "1"]].concat()));
    let four = json_of(&trs(&[&args[..], &["--threads", "4"]].concat()));
    assert_eq!(one["witness"], four["witness"]);
    assert_eq!(one["nodes_explored"], four["nodes_explored"]);
}

#[test]
fn hj_and_transfer() {
    let out = json_of(&trs(&["hj-search", "--alphabet", "ab", "--colors", "2", "--length", "1"]));
    assert_eq!(out["outcome"], "defeated");
    let out = json_of(&trs(&["hj-search", "--alphabet", "ab", "--colors", "2", "--length", "2"]));
    assert_eq!(out["colorings"], 16);

    let out = json_of(&trs(&["transfer", "--seq", "v,vv,0vv0", "--words", "v,vvv,0vv,00,v0vv0"]));
    let colors: Vec<u64> = out["words"].as_array().unwrap().iter().map(|w| w["color"].as_u64().unwrap()).collect();
    assert_eq!(colors, vec![1, 0, 1, 0, 0]);
}

#[test]
fn fin_gapw_round_trip() {
    let a = json!({"space": "gapw", "t": 1, "m": 2, "n": 3, "k": 2, "data": [0, 0, 0, 1, 1, 0, 0, 2]});
    let fin = json_of(&trs(&["fin-convert", "--to", "fin", &a.to_string()]));
    let back = json_of(&trs(&["fin-convert", "--to", "gapw", "--rows", "3", &fin["result"].to_string()]));
    assert_eq!(back["result"], a);
}

#[test]
fn echelon_subcommands() {
    let bad = json!({"space": "echelon", "q": 2, "rows": 2, "cols": 1, "entries": [0, 0]});
    let out = trs(&["echelon", "check", &bad.to_string()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["condition"], 1);

    let id = json!({"space": "echelon", "q": 2, "rows": 2, "cols": 2, "entries": [1, 0, 0, 1]});
    let col = json!({"space": "echelon", "q": 2, "rows": 2, "cols": 1, "entries": [1, 1]});
    let out = json_of(&trs(&["echelon", "compose", &id.to_string(), &col.to_string()]));
    assert_eq!(out["result"]["entries"], json!([1, 1]));
    let out = trs(&["echelon", "le", &col.to_string(), &id.to_string()]);
    assert_eq!(json_of(&out)["le"], true);
}

#[test]
fn gapw_symbol_encode_and_decode() {
    let a = json!({"space": "gapw", "t": 1, "m": 1, "n": 3, "k": 3, "data": [0, 1, 2, 3]});
    let f = json_of(&trs(&["gapw", "symbol-encode", "--terms", "1:1,0:2", &a.to_string()]));
    let back = json_of(&trs(&["gapw", "decode", &f["result"].to_string(), &a.to_string()]));
    assert_eq!(back["symbol"], json!([[1, 1], [0, 2]]));
}

#[test]
fn csv_unavailable_is_an_error() {
    let out = trs(&["hj-search", "--alphabet", "a", "--colors", "1", "--length", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
}
