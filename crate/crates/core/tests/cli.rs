use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_slicerank"));
    cmd.env_remove("SLICERANK_BUDGET");
    cmd
}

fn run(cmd: &mut Command) -> (Value, i32) {
    let out = cmd.output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let doc: Value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout}"));
    (doc, out.status.code().unwrap())
}

fn slicerank(args: &[&str]) -> (Value, i32) {
    run(bin().args(args))
}

struct Files(tempfile::TempDir);

impl Files {
    fn new() -> Self {
        Files(tempfile::tempdir().unwrap())
    }

    fn write(&self, name: &str, body: &str) -> PathBuf {
        let path = self.0.path().join(name);
        std::fs::write(&path, body).unwrap();
        path
    }
}

const SINGLE: &str = r#"{"p":2,"n":1,"triples":[{"a":[0],"b":[0],"c":[0]}]}"#;

#[test]
fn bound_examples() {
    let (v, code) = slicerank(&["bound", "--p", "3", "--n", "3", "--oracle"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["N"], "10");
    assert_eq!(v["result"]["threeN"], "30");
    assert_eq!(v["result"]["oracleAgrees"], true);

    let (v, code) = slicerank(&["bound", "--p", "2", "--n", "1"]);
    assert_eq!(code, 0);
    assert_eq!((v["result"]["N"].as_str(), v["result"]["threeN"].as_str()), (Some("1"), Some("3")));

    let (v, code) = slicerank(&["bound", "--p", "4", "--n", "2"]);
    assert_eq!(code, 2);
    assert!(v["error"].is_object());
}

#[test]
fn bound_growth_table() {
    let (v, code) = slicerank(&["bound", "--p", "3", "--n", "3", "--growth-max", "3"]);
    assert_eq!(code, 0);
    let rows = v["result"]["growth"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["N"], "10");
    assert_eq!(rows[2]["approxRoot"], "2.154434690032");
}

#[test]
fn big_bound_is_a_decimal_string() {
    let (v, code) = slicerank(&["bound", "--p", "3", "--n", "200"]);
    assert_eq!(code, 0);
    let n = v["result"]["N"].as_str().unwrap();
    assert!(n.len() > 20 && n.bytes().all(|b| b.is_ascii_digit()));
}

#[test]
fn verify_examples() {
    let files = Files::new();
    let ok = files.write("ok.json", SINGLE);
    let (v, code) = slicerank(&["verify", "--input", ok.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["valid"], true);
    assert_eq!(v["result"]["slack"], "2");

    let dup = files.write(
        "dup.json",
        r#"{"p":3,"n":1,"triples":[{"a":[1],"b":[1],"c":[1]},{"a":[1],"b":[1],"c":[1]}]}"#,
    );
    let (v, code) = slicerank(&["verify", "--input", dup.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["valid"], false);
    assert!(v["result"]["violation"].is_array());

    let truncated = files.write("bad.json", r#"{"p":2,"n":1,"triples":[{"a":[0],"#);
    let (v, code) = slicerank(&["verify", "--input", truncated.to_str().unwrap()]);
    assert_eq!(code, 2);
    let msg = v["error"]["message"].as_str().unwrap();
    assert!(msg.contains("line 1") && msg.contains("column"), "{msg}");

    let (_, code) = slicerank(&["verify", "--input", "/nonexistent/system.json"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_rejects_non_zero_sum() {
    let files = Files::new();
    let bad = files.write("bad.json", r#"{"p":3,"n":1,"triples":[{"a":[1],"b":[1],"c":[0]}]}"#);
    let (v, code) = slicerank(&["verify", "--input", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(v["error"]["message"].as_str().unwrap().contains("a + b + c = 0"));
}

#[test]
fn search_examples() {
    let (v, code) = slicerank(&["search", "--p", "2", "--n", "1", "--mode", "exhaustive"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["m"], 1);
    assert_eq!(v["result"]["bound3N"], "3");
    assert_eq!(v["result"]["complete"], true);

    let (v, code) = slicerank(&["search", "--p", "3", "--n", "1", "--mode", "exhaustive"]);
    assert_eq!(code, 0);
    assert!(v["result"]["m"].as_u64().unwrap() <= 3);
    assert_eq!(v["result"]["complete"], true);

    let (v, code) = slicerank(&["search", "--p", "3", "--n", "2", "--mode", "greedy", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["witnessValid"], true);

    // the emitted witness round-trips through verify
    let files = Files::new();
    let w = files.write("w.json", &v["result"]["witness"].to_string());
    let (v, code) = slicerank(&["verify", "--input", w.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["valid"], true);
}

#[test]
fn search_budget_reported_in_band() {
    let (v, code) = slicerank(&["search", "--p", "3", "--n", "2", "--mode", "exhaustive", "--budget", "100"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["complete"], false);

    let (v, code) = run(bin()
        .env("SLICERANK_BUDGET", "100")
        .args(["search", "--p", "3", "--n", "2", "--mode", "exhaustive"]));
    assert_eq!(code, 0);
    assert_eq!(v["result"]["complete"], false);
}

#[test]
fn decompose_examples() {
    let files = Files::new();
    let single = files.write("single.json", SINGLE);
    let (v, code) = slicerank(&["decompose", "--input", single.to_str().unwrap(), "--emit-slices"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["sliceCount"], 2);
    assert_eq!(v["result"]["bound3N"], "3");
    assert_eq!(v["result"]["pointwiseVerified"], true);
    let slices = v["result"]["decomposition"]["slices"].as_array().unwrap();
    assert_eq!(slices.len(), 1);
    assert_eq!(slices[0]["axis"], 1);

    let empty = files.write("empty.json", r#"{"p":3,"n":2,"triples":[]}"#);
    let (v, code) = slicerank(&["decompose", "--input", empty.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["sliceCount"], 0);

    let (v, code) = slicerank(&["search", "--p", "3", "--n", "2", "--mode", "greedy", "--seed", "3"]);
    assert_eq!(code, 0);
    let w = files.write("w.json", &v["result"]["witness"].to_string());
    let (v, code) = slicerank(&["decompose", "--input", w.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["pointwiseVerified"], true);
    let count = v["result"]["sliceCount"].as_u64().unwrap();
    assert!(count <= v["result"]["bound3N"].as_str().unwrap().parse::<u64>().unwrap());

    let (v, code) = slicerank(&["decompose", "--input", w.to_str().unwrap(), "--budget", "5"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "budget");
}

#[test]
fn slicerank_and_rank_examples() {
    let files = Files::new();
    let diag = files.write(
        "diag.json",
        r#"{"p":2,"k":3,"domainSize":2,"entries":[{"index":[1,1,1],"value":1},{"index":[2,2,2],"value":1}]}"#,
    );
    let (v, code) = slicerank(&["slicerank", "--tensor", diag.to_str().unwrap(), "--max-rank", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["rank"], 2);
    assert_eq!(v["result"]["triangular"], true);
    assert_eq!(v["result"]["lowerBound"], 2);

    let (v, _) = slicerank(&["slicerank", "--tensor", diag.to_str().unwrap(), "--max-rank", "1"]);
    assert_eq!(v["result"]["rank"], ">1");

    let off = files.write(
        "off.json",
        r#"{"p":2,"k":3,"domainSize":2,"entries":[{"index":[2,1,2],"value":1}]}"#,
    );
    let (v, code) = slicerank(&["slicerank", "--tensor", off.to_str().unwrap(), "--max-rank", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["triangular"], false);
    assert_eq!(v["result"]["witness"], serde_json::json!([2, 1, 2]));
    assert_eq!(v["result"]["lowerBound"], Value::Null);

    let big = files.write("big.json", r#"{"p":3,"k":3,"domainSize":3,"entries":[]}"#);
    let (v, code) = slicerank(&["slicerank", "--tensor", big.to_str().unwrap(), "--max-rank", "3"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "unsupported");

    let upper = files.write("upper.json", r#"{"p":3,"rows":[[1,2,0],[0,2,1],[0,0,1]]}"#);
    let (v, code) = slicerank(&["rank", "--matrix", upper.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["rank"], 3);
    assert_eq!(v["result"]["triangular"], true);

    let singular = files.write(
        "singular.json",
        r#"{"p":3,"k":2,"domainSize":2,"entries":[{"index":[1,1],"value":1},{"index":[1,2],"value":2},{"index":[2,1],"value":2},{"index":[2,2],"value":1}]}"#,
    );
    let (v, code) = slicerank(&["rank", "--matrix", singular.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["rank"], 1);
}

#[test]
fn output_is_deterministic_apart_from_timing() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("elapsedMillis");
        v.to_string()
    };
    for args in [
        vec!["search", "--p", "3", "--n", "2", "--mode", "greedy", "--seed", "11"],
        vec!["search", "--p", "2", "--n", "2", "--mode", "exhaustive"],
        vec!["--threads", "1", "search", "--p", "3", "--n", "2", "--mode", "exhaustive"],
        vec!["bound", "--p", "5", "--n", "6", "--oracle", "--growth-max", "6"],
    ] {
        let (a, _) = slicerank(&args);
        let (b, _) = slicerank(&args);
        assert_eq!(strip(a), strip(b), "{args:?}");
    }
}

#[test]
fn report_envelope() {
    let (v, _) = slicerank(&["bound", "--p", "2", "--n", "1"]);
    let obj = v.as_object().unwrap();
    for key in ["command", "parameters", "result", "elapsedMillis", "version"] {
        assert!(obj.contains_key(key), "{key}");
    }
    assert_eq!(v["parameters"]["p"], 2);
}

#[test]
fn large_oracle_behind_flag() {
    let files = Files::new();
    let diag = files.write(
        "diag3.json",
        r#"{"p":2,"k":3,"domainSize":3,"entries":[{"index":[1,1,1],"value":1},{"index":[2,2,2],"value":1},{"index":[3,3,3],"value":1}]}"#,
    );
    let path = diag.to_str().unwrap();
    let (v, code) = slicerank(&["slicerank", "--tensor", path, "--max-rank", "3"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "unsupported");

    let (v, code) = slicerank(&["slicerank", "--tensor", path, "--max-rank", "3", "--large"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["rank"], 3);
    assert_eq!(v["result"]["lowerBound"], 3);
}
