use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chabauty"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

#[test]
fn classify_answers() {
    assert_eq!(code(&["classify", "RxQp(3)"]), 0);
    let v = json(&["classify", "R^2", "--json"]);
    assert_eq!(v["answer"], false);
    assert_eq!(v["schema"], "chabauty/verdict/v1");
    assert!(v["trace"].as_array().unwrap().iter().any(|s| s["cite"] == "vector-rank-obstruction"));
    assert_eq!(code(&["classify", "R^2"]), 1);
    assert_eq!(code(&["classify", "R x Z(2)", "--mode", "numeral"]), 1);
    assert_eq!(code(&["classify", "Q", "--mode", "compact-free"]), 0);
}

#[test]
fn witness_plan_attached() {
    let v = json(&["classify", "R x Z(3)", "--witness", "--json"]);
    assert_eq!(v["witnessPlan"]["kind"], "zn-recipe");
    assert_eq!(v["witnessPlan"]["modulus"], 3);
    assert_eq!(code(&["witness", "Z x Z"]), 1);
}

#[test]
fn dual_of_circle() {
    let out = run(&["dual", "T"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "Z");
    assert_eq!(code(&["dual", "BohrR"]), 1);
}

#[test]
fn structure_json() {
    let v = json(&["structure", "R x Z(4)", "--json"]);
    assert_eq!(v["vectorRank"], 1);
    assert_eq!(v["flags"]["compact"], false);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&["classify", "R x ("]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["lab", "probe", "--group", "R x Z(2)", "--eps", "abc"]), 2);
    assert_eq!(code(&["lab", "limit", "--group", "R", "--seq", "nope"]), 2);
    let v = json(&["classify", "Zp(1)", "--json"]);
    assert_eq!(v["exitCode"], 2);
    assert_eq!(v["schema"], "chabauty/error/v1");
}

#[test]
fn borderline_exits_3() {
    // n = 6 sits inside the margin at ε = 1/10
    let args = ["lab", "limit", "--group", "R", "--seq", "inv-lattice", "--rho", "10", "--eps", "0.1", "--nmax", "6"];
    assert_eq!(code(&args), 3);
}

#[test]
fn lab_commands() {
    let v = json(&[
        "lab", "limit", "--group", "RxZ(3)", "--seq", "zn", "--target", "full", "--rho", "5", "--eps", "0.1",
        "--nmax", "40", "--json",
    ]);
    assert_eq!(v["threshold"]["n0"], 20);
    assert_eq!(code(&["lab", "probe", "--group", "RxZ(2)^2", "--rho", "3", "--eps", "0.25", "--denom-bound", "24"]), 1);
    assert_eq!(code(&["lab", "probe", "--group", "RxZ(5)"]), 0);
    assert_eq!(code(&["lab", "probe", "--group", "R^2"]), 1);
    let v = json(&["lab", "duality", "--finite", "Z(2)xZ(4)", "--json"]);
    assert_eq!(v["subgroups"].as_array().unwrap().len(), 8);
    assert_eq!(v["involution"], true);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = std::env::temp_dir().join(format!("chabauty-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("defaults.conf");
    std::fs::write(&path, "rho = 10\neps = 0.1\nnmax = 20\n").unwrap();
    let p = path.to_str().unwrap();
    let v = json(&["lab", "limit", "--group", "R", "--seq", "inv-lattice", "--config", p, "--json"]);
    assert_eq!(v["threshold"]["n0"], 7);
    assert_eq!(v["nMax"], 20);
    std::fs::write(&path, "colour = red\n").unwrap();
    assert_eq!(code(&["dual", "T", "--config", p]), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn selftest_single_check() {
    let v = json(&["selftest", "--only", "1", "--json"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"][0]["id"], 1);
    assert_eq!(code(&["selftest", "--only", "12"]), 2);
}

#[test]
fn every_document_names_a_checked_in_schema() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas");
    let runs: [&[&str]; 6] = [
        &["classify", "R", "--json"],
        &["dual", "T", "--json"],
        &["structure", "T", "--json"],
        &["witness", "Q", "--json"],
        &["lab", "probe", "--group", "R^2", "--json"],
        &["classify", ")", "--json"],
    ];
    for args in runs {
        let v = json(args);
        let name = v["schema"].as_str().unwrap();
        let kind = name.strip_prefix("chabauty/").unwrap().replace("/v", ".v");
        let text = std::fs::read_to_string(dir.join(format!("{kind}.json"))).unwrap_or_else(|e| panic!("{name}: {e}"));
        let schema: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(schema["properties"]["schema"]["const"], name);
    }
}
