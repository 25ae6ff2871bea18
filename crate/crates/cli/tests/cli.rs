//! End-to-end checks of the binary: exit codes, file formats, output JSON.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_simplex-sidon"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

struct Fixtures {
    dir: PathBuf,
}

impl Fixtures {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("simplex-sidon-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Fixtures { dir }
    }

    fn write(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }
}

impl Drop for Fixtures {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.dir);
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn verify_bh_exit_codes_and_witness() {
    let fx = Fixtures::new("verify");
    let group = fx.write("g.json", r#"{"factors":[7]}"#);
    let good = fx.write("good.json", r#"{"group":{"factors":[7]},"elements":[[0],[1],[3]]}"#);
    let bad = fx.write("bad.json", r#"{"group":{"factors":[7]},"elements":[[0],[1],[2]]}"#);

    let out = run(&["verify", "bh", "--group", p(&group), "--set", p(&good), "--h", "2"]);
    assert_eq!(code(&out), 0, "stdout: {}", stdout(&out));
    assert!(stdout(&out).contains("\"is_bh_set\":true"));

    let out = run(&["verify", "bh", "--group", p(&group), "--set", p(&bad), "--h", "2"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("\"is_bh_set\":false"));
    assert!(text.contains("\"witness\""), "witness missing: {text}");

    // Group/set disagreement is a data error.
    let other = fx.write("other.json", r#"{"factors":[11]}"#);
    let out = run(&["verify", "bh", "--group", p(&other), "--set", p(&good), "--h", "2"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_basis_and_genbasis() {
    let fx = Fixtures::new("basis");
    let group = fx.write("g.json", r#"{"factors":[7]}"#);
    let set = fx.write("s.json", r#"{"group":{"factors":[7]},"elements":[[0],[1],[3]]}"#);

    let out = run(&["verify", "basis", "--group", p(&group), "--set", p(&set), "--h", "2"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("\"unreachable\":[5]"));

    let out = run(&["verify", "genbasis", "--group", p(&group), "--set", p(&set), "--r", "1", "--t", "1"]);
    assert_eq!(code(&out), 0);

    let full = fx.write("full.json", r#"{"group":{"factors":[7]},"elements":[[0],[1],[3],[5]]}"#);
    let out = run(&["verify", "basis", "--group", p(&group), "--set", p(&full), "--h", "2"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn verify_arrangement_classifies() {
    let fx = Fixtures::new("arrangement");
    let tiling = fx.write("l7.json", r#"{"n":2,"basis":[[7,0],[4,1]]}"#);
    let out = run(&["verify", "arrangement", "--shape", "diff:n=2,r=1,t=1", "--lattice", p(&tiling)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("\"class\":\"tiling\""));

    let out = run(&["verify", "arrangement", "--shape", "simplex:n=2,h=2", "--lattice", p(&tiling)]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("\"class\":\"packing-only\""));
}

#[test]
fn hnf_and_snf_commands() {
    let fx = Fixtures::new("linalg");
    let m = fx.write("m.json", r#"{"n":2,"basis":[[7,0],[-3,1]]}"#);

    let out = run(&["hnf", "--matrix", p(&m)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), r#"{"n":2,"basis":[[7,0],[4,1]]}"#);

    let out = run(&["snf", "--matrix", p(&m)]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["d"], serde_json::json!([1, 7]));

    let singular = fx.write("sing.json", r#"{"n":2,"basis":[[1,1],[1,1]]}"#);
    let out = run(&["hnf", "--matrix", p(&singular)]);
    assert_eq!(code(&out), 2);
}

#[test]
fn convert_commands_roundtrip() {
    let fx = Fixtures::new("convert");
    let group = fx.write("g.json", r#"{"factors":[7]}"#);
    let set = fx.write("s.json", r#"{"group":{"factors":[7]},"elements":[[0],[1],[3]]}"#);

    let out = run(&["convert", "bh-to-lattice", "--group", p(&group), "--set", p(&set), "--h", "2"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["lattice"]["basis"], serde_json::json!([[7, 0], [4, 1]]));

    let lattice = fx.write("l.json", &v["lattice"].to_string());
    let out = run(&["convert", "lattice-to-bh", "--lattice", p(&lattice), "--h", "2"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["group"]["factors"], serde_json::json!([7]));
    assert_eq!(v["verdict"]["is_bh_set"], serde_json::json!(true));

    // A non-B_h input is a negative verdict for the converter.
    let bad = fx.write("bad.json", r#"{"group":{"factors":[7]},"elements":[[0],[1],[2]]}"#);
    let out = run(&["convert", "bh-to-lattice", "--group", p(&group), "--set", p(&bad), "--h", "2"]);
    assert_eq!(code(&out), 2);

    let out = run(&["convert", "basis-to-lattice", "--group", p(&group), "--set",
        p(&fx.write("basis.json", r#"{"group":{"factors":[7]},"elements":[[0],[1],[3],[5]]}"#)),
        "--h", "2"]);
    assert_eq!(code(&out), 0);

    let out = run(&["convert", "lattice-to-basis", "--lattice", p(&lattice), "--h", "2"]);
    assert_eq!(code(&out), 2, "packing-only lattice cannot convert to a basis");
}

#[test]
fn discretize_command() {
    let fx = Fixtures::new("discretize");
    let basis = fx.write("v.json", r#"{"n":2,"basis":[["7/4","0"],[1,"1/4"]]}"#);
    let out = run(&["discretize", "--basis", p(&basis), "--h", "4", "--eps", "0"]);
    assert_eq!(code(&out), 1, "full simplex cannot pack at determinant 7");
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["lattice"]["basis"], serde_json::json!([[7, 0], [4, 1]]));

    let identity = fx.write("id.json", r#"{"n":2,"basis":[[1,0],[0,1]]}"#);
    let out = run(&["discretize", "--basis", p(&identity), "--h", "3", "--eps", "1/3"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["density"], serde_json::json!("2/3"));

    let scaled = fx.write("scan.json", r#"{"n":2,"basis":[["19/4","0"],["-2","1/4"]]}"#);
    let out = run(&["discretize", "--basis", p(&scaled), "--h", "8", "--eps", "0", "--scan"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["h"], serde_json::json!(2));

    let out = run(&["discretize", "--basis", p(&identity), "--h", "6", "--eps", "0", "--scan"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("\"h\":null"));
}

#[test]
fn bounds_command_table_values() {
    let out = run(&["bounds", "--h", "10", "--n", "3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for needle in ["= 90", "ceil=454", "= 1331"] {
        assert!(text.contains(needle), "missing {needle} in:\n{text}");
    }
    let out = run(&["bounds", "--h", "4", "--n", "2", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!(v["entries"].as_array().unwrap().len() > 5);
}

#[test]
fn search_commands_and_budget_exit() {
    let out = run(&["search", "phi", "--h", "4", "--n", "2"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["value"], serde_json::json!(19));

    let out = run(&["search", "tiling", "--shape", "simplex:n=2,h=2"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("not_found"));

    let out = run(&["search", "phi", "--h", "4", "--n", "2", "--budget", "5"]);
    assert_eq!(code(&out), 3);

    let out = bin()
        .env("SIMPLEX_SIDON_BUDGET", "5")
        .args(["search", "phi", "--h", "4", "--n", "2"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 3, "environment budget must apply");

    let out = bin()
        .env("SIMPLEX_SIDON_BUDGET", "5")
        .args(["search", "phi", "--h", "4", "--n", "2", "--budget", "100000000"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "explicit flag overrides the environment");
}

#[test]
fn construct_commands() {
    let out = run(&["construct", "bh", "--n", "2", "--h", "4"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["value"], serde_json::json!(19));

    let out = run(&["construct", "tiling", "--n", "2", "--r", "3", "--t", "2"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["value"], serde_json::json!(27));

    let out = run(&["construct", "bh", "--n", "4", "--h", "3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn catalog_append_list_regen() {
    let fx = Fixtures::new("catalog");
    let cat = fx.path("certs.jsonl");
    let out = run(&["search", "phi", "--h", "2", "--n", "2", "--catalog", p(&cat)]);
    assert_eq!(code(&out), 0);
    let out = run(&["search", "psi", "--h", "2", "--n", "2", "--catalog", p(&cat)]);
    assert_eq!(code(&out), 0);

    let out = run(&["catalog", "list", "--catalog", p(&cat)]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("value=7") && text.contains("value=5"));

    let out = run(&["catalog", "regen"]);
    assert_eq!(code(&out), 0, "regen must match the shipped catalog: {}", stdout(&out));
    assert_eq!(stdout(&out).lines().count(), 11);
}

#[test]
fn render_command_is_deterministic() {
    let fx = Fixtures::new("render");
    let lattice = fx.write("l7.json", r#"{"n":2,"basis":[[7,0],[4,1]]}"#);
    let a = run(&["render", "--shape", "diff:n=2,r=1,t=1", "--lattice", p(&lattice), "--window", "-8:8,-8:8"]);
    let b = run(&["render", "--shape", "diff:n=2,r=1,t=1", "--lattice", p(&lattice), "--window", "-8:8,-8:8"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).starts_with("<svg"));

    let out = run(&["render", "--shape", "simplex:n=3,h=1", "--lattice", p(&lattice), "--window", "0:1,0:1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["search", "phi", "--h", "4"]);
    assert_eq!(code(&out), 2);
    let out = run(&["no-such-command"]);
    assert_eq!(code(&out), 2);
    let out = run(&["verify", "arrangement", "--shape", "bogus:n=2", "--lattice", "/nonexistent"]);
    assert_eq!(code(&out), 2);
}
