use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qpart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpart")).args(args).output().unwrap()
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data")
        .join(name)
}

fn json(bytes: &[u8]) -> serde_json::Value {
    serde_json::from_slice(bytes).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn cost_of_the_worked_example() {
    let out = qpart(&[
        "cost",
        "--circuit",
        s(&data("worked_circuit.json")),
        "--network",
        s(&data("worked_network.json")),
        "--schedule",
        s(&data("worked_schedule.json")),
    ]);
    assert!(out.status.success());
    let v = json(&out.stdout);
    assert_eq!(v, json(&fs::read(data("worked_cost.json")).unwrap()));
    assert_eq!(v["total"], 8);
}

#[test]
fn generators_are_deterministic_and_feed_the_oracle() {
    let tmp = tempfile::tempdir().unwrap();
    let c = tmp.path().join("c.json");
    let n = tmp.path().join("n.json");
    assert!(qpart(&[
        "gen-circuit",
        "--qubits",
        "3",
        "--depth",
        "3",
        "--cx-fraction",
        "0.6",
        "--seed",
        "4",
        "--out",
        s(&c)
    ])
    .status
    .success());
    let again = qpart(&[
        "gen-circuit",
        "--qubits",
        "3",
        "--depth",
        "3",
        "--cx-fraction",
        "0.6",
        "--seed",
        "4",
    ]);
    assert_eq!(again.stdout, fs::read(&c).unwrap());
    assert!(qpart(&[
        "gen-network",
        "--topology",
        "star",
        "--nodes",
        "3",
        "--cap-min",
        "1",
        "--cap-max",
        "2",
        "--min-total",
        "4",
        "--seed",
        "2",
        "--out",
        s(&n)
    ])
    .status
    .success());
    let net = json(&fs::read(&n).unwrap());
    assert_eq!(net["topology"]["kind"], "star");
    assert!(
        net["capacities"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.as_u64().unwrap())
            .sum::<u64>()
            >= 4
    );

    let out = qpart(&["oracle", "--circuit", s(&c), "--network", s(&n)]);
    assert!(out.status.success());
    let v = json(&out.stdout);
    assert_eq!(v["states"], 19683);
    assert_eq!(v["schedule"]["assign"].as_array().unwrap().len(), 3);
}

#[test]
fn grid_network_uses_square_layout() {
    let out = qpart(&[
        "gen-network",
        "--topology",
        "grid",
        "--nodes",
        "25",
        "--cap-min",
        "2",
        "--cap-max",
        "5",
        "--seed",
        "1",
    ]);
    assert!(out.status.success());
    let v = json(&out.stdout);
    assert_eq!(v["topology"], serde_json::json!({"kind": "grid", "rows": 5, "cols": 5}));
}

#[test]
fn run_writes_outputs_and_prints_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{
            "circuit": {"generate": {"qubits": 8, "depth": 10, "seed": 1}},
            "network": {"generate": {"topology": "ring", "nodes": 4, "cap_min": 2, "cap_max": 3, "seed": 1}},
            "sa": {"max_iterations": 200},
            "seeds": [1, 2],
            "output_dir": "out"
        }"#,
    )
    .unwrap();
    let out = qpart(&["run", "--config", s(&cfg)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out.stdout);
    assert_eq!(v["results"]["solvers"][0]["id"], "sa");
    assert!(tmp.path().join("out/summary.json").exists());
    assert!(tmp.path().join("out/traces/sa_seed2.csv").exists());
}

#[test]
fn failures_emit_json_on_stderr() {
    let out = qpart(&[
        "oracle",
        "--circuit",
        "/nonexistent/c.json",
        "--network",
        "/nonexistent/n.json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let v = json(&out.stderr);
    assert_eq!(v["error"]["kind"], "io");

    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.json");
    fs::write(&bad, "{\"n\": 2, \"gates\": [[\"cx\", 0]]}").unwrap();
    let out = qpart(&[
        "oracle",
        "--circuit",
        s(&bad),
        "--network",
        s(&data("worked_network.json")),
    ]);
    assert_eq!(json(&out.stderr)["error"]["kind"], "parse");

    let out = qpart(&["gen-circuit", "--qubits", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out.stderr)["error"]["kind"], "usage");

    let out = qpart(&[
        "gen-network",
        "--topology",
        "ring",
        "--nodes",
        "3",
        "--cap-min",
        "5",
        "--cap-max",
        "2",
    ]);
    assert!(!out.status.success());
    assert!(json(&out.stderr)["error"]["kind"].is_string());
}

#[test]
fn help_exits_zero() {
    let out = qpart(&["--help"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("gen-network"));
}
