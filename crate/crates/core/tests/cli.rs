use std::path::Path;
use std::process::{Command, Output};

const GOLDEN_TEXT: &str = include_str!("golden/estimate_default.txt");
const GOLDEN_JSON: &str = include_str!("golden/estimate_default.json");

fn forge(args: &[&str], config: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_keccak-forge"));
    cmd.args(args).env_remove("KECCAK_FORGE_CONFIG");
    if let Some(p) = config {
        cmd.env("KECCAK_FORGE_CONFIG", p);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn estimate_default_matches_golden_files() {
    let text = forge(&["estimate"], None);
    assert_eq!(text.status.code(), Some(0));
    assert_eq!(stdout(&text), GOLDEN_TEXT);
    let json = forge(&["estimate", "--format", "json"], None);
    assert_eq!(stdout(&json), GOLDEN_JSON);
}

#[test]
fn estimate_json_is_reproducible() {
    let args = [
        "estimate",
        "--format",
        "json",
        "--counting-mode",
        "exact",
        "--seed",
        "7",
        "--lane-width",
        "8",
    ];
    let a = forge(&args, None);
    let b = forge(&args, None);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let c = forge(
        &[
            "estimate",
            "--format",
            "json",
            "--counting-mode",
            "exact",
            "--seed",
            "8",
            "--lane-width",
            "8",
        ],
        None,
    );
    // the seed only picks the target; counts and verdicts do not move
    let (va, vc): (serde_json::Value, serde_json::Value) = (
        serde_json::from_slice(&a.stdout).unwrap(),
        serde_json::from_slice(&c.stdout).unwrap(),
    );
    assert_eq!(va["table1"], vc["table1"]);
    assert_ne!(va["inputs"]["seed"], vc["inputs"]["seed"]);
}

#[test]
fn formats_carry_the_same_figures() {
    let json: serde_json::Value =
        serde_json::from_slice(&forge(&["estimate", "--format", "json"], None).stdout).unwrap();
    let csv = stdout(&forge(&["estimate", "--format", "csv"], None));
    let text = stdout(&forge(&["estimate", "--format", "text"], None));

    assert_eq!(json["counts"]["oracle"]["toffoli_count"], 9600);
    assert_eq!(json["counts"]["gates_per_oracle"], 96_000);
    assert_eq!(json["scenarios"][0]["physical_qubits"], 3_200_000);
    let iterations = json["grover"]["estimate"]["iterations"].as_u64().unwrap();

    assert!(csv.contains("counts,oracle,toffoli,9600"));
    assert!(csv.contains("counts,oracle,gates_per_oracle,96000"));
    assert!(csv.contains("scenario,optimistic,physical_qubits,3200000"));
    assert!(csv.contains(&format!("grover,search,iterations,{iterations}")));

    assert!(text.contains("9,600"));
    assert!(text.contains("96,000"));
    assert!(text.contains("3,200,000"));
    let grouped = iterations
        .to_string()
        .as_bytes()
        .rchunks(3)
        .rev()
        .map(|c| std::str::from_utf8(c).unwrap())
        .collect::<Vec<_>>()
        .join(",");
    assert!(text.contains(&grouped));
}

#[test]
fn qec_overhead_flag_scales_physical_qubits() {
    let o = forge(&["estimate", "--qec-overhead", "10000", "--format", "csv"], None);
    assert!(stdout(&o).contains("scenario,conservative,physical_qubits,32000000"));
}

#[test]
fn scenario_selection() {
    let o = forge(&["estimate", "--scenario", "conservative", "--format", "json"], None);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["scenarios"].as_array().unwrap().len(), 1);
    assert_eq!(v["scenarios"][0]["scenario"]["name"], "conservative");
    assert_eq!(
        forge(&["estimate", "--scenario", "pessimistic"], None).status.code(),
        Some(2)
    );
}

#[test]
fn synth_writes_netlist_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.net");
    let o = forge(
        &[
            "synth",
            "--lane-width",
            "64",
            "--rounds",
            "3",
            "--strategy",
            "paper",
            "--out",
            path.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("toffoli=9600"), "{}", stdout(&o));
    assert!(stdout(&o).contains("wires=3200"));
    let net = std::fs::read_to_string(&path).unwrap();
    assert_eq!(net.lines().filter(|l| l.starts_with("CCX")).count(), 9600);

    let o = forge(&["synth", "--lane-width", "1", "--rounds", "0"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("toffoli=0"));
    assert!(!stdout(&o)
        .lines()
        .any(|l| l.starts_with("CCX") || l.starts_with("CNOT") || l.starts_with("X ")));

    assert_eq!(forge(&["synth", "--lane-width", "3"], None).status.code(), Some(2));
    assert_eq!(forge(&["synth", "--rounds", "25"], None).status.code(), Some(2));
}

#[test]
fn verify_contract() {
    let o = forge(
        &[
            "verify",
            "--strategy",
            "verified",
            "--lane-width",
            "8",
            "--rounds",
            "3",
            "--trials",
            "100",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for check in ["equivalence", "ancilla_clean", "reversibility"] {
        assert_eq!(v["checks"][check]["pass"], true, "{check}");
        assert_eq!(v["checks"][check]["trials"], 100);
    }

    let o = forge(
        &[
            "verify",
            "--strategy",
            "paper",
            "--lane-width",
            "8",
            "--rounds",
            "3",
            "--check",
            "equivalence",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let cex = v["checks"]["equivalence"]["counterexample"].as_str().unwrap();
    // state and ancilla registers, 200 wires each
    assert_eq!(cex.len(), 2 * 400 / 8);

    // the counting model is still clean and reversible
    let o = forge(
        &[
            "verify",
            "--strategy",
            "paper",
            "--lane-width",
            "8",
            "--check",
            "ancilla,reversibility",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));

    assert_eq!(forge(&["verify", "--trials", "0"], None).status.code(), Some(2));
    assert_eq!(forge(&["verify", "--check", "bogus"], None).status.code(), Some(2));
}

#[test]
fn verify_and_simulate_a_saved_netlist() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.net");
    let p = path.to_str().unwrap();
    let o = forge(
        &[
            "synth",
            "--lane-width",
            "4",
            "--rounds",
            "2",
            "--strategy",
            "verified",
            "--out",
            p,
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let check = [
        "verify",
        "--lane-width",
        "4",
        "--rounds",
        "2",
        "--netlist",
        p,
        "--trials",
        "200",
        "--check",
    ];
    let o = forge(&[&check[..], &["equivalence,reversibility"]].concat(), None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    // a forward pass alone leaves its scratch registers dirty
    assert_eq!(forge(&[&check[..], &["ancilla"]].concat(), None).status.code(), Some(1));

    let oracle = dir.path().join("oracle.net");
    let q = oracle.to_str().unwrap();
    let o = forge(
        &[
            "synth",
            "--lane-width",
            "4",
            "--rounds",
            "2",
            "--strategy",
            "verified",
            "--include-inverse",
            "--digest-width",
            "16",
            "--out",
            q,
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let o = forge(
        &[
            "verify",
            "--lane-width",
            "4",
            "--rounds",
            "2",
            "--netlist",
            q,
            "--check",
            "ancilla,reversibility",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // simulate: wires beyond the state start at zero, so the state part of
    // the output equals the reference permutation
    let state_hex = stdout(&forge(&["permute", "--lane-width", "4", "--rounds", "2"], None));
    let netlist = std::fs::read_to_string(&path).unwrap();
    let wires: usize = netlist
        .lines()
        .find_map(|l| l.strip_prefix("WIRES "))
        .unwrap()
        .parse()
        .unwrap();
    let sim = forge(&["simulate", "--netlist", p], None);
    assert_eq!(sim.status.code(), Some(0));
    let out = stdout(&sim);
    assert_eq!(out.trim().len(), 2 * wires.div_ceil(8));
    let state = keccak_forge::sim::BasisState::from_hex(wires, out.trim())
        .unwrap()
        .slice(0..100);
    assert_eq!(state.to_hex(), state_hex.trim());

    std::fs::write(&path, "WIRES 2\nREG q 0 2\nCCX 0 0 1\n").unwrap();
    let o = forge(&["simulate", "--netlist", p], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn grover_demo_contract() {
    let o = forge(
        &["grover-demo", "--n", "4", "--marked", "0xB", "--format", "json"],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    assert_eq!(v["peak"]["k"], 3);
    assert!(v["max_abs_diff"].as_f64().unwrap() < 1e-8);

    let o = forge(&["grover-demo", "--n", "2", "--format", "json"], None);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["peak"]["k"], 1);
    assert!((v["peak"]["probability"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    assert_eq!(forge(&["grover-demo", "--n", "21"], None).status.code(), Some(2));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("forge.toml");
    std::fs::write(
        &cfg,
        "qec-overhead = 10000\nformat = \"csv\"\nscenario = [\"optimistic\"]\n\
         [thresholds.physical_qubits]\nnisq = { min = 1.0, max = 1e9 }\ninfeasible = \"SEVERE\"\n",
    )
    .unwrap();
    let out = stdout(&forge(&["estimate"], Some(&cfg)));
    assert!(out.contains("scenario,optimistic,physical_qubits,32000000"), "{out}");
    assert!(!out.contains("scenario,conservative"));
    assert!(out.contains("table1,Physical Qubits (with QEC),verdict,FEASIBLE"));

    let out = stdout(&forge(&["estimate", "--qec-overhead", "1000"], Some(&cfg)));
    assert!(out.contains("scenario,optimistic,physical_qubits,3200000"));

    std::fs::write(&cfg, "no-such-key = 1\n").unwrap();
    assert_eq!(forge(&["estimate"], Some(&cfg)).status.code(), Some(2));
    assert_eq!(
        forge(&["estimate"], Some(&dir.path().join("missing.toml")))
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn help_succeeds() {
    let o = forge(&["--help"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("grover-demo"));
    assert_eq!(forge(&[], None).status.code(), Some(2));
}
