use std::process::{Command, Output};

use qdswap_core::experiments::{trace_header, EXPERIMENT_HEADER};

fn qdswap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdswap"))
        .args(args)
        .output()
        .expect("spawn qdswap")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn malformed_basis_string_is_rejected() {
    for bad in ["0x1", "01", "0101", ""] {
        let out = qdswap(&["trace", "--initial", bad]);
        assert!(!out.status.success(), "{bad:?} accepted");
        assert!(String::from_utf8_lossy(&out.stderr).contains("3-bit"));
    }
}

#[test]
fn bad_arguments_exit_nonzero() {
    let cases: &[&[&str]] = &[
        &["experiment", "random", "--n", "0"],
        &["experiment", "phase", "--grid", "1"],
        &["trace", "--initial", "000", "--samples", "1"],
        &["truth-table", "--target", "4"],
        &["truth-table", "--gate", "s", "--target", "2"],
        &["run", "--phi1", "1", "--phi2", "0,0"],
        &["truth-table", "--mode", "quantum"],
        &["truth-table", "--params", "/nonexistent/params.toml"],
    ];
    for args in cases {
        let out = qdswap(args);
        assert!(!out.status.success(), "{args:?} succeeded");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn trace_csv_layout() {
    let out = qdswap(&["trace", "--initial", "000", "--samples", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], trace_header());
    assert_eq!(lines[0], "t_ns,p000,p001,p010,p011,p100,p101,p110,p111");
    assert_eq!(lines.len(), 6);
    let last: Vec<f64> = lines[5].split(',').map(|c| c.parse().unwrap()).collect();
    assert!(last[5] > 0.99);
}

#[test]
fn experiment_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("random.csv");
    let out = qdswap(&[
        "experiment",
        "random",
        "--n",
        "20",
        "--seed",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().next().unwrap(), EXPERIMENT_HEADER);
    assert_eq!(csv.lines().count(), 21);
    let meta: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("random.csv.meta.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(meta["seed"], 5);
    assert_eq!(meta["mode"], "physical");
    assert_eq!(meta["summary"]["count"], 20);
    assert!(meta["generator"].as_str().unwrap().contains("ChaCha8"));
}

#[test]
fn params_file_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.toml");
    let preset = qdswap_core::DeviceParams::preset();
    std::fs::write(&path, preset.to_param_string()).unwrap();
    let with_file = qdswap(&["truth-table", "--params", path.to_str().unwrap()]);
    let default = qdswap(&["truth-table"]);
    assert!(with_file.status.success());
    assert_eq!(with_file.stdout, default.stdout);

    std::fs::write(&path, "eps1 = 0\nbogus = 1\n").unwrap();
    assert!(
        !qdswap(&["truth-table", "--params", path.to_str().unwrap()])
            .status
            .success()
    );
}

#[test]
fn run_reports_ideal_fidelity() {
    let out = qdswap(&[
        "run", "--mode", "ideal", "--phi1", "1.0,0.3", "--phi2", "1.0,0.3",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let estimate: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("estimate = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((estimate - 1.0).abs() < 1e-10);
}

#[test]
fn ideal_s_truth_table_swaps_when_auxiliary_is_zero() {
    let out = qdswap(&["truth-table", "--gate", "s", "--mode", "ideal"]);
    let text = stdout(&out);
    assert!(text.contains("|001> -> (-1.000000+0.000000i)|010>"));
    assert!(text.contains("|100> -> (+1.000000+0.000000i)|100>"));
}
