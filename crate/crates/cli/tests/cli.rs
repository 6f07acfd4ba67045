//! End-to-end tests of the `provchain` binary: exit codes, output shapes,
//! and determinism of the file-level contract.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use provchain_core::curve_crypto::{derive_address, Point, U256};
use provchain_core::ledger_core::{read_ledger_file, ChainStore, LedgerRecord};

fn provchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_provchain"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).to_string()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).to_string()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

/// Run the default 5-node, 10-product scenario into `dir` and return the
/// node-0 ledger path.
fn run_fixture(dir: &Path, extra: &[&str]) -> PathBuf {
    let config = dir.join("scenario.cfg");
    fs::write(&config, "").unwrap();
    let out_dir = dir.join("out");
    let mut args = vec![
        "run",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let output = provchain(&args);
    assert_eq!(code(&output), 0, "run failed: {}", stderr(&output));
    out_dir.join("node_0.ndjson")
}

#[test]
fn keygen_is_deterministic_and_self_consistent() {
    let seed = "00000000000000000000000000000000000000000000000000000000000000aa";
    let first = provchain(&["keygen", "--seed", seed]);
    let second = provchain(&["keygen", "--seed", seed]);
    assert_eq!(code(&first), 0);
    assert_eq!(stdout(&first), stdout(&second));

    // The printed address equals derive_address of the printed point.
    let text = stdout(&first);
    let field = |name: &str| -> String {
        text.lines()
            .find(|l| l.starts_with(name))
            .unwrap_or_else(|| panic!("{name} missing"))
            .split_whitespace()
            .last()
            .unwrap()
            .to_string()
    };
    let x = U256::from_hex(&field("public_key_x:")).unwrap();
    let y = U256::from_hex(&field("public_key_y:")).unwrap();
    let addr = derive_address(&Point::affine(x, y)).unwrap();
    assert_eq!(addr.to_hex(), field("address:"));

    // Unseeded runs produce distinct keys.
    let a = provchain(&["keygen"]);
    let b = provchain(&["keygen"]);
    assert_eq!(code(&a), 0);
    assert_ne!(stdout(&a), stdout(&b));
}

#[test]
fn keygen_rejects_malformed_seeds() {
    for bad in ["zz", "abcd", "", "0011"] {
        let output = provchain(&["keygen", "--seed", bad]);
        assert_eq!(code(&output), 2, "seed {bad:?}");
    }
}

#[test]
fn run_writes_the_expected_files_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let ledger = run_fixture(dir.path(), &[]);
    let records = read_ledger_file(&ledger).unwrap();
    assert_eq!(records.len(), 50);

    for i in 0..5 {
        assert!(dir.path().join("out").join(format!("node_{i}.ndjson")).exists());
    }
    assert!(dir.path().join("out/complexity.csv").exists());
    assert!(dir.path().join("out/gas.csv").exists());

    // All node ledgers identical.
    let body0 = fs::read(&ledger).unwrap();
    for i in 1..5 {
        let body = fs::read(dir.path().join("out").join(format!("node_{i}.ndjson"))).unwrap();
        assert_eq!(body, body0, "node {i} ledger differs");
    }

    // A second run with the same seed reproduces the ledger byte-for-byte.
    let dir2 = tempfile::tempdir().unwrap();
    let ledger2 = run_fixture(dir2.path(), &[]);
    assert_eq!(fs::read(&ledger2).unwrap(), body0);
    assert_eq!(
        fs::read(dir2.path().join("out/gas.csv")).unwrap(),
        fs::read(dir.path().join("out/gas.csv")).unwrap()
    );
}

#[test]
fn run_rejects_malformed_configs_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.cfg");
    fs::write(&config, "n_nodes = banana").unwrap();
    let out_dir = dir.path().join("never");
    let output = provchain(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 2);
    assert!(!out_dir.exists(), "output dir was created despite bad config");

    // Unknown keys and unreadable paths are also exit 2.
    fs::write(&config, "warp_speed = 9").unwrap();
    assert_eq!(code(&provchain(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ])), 2);
    assert_eq!(code(&provchain(&[
        "run",
        "--config",
        dir.path().join("missing.cfg").to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ])), 2);
}

#[test]
fn run_honors_the_mode_flag() {
    let dir = tempfile::tempdir().unwrap();
    run_fixture(dir.path(), &["--mode", "storage"]);
    let gas = fs::read_to_string(dir.path().join("out/gas.csv")).unwrap();
    assert!(gas.lines().nth(1).unwrap().contains(",storage,"));
    // 161000 per record in storage mode.
    assert!(gas.lines().nth(1).unwrap().starts_with("1,storage,161000,"));
}

#[test]
fn trace_prints_five_hops_supplier_first() {
    let dir = tempfile::tempdir().unwrap();
    let ledger = run_fixture(dir.path(), &[]);
    let records = read_ledger_file(&ledger).unwrap();
    let p_id = records[0].tx.p_id;

    let output = provchain(&[
        "trace",
        "--ledger",
        ledger.to_str().unwrap(),
        "--product",
        &p_id.to_hex(),
    ]);
    assert_eq!(code(&output), 0);
    let text = stdout(&output);
    assert!(text.contains("5 hop(s)"));
    let stages: Vec<&str> = ["SUPPLIER", "PRODUCER", "RETAILER", "DEALER", "CUSTOMER"]
        .into_iter()
        .filter(|s| text.contains(*s))
        .collect();
    assert_eq!(stages.len(), 5, "missing stages in:\n{text}");
    // Supplier row is the first hop row.
    let first_hop_line = text.lines().find(|l| l.starts_with("0 ")).unwrap();
    assert!(first_hop_line.contains("SUPPLIER"));
}

#[test]
fn trace_unknown_product_is_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let ledger = run_fixture(dir.path(), &[]);
    let output = provchain(&[
        "trace",
        "--ledger",
        ledger.to_str().unwrap(),
        "--product",
        &"11".repeat(32),
    ]);
    assert_eq!(code(&output), 4);
    assert!(stderr(&output).contains("product not found"));
}

#[test]
fn trace_json_round_trips_through_the_ledger_schema() {
    let dir = tempfile::tempdir().unwrap();
    let ledger = run_fixture(dir.path(), &[]);
    let records = read_ledger_file(&ledger).unwrap();
    let p_id = records[0].tx.p_id;

    let output = provchain(&[
        "trace",
        "--ledger",
        ledger.to_str().unwrap(),
        "--product",
        &p_id.to_hex(),
        "--json",
    ]);
    assert_eq!(code(&output), 0);
    let parsed: Vec<LedgerRecord> = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(parsed.len(), 5);
    let store = ChainStore::from_records(records);
    let expected: Vec<LedgerRecord> = store.trace(&p_id).iter().map(LedgerRecord::from).collect();
    assert_eq!(parsed, expected);
}

#[test]
fn audit_passes_pristine_and_catches_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let ledger = run_fixture(dir.path(), &[]);

    let output = provchain(&["audit", "--ledger", ledger.to_str().unwrap(), "--all"]);
    assert_eq!(code(&output), 0, "{}", stderr(&output));
    assert!(stdout(&output).contains("10 products audited"));

    // Flip one byte inside a committed record's payload.
    let body = fs::read_to_string(&ledger).unwrap();
    let tampered_body = body.replacen("6c6f742d30", "6c6f742d39", 1); // "lot-0" -> "lot-9"
    assert_ne!(body, tampered_body, "tamper target not found");
    let tampered_path = dir.path().join("tampered.ndjson");
    fs::write(&tampered_path, &tampered_body).unwrap();

    let output = provchain(&["audit", "--ledger", tampered_path.to_str().unwrap(), "--all"]);
    assert_eq!(code(&output), 5);
    let err = stderr(&output);
    assert!(err.contains("hop"), "failure message names no hop: {err}");

    // Single-product audit also fails, with the hop named.
    let records = read_ledger_file(&tampered_path).unwrap();
    let bad_pid = records
        .iter()
        .find(|r| r.tx.p_inf.windows(5).any(|w| w == b"lot-9"))
        .unwrap()
        .tx
        .p_id;
    let output = provchain(&[
        "audit",
        "--ledger",
        tampered_path.to_str().unwrap(),
        "--product",
        &bad_pid.to_hex(),
    ]);
    assert_eq!(code(&output), 5);
    assert!(stdout(&output).contains("FAIL"));
}

#[test]
fn audit_all_on_empty_ledger_reports_zero_products() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.ndjson");
    fs::write(&empty, "").unwrap();
    let output = provchain(&["audit", "--ledger", empty.to_str().unwrap(), "--all"]);
    assert_eq!(code(&output), 0);
    assert!(stdout(&output).contains("0 products audited"));
}

#[test]
fn audit_requires_product_xor_all() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.ndjson");
    fs::write(&empty, "").unwrap();
    let neither = provchain(&["audit", "--ledger", empty.to_str().unwrap()]);
    assert_eq!(code(&neither), 2);
    let both = provchain(&[
        "audit",
        "--ledger",
        empty.to_str().unwrap(),
        "--all",
        "--product",
        &"11".repeat(32),
    ]);
    assert_eq!(code(&both), 2);
}

#[test]
fn gasreport_compares_the_two_modes() {
    let dir = tempfile::tempdir().unwrap();
    let storage_dir = dir.path().join("s");
    let event_dir = dir.path().join("e");
    let config = dir.path().join("cfg");
    fs::write(&config, "n_products = 4\nn_nodes = 2\n").unwrap();
    for (out, mode) in [(&storage_dir, "storage"), (&event_dir, "event")] {
        let output = provchain(&[
            "run",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--mode",
            mode,
        ]);
        assert_eq!(code(&output), 0, "{}", stderr(&output));
    }
    let storage_csv = storage_dir.join("gas.csv");
    let event_csv = event_dir.join("gas.csv");
    let output = provchain(&[
        "gasreport",
        "--storage",
        storage_csv.to_str().unwrap(),
        "--event",
        event_csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 0, "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.starts_with("n,storage_gas,event_gas,ratio"));
    assert!(text.contains("# storage_slope: 161000.0"));
    assert!(text.contains("# event_slope: 23797.0"));
    assert!(text.contains("# event_below_storage_at_every_n: true"));

    // The same file twice: ratio 1.0 with a warning, still exit 0.
    let output = provchain(&[
        "gasreport",
        "--storage",
        event_csv.to_str().unwrap(),
        "--event",
        event_csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 0);
    assert!(stdout(&output).contains("# event_storage_ratio_at_max_n: 1.0000"));
    assert!(stderr(&output).contains("identical"));

    // Empty and mismatched inputs are usage errors.
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    assert_eq!(code(&provchain(&[
        "gasreport",
        "--storage",
        empty.to_str().unwrap(),
        "--event",
        event_csv.to_str().unwrap(),
    ])), 2);

    let short_dir = dir.path().join("short");
    fs::write(&config, "n_products = 2\nn_nodes = 2\n").unwrap();
    let output = provchain(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--out",
        short_dir.to_str().unwrap(),
        "--mode",
        "storage",
    ]);
    assert_eq!(code(&output), 0);
    assert_eq!(code(&provchain(&[
        "gasreport",
        "--storage",
        short_dir.join("gas.csv").to_str().unwrap(),
        "--event",
        event_csv.to_str().unwrap(),
    ])), 2, "different submission counts must be rejected");
}
