//! Exit-code and surface contract of the binary.
//!
//! 0 success; 1 usage/parse; 2 generation failure; 3 verification failure.
//! Machine-readable failures are single stderr lines prefixed `error:`.

use std::fs;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_propforge"))
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn check_reports_verdicts_and_exits_zero() {
    let out = run(bin()
        .args(["check", "--property", "reflexivity"])
        .args(["--graph", "3:100010001", "--graph", "3:000010001"]));
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("3:100010001\tsatisfies"));
    assert!(text.contains("3:000010001\tviolates"));
}

#[test]
fn check_formula_matches_named_property() {
    let by_name = run(bin()
        .args(["check", "--property", "reflexivity", "--graph", "4:1000010000100001"]));
    let by_formula = run(bin()
        .args(["check", "--formula", "all u | edge(u, u)", "--graph", "4:1000010000100001"]));
    assert_eq!(stdout(&by_name), stdout(&by_formula));
    assert_eq!(by_formula.status.code(), Some(0));
}

#[test]
fn check_formula_file_works() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("self_loops.prop");
    fs::write(&path, "all u | edge(u, u)\n").unwrap();
    let out = run(bin()
        .arg("check")
        .arg("--formula-file")
        .arg(&path)
        .args(["--graph", "2:1001"]));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("satisfies"));
}

#[test]
fn malformed_bitstring_is_usage_error() {
    let out = run(bin().args(["check", "--property", "reflexivity", "--graph", "3:10xx"]));
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error:"), "{}", stderr(&out));
}

#[test]
fn unbound_variable_error_carries_position() {
    let out = run(bin().args(["check", "--formula", "all u | edge(u, w)", "--graph", "2:0000"]));
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("unbound variable"), "{err}");
    assert!(err.contains("1:17"), "{err}");
}

#[test]
fn missing_seed_is_usage_error() {
    let out = run(bin().args(["generate", "--property", "reflexivity"]));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn stats_exact_refuses_large_n() {
    let out = run(bin().args(["stats", "--property", "total_order", "--n", "5", "--exact"]));
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.starts_with("error:") && err.contains("budget"), "{err}");
}

#[test]
fn stats_exact_small_n_prints_fraction() {
    let out = run(bin().args(["stats", "--property", "total_order", "--n", "3", "--exact"]));
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("positives: 6"), "{text}");
    assert!(text.contains("6/512"), "{text}");
}

#[test]
fn stats_emits_dimacs_cnf() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("refl3.cnf");
    let out = run(bin()
        .args(["stats", "--property", "reflexivity", "--n", "3"])
        .arg("--emit-cnf")
        .arg(&path));
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("p cnf 9 3\n"), "{text}");
    assert!(text.contains("1 0\n") && text.contains("5 0\n") && text.contains("9 0\n"));
}

#[test]
fn split_gap_error_names_missing_sizes() {
    let dir = tempfile::tempdir().unwrap();
    // Build sizes base..base+10 except base+3 (= 9 for partial_order).
    run_ok(bin()
        .args(["generate", "--property", "partial_order", "--sizes", "base..base+2"])
        .args(["--seed", "5", "--positives", "8", "-q", "--out"])
        .arg(dir.path()));
    run_ok(bin()
        .args(["generate", "--property", "partial_order", "--sizes", "base+4..base+10"])
        .args(["--seed", "5", "--positives", "8", "-q", "--out"])
        .arg(dir.path()));
    let out = run(bin()
        .args(["split", "--property", "partial_order", "--family", "random", "--seed", "5"])
        .arg("--root")
        .arg(dir.path()));
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains('9'), "{}", stderr(&out));
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = run(cmd);
    assert!(out.status.success(), "{}", stderr(&out));
    out
}

#[test]
fn split_emits_partition_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(bin()
        .args(["generate", "--property", "partial_order", "--sizes", "base..base+10"])
        .args(["--seed", "5", "--positives", "8", "-q", "--out"])
        .arg(dir.path()));
    let partition_path = dir.path().join("partial_order/random/v6.partition");
    run_ok(bin()
        .args(["split", "--property", "partial_order", "--family", "random", "--seed", "5"])
        .arg("--root")
        .arg(dir.path()));
    let first = fs::read(&partition_path).unwrap();
    run_ok(bin()
        .args(["split", "--property", "partial_order", "--family", "random", "--seed", "5"])
        .arg("--root")
        .arg(dir.path()));
    let second = fs::read(&partition_path).unwrap();
    assert_eq!(first, second);
    assert!(dir.path().join("partial_order/random/split.train.txt").exists());
    assert!(dir.path().join("partial_order/random/split.test.txt").exists());

    // 95/5 partition: val rows within rounding of 5%.
    let text = String::from_utf8(first).unwrap();
    let total = text.lines().count();
    let vals = text.lines().filter(|l| l.ends_with("\tval")).count();
    assert_eq!(vals, (total * 5 + 50) / 100);
}

#[test]
fn dataset_label_verification_against_wrong_property_fails() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(bin()
        .args(["generate", "--property", "reflexivity", "--sizes", "base+1"])
        .args(["--seed", "5", "--positives", "10", "-q", "--out"])
        .arg(dir.path()));
    let data = dir.path().join("reflexivity/random/v6.data");

    let ok = run(bin()
        .args(["check", "--property", "reflexivity", "--dataset"])
        .arg(&data));
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    assert!(stdout(&ok).contains("verified against reflexivity"));

    let bad = run(bin()
        .args(["check", "--property", "irreflexivity", "--dataset"])
        .arg(&data));
    assert_eq!(bad.status.code(), Some(3));
    let err = stderr(&bad);
    assert!(err.starts_with("error:") && err.contains("line 1"), "{err}");
}

#[test]
fn corrupted_dataset_fails_checksum_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(bin()
        .args(["generate", "--property", "reflexivity", "--sizes", "base+1"])
        .args(["--seed", "6", "--positives", "5", "-q", "--out"])
        .arg(dir.path()));
    let data = dir.path().join("reflexivity/random/v6.data");
    let mut body = fs::read_to_string(&data).unwrap();
    body.push_str("1\t6\t");
    body.push_str(&"0".repeat(36));
    body.push('\n');
    fs::write(&data, body).unwrap();
    let out = run(bin()
        .args(["check", "--property", "reflexivity", "--dataset"])
        .arg(&data));
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("checksum"), "{}", stderr(&out));
}

#[test]
fn generate_refuses_overwrite_without_flag() {
    let dir = tempfile::tempdir().unwrap();
    let mut args_once = bin();
    args_once
        .args(["generate", "--property", "reflexivity", "--sizes", "base+1"])
        .args(["--seed", "6", "--positives", "5", "-q", "--out"])
        .arg(dir.path());
    run_ok(&mut args_once);
    let again = run(bin()
        .args(["generate", "--property", "reflexivity", "--sizes", "base+1"])
        .args(["--seed", "6", "--positives", "5", "-q", "--out"])
        .arg(dir.path()));
    assert_eq!(again.status.code(), Some(2));
    assert!(stderr(&again).contains("already exists"));
    let forced = run(bin()
        .args(["generate", "--property", "reflexivity", "--sizes", "base+1"])
        .args(["--seed", "6", "--positives", "5", "-q", "--overwrite", "--out"])
        .arg(dir.path()));
    assert_eq!(forced.status.code(), Some(0));
}

#[test]
fn score_incomplete_grid_exits_2_listing_cells() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("r.txt");
    let mut body = String::new();
    for model in ["a", "b"] {
        for aspect in ["generalizability", "sensitivity"] {
            for j in 0..10 {
                body.push_str(&format!("{model},connex,{aspect},{},0.7\n", 6 + j));
            }
        }
    }
    // Drop one whole cell: (b, connex, sensitivity).
    let body: String = body
        .lines()
        .filter(|l| !l.starts_with("b,connex,sensitivity"))
        .map(|l| format!("{l}\n"))
        .collect();
    fs::write(&results, body).unwrap();
    let out = run(bin().arg("score").arg(&results).arg("--out").arg(dir.path().join("s")));
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("sensitivity") && err.contains("connex") && err.contains('b'), "{err}");
}

#[test]
fn score_single_model_emits_all_ones() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("r.txt");
    let mut body = String::new();
    for aspect in ["generalizability", "sensitivity", "robustness"] {
        for j in 0..10 {
            body.push_str(&format!("solo,connex,{aspect},{},0.3\n", 6 + j));
        }
    }
    fs::write(&results, body).unwrap();
    let out_dir = dir.path().join("scores");
    let out = run(bin().arg("score").arg(&results).arg("--out").arg(&out_dir));
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    for file in ["aspects.csv", "properties.csv", "overall.csv"] {
        let text = fs::read_to_string(out_dir.join(file)).unwrap();
        for line in text.lines().skip(1) {
            assert!(line.ends_with("1.000"), "{file}: {line}");
        }
    }
    assert!(stdout(&out).contains("overall,1.000"));
}

#[test]
fn dry_run_plans_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_ok(bin()
        .args(["generate", "--property", "connex", "--family", "both"])
        .args(["--sizes", "base..base+10", "--seed", "1", "--dry-run", "--out"])
        .arg(dir.path()));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("plan: ")).count(), 22);
    assert!(text.contains("planned jobs: 22"));
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none(), "dry run must not write");
}

#[test]
fn env_var_overrides_output_root() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(bin()
        .args(["generate", "--property", "reflexivity", "--sizes", "base+1"])
        .args(["--seed", "3", "--positives", "4", "-q"])
        .env("PROPFORGE_OUT", dir.path()));
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(dir.path().join("reflexivity/random/v6.data").exists());
}

#[test]
fn help_and_version_exit_zero() {
    for flag in ["--help", "--version"] {
        let out = run(bin().arg(flag));
        assert_eq!(out.status.code(), Some(0));
    }
    let sub = run(bin().args(["generate", "--help"]));
    assert_eq!(sub.status.code(), Some(0));
    assert!(stdout(&sub).contains("--seed"));
}

#[test]
fn stats_differential_agrees_for_catalog_property() {
    let out = run(bin().args(["stats", "--property", "function", "--n", "3", "--differential"]));
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("agree: true"), "{text}");
    assert!(text.contains("brute_count: 27"), "{text}");
}
