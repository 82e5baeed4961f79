use std::fs;
use std::process::{Command, Output};

use qkd_core::sweep::format_sig;
use qkd_core::{attack_from_qber, i_bob, i_eve, AttackVariant};

fn qkd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qkd")).args(args).output().expect("run qkd")
}

fn stdout(args: &[&str]) -> String {
    let out = qkd(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(',')))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .take_while(|l| !l.is_empty())
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn thresholds_per_variant() {
    let t = stdout(&["thresholds", "--variant", "extremal4"]);
    assert!(t.contains("entanglement_threshold,0.250000000\n"), "{t}");
    let t = stdout(&["thresholds", "--variant", "sixstate"]);
    assert!(t.contains("entanglement_threshold,0.333333333\n"), "{t}");
    let t = stdout(&["thresholds", "--variant", "shannon4"]);
    assert!(t.contains("qber0,0.146446609\n"), "{t}");
}

#[test]
fn sweep_writes_csv_with_crossing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let p = path.to_str().unwrap();
    stdout(&["sweep", "--variant", "shannon4", "--from", "0", "--to", "0.29", "--step", "0.01", "--out", p]);
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("qber,f,i_bob,i_eve,"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 30);
    for r in &rows {
        let (q, ib, ie) = (r[0], r[2], r[3]);
        if q < 0.14 {
            assert!(ib > ie, "{r:?}");
        } else if q >= 0.15 {
            assert!(ib < ie, "{r:?}");
        }
    }
}

#[test]
fn sweep_csv_agrees_with_library() {
    let text = stdout(&["sweep", "--variant", "extremal4", "--from", "0.05", "--to", "0.3", "--step", "0.05"]);
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let q: f64 = cells[0].parse().unwrap();
        let a = attack_from_qber(AttackVariant::Extremal4, q).unwrap();
        assert_eq!(cells[2], format_sig(i_bob(a.fidelity()).unwrap()));
        assert_eq!(cells[3], format_sig(i_eve(a.fidelity(), a.delta0(), a.delta1()).unwrap()));
        assert_eq!(cells[6], if q < 0.25 { "1" } else { "0" });
    }
}

#[test]
fn sixstate_entanglement_flag_flips() {
    let text = stdout(&["sweep", "--variant", "sixstate", "--from", "0.33", "--to", "0.34", "--step", "0.01"]);
    let flags: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(6).unwrap()).collect();
    assert_eq!(flags, ["1", "0"]);
}

#[test]
fn fig1_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    stdout(&["fig1", "--out", a.to_str().unwrap()]);
    stdout(&["fig1", "--out", b.to_str().unwrap()]);
    let (a, b) = (fs::read(a).unwrap(), fs::read(b).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("\nIR_4,0.25\n"));
    assert!(text.contains("\nIR_6,0.333333333\n"));
    assert!(text.contains("\nqber0,0.146446609\n"));
    assert_eq!(csv_rows(&text).len(), 301);
}

#[test]
fn ad_exact_figures() {
    let t = stdout(&["ad", "--variant", "shannon4", "--qber", "0", "--n", "5"]);
    assert_eq!(field(&t, "beta").parse::<f64>().unwrap(), 0.0);
    assert_eq!(field(&t, "p_accept").parse::<f64>().unwrap(), 1.0);
    assert_eq!(field(&t, "th1_holds"), "true");
    assert!(!t.contains("emp_"));

    let t = stdout(&["ad", "--variant", "extremal4", "--qber", "0.2", "--n", "4"]);
    assert!((field(&t, "beta").parse::<f64>().unwrap() - 0.003891).abs() < 1e-6);
    assert!((field(&t, "gamma").parse::<f64>().unwrap() - 0.012861).abs() < 1e-6);
    assert_eq!(field(&t, "min_block_length"), "2");

    let t = stdout(&["ad", "--variant", "sixstate", "--qber", "1/3", "--n", "4"]);
    assert_eq!(field(&t, "th1_holds"), "false");
    assert_eq!(field(&t, "min_block_length"), "none");
}

#[test]
fn ad_simulation_is_seeded() {
    let args = ["ad", "--variant", "sixstate", "--qber", "0.2", "--n", "3", "--trials", "20000", "--seed", "7"];
    let first = stdout(&args);
    assert_eq!(first, stdout(&args));
    let est: Vec<f64> = field(&first, "emp_beta").split(',').map(|c| c.parse().unwrap()).collect();
    let exact: f64 = field(&first, "beta").parse().unwrap();
    assert!((est[0] - exact).abs() < 5.0 * est[1]);
}

#[test]
fn exit_codes() {
    assert_eq!(qkd(&["thresholds", "--variant", "bogus"]).status.code(), Some(2));
    assert_eq!(qkd(&["ad", "--variant", "sixstate", "--qber", "0.7", "--n", "3"]).status.code(), Some(2));
    assert_eq!(qkd(&["ad", "--variant", "extremal4", "--qber", "0.4", "--n", "3"]).status.code(), Some(2));
    assert_eq!(
        qkd(&["sweep", "--variant", "shannon4", "--from", "0.3", "--to", "0.1", "--step", "0.01"]).status.code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.csv");
    let out = qkd(&["fig1", "--out", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}
