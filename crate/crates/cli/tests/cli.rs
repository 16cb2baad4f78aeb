use std::process::{Command, Output};

use floer_core::Report;
use serde_json::Value;

fn floer_rings(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_floer-rings")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Report {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn surface_betti_numbers() {
    let out = floer_rings(&["ring-sympow", "--genus", "2", "--d", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = report(&out);
    assert_eq!(rep.results[0].data["betti"], serde_json::json!([1, 4, 1]));
    assert_eq!(rep.input["genus"], 2);
}

#[test]
fn adjunction_equality_case() {
    let out = floer_rings(&["adjunction", "--genus", "3", "--self-int", "0", "--odd-class", "--k-dot-sigma", "4", "--d-b", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = report(&out);
    let a = &rep.results[0].data["verdicts"][1];
    assert_eq!((a["theorem"].as_str(), a["status"].as_str(), a["equality"].as_bool()), (Some("A"), Some("PASS"), Some(true)));
}

#[test]
fn adjunction_violation_exits_one_with_witness() {
    let out = floer_rings(&["adjunction", "--genus", "3", "--self-int", "0", "--odd-class", "--k-dot-sigma", "4", "--d-b", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out).results[0].witness.as_deref(), Some("theorem A: 5 > 4"));
}

#[test]
fn adjunction_batch() {
    let path = std::env::temp_dir().join(format!("floer-rings-batch-{}.csv", std::process::id()));
    std::fs::write(
        &path,
        "g,selfInt,oddClass,kDotSigma,dB,dK,l,b1Zero,claimedOrder\n\
         2,3,false,1,0,,,false,\n\
         1,1,false,-1,,,,false,1\n\
         2,0,true,0,2,,0,false,\n",
    )
    .unwrap();
    let out = floer_rings(&["adjunction", "--batch", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    let rep = report(&out);
    assert_eq!(rep.results.len(), 3);
    // 4 <= 2 fails after three blow-ups.
    assert_eq!(rep.results[0].data["trace"]["blowUps"], 3);
    assert!(!rep.results[0].pass);
    assert_eq!(rep.results[1].data["trace"]["signs"], serde_json::json!([-1]));
    assert_eq!(rep.results[2].data["verdicts"][3]["status"], "NOT_APPLICABLE");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_options_exit_two() {
    for args in [
        &["ring-floer", "--genus", "0"][..],
        &["ring-floer", "--genus", "7"],
        &["ring-floer", "--genus", "3", "--k", "3"],
        &["ring-floer", "--genus", "3", "--r", "-3"],
        &["verify", "--suite", "nonsense", "--genus-max", "2"],
        &["adjunction", "--genus", "2"],
        &["ring-sympow", "--genus", "2"],
    ] {
        let out = floer_rings(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_floer-rings"))
        .args(["ring-floer", "--genus", "2"])
        .env("FLOER_RINGS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_is_byte_identical_across_runs_and_thread_counts() {
    let args = ["verify", "--suite", "ranks,eigenvalues,perturbation,adjunction", "--genus-max", "3", "--profiles", "3", "--seed", "7"];
    let a = floer_rings(&args);
    let b = floer_rings(&args);
    let c = Command::new(env!("CARGO_BIN_EXE_floer-rings")).args(args).env("FLOER_RINGS_THREADS", "3").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let rep = report(&a);
    assert!(rep.prng.is_some());
    assert_eq!(rep.summary.failed, 0);
    assert_eq!(rep.summary.total, rep.results.len());
}

#[test]
fn report_round_trips() {
    let out = floer_rings(&["ring-floer", "--genus", "3", "--k", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let parsed: Report = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
    assert_eq!(again, text);
    let value: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["schemaVersion"], 1);
    assert!(value.get("timing").is_none());
}

#[test]
fn timing_is_opt_in() {
    let out = floer_rings(&["hom-symm", "--genus", "2", "--timing"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out).timing.is_some());
}

#[test]
fn fukaya_floer_records_the_generator() {
    let out = floer_rings(&["ring-fukaya-floer", "--genus", "3", "--truncation", "3", "--seed", "5", "--profile", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = report(&out);
    assert!(rep.prng.unwrap().starts_with("ChaCha8Rng"));
    assert_eq!(rep.input["seed"], 5);
    assert!(rep.results.iter().any(|e| e.data.get("pattern").is_some()));
}

#[test]
fn text_and_csv_views() {
    let out = floer_rings(&["--format", "text", "hom-symm", "--genus", "3", "--r", "-1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("PASS  Gr_gamma H_-1 = Gr_theta H*(s^1 Sigma_3)"), "{text}");
    assert!(text.contains("hom-symm: 1/1 passed"));
    let out = floer_rings(&["--format", "csv", "verify", "--suite", "adjunction"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("criterion,check,pass,witness,data"));
    assert!(lines.next().unwrap().starts_with("9,"));
}
