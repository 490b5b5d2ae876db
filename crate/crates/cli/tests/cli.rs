use std::process::{Command, Output};

use serde_json::Value;

fn sumprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumprod"))
        .args(args)
        .env_remove("SUMPROD_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_exit_codes() {
    let ok = sumprod(&[
        "verify", "--p", "101", "--family", "gp", "--base", "2", "--n", "5",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(doc["input"]["cardSumset"], 15);
    assert_eq!(doc["input"]["cardProductset"], 9);

    let bad = sumprod(&["verify", "--p", "7", "--elements", "1,2,4"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(bad.stdout.is_empty());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("hypothesis"));

    for args in [
        &["verify", "--p", "100", "--elements", "1,2"][..],
        &["verify", "--p", "101", "--elements", "0,1"],
        &["verify", "--p", "101"],
        &[
            "verify", "--p", "101", "--family", "gp", "--base", "10", "--n", "5",
        ],
        &["verify", "--p", "101", "--family", "subgroup", "--n", "7"],
        &["verify", "--bogus"],
    ] {
        assert_eq!(sumprod(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn verify_writes_the_same_trace_to_file() {
    let path = std::env::temp_dir().join(format!("sumprod-trace-{}.json", std::process::id()));
    let o = sumprod(&[
        "verify",
        "--p",
        "4099",
        "--family",
        "ap",
        "--n",
        "32",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(written, stdout(&o));
    let doc: Value = serde_json::from_str(&written).unwrap();
    assert_eq!(doc["input"]["cardSumset"], 63);
}

#[test]
fn sweep_rows() {
    let o = sumprod(&[
        "sweep",
        "--p",
        "101",
        "--families",
        "gp,ap",
        "--sizes",
        "1,5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "p,family,n,seed,cardSumset,cardProductset,maxCard,exponent,caseTag"
    );
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[1], "101,gp,1,,1,1,1,,");
    let gp5: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(&gp5[..7], &["101", "gp", "5", "", "15", "9", "15"]);
    let e: f64 = gp5[7].parse().unwrap();
    assert!((e - 15f64.ln() / 5f64.ln()).abs() < 1e-12);
    assert_eq!(gp5[8], "NONFULL");
    assert!(lines[3].starts_with("101,ap,1,"));
}

#[test]
fn sweep_random_trials_and_seeds() {
    let o = sumprod(&[
        "sweep",
        "--p",
        "1009",
        "--families",
        "random",
        "--sizes",
        "6",
        "--trials",
        "4",
        "--seed",
        "9",
    ]);
    let out = stdout(&o);
    let seeds: Vec<&str> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap())
        .collect();
    assert_eq!(seeds.len(), 4);
    let distinct: std::collections::BTreeSet<_> = seeds.iter().collect();
    assert_eq!(distinct.len(), 4);
}

#[test]
fn sweep_rejects_invalid_ranges() {
    for args in [
        &["sweep", "--p", "101", "--families", "ap", "--sizes", "0"][..],
        &["sweep", "--p", "101", "--families", "ap", "--sizes", "101"],
        &[
            "sweep",
            "--p",
            "101",
            "--families",
            "ap",
            "--sizes",
            "3",
            "--trials",
            "0",
        ],
        &[
            "sweep",
            "--p",
            "101",
            "--families",
            "ap",
            "--sizes",
            "3",
            "--threads",
            "0",
        ],
        &["sweep", "--p", "91", "--families", "ap", "--sizes", "3"],
    ] {
        assert_eq!(sumprod(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn sweep_threads_env_and_flag_agree() {
    let args = [
        "sweep",
        "--p",
        "2003",
        "--families",
        "random,ap-union-gp,subgroup",
        "--sizes",
        "2,7,14",
        "--trials",
        "3",
    ];
    let by_flag = sumprod(&[&args[..], &["--threads", "3"]].concat());
    let by_env = Command::new(env!("CARGO_BIN_EXE_sumprod"))
        .args(args)
        .env("SUMPROD_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(by_flag.status.code(), Some(0));
    assert_eq!(by_flag.stdout, by_env.stdout);
    // an invalid env value is overridden by the flag
    let overridden = Command::new(env!("CARGO_BIN_EXE_sumprod"))
        .args(args)
        .args(["--threads", "1"])
        .env("SUMPROD_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(overridden.stdout, by_flag.stdout);
}

#[test]
fn sweep_constants_report() {
    let path = std::env::temp_dir().join(format!("sumprod-constants-{}.json", std::process::id()));
    let o = sumprod(&[
        "sweep",
        "--p",
        "4099",
        "--families",
        "ap,gp,random",
        "--sizes",
        "8,20,32",
        "--trials",
        "3",
        "--constants",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(doc["traces"], 15);
    assert_eq!(doc["exactFailures"], 0);
    assert!(doc["steps"]["pigeonhole.2.1"]["count"].as_u64().unwrap() == 15);
}

#[test]
fn oracle_suite_summary() {
    let run = || sumprod(&["oracle-suite", "--instances", "200", "--seed", "7"]);
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("ruzsa_triangle: 200/200"));
    assert_eq!(
        sumprod(&["oracle-suite", "--instances", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(
        sumprod(&["oracle-suite", "--max-card", "21"]).status.code(),
        Some(1)
    );
    assert_eq!(
        sumprod(&["oracle-suite", "--max-p", "4"]).status.code(),
        Some(1)
    );
}

#[test]
fn extremal_report() {
    let o = sumprod(&[
        "extremal", "--p", "101", "--n", "4", "--iters", "0", "--seed", "5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["initial"], doc["best"]);
    assert_eq!(doc["acceptedMoves"], 0);

    let o = sumprod(&[
        "extremal", "--p", "101", "--n", "4", "--iters", "3000", "--seed", "5",
    ]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(doc["best"]["objective"].as_u64() <= doc["progressionObjective"].as_u64());
    assert!(doc["best"]["exponent"].as_f64().unwrap() >= 1.0);

    assert_eq!(
        sumprod(&["extremal", "--p", "101", "--n", "11"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn bench_table_and_limits() {
    let o = sumprod(&["bench", "--p", "101", "--n", "10", "--reps", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches(" agree").count(), 3);
    assert!(!out.contains("skipped"));
    assert_eq!(
        sumprod(&["bench", "--p", "101", "--n", "10", "--reps", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        sumprod(&["bench", "--p", "101", "--n", "101"])
            .status
            .code(),
        Some(1)
    );
    let help = stdout(&sumprod(&["bench", "--help"]));
    assert!(help.contains("10^7"));
}
