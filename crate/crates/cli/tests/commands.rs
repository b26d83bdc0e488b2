use std::path::Path;
use std::process::{Command, Output};

fn mgonal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgonal"))
        .args(args)
        .env_remove("MGONAL_CACHE")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn represent_exit_codes() {
    let o = mgonal(&["represent", "--m", "7", "--coeffs", "1,1,1", "--n", "10"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("not represented"));

    let o = mgonal(&[
        "represent",
        "--m",
        "6",
        "--coeffs",
        "1,1,2",
        "--n",
        "5",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let xs: Vec<i64> = serde_json::from_value(v["witness"].clone()).unwrap();
    let p = |x: i64| (4 * x * x - 2 * x) / 2;
    assert_eq!(p(xs[0]) + p(xs[1]) + 2 * p(xs[2]), 5);

    let o = mgonal(&["represent", "--m", "3", "--coeffs", "1", "--n", "0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("x = (0)"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["represent", "--m", "2", "--coeffs", "1", "--n", "3"][..],
        &["represent", "--m", "7", "--coeffs", "2,1", "--n", "3"],
        &["represent", "--m", "7", "--coeffs", "1,x", "--n", "3"],
        &["represent", "--m", "7", "--coeffs", "1"],
        &["verify", "lemma33", "--m", "30..9"],
        &["verify", "lemma33", "--part", "9"],
        &["gamma", "--m", "10", "--prefix", "1,1,1,1,1,1"],
        &["fib", "--m", "10", "--n", "4"],
        &["nonsense"],
    ] {
        assert_eq!(code(&mgonal(args)), 2, "{args:?}");
    }
}

#[test]
fn check_universal_statuses() {
    let o = mgonal(&["check-universal", "--m", "14", "--coeffs", "1,1,2,3,5,8"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("universal-certified"));
    let o = mgonal(&["check-universal", "--m", "7", "--coeffs", "1,1,1"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("open, miss 10"));
    let o = mgonal(&[
        "check-universal",
        "--m",
        "6",
        "--coeffs",
        "1,1,2",
        "--bound",
        "100000",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("universal-empirical"));
}

#[test]
fn tables() {
    assert_eq!(stdout(&mgonal(&["table1"])).lines().count(), 22);
    assert_eq!(
        stdout(&mgonal(&["candidates", "--length", "4"]))
            .lines()
            .count(),
        27
    );
    assert_eq!(
        stdout(&mgonal(&["candidates", "--length", "2"])),
        "(1,1)\n(1,2)\n"
    );
    let csv = stdout(&mgonal(&["table1", "--format", "csv"]));
    assert_eq!(csv.lines().next(), Some("a1,a2,a3,a4,a5"));
    assert_eq!(csv.lines().count(), 23);
}

#[test]
fn gamma_values() {
    let o = mgonal(&["gamma", "--m", "3"]);
    assert!(stdout(&o).starts_with("8 exact-under-bound"));
    let o = mgonal(&["gamma", "--m", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], 15);
    assert_eq!(v["status"], "exact-under-bound");
    let o = mgonal(&["gamma", "--m", "24", "--prefix", "1,1,2,3,5"]);
    assert!(stdout(&o).starts_with("20 "));
    let o = mgonal(&["gamma", "--m", "10", "--prefix", "1,1,1,1,1", "--tree"]);
    let tree: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(tree["truant"], 6);
}

#[test]
fn verify_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, workers: &str| {
        let path = dir.path().join(name);
        let o = mgonal(&[
            "verify",
            "main",
            "--tuple",
            "1,1,1,2,2",
            "--m",
            "14..24",
            "--seed",
            "7",
            "--format",
            "json",
            "--workers",
            workers,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        std::fs::read(path).unwrap()
    };
    let a = run("a.json", "1");
    let b = run("b.json", "3");
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["seed"], 7);
    assert!(v["failures"].as_array().unwrap().is_empty());
    assert!(v["runtime"]["nodes"].as_u64().unwrap() > 0);
}

#[test]
fn verify_failures_exit_one_and_still_write() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let o = mgonal(&[
        "verify",
        "main",
        "--tuple",
        "1,1,1,2,2",
        "--m",
        "13",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    let csv = std::fs::read_to_string(path).unwrap();
    assert!(csv.starts_with("claim,label,verdict,target,detail,witness\n"));
    assert!(csv.contains(",fail,8,"));
}

#[test]
fn verify_claims_pass_on_small_boxes() {
    for args in [
        &["verify", "lemma33", "--m", "9..12", "--a", "0..3"][..],
        &["verify", "lem1", "--m", "12..14", "--a", "0..4"],
        &["verify", "prop31", "--m", "12..14", "--n", "40"],
        &["verify", "remark21", "--m", "12..20"],
        &["verify", "remark22", "--m", "36..40"],
        &["verify", "ell", "--m", "9..14", "--bound", "5000"],
        &[
            "verify", "ell", "--m", "12..20", "--r", "2,5", "--bound", "5000",
        ],
        &["verify", "fib", "--m", "10..20", "--bound", "5000"],
    ] {
        let o = mgonal(args);
        assert_eq!(code(&o), 0, "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).contains(": PASS ("), "{args:?}");
    }
}

fn cached(cache: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "truant",
        "--m",
        "9",
        "--coeffs",
        "1,1,1,1,1",
        "--limit",
        "5000",
        "--cache",
    ];
    args.push(cache.to_str().unwrap());
    args.extend_from_slice(extra);
    mgonal(&args)
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("bits.bin");
    let first = cached(&cache, &[]);
    assert_eq!(code(&first), 0);
    let len = std::fs::metadata(&cache).unwrap().len();
    assert!(len > 8);
    let index = dir.path().join("bits.bin.idx.json");
    assert!(index.exists());
    let second = cached(&cache, &["--verify-cache"]);
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(
        std::fs::metadata(&cache).unwrap().len(),
        len,
        "hit must not append"
    );

    // flip one bit inside the stored words: the verifying run must notice
    let mut bytes = std::fs::read(&cache).unwrap();
    let last = bytes.len() - 1;
    bytes[last - 200] ^= 1;
    std::fs::write(&cache, &bytes).unwrap();
    let o = cached(&cache, &["--verify-cache"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("differs from recomputation"));

    std::fs::write(&cache, b"garbage").unwrap();
    assert_eq!(code(&cached(&cache, &[])), 2);
}

#[test]
fn cache_path_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("env.bin");
    let o = Command::new(env!("CARGO_BIN_EXE_mgonal"))
        .args([
            "check-universal",
            "--m",
            "7",
            "--coeffs",
            "1,1,1,1",
            "--bound",
            "2000",
        ])
        .env("MGONAL_CACHE", &cache)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(cache.exists());
}
