use std::io::Write;
use std::process::{Command, Output, Stdio};

fn wordstat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wordstat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = wordstat(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&a)).unwrap()
}

#[test]
fn count_fee_in_referee() {
    assert_eq!(
        stdout(&["count", "--pattern", "fee", "--text", "referee"]),
        "3\n"
    );
}

#[test]
fn count_reads_stdin_and_combinations() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_wordstat"))
        .args([
            "count",
            "--pattern",
            "fe - ef",
            "--text",
            "-",
            "--alphabet",
            "efr",
        ])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"refe\nree\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    // In "referee": three e's follow the f, one precedes it.
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "2\n");
}

#[test]
fn spectrum_of_m31() {
    let v = json(&["spectrum", "--k", "3", "--r", "1"]);
    let rows = v["rows"].as_array().unwrap();
    let eig: Vec<&str> = rows
        .iter()
        .map(|r| r["eigenvalue"].as_str().unwrap())
        .collect();
    let dims: Vec<u64> = rows.iter().map(|r| r["dim"].as_u64().unwrap()).collect();
    assert_eq!(eig, ["10", "5", "1"]);
    assert_eq!(dims, [1, 1, 1]);
}

#[test]
fn fixed_decomposition_of_2_2() {
    let v = json(&["decompose", "--model", "fixed", "--kappa", "2,2"]);
    let row = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["r"] == 2 && r["i"] == 0 && r["j"] == 1)
        .expect("(2,0,1) listed");
    assert_eq!(row["lambda"], "1/15");
    assert_eq!(row["dim"], 1);
}

#[test]
fn classify_reports_exact_variance() {
    let v = json(&["classify", "--stat", "cvm"]);
    assert_eq!(v["variance"], "1/45");
    assert_eq!(v["order"], 2);
    let v = json(&["classify", "--stat", "pearson_chi2", "--p", "1/2,1/2"]);
    assert_eq!(v["rows"][0]["label"], serde_json::json!([2, 0]));
}

#[test]
fn json_round_trips_byte_for_byte() {
    for args in [
        vec![
            "decompose",
            "--model",
            "iid",
            "--alphabet",
            "abc",
            "--k",
            "3",
        ],
        vec!["spectrum", "--kappa", "3,2"],
        vec![
            "moments",
            "--exact",
            "--nvec",
            "6,7",
            "--stats",
            "mann_whitney,cvm",
        ],
        vec!["classify", "--stat", "watson_s"],
    ] {
        let mut a = args.clone();
        a.extend(["--format", "json"]);
        let text = stdout(&a);
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
        assert_eq!(text, again, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(
        wordstat(&["count", "--pattern", "ab"]).status.code(),
        Some(2)
    );
    assert_eq!(
        wordstat(&["classify", "--stat", "no_such_thing"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        wordstat(&["spectrum", "--k", "3", "--r", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        wordstat(&["moments", "--n", "5", "--stats", "coin_bias"])
            .status
            .code(),
        Some(2)
    );
    let out = wordstat(&["moments", "--exact", "--nvec", "1,1", "--stats", "cvm"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("below"));
}

#[test]
fn simulate_writes_csv() {
    let dir = std::env::temp_dir().join(format!("wordstat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("coin.csv");
    let args = [
        "simulate",
        "--model",
        "iid",
        "--n",
        "40",
        "--stats",
        "coin_bias,coin_ht_th",
        "--samples",
        "500",
        "--seed",
        "3",
        "--out",
    ];
    let mut a = args.to_vec();
    a.push(path.to_str().unwrap());
    assert_eq!(stdout(&a), "");
    let csv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("# model=iid n=40"));
    assert!(lines[0].ends_with("seed=3, N=500"));
    assert!(lines.contains(&"kind,stat_a,stat_b,estimate,stderr"));
    assert_eq!(
        lines
            .iter()
            .filter(|l| l.starts_with("covariance,"))
            .count(),
        3
    );
    std::fs::remove_dir_all(&dir).unwrap();
}
