use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_critstrip")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(run(args).stdout).unwrap()
}

fn gen(dir: &Path, name: &str, args: &[&str]) -> String {
    let p = dir.join(name).display().to_string();
    let mut a = vec!["gen-data"];
    a.extend_from_slice(args);
    a.extend_from_slice(&["--out", &p]);
    assert_eq!(code(&a), 0);
    p
}

#[test]
fn exit_code_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let delta = gen(dir.path(), "delta.coeffs", &["--series", "delta", "--nmax", "2000"]);
    let bad = dir.path().join("bad.coeffs");
    std::fs::write(&bad, "# family: modular\n# weight: 12\n# level: 1\n# normalization: arithmetic\n1 1\n3 252\n").unwrap();
    let bad = bad.display().to_string();
    let missing = dir.path().join("none.coeffs").display().to_string();
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["psi", "--m", "0", "--z", "1"], 0),
        (vec!["psi", "--m", "2", "--z", "1", "--exact"], 0),
        (vec!["psi", "--m", "0", "--z", "-1"], 3),
        (vec!["psi", "--m", "1", "--z", "0", "--exact"], 3),
        (vec!["psi", "--z", "abc"], 2),
        (vec!["psi"], 2),
        (vec!["frobnicate"], 2),
        (vec!["--precision", "32", "psi", "--z", "1"], 2),
        (vec!["--precision", "128", "--tol", "80", "psi", "--z", "1"], 2),
        (vec!["identity", "--data", &delta, "--s0", "6", "--m", "0"], 0),
        (vec!["identity", "--data", &bad, "--s0", "6"], 4),
        (vec!["identity", "--data", &missing, "--s0", "6"], 7),
        (vec!["certify", "modular", "--N", "1", "--D", "13", "--k", "12", "--s0", "6"], 0),
        (vec!["certify", "modular", "--N", "1", "--D", "-11", "--k", "12", "--s0", "6"], 1),
        (vec!["certify", "modular", "--N", "1", "--D", "13", "--k", "2", "--s0", "1"], 5),
        (vec!["certify", "gld", "--N", "23", "--kappa", "1/2", "--s0", "1/2"], 0),
        (vec!["certify", "gld", "--N", "22", "--kappa", "1/2", "--s0", "1/2"], 1),
        (vec!["certify", "halfint", "--k", "13/2", "--N", "8"], 0),
        (vec!["certify", "halfint", "--k", "9/2", "--N", "8"], 5),
        (vec!["certify", "siegel", "--g", "3", "--k", "19", "--s0", "10"], 5),
        (vec!["certify", "hilbert", "--k", "6", "--n", "3", "--dF", "49", "--s0", "3"], 0),
        (vec!["rank", "--family", "modular", "--q", "7", "--k", "2", "--N", "1", "--D", "1"], 0),
        (vec!["rank", "--family", "gld", "--kappa", "0", "--J", "2,4", "--s0", "1/2"], 5),
        (vec!["rank", "--family", "gld", "--kappa", "0", "--s0", "1/2"], 2),
        (vec!["closedform", "--family", "modular", "--k", "12", "--N", "1", "--s0", "6", "--exact"], 0),
    ];
    for (args, want) in cases {
        assert_eq!(code(&args), want, "{args:?}");
    }
}

#[test]
fn psi_outputs() {
    assert!(stdout(&["psi", "--m", "0", "--z", "1"]).starts_with("-0.5772156649015328606065121"));
    assert!(stdout(&["psi", "--m", "2", "--z", "1", "--exact"]).starts_with("-2*zeta(3)\n"));
    let v: serde_json::Value = serde_json::from_str(stdout(&["--format", "json-lines", "psi", "--z", "1/2", "--exact"]).trim()).unwrap();
    assert_eq!(v["value"], "-gamma - 2*log(2)");
    assert_eq!(v["command"], "psi");
    assert_eq!(v["precision_bits"], 128);
}

#[test]
fn json_lines_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let ch = gen(dir.path(), "chi5.coeffs", &["--series", "character", "--D", "5", "--nmax", "400"]);
    let args = ["--format", "json-lines", "identity", "--data", &ch, "--s0", "2/5", "--s0", "1/2", "--s0", "3/5"];
    let a = stdout(&args);
    let b = stdout(&args);
    assert_eq!(a, b);
    let lines: Vec<serde_json::Value> = a.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    for (l, s0) in lines.iter().zip(["2/5", "1/2", "3/5"]) {
        assert_eq!(l["inputs"]["s0"], s0);
        assert_eq!(l["pass"], true);
        for key in ["command", "inputs", "residual", "precision_bits", "assumptions"] {
            assert!(l.get(key).is_some(), "missing {key}");
        }
    }
    let rank = ["--format", "json-lines", "rank", "--family", "modular", "--q", "7", "--k", "2", "--N", "1"];
    assert_eq!(stdout(&rank), stdout(&rank));
}

#[test]
fn rank_lists_psi_pairs() {
    let out = stdout(&["rank", "--family", "modular", "--q", "7", "--k", "2", "--N", "1", "--D", "1"]);
    assert!(out.contains("psi-pairs: psipair(1/7), psipair(2/7), psipair(3/7)\n"), "{out}");
    assert!(out.contains("verdict: Certified"));
}

#[test]
fn file_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.coeffs");
    std::fs::write(&p, "# family: modular\n# weight: 12\n# level: 1\n# normalization: arithmetic\n1 1\n2 -24\n3 x\n").unwrap();
    let o = run(&["identity", "--data", p.to_str().unwrap(), "--s0", "6"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 7"));
}
