use std::process::Command;

fn collatz() -> Command {
    Command::new(env!("CARGO_BIN_EXE_collatz"))
}

fn stdout_of(out: &std::process::Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn profile_65() {
    let out = collatz().args(["profile", "65"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("S = 27"));
    assert!(text.contains("alpha = 8"));
    assert!(text.contains("verdict = holds"));
}

#[test]
fn profile_1_and_27() {
    let out = collatz().args(["profile", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("S = 0"));
    assert!(text.contains("eps = 0.000000000000"));

    let out = collatz().args(["profile", "27"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("S = 111"));
}

#[test]
fn malformed_input_exits_1() {
    for bad in ["abc", "-5", "1.5", ""] {
        let out = collatz().args(["profile", bad]).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "input {bad:?}");
    }
    // Divergence guard too small is a runtime error for profile.
    let out = collatz()
        .args(["--max-iterations", "3", "profile", "27"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_error_exits_1_help_exits_0() {
    let out = collatz().args(["no-such-command"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = collatz().args(["--help"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_range_with_histogram_csv() {
    let dir = tempfile::tempdir().unwrap();
    let hist = dir.path().join("hist.csv");
    let out = collatz()
        .args(["verify-range", "--start", "1", "--end", "5000", "--chunk", "512"])
        .arg("--histogram-out")
        .arg(&hist)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stdout_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("checked: 5000"));
    assert!(text.contains("findings: 0"));
    assert!(text.contains("overflow_bin: 0"));

    let csv = std::fs::read_to_string(&hist).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "bin_lo,bin_hi,count");
    assert_eq!(lines.len(), 1 + 652 + 1);
    let total: u64 = lines[1..]
        .iter()
        .map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 5000);
}

#[test]
fn verify_random_reproducible() {
    let run = || {
        let out = collatz()
            .args([
                "verify-random",
                "--samples",
                "50",
                "--max-bits",
                "256",
                "--seed",
                "42",
                "--chunk",
                "8",
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        // Strip the wall-time line; everything else must be bit-identical.
        stdout_of(&out)
            .lines()
            .filter(|l| !l.starts_with("wall_time"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(run(), run());
}

#[test]
fn nontermination_campaign_exits_2() {
    let out = collatz()
        .args([
            "--max-iterations",
            "5",
            "verify-range",
            "--start",
            "27",
            "--end",
            "27",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_of(&out).contains("NonTermination"));
}

#[test]
fn scatter_emits_points_and_curves() {
    let dir = tempfile::tempdir().unwrap();
    let out = collatz()
        .args(["scatter", "--n-max", "200", "--alpha-max", "5", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let scatter = std::fs::read_to_string(dir.path().join("scatter.csv")).unwrap();
    assert_eq!(scatter.lines().count(), 201);
    assert_eq!(scatter.lines().nth(1).unwrap(), "1,0");
    for alpha in 0..=5 {
        let curve =
            std::fs::read_to_string(dir.path().join(format!("curve_alpha_{alpha}.csv"))).unwrap();
        assert_eq!(curve.lines().next().unwrap(), "n,s_pred,alpha");
        assert_eq!(curve.lines().count(), 201);
    }
    // (5, 5) lies on the alpha = 1 curve.
    let c1 = std::fs::read_to_string(dir.path().join("curve_alpha_1.csv")).unwrap();
    assert!(c1.lines().any(|l| l == "5,5,1"));
}

#[test]
fn trajectory_of_65() {
    let out = collatz().args(["trajectory", "65"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 28);
    assert_eq!(lines[1], "0,65,27,8");
    assert_eq!(lines[28], "27,1,0,0");
}

#[test]
fn sieve_depth_one_from_65() {
    let out = collatz()
        .args(["sieve", "--seed", "65:35", "--depth", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let row130 = text
        .lines()
        .find(|l| l.starts_with("130,"))
        .expect("row for 130");
    let prohibited = row130.rsplit(',').next().unwrap();
    let set: Vec<u64> = prohibited.split(';').map(|v| v.parse().unwrap()).collect();
    for p in [16, 27, 35] {
        assert!(set.contains(&p), "{p} missing from {row130}");
    }
}

#[test]
fn alpha_table_matches_paper_rows() {
    let out = collatz()
        .args(["alpha-table", "--limit", "640", "--alpha-max", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains(
        "alpha = 1: 5, 10, 20, 21, 40, 42, 80, 84, 85, 160, 168, 170, 320, 336, 340, 341, 640"
    ));
}
