use std::process::Command;

use stsdisc_cli::render::render;
use stsdisc_cli::report::ExperimentReport;

fn stsdisc(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_stsdisc")).args(args).output().unwrap()
}

fn stdout(out: &std::process::Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn enumerate_count_only() {
    let out = stsdisc(&["enumerate", "--n", "7", "--count-only"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "30");
}

#[test]
fn delta2_formula_table() {
    let out = stsdisc(&["delta2-formula", "--n", "7,9,15"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("1,6") && text.contains("0.5"), "{text}");
    assert!(text.contains("3,12"), "{text}");
}

#[test]
fn basin_histogram_at_n9() {
    let out = stsdisc(&["basin", "--n", "9"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for needle in ["1176", "1925", "385", "3486"] {
        assert!(text.contains(needle), "{needle} missing from\n{text}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(stsdisc(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(stsdisc(&["enumerate", "--n", "seven"]).status.code(), Some(2));
    assert_eq!(stsdisc(&["construct", "--n", "8"]).status.code(), Some(3));
    assert_eq!(stsdisc(&["enumerate", "--n", "13"]).status.code(), Some(3));
    let out = stsdisc(&["exact-search", "--n", "9", "--budget", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("proved optimal  false"));
}

#[test]
fn export_import_roundtrip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sts13.txt");
    let p = path.to_str().unwrap();
    assert!(stsdisc(&["export-sts", "--n", "13", "--index", "3", "--out", p])
        .status
        .success());
    let out = stsdisc(&["import-sts", p]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("STS(13) with 26 blocks"));

    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    let last = lines.len() - 1;
    lines.swap(1, last);
    lines[last] = "0 1 2";
    lines[1] = "0 1 3";
    let corrupted = dir.path().join("bad.txt");
    std::fs::write(&corrupted, lines.join("\n")).unwrap();
    let c = corrupted.to_str().unwrap();

    let out = stsdisc(&["import-sts", c]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pair"));

    let out = stsdisc(&["verify-all", "--only", "2", "--sts", p, "--sts", c]);
    let text = stdout(&out);
    assert!(text.contains("[FAIL]") && text.contains("pair"), "{text}");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_roundtrip_and_render_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 4] = [
        &["delta2-formula"],
        &[
            "random-stats",
            "--n",
            "7,13",
            "--r",
            "2,3",
            "--trials",
            "50",
            "--labellings",
            "20",
        ],
        &[
            "sa",
            "--n",
            "13",
            "--r",
            "3",
            "--restarts",
            "4",
            "--steps",
            "2000",
            "--labellings",
            "20",
        ],
        &["zero-disc", "--n", "9"],
    ];
    for (i, args) in cases.into_iter().enumerate() {
        let path = dir.path().join(format!("r{i}.json"));
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--out", path.to_str().unwrap()]);
        let out = stsdisc(&full);
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let report = ExperimentReport::read(&path).unwrap();
        assert_eq!(render(&report), stdout(&out), "{args:?}");
        let again = ExperimentReport::from_json(&report.to_json().unwrap()).unwrap();
        assert_eq!(again, report);
        assert_eq!(render(&again), render(&report));
    }
}

#[test]
fn seeded_runs_reproduce_results() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = stsdisc(&[
            "sa",
            "--n",
            "13",
            "--restarts",
            "4",
            "--steps",
            "3000",
            "--labellings",
            "20",
            "--seed",
            "7",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        ExperimentReport::read(&path).unwrap().without_timing()
    };
    assert_eq!(run("a.json").to_json().unwrap(), run("b.json").to_json().unwrap());
}

#[test]
fn checkpoint_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.json");
    let cps = cp.to_str().unwrap();
    let out = stsdisc(&["zero-disc", "--n", "9", "--budget", "5", "--checkpoint", cps]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("unknown"));
    assert!(cp.exists());
    let out = stsdisc(&["zero-disc", "--n", "9", "--resume", cps]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("feasible"));
}
