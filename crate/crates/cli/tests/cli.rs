use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn golden() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/golden")
}

fn dsmeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dsmeta"))
        .args(args)
        .env_remove("DSMETA_CONFIG")
        .output()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn build_golden(out: &Path) -> Output {
    dsmeta(&["build", "--source", p(&golden().join("pages")), "--out", p(out), "--date", "2026-06-30"])
}

#[test]
fn build_and_analyze_reproduce_golden_files() {
    let tmp = tempfile::tempdir().unwrap();
    let snap = tmp.path().join("snap");
    let o = build_golden(&snap);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("records\t200\n"));
    for f in ["records.jsonl", "manifest.json"] {
        assert_eq!(fs::read(snap.join(f)).unwrap(), fs::read(golden().join("expected/snapshot").join(f)).unwrap());
    }

    let report = tmp.path().join("report");
    let o = dsmeta(&[
        "analyze",
        "--snapshot",
        p(&snap),
        "--compare",
        p(&golden().join("old")),
        "--report",
        p(&report),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        fs::read_to_string(report.join("report.md")).unwrap(),
        fs::read_to_string(golden().join("expected/report/report.md")).unwrap()
    );

    let csv = tmp.path().join("csv");
    let o = dsmeta(&["analyze", "--snapshot", p(&snap), "--report", p(&csv), "--format", "csv"]);
    assert!(o.status.success());
    let summary = fs::read_to_string(csv.join("summary.csv")).unwrap();
    assert!(summary.contains("top_10_domain_share,0.650000"), "{summary}");
    assert!(csv.join("domains.csv").exists());
}

#[test]
fn churn_and_usage() {
    let tmp = tempfile::tempdir().unwrap();
    let snap = tmp.path().join("snap");
    assert!(build_golden(&snap).status.success());

    let o = dsmeta(&["churn", "--old", p(&golden().join("old")), "--new", p(&snap)]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("retained\t63\n") && out.contains("retention_share\t0.630000\n"), "{out}");

    let records = fs::read_to_string(snap.join("records.jsonl")).unwrap();
    let ids: Vec<String> = records
        .lines()
        .take(3)
        .map(serde_id)
        .collect();
    let log = tmp.path().join("log.txt");
    fs::write(&log, format!("{}\n{}\n{}\n{}\nnot-a-known-id\n", ids[0], ids[1], ids[2], ids[0])).unwrap();
    let o = dsmeta(&["usage", "--snapshot", p(&snap), "--log", p(&log)]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("log_entries\t5\n") && out.contains("matched\t3\n") && out.contains("unknown\t1\n"), "{out}");
}

fn serde_id(line: &str) -> String {
    let start = line.find("\"id\":\"").unwrap() + 6;
    line[start..start + 32].to_string()
}

#[test]
fn validate_page_reports_records_and_problems() {
    let page = golden().join("pages/data.gouv.fr/search-1.html");
    let o = dsmeta(&["validate-page", p(&page), "--url", "https://data.gouv.fr/search?page=1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("triples\tjsonld\t") && out.contains("datasets\t3\n"), "{out}");

    let draft = golden().join("pages/data.gouv.fr/draft.html");
    let o = dsmeta(&["validate-page", p(&draft), "--url", "https://data.gouv.fr/draft"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("missing description"));
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let o = dsmeta(&["build", "--source", p(&tmp.path().join("nope")), "--out", p(&tmp.path().join("s"))]);
    assert_eq!(o.status.code(), Some(1));

    let config = tmp.path().join("config");
    assert!(dsmeta(&["init-config", p(&config)]).status.success());
    assert!(config.join("SHA256SUMS").exists());
    let snap = tmp.path().join("snap");
    let o = dsmeta(&[
        "build",
        "--source",
        p(&golden().join("pages")),
        "--config",
        p(&config),
        "--out",
        p(&snap),
        "--date",
        "2026-06-30",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    // Same config content, so the same snapshot as the bundled defaults.
    assert_eq!(
        fs::read(snap.join("records.jsonl")).unwrap(),
        fs::read(golden().join("expected/snapshot/records.jsonl")).unwrap()
    );
    // Snapshots are never overwritten.
    assert_eq!(build_golden(&snap).status.code(), Some(1));

    fs::write(config.join("topics.tsv"), "geosciences\tbathymetry\t1\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_dsmeta"))
        .args(["build", "--source", p(&golden().join("pages")), "--out", p(&tmp.path().join("s2"))])
        .env("DSMETA_CONFIG", &config)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("topics.tsv"));
}
