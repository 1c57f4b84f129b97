use std::path::Path;
use std::process::{Command, Output};

fn fbcode(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fbcode"))
        .args(args)
        .env("FBCODE_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn counts_and_oracles() {
    let dir = tempfile::tempdir().unwrap();
    let o = fbcode(dir.path(), &["count", "mad", "--n", "14"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1092");
    let o = fbcode(dir.path(), &["count", "lift", "--prev", "50", "--n", "10"]);
    assert_eq!(stdout(&o).trim(), "92");
    let o = fbcode(dir.path(), &["oracle", "--game", "halflie", "--n", "8", "--check", "67"]);
    assert!(stdout(&o).contains("8\t67\tfalse"));
    let o = fbcode(dir.path(), &["bound", "--n", "7", "--m", "18"]);
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("7\t18\t1\t49\t"));
}

#[test]
fn golden_strategy_matches_export() {
    let dir = tempfile::tempdir().unwrap();
    let o = fbcode(dir.path(), &["export", "family", "length8"]);
    assert!(o.status.success());
    let golden = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/length8_strategy.json")).unwrap();
    assert_eq!(stdout(&o), golden);
}

#[test]
fn verify_accepts_good_and_reports_bad() {
    let dir = tempfile::tempdir().unwrap();
    let golden = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/length8_strategy.json");
    let o = fbcode(dir.path(), &["verify", golden]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1);

    // point the second message at the first one's second block
    let text = std::fs::read_to_string(golden).unwrap();
    let broken = text.replacen("\"000000\": \"01\"", "\"000000\": \"00\"", 1);
    assert_ne!(broken, text);
    let path = dir.path().join("broken.json");
    std::fs::write(&path, broken).unwrap();
    let o = fbcode(dir.path(), &["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn build_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    let o = fbcode(
        dir.path(),
        &["build", "--channel", "bsc", "--feedbacks", "2", "--n", "11", "--verify", "--out", out.to_str().unwrap()],
    );
    assert!(o.status.success());
    assert!(stdout(&o).contains("11\t2\t1+4+6\t170"));
    let o = fbcode(dir.path(), &["verify", out.to_str().unwrap()]);
    assert!(o.status.success());
}

#[test]
fn missing_cache_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = fbcode(dir.path(), &["reproduce", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--write-cache"));
}

#[test]
fn search_then_export() {
    let dir = tempfile::tempdir().unwrap();
    let o = fbcode(dir.path(), &["search", "--n", "6", "--write-cache"]);
    assert!(o.status.success());
    let o = fbcode(dir.path(), &["export", "code", "--n", "6", "--m", "12"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.matches("\"000000\"").count(), 1);
    let o = fbcode(dir.path(), &["build", "--channel", "z", "--feedbacks", "0", "--n", "6"]);
    assert!(o.status.success());
}

#[test]
fn table_one_and_five() {
    let dir = tempfile::tempdir().unwrap();
    for t in ["1", "5"] {
        let o = fbcode(dir.path(), &["reproduce", t]);
        assert!(o.status.success(), "table {t}");
        assert!(stdout(&o).starts_with("table\trow\tcolumn\texpected\tgot\tmode\tstatus\n"));
    }
}
