use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hflcheck"))
}

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn check(dir: &str, name: &str, extra: &[&str]) -> Output {
    let d = corpus().join(dir);
    bin()
        .arg("check")
        .arg(d.join(format!("{name}.hes")))
        .arg(d.join(format!("{name}.lts")))
        .args(extra)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const GOLDEN: [(&str, &str); 6] = [
    ("buchi", "valid"),
    ("ex3", "valid"),
    ("ex3-no-c", "invalid"),
    ("file-protocol", "valid"),
    ("mu-self", "invalid"),
    ("repeat", "valid"),
];

#[test]
fn exit_codes_follow_verdicts() {
    for (name, want) in GOLDEN {
        let o = check("golden", name, &[]);
        assert_eq!(stdout(&o), format!("{want}\n"), "{name}");
        assert_eq!(o.status.code(), Some(if want == "valid" { 0 } else { 1 }), "{name}");
    }
    for (name, want) in [("apply3", "valid"), ("pow2", "valid"), ("pow2-odd", "invalid")] {
        assert_eq!(stdout(&check("order3", name, &[])), format!("{want}\n"), "{name}");
    }
}

#[test]
fn naive_oracle_and_flags_agree() {
    for (name, want) in GOLDEN {
        for flags in [&["--naive-oracle"][..], &["--no-call-graph-opt"], &["--no-subsume"], &["--no-call-graph-opt", "--no-subsume"]] {
            assert_eq!(stdout(&check("golden", name, flags)), format!("{want}\n"), "{name} {flags:?}");
        }
    }
}

#[test]
fn dumps_go_to_stderr() {
    let tmp = TempDir::new().unwrap();
    let pg = tmp.path().join("game.pg");
    let o = check("golden", "ex3", &["--trace", "--dump-types", "--dump-flow", "--stats", "--dump-game", pg.to_str().unwrap()]);
    assert_eq!(stdout(&o), "valid\n");
    let err = stderr(&o);
    assert!(err.contains("iteration 2: {S : q0, S : q1, S : q2, F : T -> q0, F : T -> q2, F : q1 -> q1}"), "{err}");
    assert!(err.lines().any(|l| l == "F : T -> q2"), "{err}");
    let stats = err.lines().find(|l| l.starts_with('{') && l.contains("\"verdict\"")).unwrap();
    let v: serde_json::Value = serde_json::from_str(stats).unwrap();
    assert_eq!(v["verdict"], "valid");
    assert_eq!(v["gamma_size"], 6);
    assert_eq!(v["iterations"], 2);
    let game = fs::read_to_string(&pg).unwrap();
    assert!(game.starts_with("parity "), "{game}");
}

#[test]
fn broken_inputs_exit_two() {
    let tmp = TempDir::new().unwrap();
    let lts = corpus().join("golden/ex3.lts");
    for (i, src) in ["S =v <a", "S =v F;", "S =v \\X. X;", "S =v F true;\nF =v <a> true;"].iter().enumerate() {
        let p = tmp.path().join(format!("bad{i}.hes"));
        fs::write(&p, src).unwrap();
        let o = bin().arg("check").arg(&p).arg(&lts).output().unwrap();
        assert_eq!(o.status.code(), Some(2), "{src}");
        assert!(stdout(&o).is_empty(), "{src}");
        assert!(stderr(&o).starts_with("error: "), "{src}");
    }
    let o = bin().arg("check").arg(tmp.path().join("missing.hes")).arg(&lts).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = bin().arg("check").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

fn read_rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path).unwrap().records().map(Result::unwrap).collect()
}

fn bench(dir: &Path, csv: &Path, extra: &[&str]) -> Output {
    bin().arg("bench").arg(dir).arg("--csv").arg(csv).args(extra).output().unwrap()
}

#[test]
fn bench_golden_directory() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("golden.csv");
    let o = bench(&corpus().join("golden"), &out, &["--timeout", "30", "--jobs", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut rd = csv::Reader::from_path(&out).unwrap();
    let header: Vec<String> = rd.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header.len(), 19);
    assert_eq!(&header[..3], ["name", "status", "verdict"]);
    assert_eq!(header.last().unwrap(), "total_ms");
    let rows = read_rows(&out);
    assert_eq!(rows.len(), 6);
    for (row, (name, want)) in rows.iter().zip(GOLDEN) {
        assert_eq!(&row[0], name);
        assert_eq!(&row[1], "ok");
        assert_eq!(&row[2], want);
    }
}

#[test]
fn bench_is_deterministic_up_to_timings() {
    let tmp = TempDir::new().unwrap();
    let sizes = |p: &Path| -> Vec<Vec<String>> {
        read_rows(p).iter().map(|r| r.iter().take(12).map(String::from).collect()).collect()
    };
    let (a, b) = (tmp.path().join("a.csv"), tmp.path().join("b.csv"));
    bench(&corpus().join("golden"), &a, &["--jobs", "1"]);
    bench(&corpus().join("golden"), &b, &["--jobs", "4"]);
    assert_eq!(sizes(&a), sizes(&b));
}

#[test]
fn bench_empty_and_missing_directories() {
    let tmp = TempDir::new().unwrap();
    let empty = tmp.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let out = tmp.path().join("empty.csv");
    let o = bench(&empty, &out, &[]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("name,status,verdict,"));
    let o = bench(&tmp.path().join("nowhere"), &out, &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_reports_timeouts_and_errors() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    fs::copy(corpus().join("order3/pow2.hes"), dir.join("slow.hes")).unwrap();
    let mut lts = String::from("initial q0\n");
    for i in 0..16 {
        lts += &format!("q{i} a q{}\n", i + 1);
    }
    lts += "q16 end q17\n";
    fs::write(dir.join("slow.lts"), lts).unwrap();
    fs::copy(corpus().join("golden/ex3.hes"), dir.join("fast.hes")).unwrap();
    fs::copy(corpus().join("golden/ex3.lts"), dir.join("fast.lts")).unwrap();
    let out = tmp.path().join("rows.csv");
    let o = bench(dir, &out, &["--timeout", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = read_rows(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!((&rows[0][0], &rows[0][1], &rows[0][2]), ("fast", "ok", "valid"));
    assert_eq!((&rows[1][0], &rows[1][1], &rows[1][2]), ("slow", "timeout", ""));

    fs::write(dir.join("broken.hes"), "S =v <a").unwrap();
    fs::write(dir.join("broken.lts"), "initial q0\n").unwrap();
    fs::write(dir.join("lonely.hes"), "S =v true;").unwrap();
    let o = bench(dir, &out, &["--timeout", "1", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let rows = read_rows(&out);
    let status: Vec<(&str, &str)> = rows.iter().map(|r| (&r[0], &r[1])).collect();
    assert_eq!(status, [("broken", "error"), ("fast", "ok"), ("lonely", "error"), ("slow", "timeout")]);
}

#[test]
fn selftest_passes() {
    let o = bin().arg("selftest").output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("selftest passed"));
    let again = bin().arg("selftest").output().unwrap();
    assert_eq!(stdout(&o), stdout(&again));
}
