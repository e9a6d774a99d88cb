use std::env;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;
use std::time::{Duration, Instant};

use hflcheck::{run as run_checker, RunReport, Verdict};
use parking_lot::Mutex;
use serde::Serialize;

use crate::check::load;
use crate::BenchArgs;

const POLL: Duration = Duration::from_millis(5);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Status {
    Ok,
    Timeout,
    Error,
}

#[derive(Debug, Serialize)]
struct Row {
    name: String,
    status: Status,
    verdict: Option<Verdict>,
    order: Option<usize>,
    num_eqs: Option<usize>,
    hes_size: Option<usize>,
    lts_states: Option<usize>,
    alternations: Option<usize>,
    gamma_size: Option<usize>,
    game_positions: Option<usize>,
    game_edges: Option<usize>,
    iterations: Option<usize>,
    parse_ms: Option<f64>,
    kind_ms: Option<f64>,
    flow_ms: Option<f64>,
    sat_ms: Option<f64>,
    game_ms: Option<f64>,
    solve_ms: Option<f64>,
    total_ms: Option<f64>,
}

impl Row {
    fn empty(name: &str, status: Status) -> Row {
        Row {
            name: name.to_string(),
            status,
            verdict: None,
            order: None,
            num_eqs: None,
            hes_size: None,
            lts_states: None,
            alternations: None,
            gamma_size: None,
            game_positions: None,
            game_edges: None,
            iterations: None,
            parse_ms: None,
            kind_ms: None,
            flow_ms: None,
            sat_ms: None,
            game_ms: None,
            solve_ms: None,
            total_ms: None,
        }
    }

    fn from_report(name: &str, r: RunReport) -> Row {
        Row {
            name: name.to_string(),
            status: Status::Ok,
            verdict: r.verdict,
            order: Some(r.order),
            num_eqs: Some(r.num_eqs),
            hes_size: Some(r.hes_size),
            lts_states: Some(r.lts_states),
            alternations: Some(r.alternations),
            gamma_size: Some(r.gamma_size),
            game_positions: Some(r.game_positions),
            game_edges: Some(r.game_edges),
            iterations: Some(r.iterations),
            parse_ms: Some(r.parse_ms),
            kind_ms: Some(r.kind_ms),
            flow_ms: Some(r.flow_ms),
            sat_ms: Some(r.sat_ms),
            game_ms: Some(r.game_ms),
            solve_ms: Some(r.solve_ms),
            total_ms: Some(r.total_ms),
        }
    }
}

/// Pairs `NAME.hes` with `NAME.lts`; a `.hes` without its `.lts` is kept so
/// that it shows up as an error row.
fn instances(dir: &Path) -> io::Result<Vec<(String, PathBuf, PathBuf)>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "hes") {
            let name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            out.push((name, path.with_extension("lts"), path));
        }
    }
    out.sort();
    Ok(out)
}

fn supervise(name: &str, hes: &Path, lts: &Path, timeout: Duration) -> Row {
    let exe = match env::current_exe() {
        Ok(p) => p,
        Err(_) => return Row::empty(name, Status::Error),
    };
    let child = Command::new(exe)
        .arg("worker")
        .arg(hes)
        .arg(lts)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn();
    let mut child = match child {
        Ok(c) => c,
        Err(_) => return Row::empty(name, Status::Error),
    };
    let start = Instant::now();
    loop {
        match child.try_wait() {
            Ok(Some(_)) => break,
            Ok(None) if start.elapsed() >= timeout => {
                let _ = child.kill();
                let _ = child.wait();
                return Row::empty(name, Status::Timeout);
            }
            Ok(None) => thread::sleep(POLL),
            Err(_) => return Row::empty(name, Status::Error),
        }
    }
    let out = match child.wait_with_output() {
        Ok(o) => o,
        Err(_) => return Row::empty(name, Status::Error),
    };
    if !out.status.success() {
        return Row::empty(name, Status::Error);
    }
    match serde_json::from_slice::<RunReport>(&out.stdout) {
        Ok(r) => Row::from_report(name, r),
        Err(_) => Row::empty(name, Status::Error),
    }
}

pub fn run(args: &BenchArgs) -> ExitCode {
    if !(args.timeout.is_finite() && args.timeout > 0.0) {
        eprintln!("error: --timeout must be positive");
        return ExitCode::from(2);
    }
    let list = match instances(&args.dir) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {}: {e}", args.dir.display());
            return ExitCode::from(2);
        }
    };
    let timeout = Duration::from_secs_f64(args.timeout);
    let next = AtomicUsize::new(0);
    let rows = Mutex::new(Vec::with_capacity(list.len()));
    thread::scope(|s| {
        for _ in 0..args.jobs.max(1) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some((name, lts, hes)) = list.get(i) else { break };
                let row = supervise(name, hes, lts, timeout);
                rows.lock().push(row);
            });
        }
    });
    let mut rows = rows.into_inner();
    rows.sort_by(|a, b| a.name.cmp(&b.name));
    let errors = rows.iter().filter(|r| r.status == Status::Error).count();
    let written = match &args.csv {
        Some(path) => fs::File::create(path).map_err(csv::Error::from).and_then(|f| write_csv(f, &rows)),
        None => write_csv(io::stdout().lock(), &rows),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if errors == 0 {
        ExitCode::SUCCESS
    } else {
        eprintln!("{errors} instance(s) failed");
        ExitCode::from(1)
    }
}

fn write_csv<W: io::Write>(w: W, rows: &[Row]) -> csv::Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    if rows.is_empty() {
        wr.write_record(HEADER)?;
    }
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

const HEADER: [&str; 19] = [
    "name",
    "status",
    "verdict",
    "order",
    "num_eqs",
    "hes_size",
    "lts_states",
    "alternations",
    "gamma_size",
    "game_positions",
    "game_edges",
    "iterations",
    "parse_ms",
    "kind_ms",
    "flow_ms",
    "sat_ms",
    "game_ms",
    "solve_ms",
    "total_ms",
];

pub fn worker(hes: &Path, lts: &Path) -> ExitCode {
    let t = Instant::now();
    let (hes, lts) = match load(hes, lts) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let parse_ms = t.elapsed().as_secs_f64() * 1000.0;
    match run_checker(&lts, &hes, &Default::default()) {
        Ok(mut out) => {
            out.report.parse_ms = parse_ms;
            out.report.total_ms = t.elapsed().as_secs_f64() * 1000.0;
            println!("{}", serde_json::to_string(&out.report).expect("report serializes"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
