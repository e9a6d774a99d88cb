use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use hflcheck::syntax::infer_kinds;
use hflcheck::{check_with_oracle, parse_hes, parse_lts, Error, Hes, Lts, Options, RunReport, Verdict};

use crate::CheckArgs;

pub fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn load(hes: &Path, lts: &Path) -> Result<(Hes, Lts), String> {
    let h = parse_hes(&read(hes)?).map_err(|e| format!("{}: {e}", hes.display()))?;
    let l = parse_lts(&read(lts)?).map_err(|e| format!("{}: {e}", lts.display()))?;
    Ok((h, l))
}

fn exit_for(v: Verdict) -> ExitCode {
    match v {
        Verdict::Valid => ExitCode::SUCCESS,
        Verdict::Invalid => ExitCode::from(1),
    }
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn naive(args: &CheckArgs, hes: &Hes, lts: &Lts) -> Result<Verdict, Error> {
    let t = Instant::now();
    let v = check_with_oracle(lts, hes)?;
    if args.stats {
        let hes = infer_kinds(hes)?;
        let report = RunReport {
            verdict: Some(v),
            order: hes.order(),
            num_eqs: hes.len(),
            hes_size: hes.size(),
            lts_states: lts.num_states(),
            alternations: hes.alternations(),
            total_ms: t.elapsed().as_secs_f64() * 1000.0,
            ..RunReport::default()
        };
        eprintln!("{}", serde_json::to_string(&report).expect("report serializes"));
    }
    Ok(v)
}

pub fn run(args: &CheckArgs) -> ExitCode {
    let t = Instant::now();
    let (hes, lts) = match load(&args.hes, &args.lts) {
        Ok(x) => x,
        Err(e) => return fail(e),
    };
    let parse_ms = t.elapsed().as_secs_f64() * 1000.0;
    if args.naive_oracle {
        return match naive(args, &hes, &lts) {
            Ok(v) => {
                println!("{v}");
                exit_for(v)
            }
            Err(e) => fail(e),
        };
    }
    let opts = Options { restrict_gamma0: !args.no_call_graph_opt, subsume: !args.no_subsume, trace: args.trace };
    let mut out = match hflcheck::run(&lts, &hes, &opts) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    out.report.parse_ms = parse_ms;
    out.report.total_ms = t.elapsed().as_secs_f64() * 1000.0;
    if args.dump_flow {
        eprint!("{}", out.flow.render(&out.hes));
    }
    if args.trace {
        eprint!("{}", out.saturation.trace(&out.hes, &out.types));
    }
    if args.dump_types {
        for b in out.saturation.gamma.sorted(&out.types) {
            eprintln!("{}", b.render(&out.hes, &out.types));
        }
    }
    if let Some(path) = &args.dump_game {
        if let Err(e) = fs::write(path, out.game.game.to_pgsolver()) {
            return fail(format!("{}: {e}", path.display()));
        }
    }
    if args.stats {
        eprintln!("{}", serde_json::to_string(&out.report).expect("report serializes"));
    }
    println!("{}", out.verdict);
    exit_for(out.verdict)
}
