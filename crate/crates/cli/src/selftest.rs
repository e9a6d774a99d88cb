use std::process::ExitCode;

use hflcheck::corpus;
use hflcheck::game::{build_full_game, solve_parity};
use hflcheck::gen::{random_instance, GenConfig, Instance};
use hflcheck::oracle::check_naive;
use hflcheck::rtypes::Types;
use hflcheck::syntax::infer_kinds;
use hflcheck::{check, check_with_oracle, parse_hes, parse_lts, Options, Result, Verdict};

const FULL_GAME_INSTANCES: u64 = 50;
const END_TO_END_INSTANCES: u64 = 100;
/// Highest order at which corpus verdicts are also checked against the oracle.
const ORACLE_MAX_ORDER: usize = 2;

fn full_game(inst: &Instance) -> Result<Verdict> {
    let types = Types::new(&inst.lts);
    let tg = build_full_game(&inst.lts, &inst.hes, &types)?;
    Ok(Verdict::from_bool(solve_parity(&tg.game).winner[tg.game.init] == 0))
}

fn oracle(inst: &Instance) -> Result<Verdict> {
    Ok(Verdict::from_bool(check_naive(&inst.lts, &inst.hes)?))
}

/// Runs `decide` against the oracle on seeded instances; returns the failure count.
fn suite(title: &str, seeds: std::ops::Range<u64>, decide: impl Fn(&Instance) -> Result<Verdict>) -> usize {
    let cfg = GenConfig::default();
    let total = seeds.end - seeds.start;
    let mut failures = 0;
    for seed in seeds {
        let inst = random_instance(seed, &cfg, 2);
        match (decide(&inst), oracle(&inst)) {
            (Ok(a), Ok(b)) if a == b => {}
            (a, b) => {
                failures += 1;
                println!("FAILED  {title} seed {seed}: {a:?}, oracle {b:?}");
            }
        }
    }
    let status = if failures == 0 { "ok    " } else { "FAILED" };
    println!("{status}  {title}: {}/{total} agree with the oracle", total as usize - failures);
    failures
}

pub fn run() -> ExitCode {
    let mut failures = 0;
    for e in corpus::all() {
        let got = parse_hes(e.hes)
            .and_then(|hes| Ok((hes, parse_lts(e.lts)?)))
            .and_then(|(hes, lts)| Ok((infer_kinds(&hes)?, lts)))
            .and_then(|(hes, lts)| {
                let naive = (hes.order() <= ORACLE_MAX_ORDER).then(|| check_with_oracle(&lts, &hes)).transpose()?;
                Ok((check(&lts, &hes, &Options::default())?, naive))
            });
        match got {
            Ok((v, naive)) if v == e.expected && naive.is_none_or(|n| n == v) => println!("ok      {:<16} {v}", e.name),
            Ok((v, naive)) => {
                failures += 1;
                println!("FAILED  {:<16} {v}, oracle {naive:?}, expected {}", e.name, e.expected);
            }
            Err(err) => {
                failures += 1;
                println!("FAILED  {:<16} {err}", e.name);
            }
        }
    }
    failures += suite("full game", 0..FULL_GAME_INSTANCES, full_game);
    failures += suite("saturation", 1000..1000 + END_TO_END_INSTANCES, |i| check(&i.lts, &i.hes, &Options::default()));
    if failures == 0 {
        println!("selftest passed");
        ExitCode::SUCCESS
    } else {
        println!("selftest: {failures} failure(s)");
        ExitCode::from(1)
    }
}
