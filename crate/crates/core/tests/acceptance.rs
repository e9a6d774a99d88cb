//! Acceptance criteria 1 to 9. Prints one PASS/FAIL line per criterion.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hflcheck::corpus;
use hflcheck::flow::{compute_flow, FlowMap};
use hflcheck::game::{brute_force, build_full_game, small_progress_measures, solve_parity, zielonka};
use hflcheck::gen::{self, random_instance, GenConfig, Instance};
use hflcheck::oracle::check_naive;
use hflcheck::rtypes::{types_of, Binding, TypeEnv, Types};
use hflcheck::saturation::{expand, saturate, saturate_from, SaturationState};
use hflcheck::syntax::{approximate, exact_flow, unfold_step, Formula, VarRef};
use hflcheck::{check, run, run_text, Hes, Lts, Options, Verdict};
use rand::seq::SliceRandom;
use rand::Rng;

const EXAMPLE_LIMIT: Duration = Duration::from_secs(1);
const FULL_GAME_LIMIT: Duration = Duration::from_secs(60);
const END_TO_END_LIMIT: Duration = Duration::from_secs(300);
const CORPUS_LIMIT: Duration = Duration::from_secs(10);

const FULL_GAME_INSTANCES: u64 = 200;
const END_TO_END_INSTANCES: u64 = 1000;
const LEMMA1_PAIRS: usize = 200;
const LEMMA4_INSTANCES: u64 = 50;
const SOLVER_GAMES: usize = 100;

const FIG3: &str = "initial q0\nq0 a q1\nq1 b q2\nq2 a q0\nq0 c q0\n";
const EX3: &str = "S =v <a> (F (<b> S));\nF =m \\X. X \\/ <c> S \\/ <a> (F (<b> X));\n";
const L2: &str = "initial q0\nq0 read q0\nq0 close q1\nq1 end q2\n";
const PHI2: &str = "S =v F (<end> true);\nF =v \\k. <close> k /\\ <read> <read> (F k);\n";

type Outcome = Result<String, String>;

fn flag_combos() -> [Options; 4] {
    let mut out = [Options::default(); 4];
    for (i, o) in out.iter_mut().enumerate() {
        o.restrict_gamma0 = i & 1 == 0;
        o.subsume = i & 2 == 0;
    }
    out
}

fn sorted_bindings(env: &TypeEnv, hes: &Hes, types: &Types) -> Vec<String> {
    let mut v: Vec<String> = env.iter().map(|b| b.render(hes, types)).collect();
    v.sort();
    v
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<Duration, String> {
    let e = t.elapsed();
    ensure(e < limit, || format!("took {e:.2?}, limit {limit:?}"))?;
    Ok(e)
}

fn criterion1() -> Outcome {
    let t = Instant::now();
    let verdict = run_text(EX3, FIG3, &Options::default()).map_err(|e| e.to_string())?.verdict;
    ensure(verdict == Verdict::Valid, || format!("verdict {verdict}"))?;
    let opts = Options { restrict_gamma0: false, subsume: true, trace: false };
    let out = run_text(EX3, FIG3, &opts).map_err(|e| e.to_string())?;
    let (hes, types, st) = (&out.hes, &out.types, &out.saturation);
    let gamma = sorted_bindings(&st.gamma, hes, types);
    let want = ["F : T -> q0", "F : T -> q2", "F : q1 -> q1", "S : q0", "S : q1", "S : q2"];
    ensure(gamma == want, || format!("final gamma {gamma:?}"))?;
    ensure(st.iterations() == 2, || format!("{} productive iterations", st.iterations()))?;
    let deltas: Vec<Vec<String>> = st
        .deltas
        .iter()
        .map(|d| {
            let mut v: Vec<String> = d.iter().map(|b| b.render(hes, types)).collect();
            v.sort();
            v
        })
        .collect();
    ensure(deltas == [vec!["F : T -> q0", "F : q1 -> q1"], vec!["F : T -> q2"]], || format!("deltas {deltas:?}"))?;
    let e = within(t, EXAMPLE_LIMIT)?;
    Ok(format!("valid, gamma of 6, deltas match, {e:.2?}"))
}

fn criterion2() -> Outcome {
    let t = Instant::now();
    let verdict = run_text(PHI2, L2, &Options::default()).map_err(|e| e.to_string())?.verdict;
    ensure(verdict == Verdict::Valid, || format!("verdict {verdict}"))?;
    let e = within(t, EXAMPLE_LIMIT)?;
    Ok(format!("valid, {e:.2?}"))
}

fn describe(inst: &Instance) -> String {
    format!("\n{}{}", inst.hes_text, inst.lts)
}

fn full_game_suite() -> Vec<Instance> {
    let cfg = GenConfig { max_order: 1, max_eqs: 3, max_depth: 3, ..GenConfig::default() };
    (0..FULL_GAME_INSTANCES).map(|s| random_instance(s, &cfg, 2)).collect()
}

fn end_to_end_suite() -> Vec<Instance> {
    // the order-2 oracle domain is only tractable on two states
    let low = GenConfig { max_order: 1, max_eqs: 4, max_alternations: 2, max_depth: 4, ..GenConfig::default() };
    let high = GenConfig { max_order: 2, ..low.clone() };
    (0..END_TO_END_INSTANCES)
        .map(|i| {
            let seed = 10_000 + i;
            if i % 2 == 0 {
                random_instance(seed, &low, 3)
            } else {
                random_instance(seed, &high, 2)
            }
        })
        .collect()
}

fn criterion3(suite: &[Instance]) -> Outcome {
    let t = Instant::now();
    let mut valid = 0;
    for (i, inst) in suite.iter().enumerate() {
        let types = Types::new(&inst.lts);
        let tg = build_full_game(&inst.lts, &inst.hes, &types).map_err(|e| format!("instance {i}: {e}"))?;
        let won = solve_parity(&tg.game).winner[tg.game.init] == 0;
        let naive = check_naive(&inst.lts, &inst.hes).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(won == naive, || format!("instance {i}: game {won}, oracle {naive}{}", describe(inst)))?;
        valid += usize::from(naive);
    }
    let e = within(t, FULL_GAME_LIMIT)?;
    Ok(format!("{} instances agree ({valid} valid), {e:.2?}", suite.len()))
}

fn criterion4(suite: &[Instance]) -> Outcome {
    let t = Instant::now();
    let mut valid = 0;
    for (i, inst) in suite.iter().enumerate() {
        let got = check(&inst.lts, &inst.hes, &Options::default()).map_err(|e| format!("instance {i}: {e}"))?;
        let naive = check_naive(&inst.lts, &inst.hes).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(got.is_valid() == naive, || format!("instance {i}: check {got}, oracle {naive}{}", describe(inst)))?;
        valid += usize::from(naive);
    }
    let e = within(t, END_TO_END_LIMIT)?;
    Ok(format!("{} instances agree ({valid} valid), {e:.2?}", suite.len()))
}

fn typable(lts: &Lts, hes: &Hes, types: &Types, gamma: &TypeEnv, f: &Formula, q: usize) -> Result<bool, String> {
    Ok(types_of(lts, hes, types, gamma, f).map_err(|e| e.to_string())?.contains(&types.atom(q)))
}

fn criterion5() -> Outcome {
    let cfg = GenConfig { max_order: 1, max_eqs: 3, max_depth: 3, ..GenConfig::default() };
    let opts = Options { restrict_gamma0: false, subsume: false, trace: false };
    let (mut pairs, mut judgments, mut seed) = (0, 0, 0u64);
    while pairs < LEMMA1_PAIRS {
        ensure(seed < 20_000, || format!("only {pairs} non-vacuous pairs found"))?;
        let inst = random_instance(seed, &cfg, 2);
        let mut r = gen::rng(seed ^ 0x5eed);
        seed += 1;
        let e = approximate(&inst.hes, 1 + (seed % 2) as u32).map_err(|e| e.to_string())?;
        let Ok(sets) = exact_flow(&e, None, 5_000) else { continue };
        let flow = FlowMap::from_sets(sets);
        let types = Types::new(&inst.lts);
        let mut pool = Vec::new();
        for (j, eq) in e.equations().iter().enumerate() {
            let refs = types.refinements(eq.kind()).map_err(|e| e.to_string())?;
            pool.extend(refs.into_iter().map(|t| Binding::eq(j, t)));
        }
        let mut phi = Formula::var(e.entry().name.clone());
        for _ in 0..4 {
            let Some(next) = unfold_step(&phi, &e).choose(&mut r).cloned() else { break };
            let mut tested = false;
            for _ in 0..4 {
                let mut gamma = TypeEnv::new();
                for b in &pool {
                    if r.gen_bool(0.4) {
                        gamma.insert(*b);
                    }
                }
                let mut st = SaturationState { gamma: gamma.clone(), initial: gamma.clone(), ..Default::default() };
                expand(&mut st, &inst.lts, &e, &types, &flow, &opts);
                for q in 0..inst.lts.num_states() {
                    if !typable(&inst.lts, &e, &types, &gamma, &next, q)? {
                        continue;
                    }
                    tested = true;
                    judgments += 1;
                    ensure(typable(&inst.lts, &e, &types, &st.gamma, &phi, q)?, || {
                        format!(
                            "{phi} -> {next} at q{q} under {}{}",
                            gamma.render(&e, &types),
                            describe(&inst)
                        )
                    })?;
                }
            }
            pairs += usize::from(tested);
            phi = next;
        }
    }
    Ok(format!("{pairs} pairs, {judgments} non-vacuous judgments expanded"))
}

fn base_name(name: &str) -> &str {
    name.split('^').next().unwrap_or(name)
}

fn criterion6() -> Outcome {
    let cfg = GenConfig { max_order: 1, max_eqs: 3, max_depth: 3, ..GenConfig::default() };
    let opts = Options { restrict_gamma0: false, subsume: false, trace: false };
    let mut checked = 0;
    for seed in 0..LEMMA4_INSTANCES {
        let inst = random_instance(20_000 + seed, &cfg, 2);
        let types = Types::new(&inst.lts);
        let full = saturate(&inst.lts, &inst.hes, &types, &compute_flow(&inst.hes), &opts);
        for m in 1..=2 {
            let em = approximate(&inst.hes, m).map_err(|e| e.to_string())?;
            let flow = FlowMap::from_sets(exact_flow(&em, None, 100_000).map_err(|e| e.to_string())?);
            let st = saturate_from(&inst.lts, &em, &types, &flow, &opts, TypeEnv::new());
            for b in st.gamma.iter() {
                let VarRef::Eq(j) = b.var else { continue };
                let k = inst.hes.eq_index(base_name(em.eq(j).name.as_ref())).ok_or("unknown equation")?;
                let erased = Binding::eq(k, b.ty);
                ensure(full.gamma.contains(&erased), || {
                    format!(
                        "m = {m}: {} not in {}{}",
                        b.render(&em, &types),
                        full.gamma.render(&inst.hes, &types),
                        describe(&inst)
                    )
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{LEMMA4_INSTANCES} instances, m in 1..=2, {checked} erased bindings contained"))
}

fn criterion7(suites: &[&[Instance]]) -> Outcome {
    let mut n = 0;
    let examples = [(EX3, FIG3), (PHI2, L2)];
    for (hes, lts) in examples {
        let vs: Vec<Verdict> =
            flag_combos().iter().map(|o| run_text(hes, lts, o).map(|r| r.verdict)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        ensure(vs.iter().all(|v| *v == vs[0]), || format!("verdicts {vs:?} on\n{hes}"))?;
        n += 1;
    }
    for inst in suites.iter().flat_map(|s| s.iter()) {
        let vs: Vec<Verdict> = flag_combos()
            .iter()
            .map(|o| check(&inst.lts, &inst.hes, o))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        ensure(vs.iter().all(|v| *v == vs[0]), || format!("verdicts {vs:?}{}", describe(inst)))?;
        n += 1;
    }
    Ok(format!("{n} instances, 4 flag combinations each"))
}

fn criterion8() -> Outcome {
    let mut r = gen::rng(8);
    let mut positions = 0;
    for i in 0..SOLVER_GAMES {
        let n = r.gen_range(1..=30);
        let g = gen::random_game(&mut r, n, 6);
        let z = zielonka(&g).winner;
        let s = small_progress_measures(&g);
        let b = brute_force(&g);
        ensure(z == s && z == b, || format!("game {i}: zielonka {z:?} spm {s:?} brute {b:?}\n{}", g.to_pgsolver()))?;
        positions += n;
    }
    Ok(format!("{SOLVER_GAMES} games, {positions} positions"))
}

fn criterion9() -> Outcome {
    let mut slowest = Duration::ZERO;
    for inst in corpus::all() {
        let t = Instant::now();
        let out = run_text(inst.hes, inst.lts, &Options::default()).map_err(|e| format!("{}: {e}", inst.name))?;
        let e = t.elapsed();
        ensure(out.verdict == inst.expected, || format!("{}: verdict {}", inst.name, out.verdict))?;
        ensure(e < CORPUS_LIMIT, || format!("{}: took {e:.2?}", inst.name))?;
        slowest = slowest.max(e);
    }
    let lts = hflcheck::parse_lts(gen::CHAIN_LTS).map_err(|e| e.to_string())?;
    let mut csv = String::from("n,hes_size,gamma_size,game_positions,total_ms\n");
    for n in [1, 2, 4, 8, 16, 32] {
        let hes = hflcheck::parse_hes(&gen::chain_hes_text(n)).map_err(|e| e.to_string())?;
        let out = run(&lts, &hes, &Options::default()).map_err(|e| e.to_string())?;
        ensure(out.verdict == Verdict::Valid, || format!("chain {n}: {}", out.verdict))?;
        let r = &out.report;
        writeln!(csv, "{n},{},{},{},{:.3}", r.hes_size, r.gamma_size, r.game_positions, r.total_ms).unwrap();
    }
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("growth.csv");
    std::fs::write(&path, &csv).map_err(|e| e.to_string())?;
    print!("{csv}");
    Ok(format!("{} corpus instances, slowest {slowest:.2?}, growth in {}", corpus::all().count(), path.display()))
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() -> ExitCode {
    let small = full_game_suite();
    let large = end_to_end_suite();
    let criteria: Vec<(&str, Criterion<'_>)> = vec![
        ("1 running example and saturation trace", Box::new(criterion1)),
        ("2 read-only file protocol", Box::new(criterion2)),
        ("3 full typability game vs oracle", Box::new(|| criterion3(&small))),
        ("4 check vs oracle", Box::new(|| criterion4(&large))),
        ("5 subject expansion", Box::new(criterion5)),
        ("6 approximation containment", Box::new(criterion6)),
        ("7 flag invariance", Box::new(|| criterion7(&[&small, &large]))),
        ("8 parity solvers agree", Box::new(criterion8)),
        ("9 corpus and growth", Box::new(criterion9)),
    ];
    let mut failed = 0;
    for (name, f) in &criteria {
        match f() {
            Ok(msg) => println!("criterion {name}: PASS ({msg})"),
            Err(msg) => {
                failed += 1;
                println!("criterion {name}: FAIL ({msg})");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
