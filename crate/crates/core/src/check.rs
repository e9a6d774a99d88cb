//! The full pipeline: kinds, flow, saturation, subgame, solving.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::flow::{compute_flow, FlowMap};
use crate::game::{build_subgame, solve_parity, Solution, TypabilityGame};
use crate::oracle::check_naive;
use crate::rtypes::Types;
use crate::saturation::{saturate, Options, SaturationState};
use crate::syntax::{infer_kinds, parse_hes, parse_lts, Hes, Lts};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Valid,
    Invalid,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Valid
        } else {
            Verdict::Invalid
        }
    }

    pub fn is_valid(self) -> bool {
        self == Verdict::Valid
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Valid => "valid",
            Verdict::Invalid => "invalid",
        })
    }
}

/// Timings in milliseconds and sizes of one run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub verdict: Option<Verdict>,
    pub order: usize,
    pub num_eqs: usize,
    pub hes_size: usize,
    pub lts_states: usize,
    pub alternations: usize,
    pub gamma_size: usize,
    pub game_positions: usize,
    pub game_edges: usize,
    pub iterations: usize,
    pub parse_ms: f64,
    pub kind_ms: f64,
    pub flow_ms: f64,
    pub sat_ms: f64,
    pub game_ms: f64,
    pub solve_ms: f64,
    pub total_ms: f64,
}

/// Everything computed by one run of the checker.
pub struct Outcome {
    pub verdict: Verdict,
    pub hes: Hes,
    pub types: Types,
    pub flow: FlowMap,
    pub saturation: SaturationState,
    pub game: TypabilityGame,
    pub solution: Solution,
    pub report: RunReport,
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1000.0
}

/// Runs the pipeline on an already parsed system.
pub fn run(lts: &Lts, hes: &Hes, opts: &Options) -> Result<Outcome> {
    let start = Instant::now();
    let mut report = RunReport::default();
    let t = Instant::now();
    let hes = infer_kinds(hes)?;
    report.kind_ms = ms(t);
    let t = Instant::now();
    let flow = compute_flow(&hes);
    report.flow_ms = ms(t);
    let types = Types::new(lts);
    let t = Instant::now();
    let saturation = saturate(lts, &hes, &types, &flow, opts);
    report.sat_ms = ms(t);
    let t = Instant::now();
    let game = build_subgame(lts, &hes, &types, &saturation.gamma, opts.subsume);
    report.game_ms = ms(t);
    let t = Instant::now();
    let solution = solve_parity(&game.game);
    report.solve_ms = ms(t);
    let verdict = Verdict::from_bool(solution.winner[game.game.init] == 0);
    report.verdict = Some(verdict);
    report.order = hes.order();
    report.num_eqs = hes.len();
    report.hes_size = hes.size();
    report.lts_states = lts.num_states();
    report.alternations = hes.alternations();
    report.gamma_size = saturation.gamma.len();
    report.game_positions = game.game.len();
    report.game_edges = game.game.num_edges();
    report.iterations = saturation.iterations();
    report.total_ms = ms(start);
    Ok(Outcome { verdict, hes, types, flow, saturation, game, solution, report })
}

/// Parses both inputs, then [`run`]s.
pub fn run_text(hes_src: &str, lts_src: &str, opts: &Options) -> Result<Outcome> {
    let start = Instant::now();
    let hes = parse_hes(hes_src)?;
    let lts = parse_lts(lts_src)?;
    let parse_ms = ms(start);
    let mut out = run(&lts, &hes, opts)?;
    out.report.parse_ms = parse_ms;
    out.report.total_ms = ms(start);
    Ok(out)
}

/// Decides `L ⊨ E`.
pub fn check(lts: &Lts, hes: &Hes, opts: &Options) -> Result<Verdict> {
    Ok(run(lts, hes, opts)?.verdict)
}

/// Decides `L ⊨ E` with the semantic oracle.
pub fn check_with_oracle(lts: &Lts, hes: &Hes) -> Result<Verdict> {
    let hes = infer_kinds(hes)?;
    Ok(Verdict::from_bool(check_naive(lts, &hes)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::check_strategy;

    const FIG3: &str = "initial q0\nq0 a q1\nq1 b q2\nq2 a q0\nq0 c q0";
    const EX3: &str = "S =v <a>(F (<b> S)); F =m \\X. X \\/ <c> S \\/ <a>(F (<b> X));";

    #[test]
    fn example3_valid_with_strategy() {
        let out = run_text(EX3, FIG3, &Options::default()).unwrap();
        assert_eq!(out.verdict, Verdict::Valid);
        assert!(check_strategy(&out.game.game, &out.solution.strategy, 0, out.game.game.init));
        assert_eq!(out.report.verdict, Some(Verdict::Valid));
    }

    #[test]
    fn example2_valid() {
        let lts = "initial q0\nq0 read q0\nq0 close q1\nq1 end q2";
        let hes = "S =v F (<end> true); F =v \\k. <close> k /\\ <read> <read> (F k);";
        assert_eq!(run_text(hes, lts, &Options::default()).unwrap().verdict, Verdict::Valid);
    }

    #[test]
    fn without_c_loop_matches_oracle() {
        let lts = parse_lts("initial q0\nq0 a q1\nq1 b q2\nq2 a q0").unwrap();
        let hes = parse_hes(EX3).unwrap();
        let v = check(&lts, &hes, &Options::default()).unwrap();
        assert_eq!(v, check_with_oracle(&lts, &hes).unwrap());
        assert_eq!(v, Verdict::Invalid);
    }

    #[test]
    fn trivial() {
        let one = "initial q0";
        assert_eq!(run_text("S =m S;", one, &Options::default()).unwrap().verdict, Verdict::Invalid);
        assert_eq!(run_text("S =v S;", one, &Options::default()).unwrap().verdict, Verdict::Valid);
        let out = run_text("S =m false;", one, &Options::default()).unwrap();
        assert_eq!(out.verdict, Verdict::Invalid);
        assert_eq!(out.game.game.len(), 1);
    }
}
