//! Seeded random instances: kinded HES, LTS and parity games.

use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::game::{strategy_count, ParityGame};
use crate::syntax::{infer_kinds, parse_hes, Hes, Kind, Lts};

/// Shape bounds for [`random_hes`].
#[derive(Clone, Debug)]
pub struct GenConfig {
    pub max_order: usize,
    pub max_eqs: usize,
    pub max_alternations: usize,
    pub max_depth: usize,
    pub actions: Vec<String>,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig { max_order: 1, max_eqs: 3, max_alternations: 2, max_depth: 3, actions: vec!["a".into(), "b".into()] }
    }
}

/// A generated system together with its source text.
#[derive(Clone, Debug)]
pub struct Instance {
    pub hes: Hes,
    pub lts: Lts,
    pub hes_text: String,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn oo() -> Kind {
    Kind::arrow(Kind::Prop, Kind::Prop)
}

fn kind_menu(order: usize) -> Vec<Kind> {
    let o = Kind::Prop;
    match order {
        0 => vec![o],
        1 => vec![oo(), Kind::arrow(o.clone(), oo())],
        _ => vec![Kind::arrow(oo(), o.clone()), Kind::arrow(oo(), oo())],
    }
}

fn kind_text(k: &Kind) -> String {
    if k.is_prop() {
        "o".into()
    } else {
        format!("({k})")
    }
}

struct BodyGen<'a> {
    rng: &'a mut ChaCha8Rng,
    cfg: &'a GenConfig,
    eqs: &'a [(String, Kind)],
    params: Vec<(String, Kind)>,
}

impl BodyGen<'_> {
    /// Variables in scope of exactly kind `k`.
    fn vars_of(&self, k: &Kind) -> Vec<String> {
        self.eqs.iter().chain(&self.params).filter(|(_, vk)| vk == k).map(|(n, _)| n.clone()).collect()
    }

    /// Variables whose kind takes at least one argument and ends in `k`.
    fn heads_for(&self, k: &Kind) -> Vec<(String, Vec<Kind>)> {
        let mut out = Vec::new();
        for (n, vk) in self.eqs.iter().chain(&self.params) {
            let args = vk.args();
            for m in 1..=args.len() {
                if vk.after(m) == Some(k) {
                    out.push((n.clone(), args[..m].iter().map(|a| (*a).clone()).collect()));
                }
            }
        }
        out
    }

    fn leaf(&mut self) -> String {
        let params: Vec<String> =
            self.params.iter().filter(|(_, k)| k.is_prop()).map(|(n, _)| n.clone()).collect();
        let eqs: Vec<String> = self.eqs.iter().filter(|(_, k)| k.is_prop()).map(|(n, _)| n.clone()).collect();
        let r: f64 = self.rng.gen();
        if !params.is_empty() && r < 0.5 {
            return params.choose(self.rng).unwrap().clone();
        }
        if !eqs.is_empty() && r < 0.8 {
            return eqs.choose(self.rng).unwrap().clone();
        }
        if self.rng.gen_bool(0.5) { "true" } else { "false" }.into()
    }

    fn app(&mut self, head: &str, args: &[Kind], depth: usize) -> String {
        let mut s = head.to_string();
        for a in args {
            let arg = self.gen(a, depth.saturating_sub(1));
            write!(s, " ({arg})").unwrap();
        }
        s
    }

    fn gen(&mut self, k: &Kind, depth: usize) -> String {
        if !k.is_prop() {
            let vars = self.vars_of(k);
            let heads = self.heads_for(k);
            if !vars.is_empty() && (heads.is_empty() || self.rng.gen_bool(0.7)) {
                return vars.choose(self.rng).unwrap().clone();
            }
            let (h, args) = heads.choose(self.rng).expect("no formula of the requested kind").clone();
            return self.app(&h, &args, depth);
        }
        if depth == 0 {
            return self.leaf();
        }
        let heads = self.heads_for(&Kind::Prop);
        let action = self.cfg.actions.choose(self.rng).unwrap().clone();
        match self.rng.gen_range(0..11) {
            0 | 1 => format!("({}) \\/ ({})", self.gen(k, depth - 1), self.gen(k, depth - 1)),
            2 | 3 => format!("({}) /\\ ({})", self.gen(k, depth - 1), self.gen(k, depth - 1)),
            4 | 5 => format!("<{action}> ({})", self.gen(k, depth - 1)),
            6 => format!("[{action}] ({})", self.gen(k, depth - 1)),
            7..=9 if !heads.is_empty() => {
                let (h, args) = heads.choose(self.rng).unwrap().clone();
                self.app(&h, &args, depth)
            }
            _ => self.leaf(),
        }
    }
}

/// Random source text of a kind-correct HES within `cfg`.
pub fn random_hes_text(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> String {
    let n = rng.gen_range(1..=cfg.max_eqs.max(1));
    let order = if rng.gen_bool(0.6) { cfg.max_order } else { rng.gen_range(0..=cfg.max_order) };
    let mut kinds = vec![Kind::Prop];
    for i in 1..n {
        let o = if i == 1 { order } else { rng.gen_range(0..=order) };
        kinds.push(kind_menu(o).choose(rng).unwrap().clone());
    }
    // an argument of kind o -> o needs something to pass
    if kinds.iter().any(|k| k.order() == 2) && !kinds.contains(&oo()) {
        let i = (1..n).rev().find(|&i| kinds[i].order() < 2).unwrap_or(n - 1);
        kinds[i] = oo();
    }
    let mut signs: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let mut alts = 0;
    for i in 1..n {
        if signs[i] != signs[i - 1] {
            if alts == cfg.max_alternations {
                signs[i] = signs[i - 1];
            } else {
                alts += 1;
            }
        }
    }
    let names: Vec<String> = (0..n).map(|i| if i == 0 { "S".into() } else { format!("F{i}") }).collect();
    let eqs: Vec<(String, Kind)> = names.iter().cloned().zip(kinds.iter().cloned()).collect();
    let mut text = String::new();
    for j in 0..n {
        let params: Vec<(String, Kind)> =
            kinds[j].args().into_iter().enumerate().map(|(i, k)| (format!("X{}", i + 1), k.clone())).collect();
        let mut g = BodyGen { rng, cfg, eqs: &eqs, params: params.clone() };
        let body = g.gen(&Kind::Prop, cfg.max_depth);
        write!(text, "{} ={} ", names[j], if signs[j] { "v" } else { "m" }).unwrap();
        for (x, k) in &params {
            write!(text, "\\{x}^{}. ", kind_text(k)).unwrap();
        }
        writeln!(text, "{body};").unwrap();
    }
    text
}

/// Random kinded HES within `cfg`.
pub fn random_hes(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> (Hes, String) {
    let text = random_hes_text(rng, cfg);
    let hes = parse_hes(&text).and_then(|h| infer_kinds(&h)).unwrap_or_else(|e| panic!("generated `{text}`: {e}"));
    (hes, text)
}

/// Random LTS on states `q0..` with each transition present with probability `density`.
pub fn random_lts(rng: &mut ChaCha8Rng, states: usize, actions: &[String], density: f64) -> Lts {
    let mut b = Lts::builder();
    for q in 0..states {
        b.state(&format!("q{q}"));
    }
    for a in actions {
        b.action(a);
    }
    for s in 0..states {
        for a in actions {
            for d in 0..states {
                if rng.gen_bool(density) {
                    b.transition(&format!("q{s}"), a, &format!("q{d}"));
                }
            }
        }
    }
    b.build("q0")
}

/// One random instance with `1..=max_states` states.
pub fn random_instance(seed: u64, cfg: &GenConfig, max_states: usize) -> Instance {
    let mut r = rng(seed);
    let states = r.gen_range(1..=max_states);
    let lts = random_lts(&mut r, states, &cfg.actions, 0.35);
    let (hes, hes_text) = random_hes(&mut r, cfg);
    Instance { hes, lts, hes_text }
}

/// A cycle of `n` order-1 μ-equations behind one ν-equation, in the style
/// of the running example. Size grows linearly in `n`; the verdict on the
/// three-state `a b a` loop with a `c` self-loop is valid for every `n`.
pub fn chain_hes_text(n: usize) -> String {
    let n = n.max(1);
    let mut text = String::from("S =v <a> (F1 (<b> S));\n");
    for i in 1..=n {
        let next = if i == n { 1 } else { i + 1 };
        writeln!(text, "F{i} =m \\X. X \\/ <c> S \\/ <a> (F{next} (<b> X));").unwrap();
    }
    text
}

pub const CHAIN_LTS: &str = "initial q0\nq0 a q1\nq1 b q2\nq2 a q0\nq0 c q0\n";

/// Random game with `n` positions, out-degree at most 3 and priorities up to
/// `max_priority`; the number of player-0 strategies stays below `2^16`.
pub fn random_game(rng: &mut ChaCha8Rng, n: usize, max_priority: u32) -> ParityGame {
    let mut g = ParityGame::default();
    for v in 0..n {
        g.add_node(rng.gen_range(0..2), rng.gen_range(0..=max_priority), format!("v{v}"));
    }
    for v in 0..n {
        let deg = [0, 1, 1, 2, 2, 3].choose(rng).copied().unwrap();
        for _ in 0..deg {
            g.add_edge(v, rng.gen_range(0..n));
        }
    }
    while strategy_count(&g) > 1 << 16 {
        let v = (0..n).filter(|&v| g.owner[v] == 0 && g.succ[v].len() > 1).max_by_key(|&v| g.succ[v].len()).unwrap();
        g.succ[v].pop();
    }
    g
}
