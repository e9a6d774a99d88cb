//! Backward expansion from `Γ₀` up to the fixpoint.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use crate::flow::{call_graph, nu_heads_on_cycles, FlowMap};
use crate::game::priorities;
use crate::rtypes::{Binding, Deriver, TyId, TySet, Track, TypeEnv, Types};
use crate::syntax::{Hes, Lts, Sign, VarRef};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Options {
    /// Seed `Γ₀` only with ν-equations heading a cycle of the call graph.
    pub restrict_gamma0: bool,
    /// Drop bindings and edges dominated through subtyping.
    pub subsume: bool,
    pub trace: bool,
}

impl Default for Options {
    fn default() -> Options {
        Options { restrict_gamma0: true, subsume: true, trace: false }
    }
}

/// A judgment `Γ′ ⊢ ψ_j : q` that produced a binding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgment {
    pub used: TypeEnv,
    pub binding: Binding,
}

#[derive(Clone, Debug, Default)]
pub struct SaturationState {
    pub gamma: TypeEnv,
    pub initial: TypeEnv,
    /// Bindings added by each productive iteration.
    pub deltas: Vec<Vec<Binding>>,
    /// Judgments behind each delta, in the same order.
    pub judgments: Vec<Vec<Judgment>>,
    /// Latest minimal environments (over equation bindings) per binding.
    pub witnesses: HashMap<Binding, Vec<TypeEnv>>,
    /// Number of expansion rounds run, including the final unproductive one.
    pub rounds: usize,
}

impl SaturationState {
    pub fn iterations(&self) -> usize {
        self.deltas.len()
    }

    /// Table-1-style log.
    pub fn trace(&self, hes: &Hes, types: &Types) -> String {
        let mut s = String::new();
        let mut gamma = self.initial.clone();
        for k in 0..=self.deltas.len() {
            writeln!(s, "iteration {k}: {}", gamma.render(hes, types)).unwrap();
            match self.judgments.get(k) {
                Some(js) => {
                    for j in js {
                        let VarRef::Eq(e) = j.binding.var else { continue };
                        let q = types.render(types.atom(types.target(j.binding.ty)));
                        writeln!(
                            s,
                            "  {} |- psi_{} : {}   => {}",
                            j.used.render(hes, types),
                            hes.eq(e).name,
                            q,
                            j.binding.render(hes, types)
                        )
                        .unwrap();
                    }
                    for b in &self.deltas[k] {
                        gamma.insert(*b);
                    }
                }
                None => writeln!(s, "  -").unwrap(),
            }
        }
        s
    }
}

/// `Γ₀`: strongest bindings `⊤ → ⋯ → ⊤ → q` of ν-equations.
pub fn initial_env(lts: &Lts, hes: &Hes, types: &Types, opts: &Options) -> TypeEnv {
    let heads = opts.restrict_gamma0.then(|| nu_heads_on_cycles(&call_graph(hes), hes, &priorities(hes)));
    let mut env = TypeEnv::new();
    for (j, e) in hes.equations().iter().enumerate() {
        if e.sign != Sign::Nu || heads.as_ref().is_some_and(|h| !h.contains(&j)) {
            continue;
        }
        for q in 0..lts.num_states() {
            env.insert(Binding::eq(j, types.top_chain(e.kind(), q)));
        }
    }
    env
}

/// Parameter candidates: the fixpoint of `Cand(X) = ⋃ Gen(φ)` over flow
/// formulas `φ` of `X`, where parameters inside `φ` range over their own
/// candidates. Also returns `Gen(φ)` for every flow formula.
pub fn candidates(
    lts: &Lts,
    hes: &Hes,
    types: &Types,
    eq_types: &[Vec<TyId>],
    flow: &FlowMap,
) -> (Vec<Vec<TyId>>, Vec<Vec<Vec<TyId>>>) {
    let n = hes.num_params();
    let mut cand: Vec<Vec<TyId>> = vec![Vec::new(); n];
    loop {
        let d = Deriver::new(lts, hes, types, eq_types, &cand, Track::NONE);
        let gens: Vec<Vec<Vec<TyId>>> =
            (0..n).map(|p| flow.get(p).iter().map(|f| d.generators(f)).collect()).collect();
        let mut next = cand.clone();
        for p in 0..n {
            for g in gens[p].iter().flatten() {
                if !next[p].contains(g) {
                    next[p].push(*g);
                }
            }
        }
        if next.iter().map(Vec::len).eq(cand.iter().map(Vec::len)) {
            return (cand, gens);
        }
        cand = next;
    }
}

/// `W′` is at least as good as `W` for player 0.
fn better_or_equal(types: &Types, w1: &TypeEnv, w: &TypeEnv) -> bool {
    w1.iter().all(|b1| w.contains(b1) || w.get(b1.var).any(|t| types.subtype(t, b1.ty)))
}

/// `d` makes `c` redundant: `d ≤ c` and each witness of `c` is matched by
/// an at least as good witness of `d`.
fn dominates(types: &Types, d: (TyId, &[TypeEnv]), c: (TyId, &[TypeEnv])) -> bool {
    types.subtype(d.0, c.0)
        && c.1.iter().all(|w| d.1.contains(w) || d.1.iter().any(|w1| better_or_equal(types, w1, w)))
}

/// One application of the expansion function. Returns whether `Γ` grew.
pub fn expand(state: &mut SaturationState, lts: &Lts, hes: &Hes, types: &Types, flow: &FlowMap, opts: &Options) -> bool {
    state.rounds += 1;
    let eq_types = state.gamma.by_equation(hes.len());
    let (cand, gens) = candidates(lts, hes, types, &eq_types, flow);
    let d = Deriver::new(lts, hes, types, &eq_types, &cand, Track::ALL).with_dominance(opts.subsume);
    let mut found: BTreeMap<Binding, (Vec<TypeEnv>, Vec<TypeEnv>)> = BTreeMap::new();
    for (j, e) in hes.equations().iter().enumerate() {
        let arity = e.params.len();
        for q in 0..lts.num_states() {
            let ws = d.derive(&e.body, types.atom(q));
            for w in ws.iter() {
                let env = d.env_of(w);
                let mut delta: Vec<Vec<TyId>> = vec![Vec::new(); arity];
                let mut used = TypeEnv::new();
                for b in &env {
                    match b.var {
                        VarRef::Eq(_) => {
                            used.insert(*b);
                        }
                        VarRef::Param(p) => {
                            let (owner, pos) = hes.param_owner(p);
                            debug_assert_eq!(owner, j);
                            delta[pos].push(b.ty);
                        }
                    }
                }
                let admissible = delta.iter().enumerate().all(|(i, tys)| {
                    let p = hes.param_id(j, i);
                    tys.is_empty()
                        || gens[p].iter().any(|gen| {
                            tys.iter().all(|&t| gen.iter().any(|&g| types.subtype(g, t)))
                        })
                });
                if !admissible {
                    continue;
                }
                let sets: Vec<TySet> = delta
                    .into_iter()
                    .map(|mut v| {
                        v.sort_unstable();
                        v.dedup();
                        v.into()
                    })
                    .collect();
                let ty = types.chain(e.kind(), &sets, types.atom(q));
                let entry = found.entry(Binding::eq(j, ty)).or_default();
                if !entry.0.contains(&used) {
                    entry.0.push(used);
                }
                entry.1.push(env);
            }
        }
    }
    let fresh: Vec<Binding> = found.keys().filter(|b| !state.gamma.contains(b)).copied().collect();
    let kept: Vec<Binding> = if opts.subsume {
        let wit = |b: &Binding| -> &[TypeEnv] { found.get(b).map(|x| x.0.as_slice()).unwrap_or(&[]) };
        fresh
            .iter()
            .filter(|c| {
                let rivals = state.gamma.iter().chain(fresh.iter()).filter(|d| d.var == c.var && d != c);
                !rivals.into_iter().any(|d| {
                    let fwd = dominates(types, (d.ty, wit(d)), (c.ty, wit(c)));
                    let back = fwd && dominates(types, (c.ty, wit(c)), (d.ty, wit(d)));
                    fwd && (!back || state.gamma.contains(d) || d.ty < c.ty)
                })
            })
            .copied()
            .collect()
    } else {
        fresh
    };
    for (b, (w, _)) in &found {
        state.witnesses.insert(*b, w.clone());
    }
    if kept.is_empty() {
        return false;
    }
    let mut judgments = Vec::new();
    for b in &kept {
        state.gamma.insert(*b);
        for env in &found[b].1 {
            judgments.push(Judgment { used: env.clone(), binding: *b });
        }
    }
    state.deltas.push(kept);
    state.judgments.push(judgments);
    true
}

/// Iterates [`expand`] from `init` until nothing is added.
pub fn saturate_from(
    lts: &Lts,
    hes: &Hes,
    types: &Types,
    flow: &FlowMap,
    opts: &Options,
    init: TypeEnv,
) -> SaturationState {
    let mut state = SaturationState { gamma: init.clone(), initial: init, ..Default::default() };
    while expand(&mut state, lts, hes, types, flow, opts) {}
    state
}

/// Saturation from `Γ₀`.
pub fn saturate(lts: &Lts, hes: &Hes, types: &Types, flow: &FlowMap, opts: &Options) -> SaturationState {
    let init = initial_env(lts, hes, types, opts);
    saturate_from(lts, hes, types, flow, opts, init)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::compute_flow;
    use crate::syntax::{infer_kinds, parse_hes, parse_lts};

    fn ex3() -> (Lts, Hes) {
        let l = parse_lts("initial q0\nq0 a q1\nq1 b q2\nq2 a q0\nq0 c q0").unwrap();
        let h = infer_kinds(&parse_hes("S =v <a>(F (<b> S)); F =m \\X. X \\/ <c> S \\/ <a>(F (<b> X));").unwrap())
            .unwrap();
        (l, h)
    }

    fn names(h: &Hes, ty: &Types, bs: &[Binding]) -> Vec<String> {
        let mut v: Vec<String> = bs.iter().map(|b| b.render(h, ty)).collect();
        v.sort();
        v
    }

    #[test]
    fn table1() {
        let (l, h) = ex3();
        let ty = Types::new(&l);
        let opts = Options { restrict_gamma0: false, subsume: true, trace: false };
        let st = saturate(&l, &h, &ty, &compute_flow(&h), &opts);
        assert_eq!(st.initial.render(&h, &ty), "{S : q0, S : q1, S : q2}");
        assert_eq!(st.iterations(), 2);
        assert_eq!(names(&h, &ty, &st.deltas[0]), ["F : T -> q0", "F : q1 -> q1"]);
        assert_eq!(names(&h, &ty, &st.deltas[1]), ["F : T -> q2"]);
        let trace = st.trace(&h, &ty);
        assert!(trace.contains("{X : q1} |- psi_F : q1"), "{trace}");
        assert!(trace.contains("{F : T -> q0} |- psi_F : q2"), "{trace}");
    }

    #[test]
    fn initial_envs() {
        let (l, h) = ex3();
        let ty = Types::new(&l);
        assert_eq!(initial_env(&l, &h, &ty, &Options::default()).len(), 3);
        let h2 = infer_kinds(&parse_hes("S =m S; F =m \\X. F (X \\/ true);").unwrap()).unwrap();
        assert!(initial_env(&l, &h2, &ty, &Options::default()).is_empty());
        let h3 = infer_kinds(&parse_hes("S =v true; G =v \\X. X;").unwrap()).unwrap();
        let opts = Options { restrict_gamma0: false, ..Options::default() };
        assert_eq!(initial_env(&l, &h3, &ty, &opts).len(), 6);
        assert!(initial_env(&l, &h3, &ty, &Options::default()).is_empty());
    }

    #[test]
    fn trivial_systems() {
        let l = parse_lts("initial q0").unwrap();
        let ty = Types::new(&l);
        let h = infer_kinds(&parse_hes("S =v true;").unwrap()).unwrap();
        let opts = Options { restrict_gamma0: false, ..Options::default() };
        let st = saturate(&l, &h, &ty, &compute_flow(&h), &opts);
        assert_eq!(st.iterations(), 0);
        assert_eq!(st.gamma.len(), 1);
        let h = infer_kinds(&parse_hes("S =m false;").unwrap()).unwrap();
        assert!(saturate(&l, &h, &ty, &compute_flow(&h), &opts).gamma.is_empty());
    }
}
