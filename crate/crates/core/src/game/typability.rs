use std::collections::HashMap;

use super::arena::ParityGame;
use super::priority::priorities;
use crate::error::Result;
use crate::rtypes::{Binding, Deriver, TyId, TypeEnv, Types, Track};
use crate::syntax::{Hes, Lts, VarRef};

/// A typability game (or subgame) together with the meaning of its
/// positions. Player-0 position `i` is `bindings[i]`; player-1 position
/// `bindings.len() + k` is `envs[k]`.
pub struct TypabilityGame {
    pub game: ParityGame,
    pub bindings: Vec<Binding>,
    pub envs: Vec<TypeEnv>,
}

impl TypabilityGame {
    pub fn position_of(&self, b: &Binding) -> Option<usize> {
        self.bindings.iter().position(|x| x == b)
    }

    pub fn env_at(&self, v: usize) -> Option<&TypeEnv> {
        v.checked_sub(self.bindings.len()).and_then(|k| self.envs.get(k))
    }
}

fn param_types(hes: &Hes, types: &Types, b: &Binding) -> (Vec<Vec<TyId>>, usize) {
    let VarRef::Eq(j) = b.var else { panic!("binding of a parameter") };
    let arity = hes.eq(j).params.len();
    let (sigmas, rest) = types.peel(b.ty, arity);
    let mut params = vec![Vec::new(); hes.num_params()];
    for (i, s) in sigmas.iter().enumerate() {
        params[hes.param_id(j, i)] = s.to_vec();
    }
    (params, types.target(rest))
}

/// Minimal environments `Γ′ ⊆ Γ` with `Γ′ ⊢ φ_j : τ`.
pub fn edges_of(lts: &Lts, hes: &Hes, types: &Types, eq_types: &[Vec<TyId>], b: &Binding) -> Vec<TypeEnv> {
    edges_with(lts, hes, types, eq_types, b, false)
}

fn edges_with(lts: &Lts, hes: &Hes, types: &Types, eq_types: &[Vec<TyId>], b: &Binding, prune: bool) -> Vec<TypeEnv> {
    let VarRef::Eq(j) = b.var else { panic!("binding of a parameter") };
    let (params, q) = param_types(hes, types, b);
    let d = Deriver::new(lts, hes, types, eq_types, &params, Track::EQS).with_dominance(prune);
    let ws = d.derive(&hes.eq(j).body, types.atom(q));
    ws.iter().map(|w| d.env_of(w)).collect()
}

/// Membership in `E₀`: `env ⊢ φ_j : τ`.
pub fn e0_member(lts: &Lts, hes: &Hes, types: &Types, b: &Binding, env: &TypeEnv) -> bool {
    let VarRef::Eq(j) = b.var else { return false };
    let (params, q) = param_types(hes, types, b);
    let eqs = env.by_equation(hes.len());
    let d = Deriver::new(lts, hes, types, &eqs, &params, Track::NONE);
    d.holds(&hes.eq(j).body, types.atom(q))
}

/// `W′` is at least as good as `W` for player 0: every binding of `W′` is
/// implied by a binding of `W`.
fn better_or_equal(types: &Types, w1: &TypeEnv, w: &TypeEnv) -> bool {
    w1.iter().all(|b1| w.iter().any(|b| b.var == b1.var && types.subtype(b.ty, b1.ty)))
}

/// Drops environments dominated by another one of the same position.
pub(crate) fn prune_edges(types: &Types, envs: Vec<TypeEnv>) -> Vec<TypeEnv> {
    let keep: Vec<bool> = (0..envs.len())
        .map(|i| {
            !(0..envs.len()).any(|k| {
                k != i
                    && better_or_equal(types, &envs[k], &envs[i])
                    && (!better_or_equal(types, &envs[i], &envs[k]) || k < i)
            })
        })
        .collect();
    envs.into_iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| e).collect()
}

fn build(
    lts: &Lts,
    hes: &Hes,
    types: &Types,
    positions: Vec<Binding>,
    eq_types: &[Vec<TyId>],
    prune: bool,
) -> TypabilityGame {
    let omega = priorities(hes);
    let mut game = ParityGame::new();
    let mut index = HashMap::new();
    for b in &positions {
        let VarRef::Eq(j) = b.var else { unreachable!() };
        let v = game.add_node(0, omega[j], b.render(hes, types));
        index.insert(*b, v);
    }
    let mut envs: Vec<TypeEnv> = Vec::new();
    let mut env_index: HashMap<TypeEnv, usize> = HashMap::new();
    let mut edges = Vec::new();
    for b in &positions {
        let mut ws = edges_with(lts, hes, types, eq_types, b, prune);
        if prune {
            ws = prune_edges(types, ws);
        }
        for w in ws {
            let k = *env_index.entry(w.clone()).or_insert_with(|| {
                envs.push(w);
                envs.len() - 1
            });
            edges.push((index[b], k));
        }
    }
    let base = positions.len();
    for env in &envs {
        game.add_node(1, 0, env.render(hes, types));
    }
    for (v, k) in edges {
        game.add_edge(v, base + k);
    }
    for (k, env) in envs.iter().enumerate() {
        for b in env {
            game.add_edge(base + k, index[b]);
        }
    }
    let init = Binding::eq(0, types.atom(lts.initial()));
    game.init = index[&init];
    TypabilityGame { game, bindings: positions, envs }
}

/// `SG(L, E, Γ)` with player-1 positions restricted to minimal witnesses.
/// The initial position `F₁ : q₀` is added when absent from `Γ`.
pub fn build_subgame(lts: &Lts, hes: &Hes, types: &Types, gamma: &TypeEnv, prune: bool) -> TypabilityGame {
    let mut positions: Vec<Binding> = gamma.sorted(types).into_iter().filter(|b| matches!(b.var, VarRef::Eq(_))).collect();
    let init = Binding::eq(0, types.atom(lts.initial()));
    if !positions.contains(&init) {
        positions.insert(0, init);
    }
    let eq_types = gamma.by_equation(hes.len());
    build(lts, hes, types, positions, &eq_types, prune)
}

/// `TG(L, E)` over every refinement of every equation. Supersets of the
/// minimal witnesses are left implicit (see [`e0_member`]).
pub fn build_full_game(lts: &Lts, hes: &Hes, types: &Types) -> Result<TypabilityGame> {
    let mut positions = Vec::new();
    let mut eq_types = Vec::new();
    for (j, e) in hes.equations().iter().enumerate() {
        let all = types.refinements(e.kind())?;
        positions.extend(all.iter().map(|&t| Binding::eq(j, t)));
        eq_types.push(all);
    }
    Ok(build(lts, hes, types, positions, &eq_types, false))
}
