use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use super::env::{Binding, TypeEnv};
use super::types::{TyId, TyNode, Types};
use crate::syntax::{Formula, Hes, Kind, Lts, Shape, VarRef};

/// Sorted, duplicate-free item indices.
pub type Witness = Vec<u32>;

/// Which leaves end up in witnesses.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct Track {
    pub eqs: bool,
    pub params: bool,
}

impl Track {
    pub const ALL: Track = Track { eqs: true, params: true };
    pub const EQS: Track = Track { eqs: true, params: false };
    pub const NONE: Track = Track { eqs: false, params: false };
}

type Memoized = (Formula, Rc<Vec<Witness>>);

/// Syntax-directed derivation engine for `Γ ⊢ φ : τ`.
///
/// Equation leaves are typed by `eq_types`, parameter leaves by
/// `param_types`. Subsumption is applied at variable heads only. A
/// parameter leaf `X a₁⋯aₘ : t` matched against `ρ̃ → r` with `r ≤ t`
/// records the binding `X : ρ̃ → t`.
pub struct Deriver<'a> {
    lts: &'a Lts,
    hes: &'a Hes,
    types: &'a Types,
    eq_types: &'a [Vec<TyId>],
    param_types: &'a [Vec<TyId>],
    track: Track,
    items: RefCell<Vec<Binding>>,
    item_ids: RefCell<HashMap<Binding, u32>>,
    dominance: bool,
    covers: RefCell<HashMap<(u32, u32), bool>>,
    // the formula is kept alive so its address stays unique
    memo: RefCell<HashMap<(usize, TyId), Memoized>>,
}

impl<'a> Deriver<'a> {
    pub fn new(
        lts: &'a Lts,
        hes: &'a Hes,
        types: &'a Types,
        eq_types: &'a [Vec<TyId>],
        param_types: &'a [Vec<TyId>],
        track: Track,
    ) -> Deriver<'a> {
        Deriver {
            lts,
            hes,
            types,
            eq_types,
            param_types,
            track,
            items: RefCell::new(Vec::new()),
            item_ids: RefCell::new(HashMap::new()),
            dominance: false,
            covers: RefCell::new(HashMap::new()),
            memo: RefCell::new(HashMap::new()),
        }
    }

    /// Also drops a witness when another one is at least as good: each of
    /// its bindings is implied by a binding of the dropped one.
    pub fn with_dominance(mut self, on: bool) -> Self {
        self.dominance = on;
        self
    }

    pub fn types(&self) -> &'a Types {
        self.types
    }

    pub fn item(&self, i: u32) -> Binding {
        self.items.borrow()[i as usize]
    }

    pub fn env_of(&self, w: &Witness) -> TypeEnv {
        let items = self.items.borrow();
        w.iter().map(|&i| items[i as usize]).collect()
    }

    fn item_id(&self, b: Binding) -> u32 {
        if let Some(&i) = self.item_ids.borrow().get(&b) {
            return i;
        }
        let mut items = self.items.borrow_mut();
        let i = items.len() as u32;
        items.push(b);
        self.item_ids.borrow_mut().insert(b, i);
        i
    }

    /// All ⊆-minimal witnesses of `φ : t`.
    pub fn derive(&self, f: &Formula, t: TyId) -> Rc<Vec<Witness>> {
        let key = (f.addr(), t);
        if let Some((_, r)) = self.memo.borrow().get(&key) {
            return r.clone();
        }
        let r = Rc::new(self.derive_uncached(f, t));
        self.memo.borrow_mut().insert(key, (f.clone(), r.clone()));
        r
    }

    pub fn holds(&self, f: &Formula, t: TyId) -> bool {
        !self.derive(f, t).is_empty()
    }

    fn state(&self, t: TyId) -> usize {
        match self.types.node(t) {
            TyNode::Atom(q) => q,
            TyNode::Arrow(..) => panic!("propositional connective at an arrow type"),
        }
    }

    fn derive_uncached(&self, f: &Formula, t: TyId) -> Vec<Witness> {
        match f.shape() {
            Shape::True => vec![Vec::new()],
            Shape::False => Vec::new(),
            Shape::Or(l, r) => self.union(&self.derive(l, t), &self.derive(r, t)),
            Shape::And(l, r) => {
                let a = self.derive(l, t);
                if a.is_empty() {
                    return Vec::new();
                }
                self.product(&a, &self.derive(r, t))
            }
            Shape::Dia(a, b) => {
                let q = self.state(t);
                let mut acc = Vec::new();
                for &q2 in self.lts.succ_by_name(q, a) {
                    acc = self.union(&acc, &self.derive(b, self.types.atom(q2)));
                }
                acc
            }
            Shape::Box(a, b) => {
                let q = self.state(t);
                let mut acc = vec![Vec::new()];
                for &q2 in self.lts.succ_by_name(q, a) {
                    acc = self.product(&acc, &self.derive(b, self.types.atom(q2)));
                    if acc.is_empty() {
                        break;
                    }
                }
                acc
            }
            Shape::Var(_) | Shape::App(..) => self.leaf(f, t),
            Shape::Abs(..) => Vec::new(),
        }
    }

    fn head(&self, f: &Formula) -> Option<(VarRef, Vec<Formula>)> {
        let (h, args) = f.spine();
        let name = h.as_var()?;
        Some((self.hes.lookup(name)?, args.into_iter().cloned().collect()))
    }

    fn candidates(&self, v: VarRef) -> &'a [Vec<TyId>] {
        match v {
            VarRef::Eq(_) => self.eq_types,
            VarRef::Param(_) => self.param_types,
        }
    }

    fn leaf(&self, f: &Formula, t: TyId) -> Vec<Witness> {
        let Some((v, args)) = self.head(f) else { return Vec::new() };
        let idx = match v {
            VarRef::Eq(j) => j,
            VarRef::Param(p) => p,
        };
        let cands = &self.candidates(v)[idx];
        let m = args.len();
        let mut out = Vec::new();
        for &g in cands {
            let (rhos, rest) = self.types.peel(g, m);
            if !self.types.subtype(rest, t) {
                continue;
            }
            let mut acc = vec![Vec::new()];
            let tracked = match v {
                VarRef::Eq(_) => self.track.eqs.then_some(g),
                VarRef::Param(_) => self.track.params.then(|| {
                    let kind = self.hes.var_kind(v);
                    self.types.chain(kind, &rhos, t)
                }),
            };
            if let Some(ty) = tracked {
                acc = vec![vec![self.item_id(Binding::new(v, ty))]];
            }
            'args: for (a, rho) in args.iter().zip(&rhos) {
                for &r in rho.iter() {
                    acc = self.product(&acc, &self.derive(a, r));
                    if acc.is_empty() {
                        break 'args;
                    }
                }
            }
            out = self.union(&out, &acc);
        }
        out
    }

    /// Kind of a formula whose leaves resolve in the system.
    pub fn kind_of(&self, f: &Formula) -> Kind {
        match f.shape() {
            Shape::Var(_) | Shape::App(..) => match self.head(f) {
                Some((v, args)) => self.hes.var_kind(v).after(args.len()).expect("over-applied head").clone(),
                None => Kind::Prop,
            },
            _ => Kind::Prop,
        }
    }

    /// Derivable types generating all others by subsumption: the
    /// derivable states at kind o, the peeled results of usable head types
    /// at arrow kinds.
    pub fn generators(&self, f: &Formula) -> Vec<TyId> {
        let kind = self.kind_of(f);
        if kind.is_prop() {
            return (0..self.lts.num_states()).map(|q| self.types.atom(q)).filter(|&a| self.holds(f, a)).collect();
        }
        let Some((v, args)) = self.head(f) else { return Vec::new() };
        let idx = match v {
            VarRef::Eq(j) => j,
            VarRef::Param(p) => p,
        };
        let mut out = Vec::new();
        for &g in &self.candidates(v)[idx] {
            let (rhos, rest) = self.types.peel(g, args.len());
            let ok = args.iter().zip(&rhos).all(|(a, rho)| rho.iter().all(|&r| self.holds(a, r)));
            if ok && !out.contains(&rest) {
                out.push(rest);
            }
        }
        out
    }

    fn union(&self, a: &[Witness], b: &[Witness]) -> Vec<Witness> {
        if a.is_empty() {
            return b.to_vec();
        }
        if b.is_empty() {
            return a.to_vec();
        }
        self.minimize(a.iter().chain(b).cloned().collect())
    }

    fn product(&self, a: &[Witness], b: &[Witness]) -> Vec<Witness> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        if a.len() == 1 && a[0].is_empty() {
            return b.to_vec();
        }
        if b.len() == 1 && b[0].is_empty() {
            return a.to_vec();
        }
        let mut out = Vec::with_capacity(a.len() * b.len());
        for x in a {
            for y in b {
                let mut m = Vec::with_capacity(x.len() + y.len());
                let (mut i, mut j) = (0, 0);
                while i < x.len() || j < y.len() {
                    if j == y.len() || (i < x.len() && x[i] < y[j]) {
                        m.push(x[i]);
                        i += 1;
                    } else if i == x.len() || y[j] < x[i] {
                        m.push(y[j]);
                        j += 1;
                    } else {
                        m.push(x[i]);
                        i += 1;
                        j += 1;
                    }
                }
                out.push(m);
            }
        }
        self.minimize(out)
    }

    fn covers(&self, b: u32, b1: u32) -> bool {
        if b == b1 {
            return true;
        }
        if let Some(&r) = self.covers.borrow().get(&(b, b1)) {
            return r;
        }
        let (x, y) = (self.item(b), self.item(b1));
        let r = x.var == y.var && self.types.subtype(x.ty, y.ty);
        self.covers.borrow_mut().insert((b, b1), r);
        r
    }

    /// `w1` is at least as good as `w`.
    fn dominates(&self, w1: &[u32], w: &[u32]) -> bool {
        w1.iter().all(|&b1| w.iter().any(|&b| self.covers(b, b1)))
    }

    fn minimize(&self, v: Vec<Witness>) -> Vec<Witness> {
        let v = minimize(v);
        if !self.dominance || v.len() < 2 {
            return v;
        }
        let mut out: Vec<Witness> = Vec::with_capacity(v.len());
        for w in v {
            if out.iter().any(|k| self.dominates(k, &w)) {
                continue;
            }
            out.retain(|k| !self.dominates(&w, k));
            out.push(w);
        }
        out
    }
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Keeps only the ⊆-minimal sets.
pub fn minimize(mut v: Vec<Witness>) -> Vec<Witness> {
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    v.dedup();
    let mut out: Vec<Witness> = Vec::with_capacity(v.len());
    for w in v {
        if !out.iter().any(|k| is_subset(k, &w)) {
            out.push(w);
        }
    }
    out
}

/// Minimal used environments of `Γ ⊢ ψ : q`, where parameters of `ψ` are
/// typed from `params` (indexed by global parameter id).
pub fn derive(
    lts: &Lts,
    hes: &Hes,
    types: &Types,
    gamma: &TypeEnv,
    body: &Formula,
    q: usize,
    params: &[Vec<TyId>],
) -> Vec<TypeEnv> {
    let eqs = gamma.by_equation(hes.len());
    let d = Deriver::new(lts, hes, types, &eqs, params, Track::ALL);
    let ws = d.derive(body, types.atom(q));
    ws.iter().map(|w| d.env_of(w)).collect()
}

/// Every refinement `τ` of the formula's kind with `Γ ⊢ φ : τ`.
pub fn types_of(lts: &Lts, hes: &Hes, types: &Types, gamma: &TypeEnv, f: &Formula) -> crate::Result<Vec<TyId>> {
    let eqs = gamma.by_equation(hes.len());
    let params = gamma.by_param(hes.num_params());
    let d = Deriver::new(lts, hes, types, &eqs, &params, Track::NONE);
    let kind = d.kind_of(f);
    Ok(types.refinements(&kind)?.into_iter().filter(|&t| d.holds(f, t)).collect())
}
