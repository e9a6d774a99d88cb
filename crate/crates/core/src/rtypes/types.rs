use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::syntax::{Kind, Lts};

pub const DEFAULT_TYPE_CAP: usize = 100_000;

/// Handle of an interned refinement type.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TyId(pub u32);

/// Canonical intersection: sorted, duplicate-free. The empty set is ⊤.
pub type TySet = Arc<[TyId]>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum TyNode {
    Atom(usize),
    Arrow(TySet, TyId),
}

#[derive(Default)]
struct Inner {
    nodes: Vec<TyNode>,
    kinds: Vec<Kind>,
    ids: HashMap<(TyNode, Kind), TyId>,
    sub: HashMap<(TyId, TyId), bool>,
}

/// Append-only intern table of refinement types over one LTS.
pub struct Types {
    states: usize,
    state_names: Vec<String>,
    inner: RwLock<Inner>,
}

impl Types {
    pub fn new(lts: &Lts) -> Types {
        let state_names = (0..lts.num_states()).map(|q| lts.state_name(q).to_string()).collect();
        let t = Types { states: lts.num_states(), state_names, inner: RwLock::new(Inner::default()) };
        for q in 0..t.states {
            t.atom(q);
        }
        t
    }

    pub fn num_states(&self) -> usize {
        self.states
    }

    pub fn len(&self) -> usize {
        self.inner.read().nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `⊤ → q` is one node for every argument kind, so the key includes the kind.
    fn intern(&self, node: TyNode, kind: Kind) -> TyId {
        let key = (node, kind);
        if let Some(&id) = self.inner.read().ids.get(&key) {
            return id;
        }
        let mut g = self.inner.write();
        if let Some(&id) = g.ids.get(&key) {
            return id;
        }
        let id = TyId(g.nodes.len() as u32);
        g.nodes.push(key.0.clone());
        g.kinds.push(key.1.clone());
        g.ids.insert(key, id);
        id
    }

    pub fn atom(&self, q: usize) -> TyId {
        assert!(q < self.states, "state {q} out of range");
        self.intern(TyNode::Atom(q), Kind::Prop)
    }

    /// `σ → τ`. Every member of `args` must refine `arg_kind`.
    pub fn arrow(&self, arg_kind: &Kind, mut args: Vec<TyId>, ret: TyId) -> TyId {
        args.sort_unstable();
        args.dedup();
        debug_assert!(args.iter().all(|&a| &self.kind(a) == arg_kind));
        let set: TySet = args.into();
        let kind = Kind::arrow(arg_kind.clone(), self.kind(ret));
        self.intern(TyNode::Arrow(set, ret), kind)
    }

    /// `σ₁ → ⋯ → σₖ → ret` for a kind whose first `k` arguments are given.
    pub fn chain(&self, kind: &Kind, args: &[TySet], ret: TyId) -> TyId {
        let ks = kind.args();
        let mut t = ret;
        for (i, s) in args.iter().enumerate().rev() {
            t = self.arrow(ks[i], s.to_vec(), t);
        }
        t
    }

    /// `⊤ → ⋯ → ⊤ → q` of the given kind.
    pub fn top_chain(&self, kind: &Kind, q: usize) -> TyId {
        let tops: Vec<TySet> = (0..kind.arity()).map(|_| TySet::from(Vec::new())).collect();
        self.chain(kind, &tops, self.atom(q))
    }

    pub fn node(&self, t: TyId) -> TyNode {
        self.inner.read().nodes[t.0 as usize].clone()
    }

    pub fn kind(&self, t: TyId) -> Kind {
        self.inner.read().kinds[t.0 as usize].clone()
    }

    /// Strips `m` arrows: returns the argument sets and the remaining type.
    pub fn peel(&self, t: TyId, m: usize) -> (Vec<TySet>, TyId) {
        let g = self.inner.read();
        let mut args = Vec::with_capacity(m);
        let mut cur = t;
        for _ in 0..m {
            match &g.nodes[cur.0 as usize] {
                TyNode::Arrow(s, r) => {
                    args.push(s.clone());
                    cur = *r;
                }
                TyNode::Atom(_) => panic!("peeling an atom"),
            }
        }
        (args, cur)
    }

    /// Result state of the fully applied type.
    pub fn target(&self, t: TyId) -> usize {
        let g = self.inner.read();
        let mut cur = t;
        loop {
            match &g.nodes[cur.0 as usize] {
                TyNode::Atom(q) => return *q,
                TyNode::Arrow(_, r) => cur = *r,
            }
        }
    }

    /// `t1 ≤ t2`. Both types must refine the same kind.
    pub fn subtype(&self, t1: TyId, t2: TyId) -> bool {
        if t1 == t2 {
            return true;
        }
        if let Some(&b) = self.inner.read().sub.get(&(t1, t2)) {
            return b;
        }
        let (n1, n2) = (self.node(t1), self.node(t2));
        let b = match (n1, n2) {
            (TyNode::Atom(_), TyNode::Atom(_)) => false,
            (TyNode::Arrow(s1, r1), TyNode::Arrow(s2, r2)) => self.subtype(r1, r2) && self.set_leq(&s2, &s1),
            _ => panic!("subtype across kinds"),
        };
        self.inner.write().sub.insert((t1, t2), b);
        b
    }

    /// Checked variant of [`Types::subtype`].
    pub fn try_subtype(&self, t1: TyId, t2: TyId) -> Result<bool> {
        let (k1, k2) = (self.kind(t1), self.kind(t2));
        if k1 != k2 {
            return Err(Error::Precondition(format!("kind mismatch: {k1} vs {k2}")));
        }
        Ok(self.subtype(t1, t2))
    }

    /// `σ ≤ σ′` iff every member of `σ′` has a subtype in `σ`.
    pub fn set_leq(&self, s1: &[TyId], s2: &[TyId]) -> bool {
        s2.iter().all(|&b| s1.iter().any(|&a| self.subtype(a, b)))
    }

    /// Number of refinements of `kind`, saturating.
    pub fn count(&self, kind: &Kind) -> u128 {
        match kind {
            Kind::Prop => self.states as u128,
            Kind::Arrow(a, r) => {
                let ca = self.count(a);
                let cr = self.count(r);
                if ca >= 127 {
                    return u128::MAX;
                }
                (1u128 << ca).saturating_mul(cr)
            }
        }
    }

    pub fn refinements(&self, kind: &Kind) -> Result<Vec<TyId>> {
        self.refinements_capped(kind, DEFAULT_TYPE_CAP)
    }

    /// All refinements of `kind`, argument subsets in bitmask order.
    pub fn refinements_capped(&self, kind: &Kind, cap: usize) -> Result<Vec<TyId>> {
        let count = self.count(kind);
        if count > cap as u128 {
            return Err(Error::TooManyTypes { count });
        }
        Ok(match kind {
            Kind::Prop => (0..self.states).map(|q| self.atom(q)).collect(),
            Kind::Arrow(a, r) => {
                let args = self.refinements_capped(a, cap)?;
                let rets = self.refinements_capped(r, cap)?;
                let mut out = Vec::with_capacity(count as usize);
                for mask in 0u64..1 << args.len() {
                    let set: Vec<TyId> =
                        args.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &t)| t).collect();
                    for &ret in &rets {
                        out.push(self.arrow(a, set.clone(), ret));
                    }
                }
                out
            }
        })
    }

    pub fn render(&self, t: TyId) -> String {
        match self.node(t) {
            TyNode::Atom(q) => self.state_names[q].clone(),
            TyNode::Arrow(s, r) => format!("{} -> {}", self.render_set(&s), self.render(r)),
        }
    }

    fn render_set(&self, s: &[TyId]) -> String {
        let wrap = |t: TyId| match self.node(t) {
            TyNode::Atom(_) => self.render(t),
            TyNode::Arrow(..) => format!("({})", self.render(t)),
        };
        match s {
            [] => "T".into(),
            [t] => wrap(*t),
            _ => {
                let mut parts: Vec<String> = s.iter().map(|&t| wrap(t)).collect();
                parts.sort();
                format!("({})", parts.join(" /\\ "))
            }
        }
    }

    pub fn display(&self, t: TyId) -> impl fmt::Display + '_ {
        struct D<'a>(&'a Types, TyId);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.render(self.1))
            }
        }
        D(self, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_lts;

    fn fig3() -> Lts {
        parse_lts("initial q0\nq0 a q1\nq1 b q2\nq2 a q0\nq0 c q0").unwrap()
    }

    fn oo() -> Kind {
        Kind::arrow(Kind::Prop, Kind::Prop)
    }

    #[test]
    fn counts() {
        let l = fig3();
        let ty = Types::new(&l);
        assert_eq!(ty.refinements(&Kind::Prop).unwrap().len(), 3);
        assert_eq!(ty.refinements(&oo()).unwrap().len(), 24);
        let one = parse_lts("initial q0").unwrap();
        let ty1 = Types::new(&one);
        let n = ty1.refinements(&oo()).unwrap().len();
        assert_eq!(n, 2);
        assert_eq!(ty1.refinements(&Kind::arrow(oo(), Kind::Prop)).unwrap().len(), 1 << n);
    }

    #[test]
    fn subtyping_examples() {
        let l = fig3();
        let ty = Types::new(&l);
        let (q0, q1) = (ty.atom(0), ty.atom(1));
        assert!(ty.subtype(q0, q0));
        assert!(!ty.subtype(q0, q1));
        let top_q0 = ty.arrow(&Kind::Prop, vec![], q0);
        let q1_q0 = ty.arrow(&Kind::Prop, vec![q1], q0);
        assert!(ty.subtype(top_q0, q1_q0));
        assert!(!ty.subtype(q1_q0, top_q0));
        let both = ty.arrow(&Kind::Prop, vec![q0, q1], q0);
        let only0 = ty.arrow(&Kind::Prop, vec![q0], q0);
        assert!(!ty.subtype(both, only0));
        assert!(ty.subtype(only0, both));
        assert!(ty.try_subtype(q0, top_q0).is_err());
    }

    #[test]
    fn rendering() {
        let l = fig3();
        let ty = Types::new(&l);
        let (q0, q1, q2) = (ty.atom(0), ty.atom(1), ty.atom(2));
        assert_eq!(ty.render(ty.top_chain(&oo(), 0)), "T -> q0");
        assert_eq!(ty.render(ty.arrow(&Kind::Prop, vec![q2, q1], q0)), "(q1 /\\ q2) -> q0");
        let inner = ty.arrow(&Kind::Prop, vec![q1], q1);
        let k = Kind::arrow(oo(), Kind::Prop);
        let outer = ty.arrow(&oo(), vec![inner], q0);
        assert_eq!(ty.render(outer), "(q1 -> q1) -> q0");
        assert_eq!(ty.kind(outer), k);
        let two = ty.chain(&Kind::from_args([Kind::Prop, Kind::Prop].iter(), Kind::Prop), &[vec![q0].into(), vec![].into()], q2);
        assert_eq!(ty.render(two), "q0 -> T -> q2");
    }

    #[test]
    fn exhaustive_preorder() {
        let l = parse_lts("initial q0\nq0 a q1").unwrap();
        let ty = Types::new(&l);
        for k in [Kind::Prop, oo(), Kind::arrow(oo(), Kind::Prop), Kind::from_args([Kind::Prop, Kind::Prop].iter(), Kind::Prop)] {
            let all = ty.refinements(&k).unwrap();
            let le: Vec<Vec<bool>> = all.iter().map(|&a| all.iter().map(|&b| ty.subtype(a, b)).collect()).collect();
            let n = all.len();
            for a in 0..n {
                assert!(le[a][a]);
                for b in (0..n).filter(|&b| le[a][b]) {
                    assert!((0..n).all(|c| !le[b][c] || le[a][c]));
                }
            }
        }
    }
}
