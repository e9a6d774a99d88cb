//! 0-CFA over-approximation of argument flow, and the call graph.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write;

use crate::syntax::{Formula, Hes, OccId, Shape, Sign, VarRef};

/// Candidate actual arguments of every parameter, by global parameter id.
///
/// Arguments are syntactic occurrences; a parameter occurring inside one
/// stands for everything flowing into it.
#[derive(Clone, Debug, Default)]
pub struct FlowMap {
    args: Vec<Vec<Formula>>,
}

impl FlowMap {
    pub fn from_sets(args: Vec<Vec<Formula>>) -> FlowMap {
        FlowMap { args }
    }

    pub fn get(&self, param: usize) -> &[Formula] {
        &self.args[param]
    }

    pub fn len(&self) -> usize {
        self.args.len()
    }

    pub fn is_empty(&self) -> bool {
        self.args.is_empty()
    }

    pub fn sets(&self) -> &[Vec<Formula>] {
        &self.args
    }

    pub fn occurrences(&self, param: usize) -> Vec<OccId> {
        self.args[param].iter().map(|f| f.occ()).collect()
    }

    /// Adds `f` unless an occurrence with the same id is present.
    pub fn insert(&mut self, param: usize, f: Formula) -> bool {
        let set = &mut self.args[param];
        if set.iter().any(|g| g.occ() == f.occ() && (f.occ() != OccId::SYNTHETIC || g.ptr_eq(&f))) {
            return false;
        }
        set.push(f);
        true
    }

    /// One line per parameter: `X: occ#3 (<b> S), occ#9 (<b> X)`.
    pub fn render(&self, hes: &Hes) -> String {
        let mut s = String::new();
        for (p, set) in self.args.iter().enumerate() {
            let parts: Vec<String> = set.iter().map(|f| format!("{} ({f})", f.occ())).collect();
            writeln!(s, "{}: {}", hes.param(p).name, parts.join(", ")).unwrap();
        }
        s
    }
}

type Closure = (usize, usize);

struct Cfa<'a> {
    hes: &'a Hes,
    flow: FlowMap,
    values: Vec<BTreeSet<Closure>>,
}

impl Cfa<'_> {
    fn head(&self, f: &Formula) -> Option<(VarRef, Vec<Formula>)> {
        let (h, args) = f.spine();
        Some((self.hes.lookup(h.as_var()?)?, args.into_iter().cloned().collect()))
    }

    /// Partial applications `f` may evaluate to.
    fn value(&self, f: &Formula) -> BTreeSet<Closure> {
        let Some((v, args)) = self.head(f) else { return BTreeSet::new() };
        let base = match v {
            VarRef::Eq(j) => BTreeSet::from([(j, 0)]),
            VarRef::Param(p) => self.values[p].clone(),
        };
        base.into_iter()
            .map(|(j, k)| (j, k + args.len()))
            .filter(|&(j, k)| k < self.hes.eq(j).params.len())
            .collect()
    }

    fn sites(f: &Formula, out: &mut Vec<Formula>) {
        match f.shape() {
            Shape::True | Shape::False | Shape::Var(_) => {}
            Shape::Or(l, r) | Shape::And(l, r) => {
                Self::sites(l, out);
                Self::sites(r, out);
            }
            Shape::Dia(_, b) | Shape::Box(_, b) | Shape::Abs(_, _, b) => Self::sites(b, out),
            Shape::App(..) => {
                out.push(f.clone());
                let (_, args) = f.spine();
                for a in args {
                    Self::sites(a, out);
                }
            }
        }
    }

    fn run(&mut self) {
        let mut sites = Vec::new();
        for e in self.hes.equations() {
            Self::sites(&e.body, &mut sites);
        }
        loop {
            let mut changed = false;
            for site in &sites {
                let Some((v, args)) = self.head(site) else { continue };
                let targets = match v {
                    VarRef::Eq(j) => BTreeSet::from([(j, 0)]),
                    VarRef::Param(p) => self.values[p].clone(),
                };
                for (j, k) in targets {
                    for (i, a) in args.iter().enumerate() {
                        if k + i >= self.hes.eq(j).params.len() {
                            break;
                        }
                        let p = self.hes.param_id(j, k + i);
                        changed |= self.flow.insert(p, a.clone());
                    }
                }
            }
            for p in 0..self.flow.len() {
                let mut vals = self.values[p].clone();
                for a in self.flow.get(p) {
                    vals.extend(self.value(a));
                }
                if vals != self.values[p] {
                    self.values[p] = vals;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for set in &mut self.flow.args {
            set.sort_by_key(|f| f.occ());
        }
    }
}

/// Constraint-based 0-CFA.
pub fn compute_flow(hes: &Hes) -> FlowMap {
    let n = hes.num_params();
    let mut cfa = Cfa { hes, flow: FlowMap { args: vec![Vec::new(); n] }, values: vec![BTreeSet::new(); n] };
    cfa.run();
    cfa.flow
}

/// `(j, k)` is an edge iff equation `k` occurs in the body of equation `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CallGraph {
    pub succ: Vec<BTreeSet<usize>>,
}

impl CallGraph {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.succ.iter().enumerate().flat_map(|(j, s)| s.iter().map(move |&k| (j, k))).collect()
    }

    /// Whether `v` lies on a cycle through vertices accepted by `keep`.
    pub fn on_cycle(&self, v: usize, keep: impl Fn(usize) -> bool) -> bool {
        let mut seen = HashSet::new();
        let mut stack: Vec<usize> = self.succ[v].iter().copied().filter(|&k| keep(k)).collect();
        while let Some(u) = stack.pop() {
            if u == v {
                return true;
            }
            if seen.insert(u) {
                stack.extend(self.succ[u].iter().copied().filter(|&k| keep(k)));
            }
        }
        false
    }
}

pub fn call_graph(hes: &Hes) -> CallGraph {
    let succ = hes
        .equations()
        .iter()
        .map(|e| {
            let mut s = BTreeSet::new();
            e.body.visit(&mut |f| {
                if let Some(VarRef::Eq(k)) = f.as_var().and_then(|x| hes.lookup(x)) {
                    s.insert(k);
                }
            });
            s
        })
        .collect();
    CallGraph { succ }
}

/// ν-equations that are the highest-priority vertex of some cycle.
pub fn nu_heads_on_cycles(cg: &CallGraph, hes: &Hes, priority: &[u32]) -> BTreeSet<usize> {
    (0..hes.len())
        .filter(|&j| hes.eq(j).sign == Sign::Nu && cg.on_cycle(j, |k| priority[k] <= priority[j]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::priorities;
    use crate::syntax::{infer_kinds, parse_hes};

    fn hes(src: &str) -> Hes {
        infer_kinds(&parse_hes(src).unwrap()).unwrap()
    }

    const EX3: &str = "S =v <a>(F (<b> S)); F =m \\X. X \\/ <c> S \\/ <a>(F (<b> X));";

    #[test]
    fn example3_flow() {
        let h = hes(EX3);
        let flow = compute_flow(&h);
        let args: Vec<String> = flow.get(0).iter().map(|f| f.to_string()).collect();
        assert_eq!(args, ["<b> S", "<b> X"]);
        assert!(flow.render(&h).starts_with("X: occ#"));
        let h = hes("S =v F true; F =m \\X. X;");
        let args: Vec<String> = compute_flow(&h).get(0).iter().map(|f| f.to_string()).collect();
        assert_eq!(args, ["true"]);
    }

    #[test]
    fn higher_order_flow() {
        let h = hes("S =v G F; G =v \\P. P (<a> true); F =m \\X. X;");
        let flow = compute_flow(&h);
        let p = h.param_id(1, 0);
        let x = h.param_id(2, 0);
        assert_eq!(flow.get(p).iter().map(|f| f.to_string()).collect::<Vec<_>>(), ["F"]);
        assert_eq!(flow.get(x).iter().map(|f| f.to_string()).collect::<Vec<_>>(), ["<a> true"]);
    }

    #[test]
    fn partial_application_flow() {
        let h = hes("S =v G (H true); G =v \\P. P false; H =m \\X. \\Y. X /\\ Y;");
        let flow = compute_flow(&h);
        let y = h.param_id(2, 1);
        assert_eq!(flow.get(y).iter().map(|f| f.to_string()).collect::<Vec<_>>(), ["false"]);
    }

    #[test]
    fn call_graphs() {
        let h = hes(EX3);
        let cg = call_graph(&h);
        assert_eq!(cg.edges(), vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        let pr = priorities(&h);
        assert_eq!(nu_heads_on_cycles(&cg, &h, &pr), BTreeSet::from([0]));
        let h = hes("S =v true;");
        assert!(call_graph(&h).edges().is_empty());
        assert!(nu_heads_on_cycles(&call_graph(&h), &h, &priorities(&h)).is_empty());
        let h = hes("S =v S;");
        assert_eq!(call_graph(&h).edges(), vec![(0, 0)]);
        assert_eq!(nu_heads_on_cycles(&call_graph(&h), &h, &priorities(&h)), BTreeSet::from([0]));
    }
}
