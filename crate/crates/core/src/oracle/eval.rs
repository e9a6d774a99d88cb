use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::sync::Arc;

use super::domain::{Domains, FunTable, SemValue};
use crate::error::{Error, Result};
use crate::syntax::{approximate, normalize, to_hfl, Formula, Hes, Hfl, Kind, Lts, Name, Shape, StateSet};

pub type SemEnv = Vec<(Name, SemValue)>;

/// Reference evaluator by Kleene iteration.
///
/// The value of a fixpoint subterm is memoized under the exact values of its
/// free variables, for the duration of one top-level [`Evaluator::eval`].
pub struct Evaluator<'a> {
    domains: Domains<'a>,
    depth: Cell<usize>,
    free: RefCell<HashMap<usize, Vec<Name>>>,
    memo: RefCell<HashMap<(usize, Vec<SemValue>), SemValue>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(lts: &'a Lts) -> Evaluator<'a> {
        Evaluator::with_domains(Domains::new(lts))
    }

    pub fn with_domains(domains: Domains<'a>) -> Evaluator<'a> {
        Evaluator { domains, depth: Cell::new(0), free: RefCell::default(), memo: RefCell::default() }
    }

    pub fn domains(&self) -> &Domains<'a> {
        &self.domains
    }

    fn lts(&self) -> &'a Lts {
        self.domains.lts()
    }

    pub fn eval(&self, f: &Hfl, env: &mut SemEnv) -> Result<SemValue> {
        if self.depth.get() == 0 {
            self.free.borrow_mut().clear();
            self.memo.borrow_mut().clear();
        }
        self.depth.set(self.depth.get() + 1);
        let v = self.eval_in(f, env);
        self.depth.set(self.depth.get() - 1);
        v
    }

    fn eval_in(&self, f: &Hfl, env: &mut SemEnv) -> Result<SemValue> {
        let lts = self.lts();
        Ok(match f {
            Hfl::True => SemValue::Set(lts.full_set()),
            Hfl::False => SemValue::Set(lts.empty_set()),
            Hfl::Var(x) => match env.iter().rev().find(|(n, _)| n == x) {
                Some((_, v)) => v.clone(),
                None => return Err(Error::Unbound(x.to_string())),
            },
            Hfl::Or(l, r) => {
                let mut s = self.eval_in(l, env)?.as_set().clone();
                s.union_with(self.eval_in(r, env)?.as_set());
                SemValue::Set(s)
            }
            Hfl::And(l, r) => {
                let mut s = self.eval_in(l, env)?.as_set().clone();
                s.intersect_with(self.eval_in(r, env)?.as_set());
                SemValue::Set(s)
            }
            Hfl::Dia(a, b) => SemValue::Set(lts.pre_exists(a, self.eval_in(b, env)?.as_set())),
            Hfl::Box(a, b) => SemValue::Set(lts.pre_forall(a, self.eval_in(b, env)?.as_set())),
            Hfl::Abs(x, k, b) => {
                let domain = self.domains.domain(k)?;
                let mut table = Vec::with_capacity(domain.len());
                for d in &domain.elems {
                    env.push((x.clone(), d.clone()));
                    let v = self.eval_in(b, env);
                    env.pop();
                    table.push(v?);
                }
                SemValue::Fun(Arc::new(FunTable { domain, table }))
            }
            Hfl::App(g, a) => {
                let g = self.eval_in(g, env)?;
                let a = self.eval_in(a, env)?;
                g.apply(&a)
            }
            Hfl::Mu(x, k, b) | Hfl::Nu(x, k, b) => {
                let addr = f as *const Hfl as usize;
                let names = self.free.borrow_mut().entry(addr).or_insert_with(|| f.free_vars().into_iter().collect()).clone();
                let mut key = Vec::with_capacity(names.len());
                for n in &names {
                    match env.iter().rev().find(|(m, _)| m == n) {
                        Some((_, v)) => key.push(v.clone()),
                        None => return Err(Error::Unbound(n.to_string())),
                    }
                }
                let key = (addr, key);
                if let Some(v) = self.memo.borrow().get(&key) {
                    return Ok(v.clone());
                }
                let v = self.fixpoint(x, k, b, env, matches!(f, Hfl::Nu(..)))?;
                self.memo.borrow_mut().insert(key, v.clone());
                v
            }
        })
    }

    /// Kleene iteration from bottom (μ) or top (ν).
    fn fixpoint(&self, x: &Name, k: &Kind, body: &Hfl, env: &mut SemEnv, greatest: bool) -> Result<SemValue> {
        let mut v = if greatest { self.domains.top(k)? } else { self.domains.bottom(k)? };
        loop {
            env.push((x.clone(), v.clone()));
            let next = self.eval_in(body, env);
            env.pop();
            let next = next?;
            if next == v {
                return Ok(v);
            }
            v = next;
        }
    }
}

/// `q0 ∈ ⟦toHFL(hes)⟧`.
pub fn check_naive(lts: &Lts, hes: &Hes) -> Result<bool> {
    let f = to_hfl(hes);
    let v = Evaluator::new(lts).eval(&f, &mut Vec::new())?;
    Ok(v.as_set().contains(lts.initial()))
}

/// Structural evaluation of a variable-free, fixpoint-free formula.
pub fn eval_propositional(lts: &Lts, f: &Formula) -> Result<StateSet> {
    Ok(match f.shape() {
        Shape::True => lts.full_set(),
        Shape::False => lts.empty_set(),
        Shape::Or(l, r) => {
            let mut s = eval_propositional(lts, l)?;
            s.union_with(&eval_propositional(lts, r)?);
            s
        }
        Shape::And(l, r) => {
            let mut s = eval_propositional(lts, l)?;
            s.intersect_with(&eval_propositional(lts, r)?);
            s
        }
        Shape::Dia(a, b) => lts.pre_exists(a, &eval_propositional(lts, b)?),
        Shape::Box(a, b) => lts.pre_forall(a, &eval_propositional(lts, b)?),
        Shape::Var(_) | Shape::Abs(..) | Shape::App(..) => {
            return Err(Error::Precondition(format!("`{f}` is not propositional")))
        }
    })
}

pub const DEFAULT_UNFOLD_BUDGET: usize = 1_000_000;

/// Verdict of the `m`-th approximation, obtained by normalizing its entry.
pub fn check_by_unfolding(lts: &Lts, hes: &Hes, m: u32, budget: usize) -> Result<bool> {
    let approx = approximate(hes, m)?;
    let chi = normalize(&Formula::var(approx.entry().name.clone()), &approx, budget)?;
    Ok(eval_propositional(lts, &chi)?.contains(lts.initial()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{infer_kinds, parse_formula, parse_hes, parse_lts};

    fn fig3() -> Lts {
        parse_lts("initial q0\nq0 a q1\nq1 b q2\nq2 a q0\nq0 c q0").unwrap()
    }

    fn hes(src: &str) -> Hes {
        infer_kinds(&parse_hes(src).unwrap()).unwrap()
    }

    fn names(l: &Lts, s: &StateSet) -> Vec<String> {
        s.ones().map(|q| l.state_name(q).to_string()).collect()
    }

    #[test]
    fn basic_clauses() {
        let l = fig3();
        let ev = Evaluator::new(&l);
        let c = ev.eval(&Hfl::dia("c", Hfl::True), &mut Vec::new()).unwrap();
        assert_eq!(names(&l, c.as_set()), ["q0"]);
        assert_eq!(ev.eval(&Hfl::True, &mut Vec::new()).unwrap().as_set().count_ones(..), 3);
        let nu = Hfl::nu("S", Kind::Prop, Hfl::True);
        assert_eq!(ev.eval(&nu, &mut Vec::new()).unwrap().as_set().count_ones(..), 3);
        let mu = Hfl::mu("S", Kind::Prop, Hfl::var("S"));
        assert_eq!(ev.eval(&mu, &mut Vec::new()).unwrap().as_set().count_ones(..), 0);
    }

    #[test]
    fn propositional() {
        let l = fig3();
        let f = parse_formula("[a] false").unwrap();
        assert_eq!(names(&l, &eval_propositional(&l, &f).unwrap()), ["q1"]);
        let f = parse_formula("true /\\ false").unwrap();
        assert!(eval_propositional(&l, &f).unwrap().is_clear());
        let f = parse_formula("<b> <c> true").unwrap();
        assert!(eval_propositional(&l, &f).unwrap().is_clear());
        assert!(eval_propositional(&l, &parse_formula("X").unwrap()).is_err());
    }

    #[test]
    fn naive_verdicts() {
        let ex3 = hes("S =v <a>(F (<b> S)); F =m \\X. X \\/ <c> S \\/ <a>(F (<b> X));");
        assert!(check_naive(&fig3(), &ex3).unwrap());
        let l2 = parse_lts("initial q0\nq0 read q0\nq0 close q1\nq1 end q2").unwrap();
        let ex2 = hes("S =v F (<end> true); F =v \\k. <close> k /\\ <read> <read> (F k);");
        assert!(check_naive(&l2, &ex2).unwrap());
        assert!(!check_naive(&fig3(), &hes("S =m S;")).unwrap());
    }

    #[test]
    fn unfolding_verdicts() {
        let l = fig3();
        assert!(check_by_unfolding(&l, &hes("S =v true;"), 2, 1000).unwrap());
        assert!(!check_by_unfolding(&l, &hes("S =m false;"), 2, 1000).unwrap());
        let ex3 = hes("S =v <a>(F (<b> S)); F =m \\X. X \\/ <c> S \\/ <a>(F (<b> X));");
        // <a>(<b> true \/ <c> true \/ <a> false) holds at q0
        assert!(check_by_unfolding(&l, &ex3, 1, 1000).unwrap());
    }
}
