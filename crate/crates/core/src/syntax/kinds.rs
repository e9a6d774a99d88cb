use std::collections::HashMap;

use super::formula::{Formula, Name, Shape};
use super::hes::{Hes, VarRef};
use super::kind::Kind;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
enum Term {
    Var(usize),
    Prop,
    Arrow(Box<Term>, Box<Term>),
}

#[derive(Default)]
struct Unifier {
    binding: Vec<Option<Term>>,
}

impl Unifier {
    fn fresh(&mut self) -> Term {
        self.binding.push(None);
        Term::Var(self.binding.len() - 1)
    }

    fn of_kind(k: &Kind) -> Term {
        match k {
            Kind::Prop => Term::Prop,
            Kind::Arrow(a, r) => Term::Arrow(Box::new(Self::of_kind(a)), Box::new(Self::of_kind(r))),
        }
    }

    fn resolve(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => match &self.binding[*v] {
                Some(b) => self.resolve(b),
                None => t.clone(),
            },
            _ => t.clone(),
        }
    }

    fn occurs(&self, v: usize, t: &Term) -> bool {
        match self.resolve(t) {
            Term::Var(w) => v == w,
            Term::Prop => false,
            Term::Arrow(a, r) => self.occurs(v, &a) || self.occurs(v, &r),
        }
    }

    fn unify(&mut self, a: &Term, b: &Term) -> std::result::Result<(), String> {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => Ok(()),
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if self.occurs(*x, t) {
                    return Err("infinite kind".into());
                }
                self.binding[*x] = Some(t.clone());
                Ok(())
            }
            (Term::Prop, Term::Prop) => Ok(()),
            (Term::Arrow(a1, r1), Term::Arrow(a2, r2)) => {
                self.unify(a1, a2)?;
                self.unify(r1, r2)
            }
            (Term::Prop, Term::Arrow(..)) | (Term::Arrow(..), Term::Prop) => {
                Err("o is not an arrow".into())
            }
        }
    }

    fn ground(&self, t: &Term) -> Option<Kind> {
        match self.resolve(t) {
            Term::Var(_) => None,
            Term::Prop => Some(Kind::Prop),
            Term::Arrow(a, r) => Some(Kind::arrow(self.ground(&a)?, self.ground(&r)?)),
        }
    }
}

struct Ctx<'a> {
    u: Unifier,
    vars: HashMap<VarRef, Term>,
    hes: &'a Hes,
    equation: Name,
}

impl Ctx<'_> {
    fn err(&self, msg: String) -> Error {
        Error::Kind { equation: self.equation.to_string(), msg }
    }

    fn unify(&mut self, a: &Term, b: &Term, what: &Formula) -> Result<()> {
        self.u.unify(a, b).map_err(|m| self.err(format!("{m} in `{what}`")))
    }

    fn infer(&mut self, f: &Formula, local: &mut Vec<(Name, Term)>) -> Result<Term> {
        match f.shape() {
            Shape::True | Shape::False => Ok(Term::Prop),
            Shape::Var(x) => {
                if let Some((_, t)) = local.iter().rev().find(|(n, _)| n == x) {
                    return Ok(t.clone());
                }
                match self.hes.lookup(x) {
                    Some(v) => Ok(self.vars[&v].clone()),
                    None => Err(Error::Unbound(x.to_string())),
                }
            }
            Shape::Or(l, r) | Shape::And(l, r) => {
                for s in [l, r] {
                    let t = self.infer(s, local)?;
                    self.unify(&t, &Term::Prop, s)?;
                }
                Ok(Term::Prop)
            }
            Shape::Dia(_, b) | Shape::Box(_, b) => {
                let t = self.infer(b, local)?;
                self.unify(&t, &Term::Prop, b)?;
                Ok(Term::Prop)
            }
            Shape::Abs(x, k, b) => {
                let tx = match k {
                    Some(k) => Unifier::of_kind(k),
                    None => self.u.fresh(),
                };
                local.push((x.clone(), tx.clone()));
                let tb = self.infer(b, local);
                local.pop();
                Ok(Term::Arrow(Box::new(tx), Box::new(tb?)))
            }
            Shape::App(g, a) => {
                let tg = self.infer(g, local)?;
                let ta = self.infer(a, local)?;
                let r = self.u.fresh();
                self.unify(&tg, &Term::Arrow(Box::new(ta), Box::new(r.clone())), f)?;
                Ok(r)
            }
        }
    }
}

/// Assigns the unique simple kind to every equation and parameter.
pub fn infer_kinds(hes: &Hes) -> Result<Hes> {
    let mut ctx = Ctx { u: Unifier::default(), vars: HashMap::new(), hes, equation: "".into() };
    for (j, e) in hes.equations().iter().enumerate() {
        let mut params = Vec::new();
        for (i, p) in e.params.iter().enumerate() {
            let t = match &p.kind {
                Some(k) => Unifier::of_kind(k),
                None => ctx.u.fresh(),
            };
            ctx.vars.insert(VarRef::Param(hes.param_id(j, i)), t.clone());
            params.push(t);
        }
        let ek = params.into_iter().rev().fold(Term::Prop, |acc, a| Term::Arrow(Box::new(a), Box::new(acc)));
        ctx.vars.insert(VarRef::Eq(j), ek.clone());
        if let Some(k) = &e.kind {
            ctx.equation = e.name.clone();
            ctx.u.unify(&ek, &Unifier::of_kind(k)).map_err(|m| ctx.err(m))?;
        }
    }
    for e in hes.equations() {
        ctx.equation = e.name.clone();
        let t = ctx.infer(&e.body, &mut Vec::new())?;
        ctx.unify(&t, &Term::Prop, &e.body)?;
    }
    let mut out = hes.clone();
    for (j, e) in out.equations_mut().iter_mut().enumerate() {
        for (i, p) in e.params.iter_mut().enumerate() {
            let t = &ctx.vars[&VarRef::Param(hes.param_id(j, i))];
            p.kind = Some(ctx.u.ground(t).ok_or_else(|| Error::AmbiguousKind(p.name.to_string()))?);
        }
        let t = &ctx.vars[&VarRef::Eq(j)];
        e.kind = Some(ctx.u.ground(t).ok_or_else(|| Error::AmbiguousKind(e.name.to_string()))?);
    }
    if !out.entry().kind().is_prop() {
        return Err(Error::EntryNotProp(out.entry().name.to_string()));
    }
    Ok(out)
}
