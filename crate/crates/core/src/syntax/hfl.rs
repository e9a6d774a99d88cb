use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use super::formula::{fresh_name, Name};
use super::kind::Kind;

/// HFL formula with explicit fixpoint binders; the input of the oracle path.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Hfl {
    True,
    False,
    Var(Name),
    Or(Arc<Hfl>, Arc<Hfl>),
    And(Arc<Hfl>, Arc<Hfl>),
    Dia(Name, Arc<Hfl>),
    Box(Name, Arc<Hfl>),
    Abs(Name, Kind, Arc<Hfl>),
    App(Arc<Hfl>, Arc<Hfl>),
    Mu(Name, Kind, Arc<Hfl>),
    Nu(Name, Kind, Arc<Hfl>),
}

impl Hfl {
    pub fn var(x: impl Into<Name>) -> Hfl {
        Hfl::Var(x.into())
    }

    pub fn or(l: Hfl, r: Hfl) -> Hfl {
        Hfl::Or(Arc::new(l), Arc::new(r))
    }

    pub fn and(l: Hfl, r: Hfl) -> Hfl {
        Hfl::And(Arc::new(l), Arc::new(r))
    }

    pub fn dia(a: impl Into<Name>, b: Hfl) -> Hfl {
        Hfl::Dia(a.into(), Arc::new(b))
    }

    pub fn boxed(a: impl Into<Name>, b: Hfl) -> Hfl {
        Hfl::Box(a.into(), Arc::new(b))
    }

    pub fn abs(x: impl Into<Name>, k: Kind, b: Hfl) -> Hfl {
        Hfl::Abs(x.into(), k, Arc::new(b))
    }

    pub fn app(f: Hfl, a: Hfl) -> Hfl {
        Hfl::App(Arc::new(f), Arc::new(a))
    }

    pub fn mu(x: impl Into<Name>, k: Kind, b: Hfl) -> Hfl {
        Hfl::Mu(x.into(), k, Arc::new(b))
    }

    pub fn nu(x: impl Into<Name>, k: Kind, b: Hfl) -> Hfl {
        Hfl::Nu(x.into(), k, Arc::new(b))
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect(&mut Vec::new(), &mut out);
        out
    }

    fn collect(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Hfl::True | Hfl::False => {}
            Hfl::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Hfl::Or(l, r) | Hfl::And(l, r) | Hfl::App(l, r) => {
                l.collect(bound, out);
                r.collect(bound, out);
            }
            Hfl::Dia(_, b) | Hfl::Box(_, b) => b.collect(bound, out),
            Hfl::Abs(x, _, b) | Hfl::Mu(x, _, b) | Hfl::Nu(x, _, b) => {
                bound.push(x.clone());
                b.collect(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn size(&self) -> usize {
        match self {
            Hfl::True | Hfl::False | Hfl::Var(_) => 1,
            Hfl::Or(l, r) | Hfl::And(l, r) | Hfl::App(l, r) => 1 + l.size() + r.size(),
            Hfl::Dia(_, b) | Hfl::Box(_, b) | Hfl::Abs(_, _, b) | Hfl::Mu(_, _, b) | Hfl::Nu(_, _, b) => {
                1 + b.size()
            }
        }
    }

    /// Capture-avoiding simultaneous substitution.
    pub fn subst(&self, map: &HashMap<Name, Hfl>) -> Hfl {
        if map.is_empty() {
            return self.clone();
        }
        let rec = |f: &Arc<Hfl>| Arc::new(f.subst(map));
        match self {
            Hfl::True | Hfl::False => self.clone(),
            Hfl::Var(x) => map.get(x).cloned().unwrap_or_else(|| self.clone()),
            Hfl::Or(l, r) => Hfl::Or(rec(l), rec(r)),
            Hfl::And(l, r) => Hfl::And(rec(l), rec(r)),
            Hfl::App(l, r) => Hfl::App(rec(l), rec(r)),
            Hfl::Dia(a, b) => Hfl::Dia(a.clone(), rec(b)),
            Hfl::Box(a, b) => Hfl::Box(a.clone(), rec(b)),
            Hfl::Abs(x, k, b) | Hfl::Mu(x, k, b) | Hfl::Nu(x, k, b) => {
                let mut inner: HashMap<Name, Hfl> =
                    map.iter().filter(|(n, _)| *n != x).map(|(n, f)| (n.clone(), f.clone())).collect();
                let captured = inner.values().any(|f| f.free_vars().contains(x));
                let x2 = if captured {
                    let mut avoid = b.free_vars();
                    for f in inner.values() {
                        avoid.extend(f.free_vars());
                    }
                    avoid.extend(inner.keys().cloned());
                    let fresh = fresh_name(x, |n| avoid.contains(n));
                    inner.insert(x.clone(), Hfl::Var(fresh.clone()));
                    fresh
                } else {
                    x.clone()
                };
                let nb = Arc::new(b.subst(&inner));
                match self {
                    Hfl::Abs(..) => Hfl::Abs(x2, k.clone(), nb),
                    Hfl::Mu(..) => Hfl::Mu(x2, k.clone(), nb),
                    _ => Hfl::Nu(x2, k.clone(), nb),
                }
            }
        }
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Hfl) -> bool {
        fn go(a: &Hfl, b: &Hfl, env: &mut Vec<(Name, Name)>) -> bool {
            match (a, b) {
                (Hfl::True, Hfl::True) | (Hfl::False, Hfl::False) => true,
                (Hfl::Var(x), Hfl::Var(y)) => {
                    for (l, r) in env.iter().rev() {
                        if l == x || r == y {
                            return l == x && r == y;
                        }
                    }
                    x == y
                }
                (Hfl::Or(a1, a2), Hfl::Or(b1, b2))
                | (Hfl::And(a1, a2), Hfl::And(b1, b2))
                | (Hfl::App(a1, a2), Hfl::App(b1, b2)) => go(a1, b1, env) && go(a2, b2, env),
                (Hfl::Dia(x, a), Hfl::Dia(y, b)) | (Hfl::Box(x, a), Hfl::Box(y, b)) => x == y && go(a, b, env),
                (Hfl::Abs(x, k, a), Hfl::Abs(y, l, b))
                | (Hfl::Mu(x, k, a), Hfl::Mu(y, l, b))
                | (Hfl::Nu(x, k, a), Hfl::Nu(y, l, b)) => {
                    if k != l {
                        return false;
                    }
                    env.push((x.clone(), y.clone()));
                    let r = go(a, b, env);
                    env.pop();
                    r
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }

    fn prec(&self) -> u8 {
        match self {
            Hfl::Abs(..) | Hfl::Mu(..) | Hfl::Nu(..) => 0,
            Hfl::Or(..) => 1,
            Hfl::And(..) => 2,
            Hfl::Dia(..) | Hfl::Box(..) => 3,
            Hfl::App(..) => 4,
            Hfl::True | Hfl::False | Hfl::Var(_) => 5,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        let paren = self.prec() < ctx;
        if paren {
            write!(f, "(")?;
        }
        match self {
            Hfl::True => write!(f, "true")?,
            Hfl::False => write!(f, "false")?,
            Hfl::Var(x) => write!(f, "{x}")?,
            Hfl::Or(l, r) => {
                l.fmt_at(f, 1)?;
                write!(f, " \\/ ")?;
                r.fmt_at(f, 2)?;
            }
            Hfl::And(l, r) => {
                l.fmt_at(f, 2)?;
                write!(f, " /\\ ")?;
                r.fmt_at(f, 3)?;
            }
            Hfl::Dia(a, b) => {
                write!(f, "<{a}> ")?;
                b.fmt_at(f, 3)?;
            }
            Hfl::Box(a, b) => {
                write!(f, "[{a}] ")?;
                b.fmt_at(f, 3)?;
            }
            Hfl::App(l, r) => {
                l.fmt_at(f, 4)?;
                write!(f, " ")?;
                r.fmt_at(f, 5)?;
            }
            Hfl::Abs(x, k, b) | Hfl::Mu(x, k, b) | Hfl::Nu(x, k, b) => {
                let binder = match self {
                    Hfl::Abs(..) => "\\",
                    Hfl::Mu(..) => "mu ",
                    _ => "nu ",
                };
                if k.is_prop() {
                    write!(f, "{binder}{x}^o. ")?;
                } else {
                    write!(f, "{binder}{x}^({k}). ")?;
                }
                b.fmt_at(f, 0)?;
            }
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Hfl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl fmt::Debug for Hfl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Kind of `f` under `env`, or `None` if it is ill-kinded.
pub fn kind_of(f: &Hfl, env: &mut Vec<(Name, Kind)>) -> Option<Kind> {
    match f {
        Hfl::True | Hfl::False => Some(Kind::Prop),
        Hfl::Var(x) => env.iter().rev().find(|(n, _)| n == x).map(|(_, k)| k.clone()),
        Hfl::Or(l, r) | Hfl::And(l, r) => {
            (kind_of(l, env)?.is_prop() && kind_of(r, env)?.is_prop()).then_some(Kind::Prop)
        }
        Hfl::Dia(_, b) | Hfl::Box(_, b) => kind_of(b, env)?.is_prop().then_some(Kind::Prop),
        Hfl::Abs(x, k, b) => {
            env.push((x.clone(), k.clone()));
            let r = kind_of(b, env);
            env.pop();
            Some(Kind::arrow(k.clone(), r?))
        }
        Hfl::App(g, a) => match kind_of(g, env)? {
            Kind::Arrow(p, r) if kind_of(a, env).as_ref() == Some(&*p) => Some((*r).clone()),
            _ => None,
        },
        Hfl::Mu(x, k, b) | Hfl::Nu(x, k, b) => {
            env.push((x.clone(), k.clone()));
            let r = kind_of(b, env);
            env.pop();
            (r.as_ref() == Some(k)).then(|| k.clone())
        }
    }
}
