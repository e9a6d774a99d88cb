use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use super::kind::Kind;

pub type Name = Arc<str>;

/// Identity of a syntactic occurrence inside one parsed system.
///
/// Nodes produced by substitution keep the id of the occurrence they were
/// copied from, so an argument reached after unfolding still names the
/// source occurrence it is an instance of.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OccId(pub u32);

impl OccId {
    pub const SYNTHETIC: OccId = OccId(u32::MAX);
}

impl fmt::Display for OccId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "occ#{}", self.0)
    }
}

/// Fixpoint-free formula. Cheap to clone; subterms are shared.
#[derive(Clone)]
pub struct Formula(Arc<Node>);

pub struct Node {
    occ: OccId,
    shape: Shape,
}

#[derive(Clone)]
pub enum Shape {
    True,
    False,
    Var(Name),
    Or(Formula, Formula),
    And(Formula, Formula),
    Dia(Name, Formula),
    Box(Name, Formula),
    Abs(Name, Option<Kind>, Formula),
    App(Formula, Formula),
}

impl Formula {
    pub fn new(occ: OccId, shape: Shape) -> Formula {
        Formula(Arc::new(Node { occ, shape }))
    }

    fn syn(shape: Shape) -> Formula {
        Formula::new(OccId::SYNTHETIC, shape)
    }

    pub fn tt() -> Formula {
        Formula::syn(Shape::True)
    }

    pub fn ff() -> Formula {
        Formula::syn(Shape::False)
    }

    pub fn var(name: impl Into<Name>) -> Formula {
        Formula::syn(Shape::Var(name.into()))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::syn(Shape::Or(l, r))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::syn(Shape::And(l, r))
    }

    pub fn dia(action: impl Into<Name>, body: Formula) -> Formula {
        Formula::syn(Shape::Dia(action.into(), body))
    }

    pub fn boxed(action: impl Into<Name>, body: Formula) -> Formula {
        Formula::syn(Shape::Box(action.into(), body))
    }

    pub fn abs(var: impl Into<Name>, kind: Option<Kind>, body: Formula) -> Formula {
        Formula::syn(Shape::Abs(var.into(), kind, body))
    }

    pub fn app(fun: Formula, arg: Formula) -> Formula {
        Formula::syn(Shape::App(fun, arg))
    }

    pub fn apps(head: Formula, args: impl IntoIterator<Item = Formula>) -> Formula {
        args.into_iter().fold(head, Formula::app)
    }

    pub fn occ(&self) -> OccId {
        self.0.occ
    }

    pub fn shape(&self) -> &Shape {
        &self.0.shape
    }

    pub fn with_occ(&self, occ: OccId) -> Formula {
        Formula::new(occ, self.0.shape.clone())
    }

    /// Address of the shared node; stable while the formula is alive.
    pub fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn ptr_eq(&self, other: &Formula) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn as_var(&self) -> Option<&Name> {
        match &self.0.shape {
            Shape::Var(x) => Some(x),
            _ => None,
        }
    }

    /// Splits `h a1 ... an` into the head and its arguments.
    pub fn spine(&self) -> (&Formula, Vec<&Formula>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Shape::App(f, a) = &cur.0.shape {
            args.push(a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    pub fn size(&self) -> usize {
        match &self.0.shape {
            Shape::True | Shape::False | Shape::Var(_) => 1,
            Shape::Or(l, r) | Shape::And(l, r) | Shape::App(l, r) => 1 + l.size() + r.size(),
            Shape::Dia(_, b) | Shape::Box(_, b) | Shape::Abs(_, _, b) => 1 + b.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match &self.0.shape {
            Shape::True | Shape::False => {}
            Shape::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Shape::Or(l, r) | Shape::And(l, r) | Shape::App(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Shape::Dia(_, b) | Shape::Box(_, b) => b.collect_free(bound, out),
            Shape::Abs(x, _, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        match &self.0.shape {
            Shape::True | Shape::False => false,
            Shape::Var(x) => &**x == name,
            Shape::Or(l, r) | Shape::And(l, r) | Shape::App(l, r) => {
                l.mentions(name) || r.mentions(name)
            }
            Shape::Dia(_, b) | Shape::Box(_, b) => b.mentions(name),
            Shape::Abs(x, _, b) => &**x != name && b.mentions(name),
        }
    }

    /// Capture-avoiding simultaneous substitution. Untouched subterms are
    /// shared, rebuilt nodes keep their occurrence ids.
    pub fn subst(&self, map: &HashMap<Name, Formula>) -> Formula {
        if map.is_empty() {
            return self.clone();
        }
        self.subst_inner(map)
    }

    fn subst_inner(&self, map: &HashMap<Name, Formula>) -> Formula {
        let occ = self.0.occ;
        match &self.0.shape {
            Shape::True | Shape::False => self.clone(),
            Shape::Var(x) => map.get(x).cloned().unwrap_or_else(|| self.clone()),
            Shape::Or(l, r) => self.rebuild2(l, r, map, Shape::Or),
            Shape::And(l, r) => self.rebuild2(l, r, map, Shape::And),
            Shape::App(l, r) => self.rebuild2(l, r, map, Shape::App),
            Shape::Dia(a, b) => {
                let nb = b.subst_inner(map);
                if nb.ptr_eq(b) {
                    self.clone()
                } else {
                    Formula::new(occ, Shape::Dia(a.clone(), nb))
                }
            }
            Shape::Box(a, b) => {
                let nb = b.subst_inner(map);
                if nb.ptr_eq(b) {
                    self.clone()
                } else {
                    Formula::new(occ, Shape::Box(a.clone(), nb))
                }
            }
            Shape::Abs(x, k, b) => {
                let mut inner: HashMap<Name, Formula> =
                    map.iter().filter(|(n, _)| *n != x).map(|(n, f)| (n.clone(), f.clone())).collect();
                if inner.is_empty() {
                    return self.clone();
                }
                let captured = inner.values().any(|f| f.mentions(x));
                let (x2, body) = if captured {
                    let mut avoid: BTreeSet<Name> = b.free_vars();
                    for f in inner.values() {
                        avoid.extend(f.free_vars());
                    }
                    avoid.extend(inner.keys().cloned());
                    let fresh = fresh_name(x, |n| avoid.contains(n));
                    inner.insert(x.clone(), Formula::var(fresh.clone()));
                    (fresh, b.subst_inner(&inner))
                } else {
                    (x.clone(), b.subst_inner(&inner))
                };
                Formula::new(occ, Shape::Abs(x2, k.clone(), body))
            }
        }
    }

    fn rebuild2(
        &self,
        l: &Formula,
        r: &Formula,
        map: &HashMap<Name, Formula>,
        mk: fn(Formula, Formula) -> Shape,
    ) -> Formula {
        let nl = l.subst_inner(map);
        let nr = r.subst_inner(map);
        if nl.ptr_eq(l) && nr.ptr_eq(r) {
            self.clone()
        } else {
            Formula::new(self.0.occ, mk(nl, nr))
        }
    }

    /// Renames free variables according to `f` (identity where `None`).
    pub fn rename_vars(&self, f: &dyn Fn(&Name) -> Option<Name>) -> Formula {
        let map: HashMap<Name, Formula> = self
            .free_vars()
            .into_iter()
            .filter_map(|x| f(&x).map(|y| (x, Formula::var(y))))
            .collect();
        self.subst(&map)
    }

    /// Pre-order traversal, yielding every node.
    pub fn visit(&self, f: &mut dyn FnMut(&Formula)) {
        f(self);
        match &self.0.shape {
            Shape::True | Shape::False | Shape::Var(_) => {}
            Shape::Or(l, r) | Shape::And(l, r) | Shape::App(l, r) => {
                l.visit(f);
                r.visit(f);
            }
            Shape::Dia(_, b) | Shape::Box(_, b) | Shape::Abs(_, _, b) => b.visit(f),
        }
    }

    /// Rebuilds the tree with fresh pre-order occurrence ids starting at `*next`.
    pub fn renumber(&self, next: &mut u32) -> Formula {
        let occ = OccId(*next);
        *next += 1;
        let shape = match &self.0.shape {
            Shape::True => Shape::True,
            Shape::False => Shape::False,
            Shape::Var(x) => Shape::Var(x.clone()),
            Shape::Or(l, r) => {
                let l = l.renumber(next);
                Shape::Or(l, r.renumber(next))
            }
            Shape::And(l, r) => {
                let l = l.renumber(next);
                Shape::And(l, r.renumber(next))
            }
            Shape::App(l, r) => {
                let l = l.renumber(next);
                Shape::App(l, r.renumber(next))
            }
            Shape::Dia(a, b) => Shape::Dia(a.clone(), b.renumber(next)),
            Shape::Box(a, b) => Shape::Box(a.clone(), b.renumber(next)),
            Shape::Abs(x, k, b) => Shape::Abs(x.clone(), k.clone(), b.renumber(next)),
        };
        Formula::new(occ, shape)
    }

    fn prec(&self) -> u8 {
        match &self.0.shape {
            Shape::Abs(..) => 0,
            Shape::Or(..) => 1,
            Shape::And(..) => 2,
            Shape::Dia(..) | Shape::Box(..) => 3,
            Shape::App(..) => 4,
            Shape::True | Shape::False | Shape::Var(_) => 5,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        let paren = self.prec() < ctx;
        if paren {
            write!(f, "(")?;
        }
        match &self.0.shape {
            Shape::True => write!(f, "true")?,
            Shape::False => write!(f, "false")?,
            Shape::Var(x) => write!(f, "{x}")?,
            Shape::Or(l, r) => {
                l.fmt_at(f, 1)?;
                write!(f, " \\/ ")?;
                r.fmt_at(f, 2)?;
            }
            Shape::And(l, r) => {
                l.fmt_at(f, 2)?;
                write!(f, " /\\ ")?;
                r.fmt_at(f, 3)?;
            }
            Shape::Dia(a, b) => {
                write!(f, "<{a}> ")?;
                b.fmt_at(f, 3)?;
            }
            Shape::Box(a, b) => {
                write!(f, "[{a}] ")?;
                b.fmt_at(f, 3)?;
            }
            Shape::App(l, r) => {
                l.fmt_at(f, 4)?;
                write!(f, " ")?;
                r.fmt_at(f, 5)?;
            }
            Shape::Abs(x, k, b) => {
                write!(f, "\\{x}")?;
                if let Some(k) = k {
                    if k.is_prop() {
                        write!(f, "^o")?;
                    } else {
                        write!(f, "^({k})")?;
                    }
                }
                write!(f, ". ")?;
                b.fmt_at(f, 0)?;
            }
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Structural equality; occurrence ids are ignored.
impl PartialEq for Formula {
    fn eq(&self, other: &Formula) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        match (&self.0.shape, &other.0.shape) {
            (Shape::True, Shape::True) | (Shape::False, Shape::False) => true,
            (Shape::Var(x), Shape::Var(y)) => x == y,
            (Shape::Or(a, b), Shape::Or(c, d))
            | (Shape::And(a, b), Shape::And(c, d))
            | (Shape::App(a, b), Shape::App(c, d)) => a == c && b == d,
            (Shape::Dia(a, x), Shape::Dia(b, y)) | (Shape::Box(a, x), Shape::Box(b, y)) => {
                a == b && x == y
            }
            (Shape::Abs(x, k, a), Shape::Abs(y, l, b)) => x == y && k == l && a == b,
            _ => false,
        }
    }
}

impl Eq for Formula {}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `base'`, `base''`, ... until `taken` rejects the candidate.
pub fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> Name {
    let mut cand = format!("{base}'");
    while taken(&cand) {
        cand.push('\'');
    }
    Name::from(cand)
}
