use std::collections::{BTreeSet, HashMap};

use super::formula::{fresh_name, Formula, Name, Shape};
use super::hes::{Equation, Hes, Param, Sign};
use super::hfl::{kind_of, Hfl};
use super::kind::Kind;
use super::kinds::infer_kinds;
use super::parser::renumber;
use crate::error::{Error, Result};

/// Moves every abstraction that is not part of an equation's parameter
/// prefix into a fresh ν-equation appended at the end. Enclosing parameters
/// free in the abstraction become its leading parameters.
pub fn lift_lambdas(eqs: Vec<Equation>) -> Result<Vec<Equation>> {
    let eq_names: BTreeSet<Name> = eqs.iter().map(|e| e.name.clone()).collect();
    let mut taken = eq_names.clone();
    for e in &eqs {
        taken.extend(e.params.iter().map(|p| p.name.clone()));
        e.body.visit(&mut |g| match g.shape() {
            Shape::Var(x) | Shape::Abs(x, _, _) => {
                taken.insert(x.clone());
            }
            _ => {}
        });
    }
    let mut lifter = Lifter { eq_names, taken, aux: Vec::new() };
    let mut out = Vec::with_capacity(eqs.len());
    for mut e in eqs {
        let mut scope: Vec<Param> = e.params.clone();
        e.body = lifter.lift(&e.body, &e.name, &mut scope);
        out.push(e);
    }
    out.append(&mut lifter.aux);
    Ok(out)
}

struct Lifter {
    eq_names: BTreeSet<Name>,
    taken: BTreeSet<Name>,
    aux: Vec<Equation>,
}

impl Lifter {
    fn lift(&mut self, f: &Formula, owner: &Name, scope: &mut Vec<Param>) -> Formula {
        let occ = f.occ();
        match f.shape() {
            Shape::True | Shape::False | Shape::Var(_) => f.clone(),
            Shape::Or(l, r) => {
                let (l, r) = (self.lift(l, owner, scope), self.lift(r, owner, scope));
                Formula::new(occ, Shape::Or(l, r))
            }
            Shape::And(l, r) => {
                let (l, r) = (self.lift(l, owner, scope), self.lift(r, owner, scope));
                Formula::new(occ, Shape::And(l, r))
            }
            Shape::App(l, r) => {
                let (l, r) = (self.lift(l, owner, scope), self.lift(r, owner, scope));
                Formula::new(occ, Shape::App(l, r))
            }
            Shape::Dia(a, b) => Formula::new(occ, Shape::Dia(a.clone(), self.lift(b, owner, scope))),
            Shape::Box(a, b) => Formula::new(occ, Shape::Box(a.clone(), self.lift(b, owner, scope))),
            Shape::Abs(..) => {
                let mut binders = Vec::new();
                let mut cur = f;
                while let Shape::Abs(x, k, b) = cur.shape() {
                    binders.push(Param { name: x.clone(), kind: k.clone(), annotated: k.is_some() });
                    cur = b;
                }
                let depth = scope.len();
                scope.extend(binders.iter().cloned());
                let body = self.lift(cur, owner, scope);
                scope.truncate(depth);
                let bound: BTreeSet<&Name> = binders.iter().map(|p| &p.name).collect();
                let free = body.free_vars();
                let mut leading: Vec<Param> = Vec::new();
                for p in scope.iter().rev() {
                    if free.contains(&p.name)
                        && !bound.contains(&p.name)
                        && !self.eq_names.contains(&p.name)
                        && !leading.iter().any(|q| q.name == p.name)
                    {
                        leading.push(p.clone());
                    }
                }
                leading.reverse();
                let base = format!("{owner}_lam");
                let name = if self.taken.contains(base.as_str()) {
                    fresh_name(&base, |n| self.taken.contains(n))
                } else {
                    Name::from(base)
                };
                self.taken.insert(name.clone());
                let args: Vec<Formula> = leading.iter().map(|p| Formula::var(p.name.clone())).collect();
                let mut params = leading;
                params.extend(binders);
                self.aux.push(Equation::new(name.clone(), Sign::Nu, params, body));
                Formula::apps(Formula::var(name), args)
            }
        }
    }
}

/// Converts a λ-annotated formula into [`Hfl`]; all binders must carry kinds.
pub fn formula_to_hfl(f: &Formula) -> Hfl {
    match f.shape() {
        Shape::True => Hfl::True,
        Shape::False => Hfl::False,
        Shape::Var(x) => Hfl::Var(x.clone()),
        Shape::Or(l, r) => Hfl::or(formula_to_hfl(l), formula_to_hfl(r)),
        Shape::And(l, r) => Hfl::and(formula_to_hfl(l), formula_to_hfl(r)),
        Shape::Dia(a, b) => Hfl::dia(a.clone(), formula_to_hfl(b)),
        Shape::Box(a, b) => Hfl::boxed(a.clone(), formula_to_hfl(b)),
        Shape::Abs(x, k, b) => {
            Hfl::abs(x.clone(), k.clone().expect("unkinded abstraction"), formula_to_hfl(b))
        }
        Shape::App(l, r) => Hfl::app(formula_to_hfl(l), formula_to_hfl(r)),
    }
}

/// Closed HFL formula of a kinded HES, substituting right to left.
pub fn to_hfl(hes: &Hes) -> Hfl {
    let n = hes.len();
    let mut bodies: Vec<Hfl> = (0..n).map(|j| formula_to_hfl(&hes.lambda_body(j))).collect();
    for j in (0..n).rev() {
        let e = hes.eq(j);
        let fix = match e.sign {
            Sign::Mu => Hfl::mu(e.name.clone(), e.kind().clone(), bodies[j].clone()),
            Sign::Nu => Hfl::nu(e.name.clone(), e.kind().clone(), bodies[j].clone()),
        };
        if j == 0 {
            return fix;
        }
        let mut map = HashMap::new();
        map.insert(e.name.clone(), fix);
        for b in bodies.iter_mut().take(j) {
            *b = b.subst(&map);
        }
    }
    unreachable!("an HES has at least one equation")
}

/// HES whose [`to_hfl`] is equivalent to `f`. Each fixpoint binder becomes
/// one equation in pre-order; enclosing λ-variables it mentions become
/// leading parameters.
pub fn hes_of_formula(f: &Hfl) -> Result<Hes> {
    if let Some(x) = f.free_vars().into_iter().next() {
        return Err(Error::NotClosed(x.to_string()));
    }
    match kind_of(f, &mut Vec::new()) {
        Some(Kind::Prop) => {}
        Some(_) => return Err(Error::EntryNotProp(f.to_string())),
        None => return Err(Error::Kind { equation: "<formula>".into(), msg: format!("ill-kinded `{f}`") }),
    }
    let f = uniquify(f, &mut BTreeSet::new());
    let mut conv = Converter { eqs: Vec::new() };
    let top_is_fix = matches!(f, Hfl::Mu(..) | Hfl::Nu(..));
    let entry_body = conv.conv(&f, &mut Vec::new());
    let mut eqs: Vec<Equation> = conv.eqs.into_iter().map(|e| e.expect("equation slot filled")).collect();
    if !top_is_fix {
        let mut names = BTreeSet::new();
        for e in &eqs {
            names.insert(e.name.clone());
            names.extend(e.params.iter().map(|p| p.name.clone()));
        }
        let s = if names.contains("S") { fresh_name("S", |n| names.contains(n)) } else { Name::from("S") };
        eqs.insert(0, Equation::new(s, Sign::Nu, Vec::new(), entry_body));
    }
    let eqs = lift_lambdas(eqs)?;
    let mut hes = Hes::new(eqs)?;
    renumber(&mut hes);
    infer_kinds(&hes)
}

/// Renames binders so that every bound name is distinct.
fn uniquify(f: &Hfl, used: &mut BTreeSet<Name>) -> Hfl {
    use std::sync::Arc;
    let rec = |g: &Arc<Hfl>, used: &mut BTreeSet<Name>| Arc::new(uniquify(g, used));
    match f {
        Hfl::True | Hfl::False | Hfl::Var(_) => f.clone(),
        Hfl::Or(l, r) => Hfl::Or(rec(l, used), rec(r, used)),
        Hfl::And(l, r) => Hfl::And(rec(l, used), rec(r, used)),
        Hfl::App(l, r) => Hfl::App(rec(l, used), rec(r, used)),
        Hfl::Dia(a, b) => Hfl::Dia(a.clone(), rec(b, used)),
        Hfl::Box(a, b) => Hfl::Box(a.clone(), rec(b, used)),
        Hfl::Abs(x, k, b) | Hfl::Mu(x, k, b) | Hfl::Nu(x, k, b) => {
            let (x2, b2) = if used.contains(x) {
                let fresh = fresh_name(x, |n| used.contains(n) || b.free_vars().contains(n));
                let mut m = HashMap::new();
                m.insert(x.clone(), Hfl::Var(fresh.clone()));
                (fresh, b.subst(&m))
            } else {
                (x.clone(), (**b).clone())
            };
            used.insert(x2.clone());
            let nb = Arc::new(uniquify(&b2, used));
            match f {
                Hfl::Abs(..) => Hfl::Abs(x2, k.clone(), nb),
                Hfl::Mu(..) => Hfl::Mu(x2, k.clone(), nb),
                _ => Hfl::Nu(x2, k.clone(), nb),
            }
        }
    }
}

enum Scope {
    Lambda(Name, Kind),
    Fix(Name, Vec<Name>),
}

struct Converter {
    eqs: Vec<Option<Equation>>,
}

impl Converter {
    fn conv(&mut self, f: &Hfl, scope: &mut Vec<Scope>) -> Formula {
        match f {
            Hfl::True => Formula::tt(),
            Hfl::False => Formula::ff(),
            Hfl::Var(x) => {
                for s in scope.iter().rev() {
                    match s {
                        Scope::Lambda(y, _) if y == x => return Formula::var(x.clone()),
                        Scope::Fix(y, leading) if y == x => {
                            return Formula::apps(
                                Formula::var(x.clone()),
                                leading.iter().map(|p| Formula::var(p.clone())),
                            )
                        }
                        _ => {}
                    }
                }
                Formula::var(x.clone())
            }
            Hfl::Or(l, r) => {
                let l = self.conv(l, scope);
                Formula::or(l, self.conv(r, scope))
            }
            Hfl::And(l, r) => {
                let l = self.conv(l, scope);
                Formula::and(l, self.conv(r, scope))
            }
            Hfl::App(l, r) => {
                let l = self.conv(l, scope);
                Formula::app(l, self.conv(r, scope))
            }
            Hfl::Dia(a, b) => Formula::dia(a.clone(), self.conv(b, scope)),
            Hfl::Box(a, b) => Formula::boxed(a.clone(), self.conv(b, scope)),
            Hfl::Abs(x, k, b) => {
                scope.push(Scope::Lambda(x.clone(), k.clone()));
                let body = self.conv(b, scope);
                scope.pop();
                Formula::abs(x.clone(), Some(k.clone()), body)
            }
            Hfl::Mu(x, _, b) | Hfl::Nu(x, _, b) => {
                let free = f.free_vars();
                let leading: Vec<Param> = scope
                    .iter()
                    .filter_map(|s| match s {
                        Scope::Lambda(y, k) if free.contains(y) => Some(Param::with_kind(y.clone(), k.clone())),
                        _ => None,
                    })
                    .collect();
                let slot = self.eqs.len();
                self.eqs.push(None);
                scope.push(Scope::Fix(x.clone(), leading.iter().map(|p| p.name.clone()).collect()));
                let mut body = self.conv(b, scope);
                scope.pop();
                let mut params = leading.clone();
                while let Shape::Abs(y, k, inner) = body.shape() {
                    params.push(Param { name: y.clone(), kind: k.clone(), annotated: true });
                    body = inner.clone();
                }
                let sign = if matches!(f, Hfl::Mu(..)) { Sign::Mu } else { Sign::Nu };
                self.eqs[slot] = Some(Equation::new(x.clone(), sign, params, body));
                Formula::apps(Formula::var(x.clone()), leading.iter().map(|p| Formula::var(p.name.clone())))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_hes;

    fn kinded(src: &str) -> Hes {
        infer_kinds(&parse_hes(src).unwrap()).unwrap()
    }

    #[test]
    fn to_hfl_nested() {
        let h = kinded("X =v Y; Y =m <a> X \\/ <b> Y;");
        let f = to_hfl(&h);
        let o = Kind::Prop;
        let expected = Hfl::nu(
            "X",
            o.clone(),
            Hfl::mu("Y", o, Hfl::or(Hfl::dia("a", Hfl::var("X")), Hfl::dia("b", Hfl::var("Y")))),
        );
        assert!(f.alpha_eq(&expected), "{f}");
        assert!(to_hfl(&kinded("S =v true;")).alpha_eq(&Hfl::nu("S", Kind::Prop, Hfl::True)));
    }

    #[test]
    fn to_hfl_example3() {
        let h = kinded("S =v <a>(F (<b> S)); F =m \\X. X \\/ <c> S \\/ <a>(F (<b> X));");
        let o = Kind::Prop;
        let oo = Kind::arrow(o.clone(), o.clone());
        let x = || Hfl::var("X");
        let body_f = Hfl::abs(
            "X",
            o.clone(),
            Hfl::or(
                Hfl::or(x(), Hfl::dia("c", Hfl::var("S"))),
                Hfl::dia("a", Hfl::app(Hfl::var("F"), Hfl::dia("b", x()))),
            ),
        );
        let expected = Hfl::nu(
            "S",
            o,
            Hfl::dia("a", Hfl::app(Hfl::mu("F", oo, body_f), Hfl::dia("b", Hfl::var("S")))),
        );
        assert!(to_hfl(&h).alpha_eq(&expected));
    }

    #[test]
    fn hes_of_formula_shapes() {
        let o = Kind::Prop;
        let f = Hfl::nu(
            "X",
            o.clone(),
            Hfl::mu("Y", o.clone(), Hfl::or(Hfl::dia("a", Hfl::var("X")), Hfl::dia("b", Hfl::var("Y")))),
        );
        let h = hes_of_formula(&f).unwrap();
        assert_eq!(h.to_string(), "X =v Y;\nY =m <a> X \\/ <b> Y;\n");
        assert!(to_hfl(&h).alpha_eq(&f));
        let t = hes_of_formula(&Hfl::True).unwrap();
        assert_eq!(t.to_string(), "S =v true;\n");
        assert!(matches!(hes_of_formula(&Hfl::var("Z")), Err(Error::NotClosed(_))));
    }

    #[test]
    fn hes_of_formula_lifts_lambda_variables() {
        // (\Z. mu Y. Z \/ <a> Y) true
        let o = Kind::Prop;
        let f = Hfl::app(
            Hfl::abs("Z", o.clone(), Hfl::mu("Y", o.clone(), Hfl::or(Hfl::var("Z"), Hfl::dia("a", Hfl::var("Y"))))),
            Hfl::True,
        );
        let h = hes_of_formula(&f).unwrap();
        let y = h.eq_index("Y").unwrap();
        assert_eq!(h.eq(y).params.len(), 1);
        assert_eq!(h.eq(y).kind().to_string(), "o -> o");
        assert!(h.eq(0).kind().is_prop());
    }

    #[test]
    fn lifting_inner_lambda() {
        let h = kinded("S =v F (\\Y. <a> Y); F =v \\G. G true;");
        assert_eq!(h.len(), 3);
        assert_eq!(h.eq(0).body.to_string(), "F S_lam");
        assert_eq!(h.eq(2).kind().to_string(), "o -> o");
    }
}
