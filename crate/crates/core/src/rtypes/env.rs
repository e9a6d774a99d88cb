use std::collections::BTreeSet;
use std::fmt::Write;

use super::types::{TyId, Types};
use crate::syntax::{Hes, VarRef};

/// One type binding `X : τ`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Binding {
    pub var: VarRef,
    pub ty: TyId,
}

impl Binding {
    pub fn new(var: VarRef, ty: TyId) -> Binding {
        Binding { var, ty }
    }

    pub fn eq(j: usize, ty: TyId) -> Binding {
        Binding { var: VarRef::Eq(j), ty }
    }

    pub fn render(&self, hes: &Hes, types: &Types) -> String {
        format!("{} : {}", hes.var_name(self.var), types.render(self.ty))
    }
}

/// Finite set of bindings; a variable may have several.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TypeEnv {
    set: BTreeSet<Binding>,
}

impl TypeEnv {
    pub fn new() -> TypeEnv {
        TypeEnv::default()
    }

    pub fn insert(&mut self, b: Binding) -> bool {
        self.set.insert(b)
    }

    pub fn remove(&mut self, b: &Binding) -> bool {
        self.set.remove(b)
    }

    pub fn contains(&self, b: &Binding) -> bool {
        self.set.contains(b)
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Binding> + '_ {
        self.set.iter()
    }

    /// `Γ(X)`.
    pub fn get(&self, var: VarRef) -> impl Iterator<Item = TyId> + '_ {
        let lo = Binding { var, ty: TyId(0) };
        self.set.range(lo..).take_while(move |b| b.var == var).map(|b| b.ty)
    }

    pub fn dom(&self) -> BTreeSet<VarRef> {
        self.set.iter().map(|b| b.var).collect()
    }

    pub fn is_subset(&self, other: &TypeEnv) -> bool {
        self.set.is_subset(&other.set)
    }

    pub fn extend(&mut self, other: &TypeEnv) {
        self.set.extend(other.set.iter().copied());
    }

    /// Types of each equation, indexed by equation.
    pub fn by_equation(&self, n: usize) -> Vec<Vec<TyId>> {
        let mut out = vec![Vec::new(); n];
        for b in &self.set {
            if let VarRef::Eq(j) = b.var {
                out[j].push(b.ty);
            }
        }
        out
    }

    /// Types of each parameter, indexed by global parameter id.
    pub fn by_param(&self, n: usize) -> Vec<Vec<TyId>> {
        let mut out = vec![Vec::new(); n];
        for b in &self.set {
            if let VarRef::Param(p) = b.var {
                out[p].push(b.ty);
            }
        }
        out
    }

    /// Bindings sorted by variable, then by rendered type.
    pub fn sorted(&self, types: &Types) -> Vec<Binding> {
        let mut v: Vec<(VarRef, String, Binding)> =
            self.set.iter().map(|b| (b.var, types.render(b.ty), *b)).collect();
        v.sort();
        v.into_iter().map(|(_, _, b)| b).collect()
    }

    /// `{S : q0, F : T -> q0}` in canonical order.
    pub fn render(&self, hes: &Hes, types: &Types) -> String {
        let mut s = String::from("{");
        for (i, b) in self.sorted(types).iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            write!(s, "{}", b.render(hes, types)).unwrap();
        }
        s.push('}');
        s
    }
}

impl FromIterator<Binding> for TypeEnv {
    fn from_iter<I: IntoIterator<Item = Binding>>(iter: I) -> TypeEnv {
        TypeEnv { set: iter.into_iter().collect() }
    }
}

impl<'a> IntoIterator for &'a TypeEnv {
    type Item = &'a Binding;
    type IntoIter = std::collections::btree_set::Iter<'a, Binding>;

    fn into_iter(self) -> Self::IntoIter {
        self.set.iter()
    }
}
