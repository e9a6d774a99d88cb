use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::formula::{fresh_name, Formula, Name};
use super::kind::Kind;
use crate::error::{Error, Result};

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Sign {
    Mu,
    Nu,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Mu => "m",
            Sign::Nu => "v",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: Name,
    pub kind: Option<Kind>,
    /// Whether the kind is printed back (it came from the source or a generator).
    pub annotated: bool,
}

impl Param {
    pub fn new(name: impl Into<Name>) -> Param {
        Param { name: name.into(), kind: None, annotated: false }
    }

    pub fn with_kind(name: impl Into<Name>, kind: Kind) -> Param {
        Param { name: name.into(), kind: Some(kind), annotated: true }
    }

    pub fn kind(&self) -> &Kind {
        self.kind.as_ref().expect("HES has not been kinded")
    }
}

/// `name =sign \params. body`; the body is λ-free.
#[derive(Clone, Debug)]
pub struct Equation {
    pub name: Name,
    pub sign: Sign,
    pub params: Vec<Param>,
    pub body: Formula,
    pub kind: Option<Kind>,
    /// Approximation tag; present only on recursion-free approximations.
    pub tag: Option<Vec<u32>>,
    /// Name of the equation this one was copied from (itself if not derived).
    pub origin: Name,
}

impl Equation {
    pub fn new(name: impl Into<Name>, sign: Sign, params: Vec<Param>, body: Formula) -> Equation {
        let name = name.into();
        Equation { origin: name.clone(), name, sign, params, body, kind: None, tag: None }
    }

    pub fn kind(&self) -> &Kind {
        self.kind.as_ref().expect("HES has not been kinded")
    }

    pub fn param_names(&self) -> impl Iterator<Item = &Name> {
        self.params.iter().map(|p| &p.name)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum VarRef {
    Eq(usize),
    /// Global parameter index (see [`Hes::param`]).
    Param(usize),
}

/// Hierarchical equation system; the first equation is the entry.
#[derive(Clone, Debug)]
pub struct Hes {
    equations: Vec<Equation>,
    index: HashMap<Name, VarRef>,
    param_owner: Vec<(usize, usize)>,
    param_offset: Vec<usize>,
}

impl Hes {
    /// Validates names and makes parameter names globally fresh.
    pub fn new(mut equations: Vec<Equation>) -> Result<Hes> {
        if equations.is_empty() {
            return Err(Error::Precondition("an HES needs at least one equation".into()));
        }
        let mut eq_names = BTreeSet::new();
        for e in &equations {
            if !eq_names.insert(e.name.clone()) {
                return Err(Error::DuplicateEquation(e.name.to_string()));
            }
        }
        let mut taken: BTreeSet<Name> = eq_names.clone();
        for e in equations.iter_mut() {
            let mut renames: HashMap<Name, Name> = HashMap::new();
            for p in e.params.iter_mut() {
                if eq_names.contains(&p.name) {
                    return Err(Error::ParamShadowsEquation {
                        equation: e.name.to_string(),
                        param: p.name.to_string(),
                    });
                }
                if !taken.insert(p.name.clone()) {
                    let fresh = fresh_name(&p.name, |n| {
                        taken.contains(n) || e.body.free_vars().contains(n)
                    });
                    taken.insert(fresh.clone());
                    renames.insert(p.name.clone(), fresh.clone());
                    p.name = fresh;
                }
            }
            if !renames.is_empty() {
                e.body = e.body.rename_vars(&|x| renames.get(x).cloned());
            }
        }
        let mut index = HashMap::new();
        let mut param_owner = Vec::new();
        let mut param_offset = Vec::new();
        for (j, e) in equations.iter().enumerate() {
            index.insert(e.name.clone(), VarRef::Eq(j));
            param_offset.push(param_owner.len());
            for (i, p) in e.params.iter().enumerate() {
                index.insert(p.name.clone(), VarRef::Param(param_owner.len()));
                param_owner.push((j, i));
            }
        }
        for e in &equations {
            for x in e.body.free_vars() {
                if !index.contains_key(&x) {
                    return Err(Error::Unbound(x.to_string()));
                }
                if let Some(VarRef::Param(p)) = index.get(&x) {
                    if equations[param_owner[*p].0].name != e.name {
                        return Err(Error::Unbound(x.to_string()));
                    }
                }
            }
        }
        Ok(Hes { equations, index, param_owner, param_offset })
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn eq(&self, j: usize) -> &Equation {
        &self.equations[j]
    }

    pub fn entry(&self) -> &Equation {
        &self.equations[0]
    }

    pub fn lookup(&self, name: &str) -> Option<VarRef> {
        self.index.get(name).copied()
    }

    pub fn eq_index(&self, name: &str) -> Option<usize> {
        match self.lookup(name) {
            Some(VarRef::Eq(j)) => Some(j),
            _ => None,
        }
    }

    pub fn num_params(&self) -> usize {
        self.param_owner.len()
    }

    /// Global id of parameter `pos` of equation `eq`.
    pub fn param_id(&self, eq: usize, pos: usize) -> usize {
        self.param_offset[eq] + pos
    }

    /// `(equation, position)` of a global parameter id.
    pub fn param_owner(&self, id: usize) -> (usize, usize) {
        self.param_owner[id]
    }

    pub fn param(&self, id: usize) -> &Param {
        let (j, i) = self.param_owner[id];
        &self.equations[j].params[i]
    }

    pub fn var_name(&self, v: VarRef) -> &Name {
        match v {
            VarRef::Eq(j) => &self.equations[j].name,
            VarRef::Param(p) => &self.param(p).name,
        }
    }

    pub fn var_kind(&self, v: VarRef) -> &Kind {
        match v {
            VarRef::Eq(j) => self.equations[j].kind(),
            VarRef::Param(p) => self.param(p).kind(),
        }
    }

    pub fn is_kinded(&self) -> bool {
        self.equations.iter().all(|e| e.kind.is_some() && e.params.iter().all(|p| p.kind.is_some()))
    }

    /// Highest order among the equation kinds.
    pub fn order(&self) -> usize {
        self.equations.iter().map(|e| e.kind().order()).max().unwrap_or(0)
    }

    pub fn is_approximation(&self) -> bool {
        self.equations.iter().any(|e| e.tag.is_some())
    }

    /// Total AST node count over all bodies, counting one node per λ-binder.
    pub fn size(&self) -> usize {
        self.equations.iter().map(|e| e.body.size() + e.params.len()).sum()
    }

    /// Number of adjacent sign changes.
    pub fn alternations(&self) -> usize {
        self.equations.windows(2).filter(|w| w[0].sign != w[1].sign).count()
    }

    /// Equation `j` as `\X1. ... \Xl. body`.
    pub fn lambda_body(&self, j: usize) -> Formula {
        let e = &self.equations[j];
        e.params
            .iter()
            .rev()
            .fold(e.body.clone(), |acc, p| Formula::abs(p.name.clone(), p.kind.clone(), acc))
    }

    pub(crate) fn equations_mut(&mut self) -> &mut [Equation] {
        &mut self.equations
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ={} ", self.name, self.sign)?;
        for p in &self.params {
            write!(f, "\\{}", p.name)?;
            if p.annotated {
                match &p.kind {
                    Some(Kind::Prop) => write!(f, "^o")?,
                    Some(k) => write!(f, "^({k})")?,
                    None => {}
                }
            }
            write!(f, ". ")?;
        }
        write!(f, "{};", self.body)
    }
}

impl fmt::Display for Hes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.equations {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}
