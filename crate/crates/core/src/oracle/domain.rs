use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use parking_lot::Mutex;

use crate::error::{Error, Result};
use crate::syntax::{Kind, Lts, StateSet};

pub const DEFAULT_DOMAIN_CAP: usize = 1_000_000;

/// Total table cells a single function domain may hold.
pub const DEFAULT_CELL_CAP: usize = 16 * DEFAULT_DOMAIN_CAP;

/// Element of the semantic domain of some kind.
#[derive(Clone)]
pub enum SemValue {
    Set(StateSet),
    Fun(Arc<FunTable>),
}

/// Monotone function given by its value on every element of the argument
/// domain, in the domain's canonical order.
pub struct FunTable {
    pub domain: Arc<Domain>,
    pub table: Vec<SemValue>,
}

impl SemValue {
    pub fn as_set(&self) -> &StateSet {
        match self {
            SemValue::Set(s) => s,
            SemValue::Fun(_) => panic!("expected a state set"),
        }
    }

    pub fn as_fun(&self) -> &FunTable {
        match self {
            SemValue::Fun(f) => f,
            SemValue::Set(_) => panic!("expected a function"),
        }
    }

    /// Pointwise order of the lattice.
    pub fn leq(&self, other: &SemValue) -> bool {
        match (self, other) {
            (SemValue::Set(a), SemValue::Set(b)) => a.is_subset(b),
            (SemValue::Fun(f), SemValue::Fun(g)) => f.table.iter().zip(&g.table).all(|(x, y)| x.leq(y)),
            _ => false,
        }
    }

    pub fn apply(&self, arg: &SemValue) -> SemValue {
        let f = self.as_fun();
        let i = f.domain.index_of(arg).expect("argument outside the domain");
        f.table[i].clone()
    }
}

impl PartialEq for SemValue {
    fn eq(&self, other: &SemValue) -> bool {
        match (self, other) {
            (SemValue::Set(a), SemValue::Set(b)) => a == b,
            (SemValue::Fun(f), SemValue::Fun(g)) => Arc::ptr_eq(f, g) || f.table == g.table,
            _ => false,
        }
    }
}

impl Eq for SemValue {}

impl Hash for SemValue {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            SemValue::Set(s) => {
                0u8.hash(state);
                s.hash(state);
            }
            SemValue::Fun(f) => {
                1u8.hash(state);
                f.table.hash(state);
            }
        }
    }
}

impl fmt::Debug for SemValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemValue::Set(s) => {
                let v: Vec<usize> = s.ones().collect();
                write!(f, "{v:?}")
            }
            SemValue::Fun(t) => f.debug_list().entries(&t.table).finish(),
        }
    }
}

/// All elements of one kind's domain in canonical order. The order is a
/// linear extension of the lattice order.
pub struct Domain {
    pub kind: Kind,
    pub elems: Vec<SemValue>,
    index: HashMap<SemValue, usize>,
}

impl Domain {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn index_of(&self, v: &SemValue) -> Option<usize> {
        self.index.get(v).copied()
    }
}

/// Enumerates and caches semantic domains over one LTS.
pub struct Domains<'a> {
    lts: &'a Lts,
    cap: usize,
    cache: Mutex<HashMap<Kind, Arc<Domain>>>,
}

impl<'a> Domains<'a> {
    pub fn new(lts: &'a Lts) -> Domains<'a> {
        Domains::with_cap(lts, DEFAULT_DOMAIN_CAP)
    }

    pub fn with_cap(lts: &'a Lts, cap: usize) -> Domains<'a> {
        Domains { lts, cap, cache: Mutex::new(HashMap::new()) }
    }

    pub fn lts(&self) -> &'a Lts {
        self.lts
    }

    pub fn domain(&self, kind: &Kind) -> Result<Arc<Domain>> {
        if let Some(d) = self.cache.lock().get(kind) {
            return Ok(d.clone());
        }
        let elems = match kind {
            Kind::Prop => {
                let n = self.lts.num_states();
                if n >= 64 || (1usize << n) > self.cap {
                    return Err(Error::DomainTooLarge { count: 1u128.checked_shl(n as u32).unwrap_or(u128::MAX) });
                }
                (0..1usize << n)
                    .map(|bits| {
                        let mut s = FixedBitSet::with_capacity(n);
                        for q in 0..n {
                            if bits >> q & 1 == 1 {
                                s.insert(q);
                            }
                        }
                        SemValue::Set(s)
                    })
                    .collect()
            }
            Kind::Arrow(a, r) => {
                let da = self.domain(a)?;
                let dr = self.domain(r)?;
                monotone_tables(&da, &dr, self.cap)?
            }
        };
        let index = elems.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let d = Arc::new(Domain { kind: kind.clone(), elems, index });
        self.cache.lock().insert(kind.clone(), d.clone());
        Ok(d)
    }

    pub fn bottom(&self, kind: &Kind) -> Result<SemValue> {
        self.constant(kind, false)
    }

    pub fn top(&self, kind: &Kind) -> Result<SemValue> {
        self.constant(kind, true)
    }

    fn constant(&self, kind: &Kind, top: bool) -> Result<SemValue> {
        Ok(match kind {
            Kind::Prop => SemValue::Set(if top { self.lts.full_set() } else { self.lts.empty_set() }),
            Kind::Arrow(a, r) => {
                let da = self.domain(a)?;
                let v = self.constant(r, top)?;
                SemValue::Fun(Arc::new(FunTable { table: vec![v; da.len()], domain: da }))
            }
        })
    }
}

/// Backtracking enumeration of monotone tables in lexicographic order.
fn monotone_tables(da: &Arc<Domain>, dr: &Arc<Domain>, cap: usize) -> Result<Vec<SemValue>> {
    let n = da.len();
    let preds: Vec<Vec<usize>> =
        (0..n).map(|i| (0..i).filter(|&j| da.elems[j].leq(&da.elems[i])).collect()).collect();
    let upper = || {
        let mut c: u128 = 1;
        for _ in 0..n {
            c = c.saturating_mul(dr.len() as u128);
        }
        c
    };
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(n);
    fn go(
        i: usize,
        cur: &mut Vec<usize>,
        preds: &[Vec<usize>],
        da: &Arc<Domain>,
        dr: &Arc<Domain>,
        out: &mut Vec<SemValue>,
        cap: usize,
    ) -> bool {
        if i == preds.len() {
            if out.len() >= cap || (out.len() + 1).saturating_mul(preds.len()) > DEFAULT_CELL_CAP {
                return false;
            }
            let table = cur.iter().map(|&k| dr.elems[k].clone()).collect();
            out.push(SemValue::Fun(Arc::new(FunTable { domain: da.clone(), table })));
            return true;
        }
        for v in 0..dr.len() {
            if preds[i].iter().all(|&j| dr.elems[cur[j]].leq(&dr.elems[v])) {
                cur.push(v);
                let ok = go(i + 1, cur, preds, da, dr, out, cap);
                cur.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    if !go(0, &mut cur, &preds, da, dr, &mut out, cap) {
        return Err(Error::DomainTooLarge { count: upper() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_lts;

    fn lts(n: usize) -> Lts {
        let mut b = Lts::builder();
        for i in 0..n {
            b.state(&format!("q{i}"));
        }
        b.build("q0")
    }

    #[test]
    fn prop_domain() {
        let l = parse_lts("initial q0\nq0 a q1\nq1 b q2\nq2 a q0\nq0 c q0").unwrap();
        let d = Domains::new(&l);
        assert_eq!(d.domain(&Kind::Prop).unwrap().len(), 8);
    }

    #[test]
    fn order_is_linear_extension() {
        let l = lts(2);
        let ds = Domains::new(&l);
        let k = Kind::arrow(Kind::Prop, Kind::Prop);
        let d = ds.domain(&k).unwrap();
        for i in 0..d.len() {
            for j in 0..d.len() {
                if d.elems[i].leq(&d.elems[j]) {
                    assert!(i <= j);
                }
            }
        }
        assert_eq!(d.elems[0], ds.bottom(&k).unwrap());
        assert_eq!(d.elems[d.len() - 1], ds.top(&k).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let l = lts(3);
        let ds = Domains::with_cap(&l, 100);
        let err = ds.domain(&Kind::arrow(Kind::Prop, Kind::Prop)).err().unwrap();
        assert_eq!(err, Error::DomainTooLarge { count: 8u128.pow(8) });
    }

    #[test]
    fn monotone_counts() {
        let l = lts(1);
        let ds = Domains::new(&l);
        assert_eq!(ds.domain(&Kind::arrow(Kind::Prop, Kind::Prop)).unwrap().len(), 3);
        let l = lts(2);
        let ds = Domains::new(&l);
        let sets = ds.domain(&Kind::Prop).unwrap();
        // every table of 4 subsets, filtered by monotonicity
        let mut brute = 0;
        for code in 0..256usize {
            let t: Vec<usize> = (0..4).map(|i| code >> (2 * i) & 3).collect();
            let mono = (0..4).all(|i| {
                (0..4).all(|j| !sets.elems[i].leq(&sets.elems[j]) || sets.elems[t[i]].leq(&sets.elems[t[j]]))
            });
            brute += mono as usize;
        }
        assert_eq!(ds.domain(&Kind::arrow(Kind::Prop, Kind::Prop)).unwrap().len(), brute);
    }
}
