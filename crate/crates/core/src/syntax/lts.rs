use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use super::formula::Name;
use crate::error::{Error, Result};

pub type StateSet = FixedBitSet;

/// Finite labeled transition system `(Q, A, ->, q0)`.
#[derive(Clone, Debug)]
pub struct Lts {
    states: Vec<Name>,
    actions: Vec<Name>,
    state_index: HashMap<Name, usize>,
    action_index: HashMap<Name, usize>,
    transitions: Vec<(usize, usize, usize)>,
    // succ[state][action]
    succ: Vec<Vec<Vec<usize>>>,
    initial: usize,
}

impl Lts {
    pub fn builder() -> LtsBuilder {
        LtsBuilder::default()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn state_name(&self, q: usize) -> &Name {
        &self.states[q]
    }

    pub fn state_id(&self, name: &str) -> Option<usize> {
        self.state_index.get(name).copied()
    }

    pub fn action_name(&self, a: usize) -> &Name {
        &self.actions[a]
    }

    pub fn action_id(&self, name: &str) -> Option<usize> {
        self.action_index.get(name).copied()
    }

    pub fn transitions(&self) -> &[(usize, usize, usize)] {
        &self.transitions
    }

    pub fn succ(&self, q: usize, action: usize) -> &[usize] {
        &self.succ[q][action]
    }

    /// Successors by action name; an action the LTS never uses has none.
    pub fn succ_by_name(&self, q: usize, action: &str) -> &[usize] {
        match self.action_id(action) {
            Some(a) => &self.succ[q][a],
            None => &[],
        }
    }

    pub fn full_set(&self) -> StateSet {
        let mut s = FixedBitSet::with_capacity(self.num_states());
        s.insert_range(..);
        s
    }

    pub fn empty_set(&self) -> StateSet {
        FixedBitSet::with_capacity(self.num_states())
    }

    /// `{q | exists q -a-> q' in target}`
    pub fn pre_exists(&self, action: &str, target: &StateSet) -> StateSet {
        let mut out = self.empty_set();
        if let Some(a) = self.action_id(action) {
            for q in 0..self.num_states() {
                if self.succ[q][a].iter().any(|&p| target.contains(p)) {
                    out.insert(q);
                }
            }
        }
        out
    }

    /// `{q | forall q -a-> q'. q' in target}`
    pub fn pre_forall(&self, action: &str, target: &StateSet) -> StateSet {
        let mut out = self.full_set();
        if let Some(a) = self.action_id(action) {
            for q in 0..self.num_states() {
                if !self.succ[q][a].iter().all(|&p| target.contains(p)) {
                    out.set(q, false);
                }
            }
        }
        out
    }
}

#[derive(Default)]
pub struct LtsBuilder {
    states: Vec<Name>,
    actions: Vec<Name>,
    state_index: HashMap<Name, usize>,
    action_index: HashMap<Name, usize>,
    transitions: Vec<(usize, usize, usize)>,
}

impl LtsBuilder {
    pub fn state(&mut self, name: &str) -> usize {
        if let Some(&i) = self.state_index.get(name) {
            return i;
        }
        let n: Name = name.into();
        self.states.push(n.clone());
        self.state_index.insert(n, self.states.len() - 1);
        self.states.len() - 1
    }

    pub fn action(&mut self, name: &str) -> usize {
        if let Some(&i) = self.action_index.get(name) {
            return i;
        }
        let n: Name = name.into();
        self.actions.push(n.clone());
        self.action_index.insert(n, self.actions.len() - 1);
        self.actions.len() - 1
    }

    pub fn transition(&mut self, src: &str, action: &str, dst: &str) -> &mut Self {
        let s = self.state(src);
        let a = self.action(action);
        let d = self.state(dst);
        if !self.transitions.contains(&(s, a, d)) {
            self.transitions.push((s, a, d));
        }
        self
    }

    pub fn build(mut self, initial: &str) -> Lts {
        let initial = self.state(initial);
        let mut succ = vec![vec![Vec::new(); self.actions.len()]; self.states.len()];
        for &(s, a, d) in &self.transitions {
            succ[s][a].push(d);
        }
        for row in succ.iter_mut() {
            for l in row.iter_mut() {
                l.sort_unstable();
            }
        }
        Lts {
            states: self.states,
            actions: self.actions,
            state_index: self.state_index,
            action_index: self.action_index,
            transitions: self.transitions,
            succ,
            initial,
        }
    }
}

/// Parses `initial q0` followed by `src action dst` lines; `#` starts a comment.
pub fn parse_lts(text: &str) -> Result<Lts> {
    let mut builder = Lts::builder();
    let mut initial: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        match &initial {
            None => {
                if toks[0] != "initial" {
                    return Err(Error::MissingInitial);
                }
                if toks.len() != 2 {
                    return Err(Error::Lts { line: i + 1, msg: "expected `initial STATE`".into() });
                }
                builder.state(toks[1]);
                initial = Some(toks[1].to_string());
            }
            Some(_) => {
                if toks.len() != 3 {
                    return Err(Error::Lts {
                        line: i + 1,
                        msg: format!("expected `SOURCE ACTION TARGET`, found {} tokens", toks.len()),
                    });
                }
                builder.transition(toks[0], toks[1], toks[2]);
            }
        }
    }
    let initial = initial.ok_or(Error::MissingInitial)?;
    Ok(builder.build(&initial))
}

impl fmt::Display for Lts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "initial {}", self.states[self.initial])?;
        for &(s, a, d) in &self.transitions {
            writeln!(f, "{} {} {}", self.states[s], self.actions[a], self.states[d])?;
        }
        Ok(())
    }
}
