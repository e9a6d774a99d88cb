use std::collections::{HashMap, HashSet, VecDeque};

use super::formula::{Formula, Name, Shape};
use super::hes::{Equation, Hes, Sign};
use super::parser::renumber;
use crate::error::{Error, Result};

/// Equation index of `f` if it is a fully applied equation head.
fn redex_head(f: &Formula, hes: &Hes) -> Option<usize> {
    let (h, args) = f.spine();
    let j = hes.eq_index(h.as_var()?)?;
    (args.len() == hes.eq(j).params.len()).then_some(j)
}

/// Replaces the redex `F_j χ1 ... χl` with `[χ/X] ψ_j`.
pub fn contract(redex: &Formula, hes: &Hes) -> Option<Formula> {
    let j = redex_head(redex, hes)?;
    let (_, args) = redex.spine();
    let e = hes.eq(j);
    let map: HashMap<Name, Formula> =
        e.params.iter().zip(args).map(|(p, a)| (p.name.clone(), a.clone())).collect();
    Some(e.body.subst(&map))
}

/// Redexes reachable through `\/`, `/\`, `<a>` and `[a]` contexts, left to right.
pub fn redexes(f: &Formula, hes: &Hes) -> Vec<Formula> {
    let mut out = Vec::new();
    collect_redexes(f, hes, &mut out);
    out
}

fn collect_redexes(f: &Formula, hes: &Hes, out: &mut Vec<Formula>) {
    match f.shape() {
        Shape::Or(l, r) | Shape::And(l, r) => {
            collect_redexes(l, hes, out);
            collect_redexes(r, hes, out);
        }
        Shape::Dia(_, b) | Shape::Box(_, b) => collect_redexes(b, hes, out),
        _ => {
            if redex_head(f, hes).is_some() {
                out.push(f.clone());
            }
        }
    }
}

/// All one-step successors of `f`, one per redex occurrence.
pub fn unfold_step(f: &Formula, hes: &Hes) -> Vec<Formula> {
    match f.shape() {
        Shape::Or(l, r) | Shape::And(l, r) => {
            let is_or = matches!(f.shape(), Shape::Or(..));
            let mk = |a: Formula, b: Formula| {
                Formula::new(f.occ(), if is_or { Shape::Or(a, b) } else { Shape::And(a, b) })
            };
            let mut out: Vec<Formula> = unfold_step(l, hes).into_iter().map(|l2| mk(l2, r.clone())).collect();
            out.extend(unfold_step(r, hes).into_iter().map(|r2| mk(l.clone(), r2)));
            out
        }
        Shape::Dia(a, b) => unfold_step(b, hes)
            .into_iter()
            .map(|b2| Formula::new(f.occ(), Shape::Dia(a.clone(), b2)))
            .collect(),
        Shape::Box(a, b) => unfold_step(b, hes)
            .into_iter()
            .map(|b2| Formula::new(f.occ(), Shape::Box(a.clone(), b2)))
            .collect(),
        _ => contract(f, hes).into_iter().collect(),
    }
}

/// Contracts every redex of `f` once; `None` when there is none.
fn parallel_step(f: &Formula, hes: &Hes) -> Option<Formula> {
    match f.shape() {
        Shape::Or(l, r) | Shape::And(l, r) => {
            let (l2, r2) = (parallel_step(l, hes), parallel_step(r, hes));
            if l2.is_none() && r2.is_none() {
                return None;
            }
            let (l2, r2) = (l2.unwrap_or_else(|| l.clone()), r2.unwrap_or_else(|| r.clone()));
            Some(Formula::new(
                f.occ(),
                if matches!(f.shape(), Shape::Or(..)) { Shape::Or(l2, r2) } else { Shape::And(l2, r2) },
            ))
        }
        Shape::Dia(a, b) => parallel_step(b, hes).map(|b2| Formula::new(f.occ(), Shape::Dia(a.clone(), b2))),
        Shape::Box(a, b) => parallel_step(b, hes).map(|b2| Formula::new(f.occ(), Shape::Box(a.clone(), b2))),
        _ => contract(f, hes),
    }
}

/// Rewrites until no redex is left. Fails when the term grows past
/// `budget` nodes or more than `budget` rounds are needed.
pub fn normalize(f: &Formula, hes: &Hes, budget: usize) -> Result<Formula> {
    let mut cur = f.clone();
    for _ in 0..budget {
        match parallel_step(&cur, hes) {
            None => return Ok(cur),
            Some(next) => {
                if next.size() > budget {
                    return Err(Error::BudgetExceeded);
                }
                cur = next;
            }
        }
    }
    Err(Error::BudgetExceeded)
}

/// Which approximation tags to materialize.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Tags {
    /// Only tags reachable from the entry tag `(m)`.
    Reachable,
    /// Every tag with components in `0..=m`.
    All,
}

pub fn tagged_name(base: &str, tag: &[u32]) -> Name {
    let parts: Vec<String> = tag.iter().map(|b| b.to_string()).collect();
    Name::from(format!("{base}^({})", parts.join(",")))
}

/// Tag of the copy of `F_k` referenced from the body of `F_j^β`.
pub fn successor_tag(beta: &[u32], j: usize, k: usize, m: u32) -> Vec<u32> {
    if k < j {
        beta[..=k].to_vec()
    } else {
        let mut t = beta[..j].to_vec();
        t.push(beta[j] - 1);
        t.extend(std::iter::repeat_n(m, k - j));
        t
    }
}

/// Recursion-free approximation unfolding each fixpoint at most `m` times.
pub fn approximate(hes: &Hes, m: u32) -> Result<Hes> {
    approximate_with(hes, m, Tags::Reachable)
}

pub fn approximate_with(hes: &Hes, m: u32, tags: Tags) -> Result<Hes> {
    if m == 0 {
        return Err(Error::NonPositiveDepth);
    }
    let n = hes.len();
    let mut order: Vec<(usize, Vec<u32>)> = Vec::new();
    match tags {
        Tags::Reachable => {
            let mut seen: HashSet<(usize, Vec<u32>)> = HashSet::new();
            let mut queue = VecDeque::new();
            queue.push_back((0usize, vec![m]));
            seen.insert((0, vec![m]));
            while let Some((j, beta)) = queue.pop_front() {
                if beta[j] > 0 {
                    for k in referenced(hes, j) {
                        let t = successor_tag(&beta, j, k, m);
                        if seen.insert((k, t.clone())) {
                            queue.push_back((k, t));
                        }
                    }
                }
                order.push((j, beta));
            }
        }
        Tags::All => {
            order.push((0, vec![m]));
            for j in 0..n {
                let mut t = vec![0u32; j + 1];
                loop {
                    if !(j == 0 && t[0] == m) {
                        order.push((j, t.clone()));
                    }
                    let mut i = j as isize;
                    while i >= 0 && t[i as usize] == m {
                        t[i as usize] = 0;
                        i -= 1;
                    }
                    if i < 0 {
                        break;
                    }
                    t[i as usize] += 1;
                }
            }
        }
    }
    let mut eqs = Vec::with_capacity(order.len());
    for (j, beta) in order {
        let e = hes.eq(j);
        let body = if beta[j] == 0 {
            match e.sign {
                Sign::Nu => Formula::tt(),
                Sign::Mu => Formula::ff(),
            }
        } else {
            let map: HashMap<Name, Formula> = (0..n)
                .filter(|&k| e.body.mentions(&hes.eq(k).name))
                .map(|k| {
                    let t = successor_tag(&beta, j, k, m);
                    (hes.eq(k).name.clone(), Formula::var(tagged_name(&hes.eq(k).name, &t)))
                })
                .collect();
            e.body.subst(&map)
        };
        eqs.push(Equation {
            name: tagged_name(&e.name, &beta),
            sign: e.sign,
            params: e.params.clone(),
            body,
            kind: e.kind.clone(),
            tag: Some(beta),
            origin: e.origin.clone(),
        });
    }
    let mut out = Hes::new(eqs)?;
    renumber(&mut out);
    Ok(out)
}

/// Equations mentioned in the body of equation `j`, in index order.
pub fn referenced(hes: &Hes, j: usize) -> Vec<usize> {
    let body = &hes.eq(j).body;
    (0..hes.len()).filter(|&k| body.mentions(&hes.eq(k).name)).collect()
}

/// Whether the equation dependency graph is acyclic.
pub fn is_recursion_free(hes: &Hes) -> bool {
    let n = hes.len();
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    fn dfs(hes: &Hes, v: usize, state: &mut [u8]) -> bool {
        state[v] = 1;
        for w in referenced(hes, v) {
            if state[w] == 1 || (state[w] == 0 && !dfs(hes, w, state)) {
                return false;
            }
        }
        state[v] = 2;
        true
    }
    (0..n).all(|v| state[v] != 0 || dfs(hes, v, &mut state))
}

/// Exact flow: for every parameter (by global id) the actual arguments of
/// redexes reachable from the entry. Redexes are explored up to `depth`
/// contractions deep; `None` explores until saturation, which terminates
/// on recursion-free systems. At most `budget` distinct redexes are kept.
pub fn exact_flow(hes: &Hes, depth: Option<usize>, budget: usize) -> Result<Vec<Vec<Formula>>> {
    let mut flow: Vec<Vec<Formula>> = vec![Vec::new(); hes.num_params()];
    let mut seen: HashSet<String> = HashSet::new();
    let entry = Formula::var(hes.entry().name.clone());
    let mut queue = VecDeque::new();
    seen.insert(entry.to_string());
    queue.push_back((entry, 0usize));
    while let Some((r, d)) = queue.pop_front() {
        let j = redex_head(&r, hes).expect("queued formulas are redexes");
        let (_, args) = r.spine();
        for (i, a) in args.into_iter().enumerate() {
            let slot = &mut flow[hes.param_id(j, i)];
            if !slot.contains(a) {
                slot.push(a.clone());
            }
        }
        if depth.is_some_and(|lim| d >= lim) {
            continue;
        }
        let body = contract(&r, hes).expect("redex contracts");
        for next in redexes(&body, hes) {
            if seen.insert(next.to_string()) {
                if seen.len() > budget {
                    return Err(Error::BudgetExceeded);
                }
                queue.push_back((next, d + 1));
            }
        }
    }
    Ok(flow)
}
