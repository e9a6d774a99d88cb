use std::cmp::Ordering;

use super::arena::ParityGame;

/// Measure over odd priorities, most significant last; `None` is ⊤.
type Measure = Option<Vec<u32>>;

struct Spm<'a> {
    game: &'a ParityGame,
    bound: Vec<u32>,
}

impl Spm<'_> {
    fn cmp_from(a: &[u32], b: &[u32], from: usize) -> Ordering {
        for k in (from..a.len()).rev() {
            match a[k].cmp(&b[k]) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    }

    fn leq(a: &Measure, b: &Measure) -> bool {
        match (a, b) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => Self::cmp_from(a, b, 0) != Ordering::Greater,
        }
    }

    /// Least measure `m` with `m ≥_p ρ(w)`, strictly if `p` is odd.
    fn prog(&self, m: &Measure, p: u32) -> Measure {
        let m = m.as_ref()?;
        let from = (p / 2) as usize;
        let mut r = m.clone();
        for x in r.iter_mut().take(from) {
            *x = 0;
        }
        if p.is_multiple_of(2) {
            return Some(r);
        }
        let mut k = from;
        loop {
            if k >= r.len() {
                return None;
            }
            if r[k] < self.bound[k] {
                r[k] += 1;
                return Some(r);
            }
            r[k] = 0;
            k += 1;
        }
    }
}

/// Small progress measures. Returns the winner of every position.
pub fn small_progress_measures(game: &ParityGame) -> Vec<u8> {
    let n = game.len();
    let d = game.max_priority() as usize / 2 + 1;
    let mut bound = vec![0u32; d];
    for &p in &game.priority {
        if p % 2 == 1 {
            bound[(p / 2) as usize] += 1;
        }
    }
    let spm = Spm { game, bound };
    let mut rho: Vec<Measure> = vec![Some(vec![0; d]); n];
    let pred = game.pred();
    let mut queue: Vec<usize> = (0..n).collect();
    let mut queued = vec![true; n];
    while let Some(v) = queue.pop() {
        queued[v] = false;
        let p = game.priority[v];
        let progs = spm.game.succ[v].iter().map(|&w| spm.prog(&rho[w], p));
        let best = if game.owner[v] == 0 {
            progs.reduce(|a, b| if Spm::leq(&a, &b) { a } else { b }).unwrap_or(None)
        } else {
            match progs.reduce(|a, b| if Spm::leq(&a, &b) { b } else { a }) {
                Some(m) => m,
                None => continue,
            }
        };
        if !Spm::leq(&best, &rho[v]) {
            rho[v] = best;
            for &u in &pred[v] {
                if !queued[u] {
                    queued[u] = true;
                    queue.push(u);
                }
            }
        }
    }
    rho.iter().map(|m| if m.is_some() { 0 } else { 1 }).collect()
}
