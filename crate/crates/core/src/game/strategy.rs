use super::arena::ParityGame;

/// Strongly connected components (iterative Tarjan) of the subgraph on
/// `alive` with edges `succ`.
fn sccs(succ: &[Vec<usize>], alive: &[bool]) -> Vec<usize> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut comp = vec![usize::MAX; n];
    let mut on = vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if !alive[root] || index[root] != usize::MAX {
            continue;
        }
        let mut work: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on[root] = true;
        while let Some(&mut (v, ref mut i)) = work.last_mut() {
            if let Some(&w) = succ[v].get(*i) {
                *i += 1;
                if !alive[w] {
                    continue;
                }
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on[w] = true;
                    work.push((w, 0));
                } else if on[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(u, _)) = work.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

/// Positions on a cycle of the graph whose maximum priority has the
/// parity of `bad`.
pub(crate) fn bad_cycle_nodes(game: &ParityGame, succ: &[Vec<usize>], alive: &[bool], bad: u8) -> Vec<bool> {
    let n = game.len();
    let mut out = vec![false; n];
    let mut ps: Vec<u32> = (0..n).filter(|&v| alive[v] && game.priority[v] % 2 == bad as u32).map(|v| game.priority[v]).collect();
    ps.sort_unstable();
    ps.dedup();
    for p in ps {
        let sub: Vec<bool> = (0..n).map(|v| alive[v] && game.priority[v] <= p).collect();
        let comp = sccs(succ, &sub);
        let mut size = std::collections::HashMap::new();
        for v in (0..n).filter(|&v| sub[v]) {
            *size.entry(comp[v]).or_insert(0usize) += 1;
        }
        for v in (0..n).filter(|&v| sub[v] && game.priority[v] == p) {
            if size[&comp[v]] > 1 || succ[v].contains(&v) {
                out[v] = true;
            }
        }
    }
    out
}

/// Positions from which `player`, following the positional `choice`, wins
/// against every counter-play.
pub(crate) fn winning_under(game: &ParityGame, choice: &[Option<usize>], player: u8) -> Vec<bool> {
    let n = game.len();
    let mut succ = vec![Vec::new(); n];
    let mut bad = vec![false; n];
    for v in 0..n {
        if game.owner[v] == player {
            match choice[v] {
                Some(w) if game.succ[v].contains(&w) => succ[v].push(w),
                _ => bad[v] = true,
            }
        } else {
            succ[v] = game.succ[v].clone();
        }
    }
    let cyc = bad_cycle_nodes(game, &succ, &vec![true; n], 1 - player);
    for v in 0..n {
        bad[v] |= cyc[v];
    }
    let mut pred = vec![Vec::new(); n];
    for (v, s) in succ.iter().enumerate() {
        for &w in s {
            pred[w].push(v);
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| bad[v]).collect();
    while let Some(w) = stack.pop() {
        for &v in &pred[w] {
            if !bad[v] {
                bad[v] = true;
                stack.push(v);
            }
        }
    }
    bad.iter().map(|&b| !b).collect()
}

/// Every play from `start` consistent with the strategy is won by
/// `player`: no reachable position of `player` is stuck or undefined, and
/// every reachable cycle has a maximum priority of the right parity.
pub fn check_strategy(game: &ParityGame, strategy: &[Option<usize>], player: u8, start: usize) -> bool {
    winning_under(game, strategy, player)[start]
}
