use super::arena::{ParityGame, Solution};

/// Attractor of `target` for `player` inside `alive`. Fills `strategy`
/// for attracted positions of `player`.
pub(crate) fn attractor(
    game: &ParityGame,
    pred: &[Vec<usize>],
    alive: &[bool],
    target: &[usize],
    player: u8,
    strategy: &mut [Option<usize>],
) -> Vec<bool> {
    let n = game.len();
    let mut attr = vec![false; n];
    let mut count: Vec<usize> =
        (0..n).map(|v| if alive[v] { game.succ[v].iter().filter(|&&w| alive[w]).count() } else { 0 }).collect();
    let mut queue = Vec::new();
    for &t in target {
        if alive[t] && !attr[t] {
            attr[t] = true;
            queue.push(t);
        }
    }
    while let Some(w) = queue.pop() {
        for &v in &pred[w] {
            if !alive[v] || attr[v] {
                continue;
            }
            if game.owner[v] == player {
                attr[v] = true;
                strategy[v] = Some(w);
                queue.push(v);
            } else {
                count[v] -= 1;
                if count[v] == 0 {
                    attr[v] = true;
                    queue.push(v);
                }
            }
        }
    }
    attr
}

struct Zielonka<'a> {
    game: &'a ParityGame,
    pred: Vec<Vec<usize>>,
}

impl Zielonka<'_> {
    /// Winning regions of `alive`, which must be a total subgame.
    fn solve(&self, alive: &[bool], strategy: &mut [Option<usize>]) -> [Vec<bool>; 2] {
        let g = self.game;
        let n = g.len();
        let Some(p) = (0..n).filter(|&v| alive[v]).map(|v| g.priority[v]).max() else {
            return [vec![false; n], vec![false; n]];
        };
        let i = (p % 2) as u8;
        let top: Vec<usize> = (0..n).filter(|&v| alive[v] && g.priority[v] == p).collect();
        let a = attractor(g, &self.pred, alive, &top, i, strategy);
        for &v in &top {
            if g.owner[v] == i {
                strategy[v] = g.succ[v].iter().copied().find(|&w| alive[w]);
            }
        }
        let rest: Vec<bool> = (0..n).map(|v| alive[v] && !a[v]).collect();
        let sub = self.solve(&rest, strategy);
        let opp = 1 - i;
        if !sub[opp as usize].iter().any(|&b| b) {
            let mut w = [vec![false; n], vec![false; n]];
            w[i as usize] = (0..n).map(|v| alive[v]).collect();
            return w;
        }
        let opp_region: Vec<usize> = (0..n).filter(|&v| sub[opp as usize][v]).collect();
        let b = attractor(g, &self.pred, alive, &opp_region, opp, strategy);
        let rest2: Vec<bool> = (0..n).map(|v| alive[v] && !b[v]).collect();
        let mut w = self.solve(&rest2, strategy);
        for v in 0..n {
            if b[v] {
                w[opp as usize][v] = true;
            }
        }
        w
    }
}

/// Adds two absorbing sinks so that every position can move; a stuck
/// position then leads to its owner's loss.
pub(crate) fn totalize(game: &ParityGame) -> ParityGame {
    let mut g = game.clone();
    let lose0 = g.add_node(0, 1, "sink-odd");
    let lose1 = g.add_node(1, 0, "sink-even");
    g.add_edge(lose0, lose0);
    g.add_edge(lose1, lose1);
    for v in 0..game.len() {
        if g.succ[v].is_empty() {
            let to = if g.owner[v] == 0 { lose0 } else { lose1 };
            g.add_edge(v, to);
        }
    }
    g
}

/// Zielonka's recursive algorithm.
pub fn zielonka(game: &ParityGame) -> Solution {
    let n = game.len();
    let total = totalize(game);
    let z = Zielonka { pred: total.pred(), game: &total };
    let mut strategy = vec![None; total.len()];
    let w = z.solve(&vec![true; total.len()], &mut strategy);
    let winner: Vec<u8> = (0..n).map(|v| if w[0][v] { 0 } else { 1 }).collect();
    let strategy = (0..n)
        .map(|v| if game.owner[v] == winner[v] { strategy[v].filter(|&s| s < n) } else { None })
        .collect();
    Solution { winner, strategy }
}
