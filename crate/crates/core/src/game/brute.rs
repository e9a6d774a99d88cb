use super::arena::ParityGame;
use super::strategy::winning_under;

/// Winner of every position by enumerating all positional strategies of
/// player 0. Exponential; small games only.
pub fn brute_force(game: &ParityGame) -> Vec<u8> {
    let n = game.len();
    let mine: Vec<usize> = (0..n).filter(|&v| game.owner[v] == 0 && !game.succ[v].is_empty()).collect();
    let mut pick = vec![0usize; mine.len()];
    let mut win = vec![false; n];
    loop {
        let mut choice = vec![None; n];
        for (k, &v) in mine.iter().enumerate() {
            choice[v] = Some(game.succ[v][pick[k]]);
        }
        for (v, w) in winning_under(game, &choice, 0).into_iter().enumerate() {
            win[v] |= w;
        }
        let mut k = 0;
        loop {
            if k == mine.len() {
                return win.iter().map(|&w| if w { 0 } else { 1 }).collect();
            }
            pick[k] += 1;
            if pick[k] < game.succ[mine[k]].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

/// Number of positional strategies of player 0.
pub fn strategy_count(game: &ParityGame) -> u128 {
    (0..game.len())
        .filter(|&v| game.owner[v] == 0 && !game.succ[v].is_empty())
        .fold(1u128, |acc, v| acc.saturating_mul(game.succ[v].len() as u128))
}
