//! Typability games, priorities and parity solvers.

mod arena;
mod brute;
mod priority;
mod spm;
mod strategy;
mod typability;
mod zielonka;

pub use arena::{ParityGame, Solution, Strategy};
pub use brute::{brute_force, strategy_count};
pub use priority::{priorities, signs_to_priorities};
pub use spm::small_progress_measures;
pub use strategy::check_strategy;
pub use typability::{build_full_game, build_subgame, e0_member, edges_of, TypabilityGame};
pub use zielonka::zielonka;

/// Solves with Zielonka's algorithm.
pub fn solve_parity(game: &ParityGame) -> Solution {
    zielonka(game)
}
