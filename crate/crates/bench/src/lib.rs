//! Fixtures shared by the benchmarks.

use hflcheck::flow::{compute_flow, FlowMap};
use hflcheck::game::ParityGame;
use hflcheck::gen;
use hflcheck::rtypes::Types;
use hflcheck::syntax::infer_kinds;
use hflcheck::{parse_hes, parse_lts, Hes, Lts};

/// Chain lengths used for the scaling benchmarks.
pub const CHAIN_SIZES: [usize; 5] = [1, 4, 8, 16, 32];

/// A kinded chain system with its LTS, type universe and flow.
pub struct Prepared {
    pub lts: Lts,
    pub hes: Hes,
    pub types: Types,
    pub flow: FlowMap,
}

pub fn chain(n: usize) -> Prepared {
    let lts = parse_lts(gen::CHAIN_LTS).expect("chain lts");
    let hes = infer_kinds(&parse_hes(&gen::chain_hes_text(n)).expect("chain hes")).expect("chain kinds");
    let types = Types::new(&lts);
    let flow = compute_flow(&hes);
    Prepared { lts, hes, types, flow }
}

pub fn random_games(n: usize, count: u64, max_priority: u32) -> Vec<ParityGame> {
    (0..count).map(|s| gen::random_game(&mut gen::rng(s), n, max_priority)).collect()
}
