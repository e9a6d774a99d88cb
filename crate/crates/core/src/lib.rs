//! Model checking for higher-order modal fixpoint logic by refinement-type
//! saturation and parity-subgame solving.

pub mod check;
pub mod corpus;
pub mod error;
pub mod flow;
pub mod game;
pub mod gen;
pub mod oracle;
pub mod rtypes;
pub mod saturation;
pub mod syntax;

pub use error::{Error, Result};
pub use syntax::{parse_hes, parse_lts, Hes, Kind, Lts};
pub use check::{check, check_with_oracle, run, run_text, Outcome, RunReport, Verdict};
pub use saturation::Options;
