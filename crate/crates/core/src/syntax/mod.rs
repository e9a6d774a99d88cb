mod formula;
mod hes;
mod hfl;
mod kind;
mod kinds;
mod lts;
mod parser;
mod transform;
mod unfold;

pub use formula::{fresh_name, Formula, Name, OccId, Shape};
pub use hes::{Equation, Hes, Param, Sign, VarRef};
pub use hfl::{kind_of, Hfl};
pub use kind::Kind;
pub use kinds::infer_kinds;
pub use lts::{parse_lts, Lts, LtsBuilder, StateSet};
pub use parser::{parse_formula, parse_hes, renumber};
pub use transform::{formula_to_hfl, hes_of_formula, lift_lambdas, to_hfl};
pub use unfold::{
    approximate, approximate_with, contract, exact_flow, is_recursion_free, normalize, redexes,
    referenced, successor_tag, tagged_name, unfold_step, Tags,
};
