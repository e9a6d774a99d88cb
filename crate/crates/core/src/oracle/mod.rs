//! Naive semantic oracles.

mod domain;
mod eval;

pub use domain::{Domain, Domains, FunTable, SemValue, DEFAULT_DOMAIN_CAP};
pub use eval::{check_by_unfolding, check_naive, eval_propositional, Evaluator, SemEnv, DEFAULT_UNFOLD_BUDGET};
