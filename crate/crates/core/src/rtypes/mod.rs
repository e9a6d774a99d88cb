//! Refinement intersection types and the derivation engine.

mod derive;
mod env;
mod types;

pub use derive::{derive, minimize, types_of, Deriver, Track, Witness};
pub use env::{Binding, TypeEnv};
pub use types::{TyId, TyNode, TySet, Types, DEFAULT_TYPE_CAP};
