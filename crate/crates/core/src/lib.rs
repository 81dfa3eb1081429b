//! Exact computation in topological full groups of minimal substitution
//! subshifts.
//!
//! The pipeline runs: load a primitive substitution, enumerate its language,
//! recode to a system where five consecutive symbols are always distinct,
//! build group elements as orbit cocycles over cylinder sets, and then emit
//! and verify a truncated presentation by generators and relations.

pub mod clopen;
pub mod error;
pub mod group;
pub mod presentation;
pub mod recoder;
pub mod subshift;
pub mod towers;

pub use clopen::{ClopenAlgebra, ClopenSet, Cylinder};
pub use error::{Error, Result};
pub use group::{FullGroup, GeneratorSymbol, GroupElement};
pub use recoder::{find_n0, recode, RecodedSubshift};
pub use subshift::{
    Alphabet, FactorSet, LanguageOracle, Substitution, SubstitutionSubshift, Symbol, Word,
};
