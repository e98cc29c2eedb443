//! Solver for the two-color hat game with an arbitrary color distribution.
//!
//! A strategy is identified with the set of configurations it loses. Such a
//! set must be *adequate*: every other configuration is one hat flip away
//! from a member. The crate enumerates adequate sets, evaluates their losing
//! probability exactly over `Q(√2)`, compares sets by dominance, builds
//! decision matrices from them and checks those matrices independently.
//!
//! See [`model`] for the bit-order and probability conventions.

pub mod adequacy;
pub mod dmg;
pub mod dominance;
pub mod error;
pub mod exact;
pub mod exec;
pub mod isomorphism;
pub mod model;
pub mod poly;
pub mod probability;
pub mod verifier;

pub use error::{Error, Result};
pub use exact::QSqrt2;
pub use exec::Exec;
pub use model::{
    Action, AdequateSet, BadPolynomial, ColorDistribution, DecisionMatrix, HatConfiguration,
    Signature,
};
