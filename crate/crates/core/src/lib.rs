//! Exact parameter calculus for semi-linear elliptic boundary problems
//! `A_T u + g(u) = f` posed in Besov (`B^s_{p,q}`) and Triebel–Lizorkin
//! (`F^s_{p,q}`) spaces.
//!
//! The crate decides membership in the parameter domain of `A_T + g(·)`,
//! derives scale embeddings with replayable proofs, evaluates the
//! composition smoothness `σ(s,p)` and produces step certificates for the
//! bootstrap argument that upgrades the regularity of a solution.

pub mod error;
pub mod numeric;
pub mod bootstrap;
pub mod cli;
pub mod composition;
pub mod embedding;
pub mod plot;
pub mod remarks;
pub mod space;

pub use error::{CalcError, Result};
pub use numeric::{ExtReal, Rational, Surd};
pub use space::{Base, OperatorSpec, Scale, SpaceParams};
