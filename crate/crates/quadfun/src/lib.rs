//! Exact-arithmetic calculus of quadratic functors on pointed algebraic
//! theories: cross-effects, linearization and quadratization quotients,
//! the classifying ringoid, quadratic modules, the quadratic tensor
//! product, and the square-group evaluators for free groups.
//!
//! Everything is computed with exact integer linear algebra over
//! finitely presented abelian groups; no floating point anywhere.

pub mod abgroup;
pub mod theory;

pub mod ufunctor;

pub mod functordata;

pub mod qmodule;

pub mod ringoid;

pub mod tensor;

pub mod cogroup;

pub mod descriptor;
pub mod report;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("hom-sets of this theory are infinite; enumeration refused")]
    InfiniteHomSet,
    #[error("theory has no built-in cogroup structure")]
    NoCogroupStructure,
    #[error("invalid involution: square is not the identity")]
    InvalidInvolution,
    #[error("map is not well defined: {0}")]
    NotWellDefined(String),
    #[error("axiom failure: {0}")]
    AxiomFailure(String),
    #[error("functor is not quadratic: {0}")]
    NotQuadratic(String),
    #[error("table is not normalized: the zero morphism must map to zero")]
    Unnormalized,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("word is not freely reduced")]
    UnreducedWord,
    #[error("descriptor error: {0}")]
    Schema(String),
}
