//! Stable polytopes in the coefficient space of monic Hurwitz polynomials.
//!
//! A monic real polynomial `a(s) = a_1 + a_2 s + ... + a_n s^{n-1} + s^n` is
//! identified with the vector `(a_1, ..., a_n)` of its non-leading
//! coefficients, stored here as exact rationals. The crate builds special
//! `(n+1)`-vertex polytopes of such vectors whose interiors consist of
//! Hurwitz-stable polynomials, classifies stability three independent ways
//! (exact Hurwitz minors, exact low-order closed forms, a numeric root
//! oracle), and verifies the edge and interior structure of those polytopes.
//!
//! Modules:
//! - [`poly`]: coefficient-vector algebra (products, convex combinations,
//!   evaluation).
//! - [`stability`]: Hurwitz-matrix minors, low-order criteria, companion
//!   root oracle, and the fused [`stability::classify`] verdict.
//! - [`polytope`]: the vertex constructions for even and odd degree, edge
//!   predictions, and interior sampling.
//! - [`verify`]: edge sweeps, interior Monte Carlo, exact edge certificates,
//!   and a non-convexity witness search.

pub mod poly;
pub mod polytope;
pub mod rational;
pub mod stability;
pub mod verify;

pub use poly::{MonicPolynomial, QuadraticFactor};
pub use polytope::{EdgeClass, EdgePrediction, PolytopeSpec, StablePolytope, VertexClass};
pub use stability::{classify, StabilityClass, StabilityVerdict};
pub use verify::{run_verification, VerificationReport, VerifyOptions};

/// Errors surfaced by this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A precondition on an operation's input was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The exact and numeric stability paths disagreed beyond the boundary
    /// band. Never swallowed: callers must surface this.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
