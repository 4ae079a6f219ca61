//! Exact symbolic computation for the biquantization of finite-dimensional
//! Lie bialgebras.
//!
//! Starting from the structure constants of a Lie bialgebra over the
//! rationals, this crate constructs, at a configurable truncation order,
//! the algebraic objects of two-parameter quantization: the Drinfeld
//! double with its canonical r-matrix, PBW-based enveloping algebras and
//! the symmetric bialgebra with its bi-Poisson structure, the iterated
//! coproduct maps and the membership test for Drinfeld's subalgebra, the
//! Campbell-Hausdorff coproduct, the Etingof-Kazhdan twist and R-matrix
//! built from Verma-module computations, the two-parameter generator
//! family and its pairings, and a closed-form oracle for the trivial
//! bialgebra.
//!
//! All arithmetic is exact: coefficients are arbitrary-precision rationals
//! and every identity is checked coefficient by coefficient. Truncated
//! series keep independent caps per variable and all equalities are
//! asserted up to the cap.

pub mod cbh;
pub mod coeff;
pub mod deltacalc;
pub mod ekquant;
pub mod envelope;
pub mod liebialg;
pub mod pairing;
pub mod report;
pub mod trivial;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("incompatible truncation caps: {0} vs {1}")]
    CapMismatch(coeff::Cap, coeff::Cap),
    #[error("series is not invertible: zero constant term")]
    NotInvertible,
    #[error("series is not divisible by u^{need_u}*v^{need_v}")]
    NotDivisible { need_u: u32, need_v: u32 },
    #[error("operands live over different ambient algebras")]
    AmbientMismatch,
    #[error("tensor arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("bialgebra axiom failure: {0}")]
    AxiomFailure(String),
    #[error("invalid structure constants: {0}")]
    BadStructureConstants(String),
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
    #[error("unsupported truncation order {0} (the quantization pipeline is verified through order 3)")]
    UnsupportedOrder(u32),
    #[error("membership is undecidable at this truncation: need n <= {cap} but n = {n}")]
    CapTooSmall { n: u32, cap: u32 },
    #[error("functional is not in the topological dual at this truncation: {0}")]
    NotInDual(String),
    #[error("element does not lie in the generator span at this truncation: {0}")]
    NotInSpan(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
