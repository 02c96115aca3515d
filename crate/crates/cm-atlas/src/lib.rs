//! Exact computations around imaginary quadratic orders and their CM-points.
//!
//! The crate is organised in layers:
//!
//! - [`arith`]: integer plumbing — factorization, Kronecker symbol, squarefree
//!   parts. All arithmetic is exact.
//! - [`qforms`]: reduced primitive binary quadratic forms, Gauss composition
//!   and the class group `Cl(Δ)` they realize.
//! - [`orders`]: conductor decomposition `Δ = Df²`, the class-number formula,
//!   compositum degrees of ring class fields, and the bounded scan for
//!   discriminants whose class group is annihilated by 2.
//! - [`modular`]: arbitrary-precision evaluation of the modular `j`-function,
//!   Hilbert class polynomials with certified integer rounding, dominance
//!   checks, and identification of two-torsion CM fields by their quadratic
//!   subfields.
//! - [`survey`]: enumeration of all rational and quadratic CM-points, exact
//!   line geometry, polynomial similarity, and the end-to-end verification
//!   reports.
//!
//! Everything is deterministic: scans are parallelised with rayon but merged
//! in sorted order, so outputs are byte-for-byte reproducible.

pub mod arith;
pub mod modular;
pub mod orders;
pub mod qforms;
pub mod survey;

pub use modular::{BigComplex, HilbertPolynomial, SubfieldSet};
pub use orders::OrderDesc;
pub use qforms::{Form, FormClassGroup};
pub use survey::{Atlas, CmPoint, QuadNum, RationalLine, SimilarityWitness};

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a valid discriminant: need Δ < 0 and Δ ≡ 0, 1 (mod 4)")]
    InvalidDiscriminant(i64),
    #[error("zero cannot be factorized")]
    FactorizeZero,
    #[error("|{0}| exceeds the factorization capacity of the precomputed prime table")]
    FactorizeOverflow(i64),
    #[error("form ({0}, {1}, {2}) is not primitive")]
    NonPrimitiveForm(String, String, String),
    #[error("form ({0}, {1}, {2}) must have a > 0 and negative discriminant")]
    NotPositiveDefinite(String, String, String),
    #[error("forms have different discriminants ({0} vs {1})")]
    DiscriminantMismatch(String, String),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("conductor {0} must be ≥ 1")]
    InvalidConductor(i64),
    #[error("class-number formula produced a non-integral value for D = {0}, f = {1}")]
    NonIntegralClassNumber(i64, i64),
    #[error("precision {0} out of range: need {1} ≤ prec ≤ {2} bits")]
    PrecisionOutOfRange(u32, u32, u32),
    #[error("τ must lie in the upper half-plane")]
    NotUpperHalfPlane,
    #[error("coefficient rounding failed for Δ = {0}: residual {1:e} after {2} retries")]
    RoundingFailure(i64, f64, u32),
    #[error("dominance check needs h(Δ) ≥ 2, but h({0}) = 1")]
    NoNonDominantConjugate(i64),
    #[error("Δ = {0} does not have a two-torsion class group")]
    NotTwoTorsion(i64),
    #[error("degenerate quadratic subfield for Δ = {0}: character sum squared to {1}")]
    DegenerateSubfield(i64, String),
    #[error("no squarefree d with support in Δ = {0} satisfies {1} = m²·d")]
    FieldMismatch(i64, String),
    #[error("points do not lie in a common quadratic field (√{0} vs √{1})")]
    MixedFields(u64, u64),
    #[error("point is rational; it equals its own conjugate and spans no line")]
    ConjugateOfRational,
    #[error("a line needs (A1, A2) ≠ (0, 0)")]
    DegenerateLine,
    #[error("no representative of the class of ({0}, {1}, {2}) coprime to {3} was found")]
    CoprimeSearchExhausted(String, String, String, String),
    #[error("{0} is not squarefree > 1")]
    InvalidSquarefreeRadicand(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
