//! Exact-arithmetic tools for finite-valued constraint languages.
//!
//! The crate decides whether a language is solved by the basic LP
//! relaxation (by searching for a symmetric fractional polymorphism),
//! lifts symmetric fractional polymorphisms to every higher arity with
//! checkable intermediate objects, solves and certifies basic LP
//! relaxations of instances, and converts STP multimorphisms into
//! submodularity multimorphisms.
//!
//! All algorithms are generic over an exact ordered field ([`Scalar`]);
//! the `Rat*` aliases instantiate them with arbitrary-precision rationals.

pub mod blp;
pub mod catalog;
pub mod error;
pub mod fpoly;
pub mod index;
pub mod lift;
pub mod linalg;
pub mod ratlp;
pub mod scalar;
pub mod stp;
pub mod vcsp;

pub use error::{Error, Result};
pub use index::Label;
pub use scalar::Scalar;
pub use vcsp::{CostFunction, Domain, Instance, Labeling, Language, Term};

/// Arbitrary-precision rational numbers, always in lowest terms.
pub type Rational = num_rational::BigRational;

pub type RatCostFunction = CostFunction<Rational>;
pub type RatLanguage = Language<Rational>;
pub type RatInstance = Instance<Rational>;
pub type RatLinearProgram = ratlp::LinearProgram<Rational>;
pub type RatLpOutcome = ratlp::LpOutcome<Rational>;
pub type RatFractionalPolymorphism = fpoly::FractionalPolymorphism<Rational>;
pub type RatMappingGraph = lift::MappingGraph<Rational>;

/// Enumeration and size caps shared by the exhaustive checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// `d^|V|` for brute-force minimization.
    pub enumeration: u128,
    /// `d^(n*m)` per cost function for admittance checks.
    pub admits: u128,
    /// Number of symmetric operations enumerated as LP columns.
    pub symmetric_operations: u128,
    /// Number of mappings generated for a lifting graph.
    pub mapping_vertices: usize,
    /// Number of variables in a basic LP relaxation.
    pub blp_variables: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: vcsp::DEFAULT_ENUMERATION_CAP,
            admits: 10_000_000,
            symmetric_operations: 10_000,
            mapping_vertices: 100_000,
            blp_variables: 100_000,
        }
    }
}
