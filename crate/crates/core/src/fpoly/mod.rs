//! Operations, mappings and (generalized) fractional polymorphisms.

mod distribution;
mod operation;
mod search;

pub use distribution::{admits, find_violation, FractionalPolymorphism, Violation};
pub use operation::{Mapping, Operation};
pub use search::{
    find_symmetric_fpoly, symmetric_operations, ConstraintRow, SymmetricInfeasibility,
    SymmetricSearch,
};
