//! A handful of standard cost functions.

use crate::error::Result;
use crate::scalar::Scalar;
use crate::vcsp::{CostFunction, Domain};

/// `cut(a, b) = [a != b]`.
pub fn cut<T: Scalar>(domain: Domain) -> CostFunction<T> {
    CostFunction::from_fn(domain, 2, |x| if x[0] != x[1] { T::one() } else { T::zero() })
}

/// `eq(a, b) = [a == b]`.
pub fn equality<T: Scalar>(domain: Domain) -> CostFunction<T> {
    CostFunction::from_fn(domain, 2, |x| if x[0] == x[1] { T::one() } else { T::zero() })
}

pub fn unary<T: Scalar>(domain: Domain, values: Vec<T>) -> Result<CostFunction<T>> {
    CostFunction::new(domain, 1, values)
}

/// Every unary function `D -> {0, 1}`, named `u_<bits>` with one digit per label.
pub fn zero_one_unaries<T: Scalar>(domain: Domain) -> Vec<(String, CostFunction<T>)> {
    crate::index::tuples(2, domain.size())
        .map(|bits| {
            let name = format!(
                "u_{}",
                bits.iter().map(|b| b.to_string()).collect::<String>()
            );
            let f = CostFunction::from_fn(domain, 1, |x| T::from_count(bits[x[0]]));
            (name, f)
        })
        .collect()
}
