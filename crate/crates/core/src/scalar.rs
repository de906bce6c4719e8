//! The exact ordered field every cost, weight and LP entry lives in.

use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Num, Signed};

/// An exact ordered field.
///
/// Everything in this crate relies on exact zero tests and exact
/// comparisons, so the bound asks for `Ord` rather than `PartialOrd`;
/// that rules out `f32`/`f64` by construction. The arbitrary-precision
/// [`Rational`](crate::Rational) is the default instantiation;
/// `Ratio<i64>` and friends also qualify but may overflow.
pub trait Scalar:
    Num + Signed + FromPrimitive + Clone + Ord + Debug + Display + Send + Sync + 'static
{
    /// Embeds a count. Panics only if the field cannot represent it.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count not representable in scalar type")
    }

    /// The reciprocal of a positive count, `1/n`.
    fn recip_count(n: usize) -> Self {
        Self::one() / Self::from_count(n)
    }
}

impl<T> Scalar for T where
    T: Num + Signed + FromPrimitive + Clone + Ord + Debug + Display + Send + Sync + 'static
{
}

/// Sum of a sequence of scalars.
pub fn sum<'a, T: Scalar>(values: impl IntoIterator<Item = &'a T>) -> T {
    values.into_iter().fold(T::zero(), |acc, v| acc + v.clone())
}

/// Inner product of two equally long slices.
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}
