//! Scalar abstraction shared by every algorithm in the crate.
//!
//! All arithmetic is exact. The engine is written once against [`Scalar`]
//! and instantiated with [`num_bigint::BigInt`] for production runs; fixed
//! width integers (`i64`, `i128`) also satisfy the bound and are handy for
//! small experiments where overflow is known not to occur.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact, signed integer type.
pub trait Scalar:
    Integer + Signed + Clone + Hash + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Integer + Signed + Clone + Hash + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Converts a small machine integer into the scalar type.
#[inline]
pub fn scalar<T: Scalar>(v: i64) -> T {
    T::from_i64(v).expect("scalar type cannot represent a small integer")
}

/// Non-negative gcd of all entries; zero for an all-zero slice.
pub fn gcd_all<T: Scalar>(xs: &[T]) -> T {
    let mut g = T::zero();
    for x in xs {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
    }
    g
}

/// Dot product of two equal-length slices.
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc + x.clone() * y.clone();
        }
    }
    acc
}
