use core::fmt::Debug;

/// Commutative ring operations needed by [`SparseMat`](super::SparseMat).
///
/// Implemented for [`Rational`](super::Rational) and [`AlphaPoly`](super::AlphaPoly).
pub trait Scalar: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn from_i64(v: i64) -> Self;
}
