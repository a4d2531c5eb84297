use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Integer scalar usable by the elimination kernels.
///
/// Arithmetic goes through the checked operations so that fixed-width types
/// report overflow instead of wrapping. `BigInt` never overflows.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + Ord
    + Zero
    + One
    + Signed
    + Integer
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
{
    fn to_bigint(&self) -> BigInt;
    fn from_bigint(x: &BigInt) -> Option<Self>;
}

impl Scalar for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn from_bigint(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
}

impl Scalar for i64 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(x: &BigInt) -> Option<Self> {
        x.to_i64()
    }
}

impl Scalar for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(x: &BigInt) -> Option<Self> {
        x.to_i128()
    }
}

/// Raised by fixed-width kernels when an intermediate value leaves the type's range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("integer overflow in fixed-width arithmetic")]
pub struct Overflow;

pub(crate) fn add<T: Scalar>(a: &T, b: &T) -> Result<T, Overflow> {
    a.checked_add(b).ok_or(Overflow)
}

pub(crate) fn sub<T: Scalar>(a: &T, b: &T) -> Result<T, Overflow> {
    a.checked_sub(b).ok_or(Overflow)
}

pub(crate) fn mul<T: Scalar>(a: &T, b: &T) -> Result<T, Overflow> {
    a.checked_mul(b).ok_or(Overflow)
}

/// `a - q*b`, the basic elimination step.
pub(crate) fn sub_mul<T: Scalar>(a: &T, q: &T, b: &T) -> Result<T, Overflow> {
    sub(a, &mul(q, b)?)
}

/// Non-negative remainder of `a` modulo `m` (`m == 0` leaves `a` unchanged).
pub fn modulo(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_zero() {
        a.clone()
    } else {
        a.mod_floor(&m.abs())
    }
}
