use std::cmp::Ordering;
use std::fmt::Debug;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, Signed, ToPrimitive};

/// Field element usable as LP data.
///
/// Exact instantiations (`Ratio<BigInt>`, `Ratio<i64>`, ...) make every
/// simplex decision exact. Floating-point types satisfy the trait too, but the
/// engine performs no tolerance handling, so they are only sound on data whose
/// arithmetic is exact in binary (small dyadic values).
pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug {
    fn floor_value(&self) -> Self;

    /// The value as a `u32` when it is a natural number in range.
    fn to_natural(&self) -> Option<u32>;

    fn is_integral(&self) -> bool {
        self.floor_value() == *self
    }

    fn ceil_value(&self) -> Self {
        let f = self.floor_value();
        if f == *self {
            f
        } else {
            f + Self::one()
        }
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Clone + Integer + Signed + Debug + ToPrimitive,
{
    fn floor_value(&self) -> Self {
        self.floor()
    }

    fn to_natural(&self) -> Option<u32> {
        if self.is_integer() {
            self.numer().to_u32()
        } else {
            None
        }
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }
}

impl Scalar for f64 {
    fn floor_value(&self) -> Self {
        self.floor()
    }

    fn to_natural(&self) -> Option<u32> {
        if self.fract() == 0.0 && *self >= 0.0 && *self <= u32::MAX as f64 {
            Some(*self as u32)
        } else {
            None
        }
    }
}

impl Scalar for f32 {
    fn floor_value(&self) -> Self {
        self.floor()
    }

    fn to_natural(&self) -> Option<u32> {
        if self.fract() == 0.0 && *self >= 0.0 && *self <= u32::MAX as f32 {
            Some(*self as u32)
        } else {
            None
        }
    }
}

/// Values an LP objective can take: an ordered vector space over the
/// constraint scalar `F`.
///
/// The plain scalar is the usual case. [`LogLinear`](super::LogLinear)
/// carries formal logarithms, whose order is decided by exact products.
pub trait ObjectiveValue<F>: Clone + Debug {
    fn zero_value() -> Self;
    fn add_value(&self, other: &Self) -> Self;
    fn scale(&self, factor: &F) -> Self;
    /// Sign relative to zero.
    fn signum_value(&self) -> Ordering;

    fn sub_value(&self, other: &Self) -> Self
    where
        F: Scalar,
    {
        self.add_value(&other.scale(&-F::one()))
    }

    fn cmp_value(&self, other: &Self) -> Ordering
    where
        F: Scalar,
    {
        self.sub_value(other).signum_value()
    }

    fn is_zero_value(&self) -> bool {
        self.signum_value() == Ordering::Equal
    }
}

impl<F: Scalar> ObjectiveValue<F> for F {
    fn zero_value() -> Self {
        F::zero()
    }

    fn add_value(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }

    fn scale(&self, factor: &F) -> Self {
        self.clone() * factor.clone()
    }

    fn signum_value(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}
