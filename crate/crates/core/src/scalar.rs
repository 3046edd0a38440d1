//! Exact integer scalars used for capacities, costs, weights and potentials.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::iter::Sum;

use num_traits::{PrimInt, Signed};

/// A signed machine integer. Every algorithm in this crate is exact, so
/// floating-point types are deliberately not admitted.
pub trait Weight:
    PrimInt + Signed + Hash + Debug + Display + Default + Sum + Send + Sync + 'static
{
}

impl<T> Weight for T where
    T: PrimInt + Signed + Hash + Debug + Display + Default + Sum + Send + Sync + 'static
{
}

/// Converts a count into the scalar type, panicking only if it cannot be
/// represented (counts here are bounded by graph sizes).
pub(crate) fn from_usize<T: Weight>(n: usize) -> T {
    T::from(n).expect("count does not fit the scalar type")
}

/// A capacity that is either a finite nonnegative value or `+inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Capacity<T> {
    Finite(T),
    Infinite,
}

impl<T: Weight> Capacity<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Capacity::Finite(_))
    }

    pub fn finite(&self) -> Option<T> {
        match *self {
            Capacity::Finite(v) => Some(v),
            Capacity::Infinite => None,
        }
    }

    pub(crate) fn is_positive(&self) -> bool {
        match *self {
            Capacity::Finite(v) => v > T::zero(),
            Capacity::Infinite => true,
        }
    }

    pub(crate) fn min_with(&self, v: Capacity<T>) -> Capacity<T> {
        match (*self, v) {
            (Capacity::Infinite, x) | (x, Capacity::Infinite) => x,
            (Capacity::Finite(a), Capacity::Finite(b)) => Capacity::Finite(a.min(b)),
        }
    }

    pub(crate) fn sub(&self, v: T) -> Capacity<T> {
        match *self {
            Capacity::Finite(a) => Capacity::Finite(a - v),
            Capacity::Infinite => Capacity::Infinite,
        }
    }

    pub(crate) fn add(&self, v: T) -> Capacity<T> {
        match *self {
            Capacity::Finite(a) => Capacity::Finite(a + v),
            Capacity::Infinite => Capacity::Infinite,
        }
    }
}

impl<T: Display> Display for Capacity<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Capacity::Finite(v) => write!(f, "{v}"),
            Capacity::Infinite => write!(f, "inf"),
        }
    }
}
