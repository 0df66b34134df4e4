use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

/// Arithmetic available to the fast kernel.
///
/// There is deliberately no general multiplication: the kernel may only add,
/// subtract, negate, halve (a one-position shift) and rotate by `j`.
pub trait Multiplierless:
    Clone + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self>
{
    fn halve(self) -> Self;

    /// `(a + jb)·j = -b + ja`.
    fn mul_j(self) -> Self;
}

impl Multiplierless for Complex64 {
    fn halve(self) -> Self {
        self * 0.5
    }

    fn mul_j(self) -> Self {
        Complex64::new(-self.im, self.re)
    }
}
