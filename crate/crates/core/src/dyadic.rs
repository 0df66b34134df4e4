//! Exact complex numbers of the form `(a + jb) / 2^s`.
//!
//! Every entry of the approximate transform and every intermediate value of
//! the fast kernel lives in this set, so running the kernel over
//! [`DyadicGaussian`] gives results with no rounding at all.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::scalar::Multiplierless;

/// `(re_num + j·im_num) / 2^shift`, kept in canonical form.
///
/// The shift is minimal: when `shift > 0` at least one of the numerators is
/// odd. Zero is always `(0, 0, 0)`. Canonical form makes structural equality
/// coincide with numeric equality.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DyadicGaussian {
    re_num: i64,
    im_num: i64,
    shift: u32,
}

impl DyadicGaussian {
    pub const ZERO: Self = Self { re_num: 0, im_num: 0, shift: 0 };
    pub const ONE: Self = Self { re_num: 1, im_num: 0, shift: 0 };
    pub const J: Self = Self { re_num: 0, im_num: 1, shift: 0 };

    pub fn new(re_num: i64, im_num: i64, shift: u32) -> Self {
        Self { re_num, im_num, shift }.canonical()
    }

    pub fn from_int(re: i64, im: i64) -> Self {
        Self { re_num: re, im_num: im, shift: 0 }
    }

    pub fn re_num(&self) -> i64 {
        self.re_num
    }

    pub fn im_num(&self) -> i64 {
        self.im_num
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.re_num == 0 && self.im_num == 0
    }

    pub fn conj(self) -> Self {
        Self { im_num: -self.im_num, ..self }
    }

    /// Squared magnitude, `|z|^2`, which is again dyadic (and real).
    pub fn norm_sqr(self) -> Self {
        self * self.conj()
    }

    pub fn to_complex64(self) -> Complex64 {
        let scale = (-(self.shift as f64)).exp2();
        Complex64::new(self.re_num as f64 * scale, self.im_num as f64 * scale)
    }

    fn canonical(mut self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        let tz = (self.re_num | self.im_num).trailing_zeros().min(self.shift);
        self.re_num >>= tz;
        self.im_num >>= tz;
        self.shift -= tz;
        self
    }

    /// Rescales both operands to a common shift.
    fn aligned(self, other: Self) -> (i64, i64, i64, i64, u32) {
        let shift = self.shift.max(other.shift);
        let lift = |v: i64, by: u32| {
            v.checked_mul(1i64 << by)
                .expect("dyadic numerator overflow while aligning shifts")
        };
        (
            lift(self.re_num, shift - self.shift),
            lift(self.im_num, shift - self.shift),
            lift(other.re_num, shift - other.shift),
            lift(other.im_num, shift - other.shift),
            shift,
        )
    }
}

impl Add for DyadicGaussian {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (ar, ai, br, bi, shift) = self.aligned(rhs);
        Self::new(
            ar.checked_add(br).expect("dyadic overflow"),
            ai.checked_add(bi).expect("dyadic overflow"),
            shift,
        )
    }
}

impl Sub for DyadicGaussian {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for DyadicGaussian {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re_num: -self.re_num, im_num: -self.im_num, shift: self.shift }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for DyadicGaussian {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let m = |a: i64, b: i64| a.checked_mul(b).expect("dyadic overflow");
        let re = m(self.re_num, rhs.re_num)
            .checked_sub(m(self.im_num, rhs.im_num))
            .expect("dyadic overflow");
        let im = m(self.re_num, rhs.im_num)
            .checked_add(m(self.im_num, rhs.re_num))
            .expect("dyadic overflow");
        Self::new(re, im, self.shift + rhs.shift)
    }
}

impl Multiplierless for DyadicGaussian {
    fn halve(self) -> Self {
        if self.is_zero() {
            return self;
        }
        Self::new(self.re_num, self.im_num, self.shift + 1)
    }

    fn mul_j(self) -> Self {
        Self { re_num: -self.im_num, im_num: self.re_num, shift: self.shift }
    }
}

impl fmt::Debug for DyadicGaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for DyadicGaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im_num < 0 { '-' } else { '+' };
        write!(f, "({}{}{}j)", self.re_num, sign, self.im_num.abs())?;
        if self.shift > 0 {
            write!(f, "/2^{}", self.shift)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form_strips_common_powers_of_two() {
        let z = DyadicGaussian::new(4, -8, 3);
        assert_eq!((z.re_num(), z.im_num(), z.shift()), (1, -2, 1));
        assert_eq!(DyadicGaussian::new(0, 0, 7), DyadicGaussian::ZERO);
        // shift never goes negative: 6/2^0 stays as is
        assert_eq!(DyadicGaussian::new(6, 2, 0).shift(), 0);
    }

    #[test]
    fn halving_is_exact() {
        let z = DyadicGaussian::from_int(1, -1).halve();
        assert_eq!(z, DyadicGaussian::new(1, -1, 1));
        assert_eq!(z.to_complex64(), Complex64::new(0.5, -0.5));
        assert_eq!(z + z, DyadicGaussian::from_int(1, -1));
    }

    #[test]
    fn mul_j_rotates() {
        let z = DyadicGaussian::from_int(3, 5);
        assert_eq!(z.mul_j(), DyadicGaussian::from_int(-5, 3));
        assert_eq!(z.mul_j(), z * DyadicGaussian::J);
    }

    #[test]
    fn norm_sqr_of_half_one_minus_j() {
        let z = DyadicGaussian::new(1, -1, 1);
        assert_eq!(z.norm_sqr(), DyadicGaussian::new(1, 0, 1));
    }

    fn small() -> impl Strategy<Value = DyadicGaussian> {
        (-1000i64..1000, -1000i64..1000, 0u32..8).prop_map(|(a, b, s)| DyadicGaussian::new(a, b, s))
    }

    proptest! {
        #[test]
        fn arithmetic_matches_floats(a in small(), b in small()) {
            // values are small dyadics, so f64 is exact here too
            prop_assert_eq!((a + b).to_complex64(), a.to_complex64() + b.to_complex64());
            prop_assert_eq!((a - b).to_complex64(), a.to_complex64() - b.to_complex64());
            prop_assert_eq!((a * b).to_complex64(), a.to_complex64() * b.to_complex64());
            prop_assert_eq!(a.halve().to_complex64(), a.to_complex64() * 0.5);
        }

        #[test]
        fn results_stay_canonical(a in small(), b in small()) {
            for z in [a + b, a - b, a * b, a.halve(), a.mul_j()] {
                prop_assert!(z.shift() == 0 || (z.re_num() | z.im_num()) & 1 == 1);
            }
        }
    }
}
