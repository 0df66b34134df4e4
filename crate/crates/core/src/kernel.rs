//! Direct DFT reference and the 26-addition fast kernel.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{dft_matrix, N};
use crate::scalar::Multiplierless;

/// Output permutation: output `r` reads stage value `OUTPUT_ORDER[r]`.
pub const OUTPUT_ORDER: [usize; N] = [0, 4, 2, 5, 1, 7, 3, 6];

/// Exact DFT by direct summation, `V_k = Σ v_n ω₈^{kn}`.
pub fn exact_dft8(v: &[Complex64; N]) -> Result<[Complex64; N]> {
    check_finite(v)?;
    Ok(dft_matrix().apply(v))
}

pub(crate) fn check_finite(v: &[Complex64]) -> Result<()> {
    match v.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(index) => Err(Error::NonFiniteInput { index }),
        None => Ok(()),
    }
}

/// Computes `F̂₈·v` with 26 complex additions, two halvings and three
/// rotations by `j`.
///
/// Stages run right to left through the factorization: the length-8
/// butterfly first, the output permutation last.
pub fn fast_transform<S: Multiplierless>(v: [S; N]) -> [S; N] {
    let [x0, x1, x2, x3, x4, x5, x6, x7] = v;

    // B8
    let (y0, y4) = (x0.clone() + x4.clone(), x0 - x4);
    let (y1, y5) = (x1.clone() + x5.clone(), x1 - x5);
    let (y2, y6) = (x2.clone() + x6.clone(), x2 - x6);
    let (y3, y7) = (x3.clone() + x7.clone(), x3 - x7);

    // diag(B4, A2)
    let (z0, z2) = (y0.clone() + y2.clone(), y0 - y2);
    let (z1, z3) = (y1.clone() + y3.clone(), y1 - y3);
    let (z4, z6) = (y4, y6);
    let (z5, z7) = (y5.clone() + y7.clone(), y5 - y7);

    // D1
    let (z5, z7) = (z5.halve(), z7.halve());

    // diag(B2, I2, A4)
    let (w0, w1) = (z0.clone() + z1.clone(), z0 - z1);
    let (w2, w3) = (z2, z3);
    let (w4, w7) = (z4.clone() + z7.clone(), z4 - z7);
    let (w5, w6) = (z5.clone() + z6.clone(), z5 - z6);

    // D2
    let (w3, w5, w6) = (w3.mul_j(), w5.mul_j(), w6.mul_j());

    // diag(I2, A1, A3)
    let (u2, u3) = (w2.clone() - w3.clone(), w2 + w3);
    let (u4, u6) = (w4.clone() - w5.clone(), w4 + w5);
    let (u5, u7) = (w7.clone() - w6.clone(), w6 + w7);

    // P
    [w0, u4, u2, u5, w1, u7, u3, u6]
}

/// Floating-point convenience wrapper that validates the input first.
pub fn fast_transform_checked(v: &[Complex64; N]) -> Result<[Complex64; N]> {
    check_finite(v)?;
    Ok(fast_transform(*v))
}
