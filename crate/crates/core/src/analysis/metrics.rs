use serde::Serialize;

use crate::dyadic::DyadicGaussian;
use crate::matrix::{approx_matrix, dft_matrix, TransformMatrix, N};

/// `‖a - b‖²_F / 2`.
pub fn matrix_mse(a: &TransformMatrix, b: &TransformMatrix) -> f64 {
    let sum: f64 = (0..N)
        .flat_map(|i| (0..N).map(move |k| (i, k)))
        .map(|(i, k)| (a.entry(i, k) - b.entry(i, k)).norm_sqr())
        .sum();
    sum / 2.0
}

/// MSE of the approximation against the exact DFT; analytically `12 - 8√2`.
pub fn approximation_mse() -> f64 {
    matrix_mse(&dft_matrix(), &approx_matrix())
}

/// `δ = 1 - ‖diag(G)‖²_F / ‖G‖²_F` with `G = M·Mᴴ`.
pub fn orthogonality_deviation(m: &TransformMatrix) -> f64 {
    let g = m.gram();
    let mut diag = 0.0;
    let mut total = 0.0;
    for i in 0..N {
        for k in 0..N {
            let e = g.entry(i, k).norm_sqr();
            total += e;
            if i == k {
                diag += e;
            }
        }
    }
    1.0 - diag / total
}

/// Squared Frobenius norms of the Gram matrix and of its diagonal, computed
/// exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GramEnergy {
    pub diagonal: i64,
    pub total: i64,
}

impl GramEnergy {
    /// `None` when the matrix has no exact view or the energies are not
    /// integers.
    pub fn of(m: &TransformMatrix) -> Option<Self> {
        let g = m.gram();
        let e = g.exact()?;
        let mut diag = DyadicGaussian::ZERO;
        let mut total = DyadicGaussian::ZERO;
        for (i, row) in e.iter().enumerate() {
            for (k, z) in row.iter().enumerate() {
                let s = z.norm_sqr();
                total = total + s;
                if i == k {
                    diag = diag + s;
                }
            }
        }
        let int = |z: DyadicGaussian| (z.shift() == 0 && z.im_num() == 0).then_some(z.re_num());
        Some(Self { diagonal: int(diag)?, total: int(total)? })
    }

    /// Deviation as the reduced fraction `(off-diagonal, total)`.
    pub fn deviation_fraction(&self) -> (i64, i64) {
        let off = self.total - self.diagonal;
        let g = gcd(off, self.total);
        (off / g, self.total / g)
    }

    pub fn deviation(&self) -> f64 {
        (self.total - self.diagonal) as f64 / self.total as f64
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs().max(1)
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mse_closed_form() {
        let closed = 12.0 - 8.0 * 2f64.sqrt();
        assert!((approximation_mse() - closed).abs() < 1e-12);
        assert!((approximation_mse() - 0.686).abs() < 0.001);
        assert_eq!(matrix_mse(&dft_matrix(), &dft_matrix()), 0.0);
    }

    #[test]
    fn dft_is_orthogonal() {
        assert!(orthogonality_deviation(&dft_matrix()) < 1e-12);
    }

    #[test]
    fn exact_gram_energy_of_approximation() {
        let e = GramEnergy::of(&approx_matrix()).unwrap();
        assert_eq!(e.diagonal, 400);
        assert_eq!(e.total, 416);
        assert_eq!(e.deviation_fraction(), (1, 26));
        assert!((orthogonality_deviation(&approx_matrix()) - e.deviation()).abs() < 1e-15);
        assert!(GramEnergy::of(&dft_matrix()).is_none());
    }

    #[test]
    fn signed_dct_reference() {
        // the sign pattern of the 8-point DCT-II, a well-known non-orthogonal
        // approximation, has deviation exactly 1/5 under this measure
        use num_complex::Complex64;
        let sdct = TransformMatrix::from_float(std::array::from_fn(|k| {
            std::array::from_fn(|n| {
                let c = (std::f64::consts::PI * (2 * n + 1) as f64 * k as f64 / 16.0).cos();
                Complex64::new(if c >= 0.0 { 1.0 } else { -1.0 }, 0.0)
            })
        }));
        assert!((orthogonality_deviation(&sdct) - 0.2).abs() < 1e-12);
    }
}
