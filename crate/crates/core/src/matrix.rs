//! The exact 8-point DFT matrix and its multiplierless approximation.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::dyadic::DyadicGaussian;

pub const N: usize = 8;

pub type Square<T> = [[T; N]; N];

/// An 8×8 complex transform.
///
/// Matrices whose entries are all dyadic Gaussians (the approximation, and
/// products of factorization stages) carry an exact view; the floating view
/// is always present.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformMatrix {
    exact: Option<Square<DyadicGaussian>>,
    float: Square<Complex64>,
}

impl TransformMatrix {
    pub fn from_exact(entries: Square<DyadicGaussian>) -> Self {
        let float = entries.map(|row| row.map(DyadicGaussian::to_complex64));
        Self { exact: Some(entries), float }
    }

    pub fn from_float(entries: Square<Complex64>) -> Self {
        Self { exact: None, float: entries }
    }

    pub fn entry(&self, i: usize, k: usize) -> Complex64 {
        self.float[i][k]
    }

    pub fn exact_entry(&self, i: usize, k: usize) -> Option<DyadicGaussian> {
        self.exact.as_ref().map(|e| e[i][k])
    }

    pub fn exact(&self) -> Option<&Square<DyadicGaussian>> {
        self.exact.as_ref()
    }

    pub fn float(&self) -> &Square<Complex64> {
        &self.float
    }

    pub fn row(&self, i: usize) -> &[Complex64; N] {
        &self.float[i]
    }

    /// Direct matrix-vector product, 64 complex multiplies.
    pub fn apply(&self, v: &[Complex64; N]) -> [Complex64; N] {
        std::array::from_fn(|i| {
            self.float[i]
                .iter()
                .zip(v)
                .fold(Complex64::new(0.0, 0.0), |acc, (f, x)| acc + f * x)
        })
    }

    pub fn apply_exact(&self, v: &[DyadicGaussian; N]) -> Option<[DyadicGaussian; N]> {
        let e = self.exact.as_ref()?;
        Some(std::array::from_fn(|i| {
            e[i].iter()
                .zip(v)
                .fold(DyadicGaussian::ZERO, |acc, (&f, &x)| acc + f * x)
        }))
    }

    /// `self · other`, exact when both operands are.
    pub fn matmul(&self, other: &Self) -> Self {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Self::from_exact(std::array::from_fn(|i| {
                std::array::from_fn(|k| {
                    (0..N).fold(DyadicGaussian::ZERO, |acc, m| acc + a[i][m] * b[m][k])
                })
            })),
            _ => Self::from_float(std::array::from_fn(|i| {
                std::array::from_fn(|k| {
                    (0..N).fold(Complex64::new(0.0, 0.0), |acc, m| {
                        acc + self.float[i][m] * other.float[m][k]
                    })
                })
            })),
        }
    }

    pub fn conj_transpose(&self) -> Self {
        match &self.exact {
            Some(e) => Self::from_exact(std::array::from_fn(|i| {
                std::array::from_fn(|k| e[k][i].conj())
            })),
            None => Self::from_float(std::array::from_fn(|i| {
                std::array::from_fn(|k| self.float[k][i].conj())
            })),
        }
    }

    /// `M·Mᴴ`.
    pub fn gram(&self) -> Self {
        self.matmul(&self.conj_transpose())
    }

    pub fn is_symmetric(&self) -> bool {
        match &self.exact {
            Some(e) => (0..N).all(|i| (0..i).all(|k| e[i][k] == e[k][i])),
            None => (0..N).all(|i| (0..i).all(|k| self.float[i][k] == self.float[k][i])),
        }
    }
}

/// `ω₈^m` with `ω₈ = exp(-2πj/8)`; exact in the dyadic ring for even `m`.
pub fn root_of_unity_exact(m: usize) -> Option<DyadicGaussian> {
    match m % N {
        0 => Some(DyadicGaussian::from_int(1, 0)),
        2 => Some(DyadicGaussian::from_int(0, -1)),
        4 => Some(DyadicGaussian::from_int(-1, 0)),
        6 => Some(DyadicGaussian::from_int(0, 1)),
        _ => None,
    }
}

/// `ω₈^m` in floating point, with the eighth roots tabulated so that the
/// entries are correctly rounded and the axis-aligned ones are exact.
pub fn root_of_unity(m: usize) -> Complex64 {
    let h = FRAC_1_SQRT_2;
    let (re, im) = match m % N {
        0 => (1.0, 0.0),
        1 => (h, -h),
        2 => (0.0, -1.0),
        3 => (-h, -h),
        4 => (-1.0, 0.0),
        5 => (-h, h),
        6 => (0.0, 1.0),
        _ => (h, h),
    };
    Complex64::new(re, im)
}

/// The exact DFT matrix, `f[i][k] = ω₈^{ik}`.
pub fn dft_matrix() -> TransformMatrix {
    TransformMatrix::from_float(std::array::from_fn(|i| {
        std::array::from_fn(|k| root_of_unity(i * k))
    }))
}

/// Twice the approximation, as (re, im) integer pairs.
const APPROX_DOUBLED: Square<(i64, i64)> = [
    [(2, 0), (2, 0), (2, 0), (2, 0), (2, 0), (2, 0), (2, 0), (2, 0)],
    [(2, 0), (1, -1), (0, -2), (-1, -1), (-2, 0), (-1, 1), (0, 2), (1, 1)],
    [(2, 0), (0, -2), (-2, 0), (0, 2), (2, 0), (0, -2), (-2, 0), (0, 2)],
    [(2, 0), (-1, -1), (0, 2), (1, -1), (-2, 0), (1, 1), (0, -2), (-1, 1)],
    [(2, 0), (-2, 0), (2, 0), (-2, 0), (2, 0), (-2, 0), (2, 0), (-2, 0)],
    [(2, 0), (-1, 1), (0, -2), (1, 1), (-2, 0), (1, -1), (0, 2), (-1, -1)],
    [(2, 0), (0, 2), (-2, 0), (0, -2), (2, 0), (0, 2), (-2, 0), (0, -2)],
    [(2, 0), (1, 1), (0, 2), (-1, 1), (-2, 0), (-1, -1), (0, -2), (1, -1)],
];

/// The multiplierless approximation F̂₈, entries in `{±1, ±j, (±1±j)/2}`.
pub fn approx_matrix() -> TransformMatrix {
    TransformMatrix::from_exact(APPROX_DOUBLED.map(|row| {
        row.map(|(re, im)| DyadicGaussian::new(re, im, 1))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dg(re: i64, im: i64, shift: u32) -> DyadicGaussian {
        DyadicGaussian::new(re, im, shift)
    }

    #[test]
    fn approx_first_row_is_ones() {
        let m = approx_matrix();
        for k in 0..N {
            assert_eq!(m.exact_entry(0, k), Some(DyadicGaussian::ONE));
        }
    }

    #[test]
    fn approx_entry_one_one() {
        assert_eq!(approx_matrix().exact_entry(1, 1), Some(dg(1, -1, 1)));
    }

    #[test]
    fn approx_entries_come_from_three_parameters() {
        // every entry is ±1, ±j or (±1±j)/2
        let m = approx_matrix();
        for row in m.exact().unwrap() {
            for z in row {
                let f = z.to_complex64();
                let unit = f.norm_sqr() == 1.0 && (f.re == 0.0 || f.im == 0.0);
                let half = f.re.abs() == 0.5 && f.im.abs() == 0.5;
                assert!(unit || half, "unexpected entry {z}");
            }
        }
    }

    #[test]
    fn both_matrices_are_symmetric() {
        assert!(approx_matrix().is_symmetric());
        assert!(dft_matrix().is_symmetric());
    }

    #[test]
    fn even_rows_match_dft_exactly() {
        let m = approx_matrix();
        for i in (0..N).step_by(2) {
            for k in 0..N {
                assert_eq!(m.exact_entry(i, k), root_of_unity_exact(i * k), "({i},{k})");
            }
        }
    }

    #[test]
    fn odd_rows_keep_axis_entries_and_shrink_diagonal_ones() {
        // odd rows: even-column entries are exact, odd-column entries are the
        // 45-degree roots scaled from magnitude 1 to magnitude sqrt(2)/2
        let (a, f) = (approx_matrix(), dft_matrix());
        for i in (1..N).step_by(2) {
            for k in 0..N {
                let (ae, fe) = (a.entry(i, k), f.entry(i, k));
                if k % 2 == 0 {
                    assert_eq!(ae, fe);
                } else {
                    let scaled = fe * FRAC_1_SQRT_2;
                    assert!((ae - scaled).norm() < 1e-15, "({i},{k})");
                }
            }
        }
    }

    #[test]
    fn gram_diagonal() {
        let g = approx_matrix().gram();
        let e = g.exact().unwrap();
        let diag: Vec<_> = (0..N).map(|i| e[i][i]).collect();
        let expect: Vec<_> = [8, 6, 8, 6, 8, 6, 8, 6]
            .iter()
            .map(|&d| DyadicGaussian::from_int(d, 0))
            .collect();
        assert_eq!(diag, expect);
    }

    #[test]
    fn dft_gram_is_eight_identity() {
        let g = dft_matrix().gram();
        for i in 0..N {
            for k in 0..N {
                let want = if i == k { 8.0 } else { 0.0 };
                assert!((g.entry(i, k) - want).norm() < 1e-13);
            }
        }
    }
}
