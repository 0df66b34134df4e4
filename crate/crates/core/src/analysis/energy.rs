//! Pattern error between the exact and approximate beams, and its energy.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use super::{array_pattern, beam_response, check_omega_t, row_response, PsiGrid};
use crate::error::{Error, Result};
use crate::matrix::{approx_matrix, dft_matrix, TransformMatrix, N};
use crate::quadrature::{integrate, Quadrature};

/// Node-doubling tolerance for error-energy integrals.
pub const ENERGY_TOLERANCE: f64 = 1e-5;

/// `D_i(ψ) = |P_i(ψ; F₈) - P_i(ψ; F̂₈)|` sampled on the grid.
pub fn pattern_error(i: usize, grid: &PsiGrid, omega_t: f64) -> Result<Vec<f64>> {
    let exact = array_pattern(&dft_matrix(), i, grid, omega_t)?;
    let approx = array_pattern(&approx_matrix(), i, grid, omega_t)?;
    Ok(exact.values.iter().zip(&approx.values).map(|(e, a)| (e - a).abs()).collect())
}

/// How the difference between an exact and an approximate row is measured
/// before squaring and integrating over `[-π/2, π/2]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ErrorMeasure {
    /// `|H_i(θ; F₈) - H_i(θ; F̂₈)|`: complex difference of the unnormalized
    /// transfer functions, with the integration variable used directly as
    /// the filter frequency. For a row difference `Δ` supported on odd
    /// columns this integrates to `π·Σ_k |Δ_k|²`.
    #[default]
    TransferFunction,
    /// `D_i(ψ)`: difference of the normalized magnitude patterns, with
    /// `ω = -ω_t·sin ψ` and each pattern normalized by its own peak.
    Pattern { omega_t: f64 },
}

/// Per-row error energies and their total.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    pub measure: ErrorMeasure,
    pub energies: [f64; N],
    pub total: f64,
    pub rule: &'static str,
    pub quadrature: [Quadrature; N],
}

impl ErrorReport {
    pub fn max_estimated_error(&self) -> f64 {
        self.quadrature.iter().map(|q| q.estimated_error).fold(0.0, f64::max)
    }

    pub fn max_doubling_delta(&self) -> f64 {
        self.quadrature.iter().map(|q| q.doubling_delta).fold(0.0, f64::max)
    }
}

/// Peak of `|H_i(-ω_t·sin ψ)|` over the continuous range, used as the
/// pattern normalization so that it does not depend on the quadrature nodes.
fn continuous_beta(matrix: &TransformMatrix, i: usize, omega_t: f64) -> f64 {
    let peaks = super::beam_peak_angles(matrix, &PsiGrid::peak_default(), omega_t)
        .expect("validated arguments");
    peaks[i].response
}

pub fn error_energy(i: usize, measure: ErrorMeasure) -> Result<Quadrature> {
    if i >= N {
        return Err(Error::RowOutOfRange(i));
    }
    let (f, a) = (dft_matrix(), approx_matrix());
    let (fr, ar) = (*f.row(i), *a.row(i));
    match measure {
        ErrorMeasure::TransferFunction => integrate(
            |theta| (row_response(&fr, theta) - row_response(&ar, theta)).norm_sqr(),
            -FRAC_PI_2,
            FRAC_PI_2,
            ENERGY_TOLERANCE,
        ),
        ErrorMeasure::Pattern { omega_t } => {
            check_omega_t(omega_t)?;
            let (bf, ba) = (continuous_beta(&f, i, omega_t), continuous_beta(&a, i, omega_t));
            integrate(
                |psi| {
                    let d = beam_response(&fr, psi, omega_t) / bf
                        - beam_response(&ar, psi, omega_t) / ba;
                    d * d
                },
                -FRAC_PI_2,
                FRAC_PI_2,
                ENERGY_TOLERANCE,
            )
        }
    }
}

pub fn total_error_energy(measure: ErrorMeasure) -> Result<ErrorReport> {
    let mut quadrature = Vec::with_capacity(N);
    for i in 0..N {
        quadrature.push(error_energy(i, measure)?);
    }
    let quadrature: [Quadrature; N] = quadrature.try_into().expect("eight rows");
    let energies = quadrature.map(|q| q.value);
    Ok(ErrorReport {
        measure,
        energies,
        total: energies.iter().sum(),
        rule: "composite Simpson with node doubling",
        quadrature,
    })
}
