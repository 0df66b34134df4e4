//! Beam-space analysis of a transform applied across a uniform linear array.
//!
//! Row `i` of a transform is read as an FIR filter with transfer function
//! `H_i(ω) = Σ_k f[i][k]·exp(-jkω)`. Across the array the spatial frequency
//! is `ω = -ω_t·sin ψ`, with `ψ` the arrival angle from broadside, which
//! turns each transfer function into a beam pattern over `ψ ∈ [-π/2, π/2]`.

mod energy;
mod metrics;

pub use energy::{
    error_energy, pattern_error, total_error_energy, ErrorMeasure, ErrorReport, ENERGY_TOLERANCE,
};
pub use metrics::{approximation_mse, matrix_mse, orthogonality_deviation, GramEnergy};

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{TransformMatrix, N};

/// Temporal frequency at which the array spacing is half a wavelength.
pub const DEFAULT_OMEGA_T: f64 = PI;

/// Uniform grid over `ψ ∈ [-π/2, π/2]`, endpoints included.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsiGrid {
    samples: Vec<f64>,
    step: f64,
}

impl PsiGrid {
    pub fn uniform(points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::DegenerateGrid(points));
        }
        let last = (points - 1) as f64;
        // linear interpolation keeps the endpoints and the centre exact
        let samples = (0..points)
            .map(|k| -FRAC_PI_2 + PI * (k as f64 / last))
            .collect();
        Ok(Self { samples, step: PI / last })
    }

    /// Grid with the given spacing in degrees, which must divide 180°.
    pub fn with_step_degrees(step_deg: f64) -> Result<Self> {
        if !(step_deg.is_finite() && step_deg > 0.0) {
            return Err(Error::InvalidGrid(format!("step {step_deg} must be positive")));
        }
        let intervals = 180.0 / step_deg;
        let rounded = intervals.round();
        if (intervals - rounded).abs() > 1e-6 * rounded.max(1.0) {
            return Err(Error::InvalidGrid(format!("step {step_deg} does not divide 180 degrees")));
        }
        Self::uniform(rounded as usize + 1)
    }

    /// 0.1° spacing, 1801 points.
    pub fn pattern_default() -> Self {
        Self::uniform(1801).expect("valid")
    }

    /// 0.05° spacing, 3601 points.
    pub fn peak_default() -> Self {
        Self::uniform(3601).expect("valid")
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Grid step in radians.
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn degrees(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|p| p.to_degrees())
    }
}

/// `H_i(ω) = Σ_k f[i][k]·exp(-jkω)`.
pub fn transfer_function(matrix: &TransformMatrix, i: usize, omega: f64) -> Result<Complex64> {
    if i >= N {
        return Err(Error::RowOutOfRange(i));
    }
    Ok(row_response(matrix.row(i), omega))
}

pub(crate) fn row_response(row: &[Complex64; N], omega: f64) -> Complex64 {
    row.iter()
        .enumerate()
        .map(|(k, f)| f * Complex64::from_polar(1.0, -(k as f64) * omega))
        .sum()
}

pub(crate) fn check_omega_t(omega_t: f64) -> Result<()> {
    if omega_t > 0.0 && omega_t <= PI {
        Ok(())
    } else {
        Err(Error::InvalidOmegaT(omega_t))
    }
}

/// Unnormalized beam response `|H_i(-ω_t·sin ψ)|`.
pub fn beam_response(row: &[Complex64; N], psi: f64, omega_t: f64) -> f64 {
    row_response(row, -omega_t * psi.sin()).norm()
}

/// One row's magnitude response, normalized by its maximum over the grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BeamPattern {
    pub row: usize,
    pub grid: PsiGrid,
    pub values: Vec<f64>,
    /// Normalization factor: the largest unnormalized response on the grid.
    pub beta: f64,
}

impl BeamPattern {
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

pub fn array_pattern(
    matrix: &TransformMatrix,
    i: usize,
    grid: &PsiGrid,
    omega_t: f64,
) -> Result<BeamPattern> {
    if i >= N {
        return Err(Error::RowOutOfRange(i));
    }
    if grid.len() < 2 {
        return Err(Error::DegenerateGrid(grid.len()));
    }
    check_omega_t(omega_t)?;
    let raw: Vec<f64> =
        grid.samples().iter().map(|&p| beam_response(matrix.row(i), p, omega_t)).collect();
    let beta = raw.iter().copied().fold(0.0, f64::max);
    let values = if beta > 0.0 { raw.iter().map(|r| r / beta).collect() } else { raw };
    Ok(BeamPattern { row: i, grid: grid.clone(), values, beta })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeakAngle {
    pub row: usize,
    pub psi_deg: f64,
    /// Peak response `|H_i|` at the reported angle.
    pub response: f64,
    /// The maximum is attained at more than one separated angle (endfire
    /// rows peak at both ±90°); the largest angle is reported.
    pub tie: bool,
}

/// Relative tolerance under which two grid maxima count as the same peak value.
const TIE_TOLERANCE: f64 = 1e-9;

/// Look direction of each row: the angle maximizing the unnormalized
/// response, located on the grid and refined by golden-section search.
pub fn beam_peak_angles(
    matrix: &TransformMatrix,
    grid: &PsiGrid,
    omega_t: f64,
) -> Result<[PeakAngle; N]> {
    if grid.len() < 2 {
        return Err(Error::DegenerateGrid(grid.len()));
    }
    check_omega_t(omega_t)?;
    let mut peaks = [PeakAngle { row: 0, psi_deg: 0.0, response: 0.0, tie: false }; N];
    for (i, slot) in peaks.iter_mut().enumerate() {
        *slot = row_peak(matrix.row(i), i, grid, omega_t);
    }
    Ok(peaks)
}

fn row_peak(row: &[Complex64; N], i: usize, grid: &PsiGrid, omega_t: f64) -> PeakAngle {
    let psi = grid.samples();
    let resp: Vec<f64> = psi.iter().map(|&p| beam_response(row, p, omega_t)).collect();
    let best = resp.iter().copied().fold(0.0, f64::max);

    // local maxima whose value ties the global one
    let candidates: Vec<usize> = (0..resp.len())
        .filter(|&k| {
            let left = k == 0 || resp[k] >= resp[k - 1];
            let right = k + 1 == resp.len() || resp[k] >= resp[k + 1];
            left && right && resp[k] >= best * (1.0 - TIE_TOLERANCE)
        })
        .collect();
    let distinct = candidates.windows(2).filter(|w| w[1] - w[0] > 1).count() + 1;
    let k = *candidates.last().expect("a maximum exists");

    let lo = psi[k.saturating_sub(1)];
    let hi = psi[(k + 1).min(psi.len() - 1)];
    let refined = golden_max(|p| beam_response(row, p, omega_t), lo, hi);
    let (psi_star, response) = [(psi[k], resp[k]), (refined, beam_response(row, refined, omega_t))]
        .into_iter()
        .fold((psi[k], resp[k]), |acc, c| if c.1 > acc.1 { c } else { acc });

    PeakAngle { row: i, psi_deg: psi_star.to_degrees(), response, tie: distinct > 1 }
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..100 {
        if (b - a).abs() < 1e-13 {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    [a, b, mid].into_iter().fold(mid, |best, x| if f(x) > f(best) { x } else { best })
}
