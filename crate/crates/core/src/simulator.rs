//! Plane-wave simulator for an 8-element uniform linear array.
//!
//! Element `n` sees `v_n = A·exp(-jωn)` with spatial frequency
//! `ω = -ω_t·sin ψ`, so beam `i` of a transform `F` outputs `A·H_i(ω; F)`:
//! the beam looking at `ψ` in the pattern analysis is the one that lights up
//! for a wave arriving from `ψ`. Element spacing is half a wavelength at
//! `ω_t = π`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::analysis::PsiGrid;
use crate::error::{Error, Result};
use crate::fixedpoint::{fixed_fast_transform, quantize};
use crate::kernel::{exact_dft8, fast_transform};
use crate::matrix::N;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneWaveScenario {
    /// Arrival angle from broadside, radians.
    pub psi: f64,
    #[serde(default = "default_omega_t")]
    pub omega_t: f64,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default = "default_snapshots")]
    pub snapshots: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_omega_t() -> f64 {
    PI
}

fn default_amplitude() -> f64 {
    0.5
}

fn default_snapshots() -> usize {
    1
}

impl PlaneWaveScenario {
    pub fn new(psi: f64) -> Self {
        Self {
            psi,
            omega_t: default_omega_t(),
            amplitude: default_amplitude(),
            noise_sigma: 0.0,
            snapshots: 1,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidScenario(msg));
        if !(self.psi.is_finite() && self.psi.abs() <= FRAC_PI_2 + 1e-12) {
            return bad(format!("psi = {} outside [-pi/2, pi/2]", self.psi));
        }
        if !(self.omega_t > 0.0 && self.omega_t <= PI) {
            return bad(format!("omega_t = {} outside (0, pi]", self.omega_t));
        }
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            return bad(format!("amplitude = {} must be finite and non-negative", self.amplitude));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return bad(format!("noise_sigma = {} must be finite and non-negative", self.noise_sigma));
        }
        if self.snapshots == 0 {
            return bad("snapshots must be at least 1".into());
        }
        Ok(())
    }

    pub fn spatial_frequency(&self) -> f64 {
        -self.omega_t * self.psi.sin()
    }
}

/// Noiseless array response to a unit-phase plane wave.
pub fn steering_vector(psi: f64, omega_t: f64, amplitude: f64) -> [Complex64; N] {
    let omega = -omega_t * psi.sin();
    std::array::from_fn(|n| Complex64::from_polar(amplitude, -omega * n as f64))
}

/// All snapshots of a scenario; noise is i.i.d. complex Gaussian drawn from
/// a generator seeded with `scenario.seed`.
pub fn snapshots(scenario: &PlaneWaveScenario) -> Result<Vec<[Complex64; N]>> {
    scenario.validate()?;
    let clean = steering_vector(scenario.psi, scenario.omega_t, scenario.amplitude);
    if scenario.noise_sigma == 0.0 {
        return Ok(vec![clean; scenario.snapshots]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    let normal = Normal::new(0.0, scenario.noise_sigma).expect("validated sigma");
    Ok((0..scenario.snapshots)
        .map(|_| clean.map(|c| c + Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng))))
        .collect())
}

/// First snapshot of the scenario.
pub fn steering_snapshot(scenario: &PlaneWaveScenario) -> Result<[Complex64; N]> {
    let one = PlaneWaveScenario { snapshots: 1, ..scenario.clone() };
    Ok(snapshots(&one)?[0])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Beamformer {
    Exact,
    Approximate,
    Fixedpoint,
}

impl Beamformer {
    pub const ALL: [Beamformer; 3] = [Beamformer::Exact, Beamformer::Approximate, Beamformer::Fixedpoint];

    fn transform(self, v: &[Complex64; N]) -> Result<[Complex64; N]> {
        match self {
            Beamformer::Exact => exact_dft8(v),
            Beamformer::Approximate => Ok(fast_transform(*v)),
            Beamformer::Fixedpoint => {
                let mut q = [Default::default(); N];
                for (slot, z) in q.iter_mut().zip(v) {
                    *slot = quantize(*z)?;
                }
                Ok(fixed_fast_transform(&q).map(|acc| acc.to_complex64()))
            }
        }
    }
}

impl fmt::Display for Beamformer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Beamformer::Exact => "exact",
            Beamformer::Approximate => "approximate",
            Beamformer::Fixedpoint => "fixedpoint",
        })
    }
}

impl FromStr for Beamformer {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Beamformer::Exact),
            "approximate" | "approx" => Ok(Beamformer::Approximate),
            "fixedpoint" | "fixed" => Ok(Beamformer::Fixedpoint),
            other => Err(format!("unknown beamformer '{other}' (exact | approximate | fixedpoint)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BeamOutputs {
    /// Per snapshot, the eight beam outputs.
    pub outputs: Vec<[Complex64; N]>,
    /// Per beam, `|V_i|²` averaged over snapshots.
    pub power: [f64; N],
}

impl BeamOutputs {
    pub fn argmax(&self) -> usize {
        argmax(&self.power)
    }
}

fn argmax(p: &[f64; N]) -> usize {
    (1..N).fold(0, |best, i| if p[i] > p[best] { i } else { best })
}

pub fn run_beamformer(scenario: &PlaneWaveScenario, which: Beamformer) -> Result<BeamOutputs> {
    let snaps = snapshots(scenario)?;
    let mut outputs = Vec::with_capacity(snaps.len());
    let mut power = [0.0; N];
    for s in &snaps {
        let out = which.transform(s)?;
        for (p, o) in power.iter_mut().zip(&out) {
            *p += o.norm_sqr();
        }
        outputs.push(out);
    }
    let count = snaps.len() as f64;
    power.iter_mut().for_each(|p| *p /= count);
    Ok(BeamOutputs { outputs, power })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub psi: f64,
    pub power: [f64; N],
    pub argmax: usize,
}

/// Runs the template scenario at every grid angle. Each angle gets its own
/// seed derived from the template seed and the grid index, so the sweep is
/// reproducible and points are independent.
pub fn doa_sweep(grid: &PsiGrid, which: Beamformer, template: &PlaneWaveScenario) -> Result<Vec<SweepPoint>> {
    template.validate()?;
    grid.samples()
        .iter()
        .enumerate()
        .map(|(k, &psi)| {
            let scenario = PlaneWaveScenario { psi, seed: derive_seed(template.seed, k as u64), ..template.clone() };
            let out = run_beamformer(&scenario, which)?;
            Ok(SweepPoint { psi, power: out.power, argmax: out.argmax() })
        })
        .collect()
}

fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Arrival angle that beam `i` of the exact DFT points at, if it lies in
/// the visible range: `ω_t·sin ψ = 2π·i/8`, with `i` wrapped to `[-4, 4]`.
/// At `ω_t = π`, beam 4 is endfire and reported at `+π/2`.
pub fn beam_center(i: usize, omega_t: f64) -> Option<f64> {
    let wrapped = if i <= N / 2 { i as f64 } else { i as f64 - N as f64 };
    let s = 2.0 * PI * wrapped / (N as f64 * omega_t);
    (s.abs() <= 1.0).then(|| s.asin())
}
