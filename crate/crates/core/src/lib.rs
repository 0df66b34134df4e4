//! Multiplierless approximation of the 8-point DFT.
//!
//! The approximate transform replaces the twiddle factors of the DFT with
//! entries from `{±1, ±j, (±1±j)/2}` and factors into seven sparse stages that
//! need 26 complex additions, two halvings and no multiplications. This crate
//! holds the transform itself, exact verification of its factorization,
//! operation counting, beam-pattern analysis for a uniform linear array, a
//! bit-exact 16-bit fixed-point model and a plane-wave array simulator.

pub mod analysis;
pub mod bench;
pub mod counting;
pub mod dyadic;
pub mod error;
pub mod fixedpoint;
pub mod kernel;
pub mod matrix;
pub mod quadrature;
pub mod scalar;
pub mod simulator;
pub mod stages;

pub use counting::{count_direct_dft, count_operations, CountingScalar, InputKind, OpCounts};
pub use dyadic::DyadicGaussian;
pub use error::{Error, Result};
pub use kernel::{exact_dft8, fast_transform, fast_transform_checked};
pub use matrix::{approx_matrix, dft_matrix, TransformMatrix, N};
pub use scalar::Multiplierless;
pub use simulator::{run_beamformer, Beamformer, PlaneWaveScenario};
pub use stages::{verify_factorization, FactorizationReport, StagePlan};
