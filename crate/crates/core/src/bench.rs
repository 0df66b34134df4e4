//! Wall-clock comparison of the fast kernel against the direct product.

use std::hint::black_box;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::counting::{count_direct_dft, count_operations, InputKind, OpCounts};
use crate::kernel::fast_transform;
use crate::matrix::{approx_matrix, N};

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub trials: usize,
    pub repeats: usize,
    /// Best-of-repeats time for the whole batch.
    pub fast_ns: u128,
    pub direct_ns: u128,
    pub speedup: f64,
    /// Largest output difference between the two paths over the batch.
    pub max_abs_diff: f64,
    pub fast_counts: OpCounts,
    pub direct_counts: OpCounts,
}

pub fn random_batch(trials: usize, seed: u64) -> Vec<[Complex64; N]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            std::array::from_fn(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        })
        .collect()
}

fn best_of<F: FnMut()>(repeats: usize, mut f: F) -> Duration {
    (0..repeats)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed()
        })
        .min()
        .unwrap_or_default()
}

/// Times both paths on the same batch of `trials` random vectors. Each path
/// is run `repeats` times and the fastest run is kept.
pub fn compare(trials: usize, repeats: usize, seed: u64) -> BenchReport {
    let batch = random_batch(trials, seed);
    let matrix = approx_matrix();
    let mut sink = vec![[Complex64::new(0.0, 0.0); N]; trials];

    let fast = best_of(repeats, || {
        for (out, v) in sink.iter_mut().zip(&batch) {
            *out = fast_transform(black_box(*v));
        }
        black_box(&sink);
    });
    let fast_out = sink.clone();

    let direct = best_of(repeats, || {
        for (out, v) in sink.iter_mut().zip(&batch) {
            *out = matrix.apply(black_box(v));
        }
        black_box(&sink);
    });

    let max_abs_diff = fast_out
        .iter()
        .zip(&sink)
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
        .fold(0.0, f64::max);

    BenchReport {
        trials,
        repeats,
        fast_ns: fast.as_nanos(),
        direct_ns: direct.as_nanos(),
        speedup: direct.as_secs_f64() / fast.as_secs_f64().max(f64::MIN_POSITIVE),
        max_abs_diff,
        fast_counts: count_operations(InputKind::Complex),
        direct_counts: count_direct_dft(InputKind::Complex),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_agree_and_counts_attached() {
        let r = compare(1000, 2, 3);
        assert!(r.max_abs_diff < 1e-12);
        assert_eq!(r.fast_counts.triple(), (0, 52, 4));
        assert_eq!(r.direct_counts.triple(), (256, 240, 0));
        assert_eq!(r.trials, 1000);
    }
}
