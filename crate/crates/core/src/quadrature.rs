//! Composite Simpson integration with node doubling.

use serde::Serialize;

use crate::error::{Error, Result};

pub const MIN_NODES: usize = 4097;
const MAX_NODES: usize = (1 << 22) + 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Quadrature {
    pub value: f64,
    /// Nodes used by the accepted (finer) rule.
    pub nodes: usize,
    /// `|S(2n-1) - S(n)|` between the last two refinements.
    pub doubling_delta: f64,
    /// Richardson estimate of the error of the finer rule, `delta / 15`.
    pub estimated_error: f64,
}

/// Composite Simpson's rule on `nodes` equally spaced points (odd, ≥ 3).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, nodes: usize) -> f64 {
    assert!(nodes >= 3 && nodes % 2 == 1, "Simpson needs an odd node count >= 3");
    let intervals = nodes - 1;
    let h = (b - a) / intervals as f64;
    let mut sum = f(a) + f(b);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + k as f64 * h);
    }
    sum * h / 3.0
}

/// Integrates `f` over `[a, b]`, doubling the node count from
/// [`MIN_NODES`] until two successive rules differ by less than `tolerance`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tolerance: f64) -> Result<Quadrature> {
    let mut nodes = MIN_NODES;
    let mut coarse = simpson(&f, a, b, nodes);
    loop {
        let finer_nodes = 2 * nodes - 1;
        let fine = simpson(&f, a, b, finer_nodes);
        let delta = (fine - coarse).abs();
        if delta < tolerance {
            return Ok(Quadrature {
                value: fine,
                nodes: finer_nodes,
                doubling_delta: delta,
                estimated_error: delta / 15.0,
            });
        }
        if finer_nodes >= MAX_NODES {
            return Err(Error::QuadratureDiverged { nodes: finer_nodes, delta, tolerance });
        }
        nodes = finer_nodes;
        coarse = fine;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn simpson_is_exact_for_cubics() {
        let v = simpson(|x| x * x * x - 2.0 * x + 1.0, -1.0, 2.0, 3);
        assert!((v - 3.75).abs() < 1e-12);
    }

    #[test]
    fn integrates_smooth_function() {
        let q = integrate(|x| x.sin().powi(2), 0.0, PI, 1e-10).unwrap();
        assert!((q.value - PI / 2.0).abs() < 1e-10);
        assert!(q.nodes >= MIN_NODES);
    }

    #[test]
    fn reports_divergence() {
        // oscillates far faster than any admissible grid resolves
        let err = integrate(|x| (1e9 * x).sin().signum(), 0.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(err, Error::QuadratureDiverged { .. }));
    }
}
