//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::f64::consts::PI;
use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use adft8::analysis::{
    approximation_mse, beam_peak_angles, orthogonality_deviation, total_error_energy, ErrorMeasure, PsiGrid,
    DEFAULT_OMEGA_T, ENERGY_TOLERANCE,
};
use adft8::bench;
use adft8::fixedpoint::{exact_reference, fixed_fast_transform, Q15Sample};
use adft8::simulator::{beam_center, run_beamformer, Beamformer, PlaneWaveScenario};
use adft8::{
    approx_matrix, count_operations, dft_matrix, fast_transform, verify_factorization, DyadicGaussian, InputKind, N,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn check(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn factorization() -> Outcome {
    let (report, took) = timed(verify_factorization);
    check(
        report.is_exact() && took < Duration::from_secs(1),
        format!("{} mismatches over {} stages in {:.3?}", report.mismatches.len(), report.stage_count, took),
    )
}

fn operation_counts() -> Outcome {
    let real = count_operations(InputKind::Real);
    let complex = count_operations(InputKind::Complex);
    check(
        real.triple() == (0, 26, 2) && complex.triple() == (0, 52, 4),
        format!(
            "real {:?} (adders {} + merges {}), complex {:?}",
            real.triple(),
            real.adder_adds,
            real.merges,
            complex.triple()
        ),
    )
}

fn mse() -> Outcome {
    let v = approximation_mse();
    let closed = 12.0 - 8.0 * 2f64.sqrt();
    check(
        (v - 0.686).abs() <= 0.001 && (v - closed).abs() <= 1e-12,
        format!("mse = {v:.12}, 12 - 8*sqrt(2) = {closed:.12}"),
    )
}

fn orthogonality() -> Outcome {
    let approx = orthogonality_deviation(&approx_matrix());
    let exact = orthogonality_deviation(&dft_matrix());
    check(
        (approx - 0.03).abs() <= 0.005 && exact < 1e-12,
        format!("deviation(F_hat) = {approx:.6} (target 0.03 +/- 0.005), deviation(F) = {exact:.2e}"),
    )
}

fn error_energies() -> Outcome {
    let (report, took) = timed(|| total_error_energy(ErrorMeasure::TransferFunction));
    let report = match report {
        Ok(r) => r,
        Err(e) => return check(false, e.to_string()),
    };
    let e = report.energies;
    let even_ok = (0..N).step_by(2).all(|i| e[i].abs() <= 1e-8);
    let odd_ok = (1..N).step_by(2).all(|i| (e[i] - 1.08).abs() <= 0.01);
    let total_ok = (report.total - 4.32).abs() <= 0.02;
    let converged = report.max_doubling_delta() < ENERGY_TOLERANCE;
    check(
        even_ok && odd_ok && total_ok && converged && took < Duration::from_secs(5),
        format!(
            "eps = [{}], total = {:.6}, max doubling delta = {:.1e}, {:.3?}",
            e.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(", "),
            report.total,
            report.max_doubling_delta(),
            took
        ),
    )
}

fn beam_angles() -> Outcome {
    let published = [0.00, 14.47, 30.00, 48.59, 90.00, -48.59, -30.00, -14.47];
    let grid = PsiGrid::peak_default();
    let step_deg = grid.step().to_degrees();
    let exact = beam_peak_angles(&dft_matrix(), &grid, DEFAULT_OMEGA_T).expect("valid grid");
    let approx = beam_peak_angles(&approx_matrix(), &grid, DEFAULT_OMEGA_T).expect("valid grid");
    let within = |peaks: &[adft8::analysis::PeakAngle; N]| {
        peaks.iter().zip(published).all(|(p, w)| (p.psi_deg - w).abs() <= 0.05)
    };
    let agree = exact.iter().zip(&approx).all(|(e, a)| (e.psi_deg - a.psi_deg).abs() <= step_deg);
    check(
        within(&exact) && within(&approx) && agree,
        format!(
            "approx peaks = [{}] deg",
            approx.iter().map(|p| format!("{:.3}", p.psi_deg)).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn kernel_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let m = approx_matrix();
    let mut worst_float: f64 = 0.0;
    let mut exact_failures = 0;
    for _ in 0..1000 {
        let v: [DyadicGaussian; N] = std::array::from_fn(|_| {
            DyadicGaussian::new(rng.random_range(-4096..4096), rng.random_range(-4096..4096), rng.random_range(0..12))
        });
        if fast_transform(v) != m.apply_exact(&v).expect("exact matrix") {
            exact_failures += 1;
        }
        let vf = v.map(DyadicGaussian::to_complex64);
        let fast = fast_transform(vf);
        let direct = m.apply(&vf);
        for (a, b) in fast.iter().zip(&direct) {
            worst_float = worst_float.max((a - b).norm());
        }
    }
    check(
        exact_failures == 0 && worst_float <= 1e-12,
        format!("exact mismatches = {exact_failures}, max float diff = {worst_float:.2e}"),
    )
}

fn simulator_selectivity() -> Outcome {
    let mut worst_leak: f64 = 0.0;
    let mut argmax_ok = true;
    for i in 0..N {
        let psi = beam_center(i, PI).expect("visible at omega_t = pi");
        let s = PlaneWaveScenario::new(psi);
        let exact = run_beamformer(&s, Beamformer::Exact).expect("valid scenario");
        let approx = run_beamformer(&s, Beamformer::Approximate).expect("valid scenario");
        for (k, &p) in exact.power.iter().enumerate() {
            if k != i {
                worst_leak = worst_leak.max(p / exact.power[i]);
            }
        }
        argmax_ok &= exact.argmax() == i && approx.argmax() == i;
    }
    check(
        worst_leak < 1e-10 && argmax_ok,
        format!("max off-beam relative power = {worst_leak:.2e}, argmax agreement = {argmax_ok}"),
    )
}

fn fixed_point() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst: f64 = 0.0;
    for _ in 0..100_000 {
        let v: [Q15Sample; N] = std::array::from_fn(|_| Q15Sample::new(rng.random(), rng.random()));
        let fixed = fixed_fast_transform(&v);
        for (f, e) in fixed.iter().zip(exact_reference(&v)) {
            worst = worst.max((f.re as f64 - e.re).abs()).max((f.im as f64 - e.im).abs());
        }
    }

    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut overflows = 0;
    for pattern in 0u32..(1 << 16) {
        let word = |bit: u32| if pattern >> bit & 1 == 1 { i16::MIN } else { i16::MAX };
        let v: [Q15Sample; N] = std::array::from_fn(|n| Q15Sample::new(word(n as u32), word(n as u32 + 8)));
        if panic::catch_unwind(|| fixed_fast_transform(&v)).is_err() {
            overflows += 1;
        }
    }
    panic::set_hook(hook);

    check(
        worst <= 2.0 && overflows == 0,
        format!("max |fixed - exact| = {worst} LSB over 1e5 vectors, corner overflows = {overflows}/65536"),
    )
}

fn bench_substitute() -> Outcome {
    let counts_ok = operation_counts().passed;
    let report = bench::compare(20_000, 5, 9);
    check(
        counts_ok && report.speedup > 1.0 && report.max_abs_diff < 1e-12,
        format!(
            "op counts ok = {counts_ok}, speedup = {:.2}x (fast {} ns vs direct {} ns, batch {})",
            report.speedup, report.fast_ns, report.direct_ns, report.trials
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 factorization exactness", factorization),
        ("2 operation counts", operation_counts),
        ("3 mean squared error", mse),
        ("4 orthogonality deviation", orthogonality),
        ("5 error energies", error_energies),
        ("6 beam angles", beam_angles),
        ("7 kernel-oracle equivalence", kernel_oracle),
        ("8 simulator selectivity", simulator_selectivity),
        ("9 fixed-point bound", fixed_point),
        ("10 op-count proof and benchmark", bench_substitute),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = run();
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{tag} [{name}] {}", outcome.detail);
        failed += usize::from(!outcome.passed);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

