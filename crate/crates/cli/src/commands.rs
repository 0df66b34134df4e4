use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use adft8::analysis::{
    approximation_mse, array_pattern, beam_peak_angles, orthogonality_deviation, pattern_error,
    total_error_energy, ErrorMeasure, GramEnergy, PsiGrid,
};
use adft8::bench;
use adft8::counting::{count_direct_dft, count_operations, InputKind};
use adft8::fixedpoint::{quantize, write_samples_csv, Q15Sample};
use adft8::simulator::{doa_sweep, run_beamformer, snapshots, Beamformer, PlaneWaveScenario};
use adft8::stages::{verify_plan, Stage, StagePlan};
use adft8::{approx_matrix, dft_matrix, fast_transform, TransformMatrix, N};
use clap::ValueEnum;
use serde::Deserialize;
use serde_json::json;

use crate::csvout::{sig9, write_table};
use crate::report::ReportDocument;
use crate::CliError;

/// Published operation counts for the comparison table: (mults, adds, shifts).
const PUBLISHED_COUNTS: [(&str, [u64; 3]); 5] = [
    ("exact_dft", [256, 240, 0]),
    ("fft_complex_input", [4, 52, 0]),
    ("fft_real_input", [2, 26, 0]),
    ("proposed_complex_input", [0, 52, 4]),
    ("proposed_real_input", [0, 26, 2]),
];

const PUBLISHED_MSE: f64 = 0.686;
const PUBLISHED_DEVIATION: f64 = 0.03;
const PUBLISHED_SDCT_DEVIATION: f64 = 0.20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mutation {
    /// Remove the D1 halving stage.
    DropD1,
    /// Replace the output permutation with the identity.
    IdentityP,
}

pub fn verify(doc: &mut ReportDocument, mutate: Option<Mutation>) {
    let plan = StagePlan::approx_dft8();
    let plan = match mutate {
        None => plan,
        Some(Mutation::DropD1) => plan.without("D1"),
        Some(Mutation::IdentityP) => plan.replacing("P", Stage::identity()),
    };
    let fact = verify_plan(&plan);
    doc.result(
        "factorization",
        json!({
            "stages": fact.stage_count,
            "mismatches": fact.mismatches.len(),
            "mismatched_rows": fact.mismatched_rows(),
            "first_mismatches": fact.mismatches.iter().take(8).map(|m| m.to_string()).collect::<Vec<_>>(),
        }),
    );
    doc.check(
        "factorization",
        fact.is_exact(),
        match fact.mismatches.first() {
            None => format!("stage product equals F_hat exactly ({} stages)", fact.stage_count),
            Some(m) => format!("{} mismatching entries, first at {m}", fact.mismatches.len()),
        },
    );

    let real = count_operations(InputKind::Real);
    let complex = count_operations(InputKind::Complex);
    let direct = count_direct_dft(InputKind::Complex);
    doc.result("counts", json!({ "proposed_real_input": real, "proposed_complex_input": complex, "direct_dft": direct }));
    doc.result(
        "published_counts",
        PUBLISHED_COUNTS.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
    );
    let want = |name: &str| PUBLISHED_COUNTS.iter().find(|(k, _)| *k == name).map(|(_, v)| (v[0], v[1], v[2])).unwrap();
    doc.check("counts_real_input", real.triple() == want("proposed_real_input"), format!("{:?}", real.triple()));
    doc.check("counts_complex_input", complex.triple() == want("proposed_complex_input"), format!("{:?}", complex.triple()));
    doc.check("counts_direct_dft", direct.triple() == want("exact_dft"), format!("{:?}", direct.triple()));

    let mse = approximation_mse();
    let closed = 12.0 - 8.0 * 2f64.sqrt();
    doc.result("mse", json!({ "value": mse, "closed_form": closed, "published": PUBLISHED_MSE }));
    doc.check("mse_published", (mse - PUBLISHED_MSE).abs() <= 1e-3, format!("{mse:.6} vs {PUBLISHED_MSE} +/- 0.001"));
    doc.check("mse_closed_form", (mse - closed).abs() <= 1e-12, format!("|{mse} - (12 - 8 sqrt 2)| <= 1e-12"));

    let dev = orthogonality_deviation(&approx_matrix());
    let dft_dev = orthogonality_deviation(&dft_matrix());
    let gram = GramEnergy::of(&approx_matrix()).expect("approximation is exact");
    let (num, den) = gram.deviation_fraction();
    doc.result(
        "orthogonality",
        json!({
            "deviation": dev,
            "exact_fraction": format!("{num}/{den}"),
            "gram_diagonal_energy": gram.diagonal,
            "gram_total_energy": gram.total,
            "dft_deviation": dft_dev,
            "published": PUBLISHED_DEVIATION,
            "published_within_0_005": (dev - PUBLISHED_DEVIATION).abs() <= 0.005,
            "published_sdct_reference": PUBLISHED_SDCT_DEVIATION,
        }),
    );
    doc.check(
        "orthogonality_exact",
        (dev - gram.deviation()).abs() <= 1e-12,
        format!("floating {dev:.9} equals exact {num}/{den}"),
    );
    doc.check("orthogonality_dft", dft_dev < 1e-12, format!("{dft_dev:.2e} < 1e-12"));
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatrixChoice {
    Exact,
    Approx,
}

impl MatrixChoice {
    fn matrix(self) -> TransformMatrix {
        match self {
            MatrixChoice::Exact => dft_matrix(),
            MatrixChoice::Approx => approx_matrix(),
        }
    }
}

fn grid_for_step(step: f64) -> Result<PsiGrid, CliError> {
    if !(0.01..=1.0).contains(&step) {
        return Err(CliError::Input(format!("--step {step} outside [0.01, 1.0]")));
    }
    PsiGrid::with_step_degrees(step).map_err(|e| CliError::Input(e.to_string()))
}

fn degrees_column(grid: &PsiGrid) -> Vec<String> {
    grid.degrees().map(sig9).collect()
}

fn beam_header(first: &str, suffix: &str) -> Vec<String> {
    std::iter::once(first.to_string()).chain((0..N).map(|i| format!("beam{i}{suffix}"))).collect()
}

pub fn patterns(
    doc: &mut ReportDocument,
    choice: MatrixChoice,
    step: f64,
    omega_t: f64,
) -> Result<Vec<u8>, CliError> {
    let grid = grid_for_step(step)?;
    let m = choice.matrix();
    let mut columns = Vec::with_capacity(N);
    let mut betas = Vec::with_capacity(N);
    for i in 0..N {
        let p = array_pattern(&m, i, &grid, omega_t).map_err(|e| CliError::Input(e.to_string()))?;
        betas.push(p.beta);
        columns.push(p.values);
    }
    let peaks = beam_peak_angles(&m, &grid, omega_t).map_err(|e| CliError::Input(e.to_string()))?;
    let psi = degrees_column(&grid);
    let rows: Vec<Vec<String>> = (0..grid.len())
        .map(|r| std::iter::once(psi[r].clone()).chain(columns.iter().map(|c| sig9(c[r]))).collect())
        .collect();

    doc.result(
        "patterns",
        json!({
            "matrix": format!("{choice:?}").to_lowercase(),
            "step_deg": step,
            "omega_t": omega_t,
            "rows": rows.len(),
            "beta": betas,
            "peak_deg": peaks.iter().map(|p| p.psi_deg).collect::<Vec<_>>(),
        }),
    );
    csv_bytes(&beam_header("psi_deg", ""), &rows)
}

pub fn error(doc: &mut ReportDocument, step: f64, omega_t: f64) -> Result<Vec<u8>, CliError> {
    let grid = grid_for_step(step)?;
    let mut columns = Vec::with_capacity(N);
    for i in 0..N {
        columns.push(pattern_error(i, &grid, omega_t).map_err(|e| CliError::Input(e.to_string()))?);
    }
    let psi = degrees_column(&grid);
    let rows: Vec<Vec<String>> = (0..grid.len())
        .map(|r| std::iter::once(psi[r].clone()).chain(columns.iter().map(|c| sig9(c[r]))).collect())
        .collect();

    let energy = total_error_energy(ErrorMeasure::TransferFunction).map_err(|e| CliError::Input(e.to_string()))?;
    let pattern_energy =
        total_error_energy(ErrorMeasure::Pattern { omega_t }).map_err(|e| CliError::Input(e.to_string()))?;
    let e = energy.energies;
    doc.result(
        "error_energy",
        json!({
            "measure": "transfer_function",
            "eps": e,
            "total": energy.total,
            "rule": energy.rule,
            "nodes": energy.quadrature.iter().map(|q| q.nodes).max(),
            "max_doubling_delta": energy.max_doubling_delta(),
            "max_estimated_error": energy.max_estimated_error(),
        }),
    );
    doc.result(
        "pattern_error_energy",
        json!({
            "measure": "normalized_pattern",
            "omega_t": omega_t,
            "eps": pattern_energy.energies,
            "total": pattern_energy.total,
            "max_doubling_delta": pattern_energy.max_doubling_delta(),
        }),
    );
    doc.result("samples", json!({ "rows": rows.len(), "step_deg": step }));
    let even = (0..N).step_by(2).all(|i| e[i].abs() <= 1e-8);
    let odd = (1..N).step_by(2).all(|i| (e[i] - 1.08).abs() <= 0.01);
    doc.check("even_rows_zero", even, "eps_i <= 1e-8 for even i");
    doc.check("odd_rows_1_08", odd, "eps_i = 1.08 +/- 0.01 for odd i");
    doc.check("total_4_32", (energy.total - 4.32).abs() <= 0.02, format!("total {:.6} vs 4.32 +/- 0.02", energy.total));
    doc.check(
        "quadrature_converged",
        energy.max_doubling_delta() < 1e-5,
        format!("node-doubling delta {:.1e} < 1e-5", energy.max_doubling_delta()),
    );
    csv_bytes(&beam_header("psi_deg", "_error"), &rows)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Single,
    Sweep,
}

/// Scenario document: the plane-wave fields plus the run mode.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub psi: Option<f64>,
    pub psi_deg: Option<f64>,
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
    #[serde(default)]
    pub mode: Mode,
    #[serde(default = "default_sweep_step")]
    pub sweep_step_deg: f64,
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

fn default_sweep_step() -> f64 {
    0.5
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("scenario: {e}")))
    }

    fn scenario(&self, seed_override: Option<u64>) -> Result<PlaneWaveScenario, CliError> {
        let psi = match (self.psi, self.psi_deg, self.mode) {
            (Some(_), Some(_), _) => return Err(CliError::Input("scenario: give either psi or psi_deg, not both".into())),
            (Some(p), None, _) => p,
            (None, Some(d), _) => d.to_radians(),
            (None, None, Mode::Sweep) => 0.0,
            (None, None, Mode::Single) => return Err(CliError::Input("scenario: missing field `psi` (or `psi_deg`)".into())),
        };
        let s = PlaneWaveScenario {
            psi,
            omega_t: self.omega_t,
            amplitude: self.amplitude,
            noise_sigma: self.noise_sigma,
            snapshots: self.snapshots,
            seed: seed_override.unwrap_or(self.seed),
        };
        s.validate().map_err(|e| CliError::Input(format!("scenario: {e}")))?;
        Ok(s)
    }
}

fn power_row(psi: f64, power: &[f64; N], argmax: usize) -> Vec<String> {
    std::iter::once(sig9(psi.to_degrees()))
        .chain(power.iter().map(|&p| sig9(p)))
        .chain(std::iter::once(argmax.to_string()))
        .collect()
}

pub fn simulate(
    doc: &mut ReportDocument,
    scenario_path: &Path,
    which: Beamformer,
    seed: Option<u64>,
    samples_out: Option<&PathBuf>,
) -> Result<Vec<u8>, CliError> {
    let text = fs::read_to_string(scenario_path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", scenario_path.display())))?;
    let file = ScenarioFile::parse(&text)?;
    let scenario = file.scenario(seed)?;
    let header: Vec<String> = beam_header("psi_deg", "_power").into_iter().chain(["argmax".to_string()]).collect();
    let run_err = |e: adft8::Error| CliError::Input(e.to_string());

    let rows = match file.mode {
        Mode::Single => {
            let out = run_beamformer(&scenario, which).map_err(run_err)?;
            doc.result(
                "simulation",
                json!({
                    "mode": "single",
                    "beamformer": which.to_string(),
                    "psi_deg": scenario.psi.to_degrees(),
                    "snapshots": scenario.snapshots,
                    "power": out.power,
                    "argmax": out.argmax(),
                }),
            );
            if which == Beamformer::Fixedpoint {
                fixed_vs_float(doc, &scenario, &out.outputs, samples_out)?;
            } else if samples_out.is_some() {
                return Err(CliError::Input("--samples-out needs --which fixedpoint".into()));
            }
            vec![power_row(scenario.psi, &out.power, out.argmax())]
        }
        Mode::Sweep => {
            if samples_out.is_some() {
                return Err(CliError::Input("--samples-out is only available in single mode".into()));
            }
            let grid = PsiGrid::with_step_degrees(file.sweep_step_deg).map_err(|e| CliError::Input(e.to_string()))?;
            let sweep = doa_sweep(&grid, which, &scenario).map_err(run_err)?;
            let labels: Vec<usize> = sweep.iter().map(|p| p.argmax).collect();
            let mut plateaus = labels.clone();
            plateaus.dedup();
            let mut distinct = labels.clone();
            distinct.sort_unstable();
            distinct.dedup();
            doc.result(
                "simulation",
                json!({
                    "mode": "sweep",
                    "beamformer": which.to_string(),
                    "step_deg": file.sweep_step_deg,
                    "points": sweep.len(),
                    "plateau_sequence": plateaus,
                    "distinct_beams": distinct.len(),
                }),
            );
            sweep.iter().map(|p| power_row(p.psi, &p.power, p.argmax)).collect()
        }
    };
    csv_bytes(&header, &rows)
}

fn fixed_vs_float(
    doc: &mut ReportDocument,
    scenario: &PlaneWaveScenario,
    fixed: &[[num_complex::Complex64; N]],
    samples_out: Option<&PathBuf>,
) -> Result<(), CliError> {
    let snaps = snapshots(scenario).map_err(|e| CliError::Input(e.to_string()))?;
    let mut quantized: Vec<[Q15Sample; N]> = Vec::with_capacity(snaps.len());
    for s in &snaps {
        let mut q = [Q15Sample::default(); N];
        for (slot, z) in q.iter_mut().zip(s) {
            *slot = quantize(*z).map_err(|e| CliError::Input(e.to_string()))?;
        }
        quantized.push(q);
    }
    let lsb = 32768.0;
    let mut worst: f64 = 0.0;
    for (q, f) in quantized.iter().zip(fixed) {
        let float = fast_transform(q.map(Q15Sample::to_complex64));
        for (a, b) in f.iter().zip(&float) {
            worst = worst.max(((a.re - b.re) * lsb).abs()).max(((a.im - b.im) * lsb).abs());
        }
    }
    doc.result("fixedpoint", json!({ "max_lsb_vs_float": worst }));
    doc.check("fixedpoint_within_2_lsb", worst <= 2.0, format!("{worst} LSB"));
    if let Some(path) = samples_out {
        let mut buf = Vec::new();
        write_samples_csv(&mut buf, &quantized).map_err(|e| CliError::Io(e.to_string()))?;
        write_output(Some(path), &buf)?;
    }
    Ok(())
}

pub fn bench_cmd(doc: &mut ReportDocument, trials: usize, repeats: usize, seed: u64) -> Result<(), CliError> {
    if trials < 1000 {
        return Err(CliError::Input(format!("--trials {trials} must be at least 1000")));
    }
    let r = bench::compare(trials, repeats.max(1), seed);
    doc.result(
        "bench",
        json!({
            "trials": r.trials,
            "repeats": r.repeats,
            "fast_ns": r.fast_ns as u64,
            "direct_ns": r.direct_ns as u64,
            "speedup": r.speedup,
            "max_abs_diff": r.max_abs_diff,
        }),
    );
    doc.result(
        "op_counts_per_transform",
        json!({
            "proposed_complex_input": { "mults": r.fast_counts.mults, "adds": r.fast_counts.adds, "shifts": r.fast_counts.shifts },
            "direct_matrix_product": { "mults": r.direct_counts.mults, "adds": r.direct_counts.adds, "shifts": r.direct_counts.shifts },
        }),
    );
    doc.check("speedup", r.speedup > 1.0, format!("{:.2}x on the same batch", r.speedup));
    doc.check("outputs_agree", r.max_abs_diff < 1e-12, format!("max |fast - direct| = {:.2e}", r.max_abs_diff));
    Ok(())
}

fn csv_bytes(header: &[String], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write_table(&mut buf, header, rows).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(buf)
}

pub fn write_output(path: Option<&PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    use std::io::Write;
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout().write_all(bytes).map_err(|e| CliError::Io(e.to_string())),
    }
}
