//! Deterministic experiment harness: random-state instances, phase and
//! amplitude grids, population traces, and their CSV encodings.
//!
//! Random instance `i` draws from a ChaCha8 generator seeded with the
//! master seed and switched to stream `i`, so every instance is a pure
//! function of `(seed, i)` and results do not depend on scheduling.

use std::f64::consts::PI;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::device::DeviceParams;
use crate::error::{Error, Result};
use crate::gates::{Mode, PopulationTrace};
use crate::linalg::{basis_label, DIM};
use crate::swap_test::{QubitState, SwapTest, SwapTestResult};

pub const EXPERIMENT_HEADER: &str = "param1,param2,p0,p1,estimate,fidelity,zeta";
pub const HISTOGRAM_BIN_WIDTH: f64 = 0.005;
pub const HISTOGRAM_RANGE: f64 = 0.2;
pub const DEFAULT_GRID: usize = 101;
pub const GENERATOR: &str =
    "ChaCha8Rng (rand_chacha 0.9); seed_from_u64(seed), stream = instance index";
pub const STATE_DISTRIBUTION: &str =
    "Haar on the Bloch sphere: cos(theta) ~ U[-1,1], phi ~ U[0,2pi)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Random,
    Phase,
    Amplitude,
}

/// Input parameters of one swap-test evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InputParams {
    /// Bloch angles of both sampled states.
    Random {
        theta1: f64,
        phi1: f64,
        theta2: f64,
        phi2: f64,
    },
    Phase {
        eta1: f64,
        eta2: f64,
    },
    Amplitude {
        theta1: f64,
        theta2: f64,
    },
}

impl InputParams {
    /// The two values written to the `param1,param2` CSV columns. For random
    /// instances these are the polar angles.
    pub fn columns(&self) -> (f64, f64) {
        match *self {
            InputParams::Random { theta1, theta2, .. } => (theta1, theta2),
            InputParams::Phase { eta1, eta2 } => (eta1, eta2),
            InputParams::Amplitude { theta1, theta2 } => (theta1, theta2),
        }
    }

    pub fn states(&self) -> (QubitState, QubitState) {
        match *self {
            InputParams::Random {
                theta1,
                phi1,
                theta2,
                phi2,
            } => (
                QubitState::from_bloch(theta1, phi1),
                QubitState::from_bloch(theta2, phi2),
            ),
            InputParams::Phase { eta1, eta2 } => {
                (QubitState::equator(eta1), QubitState::equator(eta2))
            }
            InputParams::Amplitude { theta1, theta2 } => {
                (QubitState::real(theta1), QubitState::real(theta2))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentRecord {
    pub inputs: InputParams,
    pub result: SwapTestResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub range_max: f64,
    pub counts: Vec<u64>,
    /// Values at or beyond `range_max`.
    pub overflow: u64,
}

impl Histogram {
    pub fn new(values: impl IntoIterator<Item = f64>, bin_width: f64, range_max: f64) -> Self {
        let bins = (range_max / bin_width).round() as usize;
        let mut counts = vec![0; bins];
        let mut overflow = 0;
        for v in values {
            let bin = (v / bin_width).floor();
            if bin >= 0.0 && (bin as usize) < bins {
                counts[bin as usize] += 1;
            } else {
                overflow += 1;
            }
        }
        Self {
            bin_width,
            range_max,
            counts,
            overflow,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub mean_zeta: f64,
    pub max_zeta: f64,
    pub histogram: Histogram,
}

impl Summary {
    pub fn from_records(records: &[ExperimentRecord]) -> Self {
        let zetas = records.iter().map(|r| r.result.zeta);
        let count = records.len();
        let mean_zeta = if count == 0 {
            0.0
        } else {
            zetas.clone().sum::<f64>() / count as f64
        };
        Self {
            count,
            mean_zeta,
            max_zeta: zetas.clone().fold(0.0, f64::max),
            histogram: Histogram::new(zetas, HISTOGRAM_BIN_WIDTH, HISTOGRAM_RANGE),
        }
    }
}

/// Fraction of records whose error exceeds `threshold`.
pub fn fraction_above(records: &[ExperimentRecord], threshold: f64) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    records.iter().filter(|r| r.result.zeta > threshold).count() as f64 / records.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomExperiment {
    pub records: Vec<ExperimentRecord>,
    pub summary: Summary,
}

/// Generator for random instance `index` under `seed`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One Haar-random single-qubit state as Bloch angles `(theta, phi)`.
pub fn haar_bloch_angles(rng: &mut impl Rng) -> (f64, f64) {
    let cos_theta = 1.0 - 2.0 * rng.random::<f64>();
    let phi = 2.0 * PI * rng.random::<f64>();
    (cos_theta.clamp(-1.0, 1.0).acos(), phi)
}

pub fn random_inputs(seed: u64, index: u64) -> InputParams {
    let mut rng = instance_rng(seed, index);
    let (theta1, phi1) = haar_bloch_angles(&mut rng);
    let (theta2, phi2) = haar_bloch_angles(&mut rng);
    InputParams::Random {
        theta1,
        phi1,
        theta2,
        phi2,
    }
}

fn evaluate(test: &SwapTest, inputs: InputParams) -> Result<ExperimentRecord> {
    let (phi1, phi2) = inputs.states();
    Ok(ExperimentRecord {
        inputs,
        result: test.run(&phi1, &phi2)?,
    })
}

/// `n` swap tests on independent Haar-random state pairs.
pub fn run_random(
    n: usize,
    seed: u64,
    mode: Mode,
    params: &DeviceParams,
) -> Result<RandomExperiment> {
    if n == 0 {
        return Err(Error::Parameter("random experiment needs n >= 1".into()));
    }
    let test = SwapTest::new(mode, params)?;
    let records = (0..n as u64)
        .into_par_iter()
        .map(|i| evaluate(&test, random_inputs(seed, i)))
        .collect::<Result<Vec<_>>>()?;
    let summary = Summary::from_records(&records);
    Ok(RandomExperiment { records, summary })
}

/// `grid` evenly spaced angles covering `[0, π]` inclusive.
pub fn grid_values(grid: usize) -> Vec<f64> {
    (0..grid)
        .map(|i| PI * i as f64 / (grid - 1) as f64)
        .collect()
}

fn run_grid(
    grid: usize,
    mode: Mode,
    params: &DeviceParams,
    make: impl Fn(f64, f64) -> InputParams + Sync,
) -> Result<Vec<ExperimentRecord>> {
    if grid < 2 {
        return Err(Error::Parameter(format!(
            "grid size must be >= 2, got {grid}"
        )));
    }
    let test = SwapTest::new(mode, params)?;
    let values = grid_values(grid);
    (0..grid * grid)
        .into_par_iter()
        .map(|idx| evaluate(&test, make(values[idx / grid], values[idx % grid])))
        .collect()
}

/// Equator states `(|0> + e^{i eta_j}|1>)/sqrt(2)` over a `grid x grid`
/// sweep of `(eta1, eta2)`, row-major in `eta1`.
pub fn run_phase_grid(
    grid: usize,
    mode: Mode,
    params: &DeviceParams,
) -> Result<Vec<ExperimentRecord>> {
    run_grid(grid, mode, params, |eta1, eta2| InputParams::Phase {
        eta1,
        eta2,
    })
}

/// Real states `cos(theta_j)|0> + sin(theta_j)|1>` over a `grid x grid`
/// sweep of `(theta1, theta2)`, row-major in `theta1`.
pub fn run_amplitude_grid(
    grid: usize,
    mode: Mode,
    params: &DeviceParams,
) -> Result<Vec<ExperimentRecord>> {
    run_grid(grid, mode, params, |theta1, theta2| {
        InputParams::Amplitude { theta1, theta2 }
    })
}

/// Mean random-instance error under the preset control-Δ assignment and
/// under the swapped one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoleSensitivity {
    pub mean_zeta: f64,
    pub mean_zeta_swapped: f64,
}

pub fn control_delta_sensitivity(
    n: usize,
    seed: u64,
    params: &DeviceParams,
) -> Result<RoleSensitivity> {
    let base = run_random(n, seed, Mode::Physical, params)?;
    let swapped = run_random(
        n,
        seed,
        Mode::Physical,
        &params.with_swapped_control_deltas(),
    )?;
    Ok(RoleSensitivity {
        mean_zeta: base.summary.mean_zeta,
        mean_zeta_swapped: swapped.summary.mean_zeta,
    })
}

/// Formats `x` with 12 significant digits, `%.12g` style: plain decimal
/// for exponents in `[-5, 12)`, otherwise `d.ddde±x`. Trailing zeros are
/// trimmed.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn write_experiment_csv(records: &[ExperimentRecord], mut out: impl Write) -> io::Result<()> {
    writeln!(out, "{EXPERIMENT_HEADER}")?;
    for r in records {
        let (a, b) = r.inputs.columns();
        let res = &r.result;
        let row = [
            a,
            b,
            res.p0,
            res.p1,
            res.estimate,
            res.exact_fidelity,
            res.zeta,
        ]
        .map(format_number);
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn trace_header() -> String {
    let mut cols = vec!["t_ns".to_string()];
    cols.extend((0..DIM).map(|i| format!("p{}", basis_label(i))));
    cols.join(",")
}

pub fn write_trace_csv(trace: &PopulationTrace, mut out: impl Write) -> io::Result<()> {
    writeln!(out, "{}", trace_header())?;
    for (t, row) in trace.times.iter().zip(&trace.populations) {
        let cells: Vec<String> = std::iter::once(*t)
            .chain(row.iter().copied())
            .map(format_number)
            .collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Provenance written next to experiment output.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentMetadata {
    pub kind: ExperimentKind,
    pub mode: String,
    pub param1: &'static str,
    pub param2: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state_distribution: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    pub device_params: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<Summary>,
}

impl ExperimentMetadata {
    pub fn random(seed: u64, mode: Mode, params: &DeviceParams, summary: Summary) -> Self {
        Self {
            kind: ExperimentKind::Random,
            mode: mode.to_string(),
            param1: "theta1 (polar angle of phi1, rad)",
            param2: "theta2 (polar angle of phi2, rad)",
            seed: Some(seed),
            generator: Some(GENERATOR),
            state_distribution: Some(STATE_DISTRIBUTION),
            grid: None,
            device_params: params.to_param_string(),
            summary: Some(summary),
        }
    }

    pub fn grid(kind: ExperimentKind, grid: usize, mode: Mode, params: &DeviceParams) -> Self {
        let (param1, param2) = match kind {
            ExperimentKind::Amplitude => ("theta1 (rad)", "theta2 (rad)"),
            _ => ("eta1 (rad)", "eta2 (rad)"),
        };
        Self {
            kind,
            mode: mode.to_string(),
            param1,
            param2,
            seed: None,
            generator: None,
            state_distribution: None,
            grid: Some(grid),
            device_params: params.to_param_string(),
            summary: None,
        }
    }
}
