use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use qdswap_core::device::DEFAULT_REGIME_RATIO;
use qdswap_core::experiments::{
    write_experiment_csv, write_trace_csv, ExperimentMetadata, DEFAULT_GRID,
};
use qdswap_core::linalg::parse_basis_label;
use qdswap_core::{
    population_trace, run_amplitude_grid, run_phase_grid, run_random, s_gate, tl_ideal,
    tl_physical, truth_table, validate_tl_regime, DeviceParams, ExperimentKind, Mode, Qubit,
    QubitState, SwapTest, TraceGate,
};

/// Simulate the three-dot charge-qubit swap test.
#[derive(Debug, Parser)]
#[command(name = "qdswap", version)]
struct Cli {
    /// Device parameter file (flat key = value); defaults to the built-in preset.
    #[arg(long, global = true)]
    params: Option<PathBuf>,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Gate model.
    #[arg(long, global = true, default_value = "physical")]
    mode: Mode,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the basis-state action of a TL or S gate.
    TruthTable {
        #[arg(long, default_value = "tl")]
        gate: TraceGate,
        /// Target qubit of the TL gate (1..3).
        #[arg(long)]
        target: Option<usize>,
    },
    /// Basis-state populations during a physical gate, as CSV.
    Trace {
        #[arg(long)]
        initial: String,
        #[arg(long, default_value = "tl")]
        gate: TraceGate,
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
    /// Run one swap test on two Bloch states given as `theta,phi`.
    Run {
        #[arg(long, allow_hyphen_values = true)]
        phi1: String,
        #[arg(long, allow_hyphen_values = true)]
        phi2: String,
    },
    /// Batch experiments written as CSV.
    Experiment {
        #[command(subcommand)]
        kind: ExperimentCommand,
    },
}

#[derive(Debug, Subcommand)]
enum ExperimentCommand {
    /// Haar-random input pairs.
    Random {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Equator states over an eta1 x eta2 grid on [0, pi].
    Phase {
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Real-amplitude states over a theta1 x theta2 grid on [0, pi].
    Amplitude {
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let params = match &cli.params {
        Some(path) => DeviceParams::from_param_file(path)
            .with_context(|| format!("reading {}", path.display()))?,
        None => DeviceParams::preset(),
    };
    if cli.mode == Mode::Physical {
        warn_regime(&params);
    }
    let mut out = open_output(cli.out.as_deref())?;

    match cli.command {
        Command::TruthTable { gate, target } => {
            let u = match gate {
                TraceGate::Tl => {
                    let target = match target {
                        Some(t) => Qubit::new(t)?,
                        None => params.target,
                    };
                    match cli.mode {
                        Mode::Ideal => tl_ideal(target),
                        Mode::Physical => tl_physical(&params.with_target(target))?,
                    }
                }
                TraceGate::S => {
                    if target.is_some() {
                        bail!("--target applies only to --gate tl");
                    }
                    s_gate(cli.mode, &params)?
                }
            };
            write!(out, "{}", truth_table(&u))?;
        }
        Command::Trace {
            initial,
            gate,
            samples,
        } => {
            let initial = parse_basis_label(&initial)?;
            let trace = population_trace(&params, initial, gate, samples)?;
            write_trace_csv(&trace, &mut out)?;
        }
        Command::Run { phi1, phi2 } => {
            let a = parse_bloch(&phi1).context("--phi1")?;
            let b = parse_bloch(&phi2).context("--phi2")?;
            let r = SwapTest::new(cli.mode, &params)?.run(&a, &b)?;
            writeln!(out, "p0 = {}", r.p0)?;
            writeln!(out, "p1 = {}", r.p1)?;
            writeln!(out, "estimate = {}", r.estimate)?;
            writeln!(out, "fidelity = {}", r.exact_fidelity)?;
            writeln!(out, "zeta = {}", r.zeta)?;
        }
        Command::Experiment { kind } => {
            let (records, meta) = match kind {
                ExperimentCommand::Random { n, seed } => {
                    let exp = run_random(n, seed, cli.mode, &params)?;
                    let meta = ExperimentMetadata::random(seed, cli.mode, &params, exp.summary);
                    (exp.records, meta)
                }
                ExperimentCommand::Phase { grid } => (
                    run_phase_grid(grid, cli.mode, &params)?,
                    ExperimentMetadata::grid(ExperimentKind::Phase, grid, cli.mode, &params),
                ),
                ExperimentCommand::Amplitude { grid } => (
                    run_amplitude_grid(grid, cli.mode, &params)?,
                    ExperimentMetadata::grid(ExperimentKind::Amplitude, grid, cli.mode, &params),
                ),
            };
            write_experiment_csv(&records, &mut out)?;
            write_metadata(&meta, cli.out.as_deref())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_metadata(meta: &ExperimentMetadata, out: Option<&Path>) -> Result<()> {
    let json = serde_json::to_string_pretty(meta)?;
    match out {
        Some(p) => {
            let mut name = p.as_os_str().to_owned();
            name.push(".meta.json");
            let path = PathBuf::from(name);
            std::fs::write(&path, json + "\n")
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => eprintln!("{json}"),
    }
    Ok(())
}

fn warn_regime(params: &DeviceParams) {
    for target in Qubit::ALL {
        let report = validate_tl_regime(&params.with_target(target), DEFAULT_REGIME_RATIO);
        for check in report.failures() {
            eprintln!(
                "warning: target {target}: {} holds only by a factor of {:.3}",
                check.name, check.ratio
            );
        }
    }
}

fn parse_bloch(text: &str) -> Result<QubitState> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [theta, phi] = parts.as_slice() else {
        bail!("expected theta,phi in radians, got {text:?}");
    };
    let theta: f64 = theta
        .parse()
        .with_context(|| format!("bad theta {theta:?}"))?;
    let phi: f64 = phi.parse().with_context(|| format!("bad phi {phi:?}"))?;
    if !theta.is_finite() || !phi.is_finite() {
        bail!("angles must be finite, got {text:?}");
    }
    Ok(QubitState::from_bloch(theta, phi))
}
