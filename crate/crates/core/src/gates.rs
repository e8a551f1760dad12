//! Ideal and physical gate constructors, truth tables and population traces.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::device::{
    build_free_hamiltonian, build_full_hamiltonian, validate_tl_regime, DeviceParams,
    DEFAULT_REGIME_RATIO,
};
use crate::error::{Error, Result};
use crate::linalg::{
    apply, basis_label, expm_hermitian, kron_embed, pauli, propagator, ComplexMatrix, PhaseSign,
    Qubit, StateVector, DIM, I, ONE, ZERO,
};

/// Whether gates are exact unitaries or simulated device evolutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Ideal,
    Physical,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ideal" => Ok(Mode::Ideal),
            "physical" => Ok(Mode::Physical),
            other => Err(Error::Parameter(format!(
                "mode must be `ideal` or `physical`, got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ideal => "ideal",
            Mode::Physical => "physical",
        })
    }
}

/// Control value that activates a reference Toffoli or Fredkin gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    OnOne,
    OnZero,
}

impl Polarity {
    fn bit(self) -> usize {
        match self {
            Polarity::OnOne => 1,
            Polarity::OnZero => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    TlIdeal,
    TlPhysical,
    Hadamard,
    PauliX,
    FredkinIdeal(Polarity),
    ToffoliIdeal(Polarity),
}

impl GateKind {
    pub fn is_three_qubit(self) -> bool {
        !matches!(self, GateKind::Hadamard | GateKind::PauliX)
    }
}

/// A symbolic gate with its qubit roles and duration.
///
/// For a Fredkin gate `controls` holds the single control and the swapped
/// pair is `target` together with the remaining qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    pub kind: GateKind,
    pub target: Qubit,
    pub controls: Vec<Qubit>,
    /// Duration in ns; zero for ideal and single-qubit gates.
    pub duration: f64,
}

impl GateSpec {
    /// TL gate on `target` with the other two qubits as controls.
    pub fn tl(target: Qubit, mode: Mode, params: &DeviceParams) -> Self {
        let (kind, duration) = match mode {
            Mode::Ideal => (GateKind::TlIdeal, 0.0),
            Mode::Physical => (
                GateKind::TlPhysical,
                params.with_target(target).tl_gate_time(),
            ),
        };
        Self {
            kind,
            target,
            controls: target.others().to_vec(),
            duration,
        }
    }

    pub fn hadamard(qubit: Qubit) -> Self {
        Self::single(GateKind::Hadamard, qubit)
    }

    pub fn x(qubit: Qubit) -> Self {
        Self::single(GateKind::PauliX, qubit)
    }

    fn single(kind: GateKind, qubit: Qubit) -> Self {
        Self {
            kind,
            target: qubit,
            controls: Vec::new(),
            duration: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.controls.contains(&self.target) {
            return Err(Error::Parameter(format!(
                "gate target {} is also listed as a control",
                self.target
            )));
        }
        let expected_controls = match self.kind {
            GateKind::Hadamard | GateKind::PauliX => 0,
            GateKind::FredkinIdeal(_) => 1,
            _ => 2,
        };
        if self.controls.len() != expected_controls {
            return Err(Error::Parameter(format!(
                "{:?} needs {expected_controls} controls, got {}",
                self.kind,
                self.controls.len()
            )));
        }
        Ok(())
    }

    /// The 8x8 unitary of this gate; `params` is only read by physical gates.
    pub fn matrix(&self, params: &DeviceParams) -> Result<ComplexMatrix> {
        self.validate()?;
        match self.kind {
            GateKind::TlIdeal => Ok(tl_ideal(self.target)),
            GateKind::TlPhysical => tl_physical(&params.with_target(self.target)),
            GateKind::Hadamard => Ok(single_qubit(SingleQubitKind::Hadamard, self.target)),
            GateKind::PauliX => Ok(single_qubit(SingleQubitKind::X, self.target)),
            GateKind::FredkinIdeal(pol) => Ok(fredkin_ideal(self.controls[0], pol)),
            GateKind::ToffoliIdeal(pol) => Ok(toffoli_ideal(self.target, pol)),
        }
    }
}

/// Permutation-with-phases matrix: basis `i` maps to `phase(i) |image(i)>`.
fn monomial(image: impl Fn(usize) -> (usize, Complex64)) -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(DIM, DIM);
    for input in 0..DIM {
        let (out, phase) = image(input);
        u[(out, input)] = phase;
    }
    u
}

/// Ideal TL gate: flips `target` with a factor `-i` when both controls are
/// |0>, identity otherwise.
pub fn tl_ideal(target: Qubit) -> ComplexMatrix {
    let [a, b] = target.others();
    monomial(|i| {
        if a.bit_of(i) == 0 && b.bit_of(i) == 0 {
            (i ^ target.mask(), -I)
        } else {
            (i, ONE)
        }
    })
}

/// Reference Toffoli on `target`, conditioned on both other qubits
/// equal to the polarity value.
pub fn toffoli_ideal(target: Qubit, polarity: Polarity) -> ComplexMatrix {
    let [a, b] = target.others();
    let v = polarity.bit();
    monomial(|i| {
        if a.bit_of(i) == v && b.bit_of(i) == v {
            (i ^ target.mask(), ONE)
        } else {
            (i, ONE)
        }
    })
}

/// Reference Fredkin: swaps the two non-control qubits when `control`
/// equals the polarity value.
pub fn fredkin_ideal(control: Qubit, polarity: Polarity) -> ComplexMatrix {
    let [a, b] = control.others();
    monomial(|i| {
        if control.bit_of(i) == polarity.bit() && a.bit_of(i) != b.bit_of(i) {
            (i ^ a.mask() ^ b.mask(), ONE)
        } else {
            (i, ONE)
        }
    })
}

/// Physical TL gate in the interaction picture:
/// `U = exp(+i H0 tT) exp(-i H tT)` with the full Hamiltonian `H`, the free
/// Hamiltonian `H0` and `tT = π/Δ_target`.
pub fn tl_physical(p: &DeviceParams) -> Result<ComplexMatrix> {
    p.validate()?;
    let report = validate_tl_regime(p, DEFAULT_REGIME_RATIO);
    let hard = report.hard_failures();
    if p.delta_of(p.target) == 0.0 || !hard.is_empty() {
        let detail: Vec<String> = hard
            .iter()
            .map(|c| format!("{} (ratio {:.3})", c.name, c.ratio))
            .collect();
        return Err(Error::Regime(if detail.is_empty() {
            format!("target {} has zero tunneling", p.target)
        } else {
            detail.join("; ")
        }));
    }
    let t = p.tl_gate_time();
    let lab = propagator(&build_full_hamiltonian(p), t)?;
    let frame = expm_hermitian(&build_free_hamiltonian(p), t, PhaseSign::Plus)?;
    Ok(&frame * &lab)
}

/// Targets of the three TL gates forming the S gate, in application order.
pub const S_GATE_TARGETS: [Qubit; 3] = [Qubit::Q2, Qubit::Q3, Qubit::Q2];

/// S gate: `TL(q2) · TL(q3) · TL(q2)`, qubit 1 always acting as a control.
pub fn s_gate(mode: Mode, p: &DeviceParams) -> Result<ComplexMatrix> {
    let mut u = ComplexMatrix::identity(DIM);
    for target in S_GATE_TARGETS {
        let gate = match mode {
            Mode::Ideal => tl_ideal(target),
            Mode::Physical => tl_physical(&p.with_target(target))?,
        };
        u = &gate * &u;
    }
    Ok(u)
}

/// Duration of the S gate in ns: three TL gate times.
pub fn s_gate_time(p: &DeviceParams) -> f64 {
    S_GATE_TARGETS
        .iter()
        .map(|&t| p.with_target(t).tl_gate_time())
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingleQubitKind {
    Hadamard,
    X,
}

pub fn single_qubit(kind: SingleQubitKind, qubit: Qubit) -> ComplexMatrix {
    let op = match kind {
        SingleQubitKind::Hadamard => pauli::hadamard(),
        SingleQubitKind::X => pauli::x(),
    };
    kron_embed(&op, qubit).expect("2x2 operator")
}

/// Action of a gate on one computational basis input.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthRow {
    pub input: usize,
    pub output: StateVector,
    pub dominant: usize,
    pub amplitude: Complex64,
    /// `1 - |amplitude|^2`.
    pub leakage: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruthTable {
    pub rows: Vec<TruthRow>,
}

impl TruthTable {
    pub fn max_leakage(&self) -> f64 {
        self.rows.iter().map(|r| r.leakage).fold(0.0, f64::max)
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(
                f,
                "|{}> -> ({:+.6}{:+.6}i)|{}>  leakage {:.3e}",
                basis_label(r.input),
                r.amplitude.re,
                r.amplitude.im,
                basis_label(r.dominant),
                r.leakage
            )?;
        }
        Ok(())
    }
}

pub fn truth_table(u: &ComplexMatrix) -> TruthTable {
    let rows =
        (0..u.cols())
            .map(|input| {
                let output = u.column(input);
                let (dominant, amplitude) = output.amplitudes().iter().copied().enumerate().fold(
                    (0, ZERO),
                    |best, (i, z)| {
                        if z.norm_sqr() > best.1.norm_sqr() {
                            (i, z)
                        } else {
                            best
                        }
                    },
                );
                TruthRow {
                    input,
                    output,
                    dominant,
                    amplitude,
                    leakage: (1.0 - amplitude.norm_sqr()).clamp(0.0, 1.0),
                }
            })
            .collect();
    TruthTable { rows }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceGate {
    Tl,
    S,
}

impl FromStr for TraceGate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tl" => Ok(TraceGate::Tl),
            "s" => Ok(TraceGate::S),
            other => Err(Error::Parameter(format!(
                "gate must be `tl` or `s`, got {other:?}"
            ))),
        }
    }
}

/// Basis populations sampled over the duration of a physical gate.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationTrace {
    pub times: Vec<f64>,
    pub populations: Vec<[f64; DIM]>,
}

/// Samples `|<jkl| psi(t)>|^2` at `samples` evenly spaced times from 0 to
/// the gate duration.
///
/// A TL trace uses `p` with its own target. An S trace chains the three TL
/// segments; each segment starts from the interaction-picture output of the
/// previous one, and within a segment populations are frame independent
/// because the free Hamiltonian is diagonal.
pub fn population_trace(
    p: &DeviceParams,
    initial: usize,
    gate: TraceGate,
    samples: usize,
) -> Result<PopulationTrace> {
    if samples < 2 {
        return Err(Error::Parameter(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    if initial >= DIM {
        return Err(Error::Parameter(format!(
            "initial basis index {initial} out of range"
        )));
    }
    let segments: Vec<DeviceParams> = match gate {
        TraceGate::Tl => vec![*p],
        TraceGate::S => S_GATE_TARGETS.iter().map(|&t| p.with_target(t)).collect(),
    };

    // Hamiltonian, duration and start state of each segment.
    let mut plan = Vec::with_capacity(segments.len());
    let mut state = StateVector::basis(DIM, initial);
    let mut start = 0.0;
    for seg in &segments {
        let gate_u = tl_physical(seg)?;
        let duration = seg.tl_gate_time();
        plan.push((build_full_hamiltonian(seg), start, duration, state.clone()));
        state = apply(&gate_u, &state)?;
        start += duration;
    }
    let total = start;

    let mut times = Vec::with_capacity(samples);
    let mut populations = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = total * i as f64 / (samples - 1) as f64;
        let (h, seg_start, duration, seg_state) = plan
            .iter()
            .rev()
            .find(|(_, s, _, _)| t >= *s)
            .unwrap_or(&plan[0]);
        let tau = (t - seg_start).clamp(0.0, *duration);
        let psi = apply(&propagator(h, tau)?, seg_state)?;
        let mut row = [0.0; DIM];
        row.copy_from_slice(&psi.populations());
        times.push(t);
        populations.push(row);
    }
    Ok(PopulationTrace { times, populations })
}
