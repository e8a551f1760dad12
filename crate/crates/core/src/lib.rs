//! Swap-test simulation on three capacitively coupled quantum-dot charge
//! qubits.
//!
//! The crate builds the device Hamiltonian from detunings, tunnelings and
//! couplings, derives the Toffoli-like TL gate as an interaction-picture
//! propagator, composes three TL gates into the controlled-swap-like S
//! gate, and runs the two-stage swap test that estimates `|<phi1|phi2>|^2`
//! from the auxiliary qubit's populations.
//!
//! ```
//! use qdswap_core::{run_swap_test, DeviceParams, Mode, QubitState};
//!
//! let p = DeviceParams::preset();
//! let phi = QubitState::from_bloch(0.7, 1.3);
//! let r = run_swap_test(&phi, &phi, Mode::Ideal, &p).unwrap();
//! assert!((r.estimate - 1.0).abs() < 1e-10);
//! ```

pub mod device;
pub mod error;
pub mod experiments;
pub mod gates;
pub mod linalg;

pub use device::{
    analytic_propagate, analytic_spectral, approx_propagate, build_free_hamiltonian,
    build_full_hamiltonian, build_reduced_hamiltonian, validate_tl_regime, DeviceParams,
    RegimeReport, SpectralPair,
};
pub use error::{Error, Result};
pub use experiments::{
    run_amplitude_grid, run_phase_grid, run_random, ExperimentKind, ExperimentRecord, InputParams,
    RandomExperiment, Summary,
};
pub use gates::{
    population_trace, s_gate, single_qubit, tl_ideal, tl_physical, truth_table, GateKind, GateSpec,
    Mode, PopulationTrace, TraceGate, TruthTable,
};
pub use linalg::{apply, expm_hermitian, kron_embed, ComplexMatrix, PhaseSign, Qubit, StateVector};
pub use swap_test::{
    intermediate_state, prepare_input, run_swap_test, swap_test_circuit, Circuit, QubitState,
    Stage, SwapTest, SwapTestResult,
};

pub use num_complex::Complex64;
