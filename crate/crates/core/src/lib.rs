//! Simulator for holonomic single- and two-qubit gates on Λ-type three-level
//! systems: pulse-scheme construction, closed-system propagation with X/Z
//! control errors, Lindblad open-system dynamics, and decoherence-free
//! subspace (DFS) encodings on three and six physical qubits.
//!
//! Everything is built on a small dense complex matrix type generic over the
//! real scalar (`f32`/`f64`); concrete `f64` aliases live at the crate root.

pub mod algebra;
pub mod dfs;
pub mod error;
pub mod lindblad;
pub mod propagator;
pub mod pulses;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

/// Max entry deviation allowed for a matrix flagged unitary (`‖U†U − I‖_max`).
pub const UNITARY_TOL: f64 = 1e-12;
/// Max entry deviation allowed for a matrix flagged Hermitian (`‖H − H†‖_max`).
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance for test oracles that recompute a value by an independent route.
pub const ORACLE_TOL: f64 = 1e-11;
/// Allowed drift of `Tr ρ` from 1 along an integrated trajectory.
pub const TRACE_TOL: f64 = 1e-8;
/// Closed-form vs. propagated dressed-amplitude agreement.
pub const EQUIV_TOL: f64 = 1e-9;
/// Slack on fidelity values quoted to four digits by the reference results.
pub const REFERENCE_FID_TOL: f64 = 3e-4;
/// Max deviation of the two-qubit gate composition from the exact CNOT.
pub const CNOT_TOL: f64 = 1e-10;
/// Max trace-fidelity deviation for the DFS collective-dephasing immunity.
pub const DFS_PHASE_TOL: f64 = 1e-12;
/// Default fixed RK4 step in units of 1/Ω_m.
pub const STEP_DEFAULT: f64 = 1e-3;

/// Dense complex matrix over `f64` scalars.
pub type Matrix = algebra::ComplexMatrix<f64>;
/// Dense complex matrix over `f32` scalars.
pub type Matrix32 = algebra::ComplexMatrix<f32>;
/// Complex number over `f64`.
pub type C64 = num_complex::Complex<f64>;

pub use algebra::{expm_generator, trace_fidelity, ComplexMatrix};
pub use dfs::{
    cnot_equivalence, dfs_single_gate, logical_hamiltonian_1q, simulate_dfs, two_qubit_evolution,
    two_qubit_gate, two_qubit_schedule, CnotCheck, DfsLevel, DfsReport, DfsSingleBasis,
    DfsTwoBasis, TwoQubitParams,
};
pub use lindblad::{
    avg_gate_fidelity, cardinal_states, decoherence_ops_3level, decoherence_ops_per_qubit,
    integrate, lindblad_rhs, population_trace, state_fidelity, DecoherenceParams, OperatorSet,
    PopulationSample, Schedule,
};
pub use propagator::{
    bloch_trajectory, bright_amplitude, computational_block, dark_amplitude,
    dressed_error_amplitude, evolve_sequence, hamiltonian_3level, scheme_fidelity, FidelityMode,
    NoiseParams,
};
pub use pulses::{
    bright_dark_basis, build_sequence, target_gate, GateParams, PulseSegment, Scheme,
};
