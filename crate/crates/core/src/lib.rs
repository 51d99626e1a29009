//! Exact inference for quantum-like Bayesian networks and the quantum-like
//! influence diagrams built on top of them.
//!
//! A quantum-like Bayesian network replaces the real entries of every
//! conditional probability table with complex probability amplitudes. Marginal
//! probabilities are obtained by summing amplitudes over the unobserved
//! configurations *before* squaring (Born rule), which produces interference
//! terms `2·|ψ_i|·|ψ_j|·cos(θ_i − θ_j)` that a classical network cannot express.
//!
//! The crate is organized bottom-up:
//!
//! - [`amplitude`]: polar complex amplitudes and the Born rule.
//! - [`qlbn`]: network structure, joint amplitudes, exact inference and a
//!   brute-force rectangular-complex oracle.
//! - [`decision`]: utility tables, classical and interference-adjusted maximum
//!   expected utility, and the argmax decision rule.
//! - [`calibration`]: fitting the phase difference to an observed probability
//!   and sweeping it to map dominance regions.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
// comparisons are written so that NaN fails them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod amplitude;
pub mod calibration;
pub mod decision;
pub mod error;
pub mod qlbn;

pub use amplitude::Amplitude;
pub use calibration::{
    circular_distance, fit_theta, fit_theta_with_grid, sweep_expected_utility, sweep_probability, EuSweep,
    SweepCurve, SweepValue, ThetaFitResult, ThetaInterval, DEFAULT_FIT_GRID,
};
pub use decision::{
    classical_meu, decision_rule, expected_utility, quantum_factor, quantum_meu, DecisionProblem,
    MeuMode, MeuResult, QuantumMeuFactor, UtilityTable,
};
pub use error::{Error, Result};
pub use qlbn::{
    enumerate_joint_oracle, infer, infer_classical, Assignment, Evidence, InferenceResult,
    NetworkBuilder, AmplitudeCpt, AmplitudeNetwork, OutcomeScore, PhaseAssignment, QueryPlan,
    VarId, Variable,
};

/// Absolute tolerance used for amplitude-level invariant checks.
pub const AMPLITUDE_TOLERANCE: f64 = 1e-12;
