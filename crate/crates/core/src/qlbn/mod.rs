//! Quantum-like Bayesian networks: structure, joint amplitudes and exact
//! inference.
//!
//! For a query `X` with evidence `e` and unobserved variables `Y`, the
//! score of each outcome `x` is
//!
//! ```text
//! Σ_y |path_y|²  +  2 Σ_{i<j} |path_i| |path_j| cos(θ_i − θ_j)
//! ```
//!
//! where `path_y = ∏_k ψ(X_k | Pa(X_k))` under `(x, e, y)`. Scores are
//! normalized by `γ = 1 / Σ_x score_x`. Phases `θ_y` are supplied per
//! unobserved configuration at query time through a [`PhaseAssignment`].

mod inference;
mod network;
mod oracle;

pub use inference::{infer, infer_classical, InferenceResult, OutcomeScore, PhaseAssignment, QueryPlan};
pub use network::{
    AmplitudeCpt, AmplitudeNetwork, Assignment, Evidence, NetworkBuilder, VarId, Variable,
    CPT_NORMALIZATION_TOLERANCE,
};
pub use oracle::{enumerate_joint_oracle, ORACLE_MAX_BINARY_VARIABLES};
