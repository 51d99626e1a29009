use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::amplitude::Amplitude;
use crate::error::{Error, Result};

use super::network::{configuration_count, for_each_configuration, AmplitudeNetwork, Evidence, VarId};

/// One phase per unobserved joint configuration of a query, in lexicographic
/// order over the unobserved variables (declaration order, first slowest).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseAssignment {
    phases: Vec<f64>,
}

impl PhaseAssignment {
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("phase"));
        }
        Ok(Self { phases })
    }

    /// Two-configuration shorthand: `theta` is the difference `θ_1 − θ_2`,
    /// expanded to the phases `(theta, 0)`.
    pub fn difference(theta: f64) -> Result<Self> {
        Self::new(vec![theta, 0.0])
    }

    pub fn zeros(configurations: usize) -> Self {
        Self { phases: vec![0.0; configurations] }
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

/// Decomposition of one query outcome's score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeScore {
    /// `Σ_y |path_y|²`.
    pub classical_part: f64,
    /// `2 Σ_{i<j} |path_i| |path_j| cos(θ_i − θ_j)`.
    pub interference_part: f64,
    /// `classical_part + interference_part`, clamped at 0.
    pub unnormalized: f64,
}

/// Result of a query: per-outcome decomposition, the normalizer `γ` and the
/// normalized distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct InferenceResult {
    pub query: VarId,
    pub scores: Vec<OutcomeScore>,
    pub gamma: f64,
    pub normalized: Vec<f64>,
}

impl InferenceResult {
    pub fn probability(&self, outcome: usize) -> f64 {
        self.normalized[outcome]
    }

    /// Builds the result from raw per-outcome parts, applying the clamp and
    /// the `γ` normalization.
    pub(crate) fn from_parts(query: VarId, query_name: &str, parts: Vec<(f64, f64)>) -> Result<Self> {
        let scores: Vec<OutcomeScore> = parts
            .into_iter()
            .map(|(classical_part, interference_part)| {
                let raw = classical_part + interference_part;
                // a true squared modulus; anything negative is rounding
                debug_assert!(raw >= -1e-9 * classical_part.max(1.0));
                OutcomeScore { classical_part, interference_part, unnormalized: raw.max(0.0) }
            })
            .collect();
        let total: f64 = scores.iter().map(|s| s.unnormalized).sum();
        if !(total > 0.0) {
            return Err(Error::DegenerateQuery(String::from(query_name)));
        }
        let gamma = 1.0 / total;
        let normalized = scores.iter().map(|s| gamma * s.unnormalized).collect();
        Ok(Self { query, scores, gamma, normalized })
    }
}

/// A query compiled against a network and evidence: the path amplitude of
/// every `(query outcome, unobserved configuration)` pair. Phases are applied
/// at evaluation time, so one plan serves any number of phase settings.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryPlan {
    query: VarId,
    query_name: String,
    unobserved: Vec<VarId>,
    configurations: usize,
    /// `paths[x][y]`: product amplitude for query outcome `x`, configuration `y`.
    paths: Vec<Vec<Amplitude>>,
}

impl QueryPlan {
    pub fn new(net: &AmplitudeNetwork, query: VarId, evidence: &Evidence) -> Result<Self> {
        let query_var = net.variable(query)?;
        net.check_assignment(evidence)?;
        if evidence.get(query).is_some() {
            return Err(Error::EvidenceOnQuery(query_var.name().into()));
        }
        let unobserved: Vec<VarId> =
            net.ids().filter(|id| *id != query && evidence.get(*id).is_none()).collect();
        let configurations = configuration_count(net, &unobserved);

        let mut full: Vec<usize> = net.ids().map(|id| evidence.get(id).unwrap_or(0)).collect();
        let mut paths = Vec::with_capacity(query_var.arity());
        for x in 0..query_var.arity() {
            full[query.index()] = x;
            let mut row = Vec::with_capacity(configurations);
            for_each_configuration(net, &unobserved, &mut full, |full| row.push(net.path_amplitude(full)));
            paths.push(row);
        }
        Ok(Self { query, query_name: query_var.name().into(), unobserved, configurations, paths })
    }

    pub fn query(&self) -> VarId {
        self.query
    }

    pub fn unobserved(&self) -> &[VarId] {
        &self.unobserved
    }

    /// Number of unobserved joint configurations `|Y|`.
    pub fn configurations(&self) -> usize {
        self.configurations
    }

    /// Arity of the query variable.
    pub fn outcomes(&self) -> usize {
        self.paths.len()
    }

    pub fn paths(&self, outcome: usize) -> &[Amplitude] {
        &self.paths[outcome]
    }

    /// Quantum-like marginal with one extra phase per configuration. The
    /// effective phase of path `y` is its amplitude phase plus `phases[y]`;
    /// with phase-0 tables that is exactly `phases[y]`.
    pub fn evaluate(&self, phases: &PhaseAssignment) -> Result<InferenceResult> {
        if phases.len() != self.configurations {
            return Err(Error::PhaseCount { expected: self.configurations, got: phases.len() });
        }
        let parts = self
            .paths
            .iter()
            .map(|row| {
                let angles: Vec<f64> =
                    row.iter().zip(phases.phases()).map(|(a, extra)| a.phase() + extra).collect();
                let classical: f64 = row.iter().map(Amplitude::born_probability).sum();
                let mut cross = 0.0;
                for i in 0..row.len() {
                    let mi = row[i].magnitude();
                    if mi == 0.0 {
                        continue;
                    }
                    for j in i + 1..row.len() {
                        cross += mi * row[j].magnitude() * libm::cos(angles[i] - angles[j]);
                    }
                }
                (classical, 2.0 * cross)
            })
            .collect();
        InferenceResult::from_parts(self.query, &self.query_name, parts)
    }

    /// Classical marginal: squared path magnitudes only, no interference.
    pub fn evaluate_classical(&self) -> Result<InferenceResult> {
        let parts = self
            .paths
            .iter()
            .map(|row| (row.iter().map(Amplitude::born_probability).sum(), 0.0))
            .collect();
        InferenceResult::from_parts(self.query, &self.query_name, parts)
    }

    /// Normalized probability of `outcome` for a two-configuration query at
    /// phase difference `theta`, without allocating. `None` when the query
    /// is degenerate at this `theta`.
    ///
    /// Panics if the plan does not have exactly two configurations.
    pub fn probability_at(&self, outcome: usize, theta: f64) -> Option<f64> {
        assert_eq!(self.configurations, 2, "probability_at needs a single interference pair");
        let mut total = 0.0;
        let mut target = 0.0;
        for (x, row) in self.paths.iter().enumerate() {
            let (a, b) = (row[0], row[1]);
            let raw = a.born_probability()
                + b.born_probability()
                + 2.0 * a.magnitude() * b.magnitude() * libm::cos(a.phase() + theta - b.phase());
            let score = raw.max(0.0);
            total += score;
            if x == outcome {
                target = score;
            }
        }
        if total > 0.0 {
            Some(target / total)
        } else {
            None
        }
    }
}

/// Exact quantum-like inference `Pr(query | evidence)` with interference.
pub fn infer(
    net: &AmplitudeNetwork,
    query: VarId,
    evidence: &Evidence,
    phases: &PhaseAssignment,
) -> Result<InferenceResult> {
    QueryPlan::new(net, query, evidence)?.evaluate(phases)
}

/// Inference with every interference term dropped, i.e. the classical
/// Bayesian network reading of the same tables.
pub fn infer_classical(net: &AmplitudeNetwork, query: VarId, evidence: &Evidence) -> Result<InferenceResult> {
    QueryPlan::new(net, query, evidence)?.evaluate_classical()
}
