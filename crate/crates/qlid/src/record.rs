//! One prisoner's dilemma experiment and the two-node decision problem it
//! induces.
//!
//! `X1` is the opponent's move (`defect`, `cooperate`) with a uniform prior.
//! `X2` is the player's disposition (`averse` = defects, `seeking` =
//! cooperates) conditioned on `X1`. The player chooses an action in
//! `[defect, cooperate]`; utilities are indexed by `(X1, action)`.

use qlid_core::{infer, infer_classical, DecisionProblem, Evidence, NetworkBuilder, PhaseAssignment, UtilityTable};

use crate::error::{HarnessError, Result};

/// `|p_classical − (p_known_defect + p_known_cooperate)/2|` allowed on load.
pub const CLASSICAL_CONSISTENCY_TOLERANCE: f64 = 5e-4;

pub const CHANCE_VARIABLE: &str = "X1";
pub const CONTEXT_VARIABLE: &str = "X2";
pub const CHANCE_OUTCOMES: [&str; 2] = ["defect", "cooperate"];
pub const CONTEXT_OUTCOMES: [&str; 2] = ["averse", "seeking"];
pub const ACTIONS: [&str; 2] = ["defect", "cooperate"];

/// Payoffs to the player, named `<opponent><player>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Payoffs {
    pub dd: f64,
    pub dc: f64,
    pub cd: f64,
    pub cc: f64,
}

impl Payoffs {
    /// Rows indexed by opponent move, columns by player action.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        vec![vec![self.dd, self.dc], vec![self.cd, self.cc]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeuKind {
    Classical,
    Quantum,
}

impl MeuKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MeuKind::Classical => "classical",
            MeuKind::Quantum => "quantum",
        }
    }
}

/// How a computed cell is judged against its published value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Signed,
    Magnitude,
    Excluded,
}

/// A published expected-utility value for one `(kind, context, action)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceCell {
    pub kind: MeuKind,
    pub context: usize,
    pub action: usize,
    pub value: f64,
    pub comparison: Comparison,
}

impl ReferenceCell {
    /// `classical_averse_defect` and so on.
    pub fn key(&self) -> String {
        cell_key(self.kind, self.context, self.action)
    }
}

pub fn cell_key(kind: MeuKind, context: usize, action: usize) -> String {
    format!("{}_{}_{}", kind.as_str(), CONTEXT_OUTCOMES[context], ACTIONS[action])
}

/// Published MEU table for one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct MeuReference {
    /// The `θ` printed alongside the table; informational only.
    pub theta: Option<f64>,
    pub cells: Vec<ReferenceCell>,
}

impl MeuReference {
    pub fn cell(&self, kind: MeuKind, context: usize, action: usize) -> Option<&ReferenceCell> {
        self.cells
            .iter()
            .find(|c| c.kind == kind && c.context == context && c.action == action)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub name: String,
    /// `P(X2=averse | X1=defect)`.
    pub p_known_defect: f64,
    /// `P(X2=averse | X1=cooperate)`.
    pub p_known_cooperate: f64,
    /// Observed `P(X2=averse)` when `X1` is not revealed.
    pub p_unknown_observed: f64,
    /// Published classical prediction.
    pub p_classical: f64,
    /// Published fitted phase difference, if any.
    pub theta: Option<f64>,
    pub payoffs: Payoffs,
    pub stp_violation: bool,
    pub reference: Option<MeuReference>,
}

impl ExperimentRecord {
    /// Field-level checks. `origin` names the source in diagnostics.
    pub fn validate(&self, origin: &str) -> Result<()> {
        let invalid = |field: &str, message: String| HarnessError::Invalid {
            origin: origin.to_string(),
            field: field.to_string(),
            message,
        };
        if self.name.trim().is_empty() {
            return Err(invalid("metadata.name", "must not be empty".into()));
        }
        for (field, p) in [
            ("network.p_known_defect", self.p_known_defect),
            ("network.p_known_cooperate", self.p_known_cooperate),
            ("metadata.p_unknown_observed", self.p_unknown_observed),
            ("metadata.p_classical", self.p_classical),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(field, format!("probability {p} outside [0, 1]")));
            }
        }
        let implied = 0.5 * (self.p_known_defect + self.p_known_cooperate);
        if (self.p_classical - implied).abs() > CLASSICAL_CONSISTENCY_TOLERANCE {
            return Err(invalid(
                "metadata.p_classical",
                format!("{} disagrees with the network's {implied}", self.p_classical),
            ));
        }
        if let Some(t) = self.theta {
            if !t.is_finite() {
                return Err(invalid("metadata.theta", "must be finite".into()));
            }
        }
        for (field, u) in [
            ("payoffs.dd", self.payoffs.dd),
            ("payoffs.dc", self.payoffs.dc),
            ("payoffs.cd", self.payoffs.cd),
            ("payoffs.cc", self.payoffs.cc),
        ] {
            if !u.is_finite() {
                return Err(invalid(field, "must be finite".into()));
            }
        }
        if let Some(r) = &self.reference {
            if let Some(t) = r.theta {
                if !t.is_finite() {
                    return Err(invalid("reference.theta", "must be finite".into()));
                }
            }
            for c in &r.cells {
                if !c.value.is_finite() {
                    return Err(invalid(&format!("reference.{}", c.key()), "must be finite".into()));
                }
            }
        }
        Ok(())
    }

    /// Builds the decision problem. The network has no phases of its own; the
    /// interference phase is supplied at query time.
    pub fn problem(&self) -> Result<DecisionProblem> {
        let mut b = NetworkBuilder::new();
        let x1 = b.add_variable(CHANCE_VARIABLE, CHANCE_OUTCOMES)?;
        let x2 = b.add_variable(CONTEXT_VARIABLE, CONTEXT_OUTCOMES)?;
        b.set_cpt_probabilities(x1, &[], vec![vec![0.5, 0.5]])?;
        b.set_cpt_probabilities(
            x2,
            &[x1],
            vec![
                vec![self.p_known_defect, 1.0 - self.p_known_defect],
                vec![self.p_known_cooperate, 1.0 - self.p_known_cooperate],
            ],
        )?;
        let utility = UtilityTable::new(self.payoffs.rows())?;
        Ok(DecisionProblem::new(
            b.build()?,
            ACTIONS.iter().map(|a| a.to_string()).collect(),
            utility,
            x1,
            x2,
        )?)
    }
}

/// `P(X2=averse)` with `X1` unobserved, at phase difference `theta`.
pub fn averse_probability(problem: &DecisionProblem, theta: f64) -> Result<f64> {
    let phases = PhaseAssignment::difference(theta)?;
    Ok(infer(problem.network(), problem.context(), &Evidence::new(), &phases)?.probability(0))
}

/// Classical `P(X2=averse)` with `X1` unobserved.
pub fn classical_averse_probability(problem: &DecisionProblem) -> Result<f64> {
    Ok(infer_classical(problem.network(), problem.context(), &Evidence::new())?.probability(0))
}
