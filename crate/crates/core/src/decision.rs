//! Influence-diagram layer on top of a quantum-like Bayesian network.
//!
//! The decision problem has one chance parent `X₁` of the utility node, one
//! context variable `Z` observed by the decision rule, and a list of actions.
//! The factor `μ(a, z)` is the expected utility of action `a` in context `z`:
//!
//! ```text
//! classical:  μ(a, z) = Σ_x  w(x, z) · U(x, a)
//! quantum:    μ(a, z) = ⟨q | u⟩
//!             q = [w(t, z), w(f, z), 2·√(w(t, z)·w(f, z))·cos θ]
//!             u = [U(t, a), U(f, a), U(t, a)·U(f, a)]
//! ```
//!
//! where `w(x, z)` is the squared path weight of `X₁ = x, Z = z`. The
//! quantum factor is defined for a binary chance parent only, and its
//! weights are deliberately not renormalized.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::qlbn::{AmplitudeNetwork, Assignment, VarId};

/// `Σ Pr(x)·U(x)` over matching outcome lists.
pub fn expected_utility(dist: &[f64], utility: &[f64]) -> Result<f64> {
    if dist.len() != utility.len() {
        return Err(Error::KeyMismatch(format!(
            "{} probabilities vs {} utilities",
            dist.len(),
            utility.len()
        )));
    }
    if let Some(p) = dist.iter().find(|p| !(**p >= 0.0)) {
        return Err(Error::NegativeProbability(*p));
    }
    Ok(dist.iter().zip(utility).map(|(p, u)| p * u).sum())
}

/// Utilities keyed by `(chance parent outcome, action)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityTable {
    rows: Vec<Vec<f64>>,
}

impl UtilityTable {
    /// `rows[x][a]` is the utility of action `a` when the chance parent is `x`.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || width == 0 {
            return Err(Error::InvalidProblem("utility table is empty".into()));
        }
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidProblem("utility table rows differ in length".into()));
        }
        if rows.iter().flatten().any(|u| !u.is_finite()) {
            return Err(Error::NonFinite("utility"));
        }
        Ok(Self { rows })
    }

    pub fn get(&self, outcome: usize, action: usize) -> f64 {
        self.rows[outcome][action]
    }

    pub fn outcomes(&self) -> usize {
        self.rows.len()
    }

    pub fn actions(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Same table with `c` added to every entry.
    pub fn shifted(&self, c: f64) -> Result<Self> {
        Self::new(self.rows.iter().map(|r| r.iter().map(|u| u + c).collect()).collect())
    }
}

/// An influence diagram: network, decision actions, utility table, the
/// chance parent of the utility node and the context variable of the rule.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionProblem {
    network: AmplitudeNetwork,
    actions: Vec<String>,
    utility: UtilityTable,
    chance_parent: VarId,
    context: VarId,
    /// `weights[x][z]`: classical weight of `chance_parent = x, context = z`.
    weights: Vec<Vec<f64>>,
}

impl DecisionProblem {
    pub fn new(
        network: AmplitudeNetwork,
        actions: Vec<String>,
        utility: UtilityTable,
        chance_parent: VarId,
        context: VarId,
    ) -> Result<Self> {
        let parent_arity = network.variable(chance_parent)?.arity();
        let context_arity = network.variable(context)?.arity();
        if chance_parent == context {
            return Err(Error::InvalidProblem("chance parent and context must differ".into()));
        }
        if actions.is_empty() {
            return Err(Error::InvalidProblem("no actions".into()));
        }
        if utility.outcomes() != parent_arity || utility.actions() != actions.len() {
            return Err(Error::InvalidProblem(format!(
                "utility table is {}x{}, expected {}x{}",
                utility.outcomes(),
                utility.actions(),
                parent_arity,
                actions.len()
            )));
        }
        let mut weights = Vec::with_capacity(parent_arity);
        for x in 0..parent_arity {
            let mut row = Vec::with_capacity(context_arity);
            for z in 0..context_arity {
                let fixed = Assignment::new().with(chance_parent, x)?.with(context, z)?;
                row.push(network.classical_weight(&fixed)?);
            }
            weights.push(row);
        }
        Ok(Self { network, actions, utility, chance_parent, context, weights })
    }

    pub fn network(&self) -> &AmplitudeNetwork {
        &self.network
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn action_index(&self, label: &str) -> Option<usize> {
        self.actions.iter().position(|a| a == label)
    }

    pub fn utility(&self) -> &UtilityTable {
        &self.utility
    }

    pub fn chance_parent(&self) -> VarId {
        self.chance_parent
    }

    pub fn context(&self) -> VarId {
        self.context
    }

    pub fn context_outcomes(&self) -> &[String] {
        self.network.variables()[self.context.index()].outcomes()
    }

    /// Classical weight of `chance_parent = x` jointly with `context = z`.
    pub fn weight(&self, x: usize, z: usize) -> f64 {
        self.weights[x][z]
    }

    /// Same problem with a different utility table.
    pub fn with_utility(&self, utility: UtilityTable) -> Result<Self> {
        Self::new(self.network.clone(), self.actions.clone(), utility, self.chance_parent, self.context)
    }
}

/// The `⟨q | u⟩` split of one quantum expected utility.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumMeuFactor {
    pub q_vector: Vec<f64>,
    pub u_vector: Vec<f64>,
    pub value: f64,
}

impl QuantumMeuFactor {
    /// The interference entry, last element of `q`.
    pub fn interference(&self) -> f64 {
        *self.q_vector.last().expect("q vector is never empty")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeuMode {
    Classical,
    Quantum { theta: f64 },
}

/// Expected utility per `(context outcome, action)` plus the chosen action
/// per context.
#[derive(Debug, Clone, PartialEq)]
pub struct MeuResult {
    pub mode: MeuMode,
    pub contexts: Vec<String>,
    pub actions: Vec<String>,
    /// `values[z][a]`.
    pub values: Vec<Vec<f64>>,
    pub chosen: Vec<usize>,
    /// `factors[z][a]`; empty in classical mode.
    pub factors: Vec<Vec<QuantumMeuFactor>>,
}

impl MeuResult {
    pub fn expected_utility(&self, context: usize, action: usize) -> f64 {
        self.values[context][action]
    }

    fn assemble(problem: &DecisionProblem, mode: MeuMode, values: Vec<Vec<f64>>, factors: Vec<Vec<QuantumMeuFactor>>) -> Self {
        let chosen = values.iter().map(|row| argmax_first(row)).collect();
        MeuResult {
            mode,
            contexts: problem.context_outcomes().to_vec(),
            actions: problem.actions.clone(),
            values,
            chosen,
            factors,
        }
    }
}

fn argmax_first(row: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in row.iter().enumerate().skip(1) {
        if *v > row[best] {
            best = i;
        }
    }
    best
}

pub fn classical_meu(problem: &DecisionProblem) -> MeuResult {
    let parents = problem.utility.outcomes();
    let values = (0..problem.context_outcomes().len())
        .map(|z| {
            (0..problem.actions.len())
                .map(|a| (0..parents).map(|x| problem.weight(x, z) * problem.utility.get(x, a)).sum())
                .collect()
        })
        .collect();
    MeuResult::assemble(problem, MeuMode::Classical, values, Vec::new())
}

/// The `q`/`u` factor for one context and action at phase difference `theta`.
pub fn quantum_factor(problem: &DecisionProblem, context: usize, action: usize, theta: f64) -> Result<QuantumMeuFactor> {
    if problem.utility.outcomes() != 2 {
        let name = problem.network.variables()[problem.chance_parent.index()].name();
        return Err(Error::NonBinaryChanceParent(name.into()));
    }
    if !theta.is_finite() {
        return Err(Error::NonFinite("theta"));
    }
    let (pt, pf) = (problem.weight(0, context), problem.weight(1, context));
    let (ut, uf) = (problem.utility.get(0, action), problem.utility.get(1, action));
    let interference = 2.0 * libm::sqrt(pt * pf) * libm::cos(theta);
    let q_vector = alloc::vec![pt, pf, interference];
    let u_vector = alloc::vec![ut, uf, ut * uf];
    let value = q_vector.iter().zip(&u_vector).map(|(q, u)| q * u).sum();
    Ok(QuantumMeuFactor { q_vector, u_vector, value })
}

/// Interference-adjusted MEU; the same `theta` is used for every context
/// and action.
pub fn quantum_meu(problem: &DecisionProblem, theta: f64) -> Result<MeuResult> {
    let mut values = Vec::new();
    let mut factors = Vec::new();
    for z in 0..problem.context_outcomes().len() {
        let row = (0..problem.actions.len())
            .map(|a| quantum_factor(problem, z, a, theta))
            .collect::<Result<Vec<_>>>()?;
        values.push(row.iter().map(|f| f.value).collect());
        factors.push(row);
    }
    Ok(MeuResult::assemble(problem, MeuMode::Quantum { theta }, values, factors))
}

/// Deterministic optimal rule: per context, the action with the largest
/// expected utility; ties go to the earliest declared action.
pub fn decision_rule(meu: &MeuResult) -> Vec<usize> {
    meu.values.iter().map(|row| argmax_first(row)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlbn::NetworkBuilder;
    use alloc::vec;
    use core::f64::consts::{FRAC_PI_2, TAU};

    const DEFECT: usize = 0;
    const COOPERATE: usize = 1;

    fn pd_problem(p_defect: f64, p_coop: f64, dd: f64, dc: f64, cd: f64, cc: f64) -> DecisionProblem {
        let mut b = NetworkBuilder::new();
        let x1 = b.add_variable("X1", ["defect", "cooperate"]).unwrap();
        let x2 = b.add_variable("X2", ["averse", "seeking"]).unwrap();
        b.set_cpt_probabilities(x1, &[], vec![vec![0.5, 0.5]]).unwrap();
        b.set_cpt_probabilities(x2, &[x1], vec![vec![p_defect, 1.0 - p_defect], vec![p_coop, 1.0 - p_coop]])
            .unwrap();
        let utility = UtilityTable::new(vec![vec![dd, dc], vec![cd, cc]]).unwrap();
        DecisionProblem::new(b.build().unwrap(), vec!["defect".into(), "cooperate".into()], utility, x1, x2).unwrap()
    }

    fn shafir() -> DecisionProblem {
        pd_problem(0.97, 0.84, 30.0, 25.0, 85.0, 75.0)
    }

    #[test]
    fn expected_utility_examples() {
        assert_eq!(expected_utility(&[0.5, 0.5], &[30.0, 85.0]).unwrap(), 57.5);
        assert_eq!(expected_utility(&[0.5, 0.5], &[25.0, 75.0]).unwrap(), 50.0);
        assert_eq!(expected_utility(&[0.0, 1.0, 0.0], &[1.0, -4.5, 9.0]).unwrap(), -4.5);
        assert!(matches!(expected_utility(&[1.0], &[1.0, 2.0]), Err(Error::KeyMismatch(_))));
        assert!(matches!(expected_utility(&[-0.1, 1.1], &[1.0, 2.0]), Err(Error::NegativeProbability(_))));
    }

    #[test]
    fn classical_meu_shafir() {
        let meu = classical_meu(&shafir());
        assert!((meu.expected_utility(0, DEFECT) - 50.25).abs() < 1e-12);
        assert!((meu.expected_utility(0, COOPERATE) - 43.625).abs() < 1e-12);
        assert!((meu.expected_utility(1, DEFECT) - 7.25).abs() < 1e-12);
        assert!((meu.expected_utility(1, COOPERATE) - 6.375).abs() < 1e-12);
        assert_eq!(meu.chosen, vec![DEFECT, DEFECT]);
        assert_eq!(decision_rule(&meu), vec![DEFECT, DEFECT]);
        assert!(meu.factors.is_empty());
    }

    #[test]
    fn constant_utility_ties_go_to_first_action() {
        let p = pd_problem(0.97, 0.84, 7.0, 7.0, 7.0, 7.0);
        let meu = classical_meu(&p);
        assert!((meu.values[0][0] - 7.0 * 0.905).abs() < 1e-12);
        assert_eq!(meu.values[0][0], meu.values[0][1]);
        assert_eq!(meu.chosen, vec![DEFECT, DEFECT]);
    }

    // Quantum values frozen from a 30-digit mpmath evaluation.
    #[test]
    fn quantum_meu_shafir() {
        let meu = quantum_meu(&shafir(), 2.8151).unwrap();
        assert!((meu.expected_utility(0, DEFECT) + 2129.94342081506).abs() < 1e-9);
        assert!((meu.expected_utility(0, COOPERATE) + 1559.458397658132).abs() < 1e-9);
        assert!((meu.expected_utility(1, DEFECT) + 160.086_288_926_066_47).abs() < 1e-9);
        assert!((meu.expected_utility(1, COOPERATE) + 116.666_388_916_225_34).abs() < 1e-9);
        assert_eq!(meu.chosen, vec![COOPERATE, COOPERATE]);
        let f = &meu.factors[0][DEFECT];
        assert!((f.interference() + 0.854_977_812_084_337_2).abs() < 1e-12);
        assert_eq!(f.u_vector, vec![30.0, 85.0, 2550.0]);
        assert_eq!(f.q_vector.len(), 3);
    }

    #[test]
    fn quantum_meu_collapses_at_quarter_turn() {
        let p = shafir();
        let q = quantum_meu(&p, FRAC_PI_2).unwrap();
        let c = classical_meu(&p);
        for z in 0..2 {
            for a in 0..2 {
                assert!((q.values[z][a] - c.values[z][a]).abs() < 1e-12);
            }
        }
        assert_eq!(q.chosen, c.chosen);
    }

    #[test]
    fn quantum_meu_is_even_in_theta() {
        let p = shafir();
        for theta in [0.3, 1.0, 2.8151, 3.9] {
            let a = quantum_meu(&p, theta).unwrap();
            let b = quantum_meu(&p, TAU - theta).unwrap();
            for z in 0..2 {
                for act in 0..2 {
                    assert!((a.values[z][act] - b.values[z][act]).abs() <= 1e-9 * a.values[z][act].abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn quantum_rule_is_not_shift_invariant() {
        // Shifting utilities changes the product term, which can flip δ*.
        let p = shafir();
        let base = quantum_meu(&p, 2.8151).unwrap();
        assert_eq!(base.chosen[0], COOPERATE);
        let shifted = p.with_utility(p.utility().shifted(-80.0).unwrap()).unwrap();
        let moved = quantum_meu(&shifted, 2.8151).unwrap();
        assert_ne!(moved.chosen, base.chosen);
        // the classical rule is shift-invariant here since both actions share weights
        let c0 = classical_meu(&p);
        let c1 = classical_meu(&shifted);
        assert_eq!(c0.chosen, c1.chosen);
    }

    #[test]
    fn non_binary_chance_parent_is_rejected() {
        let mut b = NetworkBuilder::new();
        let x1 = b.add_variable("X1", ["a", "b", "c"]).unwrap();
        let x2 = b.add_variable("X2", ["u", "v"]).unwrap();
        b.set_cpt_probabilities(x1, &[], vec![vec![0.2, 0.3, 0.5]]).unwrap();
        b.set_cpt_probabilities(x2, &[x1], vec![vec![0.5, 0.5]; 3]).unwrap();
        let utility = UtilityTable::new(vec![vec![1.0, 2.0]; 3]).unwrap();
        let p = DecisionProblem::new(b.build().unwrap(), vec!["l".into(), "r".into()], utility, x1, x2).unwrap();
        assert!(classical_meu(&p).values[0][1] > 0.0);
        assert_eq!(quantum_meu(&p, 1.0), Err(Error::NonBinaryChanceParent("X1".into())));
    }

    #[test]
    fn invalid_problems() {
        let p = shafir();
        let net = p.network().clone();
        let x1 = p.chance_parent();
        let bad = UtilityTable::new(vec![vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]]).unwrap();
        assert!(DecisionProblem::new(net.clone(), vec!["a".into(), "b".into()], bad, x1, p.context()).is_err());
        let ok = UtilityTable::new(vec![vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap();
        assert!(DecisionProblem::new(net, vec!["a".into(), "b".into()], ok, x1, x1).is_err());
        assert!(UtilityTable::new(vec![vec![1.0], vec![f64::NAN]]).is_err());
        assert!(UtilityTable::new(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(UtilityTable::new(vec![]).is_err());
    }
}
