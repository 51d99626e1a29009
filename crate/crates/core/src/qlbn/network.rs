use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::amplitude::Amplitude;
use crate::error::{Error, Result};

/// Tolerance on `Σ |ψ|² = 1` for every row of a conditional amplitude table.
pub const CPT_NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Index of a variable inside its network, in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(usize);

impl VarId {
    pub(crate) fn new(index: usize) -> Self {
        VarId(index)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A discrete random variable with at least two ordered, unique outcome labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    name: String,
    outcomes: Vec<String>,
}

impl Variable {
    pub fn new<I, S>(name: impl Into<String>, outcomes: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let name = name.into();
        let outcomes: Vec<String> = outcomes.into_iter().map(Into::into).collect();
        if outcomes.len() < 2 {
            return Err(Error::TooFewOutcomes(name));
        }
        for (i, label) in outcomes.iter().enumerate() {
            if outcomes[..i].contains(label) {
                return Err(Error::DuplicateOutcome { variable: name, outcome: label.clone() });
            }
        }
        Ok(Self { name, outcomes })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn arity(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcome_index(&self, label: &str) -> Option<usize> {
        self.outcomes.iter().position(|o| o == label)
    }
}

/// Conditional amplitude table `ψ(X | Pa(X))`.
///
/// Rows are indexed by the parent assignment in mixed radix, first listed
/// parent most significant. Each row holds one amplitude per outcome of the
/// variable and satisfies `Σ |ψ|² = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeCpt {
    variable: VarId,
    parents: Vec<VarId>,
    rows: Vec<Vec<Amplitude>>,
}

impl AmplitudeCpt {
    pub fn variable(&self) -> VarId {
        self.variable
    }

    pub fn parents(&self) -> &[VarId] {
        &self.parents
    }

    pub fn rows(&self) -> &[Vec<Amplitude>] {
        &self.rows
    }

    /// Row selected by a full assignment (indexed by variable).
    pub(crate) fn row_for(&self, net: &AmplitudeNetwork, full: &[usize]) -> usize {
        self.parents
            .iter()
            .fold(0, |acc, p| acc * net.variables[p.0].arity() + full[p.0])
    }
}

/// A quantum-like Bayesian network: a DAG of variables, each carrying a
/// conditional amplitude table. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeNetwork {
    variables: Vec<Variable>,
    cpts: Vec<AmplitudeCpt>,
}

impl AmplitudeNetwork {
    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> {
        (0..self.variables.len()).map(VarId)
    }

    pub fn variable(&self, id: VarId) -> Result<&Variable> {
        self.variables
            .get(id.0)
            .ok_or_else(|| Error::UnknownVariable(id.to_string()))
    }

    pub fn cpt(&self, id: VarId) -> Result<&AmplitudeCpt> {
        self.cpts
            .get(id.0)
            .ok_or_else(|| Error::UnknownVariable(id.to_string()))
    }

    /// Looks a variable up by name.
    pub fn var(&self, name: &str) -> Result<VarId> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .map(VarId)
            .ok_or_else(|| Error::UnknownVariable(format!("`{name}`")))
    }

    /// Looks an outcome index up by variable id and label.
    pub fn outcome(&self, id: VarId, label: &str) -> Result<usize> {
        let v = self.variable(id)?;
        v.outcome_index(label).ok_or_else(|| Error::InvalidOutcome {
            variable: v.name.clone(),
            outcome: format!("`{label}`"),
        })
    }

    /// Builds an assignment from `(variable name, outcome label)` pairs.
    pub fn assignment(&self, pairs: &[(&str, &str)]) -> Result<Assignment> {
        let mut a = Assignment::new();
        for (name, label) in pairs {
            let id = self.var(name)?;
            let outcome = self.outcome(id, label)?;
            if a.get(id).is_some() {
                return Err(Error::DuplicateAssignment((*name).to_string()));
            }
            a.insert(id, outcome)?;
        }
        Ok(a)
    }

    /// Checks every assigned variable exists and every outcome is in range.
    pub fn check_assignment(&self, a: &Assignment) -> Result<()> {
        for (id, outcome) in a.iter() {
            let v = self.variable(id)?;
            if outcome >= v.arity() {
                return Err(Error::InvalidOutcome {
                    variable: v.name.clone(),
                    outcome: format!("index {outcome}"),
                });
            }
        }
        Ok(())
    }

    /// Product of the table amplitudes selected by a full assignment, given
    /// as one outcome index per variable in declaration order.
    pub(crate) fn path_amplitude(&self, full: &[usize]) -> Amplitude {
        self.cpts.iter().fold(Amplitude::ONE, |acc, cpt| {
            let row = cpt.row_for(self, full);
            acc * cpt.rows[row][full[cpt.variable.0]]
        })
    }

    /// Joint amplitude `ψ(X_1, …, X_N) = ∏ ψ(X_j | Pa(X_j))` of a full assignment.
    pub fn joint_amplitude(&self, assignment: &Assignment) -> Result<Amplitude> {
        self.check_assignment(assignment)?;
        let mut full = Vec::with_capacity(self.len());
        for id in self.ids() {
            match assignment.get(id) {
                Some(o) => full.push(o),
                None => return Err(Error::MissingAssignment(self.variables[id.0].name.clone())),
            }
        }
        Ok(self.path_amplitude(&full))
    }

    /// Classical marginal weight of a partial assignment: the sum of `|ψ|²`
    /// over every completion of the unassigned variables. No interference.
    pub fn classical_weight(&self, fixed: &Assignment) -> Result<f64> {
        self.check_assignment(fixed)?;
        let free: Vec<VarId> = self.ids().filter(|id| fixed.get(*id).is_none()).collect();
        let mut full: Vec<usize> = self.ids().map(|id| fixed.get(id).unwrap_or(0)).collect();
        let mut total = 0.0;
        for_each_configuration(self, &free, &mut full, |full| {
            total += self.path_amplitude(full).born_probability();
        });
        Ok(total)
    }
}

/// Visits every joint configuration of `vars` in lexicographic order (first
/// variable slowest), writing each into `full` before calling `visit`.
pub(crate) fn for_each_configuration(
    net: &AmplitudeNetwork,
    vars: &[VarId],
    full: &mut [usize],
    mut visit: impl FnMut(&[usize]),
) {
    for v in vars {
        full[v.0] = 0;
    }
    loop {
        visit(full);
        let mut k = vars.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            let v = vars[k].0;
            full[v] += 1;
            if full[v] < net.variables[v].arity() {
                break;
            }
            full[v] = 0;
        }
    }
}

/// Number of joint configurations of `vars`.
pub(crate) fn configuration_count(net: &AmplitudeNetwork, vars: &[VarId]) -> usize {
    vars.iter().map(|v| net.variables[v.0].arity()).product()
}

/// Incremental construction of an [`AmplitudeNetwork`].
#[derive(Debug, Default, Clone)]
pub struct NetworkBuilder {
    variables: Vec<Variable>,
    cpts: Vec<Option<AmplitudeCpt>>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable<I, S>(&mut self, name: impl Into<String>, outcomes: I) -> Result<VarId>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let var = Variable::new(name, outcomes)?;
        if self.variables.iter().any(|v| v.name == var.name) {
            return Err(Error::DuplicateVariable(var.name));
        }
        self.variables.push(var);
        self.cpts.push(None);
        Ok(VarId(self.variables.len() - 1))
    }

    fn name_of(&self, id: VarId) -> Result<&str> {
        self.variables
            .get(id.0)
            .map(|v| v.name.as_str())
            .ok_or_else(|| Error::UnknownVariable(id.to_string()))
    }

    /// Attaches `ψ(var | parents)`. `rows` is indexed by parent assignment in
    /// mixed radix, first parent most significant.
    pub fn set_cpt(&mut self, var: VarId, parents: &[VarId], rows: Vec<Vec<Amplitude>>) -> Result<()> {
        let name = self.name_of(var)?.to_string();
        if self.cpts[var.0].is_some() {
            return Err(Error::DuplicateCpt(name));
        }
        let mut expected_rows = 1usize;
        for (i, p) in parents.iter().enumerate() {
            self.name_of(*p)?;
            if *p == var {
                return Err(Error::Cycle(name));
            }
            if parents[..i].contains(p) {
                return Err(Error::CptShape { variable: name, detail: format!("parent {p} listed twice") });
            }
            expected_rows *= self.variables[p.0].arity();
        }
        if rows.len() != expected_rows {
            return Err(Error::CptShape {
                variable: name,
                detail: format!("expected {expected_rows} parent rows, got {}", rows.len()),
            });
        }
        let arity = self.variables[var.0].arity();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != arity {
                return Err(Error::CptShape {
                    variable: name,
                    detail: format!("row {r} has {} entries, expected {arity}", row.len()),
                });
            }
            let sum: f64 = row.iter().map(Amplitude::born_probability).sum();
            if !((sum - 1.0).abs() <= CPT_NORMALIZATION_TOLERANCE) {
                return Err(Error::NotNormalized { variable: name, row: r, sum });
            }
        }
        self.cpts[var.0] = Some(AmplitudeCpt { variable: var, parents: parents.to_vec(), rows });
        Ok(())
    }

    /// Attaches a table given as classical probabilities; each entry becomes
    /// an amplitude of magnitude `√p` and phase 0.
    pub fn set_cpt_probabilities(&mut self, var: VarId, parents: &[VarId], rows: Vec<Vec<f64>>) -> Result<()> {
        let rows = rows
            .into_iter()
            .map(|row| row.into_iter().map(|p| Amplitude::from_probability(p, 0.0)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        self.set_cpt(var, parents, rows)
    }

    /// Validates completeness and acyclicity.
    pub fn build(self) -> Result<AmplitudeNetwork> {
        let mut cpts = Vec::with_capacity(self.cpts.len());
        for (i, cpt) in self.cpts.into_iter().enumerate() {
            match cpt {
                Some(c) => cpts.push(c),
                None => return Err(Error::MissingCpt(self.variables[i].name.clone())),
            }
        }
        check_acyclic(&self.variables, &cpts)?;
        Ok(AmplitudeNetwork { variables: self.variables, cpts })
    }
}

fn check_acyclic(variables: &[Variable], cpts: &[AmplitudeCpt]) -> Result<()> {
    // Kahn's algorithm over child -> parent edges.
    let n = variables.len();
    let mut indegree = vec![0usize; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for cpt in cpts {
        for p in &cpt.parents {
            children[p.0].push(cpt.variable.0);
            indegree[cpt.variable.0] += 1;
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut seen = 0;
    while let Some(v) = ready.pop() {
        seen += 1;
        for &c in &children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.push(c);
            }
        }
    }
    if seen == n {
        Ok(())
    } else {
        let stuck = (0..n).find(|&i| indegree[i] > 0).unwrap_or(0);
        Err(Error::Cycle(variables[stuck].name.clone()))
    }
}

/// A partial (or full) assignment of outcomes to variables. A variable
/// appears at most once.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    entries: BTreeMap<VarId, usize>,
}

/// Observed outcomes conditioning a query.
pub type Evidence = Assignment;

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, var: VarId, outcome: usize) -> Result<()> {
        if self.entries.contains_key(&var) {
            return Err(Error::DuplicateAssignment(var.to_string()));
        }
        self.entries.insert(var, outcome);
        Ok(())
    }

    pub fn with(mut self, var: VarId, outcome: usize) -> Result<Self> {
        self.insert(var, outcome)?;
        Ok(self)
    }

    pub fn get(&self, var: VarId) -> Option<usize> {
        self.entries.get(&var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, usize)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amp(p: f64) -> Amplitude {
        Amplitude::from_probability(p, 0.0).unwrap()
    }

    fn shafir() -> (AmplitudeNetwork, VarId, VarId) {
        let mut b = NetworkBuilder::new();
        let x1 = b.add_variable("X1", ["defect", "cooperate"]).unwrap();
        let x2 = b.add_variable("X2", ["averse", "seeking"]).unwrap();
        b.set_cpt_probabilities(x1, &[], vec![vec![0.5, 0.5]]).unwrap();
        b.set_cpt_probabilities(x2, &[x1], vec![vec![0.97, 0.03], vec![0.84, 0.16]]).unwrap();
        (b.build().unwrap(), x1, x2)
    }

    #[test]
    fn joint_amplitude_two_node() {
        let (net, _, _) = shafir();
        let a = net.assignment(&[("X1", "defect"), ("X2", "averse")]).unwrap();
        // sqrt(0.485) = 0.696419413859205966923386946426
        let j = net.joint_amplitude(&a).unwrap();
        assert!((j.magnitude() - 0.696_419_413_859_206).abs() < 1e-15);
    }

    #[test]
    fn joint_amplitude_deterministic_chain_and_annihilation() {
        let mut b = NetworkBuilder::new();
        let a = b.add_variable("A", ["0", "1"]).unwrap();
        let c = b.add_variable("C", ["0", "1"]).unwrap();
        b.set_cpt(a, &[], vec![vec![Amplitude::ONE, Amplitude::ZERO]]).unwrap();
        b.set_cpt(c, &[a], vec![vec![Amplitude::ZERO, Amplitude::new(1.0, 2.0).unwrap()], vec![Amplitude::ONE, Amplitude::ZERO]])
            .unwrap();
        let net = b.build().unwrap();
        let one = net.joint_amplitude(&net.assignment(&[("A", "0"), ("C", "1")]).unwrap()).unwrap();
        assert_eq!(one.magnitude(), 1.0);
        let zero = net.joint_amplitude(&net.assignment(&[("A", "0"), ("C", "0")]).unwrap()).unwrap();
        assert_eq!(zero.magnitude(), 0.0);
    }

    #[test]
    fn joint_amplitude_errors() {
        let (net, x1, _) = shafir();
        let partial = Assignment::new().with(x1, 0).unwrap();
        assert_eq!(net.joint_amplitude(&partial), Err(Error::MissingAssignment("X2".into())));
        let bad = Assignment::new().with(x1, 5).unwrap();
        assert!(matches!(net.joint_amplitude(&bad), Err(Error::InvalidOutcome { .. })));
        assert!(matches!(net.assignment(&[("X1", "maybe")]), Err(Error::InvalidOutcome { .. })));
        assert!(matches!(net.assignment(&[("X9", "defect")]), Err(Error::UnknownVariable(_))));
        assert!(matches!(
            net.assignment(&[("X1", "defect"), ("X1", "cooperate")]),
            Err(Error::DuplicateAssignment(_))
        ));
    }

    #[test]
    fn rejects_cycles() {
        let mut b = NetworkBuilder::new();
        let a = b.add_variable("A", ["0", "1"]).unwrap();
        let c = b.add_variable("C", ["0", "1"]).unwrap();
        let row = vec![amp(0.5), amp(0.5)];
        b.set_cpt(a, &[c], vec![row.clone(), row.clone()]).unwrap();
        b.set_cpt(c, &[a], vec![row.clone(), row.clone()]).unwrap();
        assert!(matches!(b.build(), Err(Error::Cycle(_))));

        let mut b = NetworkBuilder::new();
        let a = b.add_variable("A", ["0", "1"]).unwrap();
        assert!(matches!(b.set_cpt(a, &[a], vec![row.clone(), row]), Err(Error::Cycle(_))));
    }

    #[test]
    fn rejects_bad_tables() {
        let mut b = NetworkBuilder::new();
        let a = b.add_variable("A", ["0", "1"]).unwrap();
        let c = b.add_variable("C", ["0", "1", "2"]).unwrap();
        assert!(matches!(
            b.set_cpt_probabilities(a, &[], vec![vec![0.5, 0.6]]),
            Err(Error::NotNormalized { row: 0, .. })
        ));
        assert!(matches!(b.set_cpt_probabilities(c, &[a], vec![vec![0.2, 0.3, 0.5]]), Err(Error::CptShape { .. })));
        assert!(matches!(b.set_cpt_probabilities(c, &[a], vec![vec![0.5, 0.5], vec![0.5, 0.5]]), Err(Error::CptShape { .. })));
        assert!(matches!(b.set_cpt_probabilities(a, &[VarId(7)], vec![]), Err(Error::UnknownVariable(_))));
        b.set_cpt_probabilities(a, &[], vec![vec![0.5, 0.5]]).unwrap();
        assert!(matches!(b.set_cpt_probabilities(a, &[], vec![vec![0.5, 0.5]]), Err(Error::DuplicateCpt(_))));
        assert_eq!(b.build(), Err(Error::MissingCpt("C".into())));
    }

    #[test]
    fn rejects_bad_variables() {
        assert!(matches!(Variable::new("A", ["only"]), Err(Error::TooFewOutcomes(_))));
        assert!(matches!(Variable::new("A", ["x", "y", "x"]), Err(Error::DuplicateOutcome { .. })));
        let mut b = NetworkBuilder::new();
        b.add_variable("A", ["0", "1"]).unwrap();
        assert!(matches!(b.add_variable("A", ["0", "1"]), Err(Error::DuplicateVariable(_))));
    }

    #[test]
    fn classical_weight_marginalizes() {
        let (net, x1, x2) = shafir();
        let w = net.classical_weight(&Assignment::new().with(x1, 0).unwrap().with(x2, 0).unwrap()).unwrap();
        assert!((w - 0.485).abs() < 1e-15);
        let w = net.classical_weight(&Assignment::new().with(x2, 0).unwrap()).unwrap();
        assert!((w - 0.905).abs() < 1e-15);
        let total = net.classical_weight(&Assignment::new()).unwrap();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn configuration_order_is_lexicographic() {
        let mut b = NetworkBuilder::new();
        let a = b.add_variable("A", ["0", "1"]).unwrap();
        let c = b.add_variable("C", ["0", "1", "2"]).unwrap();
        b.set_cpt_probabilities(a, &[], vec![vec![0.5, 0.5]]).unwrap();
        b.set_cpt_probabilities(c, &[], vec![vec![0.2, 0.3, 0.5]]).unwrap();
        let net = b.build().unwrap();
        let mut seen = Vec::new();
        let mut full = vec![0, 0];
        for_each_configuration(&net, &[a, c], &mut full, |f| seen.push((f[0], f[1])));
        assert_eq!(seen, vec![(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]);
        assert_eq!(configuration_count(&net, &[a, c]), 6);
        let mut n = 0;
        for_each_configuration(&net, &[], &mut full, |_| n += 1);
        assert_eq!(n, 1);
    }
}
