//! Fitting and sweeping the single interference phase difference `θ`.
//!
//! Both operations assume a query with exactly two unobserved configurations,
//! so one phase difference controls the whole interference term.
//!
//! The fitted probability is a Möbius function of `cos θ`, hence each target
//! has at most one `cos θ` and at most two roots `{θ, 2π − θ}`. The solver
//! does not rely on that: it scans a dense grid for sign changes and refines
//! every bracket by bisection.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::decision::{quantum_meu, DecisionProblem};
use crate::error::{Error, Result};
use crate::qlbn::{AmplitudeNetwork, Evidence, PhaseAssignment, QueryPlan, VarId};

/// Default number of grid points over `[0, 2π)` for [`fit_theta`].
pub const DEFAULT_FIT_GRID: usize = 1_000_000;

/// Every reported solution reproduces the target at least this closely.
pub const FIT_RESIDUAL_TOLERANCE: f64 = 1e-6;

/// Bisection stops once a bracket is narrower than this.
const BISECTION_WIDTH: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaFitResult {
    /// Ascending, canonical in `[0, 2π)`.
    pub solutions: Vec<f64>,
    /// `|model − target|` at each solution.
    pub residuals: Vec<f64>,
    /// Grid spacing used to bracket roots.
    pub grid_resolution: f64,
}

impl ThetaFitResult {
    /// Distance from `theta` to the closest solution, measured on the circle.
    pub fn distance_to(&self, theta: f64) -> Option<f64> {
        self.solutions
            .iter()
            .map(|s| circular_distance(*s, theta))
            .min_by(f64::total_cmp)
    }
}

/// Absolute angular distance on the circle of circumference 2π.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = libm::fmod(libm::fabs(a - b), TAU);
    d.min(TAU - d)
}

/// One sample of a sweep; `value` is `None` where inference was degenerate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepValue {
    pub theta: f64,
    pub value: Option<f64>,
}

/// Samples of some quantity over a uniform `θ` grid on `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCurve {
    /// What `value` means, e.g. `P(X2=averse)`.
    pub label: String,
    pub samples: Vec<SweepValue>,
}

impl SweepCurve {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `(min, max)` over non-gap samples.
    pub fn envelope(&self) -> Option<(f64, f64)> {
        self.samples.iter().filter_map(|s| s.value).fold(None, |acc, v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
    }
}

/// Closed interval of phase differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaInterval {
    pub start: f64,
    pub end: f64,
}

impl ThetaInterval {
    pub fn contains(&self, theta: f64) -> bool {
        self.start <= theta && theta <= self.end
    }
}

fn grid(steps: usize) -> impl Iterator<Item = f64> {
    (0..steps).map(move |k| TAU * k as f64 / steps as f64)
}

fn two_configuration_plan(net: &AmplitudeNetwork, query: VarId, evidence: &Evidence) -> Result<QueryPlan> {
    let plan = QueryPlan::new(net, query, evidence)?;
    if plan.configurations() != 2 {
        return Err(Error::NotSingleInterferencePair(plan.configurations()));
    }
    Ok(plan)
}

fn check_outcome(net: &AmplitudeNetwork, query: VarId, outcome: usize) -> Result<()> {
    let v = net.variable(query)?;
    if outcome >= v.arity() {
        return Err(Error::InvalidOutcome { variable: v.name().into(), outcome: format!("index {outcome}") });
    }
    Ok(())
}

/// Exact `sin`/`cos` are recomputed this often during a grid scan; between
/// resyncs the angle is advanced by rotation.
const RESYNC_EVERY: usize = 1024;

/// Per-outcome scores of a two-configuration query in the form
/// `c + k·cos(θ + φ)`, evaluated from a precomputed `sin θ`, `cos θ`.
struct PairScan {
    /// `(c, k·cos φ, k·sin φ)` per outcome.
    terms: Vec<(f64, f64, f64)>,
}

impl PairScan {
    fn new(plan: &QueryPlan) -> Self {
        let terms = (0..plan.outcomes())
            .map(|x| {
                let (a, b) = (plan.paths(x)[0], plan.paths(x)[1]);
                let c = a.born_probability() + b.born_probability();
                let k = 2.0 * a.magnitude() * b.magnitude();
                let (s, co) = libm::sincos(a.phase() - b.phase());
                (c, k * co, k * s)
            })
            .collect();
        PairScan { terms }
    }

    fn probability(&self, outcome: usize, sin: f64, cos: f64) -> Option<f64> {
        let mut total = 0.0;
        let mut target = 0.0;
        for (x, (c, kc, ks)) in self.terms.iter().enumerate() {
            let score = (c + kc * cos - ks * sin).max(0.0);
            total += score;
            if x == outcome {
                target = score;
            }
        }
        (total > 0.0).then(|| target / total)
    }
}

/// Bisection on a bracket where `f(lo)` and `f(hi)` have opposite signs.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> Option<f64>) -> f64 {
    let lo_positive = f(lo).is_some_and(|v| v > 0.0);
    for _ in 0..200 {
        if hi - lo <= BISECTION_WIDTH {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match f(mid) {
            Some(0.0) => return mid,
            Some(v) if (v > 0.0) == lo_positive => lo = mid,
            _ => hi = mid,
        }
    }
    0.5 * (lo + hi)
}

/// Finds every `θ` at which the normalized probability of `target_outcome`
/// equals `target_probability`, using the default grid.
pub fn fit_theta(
    net: &AmplitudeNetwork,
    query: VarId,
    evidence: &Evidence,
    target_outcome: usize,
    target_probability: f64,
) -> Result<ThetaFitResult> {
    fit_theta_with_grid(net, query, evidence, target_outcome, target_probability, DEFAULT_FIT_GRID)
}

pub fn fit_theta_with_grid(
    net: &AmplitudeNetwork,
    query: VarId,
    evidence: &Evidence,
    target_outcome: usize,
    target_probability: f64,
    grid_points: usize,
) -> Result<ThetaFitResult> {
    if !target_probability.is_finite() {
        return Err(Error::NonFinite("target probability"));
    }
    if !(0.0..=1.0).contains(&target_probability) {
        return Err(Error::ProbabilityOutOfRange(target_probability));
    }
    if grid_points < 2 {
        return Err(Error::InvalidSteps(grid_points));
    }
    check_outcome(net, query, target_outcome)?;
    let plan = two_configuration_plan(net, query, evidence)?;
    let residual = |theta: f64| plan.probability_at(target_outcome, theta).map(|p| p - target_probability);

    let scan = PairScan::new(&plan);
    let step = TAU / grid_points as f64;
    let (step_sin, step_cos) = libm::sincos(step);
    let mut solutions = Vec::new();
    let mut lowest = f64::INFINITY;
    let mut highest = f64::NEG_INFINITY;
    let mut previous: Option<(f64, f64)> = None;
    let (mut sin, mut cos) = (0.0, 1.0);
    // k = grid_points closes the circle at 2π
    for k in 0..=grid_points {
        let theta = if k == grid_points { TAU } else { TAU * k as f64 / grid_points as f64 };
        if k % RESYNC_EVERY == 0 {
            (sin, cos) = libm::sincos(theta);
        }
        let value = scan.probability(target_outcome, sin, cos).map(|p| p - target_probability);
        (sin, cos) = (sin * step_cos + cos * step_sin, cos * step_cos - sin * step_sin);
        let Some(value) = value else {
            previous = None;
            continue;
        };
        if k < grid_points {
            lowest = lowest.min(value + target_probability);
            highest = highest.max(value + target_probability);
            if value == 0.0 && residual(theta) == Some(0.0) {
                solutions.push(theta);
                previous = Some((theta, value));
                continue;
            }
        }
        if let Some((t0, v0)) = previous {
            if (v0 < 0.0 && value > 0.0) || (v0 > 0.0 && value < 0.0) {
                let root = bisect(t0, theta, residual);
                solutions.push(if root >= TAU { 0.0 } else { root });
            }
        }
        previous = Some((theta, value));
    }

    if solutions.is_empty() {
        return Err(Error::NoSolution { min: lowest, max: highest });
    }
    solutions.sort_by(f64::total_cmp);
    solutions.dedup();
    let residuals: Vec<f64> = solutions
        .iter()
        .map(|t| residual(*t).map_or(f64::INFINITY, libm::fabs))
        .collect();
    debug_assert!(residuals.iter().all(|r| *r <= FIT_RESIDUAL_TOLERANCE));
    Ok(ThetaFitResult { solutions, residuals, grid_resolution: step })
}

/// Normalized probability of `outcome` on a uniform grid of `steps` phase
/// differences over `[0, 2π)`.
pub fn sweep_probability(
    net: &AmplitudeNetwork,
    query: VarId,
    evidence: &Evidence,
    outcome: usize,
    steps: usize,
) -> Result<SweepCurve> {
    if steps < 2 {
        return Err(Error::InvalidSteps(steps));
    }
    check_outcome(net, query, outcome)?;
    let plan = two_configuration_plan(net, query, evidence)?;
    let samples = grid(steps)
        .map(|theta| {
            let value = match plan.evaluate(&PhaseAssignment::difference(theta)?) {
                Ok(r) => Some(r.probability(outcome)),
                Err(Error::DegenerateQuery(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(SweepValue { theta, value })
        })
        .collect::<Result<Vec<_>>>()?;
    let v = net.variable(query)?;
    let label = format!("P({}={})", v.name(), v.outcomes()[outcome]);
    Ok(SweepCurve { label, samples })
}

/// Expected-utility curves over `θ` and the regions where one action beats
/// another.
#[derive(Debug, Clone, PartialEq)]
pub struct EuSweep {
    pub contexts: Vec<String>,
    pub actions: Vec<String>,
    /// `curves[z][a]`.
    pub curves: Vec<Vec<SweepCurve>>,
    /// Per context: intervals where the favoured action strictly beats the
    /// baseline action.
    pub dominance: Vec<Vec<ThetaInterval>>,
    pub favoured: usize,
    pub baseline: usize,
}

pub fn sweep_expected_utility(
    problem: &DecisionProblem,
    steps: usize,
    favoured: usize,
    baseline: usize,
) -> Result<EuSweep> {
    if steps < 2 {
        return Err(Error::InvalidSteps(steps));
    }
    let actions = problem.actions().to_vec();
    if favoured >= actions.len() || baseline >= actions.len() || favoured == baseline {
        return Err(Error::InvalidProblem(format!(
            "favoured/baseline actions {favoured}/{baseline} invalid for {} actions",
            actions.len()
        )));
    }
    let contexts = problem.context_outcomes().to_vec();
    let thetas: Vec<f64> = grid(steps).collect();
    let tables = thetas
        .iter()
        .map(|t| quantum_meu(problem, *t))
        .collect::<Result<Vec<_>>>()?;

    let mut curves = Vec::with_capacity(contexts.len());
    let mut dominance = Vec::with_capacity(contexts.len());
    for (z, context) in contexts.iter().enumerate() {
        curves.push(
            actions
                .iter()
                .enumerate()
                .map(|(a, action)| SweepCurve {
                    label: format!("EU[{action} | {context}]"),
                    samples: thetas
                        .iter()
                        .zip(&tables)
                        .map(|(theta, m)| SweepValue { theta: *theta, value: Some(m.values[z][a]) })
                        .collect(),
                })
                .collect(),
        );

        let ahead = |theta: f64| -> Result<bool> {
            let m = quantum_meu(problem, theta)?;
            Ok(m.values[z][favoured] > m.values[z][baseline])
        };
        let mut inside: Vec<bool> = tables.iter().map(|m| m.values[z][favoured] > m.values[z][baseline]).collect();
        inside.push(ahead(TAU)?);
        let mut grid_ext = thetas.clone();
        grid_ext.push(TAU);

        let mut intervals = Vec::new();
        let mut open = if inside[0] { Some(0.0) } else { None };
        for k in 1..grid_ext.len() {
            if inside[k] == inside[k - 1] {
                continue;
            }
            let edge = refine_edge(grid_ext[k - 1], grid_ext[k], inside[k - 1], ahead)?;
            match open.take() {
                Some(start) => intervals.push(ThetaInterval { start, end: edge }),
                None => open = Some(edge),
            }
        }
        if let Some(start) = open {
            intervals.push(ThetaInterval { start, end: TAU });
        }
        dominance.push(intervals);
    }
    Ok(EuSweep { contexts, actions, curves, dominance, favoured, baseline })
}

/// Bisects the switch point of a boolean predicate between `lo` and `hi`.
fn refine_edge(mut lo: f64, mut hi: f64, at_lo: bool, pred: impl Fn(f64) -> Result<bool>) -> Result<f64> {
    for _ in 0..200 {
        if hi - lo <= BISECTION_WIDTH {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if pred(mid)? == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
