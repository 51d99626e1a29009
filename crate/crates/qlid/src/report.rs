//! Recomputes every published quantity for a set of experiments and compares
//! it with the printed value.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::io::Write;

use qlid_core::{
    circular_distance, classical_meu, fit_theta_with_grid, quantum_meu, Error as ModelError, Evidence, MeuResult,
    DEFAULT_FIT_GRID,
};
use rayon::prelude::*;

use crate::error::Result;
use crate::record::{averse_probability, classical_averse_probability, Comparison, ExperimentRecord, MeuKind};
use crate::table::format_sig;

pub const CLASSICAL_PROBABILITY_TOLERANCE: f64 = 5e-4;
pub const UNKNOWN_PROBABILITY_TOLERANCE: f64 = 5e-3;
pub const THETA_TOLERANCE: f64 = 2e-3;
pub const CLASSICAL_MEU_TOLERANCE: f64 = 0.01;
pub const QUANTUM_MEU_TOLERANCE: f64 = 0.1;

#[derive(Debug, Clone, Copy)]
pub struct ReproduceOptions {
    pub grid: usize,
    pub parallel: bool,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        ReproduceOptions { grid: DEFAULT_FIT_GRID, parallel: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Excluded,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "true",
            Verdict::Fail => "false",
            Verdict::Excluded => "excluded",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub experiment: String,
    pub quantity: String,
    pub published: f64,
    /// NaN when nothing could be computed (e.g. no phase reaches the target).
    pub computed: f64,
    pub delta: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl ReportRow {
    fn new(experiment: &str, quantity: String, published: f64, computed: f64, delta: f64, tolerance: f64) -> Self {
        let verdict = if delta <= tolerance { Verdict::Pass } else { Verdict::Fail };
        ReportRow { experiment: experiment.to_string(), quantity, published, computed, delta, tolerance, verdict }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub name: String,
    pub stp_violation: bool,
    pub theta: Option<f64>,
    pub classical_probability: f64,
    pub quantum_probability: Option<f64>,
    /// Every phase difference reproducing the observed probability.
    pub theta_solutions: Vec<f64>,
    pub classical: MeuResult,
    pub quantum: Option<MeuResult>,
    pub rows: Vec<ReportRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub experiments: Vec<ExperimentReport>,
}

/// Reproduces every experiment. Mismatches become failing rows; only
/// malformed inputs return an error.
pub fn reproduce(records: &[ExperimentRecord], options: ReproduceOptions) -> Result<RunReport> {
    let experiments = if options.parallel {
        records.par_iter().map(|r| reproduce_one(r, options.grid)).collect::<Result<Vec<_>>>()?
    } else {
        records.iter().map(|r| reproduce_one(r, options.grid)).collect::<Result<Vec<_>>>()?
    };
    Ok(RunReport { experiments })
}

pub fn reproduce_one(record: &ExperimentRecord, grid: usize) -> Result<ExperimentReport> {
    let name = record.name.as_str();
    let problem = record.problem()?;
    let mut rows = Vec::new();

    let classical_probability = classical_averse_probability(&problem)?;
    rows.push(ReportRow::new(
        name,
        "classical_probability".into(),
        record.p_classical,
        classical_probability,
        (classical_probability - record.p_classical).abs(),
        CLASSICAL_PROBABILITY_TOLERANCE,
    ));

    let fit = fit_theta_with_grid(problem.network(), problem.context(), &Evidence::new(), 0, record.p_unknown_observed, grid);
    let theta_solutions = match fit {
        Ok(f) => f.solutions,
        Err(ModelError::NoSolution { .. }) => Vec::new(),
        Err(e) => return Err(e.into()),
    };

    let mut quantum_probability = None;
    let mut quantum = None;
    if let Some(theta) = record.theta {
        let p = averse_probability(&problem, theta)?;
        quantum_probability = Some(p);
        rows.push(ReportRow::new(
            name,
            "unknown_probability".into(),
            record.p_unknown_observed,
            p,
            (p - record.p_unknown_observed).abs(),
            UNKNOWN_PROBABILITY_TOLERANCE,
        ));

        // report the solution, or its mirror, that lies closest to the printed value
        let closest = theta_solutions
            .iter()
            .flat_map(|s| [*s, TAU - s])
            .min_by(|a, b| circular_distance(*a, theta).total_cmp(&circular_distance(*b, theta)));
        let (computed, delta) = match closest {
            Some(s) => (s, circular_distance(s, theta)),
            None => (f64::NAN, f64::INFINITY),
        };
        rows.push(ReportRow::new(name, "theta_fit".into(), theta, computed, delta, THETA_TOLERANCE));
        quantum = Some(quantum_meu(&problem, theta)?);
    }

    let classical = classical_meu(&problem);
    if let Some(reference) = &record.reference {
        for cell in &reference.cells {
            let (table, tolerance) = match cell.kind {
                MeuKind::Classical => (&classical, CLASSICAL_MEU_TOLERANCE),
                MeuKind::Quantum => match &quantum {
                    Some(q) => (q, QUANTUM_MEU_TOLERANCE),
                    None => continue,
                },
            };
            let computed = table.values[cell.context][cell.action];
            let delta = match cell.comparison {
                Comparison::Magnitude => (computed.abs() - cell.value.abs()).abs(),
                _ => (computed - cell.value).abs(),
            };
            let prefix = if cell.comparison == Comparison::Magnitude { "meu_abs_" } else { "meu_" };
            let mut row = ReportRow::new(name, format!("{prefix}{}", cell.key()), cell.value, computed, delta, tolerance);
            if cell.comparison == Comparison::Excluded {
                row.verdict = Verdict::Excluded;
            }
            rows.push(row);
        }
    }

    Ok(ExperimentReport {
        name: record.name.clone(),
        stp_violation: record.stp_violation,
        theta: record.theta,
        classical_probability,
        quantum_probability,
        theta_solutions,
        classical,
        quantum,
        rows,
    })
}

pub const CSV_HEADER: [&str; 7] = ["experiment", "quantity", "paper_value", "computed", "delta", "tolerance", "pass"];

impl RunReport {
    pub fn rows(&self) -> impl Iterator<Item = &ReportRow> {
        self.experiments.iter().flat_map(|e| e.rows.iter())
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.rows().filter(|r| r.verdict == verdict).count()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in self.rows() {
            w.write_record([
                r.experiment.clone(),
                r.quantity.clone(),
                format_sig(r.published),
                format_sig(r.computed),
                format_sig(r.delta),
                format_sig(r.tolerance),
                r.verdict.as_str().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Human-readable summary: every row plus the chosen action per context.
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for e in &self.experiments {
            let violation = if e.stp_violation { "yes" } else { "no" };
            let _ = writeln!(s, "{}  (sure-thing violation reported: {violation})", e.name);
            let _ = writeln!(
                s,
                "  {:<36} {:>12} {:>12} {:>12} {:>10}  result",
                "quantity", "published", "computed", "delta", "tolerance"
            );
            for r in &e.rows {
                let _ = writeln!(
                    s,
                    "  {:<36} {:>12} {:>12} {:>12} {:>10}  {}",
                    r.quantity,
                    format_sig(r.published),
                    format_sig(r.computed),
                    format_sig(r.delta),
                    format_sig(r.tolerance),
                    match r.verdict {
                        Verdict::Pass => "ok",
                        Verdict::Fail => "MISMATCH",
                        Verdict::Excluded => "excluded",
                    }
                );
            }
            let solutions: Vec<String> = e.theta_solutions.iter().map(|t| format_sig(*t)).collect();
            let _ = writeln!(s, "  fitted theta: [{}]", solutions.join(", "));
            let _ = writeln!(s, "  decision classical: {}", decisions(&e.classical));
            if let (Some(q), Some(theta)) = (&e.quantum, e.theta) {
                let _ = writeln!(s, "  decision quantum (theta {}): {}", format_sig(theta), decisions(q));
            }
            s.push('\n');
        }
        let _ = writeln!(
            s,
            "{} within tolerance, {} mismatched, {} excluded",
            self.count(Verdict::Pass),
            self.count(Verdict::Fail),
            self.count(Verdict::Excluded)
        );
        s
    }
}

/// `averse=defect seeking=cooperate`
pub fn decisions(m: &MeuResult) -> String {
    m.contexts
        .iter()
        .zip(&m.chosen)
        .map(|(z, a)| format!("{z}={}", m.actions[*a]))
        .collect::<Vec<_>>()
        .join(" ")
}
