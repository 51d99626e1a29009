use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qlid::error::{HarnessError, Result};
use qlid::report::{decisions, reproduce, ReproduceOptions};
use qlid::table::{dominance_path, format_sig, write_dominance, write_eu_sweep, write_file, write_probability_sweep};
use qlid::{dataset, emit_spec, load_record, load_spec, ExperimentRecord};
use qlid_core::{
    classical_meu, fit_theta_with_grid, infer, infer_classical, quantum_meu, sweep_expected_utility,
    sweep_probability, DecisionProblem, Evidence, InferenceResult, MeuResult, PhaseAssignment, DEFAULT_FIT_GRID,
};

/// Exact inference and expected-utility analysis for quantum-like
/// prisoner's dilemma models.
///
/// `--spec` takes a spec file path or `builtin:<name>`.
#[derive(Parser)]
#[command(name = "qlid", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// P(X2 | X1 unobserved), with interference or classically.
    Infer {
        #[arg(long)]
        spec: String,
        /// Phase difference; defaults to the spec file's theta.
        #[arg(long, conflicts_with = "classical")]
        theta: Option<f64>,
        #[arg(long)]
        classical: bool,
    },
    /// Expected utility of each action per context and the chosen action.
    Meu {
        #[arg(long)]
        spec: String,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Phase difference for quantum mode; defaults to the spec file's theta.
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Every phase difference reproducing a target P(X2=averse).
    FitTheta {
        #[arg(long)]
        spec: String,
        /// Defaults to the spec file's observed unknown-condition probability.
        #[arg(long)]
        target: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_FIT_GRID)]
        grid: usize,
    },
    /// Samples a curve over [0, 2π) and writes it as CSV.
    Sweep {
        #[arg(long)]
        spec: String,
        #[arg(long, value_enum)]
        what: What,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
        /// Action whose dominance regions are reported (eu only).
        #[arg(long, default_value = "cooperate")]
        favoured: String,
        /// Action it is compared against (eu only).
        #[arg(long, default_value = "defect")]
        baseline: String,
    },
    /// Recomputes every published quantity and reports the deltas.
    Reproduce {
        /// `builtin`, a spec file, or a directory of `.toml` spec files.
        #[arg(long, default_value = "builtin")]
        dataset: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        parallel: bool,
        #[arg(long, default_value_t = DEFAULT_FIT_GRID)]
        grid: usize,
    },
    /// Checks spec files without computing anything.
    Validate {
        #[arg(long, required = true, num_args = 1..)]
        spec: Vec<String>,
    },
    /// Prints a spec (e.g. a built-in one) in file form.
    Emit {
        #[arg(long)]
        spec: String,
    },
    /// Lists the built-in experiments.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Classical,
    Quantum,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Prob,
    Eu,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn spec_theta(record: &ExperimentRecord, theta: Option<f64>) -> Result<f64> {
    let theta = theta.or(record.theta).ok_or_else(|| {
        HarnessError::Usage(format!("`{}` has no theta; pass --theta", record.name))
    })?;
    if !theta.is_finite() {
        return Err(HarnessError::Usage("--theta must be finite".into()));
    }
    Ok(theta)
}

fn action(problem: &DecisionProblem, label: &str) -> Result<usize> {
    problem
        .action_index(label)
        .ok_or_else(|| HarnessError::Usage(format!("unknown action `{label}`; expected one of {:?}", problem.actions())))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Infer { spec, theta, classical } => {
            let (record, problem) = load_spec(&spec)?;
            let (result, header) = if classical {
                (infer_classical(problem.network(), problem.context(), &Evidence::new())?, "classical".to_string())
            } else {
                let theta = spec_theta(&record, theta)?;
                let phases = PhaseAssignment::difference(theta)?;
                let r = infer(problem.network(), problem.context(), &Evidence::new(), &phases)?;
                (r, format!("theta {}", format_sig(theta)))
            };
            println!("{}: P(X2 | X1 unobserved), {header}", record.name);
            print_inference(&problem, &result);
        }
        Command::Meu { spec, mode, theta } => {
            let (record, problem) = load_spec(&spec)?;
            let result = match mode {
                Mode::Classical => classical_meu(&problem),
                Mode::Quantum => quantum_meu(&problem, spec_theta(&record, theta)?)?,
            };
            println!("{}: expected utility", record.name);
            print_meu(&result);
        }
        Command::FitTheta { spec, target, grid } => {
            let (record, problem) = load_spec(&spec)?;
            let target = target.unwrap_or(record.p_unknown_observed);
            let fit = fit_theta_with_grid(problem.network(), problem.context(), &Evidence::new(), 0, target, grid)?;
            println!("{}: P(X2=averse) = {}", record.name, format_sig(target));
            println!("{:>12} {:>12}", "theta", "residual");
            for (t, r) in fit.solutions.iter().zip(&fit.residuals) {
                println!("{t:>12.6} {:>12}", format_sig(*r));
            }
        }
        Command::Sweep { spec, what, steps, out, favoured, baseline } => {
            let (_, problem) = load_spec(&spec)?;
            match what {
                What::Prob => {
                    let curve = sweep_probability(problem.network(), problem.context(), &Evidence::new(), 0, steps)?;
                    write_file(&out, |w| write_probability_sweep(&curve, w))?;
                    println!("wrote {}", out.display());
                }
                What::Eu => {
                    let favoured = action(&problem, &favoured)?;
                    let baseline = action(&problem, &baseline)?;
                    let sweep = sweep_expected_utility(&problem, steps, favoured, baseline)?;
                    write_file(&out, |w| write_eu_sweep(&sweep, w))?;
                    let side = dominance_path(&out);
                    write_file(&side, |w| write_dominance(&sweep, w))?;
                    println!("wrote {} and {}", out.display(), side.display());
                }
            }
        }
        Command::Reproduce { dataset, out, parallel, grid } => {
            let records = load_dataset(&dataset)?;
            let report = reproduce(&records, ReproduceOptions { grid, parallel })?;
            print!("{}", report.render_text());
            if let Some(path) = out {
                write_file(&path, |w| report.write_csv(w))?;
                println!("wrote {}", path.display());
            }
        }
        Command::Validate { spec } => {
            for s in spec {
                let (record, _) = load_spec(&s)?;
                println!("ok: {s} ({})", record.name);
            }
        }
        Command::Emit { spec } => {
            print!("{}", emit_spec(&load_record(&spec)?));
        }
        Command::List => {
            for name in dataset::builtin_names() {
                println!("builtin:{name}");
            }
        }
    }
    Ok(())
}

fn load_dataset(source: &str) -> Result<Vec<ExperimentRecord>> {
    if source == "builtin" {
        return Ok(dataset::builtin());
    }
    let path = Path::new(source);
    if !path.is_dir() {
        return Ok(vec![load_record(source)?]);
    }
    let entries = std::fs::read_dir(path).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })?;
        let p = entry.path();
        if p.extension().is_some_and(|e| e == "toml") {
            files.push(p);
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(HarnessError::Usage(format!("{} contains no .toml spec files", path.display())));
    }
    files.iter().map(|p| load_record(&p.to_string_lossy())).collect()
}

fn print_inference(problem: &DecisionProblem, r: &InferenceResult) {
    let outcomes = problem.context_outcomes();
    println!("{:<10} {:>12} {:>14} {:>14} {:>12}", "outcome", "classical", "interference", "unnormalized", "probability");
    for (x, s) in r.scores.iter().enumerate() {
        println!(
            "{:<10} {:>12} {:>14} {:>14} {:>12}",
            outcomes[x],
            format_sig(s.classical_part),
            format_sig(s.interference_part),
            format_sig(s.unnormalized),
            format_sig(r.normalized[x])
        );
    }
    println!("gamma = {}", format_sig(r.gamma));
}

fn print_meu(m: &MeuResult) {
    print!("{:<10}", "context");
    for a in &m.actions {
        print!(" {:>14}", format!("EU[{a}]"));
    }
    println!("  chosen");
    for (z, context) in m.contexts.iter().enumerate() {
        print!("{context:<10}");
        for v in &m.values[z] {
            print!(" {:>14}", format_sig(*v));
        }
        println!("  {}", m.actions[m.chosen[z]]);
    }
    println!("decision rule: {}", decisions(m));
}
