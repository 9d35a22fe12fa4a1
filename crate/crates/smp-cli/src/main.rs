//! `smp-expand`: validate perturbed semi-Markov models and compute expansions
//! of return times, stationary probabilities and hitting times.
//!
//! Exit status: 0 on success, 1 when the model or the results fail a check
//! (the diagnostic is still written), 2 on unreadable input or bad arguments.

mod render;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use laurent::{parse_rational, Rational};
use serde_json::Value;
use smp::io::{
    comparison_to_value, hitting_to_value, model_to_value, pair_to_value, parse_model, stationary_to_value,
    trace_to_value, validation_to_value,
};
use smp::oracle::{compare, default_grid};
use smp::{
    best_order_hitting, hitting_expectation_trace, pair_hitting, reduce_sequence, stationary_distribution, validate,
    Mode, PerturbedSmp, SmpError, State,
};

#[derive(Debug, Parser)]
#[command(name = "smp-expand", version, about = "Asymptotic expansions for perturbed semi-Markov processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report to a file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Treat the model as plain (ignore remainder bounds).
    #[arg(long, global = true, conflicts_with = "bounded")]
    plain: bool,
    /// Require remainder bounds on every expansion.
    #[arg(long, global = true)]
    bounded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the structural conditions of a model file.
    Validate {
        /// Model file (JSON).
        model: PathBuf,
    },
    /// Eliminate states and write the reduced model.
    Reduce {
        /// Model file (JSON).
        model: PathBuf,
        /// State to eliminate (repeat to eliminate several, in order).
        #[arg(long = "state", required = true)]
        states: Vec<String>,
        /// Include every intermediate model.
        #[arg(long)]
        trace: bool,
    },
    /// Expansion of the expected return time E_ii.
    Hitting {
        /// Model file (JSON).
        model: PathBuf,
        /// Target state i.
        #[arg(long)]
        state: String,
        /// Elimination order of the other states, comma separated.
        #[arg(long, value_delimiter = ',', conflicts_with = "permutation_search")]
        order: Option<Vec<String>>,
        /// Try every elimination order and keep the tightest certificate.
        #[arg(long)]
        permutation_search: bool,
    },
    /// Expansions of the stationary distribution.
    Stationary {
        /// Model file (JSON).
        model: PathBuf,
        /// Report the expansions even when structural identities fail.
        #[arg(long)]
        force: bool,
    },
    /// Hitting times between two states.
    Pair {
        /// Model file (JSON).
        model: PathBuf,
        /// First state i.
        #[arg(long)]
        state: String,
        /// Second state j.
        #[arg(long)]
        target: String,
    },
    /// Compare the expansions against exact solves at fixed ε.
    OracleCheck {
        /// Model file (JSON).
        model: PathBuf,
        /// Evaluation points, comma separated (default 1e-1 … 1e-4 within range).
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<String>>,
    },
}

/// Failure that ends the run.
enum Failure {
    /// Input or argument problem (exit 2).
    Input(String),
    /// Computation refused the model (exit 1) with an optional report.
    Check(String, Option<Report>),
}

impl From<SmpError> for Failure {
    fn from(e: SmpError) -> Self {
        match e {
            SmpError::InvariantViolation(report) => Failure::Check(
                "stationary expansions violate structural identities (rerun with --force to see them)".into(),
                Some(Report { text: render::stationary(&report), json: stationary_to_value(&report), ok: false }),
            ),
            other => Failure::Check(other.to_string(), None),
        }
    }
}

/// Rendered output of a command.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

fn load(path: &PathBuf, global: &GlobalArgs) -> Result<PerturbedSmp, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let model = parse_model(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(if global.plain {
        model.without_bounds()
    } else if global.bounded {
        model.with_mode(Mode::Bounded)
    } else {
        model
    })
}

/// Loads and validates; invalid models stop with the validation report.
fn load_valid(path: &PathBuf, global: &GlobalArgs) -> Result<PerturbedSmp, Failure> {
    let model = load(path, global)?;
    let report = validate(&model);
    if !report.is_ok() {
        return Err(Failure::Check(
            "model violates structural conditions".into(),
            Some(Report { text: render::validation(&report), json: validation_to_value(&report), ok: false }),
        ));
    }
    Ok(model)
}

fn state(model: &PerturbedSmp, arg: &str) -> Result<State, Failure> {
    let found = match arg.parse::<State>() {
        Ok(id) => model.contains(id).then_some(id),
        Err(_) => model.names().iter().find(|(_, name)| name.as_str() == arg).map(|(&id, _)| id),
    };
    found.ok_or_else(|| Failure::Input(format!("unknown state `{arg}`")))
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let global = &cli.global;
    match &cli.command {
        Command::Validate { model } => {
            let model = load(model, global)?;
            let report = validate(&model);
            Ok(Report { text: render::validation(&report), json: validation_to_value(&report), ok: report.is_ok() })
        }
        Command::Reduce { model, states, trace } => {
            let model = load_valid(model, global)?;
            let order = states.iter().map(|s| state(&model, s)).collect::<Result<Vec<_>, _>>()?;
            let result = reduce_sequence(&model, &order, *trace)?;
            let json = if *trace { trace_to_value(&result) } else { model_to_value(result.last().unwrap_or(&model)) };
            Ok(Report { text: render::trace(&result), json, ok: true })
        }
        Command::Hitting { model, state: target, order, permutation_search } => {
            let model = load_valid(model, global)?;
            let i = state(&model, target)?;
            let (order, expansion) = if *permutation_search {
                best_order_hitting(&model, i)?
            } else {
                let order = order
                    .as_ref()
                    .map(|o| o.iter().map(|s| state(&model, s)).collect::<Result<Vec<_>, _>>())
                    .transpose()?;
                let (expansion, trace) = hitting_expectation_trace(&model, i, order.as_deref(), false)?;
                (trace.order, expansion)
            };
            Ok(Report {
                text: render::hitting(i, &order, &expansion),
                json: hitting_to_value(i, &order, &expansion),
                ok: true,
            })
        }
        Command::Stationary { model, force } => {
            let model = load_valid(model, global)?;
            let report = stationary_distribution(&model, *force)?;
            Ok(Report {
                text: render::stationary(&report),
                json: stationary_to_value(&report),
                ok: report.is_consistent(),
            })
        }
        Command::Pair { model, state: first, target } => {
            let model = load_valid(model, global)?;
            let (i, j) = (state(&model, first)?, state(&model, target)?);
            let pair = pair_hitting(&model, i, j)?;
            Ok(Report { text: render::pair(&pair), json: pair_to_value(&pair), ok: true })
        }
        Command::OracleCheck { model, eps } => {
            let model = load_valid(model, global)?;
            let grid: Vec<Rational> = match eps {
                Some(values) => values
                    .iter()
                    .map(|v| parse_rational(v).map_err(|e| Failure::Input(format!("--eps: {e}"))))
                    .collect::<Result<_, _>>()?,
                None => default_grid(&model),
            };
            if grid.is_empty() {
                return Err(Failure::Input("the evaluation grid is empty".into()));
            }
            if let Some(bad) = grid.iter().find(|e| !(Rational::from_integer(0.into()) < **e && *e <= model.eps0())) {
                return Err(Failure::Input(format!("--eps value {bad} is outside (0, {}]", model.eps0())));
            }
            let report = compare(&model, &grid)?;
            Ok(Report { text: render::comparison(&report), json: comparison_to_value(&report), ok: report.pass() })
        }
    }
}

fn emit(report: &Report, global: &GlobalArgs) -> Result<(), Failure> {
    let body = match global.format {
        Format::Text => report.text.clone(),
        Format::Json => serde_json::to_string_pretty(&report.json).expect("reports serialize") + "\n",
    };
    match &global.output {
        Some(path) => fs::write(path, body).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|report| {
        emit(&report, &cli.global)?;
        Ok(report.ok)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Check(message, report)) => {
            eprintln!("error: {message}");
            if let Some(report) = report {
                if let Err(Failure::Input(m) | Failure::Check(m, _)) = emit(&report, &cli.global) {
                    eprintln!("error: {m}");
                }
            }
            ExitCode::from(1)
        }
    }
}
