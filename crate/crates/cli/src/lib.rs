//! The `paqs` command line: scenario loading, subcommands and reporting.

pub mod commands;
pub mod error;
pub mod report;
pub mod scenario;

use clap::{Args, Parser, Subcommand, ValueEnum};
use commands::{MeasureOptions, SituationSource};
use error::{exit, CliError};
use paqs_core::logic::Limits;
use report::Report;
use scenario::Scenario;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "paqs",
    version,
    about = "Paraconsistent quantum superpositions: situations, measurement, C1 logic and subspace lattices"
)]
pub struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the quantum situation of a state in one or more bases.
    Situations {
        scenario: PathBuf,
        #[arg(long)]
        state: Option<String>,
        /// Repeatable; all bases when omitted.
        #[arg(long)]
        basis: Vec<String>,
    },
    /// Run experiment blocks: frequencies, opposition and non-collapse checks.
    Measure {
        scenario: PathBuf,
        /// Repeatable; all blocks when omitted.
        #[arg(long)]
        experiment: Vec<String>,
        #[arg(long)]
        shots: Option<u64>,
        /// Overrides every block's seed. A seed is drawn and printed when neither is given.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Potentia over the Hamiltonian's time grid.
    Evolve {
        scenario: PathBuf,
        #[arg(long)]
        state: Option<String>,
        #[arg(long)]
        basis: Option<String>,
        /// Comma-separated times replacing the scenario's grid.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        times: Option<Vec<f64>>,
    },
    /// Decide C1 validity, triviality, or check a proof.
    #[command(subcommand)]
    Logic(LogicCommand),
    /// Check lattice laws or exhibit a distributivity failure.
    #[command(subcommand)]
    Lattice(LatticeCommand),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct LimitArgs {
    /// Subformula-closure cap (default from PAQS_MAX_CLOSURE, else 64).
    #[arg(long)]
    pub max_closure: Option<usize>,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        match self.max_closure {
            Some(max_closure) => Limits { max_closure },
            None => Limits::from_env(),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExpectValidity {
    Valid,
    Invalid,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExpectTriviality {
    Trivial,
    Nontrivial,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExpectProof {
    Accepted,
    Rejected,
}

#[derive(Subcommand, Debug)]
pub enum LogicCommand {
    /// VALID, or INVALID with a countermodel.
    Check {
        formula: String,
        #[arg(long, value_enum)]
        expect: Option<ExpectValidity>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// TRIVIAL, or NONTRIVIAL with a witness valuation.
    Trivial {
        formulas: Vec<String>,
        /// Add the superposition formulas of a scenario's situation.
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long, requires = "scenario")]
        state: Option<String>,
        #[arg(long, requires = "scenario")]
        basis: Option<String>,
        /// Also emit P -> ~P for each superposed power.
        #[arg(long, requires = "scenario")]
        reinforce: bool,
        #[arg(long, value_enum)]
        expect: Option<ExpectTriviality>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Check a line-oriented proof script.
    Proof {
        file: PathBuf,
        #[arg(long, value_enum)]
        expect: Option<ExpectProof>,
    },
}

#[derive(Subcommand, Debug)]
pub enum LatticeCommand {
    Verify {
        /// Repeatable; 2, 3 and 4 when omitted.
        #[arg(long)]
        dim: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    Witness {
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn load(path: &PathBuf) -> Result<Scenario, CliError> {
    Ok(Scenario::load(path)?)
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: cannot read file: {e}", path.display())))
}

pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Situations {
            scenario,
            state,
            basis,
        } => commands::situations(&load(scenario)?, state.as_deref(), basis),
        Command::Measure {
            scenario,
            experiment,
            shots,
            seed,
            jobs,
        } => commands::measure(
            &load(scenario)?,
            &MeasureOptions {
                experiments: experiment.clone(),
                shots: *shots,
                seed: *seed,
                jobs: *jobs,
            },
        ),
        Command::Evolve {
            scenario,
            state,
            basis,
            times,
        } => commands::evolve(
            &load(scenario)?,
            state.as_deref(),
            basis.as_deref(),
            times.as_deref(),
        ),
        Command::Logic(LogicCommand::Check {
            formula,
            expect,
            limits,
        }) => commands::logic_check(
            formula,
            expect.map(|e| e == ExpectValidity::Valid),
            &limits.limits(),
        ),
        Command::Logic(LogicCommand::Trivial {
            formulas,
            scenario,
            state,
            basis,
            reinforce,
            expect,
            limits,
        }) => {
            let loaded = scenario.as_ref().map(load).transpose()?;
            let source = loaded.as_ref().map(|s| SituationSource {
                scenario: s,
                state: state.as_deref(),
                basis: basis.as_deref(),
                reinforce: *reinforce,
            });
            if source.is_none() && formulas.is_empty() {
                return Err(CliError::Input("give formulas or --scenario".into()));
            }
            commands::logic_trivial(
                formulas,
                source,
                expect.map(|e| e == ExpectTriviality::Trivial),
                &limits.limits(),
            )
        }
        Command::Logic(LogicCommand::Proof { file, expect }) => {
            commands::logic_proof(&read(file)?, expect.map(|e| e == ExpectProof::Accepted))
        }
        Command::Lattice(LatticeCommand::Verify { dim, trials, seed }) => {
            let dims = if dim.is_empty() {
                vec![2, 3, 4]
            } else {
                dim.clone()
            };
            commands::lattice_verify(&dims, *trials, *seed)
        }
        Command::Lattice(LatticeCommand::Witness { dim }) => commands::lattice_witness(*dim),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::INPUT
            } else {
                exit::OK
            };
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: rendered,
                    code,
                }
            } else {
                Outcome {
                    stdout: rendered,
                    stderr: String::new(),
                    code,
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(report) => Outcome {
            stdout: match cli.format {
                Format::Text => report.text,
                Format::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&report.json).expect("json values serialize")
                ),
            },
            stderr: String::new(),
            code: if report.negative {
                exit::NEGATIVE
            } else {
                exit::OK
            },
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}
