//! `teamhyper`: parse, evaluate, normalize and translate team-semantics and
//! one-variable HyperLTL formulas, and run the differential test suites.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use teamhyper::eval_classic::eval_hyper;
use teamhyper::eval_team::{eval_team_nf_with, oracle_eval_with, OracleLimits};
use teamhyper::harness::gen::GenConfig;
use teamhyper::harness::{run_suite, RunOptions, Suite};
use teamhyper::syntax::{parse_formula, parse_hyper, parse_team, parse_team_file, Language, Parsed};
use teamhyper::transform::{
    bc_to_leftdc, leftdc_to_bc, pbc_to_teamov, prenex_bc, prenex_pbc, teamov_to_pbc, to_ov_dnf,
    to_quasi_flat, TransformConfig,
};
use teamhyper::{Classify, Error, Team};

#[derive(Parser)]
#[command(name = "teamhyper", version, about = "Team semantics for LTL and one-variable HyperLTL")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Logic {
    Ltl,
    Team,
    Hyper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Nf,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Form {
    Ovdnf,
    Quasiflat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    TeamovToPbc,
    PbcToTeamov,
    LeftdcToBc,
    BcToLeftdc,
    PrenexPbc,
    PrenexBc,
}

#[derive(clap::Args)]
struct LimitArgs {
    /// Largest team the oracle accepts.
    #[arg(long, default_value_t = OracleLimits::default().max_team)]
    max_team: usize,
    /// Largest |stem| + |cycle| the oracle accepts.
    #[arg(long, default_value_t = OracleLimits::default().max_lasso_len)]
    max_lasso_len: usize,
    /// Deepest formula the oracle accepts.
    #[arg(long, default_value_t = OracleLimits::default().max_depth)]
    max_depth: usize,
}

impl LimitArgs {
    fn limits(&self) -> OracleLimits {
        OracleLimits {
            max_team: self.max_team,
            max_lasso_len: self.max_lasso_len,
            max_depth: self.max_depth,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the syntax tree and fragment tags of a formula.
    Parse {
        #[arg(long, value_enum)]
        logic: Logic,
        formula: String,
    },
    /// Evaluate a formula on the team in a team file.
    Eval {
        #[arg(long)]
        team: PathBuf,
        #[arg(long, value_enum, default_value = "team")]
        logic: Logic,
        /// Team formulas only: normal-form route or exhaustive oracle.
        #[arg(long, value_enum, default_value = "nf")]
        method: Method,
        #[command(flatten)]
        limits: LimitArgs,
        formula: String,
    },
    /// Print the normal form of a team formula.
    Normalize {
        #[arg(long, value_enum)]
        form: Form,
        #[arg(long, default_value_t = TransformConfig::default().max_disjuncts)]
        max_disjuncts: usize,
        formula: String,
    },
    /// Translate between team formulas and HyperLTL sentences.
    Translate {
        #[arg(long, value_enum)]
        dir: Direction,
        /// Write existential literals as negated universal ones.
        #[arg(long)]
        forall_only: bool,
        input: String,
    },
    /// Run a differential test suite and write a JSON report.
    Difftest {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        cases: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_team: Option<usize>,
        #[arg(long)]
        max_stem: Option<usize>,
        #[arg(long)]
        max_period: Option<usize>,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long)]
        ap_size: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failures that end the process with a specific exit code.
enum Failure {
    Lib(Error),
    Io(String),
    DiffFailures(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(Error::Parse { .. }) => 2,
            Failure::Lib(Error::Fragment(_)) => 3,
            Failure::Lib(Error::Limits(_) | Error::BlowUp { .. }) => 4,
            Failure::DiffFailures(_) => 5,
            Failure::Lib(_) | Failure::Io(_) => 1,
        }
    }
}

fn language(logic: Logic) -> Language {
    match logic {
        Logic::Ltl => Language::Ltl,
        Logic::Team => Language::Team,
        Logic::Hyper => Language::Hyper,
    }
}

fn show_parse_error(input: &str, e: &Error) {
    if let Error::Parse { span, .. } = e {
        let width = span.end.saturating_sub(span.start).max(1);
        let pad = input[..span.start.min(input.len())].chars().count();
        eprintln!("  {input}");
        eprintln!("  {}{}", " ".repeat(pad), "^".repeat(width));
    }
}

fn read_team(path: &PathBuf) -> Result<Team, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let file = parse_team_file(&text)?;
    for w in &file.warnings {
        eprintln!("warning: {w}");
    }
    Ok(file.team)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Parse { logic, formula } => {
            let parsed = parse_formula(&formula, language(logic)).inspect_err(|e| show_parse_error(&formula, e))?;
            let tags = match &parsed {
                Parsed::Formula(f) => {
                    println!("{f:#?}");
                    f.classify()
                }
                Parsed::Hyper(h) => {
                    println!("{h:#?}");
                    h.classify()
                }
            };
            let tags: Vec<String> = tags.iter().map(|t| t.to_string()).collect();
            println!("printed: {parsed}");
            println!("fragments: {}", tags.join(", "));
        }
        Command::Eval {
            team,
            logic,
            method,
            limits,
            formula,
        } => {
            let team = read_team(&team)?;
            let parsed = parse_formula(&formula, language(logic)).inspect_err(|e| show_parse_error(&formula, e))?;
            let verdict = match parsed {
                Parsed::Hyper(s) => eval_hyper(&team, &s)?,
                Parsed::Formula(phi) => match method {
                    Method::Nf => eval_team_nf_with(&team, &phi, &TransformConfig::default())?,
                    Method::Oracle => oracle_eval_with(&team, &phi, &limits.limits())?,
                },
            };
            println!("{verdict}");
        }
        Command::Normalize {
            form,
            max_disjuncts,
            formula,
        } => {
            let phi = parse_team(&formula).inspect_err(|e| show_parse_error(&formula, e))?;
            let cfg = TransformConfig {
                max_disjuncts,
                ..TransformConfig::default()
            };
            match form {
                Form::Ovdnf => println!("{}", to_ov_dnf(&phi, &cfg)?.to_formula()),
                Form::Quasiflat => println!("{}", to_quasi_flat(&phi, &cfg)?.to_formula()),
            }
        }
        Command::Translate {
            dir,
            forall_only,
            input,
        } => {
            let cfg = TransformConfig::default();
            let team_input = || parse_team(&input).inspect_err(|e| show_parse_error(&input, e));
            let hyper_input = || parse_hyper(&input).inspect_err(|e| show_parse_error(&input, e));
            let out = match dir {
                Direction::TeamovToPbc => teamov_to_pbc(&team_input()?, &cfg)?.to_string(),
                Direction::LeftdcToBc => leftdc_to_bc(&team_input()?, forall_only, &cfg)?.to_string(),
                Direction::PbcToTeamov => pbc_to_teamov(&hyper_input()?)?.to_string(),
                Direction::BcToLeftdc => bc_to_leftdc(&hyper_input()?)?.to_string(),
                Direction::PrenexPbc => prenex_pbc(&hyper_input()?)?.to_string(),
                Direction::PrenexBc => prenex_bc(&hyper_input()?)?.to_string(),
            };
            println!("{out}");
        }
        Command::Difftest {
            suite,
            cases,
            seed,
            max_team,
            max_stem,
            max_period,
            max_depth,
            ap_size,
            out,
        } => {
            let suite: Suite = suite.parse()?;
            let defaults = GenConfig::default();
            let cfg = GenConfig {
                max_team: max_team.unwrap_or(defaults.max_team),
                max_stem: max_stem.unwrap_or(defaults.max_stem),
                max_period: max_period.unwrap_or(defaults.max_period),
                max_depth: max_depth.unwrap_or(defaults.max_depth),
                ap_size: ap_size.unwrap_or(defaults.ap_size),
                ..defaults
            };
            let report = run_suite(suite, &cfg, cases, seed, &RunOptions::default())?;
            let json = report.to_json();
            match out {
                Some(path) => fs::write(&path, format!("{json}\n"))
                    .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?,
                None => println!("{json}"),
            }
            eprintln!(
                "{}: {} cases, {} failures in {:.2?}",
                report.suite,
                report.cases,
                report.failures.len(),
                report.duration
            );
            if !report.passed() {
                return Err(Failure::DiffFailures(report.failures.len()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Io(msg) => eprintln!("error: {msg}"),
                Failure::DiffFailures(n) => eprintln!("{n} differential failures"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
