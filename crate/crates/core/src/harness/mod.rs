//! Differential test suites: each case draws formulas and a team, evaluates
//! them along several routes that should agree, and reports the cases where
//! they do not.

pub mod enumerate;
pub mod gen;
pub mod shrink;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval_classic::{eval_hyper, eval_ltl};
use crate::eval_team::{eval_team_nf_with, Oracle, OracleLimits};
use crate::formula::{dual, hyperify, Classify, FragmentTag, Formula, Hyper, Var};
use crate::syntax::print_team_file;
use crate::traces::Team;
use crate::transform::{
    bc_to_leftdc, leftdc_to_bc, negate_prenex, pbc_to_teamov, prenex_bc, prenex_pbc,
    teamov_to_pbc, TransformConfig,
};

use gen::{case_rng, ClosureShape, GenConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    ThmOv,
    ThmLeftDc,
    Flatness,
    Downward,
    OracleNf,
    Prenex,
    Hyperify,
    NegDual,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::ThmOv,
        Suite::ThmLeftDc,
        Suite::Flatness,
        Suite::Downward,
        Suite::OracleNf,
        Suite::Prenex,
        Suite::Hyperify,
        Suite::NegDual,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ThmOv => "thm-ov",
            Suite::ThmLeftDc => "thm-leftdc",
            Suite::Flatness => "flatness",
            Suite::Downward => "downward",
            Suite::OracleNf => "oracle-nf",
            Suite::Prenex => "prenex",
            Suite::Hyperify => "hyperify",
            Suite::NegDual => "negdual",
        }
    }

    pub fn uses_oracle(self) -> bool {
        matches!(self, Suite::Flatness | Suite::Downward | Suite::OracleNf)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                Error::Config(format!("unknown suite `{s}`; expected one of {}", names.join(", ")))
            })
    }
}

/// What a single check is about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subject {
    Team(Formula),
    Hyper(Hyper),
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Team(x) => x.fmt(f),
            Subject::Hyper(x) => x.fmt(f),
        }
    }
}

/// Named results of the routes compared by a check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdicts {
    pub values: Vec<(String, bool)>,
    pub ok: bool,
}

impl Verdicts {
    fn agreeing(values: Vec<(String, bool)>) -> Self {
        let ok = values.windows(2).all(|w| w[0].1 == w[1].1);
        Verdicts { values, ok }
    }

    /// Consecutive pairs must agree.
    fn pairwise(values: Vec<(String, bool)>) -> Self {
        let ok = values.chunks(2).all(|c| c.len() < 2 || c[0].1 == c[1].1);
        Verdicts { values, ok }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Failure {
    pub case: u64,
    pub formula: String,
    /// The team in team-file syntax.
    pub team: String,
    pub verdicts: Vec<(String, bool)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffReport {
    pub suite: String,
    pub seed: u64,
    pub cases: u64,
    pub config: GenConfig,
    pub failures: Vec<Failure>,
    /// Wall-clock time; left out of the JSON so reports are reproducible.
    #[serde(skip)]
    pub duration: Duration,
}

impl DiffReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Settings of the routes under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub transform: TransformConfig,
    pub limits: OracleLimits,
    /// Re-checks spent on shrinking each failure; zero disables shrinking.
    pub shrink_budget: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            transform: TransformConfig::default(),
            limits: OracleLimits::default(),
            shrink_budget: 500,
        }
    }
}

/// Longest prefix whose prenex form thm-ov evaluates.
pub const MAX_PRENEX_VARS: usize = 4;

/// Checks that oracle suites stay within the oracle limits.
pub fn check_config(suite: Suite, cfg: &GenConfig, limits: &OracleLimits) -> Result<()> {
    cfg.validate()?;
    if !suite.uses_oracle() {
        return Ok(());
    }
    if cfg.max_team > limits.max_team
        || cfg.max_stem + cfg.max_period > limits.max_lasso_len
        || cfg.max_depth > limits.max_depth
    {
        return Err(Error::Limits(format!(
            "suite {suite} evaluates with the oracle: need max team ≤ {}, max stem + max period ≤ {}, max depth ≤ {}",
            limits.max_team, limits.max_lasso_len, limits.max_depth
        )));
    }
    Ok(())
}

fn subjects(suite: Suite, rng: &mut impl rand::Rng, cfg: &GenConfig) -> Vec<Subject> {
    use Subject::{Hyper as H, Team as T};
    match suite {
        Suite::ThmOv => vec![
            T(gen::gen_teamov(rng, cfg)),
            H(gen::gen_closure(rng, cfg, ClosureShape::PBC_FORALL_ONE)),
        ],
        Suite::ThmLeftDc => vec![
            T(gen::gen_leftdc(rng, cfg)),
            H(gen::gen_closure(rng, cfg, ClosureShape::BC_Q_ONE)),
        ],
        Suite::Flatness | Suite::Hyperify => vec![T(gen::gen_ltl(rng, cfg))],
        Suite::Downward => vec![T(gen::gen_teamov(rng, cfg))],
        Suite::OracleNf => vec![T(gen::gen_leftdc(rng, cfg))],
        Suite::Prenex => vec![H(gen::gen_hyper_pbc(rng, cfg)), H(gen::gen_hyper_bc(rng, cfg))],
        Suite::NegDual => {
            let single = ClosureShape {
                max_literals: 1,
                allow_negation: false,
                ..ClosureShape::BC
            };
            vec![T(gen::gen_ltl(rng, cfg)), H(gen::gen_closure(rng, cfg, single))]
        }
    }
}

fn case_team(suite: Suite, rng: &mut impl rand::Rng, cfg: &GenConfig) -> Team {
    match suite {
        Suite::Hyperify => [gen::gen_lasso(rng, cfg)].into_iter().collect(),
        _ => gen::gen_team(rng, cfg),
    }
}

fn verdict(name: impl Into<String>, value: bool) -> (String, bool) {
    (name.into(), value)
}

/// Evaluates one subject on one team along the routes of `suite`.
pub fn check(suite: Suite, subject: &Subject, team: &Team, opts: &RunOptions) -> Result<Verdicts> {
    let tcfg = &opts.transform;
    let nf = |phi: &Formula| eval_team_nf_with(team, phi, tcfg);
    let hyper = |s: &Hyper| eval_hyper(team, s);
    let oracle = |phi: &Formula| -> Result<Oracle> {
        opts.limits.check(team, phi)?;
        Oracle::new(team.iter().cloned())
    };
    Ok(match (suite, subject) {
        (Suite::ThmOv, Subject::Team(phi)) => {
            let s = teamov_to_pbc(phi, tcfg)?;
            let mut values = vec![
                verdict("nf", nf(phi)?),
                verdict("pbc", hyper(&s)?),
                verdict("pbc-back", nf(&pbc_to_teamov(&s)?)?),
            ];
            // evaluating a k-variable prefix costs |team|^k
            let prenex = prenex_pbc(&s)?;
            if prenex.as_prenex().is_some_and(|(prefix, _)| prefix.len() <= MAX_PRENEX_VARS) {
                values.push(verdict("forall-star", hyper(&prenex)?));
            }
            Verdicts::agreeing(values)
        }
        (Suite::ThmOv, Subject::Hyper(s)) => Verdicts::agreeing(vec![
            verdict("hyper", hyper(s)?),
            verdict("teamov", nf(&pbc_to_teamov(s)?)?),
        ]),
        (Suite::ThmLeftDc, Subject::Team(phi)) => {
            let s = leftdc_to_bc(phi, false, tcfg)?;
            Verdicts::agreeing(vec![
                verdict("nf", nf(phi)?),
                verdict("bc", hyper(&s)?),
                verdict("bc-forall", hyper(&leftdc_to_bc(phi, true, tcfg)?)?),
                verdict("bc-back", nf(&bc_to_leftdc(&s)?)?),
            ])
        }
        (Suite::ThmLeftDc, Subject::Hyper(s)) => Verdicts::agreeing(vec![
            verdict("hyper", hyper(s)?),
            verdict("leftdc", nf(&bc_to_leftdc(s)?)?),
        ]),
        (Suite::Flatness, Subject::Team(phi)) => {
            let flat = team
                .iter()
                .map(|t| eval_ltl(t, phi))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .all(|v| v);
            Verdicts::agreeing(vec![
                verdict("oracle", oracle(phi)?.eval(team, phi)?),
                verdict("per-trace", flat),
            ])
        }
        (Suite::Downward, Subject::Team(phi)) => {
            let mut o = oracle(phi)?;
            let whole = o.eval(team, phi)?;
            let mut values = vec![verdict("team", whole)];
            let mut ok = true;
            for (i, sub) in team.subteams().iter().enumerate() {
                let v = o.eval(sub, phi)?;
                ok &= !whole || v;
                values.push(verdict(format!("subteam {i}: {sub}"), v));
            }
            Verdicts { values, ok }
        }
        (Suite::OracleNf, Subject::Team(phi)) => Verdicts::agreeing(vec![
            verdict("oracle", oracle(phi)?.eval(team, phi)?),
            verdict("nf", nf(phi)?),
        ]),
        (Suite::Prenex, Subject::Hyper(s)) => {
            let mut values = vec![verdict("closure", hyper(s)?)];
            if s.classify().contains(&FragmentTag::PbcForallStar) {
                values.push(verdict("prenex-pbc", hyper(&prenex_pbc(s)?)?));
            }
            values.push(verdict("prenex-bc", hyper(&prenex_bc(s)?)?));
            let main = Verdicts::agreeing(values);
            let mut negs = Vec::new();
            for (i, lit) in s.literals().into_iter().enumerate() {
                negs.push(verdict(format!("not literal {i}"), hyper(&Hyper::not(lit.clone()))?));
                negs.push(verdict(format!("negated literal {i}"), hyper(&negate_prenex(lit)?)?));
            }
            let negs = Verdicts::pairwise(negs);
            Verdicts {
                ok: main.ok && negs.ok,
                values: main.values.into_iter().chain(negs.values).collect(),
            }
        }
        (Suite::Hyperify, Subject::Team(a)) => {
            let pi = Var::new("pi");
            let s = Hyper::forall(pi.clone(), Hyper::Matrix(hyperify(a, &pi)?));
            let mut values = Vec::new();
            for (i, t) in team.iter().enumerate() {
                let single: Team = [t.clone()].into_iter().collect();
                values.push(verdict(format!("ltl {i}"), eval_ltl(t, a)?));
                values.push(verdict(format!("hyper {i}"), eval_hyper(&single, &s)?));
            }
            Verdicts::pairwise(values)
        }
        (Suite::NegDual, Subject::Team(a)) => {
            let d = dual(a)?;
            let mut values = Vec::new();
            let mut ok = true;
            for (i, t) in team.iter().enumerate() {
                let (x, y) = (eval_ltl(t, a)?, eval_ltl(t, &d)?);
                ok &= x != y;
                values.push(verdict(format!("formula {i}"), x));
                values.push(verdict(format!("dual {i}"), y));
            }
            Verdicts { values, ok }
        }
        (Suite::NegDual, Subject::Hyper(s)) => Verdicts::agreeing(vec![
            verdict("not", hyper(&Hyper::not(s.clone()))?),
            verdict("negated", hyper(&negate_prenex(s)?)?),
        ]),
        (suite, subject) => {
            return Err(Error::Config(format!(
                "suite {suite} does not check subjects like {subject}"
            )))
        }
    })
}

fn failure(case: u64, subject: &Subject, team: &Team, outcome: Result<Verdicts>) -> Option<Failure> {
    let (verdicts, error) = match outcome {
        Ok(v) if v.ok => return None,
        Ok(v) => (v.values, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    Some(Failure {
        case,
        formula: subject.to_string(),
        team: print_team_file(team),
        verdicts,
        error,
    })
}

fn run_case(suite: Suite, cfg: &GenConfig, seed: u64, case: u64, opts: &RunOptions) -> Option<Failure> {
    let mut rng = case_rng(seed, case);
    let subjects = subjects(suite, &mut rng, cfg);
    let team = case_team(suite, &mut rng, cfg);
    for subject in subjects {
        let outcome = check(suite, &subject, &team, opts);
        match outcome {
            Ok(ref v) if v.ok => continue,
            Err(_) => return failure(case, &subject, &team, outcome),
            Ok(_) => {}
        }
        let (subject, team) = shrink::shrink(subject, team.clone(), opts.shrink_budget, |s, t| {
            matches!(check(suite, s, t, opts), Ok(v) if !v.ok)
        });
        let outcome = check(suite, &subject, &team, opts);
        return failure(case, &subject, &team, outcome);
    }
    None
}

/// Runs `cases` cases of `suite`. Case `i` depends only on `(seed, i)`.
pub fn run_suite(suite: Suite, cfg: &GenConfig, cases: u64, seed: u64, opts: &RunOptions) -> Result<DiffReport> {
    check_config(suite, cfg, &opts.limits)?;
    let start = Instant::now();
    let failures: Vec<Failure> = (0..cases)
        .into_par_iter()
        .filter_map(|case| run_case(suite, cfg, seed, case, opts))
        .collect();
    Ok(DiffReport {
        suite: suite.name().to_string(),
        seed,
        cases,
        config: cfg.clone(),
        failures,
        duration: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::Fault;

    fn small() -> GenConfig {
        GenConfig {
            max_team: 2,
            max_stem: 1,
            max_period: 2,
            max_depth: 3,
            ..GenConfig::default()
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn every_suite_passes_a_few_cases() {
        for suite in Suite::ALL {
            let report = run_suite(suite, &small(), 40, 1, &RunOptions::default()).unwrap();
            assert!(report.passed(), "{}", report.to_json());
        }
    }

    #[test]
    fn oracle_suites_respect_limits() {
        let cfg = GenConfig {
            max_team: 5,
            ..small()
        };
        let err = run_suite(Suite::Flatness, &cfg, 1, 0, &RunOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Limits(_)));
        assert!(run_suite(Suite::ThmOv, &cfg, 1, 0, &RunOptions::default()).is_ok());
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite(Suite::ThmLeftDc, &small(), 30, 9, &RunOptions::default()).unwrap();
        let b = run_suite(Suite::ThmLeftDc, &small(), 30, 9, &RunOptions::default()).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn injected_fault_is_detected_and_shrunk() {
        let opts = RunOptions {
            transform: TransformConfig {
                fault: Some(Fault::GloballySplits),
                ..TransformConfig::default()
            },
            ..RunOptions::default()
        };
        let cfg = GenConfig {
            weights: gen::Weights {
                ov_or: 6,
                globally: 6,
                ..gen::Weights::default()
            },
            ..small()
        };
        let report = run_suite(Suite::OracleNf, &cfg, 300, 3, &opts).unwrap();
        assert!(!report.passed());
        let f = &report.failures[0];
        assert!(f.formula.contains('G') && f.formula.contains("OR"), "{}", f.formula);
    }
}
