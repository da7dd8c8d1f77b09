//! Running one solver on one equation and rendering the result.

use std::time::Duration;

use clap::ValueEnum;
use ffnorm::arith::{parse_poly, ParseError, Poly};
use ffnorm::compact::CompactRep;
use ffnorm::field::{FieldElement, FunctionField};
use ffnorm::oracle::{brute_solve, default_cap, OracleError};
use ffnorm::solvers::{Limits, NormEquation, SolveError, SolveStats};
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::spec::SpecError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Gp,
    ExhaustiveCr,
    IndexCalculus,
    Oracle,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Gp => "gp",
            Algorithm::ExhaustiveCr => "exhaustive-cr",
            Algorithm::IndexCalculus => "index-calculus",
            Algorithm::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("--c: {0}")]
    Poly(#[from] ParseError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// 2 for bad input or unsupported instances, 1 for anything that ran
    /// out of time or budget (or failed internally).
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Spec(_) | CliError::Poly(_) => 2,
            CliError::Solve(e) | CliError::Oracle(OracleError::Search(e)) => solve_code(e),
            CliError::Oracle(OracleError::ZeroC) | CliError::Oracle(OracleError::Field(_)) => 2,
            CliError::Io(_) => 1,
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            CliError::Solve(SolveError::Budget { .. } | SolveError::Timeout)
                | CliError::Oracle(OracleError::Search(SolveError::Budget { .. } | SolveError::Timeout))
        )
    }
}

fn solve_code(e: &SolveError) -> u8 {
    match e {
        SolveError::ConstantC | SolveError::NoDegreeOnePlace | SolveError::Field(_) => 2,
        _ => 1,
    }
}

pub fn parse_c(s: &str, q: u32) -> Result<Poly, CliError> {
    Ok(parse_poly(s, q)?)
}

pub enum Solutions {
    Standard(Vec<FieldElement>),
    Compact(Vec<CompactRep>),
}

impl Solutions {
    pub fn len(&self) -> usize {
        match self {
            Solutions::Standard(v) => v.len(),
            Solutions::Compact(v) => v.len(),
        }
    }
}

pub struct Outcome {
    pub solutions: Solutions,
    pub stats: SolveStats,
}

pub fn solve(ff: &FunctionField, c: &Poly, alg: Algorithm, limits: &Limits) -> Result<Outcome, CliError> {
    let eq = NormEquation::with_limits(ff, c, limits)?;
    Ok(match alg {
        Algorithm::Gp => {
            let s = eq.gaal_pohst(limits)?;
            Outcome { solutions: Solutions::Standard(s.solutions), stats: s.stats }
        }
        Algorithm::ExhaustiveCr => {
            let s = eq.exhaustive_cr(limits)?;
            Outcome { solutions: Solutions::Compact(s.solutions), stats: s.stats }
        }
        Algorithm::IndexCalculus => {
            let s = eq.index_calculus(limits)?;
            Outcome { solutions: Solutions::Compact(s.solutions), stats: s.stats }
        }
        Algorithm::Oracle => {
            let cap = default_cap(&eq.bounds());
            let t = std::time::Instant::now();
            let found = brute_solve(ff, c, cap, limits)?;
            let stats = SolveStats { phases: vec![("enumerate".into(), t.elapsed())], ..SolveStats::default() };
            Outcome { solutions: Solutions::Standard(found), stats }
        }
    })
}

/// Coordinates over the reduced basis.
pub fn standard(a: &FieldElement) -> String {
    let parts: Vec<String> = a.coords().iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn seconds(d: Duration) -> f64 {
    d.as_secs_f64()
}

pub fn to_json(ff: &FunctionField, c: &Poly, alg: Algorithm, out: &Outcome) -> Value {
    // standard solutions go out as compact representations with no betas,
    // so every solution parses back the same way
    let sols: Vec<Value> = match &out.solutions {
        Solutions::Standard(v) => v.iter().map(|a| CompactRep::trivial(a.clone()).to_json()).collect(),
        Solutions::Compact(v) => v.iter().map(CompactRep::to_json).collect(),
    };
    json!({
        "q": ff.q(),
        "n": ff.degree(),
        "g": ff.genus(),
        "c": c.to_string(),
        "algorithm": alg.name(),
        "count": sols.len(),
        "solutions": sols,
        "stats": {
            "candidates": out.stats.candidates,
            "comp_reps": out.stats.comp_reps,
            "phases": out.stats.phases.iter().map(|(n, d)| json!({"name": n, "seconds": seconds(*d)})).collect::<Vec<_>>(),
        },
    })
}

pub fn to_text(c: &Poly, alg: Algorithm, out: &Outcome) -> String {
    let mut s = format!("c = {c}\nalgorithm = {}\nsolutions = {}\n", alg.name(), out.solutions.len());
    match &out.solutions {
        Solutions::Standard(v) => {
            for a in v {
                s += &format!("  {}\n", standard(a));
            }
        }
        Solutions::Compact(v) => {
            for t in v {
                s += &format!("  {}\n", t.to_json());
            }
        }
    }
    s += &format!("candidates = {}\ncomp_reps = {}\n", out.stats.candidates, out.stats.comp_reps);
    for (name, d) in &out.stats.phases {
        s += &format!("time[{name}] = {:.3}s\n", seconds(*d));
    }
    s
}
