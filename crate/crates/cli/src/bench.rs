//! Benchmark suites: TOML files with `[[case]]` tables.
//!
//! ```toml
//! timeout = 60          # optional, seconds per solve
//! [[case]]
//! field = "e1.toml"     # or inline q = 3, f = "..."
//! c = "x + 1"
//! algorithms = ["gp", "index-calculus"]
//! ```

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use ffnorm::solvers::Limits;
use serde::Deserialize;

use crate::run::{parse_c, solve, Algorithm, CliError};
use crate::spec::{line_col, FieldSpec, SpecError};

pub const HEADER: [&str; 9] = ["field", "n", "g", "q", "deg_c", "algorithm", "seconds", "status", "solutions"];

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Suite {
    timeout: Option<f64>,
    #[serde(default)]
    case: Vec<Case>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Case {
    name: Option<String>,
    field: Option<PathBuf>,
    q: Option<u32>,
    f: Option<String>,
    c: String,
    algorithms: Vec<Algorithm>,
}

fn load(path: &Path) -> Result<Suite, CliError> {
    let src = std::fs::read_to_string(path).map_err(|e| SpecError::Io { path: path.into(), source: e })?;
    toml::from_str(&src).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_col(&src, s.start));
        CliError::Spec(SpecError::Syntax { path: path.into(), line, column, message: e.message().trim().into() })
    })
}

fn case_spec(case: &Case, dir: &Path, suite: &Path) -> Result<(String, PathBuf, FieldSpec), CliError> {
    match (&case.field, case.q, &case.f) {
        (Some(p), None, None) => {
            let full = dir.join(p);
            let spec = FieldSpec::load(&full)?;
            Ok((case.name.clone().unwrap_or_else(|| p.display().to_string()), full, spec))
        }
        (None, Some(q), Some(f)) => {
            let name = case.name.clone().unwrap_or_else(|| format!("q={q} f={f}"));
            Ok((name, suite.to_path_buf(), FieldSpec { q, f: f.clone() }))
        }
        _ => Err(CliError::Spec(SpecError::Syntax {
            path: suite.into(),
            line: 1,
            column: 1,
            message: "each case needs either `field` or both `q` and `f`".into(),
        })),
    }
}

/// Runs every row and writes CSV. Rows that exceed the time or enumeration
/// budget are marked TIMEOUT; other per-row failures are marked ERROR.
pub fn run_suite<W: Write>(path: &Path, timeout: Option<Duration>, limits: &Limits, out: W) -> Result<usize, CliError> {
    let suite = load(path)?;
    let timeout = timeout.unwrap_or_else(|| Duration::from_secs_f64(suite.timeout.unwrap_or(300.0)));
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(HEADER).map_err(io)?;
    let mut rows = 0;
    for case in &suite.case {
        let (name, spec_path, spec) = case_spec(case, dir, path)?;
        let ff = spec.build(&spec_path)?;
        let c = parse_c(&case.c, ff.q())?;
        for &alg in &case.algorithms {
            let lim = Limits { deadline: None, ..limits.clone() }.with_timeout(timeout);
            let t = Instant::now();
            let res = solve(&ff, &c, alg, &lim);
            let secs = t.elapsed();
            let (status, count) = match &res {
                Ok(o) if secs <= timeout => ("OK", o.solutions.len().to_string()),
                Ok(_) => ("TIMEOUT", String::new()),
                Err(e) if e.is_budget() => ("TIMEOUT", String::new()),
                Err(e) => {
                    eprintln!("{name} / {} / {}: {e}", case.c, alg.name());
                    ("ERROR", String::new())
                }
            };
            w.write_record([
                name.clone(),
                ff.degree().to_string(),
                ff.genus().to_string(),
                ff.q().to_string(),
                c.deg_i64().to_string(),
                alg.name().to_string(),
                format!("{:.6}", secs.as_secs_f64()),
                status.to_string(),
                count,
            ])
            .map_err(io)?;
            w.flush().map_err(|e| CliError::Io(e.to_string()))?;
            rows += 1;
        }
    }
    Ok(rows)
}
