use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use ffnorm::field::FunctionField;
use ffnorm::solvers::{Limits, NormEquation, DEFAULT_ENUMERATION_BUDGET};
use ffnorm::sunit::{class_group_small, infinite_places_set, sval_mat_with_budget};
use serde_json::json;

mod bench;
mod run;
mod spec;

use run::{parse_c, Algorithm, CliError};
use spec::FieldSpec;

#[derive(Parser)]
#[command(name = "ffnorm", version, about = "Norm equations in global function fields")]
struct Cli {
    /// Worker threads for parallel enumeration (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve Norm(alpha) = c up to units and constants.
    Solve {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        c: String,
        #[arg(long, value_enum, default_value = "index-calculus")]
        algorithm: Algorithm,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
        /// Seconds before giving up.
        #[arg(long)]
        timeout: Option<f64>,
        /// Largest enumeration the brute-force searches may attempt.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
    },
    /// Field invariants, unit lattice and class group.
    Info {
        #[arg(long)]
        field: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Search-space sizes of the three solvers.
    Stats {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        c: String,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Run a suite file and print CSV.
    Bench {
        suite: PathBuf,
        /// Seconds per solve; overrides the suite's own setting (default 300).
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
    },
}

fn load(path: &Path) -> Result<FunctionField, CliError> {
    Ok(FieldSpec::load(path)?.build(path)?)
}

fn limits(timeout: Option<f64>, budget: u64) -> Limits {
    let l = Limits { enumeration: budget, ..Limits::default() };
    match timeout {
        Some(t) => l.with_timeout(Duration::from_secs_f64(t)),
        None => l,
    }
}

fn emit(s: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{s}").map_err(|e| CliError::Io(e.to_string()))
}

fn info(path: &Path, output: Output) -> Result<(), CliError> {
    let ff = load(path)?;
    let units = sval_mat_with_budget(&ff, &infinite_places_set(&ff), ffnorm::sunit::DEFAULT_BUDGET)
        .map_err(|e| CliError::Solve(e.into()))?;
    let rows = units.rows_i64();
    let places: Vec<_> = ff.infinite_places().iter().map(|p| (p.e, p.deg)).collect();
    let norms: Vec<String> = ff.reduced_basis().inf_norms.iter().map(|r| r.to_string()).collect();
    let cg = class_group_small(&ff);
    match output {
        Output::Json => {
            let cg = match &cg {
                Ok(c) => json!({"h": c.h, "invariants": c.invariants.iter().map(|d| d.to_string()).collect::<Vec<_>>()}),
                Err(e) => json!({"error": e.to_string()}),
            };
            emit(
                &json!({
                    "q": ff.q(),
                    "n": ff.degree(),
                    "g": ff.genus(),
                    "C_f": ff.size_parameter(),
                    "infinite_places": places.iter().map(|(e, d)| json!({"e": e, "deg": d})).collect::<Vec<_>>(),
                    "reduced_basis_norms": norms,
                    "unit_rank": units.rank(),
                    "unit_values": rows,
                    "regulator": units.regulator.to_string(),
                    "class_group": cg,
                })
                .to_string(),
            )
        }
        Output::Text => {
            let mut s = format!("n = {}\ng = {}\nC_f = {}\n", ff.degree(), ff.genus(), ff.size_parameter());
            s += &format!("infinite places: {}\n", places.len());
            for (i, (e, d)) in places.iter().enumerate() {
                s += &format!("  P_inf,{i}: e={e} deg={d}\n");
            }
            s += &format!("reduced basis norms: {}\n", norms.join(", "));
            s += &format!("unit rank: {}\n", units.rank());
            for r in &rows {
                s += &format!("  {r:?}\n");
            }
            s += &format!("regulator: {}\n", units.regulator);
            s += &match &cg {
                Ok(c) => {
                    let inv: Vec<String> = c.invariants.iter().map(|d| d.to_string()).collect();
                    format!("class number: {}\nclass group: [{}]", c.h, inv.join(", "))
                }
                Err(e) => format!("class group: not computed ({e})"),
            };
            emit(&s)
        }
    }
}

fn stats(path: &Path, c: &str, output: Output) -> Result<(), CliError> {
    let ff = load(path)?;
    let c = parse_c(c, ff.q())?;
    let eq = NormEquation::new(&ff, &c)?;
    let b = eq.bounds();
    let st = eq.stats();
    match output {
        Output::Json => emit(
            &json!({
                "c": c.to_string(),
                "theta": b.theta.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                "Theta": b.big_theta.to_string(),
                "deg_bounds": b.deg_bounds,
                "gp_count": st.gp_count.to_string(),
                "tuple_bound": st.tuple_bound.to_string(),
                "ideal_count": st.ideal_count.to_string(),
            })
            .to_string(),
        ),
        Output::Text => {
            let theta: Vec<String> = b.theta.iter().map(|t| t.to_string()).collect();
            emit(&format!(
                "c = {c}\ntheta = [{}]\nTheta = {}\ndeg bounds = {:?}\ngp elements = {}\nexhaustive-cr tuples = {}\nindex-calculus ideals = {}",
                theta.join(", "),
                b.big_theta,
                b.deg_bounds,
                st.gp_count,
                st.tuple_bound,
                st.ideal_count
            ))
        }
    }
}

fn real_main(cli: Cli) -> Result<(), CliError> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global().map_err(|e| CliError::Io(e.to_string()))?;
    }
    match cli.cmd {
        Cmd::Solve { field, c, algorithm, output, timeout, budget } => {
            let ff = load(&field)?;
            let c = parse_c(&c, ff.q())?;
            let out = run::solve(&ff, &c, algorithm, &limits(timeout, budget))?;
            match output {
                Output::Json => emit(&run::to_json(&ff, &c, algorithm, &out).to_string()),
                Output::Text => emit(run::to_text(&c, algorithm, &out).trim_end()),
            }
        }
        Cmd::Info { field, output } => info(&field, output),
        Cmd::Stats { field, c, output } => stats(&field, &c, output),
        Cmd::Bench { suite, timeout, budget } => {
            let t = timeout.map(Duration::from_secs_f64);
            bench::run_suite(&suite, t, &limits(None, budget), std::io::stdout().lock()).map(|_| ())
        }
    }
}

fn main() -> ExitCode {
    match real_main(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
