//! `monopot eval | table | verify | jump`.
//!
//! Exit status: 0 when everything passed, 1 when a check failed, 2 on usage
//! or input errors. Payloads go to stdout, diagnostics to stderr.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use monopot_core::distributions::boundary_value;
use monopot_core::hyperfunctions::{jump_check, QuadratureConfig, JUMP_TOLERANCE};
use monopot_core::{AlgebraContext, Point, PotentialId, Potentials, Series, Side};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{
    blade_labels, blades, point_coords, Check, EvalOutput, EvalRow, JumpOutput, TableOutput, TableRow,
    VerifyOutput, SCHEMA,
};
use crate::points::{parse_inline, read_csv, DEFAULT_SEED};
use crate::suites::{run_suite, Suite, SuiteOptions};
use crate::{thread_pool, AppError};

#[derive(Debug, Parser)]
#[command(name = "monopot", version, about = "Monogenic potentials in the half-spaces and their boundary values")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a potential at points of the upper or lower half-space.
    Eval(EvalArgs),
    /// Print boundary values a_k, b_k or c_k.
    Table(TableArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Measure the jump of the representation of index n.
    Jump(JumpArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Boundary dimension.
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads (overrides MONOPOT_THREADS).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: Common,
    /// Potential such as `C:-2`, `A:0` or `B:1`.
    #[arg(long, allow_hyphen_values = true)]
    pub potential: PotentialId,
    /// Inline point `x0,x1,...,xm`; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Vec<String>,
    /// CSV file with header `x0,x1,...,xm`.
    #[arg(long)]
    pub points: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = parse_series)]
    pub series: Series,
    /// Index or inclusive range such as `-3..3`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub k: (i32, i32),
    /// `+`, `-` or both when omitted.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_side)]
    pub side: Option<Side>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Replaces the suite's main tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Random points per half-space.
    #[arg(long, default_value_t = 100)]
    pub per_half: usize,
}

#[derive(Debug, Args)]
pub struct JumpArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_hyphen_values = true)]
    pub n: i32,
    #[arg(long, default_value_t = JUMP_TOLERANCE)]
    pub tol: f64,
}

fn parse_series(s: &str) -> Result<Series, String> {
    s.parse().map_err(|e: monopot_core::Error| e.to_string())
}

fn parse_side(s: &str) -> Result<Side, String> {
    s.parse().map_err(|e: monopot_core::Error| e.to_string())
}

fn parse_range(s: &str) -> Result<(i32, i32), String> {
    let int = |t: &str| t.trim().parse::<i32>().map_err(|_| format!("{t:?} is not an integer"));
    // a leading '-' belongs to the first bound
    match s.get(1..).and_then(|rest| rest.find("..")).map(|i| i + 1) {
        Some(i) => {
            let (lo, hi) = (int(&s[..i])?, int(&s[i + 2..])?);
            if lo > hi {
                return Err(format!("empty range {s}"));
            }
            Ok((lo, hi))
        }
        None => int(s).map(|k| (k, k)),
    }
}

/// Parses `std::env::args`, runs, and returns the exit status.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(passed) => {
            if passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = out.flush();
            eprintln!("monopot: {e}");
            e.exit_code()
        }
    }
}

/// Runs one command, writing the payload to `out`. Returns whether all checks
/// passed (always true for `eval` and `table`).
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<bool, AppError> {
    match &cli.command {
        Command::Eval(a) => eval(a, out).map(|_| true),
        Command::Table(a) => table(a, out).map(|_| true),
        Command::Verify(a) => verify(a, out),
        Command::Jump(a) => jump(a, out),
    }
}

fn context(c: &Common) -> Result<AlgebraContext, AppError> {
    AlgebraContext::new(c.m).map_err(|e| AppError::Usage(e.to_string()))
}

fn write_json<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<(), AppError> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new().flexible(true).from_writer(out)
}

fn eval(a: &EvalArgs, out: &mut dyn Write) -> Result<(), AppError> {
    let ctx = context(&a.common)?;
    let m = ctx.m();
    let mut pts: Vec<Point> = a.point.iter().map(|s| parse_inline(m, s)).collect::<Result<_, _>>()?;
    if let Some(path) = &a.points {
        let name = path.display().to_string();
        let f = File::open(path).map_err(|e| AppError::Usage(format!("{name}: {e}")))?;
        pts.extend(read_csv(m, &name, f)?);
    }
    if pts.is_empty() {
        return Err(AppError::Usage("eval needs --point or --points".into()));
    }
    let pots = Potentials::new(ctx);
    pots.check_id(a.potential)?;
    let pool = thread_pool(a.common.threads)?;
    let values: Vec<_> = pool.install(|| pts.par_iter().map(|p| pots.eval(a.potential, p)).collect());
    let mut rows = Vec::with_capacity(pts.len());
    for (p, v) in pts.iter().zip(values) {
        rows.push(EvalRow { point: point_coords(p), blades: blades(&v?) });
    }
    match a.common.format {
        Format::Json => write_json(
            out,
            &EvalOutput { schema: SCHEMA, command: "eval", m, potential: a.potential.to_string(), results: rows },
        ),
        Format::Csv => {
            let mut w = csv_writer(out);
            let mut header: Vec<String> = (0..=m).map(|i| format!("x{i}")).collect();
            header.extend(blade_labels(m));
            w.write_record(&header)?;
            for r in rows {
                let rec = r.point.iter().chain(r.blades.iter().map(|b| &b.value)).map(|v| format!("{v:e}"));
                w.write_record(rec)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn series_name(s: Series) -> &'static str {
    match s {
        Series::A => "a",
        Series::B => "b",
        Series::C => "c",
    }
}

fn table(a: &TableArgs, out: &mut dyn Write) -> Result<(), AppError> {
    let ctx = context(&a.common)?;
    let sides = match a.side {
        Some(s) => vec![s],
        None => vec![Side::Plus, Side::Minus],
    };
    let mut rows = Vec::new();
    for k in a.k.0..=a.k.1 {
        for &side in &sides {
            rows.push(TableRow {
                series: series_name(a.series).into(),
                k,
                side: side.to_string(),
                distribution: boundary_value(ctx, a.series, k, side).to_string(),
            });
        }
    }
    match a.common.format {
        Format::Json => write_json(out, &TableOutput { schema: SCHEMA, command: "table", m: ctx.m(), rows }),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<bool, AppError> {
    let ctx = context(&a.common)?;
    if a.per_half == 0 {
        return Err(AppError::Usage("--per-half must be positive".into()));
    }
    let pool = thread_pool(a.common.threads)?;
    let opts = SuiteOptions { points_per_half: a.per_half, seed: a.seed, tolerance: a.tol, ..Default::default() };
    let checks = run_suite(a.suite, ctx.m(), &opts, &pool).map_err(|e| match e {
        AppError::Core(monopot_core::Error::Unsupported(msg)) => AppError::Usage(msg),
        e => e,
    })?;
    let passed = checks.iter().all(|c| c.passed);
    for c in checks.iter().filter(|c| !c.passed) {
        eprintln!("FAIL {} {}: {:e} > {:e}", c.group, c.name, c.value, c.tolerance);
    }
    match a.common.format {
        Format::Json => write_json(
            out,
            &VerifyOutput { schema: SCHEMA, command: "verify", m: ctx.m(), suite: a.suite.to_string(), passed, checks },
        )?,
        Format::Csv => write_checks_csv(out, &checks)?,
    }
    Ok(passed)
}

fn write_checks_csv(out: &mut dyn Write, checks: &[Check]) -> Result<(), AppError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["group", "name", "value", "tolerance", "passed", "detail"])?;
    for c in checks {
        w.write_record([
            c.group.clone(),
            c.name.clone(),
            format!("{:e}", c.value),
            format!("{:e}", c.tolerance),
            c.passed.to_string(),
            c.detail.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn jump(a: &JumpArgs, out: &mut dyn Write) -> Result<bool, AppError> {
    let ctx = context(&a.common)?;
    let cfg = QuadratureConfig::for_dimension(ctx.m()).map_err(|e| AppError::Usage(e.to_string()))?;
    let pots = Potentials::new(ctx);
    let pot = monopot_core::hyperfunctions::representation(ctx, a.n).potential;
    if (-3..=3).contains(&a.n) {
        pots.check_id(pot).map_err(|e| AppError::Usage(format!("n = {}: {e}", a.n)))?;
    }
    let pool = thread_pool(a.common.threads)?;
    let rep = pool
        .install(|| jump_check(&pots, a.n, &cfg))
        .map_err(|e| AppError::Usage(e.to_string()))?;
    let report = JumpOutput::new(&rep, a.tol);
    match a.common.format {
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            let mut w = csv_writer(out);
            let labels = blade_labels(ctx.m());
            let mut header: Vec<String> =
                ["n", "relation", "phi_id", "rel_err", "applicable"].iter().map(|s| s.to_string()).collect();
            header.extend(labels.iter().map(|l| format!("jump_{l}")));
            header.extend(labels.iter().map(|l| format!("target_{l}")));
            w.write_record(&header)?;
            for r in &report.rows {
                let mut rec =
                    vec![r.n.to_string(), r.relation.clone(), r.phi_id.clone(), format!("{:e}", r.rel_err), r.applicable.to_string()];
                rec.extend(r.jump_value.iter().chain(&r.target_value).map(|b| format!("{:e}", b.value)));
                w.write_record(&rec)?;
            }
            w.flush()?;
        }
    }
    Ok(report.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-3..3"), Ok((-3, 3)));
        assert_eq!(parse_range("-1"), Ok((-1, -1)));
        assert_eq!(parse_range("-5..-2"), Ok((-5, -2)));
        assert_eq!(parse_range("2"), Ok((2, 2)));
        assert!(parse_range("3..1").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn command_line_parses() {
        let cli = Cli::try_parse_from(["monopot", "eval", "--m", "2", "--potential", "C:-2", "--point", "-1,0.5,0"]).unwrap();
        match cli.command {
            Command::Eval(a) => {
                assert_eq!(a.potential, PotentialId::c(-2));
                assert_eq!(a.point, vec!["-1,0.5,0".to_string()]);
            }
            _ => panic!(),
        }
        assert!(Cli::try_parse_from(["monopot", "jump", "--m", "2"]).is_err());
    }
}
