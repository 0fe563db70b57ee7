//! `thetanorm`: theta-function evaluation tables, modular-identity residuals
//! and certification of the Gaussian approximation bounds.

mod grid;
mod output;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thetanorm::gauss::{expansion_sweep, gaussian_argument, symmetric_grid};
use thetanorm::{
    certify, theta_auto, theta_product, theta_series, theta_transformed,
    transform_identity_residual, EvalReport, ThetaKind,
};

use crate::grid::{parse_span, parse_t_list, Span, TList};
use crate::output::{CertifyOutput, CertifyRow, EvalRow};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Domain(#[from] thetanorm::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot write JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Parser, Debug)]
#[command(name = "thetanorm", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one theta function at v, t.
    Eval(EvalArgs),
    /// Certify the Gaussian approximation bound over an x-grid.
    Certify(CertifyArgs),
    /// Write a (t, v) grid of evaluations.
    Table(TableArgs),
    /// Relative difference between the direct and transformed routes.
    Residual(ResidualArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum MethodArg {
    Auto,
    Series,
    Product,
    Transformed,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Plain,
}

fn parse_kind(s: &str) -> Result<ThetaKind, String> {
    s.parse().map_err(|e: thetanorm::Error| e.to_string())
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: ThetaKind,
    #[arg(long, allow_negative_numbers = true)]
    v: f64,
    #[arg(long, allow_negative_numbers = true)]
    t: f64,
    #[arg(long, default_value_t = 1e-12, allow_negative_numbers = true)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: ThetaKind,
    #[arg(long = "C", visible_alias = "c", allow_negative_numbers = true)]
    c: f64,
    #[arg(long, allow_negative_numbers = true)]
    eps: f64,
    /// Comma list and/or geometric ranges `start:stop:count`.
    #[arg(long = "t", value_parser = parse_t_list, allow_hyphen_values = true)]
    t_list: TList,
    #[arg(long, default_value_t = 101)]
    x_count: usize,
    /// Parameter of the two-term expansion bound checked along the way.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// Omit for all four kinds.
    #[arg(long, value_parser = parse_kind)]
    kind: Option<ThetaKind>,
    #[arg(long, value_parser = parse_span, allow_hyphen_values = true)]
    v_range: Span,
    #[arg(long, value_parser = parse_span, allow_hyphen_values = true)]
    t_range: Span,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    steps: u32,
    #[arg(long, default_value_t = 1e-12, allow_negative_numbers = true)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ResidualArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: ThetaKind,
    #[arg(long, allow_negative_numbers = true)]
    v: f64,
    #[arg(long, allow_negative_numbers = true)]
    t: f64,
}

fn evaluate(
    kind: ThetaKind,
    v: f64,
    t: f64,
    tol: f64,
    method: MethodArg,
) -> thetanorm::Result<EvalReport> {
    match method {
        MethodArg::Auto => theta_auto(kind, v, t, tol),
        MethodArg::Series => theta_series(kind, v, t, tol),
        MethodArg::Product => theta_product(kind, v, t, tol),
        MethodArg::Transformed => theta_transformed(kind, v, t, tol),
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("THETA_GAUSS_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "THETA_GAUSS_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size thread pool: {e}")))
}

fn cmd_eval(args: EvalArgs) -> Result<ExitCode, CliError> {
    let report = evaluate(args.kind, args.v, args.t, args.tol, args.method)?;
    let row = EvalRow::new(args.kind, args.v, args.t, &report);
    let mut out = io::stdout().lock();
    match args.format {
        Format::Plain => row.write_plain(&mut out)?,
        Format::Json => {
            serde_json::to_writer(&mut out, &row)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.serialize(&row)?;
            w.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_certify(args: CertifyArgs) -> Result<ExitCode, CliError> {
    let mut ts = args.t_list.0.clone();
    ts.sort_by(f64::total_cmp);
    ts.dedup();

    let report = certify(args.kind, args.c, args.eps, &ts, args.x_count)?;
    let xs = symmetric_grid(args.c, args.x_count);
    let sweeps = ts
        .par_iter()
        .map(|&t| {
            let vs: Vec<f64> = xs
                .iter()
                .map(|&x| gaussian_argument(args.kind, x, t))
                .collect();
            expansion_sweep(args.kind, t, args.a, &vs)
        })
        .collect::<thetanorm::Result<Vec<_>>>()?;

    let rows: Vec<CertifyRow> = ts
        .iter()
        .enumerate()
        .map(|(i, &t)| CertifyRow::new(t, &report, i, &sweeps[i]))
        .collect();
    let all_pass = rows.iter().all(|r| r.pass && r.expansion_pass);
    let summary = CertifyOutput {
        kind: args.kind,
        c: args.c,
        eps: args.eps,
        a: args.a,
        x_count: args.x_count,
        rows,
        all_pass,
        decay_slope: report.decay_slope,
    };

    let mut out = io::stdout().lock();
    match args.format {
        Format::Plain => summary.write_plain(&mut out)?,
        Format::Json => {
            serde_json::to_writer(&mut out, &summary)?;
            writeln!(out)?;
        }
        Format::Csv => summary.write_csv(&mut out)?,
    }
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_table(args: TableArgs) -> Result<ExitCode, CliError> {
    let kinds: Vec<ThetaKind> = match args.kind {
        Some(k) => vec![k],
        None => ThetaKind::ALL.to_vec(),
    };
    let steps = args.steps as usize;
    let vs = args.v_range.linspace(steps);
    let ts = args.t_range.linspace(steps);
    let mut points = Vec::with_capacity(kinds.len() * steps * steps);
    for &k in &kinds {
        for &t in &ts {
            points.extend(vs.iter().map(|&v| (k, v, t)));
        }
    }
    let rows = points
        .par_iter()
        .map(|&(k, v, t)| theta_auto(k, v, t, args.tol).map(|r| EvalRow::new(k, v, t, &r)))
        .collect::<thetanorm::Result<Vec<_>>>()?;

    let sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(io::BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    match args.format {
        Format::Json => {
            let mut sink = sink;
            serde_json::to_writer_pretty(&mut sink, &rows)?;
            writeln!(sink)?;
            sink.flush()?;
        }
        Format::Csv | Format::Plain => {
            let mut w = csv::Writer::from_writer(sink);
            for row in &rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_residual(args: ResidualArgs) -> Result<ExitCode, CliError> {
    let r = transform_identity_residual(args.kind, args.v, args.t)?;
    println!("{r}");
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Table(a) => cmd_table(a),
        Command::Residual(a) => cmd_residual(a),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Usage(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
