//! Command-line front end. [`run`] parses arguments, writes to the given
//! streams and returns the process exit code: 0 on success, 1 on a failed
//! verification or computation, 2 on a usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::count::{count, q_count, Method, ORACLE_VOLUME_LIMIT};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graph::{EdgeAttrs, PlanarMultigraph};
use crate::hexgrid::{build_graph, BoxDims, HexRegion};
use crate::kasteleyn::{flat_orientation, flat_signing};
use crate::sweep::{table_csv, table_markdown, table_rows, verify};
use crate::symmetry::{quotient_graph, SymmetryClass};

#[derive(Debug, Parser)]
#[command(name = "ppsym", version, about = "Count symmetric plane partitions in a box")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count the partitions of one symmetry class in one box.
    Count(CountArgs),
    /// Compare formula, Kasteleyn and brute-force counts over many boxes.
    Verify(VerifyArgs),
    /// Print product-formula values on each class's argument patterns.
    Table(TableArgs),
    /// Write a matching graph as DOT or JSON.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=10))]
    pub class: u8,
    #[arg(long, value_parser = parse_dims)]
    pub dims: BoxDims,
    #[arg(long, value_enum, default_value_t = Method::Formula)]
    pub method: Method,
    /// Volume generating function instead of the count (class 1 only).
    #[arg(long)]
    pub q: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    pub max_side: u32,
    /// Comma-separated class ids; all ten by default.
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u8).range(1..=10))]
    pub classes: Vec<u8>,
    /// Fill the micros column with wall-clock timings.
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub sequential: bool,
    /// Write the CSV report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Markdown,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_a: u32,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphKind {
    Z,
    Quotient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EdgeData {
    None,
    Signs,
    Orientation,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(value_enum)]
    pub kind: GraphKind,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=10))]
    pub class: Option<u8>,
    #[arg(long, value_parser = parse_dims)]
    pub dims: BoxDims,
    #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
    pub format: GraphFormat,
    #[arg(long = "with", value_enum, default_value_t = EdgeData::None)]
    pub with: EdgeData,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_dims(s: &str) -> std::result::Result<BoxDims, String> {
    let parts: Vec<_> = s.split(',').map(|p| p.trim().parse::<i64>()).collect();
    match parts.as_slice() {
        [Ok(a), Ok(b), Ok(c)] => BoxDims::new(*a, *b, *c).map_err(|e| e.to_string()),
        _ => Err(format!("expected three comma-separated integers, got {s:?}")),
    }
}

enum Failure {
    Usage(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidClass(_)
            | Error::NegativeSide(..)
            | Error::BoxNotFixed { .. }
            | Error::UnsupportedPattern { .. }
            | Error::UnsupportedMethod { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Failed(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Failed(e.to_string())
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Count(a) => cmd_count(&a, out),
        Command::Verify(a) => cmd_verify(&a, out, err),
        Command::Table(a) => cmd_table(&a, out),
        Command::Export(a) => cmd_export(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Failed(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn cmd_count(args: &CountArgs, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let cls = SymmetryClass::new(args.class)?;
    let dims = args.dims;
    let head = json!({ "class": args.class, "dims": dims.as_array(), "method": args.method.name() });
    if args.q {
        if args.class != 1 {
            return Err(Failure::Usage("--q is only supported for class 1".into()));
        }
        let p = q_count(dims, args.method)?;
        if args.json {
            let mut v = head;
            v["q"] = json!(true);
            v["value"] = json!(p.to_string());
            v["coefficients"] = json!(p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());
            writeln!(out, "{v}")?;
        } else {
            writeln!(out, "{p}")?;
        }
        return Ok(0);
    }
    if args.method == Method::Ratios && ![1, 3, 5, 9].contains(&args.class) {
        return Err(Failure::Usage(format!("method ratios supports classes 1, 3, 5 and 9, not {}", args.class)));
    }
    let n = count(cls, dims, args.method)?;
    if args.json {
        let mut v = head;
        v["value"] = json!(n.to_string());
        writeln!(out, "{v}")?;
    } else {
        writeln!(out, "{n}")?;
    }
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::result::Result<i32, Failure> {
    if u64::from(args.max_side).pow(3) > ORACLE_VOLUME_LIMIT {
        return Err(Failure::Usage(format!(
            "--max-side {} exceeds the oracle limit (box volume {ORACLE_VOLUME_LIMIT})",
            args.max_side
        )));
    }
    let classes: Vec<SymmetryClass> = if args.classes.is_empty() {
        SymmetryClass::all().collect()
    } else {
        args.classes.iter().map(|&i| SymmetryClass::new(i)).collect::<Result<_>>()?
    };
    let exec = if args.sequential { Execution::Sequential } else { Execution::default() };
    let report = verify(args.max_side, &classes, exec);
    let csv = report.to_csv(args.timing);
    match &args.output {
        Some(path) => std::fs::write(path, csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    if report.passed() {
        writeln!(err, "pass: {} cells agree", report.cells())?;
        Ok(0)
    } else {
        for (class, dims) in &report.mismatches {
            writeln!(err, "mismatch: class {class} box {dims}")?;
        }
        writeln!(err, "FAIL: {} of {} cells disagree", report.mismatches.len(), report.cells())?;
        Ok(1)
    }
}

fn cmd_table(args: &TableArgs, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let rows = table_rows(args.max_a)?;
    let text = match args.format {
        TableFormat::Csv => table_csv(&rows),
        TableFormat::Markdown => table_markdown(&rows),
    };
    out.write_all(text.as_bytes())?;
    Ok(0)
}

fn cmd_export(args: &ExportArgs, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let region = HexRegion::new(args.dims);
    let (name, g): (&str, PlanarMultigraph) = match args.kind {
        GraphKind::Z => {
            if args.class.is_some_and(|c| c != 1) {
                return Err(Failure::Usage("--class applies only to quotient graphs".into()));
            }
            ("z", build_graph(&region))
        }
        GraphKind::Quotient => {
            let id = args.class.ok_or_else(|| Failure::Usage("quotient export needs --class".into()))?;
            ("quotient", quotient_graph(&region, SymmetryClass::new(id)?)?)
        }
    };
    let signed;
    let oriented;
    let attrs = match args.with {
        EdgeData::None => EdgeAttrs::None,
        EdgeData::Signs => {
            signed = flat_signing(&g)?;
            EdgeAttrs::Signs(&signed.signs)
        }
        EdgeData::Orientation => {
            oriented = flat_orientation(&g)?;
            EdgeAttrs::Orientation(&oriented.forward)
        }
    };
    let mut text = match args.format {
        GraphFormat::Dot => g.to_dot(name, attrs),
        GraphFormat::Json => serde_json::to_string_pretty(&g.to_json(attrs)).map_err(Error::from)?,
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &args.output {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(0)
}
