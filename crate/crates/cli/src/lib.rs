//! The `gog` command line.
//!
//! Exit codes: 0 on success, 1 on a domain or verification error, 2 on a
//! usage error. Output is deterministic for fixed arguments, seed and cache
//! contents.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{Pow, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use gog_core::census::{load_or_build_census, resolve_cache_dir};
use gog_core::counting::{asm_number, asm_number_dp};
use gog_core::enumeration::{enumerate_triangles, sample_uniform};
use gog_core::lattice::{join, meet};
use gog_core::matrix::{from_asm, from_column_sum, to_asm, to_column_sum};
use gog_core::meet_census::{
    class_sizes, n_min_census, n_min_exact_with, theorem_report_with, ClassLabel,
};
use gog_core::numeric::{format_sig, ratio_u};
use gog_core::text::{format_all, parse_matrices, parse_triangles};
use gog_core::{AlternatingSignMatrix, BigRational, ColumnSumMatrix, Limits, MonotoneTriangle};

pub mod verify;

/// Significant digits for every rendered rational.
pub const DECIMAL_DIGITS: usize = 12;

#[derive(Debug, Parser, PartialEq, Eq)]
#[command(name = "gog", version, about = "Monotone triangle lattice toolkit")]
pub struct CommandSpec {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, PartialEq, Eq)]
pub enum Command {
    /// Print A(n), the number of monotone triangles of size n.
    AsmCount {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = CountMethod::Formula)]
        method: CountMethod,
    },
    /// List every triangle of size n in lexicographic order.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Print only the number of triangles.
        #[arg(long)]
        count_only: bool,
    },
    /// Convert between triangle, column-sum and ASM text forms.
    Convert {
        #[arg(long, value_enum)]
        from: Form,
        #[arg(long, value_enum)]
        to: Form,
        /// Input file; standard input when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Entrywise minimum of the input triangles.
    Meet {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Entrywise maximum of the input triangles.
    Join {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Distinguished-row census of size n, cached on disk.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Print the longest-block histogram instead of the census.
        #[arg(long)]
        histogram: bool,
    },
    /// Exact probability that r uniform triangles have trivial meet.
    Pmin {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value_t = PminMethod::Ie)]
        method: PminMethod,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Leading-order ratio p_min A(n) / r for n = 1..n_max.
    Theorem1 {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Second-order decomposition of N_min for n = 1..n_max.
    Theorem2 {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Sizes of the longest-block classes of trivial-meet tuples.
    Classes {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// Exact uniform samples.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Run invariant suites.
    Verify {
        #[arg(long, value_enum)]
        suite: verify::Suite,
        #[arg(long)]
        n_max: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountMethod {
    Formula,
    Dp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PminMethod {
    Ie,
    Census,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Triangle,
    ColumnSum,
    Asm,
}

#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` or `--version` output, not a failure.
    #[error("{0}")]
    Help(String),
    #[error("{0}")]
    Usage(String),
    #[error("error: {0}")]
    Domain(#[from] gog_core::Error),
    /// Suite report with at least one failing suite.
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Help(_) => 0,
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Verification(_) => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Domain(e.into())
    }
}

/// Parses `argv` (without the program name).
pub fn parse_command<I, S>(argv: I) -> Result<CommandSpec, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args =
        std::iter::once(std::ffi::OsString::from("gog")).chain(argv.into_iter().map(Into::into));
    CommandSpec::try_parse_from(args).map_err(|e| match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            CliError::Help(e.render().to_string())
        }
        _ => CliError::Usage(e.render().to_string()),
    })
}

fn read_input(path: &Option<PathBuf>, stdin: &mut dyn Read) -> Result<String, CliError> {
    match path {
        Some(p) => Ok(fs::read_to_string(p)?),
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn decimal(q: &BigRational) -> String {
    format_sig(q, DECIMAL_DIGITS)
}

fn tsv(out: &mut String, fields: &[String]) {
    out.push_str(&fields.join("\t"));
    out.push('\n');
}

fn parse_objects(form: Form, text: &str) -> Result<Vec<MonotoneTriangle>, CliError> {
    Ok(match form {
        Form::Triangle => parse_triangles(text)?,
        Form::ColumnSum => parse_matrices(text)?
            .iter()
            .map(|m| ColumnSumMatrix::new(m).map(|c| from_column_sum(&c)))
            .collect::<Result<_, _>>()?,
        Form::Asm => parse_matrices(text)?
            .iter()
            .map(|m| AlternatingSignMatrix::new(m).map(|a| from_asm(&a)))
            .collect::<Result<_, _>>()?,
    })
}

fn render_objects(form: Form, ts: &[MonotoneTriangle]) -> String {
    match form {
        Form::Triangle => format_all(ts),
        Form::ColumnSum => format_all(&ts.iter().map(to_column_sum).collect::<Vec<_>>()),
        Form::Asm => format_all(&ts.iter().map(to_asm).collect::<Vec<_>>()),
    }
}

/// Runs a parsed command and returns its standard output.
pub fn execute(spec: &CommandSpec, stdin: &mut dyn Read) -> Result<String, CliError> {
    let mut out = String::new();
    match &spec.command {
        Command::AsmCount { n, method } => {
            if *n == 0 {
                return Err(gog_core::Error::SizeTooSmall { n: 0, min: 1 }.into());
            }
            let v = match method {
                CountMethod::Formula => asm_number(*n),
                CountMethod::Dp => asm_number_dp(*n)?,
            };
            out.push_str(&format!("{v}\n"));
        }
        Command::Enumerate { n, count_only } => {
            let iter = enumerate_triangles(*n)?;
            if *count_only {
                out.push_str(&format!("{}\n", iter.count()));
            } else {
                out.push_str(&format_all(&iter.collect::<Vec<_>>()));
            }
        }
        Command::Convert { from, to, input } => {
            let text = read_input(input, stdin)?;
            let ts = parse_objects(*from, &text)?;
            out.push_str(&render_objects(*to, &ts));
        }
        Command::Meet { input } | Command::Join { input } => {
            let ts = parse_triangles(&read_input(input, stdin)?)?;
            let t = if matches!(spec.command, Command::Meet { .. }) {
                meet(&ts)?
            } else {
                join(&ts)?
            };
            out.push_str(&format!("{t}\n"));
        }
        Command::Census {
            n,
            cache_dir,
            workers,
            histogram,
        } => {
            let dir = resolve_cache_dir(cache_dir.as_deref());
            let census = load_or_build_census(*n, &dir, *workers)?;
            if *histogram {
                tsv(&mut out, &["max_run".into(), "count".into()]);
                for (l, c) in &census.run_histogram().counts {
                    tsv(&mut out, &[l.to_string(), c.to_string()]);
                }
            } else {
                out.push_str(&census.to_text());
            }
        }
        Command::Pmin {
            n,
            r,
            method,
            json,
            workers,
        } => {
            let n_min = match method {
                PminMethod::Ie => n_min_exact_with(*n, *r, &Limits::default(), *workers)?,
                PminMethod::Census => n_min_census(*n, *r)?,
            };
            let total = Pow::pow(asm_number(*n), *r as u32);
            let p = ratio_u(&n_min, &total);
            if *json {
                let mut m = Map::new();
                m.insert("n".into(), json!(n));
                m.insert("r".into(), json!(r));
                m.insert("n_min".into(), json!(n_min.to_string()));
                m.insert("p_min_num".into(), json!(p.numer().to_string()));
                m.insert("p_min_den".into(), json!(p.denom().to_string()));
                m.insert("p_min_decimal".into(), json!(decimal(&p)));
                out.push_str(&serde_json::to_string(&Value::Object(m)).expect("json"));
                out.push('\n');
            } else {
                tsv(
                    &mut out,
                    &["n", "r", "n_min", "p_min_num", "p_min_den", "p_min_decimal"]
                        .map(String::from),
                );
                tsv(
                    &mut out,
                    &[
                        n.to_string(),
                        r.to_string(),
                        n_min.to_string(),
                        p.numer().to_string(),
                        p.denom().to_string(),
                        decimal(&p),
                    ],
                );
            }
        }
        Command::Theorem1 { r, n_max, workers } => {
            tsv(
                &mut out,
                &[
                    "n",
                    "n_min",
                    "p_min_num",
                    "p_min_den",
                    "p_min_decimal",
                    "ratio_num",
                    "ratio_den",
                    "ratio_decimal",
                ]
                .map(String::from),
            );
            for rep in theorem_report_with(*n_max, *r, *workers)? {
                tsv(
                    &mut out,
                    &[
                        rep.n.to_string(),
                        rep.n_min.to_string(),
                        rep.p_min.numer().to_string(),
                        rep.p_min.denom().to_string(),
                        decimal(&rep.p_min),
                        rep.ratio_to_leading.numer().to_string(),
                        rep.ratio_to_leading.denom().to_string(),
                        decimal(&rep.ratio_to_leading),
                    ],
                );
            }
        }
        Command::Theorem2 { r, n_max, workers } => {
            tsv(
                &mut out,
                &[
                    "n",
                    "n_min",
                    "main",
                    "second",
                    "E",
                    "theta_ratio_decimal",
                    "theta_ratio_num",
                    "theta_ratio_den",
                ]
                .map(String::from),
            );
            for rep in theorem_report_with(*n_max, *r, *workers)? {
                let (dec, num, den) = match &rep.theta_ratio {
                    Some(q) => (decimal(q), q.numer().to_string(), q.denom().to_string()),
                    None => ("NA".into(), "NA".into(), "NA".into()),
                };
                tsv(
                    &mut out,
                    &[
                        rep.n.to_string(),
                        rep.n_min.to_string(),
                        rep.main_term.to_string(),
                        rep.second_term.to_string(),
                        rep.error_term.to_string(),
                        dec,
                        num,
                        den,
                    ],
                );
            }
        }
        Command::Classes { n, r } => {
            let c = class_sizes(*n, *r)?;
            tsv(
                &mut out,
                &["class", "size", "bound", "size_over_bound_decimal"].map(String::from),
            );
            for label in c.labels() {
                let size = c.get(label).expect("label from table");
                let bound = match label {
                    ClassLabel::Exact(l) if l == *n => Some(c.full_block_bound()),
                    ClassLabel::Exact(l) if l + 1 == *n => c.near_full_block_bound(),
                    ClassLabel::Exact(l) => c.small_class_bound(n - l),
                    ClassLabel::AtMost(_) => None,
                };
                let (b, q) = match bound {
                    Some(b) if !b.is_zero() => {
                        let q = ratio_u(size, &b);
                        (b.to_string(), decimal(&q))
                    }
                    _ => ("NA".into(), "NA".into()),
                };
                tsv(&mut out, &[label.to_string(), size.to_string(), b, q]);
            }
            tsv(
                &mut out,
                &[
                    "total".into(),
                    c.total.to_string(),
                    "NA".into(),
                    "NA".into(),
                ],
            );
        }
        Command::Sample { n, count, seed } => {
            out.push_str(&format_all(&sample_uniform(*n, *count, *seed)?));
        }
        Command::Verify { suite, n_max } => {
            let results = verify::verify_suites(*suite, *n_max)?;
            for res in &results {
                out.push_str(&res.summary_line());
                out.push('\n');
            }
            if results.iter().any(|r| !r.passed()) {
                return Err(CliError::Verification(out));
            }
        }
    }
    Ok(out)
}

/// Full entry point: parse, execute, write output, return the exit code.
pub fn run<I, S>(
    argv: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let result = parse_command(argv).and_then(|spec| execute(&spec, stdin));
    match result {
        Ok(text) => {
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Err(CliError::Help(text)) => {
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Err(CliError::Verification(report)) => {
            let _ = stdout.write_all(report.as_bytes());
            let _ = writeln!(stderr, "error: verification failed");
            1
        }
        Err(CliError::Usage(msg)) => {
            let _ = stderr.write_all(msg.as_bytes());
            2
        }
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}
