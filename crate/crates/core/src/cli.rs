//! Command line front end: `h2`, `verify-hopf` and `curves`.
//!
//! Exit codes: 0 success, 1 usage or parse error (and a failing
//! `verify-hopf`), 2 closure without two components, 3 unresolved tangency,
//! 4 I/O error.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::braid::{artin_action, parse_braid};
use crate::cassonlin::{casson_lin_h2_with, verify_hopf, CassonLinResult, HopfTrace};
use crate::error::Error;
use crate::pillowcase::{format_angle, round_significant, sample_curves, write_curve_csv, ScanConfig};
use crate::repspace::SignTuple;
use crate::Sign;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPONENTS: i32 = 2;
pub const EXIT_TANGENCY: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "casson-lin", version, about = "SU(2) Casson-Lin invariant of 2-strand braid closures")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Number of curve samples in the intersection scan.
    #[arg(long, global = true, default_value_t = 4096, value_parser = parse_resolution)]
    pub scan_resolution: usize,
    /// Smallest |det| accepted as a transverse intersection.
    #[arg(long, global = true, value_parser = parse_tolerance)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute h2 of the closure of a braid such as "s1^2".
    H2 {
        #[arg(allow_hyphen_values = true)]
        braid: String,
        #[arg(long, default_value_t = 2)]
        strands: usize,
    },
    /// Replay the Hopf link computation and check every intermediate value.
    VerifyHopf,
    /// Write sampled curves and a summary to a directory.
    Curves {
        #[arg(allow_hyphen_values = true)]
        braid: String,
        #[arg(long, default_value_t = 2)]
        strands: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_resolution(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 16 => Ok(n),
        Ok(_) => Err("resolution must be at least 16".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_tolerance(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        Ok(_) => Err("tolerance must be positive and finite".into()),
        Err(e) => Err(e.to_string()),
    }
}

impl Cli {
    pub fn scan_config(&self) -> ScanConfig {
        let mut config = ScanConfig { resolution: self.scan_resolution, ..ScanConfig::default() };
        if let Some(tol) = self.tol {
            config.transversality_tolerance = tol;
        }
        config
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntersectionSummary {
    pub theta_delta: f64,
    pub theta_gamma: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnresolvedSummary {
    pub theta: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub determinant: f64,
}

/// Machine-readable form of a [`CassonLinResult`]; angles carry 12
/// significant digits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub braid: String,
    pub epsilon: Vec<i8>,
    pub intersections: Vec<IntersectionSummary>,
    pub unresolved: Vec<UnresolvedSummary>,
    pub h2: i64,
    pub lk: i64,
    pub agrees: bool,
}

impl From<&CassonLinResult> for Summary {
    fn from(r: &CassonLinResult) -> Self {
        Summary {
            braid: r.braid.to_string(),
            epsilon: r.epsilon.to_i8s(),
            intersections: r
                .intersections
                .iter()
                .map(|d| IntersectionSummary {
                    theta_delta: round_significant(d.theta_delta),
                    theta_gamma: round_significant(d.theta_gamma),
                    theta1: round_significant(d.point.theta1()),
                    theta2: round_significant(d.point.theta2()),
                    sign: d.sign,
                })
                .collect(),
            unresolved: r
                .unresolved
                .iter()
                .map(|u| UnresolvedSummary {
                    theta: round_significant(u.theta),
                    theta1: round_significant(u.point.theta1()),
                    theta2: round_significant(u.point.theta2()),
                    determinant: round_significant(u.determinant),
                })
                .collect(),
            h2: r.h2,
            lk: r.lk,
            agrees: r.agrees,
        }
    }
}

enum Failure {
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotTwoComponents { .. } => EXIT_COMPONENTS,
        Error::TangencyUnresolved { .. } => EXIT_TANGENCY,
        _ => EXIT_USAGE,
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_IO
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    match &cli.command {
        Command::H2 { braid, strands } => {
            let b = parse_braid(braid, *strands)?;
            let result = casson_lin_h2_with(&b, &SignTuple::twisted_pair(), &cli.scan_config())?;
            write_result(cli.format, &result, out)?;
            Ok(if result.is_complete() { EXIT_OK } else { EXIT_TANGENCY })
        }
        Command::VerifyHopf => {
            let trace = verify_hopf();
            write_trace(cli.format, &trace, out)?;
            Ok(if trace.all_pass() { EXIT_OK } else { EXIT_USAGE })
        }
        Command::Curves { braid, strands, out: dir } => {
            let b = parse_braid(braid, *strands)?;
            let eps = SignTuple::twisted_pair();
            let result = casson_lin_h2_with(&b, &eps, &cli.scan_config())?;
            let (delta, gamma) = sample_curves(&eps, &artin_action(&b), cli.scan_resolution)?;
            fs::create_dir_all(dir)?;
            write_file(&dir.join("delta.csv"), |w| write_curve_csv(w, &delta))?;
            write_file(&dir.join("gamma.csv"), |w| write_curve_csv(w, &gamma))?;
            write_file(&dir.join("summary.json"), |w| write_json(w, &Summary::from(&result)))?;
            writeln!(
                out,
                "wrote delta.csv ({} rows), gamma.csv ({} rows), summary.json to {}",
                delta.len(),
                gamma.len(),
                dir.display()
            )?;
            writeln!(out, "h2 = {}, lk = {}", result.h2, result.lk)?;
            Ok(if result.is_complete() { EXIT_OK } else { EXIT_TANGENCY })
        }
    }
}

fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    body(&mut w)?;
    w.flush()
}

fn write_json<T: Serialize>(mut w: impl Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_result(format: Format, r: &CassonLinResult, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Json => write_json(out, &Summary::from(r)),
        Format::Csv => {
            writeln!(out, "theta_delta,theta_gamma,theta1,theta2,sign")?;
            for d in &r.intersections {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    format_angle(d.theta_delta),
                    format_angle(d.theta_gamma),
                    format_angle(d.point.theta1()),
                    format_angle(d.point.theta2()),
                    d.sign
                )?;
            }
            Ok(())
        }
        Format::Text => {
            writeln!(out, "braid: {}", r.braid)?;
            let eps: Vec<String> = r.epsilon.to_i8s().iter().map(i8::to_string).collect();
            writeln!(out, "epsilon: ({})", eps.join(", "))?;
            writeln!(out, "intersections: {}", r.intersections.len())?;
            if !r.intersections.is_empty() {
                writeln!(out, "  {:>16} {:>16} {:>16} {:>16} {:>5}", "theta_delta", "theta_gamma", "theta1", "theta2", "sign")?;
                for d in &r.intersections {
                    writeln!(
                        out,
                        "  {:>16} {:>16} {:>16} {:>16} {:>5}",
                        format_angle(d.theta_delta),
                        format_angle(d.theta_gamma),
                        format_angle(d.point.theta1()),
                        format_angle(d.point.theta2()),
                        d.sign.to_string()
                    )?;
                }
            }
            for u in &r.unresolved {
                writeln!(
                    out,
                    "unresolved tangency at theta = {} (determinant {:.3e})",
                    format_angle(u.theta),
                    u.determinant
                )?;
            }
            writeln!(out, "h2 = {}, lk = {}", r.h2, r.lk)?;
            writeln!(out, "h2 = -lk: {}", if r.agrees { "yes" } else { "no" })
        }
    }
}

pub fn write_trace(format: Format, trace: &HopfTrace, out: &mut dyn Write) -> io::Result<()> {
    #[derive(Serialize)]
    struct Entry<'a> {
        label: &'a str,
        expected: &'a str,
        observed: &'a str,
        pass: bool,
    }
    match format {
        Format::Json => {
            let entries: Vec<Entry> = trace
                .entries
                .iter()
                .map(|e| Entry { label: &e.label, expected: &e.expected, observed: &e.observed, pass: e.pass })
                .collect();
            write_json(out, &serde_json::json!({ "entries": entries, "pass": trace.all_pass() }))
        }
        Format::Csv => {
            writeln!(out, "label,expected,observed,pass")?;
            for e in &trace.entries {
                writeln!(
                    out,
                    "{},{},{},{}",
                    csv_field(&e.label),
                    csv_field(&e.expected),
                    csv_field(&e.observed),
                    e.pass
                )?;
            }
            Ok(())
        }
        Format::Text => {
            write!(out, "{trace}")?;
            writeln!(out, "{}", if trace.all_pass() { "all checks passed" } else { "some checks FAILED" })
        }
    }
}
