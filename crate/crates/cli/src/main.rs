use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use gw_core::euler::Route;
use gw_core::geometry::{parse_spec, validate, ValidatedSpec};
use gw_core::mirror::compute;
use gw_core::oracle::oracle_consensus;
use gw_core::rational::format_rat;
use gw_core::report::RunReport;
use gw_core::series::Degree;
use gw_core::verify::{oracle_values, verify, OracleSettings};
use gw_core::Error;

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gwmirror",
    version,
    about = "Exact genus-0 invariants from hypergeometric Euler data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the mirror map and print K_d for 1 <= |d| <= D.
    Compute {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        max_degree: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Run with the Euler class (x -> 0 from the start).
        #[arg(long, conflicts_with = "chern")]
        euler: bool,
        /// Run with the Chern polynomial (default).
        #[arg(long)]
        chern: bool,
        /// Record wall-clock time (breaks byte-identical output).
        #[arg(long)]
        timing: bool,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Localization value at random torus weights.
    Oracle {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run the engine, the oracle and all consistency checks.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        max_degree: u32,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn load(path: &Path) -> Result<ValidatedSpec, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let spec = parse_spec(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    validate(&spec).map_err(|e| format!("{}: {e}", path.display()))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Validation(_) | Error::Unsupported(_) => EXIT_BAD_INPUT,
        _ => EXIT_INCONSISTENT,
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("gwmirror: {msg}");
    ExitCode::from(code)
}

fn csv_table(report: &RunReport, m: usize) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (1..=m).map(|i| format!("d{i}")).collect();
    header.extend(["K", "oracle", "match"].map(String::from));
    w.write_record(&header)?;
    for e in &report.invariants {
        let mut row: Vec<String> = e.degree.iter().map(u32::to_string).collect();
        row.push(e.k.clone());
        row.push(e.oracle.clone().unwrap_or_default());
        row.push(e.matches.map(|b| b.to_string()).unwrap_or_default());
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn cmd_compute(
    spec: &Path,
    max_degree: u32,
    format: Format,
    euler: bool,
    timing: bool,
    oracle: OracleSettings,
) -> ExitCode {
    let spec = match load(spec) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_BAD_INPUT, e),
    };
    let route = if euler { Route::Euler } else { Route::Chern };
    let start = Instant::now();
    let c = match compute(&spec, route, max_degree) {
        Ok(c) => c,
        Err(e) => return fail(exit_code(&e), e),
    };
    let oracles = match oracle_values(&spec, max_degree, oracle) {
        Ok(o) => o,
        Err(e) => return fail(exit_code(&e), e),
    };
    let mut report = RunReport::new(spec.spec(), max_degree, &c);
    for o in &oracles {
        report.set_oracle(&Degree(vec![o.degree]), &o.value);
    }
    let elapsed = start.elapsed().as_millis() as u64;
    let out = match format {
        Format::Json => {
            if timing {
                report.timing_ms = Some(elapsed);
            }
            report.to_json() + "\n"
        }
        Format::Csv => {
            if timing {
                eprintln!("elapsed_ms={elapsed}");
            }
            match csv_table(&report, spec.num_factors()) {
                Ok(s) => s,
                Err(e) => return fail(EXIT_INCONSISTENT, e),
            }
        }
    };
    print!("{out}");
    ExitCode::SUCCESS
}

fn cmd_oracle(spec: &Path, degree: u32, samples: usize, seed: u64) -> ExitCode {
    let spec = match load(spec) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_BAD_INPUT, e),
    };
    match oracle_consensus(&spec, degree, samples, seed) {
        Ok(r) => {
            let mut out = format!("degree {degree}: {}\n", format_rat(&r.value));
            for (s, v) in &r.samples {
                let lambda: Vec<String> = s.lambda.iter().map(format_rat).collect();
                out += &format!(
                    "sample seed={} lambda=[{}]: {}\n",
                    s.seed,
                    lambda.join(", "),
                    format_rat(v)
                );
            }
            out += &format!(
                "agreement: {}/{} samples\n",
                r.samples.len(),
                r.samples.len()
            );
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(exit_code(&e), e),
    }
}

fn cmd_verify(spec: &Path, max_degree: u32, oracle: OracleSettings) -> ExitCode {
    let spec = match load(spec) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_BAD_INPUT, e),
    };
    let v = verify(&spec, max_degree, oracle);
    let mut out = String::new();
    for c in &v.checks {
        match &c.result {
            Ok(()) => out += &format!("PASS {}\n", c.name),
            Err(e) => out += &format!("FAIL {}: {e}\n", c.name),
        }
    }
    print!("{out}");
    match v.first_failure() {
        None => ExitCode::SUCCESS,
        Some(c) => fail(
            EXIT_FAILED_CHECK,
            format!("first failing check: {}", c.name),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Compute {
            spec,
            max_degree,
            format,
            euler,
            chern: _,
            timing,
            samples,
            seed,
        } => cmd_compute(
            &spec,
            max_degree,
            format,
            euler,
            timing,
            OracleSettings { samples, seed },
        ),
        Command::Oracle {
            spec,
            degree,
            samples,
            seed,
        } => cmd_oracle(&spec, degree, samples, seed),
        Command::Verify {
            spec,
            max_degree,
            samples,
            seed,
        } => cmd_verify(&spec, max_degree, OracleSettings { samples, seed }),
    }
}
