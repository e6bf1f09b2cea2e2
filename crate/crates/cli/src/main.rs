//! `quotforge` command line.
//!
//! Every subcommand reads JSON files and writes one JSON payload to stdout.
//! Logs and tables go to stderr. Exit codes: 0 success / true, 1 property
//! false or distinct, 2 invalid input, 3 census budget exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use quotforge::adhm::{self, OrbitVerdict, QuotDatum};
use quotforge::census::{self, CensusOptions, CensusReport, DEFAULT_BUDGET};
use quotforge::deform::{self, DEFAULT_PENCIL_SAMPLES};
use quotforge::json as qjson;
use quotforge::{jordan, modbridge, Error};

#[derive(Parser)]
#[command(
    name = "quotforge",
    version,
    about = "ADHM data for punctual Quot schemes on the plane"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check shapes, commutation and nilpotency of a datum.
    Validate { file: PathBuf },
    /// Stability and W-slice membership.
    Stable { file: PathBuf },
    /// Compatible Jordan frame of (B1, B2).
    Jordan { file: PathBuf },
    /// Verify the companion-operator conclusions for (B1, B2).
    Lemma23 {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PENCIL_SAMPLES)]
        samples: usize,
    },
    /// Walk a stable rational datum into the W-slice.
    Connect { file: PathBuf },
    /// Decide whether two stable data are GL-equivalent.
    Orbit { first: PathBuf, second: PathBuf },
    /// Convert between data and submodule presentations.
    Bridge {
        #[command(subcommand)]
        direction: Bridge,
    },
    /// Exhaustive point counts over GF(q).
    Census {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        factorized: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Subcommand)]
enum Bridge {
    /// Presentation JSON to datum JSON.
    ToDatum { file: PathBuf },
    /// Datum JSON to presentation JSON.
    ToPresentation { file: PathBuf },
}

struct Outcome {
    payload: Value,
    code: u8,
}

impl Outcome {
    fn ok(payload: Value) -> Self {
        Outcome { payload, code: 0 }
    }

    fn verdict(payload: Value, holds: bool) -> Self {
        Outcome {
            payload,
            code: if holds { 0 } else { 1 },
        }
    }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_datum(path: &Path) -> Result<QuotDatum, Error> {
    adhm::validate(&qjson::datum_from_json(&read_json(path)?)?)
}

fn budget() -> Result<u128, Error> {
    match std::env::var("QUOTFORGE_BUDGET") {
        Ok(s) => s.trim().parse().map_err(|_| {
            Error::Parse(format!(
                "QUOTFORGE_BUDGET={s:?} is not a non-negative integer"
            ))
        }),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn print_table(report: &CensusReport) {
    let rows = [
        ("count_pairs", report.count_pairs),
        ("count_stable", report.count_stable),
        ("count_w_slice", report.count_w_slice),
        ("gl_order", report.gl_order),
        ("quot_points", report.quot_points),
        ("w_points", report.w_points),
    ];
    let width = rows
        .iter()
        .map(|(_, v)| v.to_string().len())
        .max()
        .unwrap_or(1);
    eprintln!(
        "census d={} r={} q={}{}",
        report.d,
        report.r,
        report.q(),
        if report.factorized {
            " (factorized)"
        } else {
            ""
        }
    );
    for (name, value) in rows {
        eprintln!("  {name:<14} {value:>width$}");
    }
    eprintln!("  {:<14} {:>width$.3?}", "elapsed", report.elapsed);
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Validate { file } => {
            let raw = qjson::datum_from_json(&read_json(&file)?)?;
            match adhm::validate(&raw) {
                Ok(datum) => {
                    eprintln!("valid datum: d={} r={}", datum.d(), datum.r());
                    Ok(Outcome::ok(json!({ "valid": true, "violations": [] })))
                }
                Err(Error::InvalidDatum(violations)) => {
                    for v in &violations {
                        eprintln!("violation: {v}");
                    }
                    Ok(Outcome::verdict(
                        json!({ "valid": false, "violations": violations }),
                        false,
                    ))
                }
                Err(e) => Err(e),
            }
        }
        Command::Stable { file } => {
            let datum = read_datum(&file)?;
            let cert = adhm::generated_subspace(&datum);
            let w = adhm::in_w_slice(&datum);
            eprintln!(
                "generated subspace: dim {} of {}",
                cert.generated.dim(),
                datum.d()
            );
            Ok(Outcome::verdict(
                json!({ "stable": cert.stable, "w_slice": w }),
                cert.stable,
            ))
        }
        Command::Jordan { file } => {
            let datum = read_datum(&file)?;
            let frame = jordan::compatible_jordan_frame(datum.b1(), datum.b2())?;
            eprintln!("mu = {:?}", frame.mu());
            Ok(Outcome::ok(qjson::frame_to_json(&frame)))
        }
        Command::Lemma23 { file, samples } => {
            let datum = read_datum(&file)?;
            let report = deform::verify_lemma_2_3(datum.b1(), datum.b2(), samples)?;
            for f in &report.failures {
                eprintln!("failure: {f}");
            }
            let pass = report.all_pass();
            let payload =
                serde_json::to_value(&report).map_err(|e| Error::Internal(e.to_string()))?;
            Ok(Outcome::verdict(payload, pass))
        }
        Command::Connect { file } => {
            let datum = read_datum(&file)?;
            let cert = deform::connect_to_w(&datum)?;
            eprintln!(
                "witness t = {}; {} of {} samples outside the W-slice (bound {})",
                cert.witness_t.to_text(),
                cert.failures,
                cert.samples.len(),
                cert.bound
            );
            Ok(Outcome::ok(qjson::certificate_to_json(&cert)))
        }
        Command::Orbit { first, second } => {
            let a = read_datum(&first)?;
            let b = read_datum(&second)?;
            match adhm::orbit_witness(&a, &b)? {
                OrbitVerdict::Equivalent(g) => {
                    eprintln!("equivalent");
                    Ok(Outcome::ok(
                        json!({ "equivalent": true, "witness": qjson::matrix_to_json(&g) }),
                    ))
                }
                OrbitVerdict::Distinct => {
                    eprintln!("distinct");
                    Ok(Outcome::verdict(
                        json!({ "equivalent": false, "witness": null }),
                        false,
                    ))
                }
            }
        }
        Command::Bridge { direction } => match direction {
            Bridge::ToDatum { file } => {
                let (module, gens) = qjson::presentation_from_json(&read_json(&file)?)?;
                let pres = modbridge::submodule_closure(&gens, &module)?;
                let datum = modbridge::quotient_datum(&pres)?;
                eprintln!("quotient of colength {}", pres.colength);
                Ok(Outcome::ok(qjson::datum_to_json(&datum)))
            }
            Bridge::ToPresentation { file } => {
                let datum = read_datum(&file)?;
                let pres = modbridge::presentation_of_datum(&datum)?;
                eprintln!("{} generators", pres.generators.len());
                Ok(Outcome::ok(qjson::presentation_to_json(&pres)))
            }
        },
        Command::Census {
            d,
            r,
            q,
            factorized,
            jobs,
        } => {
            let opts = CensusOptions {
                factorized,
                jobs: jobs.max(1),
                budget: budget()?,
            };
            let report = census::quot_point_count(d, r, q, &opts)?;
            print_table(&report);
            let payload =
                serde_json::to_value(&report).map_err(|e| Error::Internal(e.to_string()))?;
            Ok(Outcome::ok(payload))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(outcome) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&outcome.payload).expect("serializable")
            );
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::BudgetExceeded { .. } => 3,
                _ => 2,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({ "error": e.to_string() }))
                    .expect("serializable")
            );
            ExitCode::from(code)
        }
    }
}
