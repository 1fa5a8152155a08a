use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use quadic::cli::{
    record_to_json, run_analyze, run_dump, run_scan, AnalysisRecord, AnalyzeOptions, SeqSelect,
    CSV_HEADER,
};

#[derive(Parser)]
#[command(
    name = "quadic",
    version,
    about = "Quartic cyclotomic quaternary sequences: exact 4-adic complexity, identity checks, and rational approximation attacks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one prime: all sequences, complexities, bounds, divisors
    Analyze {
        #[arg(long)]
        p: u64,
        /// Primitive root override (default: smallest)
        #[arg(long)]
        theta: Option<u64>,
        /// Sequence selection: a single index or "all"
        #[arg(long, default_value = "all")]
        seq: String,
        /// Run the congruence identity suite
        #[arg(long)]
        verify: bool,
        /// Run the rational approximation attack
        #[arg(long)]
        raa: bool,
        /// Include the full autocorrelation table
        #[arg(long)]
        autocorr: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Attach a unix timestamp to the record
        #[arg(long)]
        stamp: bool,
    },
    /// Analyze every valid prime up to a limit, writing JSON + CSV reports
    Scan {
        #[arg(long = "max-p")]
        max_p: u64,
        /// Worker threads (0 = automatic)
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Output directory (default: $QUADIC_OUT or ./reports)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        raa: bool,
        #[arg(long)]
        autocorr: bool,
        #[arg(long)]
        stamp: bool,
    },
    /// Print one sequence with its component provenance and support sets
    Dump {
        #[arg(long)]
        p: u64,
        /// Sequence index 1..=16
        #[arg(long)]
        seq: usize,
        #[arg(long)]
        theta: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the rational approximation attack against selected sequences
    Raa {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value = "all")]
        seq: String,
        #[arg(long)]
        theta: Option<u64>,
    },
}

fn fail(err: quadic::Error) -> ExitCode {
    let object = serde_json::json!({
        "error": { "kind": err.kind(), "message": err.to_string() }
    });
    println!("{}", serde_json::to_string_pretty(&object).expect("static shape"));
    if err.is_input_error() {
        ExitCode::from(1)
    } else {
        ExitCode::from(2)
    }
}

fn invalid_input(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(1)
}

fn parse_seq(text: &str) -> Result<SeqSelect, ExitCode> {
    SeqSelect::parse(text)
        .ok_or_else(|| invalid_input(&format!("--seq expects an index or \"all\", got {text:?}")))
}

fn print_analysis(record: &AnalysisRecord, format: Format) {
    match format {
        Format::Csv => {
            println!("{CSV_HEADER}");
            for row in quadic::cli::record_csv_rows(record) {
                println!("{row}");
            }
        }
        _ => print!("{}", record_to_json(record)),
    }
}

fn run() -> Result<ExitCode, ExitCode> {
    let cli = Cli::try_parse().map_err(|e| {
        use clap::error::ErrorKind;
        if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
            e.exit();
        }
        invalid_input(&e.to_string())
    })?;

    match cli.command {
        Command::Analyze {
            p,
            theta,
            seq,
            verify,
            raa,
            autocorr,
            format,
            stamp,
        } => {
            let options = AnalyzeOptions {
                theta,
                seq: parse_seq(&seq)?,
                verify,
                raa,
                autocorr,
                stamp,
            };
            let record = run_analyze(p, &options).map_err(fail)?;
            print_analysis(&record, format);
        }
        Command::Scan {
            max_p,
            jobs,
            out,
            verify,
            raa,
            autocorr,
            stamp,
        } => {
            let options = AnalyzeOptions {
                theta: None,
                seq: SeqSelect::All,
                verify,
                raa,
                autocorr,
                stamp,
            };
            let output = run_scan(max_p, jobs, &options).map_err(fail)?;
            let dir = out
                .or_else(|| std::env::var_os("QUADIC_OUT").map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("reports"));
            std::fs::create_dir_all(&dir)
                .map_err(|e| invalid_input(&format!("cannot create {}: {e}", dir.display())))?;
            for record in &output.records {
                let path = dir.join(format!("p{}.json", record.p));
                write_file(&path, record_to_json(record).as_bytes())?;
            }
            write_file(&dir.join("summary.csv"), output.csv.as_bytes())?;
            if output.records.is_empty() {
                println!("no valid primes (p prime, p = 5 mod 8) up to {max_p}");
            }
            for row in &output.summary {
                println!(
                    "p={} theta={} min_complexity={} max_bound_slack={} threshold_margin={}",
                    row.p, row.theta, row.min_complexity, row.max_bound_slack, row.threshold_margin
                );
            }
            println!("wrote {} records to {}", output.records.len(), dir.display());
        }
        Command::Dump {
            p,
            seq,
            theta,
            format,
        } => {
            let report = run_dump(p, seq, theta).map_err(fail)?;
            match format {
                Format::Json => print!("{}", record_to_json(&report)),
                _ => {
                    let symbols: Vec<String> =
                        report.symbols.iter().map(|s| s.to_string()).collect();
                    println!("{}", symbols.join(" "));
                    println!("# u{} = {}", report.k, report.components);
                    for (label, support) in &report.supports {
                        let residues: Vec<String> =
                            support.iter().map(|t| t.to_string()).collect();
                        println!("# {} support: {}", label, residues.join(" "));
                    }
                }
            }
        }
        Command::Raa { p, seq, theta } => {
            let options = AnalyzeOptions {
                theta,
                seq: parse_seq(&seq)?,
                raa: true,
                ..AnalyzeOptions::default()
            };
            let record = run_analyze(p, &options).map_err(fail)?;
            let attacks = record.attacks.expect("raa flag was set");
            print!("{}", record_to_json(&attacks));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn write_file(path: &PathBuf, bytes: &[u8]) -> Result<(), ExitCode> {
    let write = || -> std::io::Result<()> {
        let mut file = std::fs::File::create(path)?;
        file.write_all(bytes)
    };
    write().map_err(|e| invalid_input(&format!("cannot write {}: {e}", path.display())))
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(code) => code,
    }
}
