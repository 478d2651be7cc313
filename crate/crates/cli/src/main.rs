use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cleangraph::export::{export, write_pairs_csv, Format};
use cleangraph::graph::DEFAULT_VERTEX_CAP;
use cleangraph::matching::DEFAULT_BLOSSOM_CAP;
use cleangraph::report::{analyze, AnalyzeOptions};
use cleangraph::scan::{scan, write_scan_csv, ScanOptions};
use cleangraph::tables::{regenerate_tables, DEFAULT_WITNESS_CAP};
use cleangraph::{build_cl2, construct_perfect_matching, maximum_matching, BuildOptions, Error};

const EXIT_USAGE: u8 = 1;
const EXIT_DISAGREE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cleangraph",
    version,
    about = "Clean graphs of Z_n: Wiener index, diameter and matchings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Dot,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatchingMethod {
    /// Blossom maximum matching
    Oracle,
    /// Deterministic perfect matching (needs two distinct primes)
    Constructed,
}

#[derive(Subcommand)]
enum Command {
    /// Closed forms and oracle values for one modulus
    Analyze {
        n: u64,
        #[arg(long, value_enum, default_value = "on")]
        oracle: Switch,
        #[arg(long)]
        json: bool,
        /// Largest graph to build
        #[arg(long, env = "CLEANGRAPH_VERTEX_CAP", default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
        /// Largest graph handed to the blossom oracle
        #[arg(long, default_value_t = DEFAULT_BLOSSOM_CAP)]
        blossom_cap: usize,
    },
    /// One CSV row per modulus in [min, max]
    Scan {
        min: u64,
        max: u64,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, env = "CLEANGRAPH_VERTEX_CAP", default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
        #[arg(long, default_value_t = DEFAULT_BLOSSOM_CAP)]
        blossom_cap: usize,
        /// Worker threads (defaults to the number of CPUs)
        #[arg(short, long)]
        jobs: Option<usize>,
    },
    /// Regenerate the coefficient and phi/W tables
    Tables {
        #[arg(long)]
        errata: bool,
        #[arg(long)]
        json: bool,
        /// Largest witness graph checked with the oracle
        #[arg(long, default_value_t = DEFAULT_WITNESS_CAP)]
        witness_cap: usize,
    },
    /// Write the graph as DOT, edge CSV or JSON
    Export {
        n: u64,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(short, long)]
        output: PathBuf,
        /// Include the e = 0 block (full clean graph)
        #[arg(long)]
        zero_block: bool,
        #[arg(long, env = "CLEANGRAPH_VERTEX_CAP", default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
    },
    /// Write a matching as an e1,u1,e2,u2 CSV
    Matching {
        n: u64,
        #[arg(long, value_enum, default_value = "constructed")]
        method: MatchingMethod,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, env = "CLEANGRAPH_VERTEX_CAP", default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
    },
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    Ok(BufWriter::new(File::create(path)?))
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Analyze {
            n,
            oracle,
            json,
            cap,
            blossom_cap,
        } => {
            let opts = AnalyzeOptions {
                oracle: matches!(oracle, Switch::On),
                vertex_cap: cap,
                blossom_cap,
            };
            let (report, timings) = analyze(n, &opts)?;
            let text = if json {
                report.to_json()? + "\n"
            } else {
                report.render_text()
            };
            io::stdout().write_all(text.as_bytes())?;
            for (phase, took) in &timings.0 {
                eprintln!("time {phase}: {:.3} ms", took.as_secs_f64() * 1e3);
            }
            Ok(if report.all_agree() { 0 } else { EXIT_DISAGREE })
        }
        Command::Scan {
            min,
            max,
            output,
            cap,
            blossom_cap,
            jobs,
        } => {
            let opts = ScanOptions {
                vertex_cap: cap,
                blossom_cap,
                jobs,
            };
            let rows = scan(min, max, &opts)?;
            write_scan_csv(&rows, create(&output)?)?;
            Ok(if rows.iter().all(|r| r.agree != Some(false)) {
                0
            } else {
                EXIT_DISAGREE
            })
        }
        Command::Tables {
            errata,
            json,
            witness_cap,
        } => {
            let report = regenerate_tables(witness_cap)?;
            let text = if json {
                report.to_json()? + "\n"
            } else {
                report.render_text(errata)
            };
            io::stdout().write_all(text.as_bytes())?;
            Ok(0)
        }
        Command::Export {
            n,
            format,
            output,
            zero_block,
            cap,
        } => {
            let g = build_cl2(
                n,
                BuildOptions {
                    include_zero_block: zero_block,
                    vertex_cap: cap,
                },
            )?;
            let format = match format {
                ExportFormat::Dot => Format::Dot,
                ExportFormat::Csv => Format::EdgeCsv,
                ExportFormat::Json => Format::Json,
            };
            export(&g, format, create(&output)?)?;
            Ok(0)
        }
        Command::Matching {
            n,
            method,
            output,
            cap,
        } => {
            let g = build_cl2(
                n,
                BuildOptions {
                    include_zero_block: false,
                    vertex_cap: cap,
                },
            )?;
            let m = match method {
                MatchingMethod::Oracle => maximum_matching(&g, cap)?,
                MatchingMethod::Constructed => construct_perfect_matching(&g)?,
            };
            write_pairs_csv(&m.labelled(&g), create(&output)?)?;
            eprintln!(
                "matching size {} on {} vertices",
                m.size(),
                g.vertex_count()
            );
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::VertexCapExceeded { .. } => EXIT_CAP,
                _ => EXIT_USAGE,
            })
        }
    }
}
