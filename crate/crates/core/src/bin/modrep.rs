use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use modrep::report::{
    diagram_json, emit_report, run_suite, table, Format, KRange, Suite, SuiteConfig,
};
use modrep::{Error, Result};

#[derive(Parser)]
#[command(
    name = "modrep",
    version,
    about = "Exact checks for mod p representations of GL2 over small finite fields"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites over a parameter grid.
    Verify {
        /// Comma-separated prime powers.
        #[arg(long, value_delimiter = ',', default_values_t = [3u64, 5, 7, 9])]
        q: Vec<u64>,
        /// `all`, a single weight, or an inclusive range `a..b`.
        #[arg(long, default_value = "all", allow_hyphen_values = true)]
        k: String,
        /// Scalars for the vertical maps, reduced mod p.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        s: Vec<i64>,
        /// fields, serre, characters, diagram, nonsplit, alpha or all.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        suites: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long)]
        out: Option<String>,
        /// Largest field size accepted.
        #[arg(long, default_value_t = modrep::field_tower::FIELD_BOUND)]
        max_q: u64,
        /// Record wall time per check (output is then not byte-stable).
        #[arg(long)]
        timings: bool,
    },
    /// Print dimension or Brauer character tables.
    Table {
        #[arg(long)]
        q: u64,
        /// dims or chars.
        #[arg(long, default_value = "dims")]
        what: String,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Emit the matrices of the comparison diagram as JSON.
    Diagram {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        s: i64,
        /// sl2_over_fq, u2_over_fq2 or gl2_extended.
        #[arg(long, default_value = "sl2_over_fq")]
        form: String,
    },
}

fn write_out(text: &str, out: Option<&str>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Config(format!("{path}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Verify {
            q,
            k,
            s,
            suites,
            seed,
            format,
            out,
            max_q,
            timings,
        } => {
            let mut parsed = Vec::new();
            for name in &suites {
                parsed.extend(Suite::parse(name.trim())?);
            }
            let cfg = SuiteConfig {
                qs: q,
                k: KRange::parse(&k)?,
                s,
                suites: parsed,
                seed,
                max_q,
                timings,
            };
            let format = Format::parse(&format)?;
            let report = run_suite(&cfg)?;
            write_out(&emit_report(&report, format), out.as_deref())?;
            Ok(report.exit_code())
        }
        Cmd::Table { q, what, format } => {
            write_out(&table(q, &what, Format::parse(&format)?)?, None)?;
            Ok(0)
        }
        Cmd::Diagram { q, k, s, form } => {
            write_out(&diagram_json(q, k, s, &form)?, None)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
