use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use twisted_yangian::cli::{emit_report, run_suite, Format, Suite, SuiteConfig, CACHE_ENV};

#[derive(Parser)]
#[command(name = "verify", version, about = "Exact verification suites for the twisted Yangian of sl2")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one or more suites and print a report.
    Run {
        /// twist, hopf-axioms, cybe, fundrep, rtt-qdet, fields or all.
        #[arg(long = "suite", num_args = 1..)]
        suites: Vec<String>,
        #[arg(long)]
        xi_order: Option<usize>,
        #[arg(long)]
        mode_order: Option<usize>,
        #[arg(long)]
        degree_bound: Option<usize>,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Certificate cache directory.
        #[arg(long, env = CACHE_ENV)]
        cache: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let Cmd::Run { suites, xi_order, mode_order, degree_bound, workers, seed, format, out, cache } = cli.cmd;
    let mut names = Vec::new();
    for s in &suites {
        match Suite::parse(s) {
            Ok(v) => names.extend(v),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    }
    let format = match format {
        FormatArg::Text => Format::Text,
        FormatArg::Structured => Format::Structured,
    };
    let config = SuiteConfig { suites: names, xi_order, mode_order, degree_bound, workers, seed, format, cache_dir: cache };
    let report = match run_suite(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let bytes = emit_report(&report, format);
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &bytes) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => {
            use std::io::Write;
            let _ = std::io::stdout().write_all(&bytes);
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
