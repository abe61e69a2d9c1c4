//! Runs suites in-process and prints the text report.

use twisted_yangian::cli::{emit_report, run_suite, Format, Suite, SuiteConfig};

fn main() {
    let mut cfg = SuiteConfig::new(vec![Suite::Fundrep, Suite::Cybe]);
    cfg.workers = 2;
    let report = run_suite(&cfg).expect("valid config");
    print!("{}", String::from_utf8_lossy(&emit_report(&report, Format::Text)));
    println!("exit code {}", report.exit_code());
}
