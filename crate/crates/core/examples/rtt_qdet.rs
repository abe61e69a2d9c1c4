//! RTT relations and the quantum determinant at small mode cutoffs.

use std::time::Instant;

use twisted_yangian::rtt::{check_z_series, verify_rtt, ModeAlgebra};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    let degree: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(3);
    for alg in [ModeAlgebra::undeformed(n), ModeAlgebra::deformed(n)] {
        let start = Instant::now();
        let checks = verify_rtt(&alg, degree, 2);
        let ok = checks.iter().filter(|c| c.passed()).count();
        println!("{}: {ok}/{} ({:.1?})", alg.label(), checks.len(), start.elapsed());
        for c in checks.iter().filter(|c| !c.passed()) {
            println!("  {} {}", c.id, c.verdict.as_str());
        }
    }
    for c in check_z_series(4) {
        println!("{:<36} {}", c.id, c.verdict.as_str());
    }
}
