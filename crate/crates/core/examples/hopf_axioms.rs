//! Verifies the Hopf axioms for the undeformed and twisted tables.

use std::time::Instant;

use twisted_yangian::hopf::{
    twisted_table, undeformed_table, verify_hopf_axioms, Algebra, AntipodeVariant, FormVariant,
};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    let bound: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(5);
    let tables = [
        undeformed_table(Algebra::Yangian, FormVariant::Corrected, n),
        undeformed_table(Algebra::Yangian, FormVariant::Printed, n),
        twisted_table(Algebra::BMinus, FormVariant::Corrected, AntipodeVariant::TMinusOne, n),
        twisted_table(Algebra::Sl2, FormVariant::Corrected, AntipodeVariant::TMinusOne, n),
        twisted_table(Algebra::Sl2, FormVariant::Printed, AntipodeVariant::TMinusTwo, n),
        twisted_table(Algebra::Yangian, FormVariant::Corrected, AntipodeVariant::TMinusOne, n),
    ];
    for t in &tables {
        let start = Instant::now();
        let checks = verify_hopf_axioms(t, n, bound);
        let failing: Vec<_> = checks.iter().filter(|c| !c.passed()).collect();
        println!("{}: {} checks, {} not passing ({:.1?})", t.name, checks.len(), failing.len(), start.elapsed());
        for c in failing {
            println!("  {} {} {}", c.id, c.verdict.as_str(), c.details.as_deref().unwrap_or(""));
        }
    }
}
