//! Checks the printed twisted coproducts and antipodes against the
//! conjugation oracle and prints the corrected forms where they differ.

use twisted_yangian::hopf::{adjudicate_antipode, verify_closed_forms, Algebra};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    for alg in [Algebra::BMinus, Algebra::Sl2, Algebra::Yangian] {
        for c in verify_closed_forms(alg, n) {
            println!("{:<48} {:<6} {}", c.id, c.tag, c.verdict.as_str());
            if let Some(d) = &c.details {
                println!("    {d}");
            }
            if let Some(o) = &c.oracle_form {
                println!("    oracle: {o}");
            }
        }
    }
    for alg in [Algebra::Sl2, Algebra::Yangian] {
        for c in adjudicate_antipode(alg, n, 5) {
            println!("{:<48} {:<6} {}", c.id, c.tag, c.verdict.as_str());
            if let Some(d) = &c.details {
                println!("    {d}");
            }
        }
    }
}
