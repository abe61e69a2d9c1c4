//! Classical Yang-Baxter residuals of the rational r-matrices.

use twisted_yangian::cybe::{cybe_residual, nonzero_components, verify_classical, ClassicalRMatrix};

fn main() {
    let candidates = [
        ("yang", ClassicalRMatrix::yang()),
        ("p1", ClassicalRMatrix::p1()),
        ("p2 printed", ClassicalRMatrix::p2()),
        ("p2 corrected", ClassicalRMatrix::p2_corrected()),
        ("control", ClassicalRMatrix::control()),
    ];
    for (name, r) in &candidates {
        let res = nonzero_components(&cybe_residual(r));
        println!("{name}: {} nonzero residual components", res.len());
        for (a, b, c, s) in res.iter().take(4) {
            println!("  [{} {} {}] {}", a.name(), b.name(), c.name(), s.to_canonical_string());
        }
    }
    let checks = verify_classical(6, 0).expect("classical checks");
    let ok = checks.iter().filter(|c| c.passed()).count();
    println!("verify_classical: {ok}/{} passed", checks.len());
}
