//! Cocycle and triangularity of the Jordanian twist, order by order in ξ.

use twisted_yangian::hopf::verify_twist;

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    for c in verify_twist(n, 4) {
        println!("{:<40} {:<16} {}", c.id, c.verdict.as_str(), c.details.as_deref().unwrap_or(""));
    }
}
