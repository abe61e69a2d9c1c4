//! PBW normal form in the current presentation.

use twisted_yangian::fields::{CurrentPresentation, Kind};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let cur = CurrentPresentation::build(n);
    let a = cur.presentation.alphabet();
    let (overlaps, bad) = cur.check_overlaps();
    println!("{overlaps} overlaps, {} not resolving", bad.len());
    let e1 = cur.gen(Kind::E, 1);
    let f0 = cur.gen(Kind::F, 0);
    let comm = e1.mul(&f0).sub(&f0.mul(&e1));
    println!("[e1, f0] = {}", cur.nf(&comm).display(a));
    let h1 = cur.gen(Kind::H, 1);
    let e0 = cur.gen(Kind::E, 0);
    println!("[h1, e0] = {}", cur.nf(&h1.mul(&e0).sub(&e0.mul(&h1))).display(a));
}
