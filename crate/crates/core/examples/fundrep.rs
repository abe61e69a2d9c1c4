//! The R-matrix in the fundamental representation.

use twisted_yangian::fundrep::{build_r_fund, check_qybe, projector_check, r_printed, verify_fundamental};

fn main() {
    let r = build_r_fund();
    println!("R(u) =\n{}", r.to_grid());
    let p = projector_check(&r);
    println!("R(eta): rank {} eigenvalue {:?}", p.rank, p.lambda.map(|l| l.to_canonical_string()));
    for (name, m) in [("built", &r), ("printed", &r_printed())] {
        let c = check_qybe(name, m);
        println!("qybe {name}: {}", c.verdict.as_str());
    }
    for c in verify_fundamental() {
        println!("{:<36} {}", c.id, c.verdict.as_str());
    }
}
