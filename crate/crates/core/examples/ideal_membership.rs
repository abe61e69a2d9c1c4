//! Ideal membership with a replayable certificate.

use twisted_yangian::presentations::{ideal_member, u_sl2};

fn main() {
    let p = u_sl2();
    for text in ["e f - f e - h", "e f f - f e f - h f", "e f - f e"] {
        let x = p.elem(text);
        let cert = ideal_member(&p, &x, 4).expect("within bound");
        println!("{text}: {:?}, {} multiples", cert.verdict, cert.combination.len());
        if cert.residue.is_none() {
            assert_eq!(cert.replay(&p), x);
        }
    }
}
