//! Printed and corrected forms of the twisted field relations.

use twisted_yangian::fields::{bi_failures, FieldContext, FieldRelation, Form};

fn main() {
    let mut args = std::env::args().skip(1);
    let n_mode: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let n_xi: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    let ctx = FieldContext::new(n_mode, n_xi);
    let t = ctx.tilde();
    for r in FieldRelation::ALL {
        let printed = bi_failures(&ctx, &ctx.field_relation(&t, r, Form::Printed)).len();
        let corrected = bi_failures(&ctx, &ctx.field_relation(&t, r, Form::Corrected)).len();
        println!("{}: printed {printed} nonzero coefficients, corrected {corrected}", r.tag());
    }
}
