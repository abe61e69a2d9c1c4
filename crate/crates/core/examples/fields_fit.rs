//! Recovers a field relation as the kernel of a linear ansatz.

use num_traits::Zero;
use twisted_yangian::fields::{fit_relation, AnsatzTerm, Arg, FieldContext, Kind};
use twisted_yangian::scalar::Scalar;

fn main() {
    use Arg::{U, V};
    let ctx = FieldContext::new(2, 0);
    let (h, e) = (ctx.field(Kind::H), ctx.field(Kind::E));
    let he = ctx.product(&h, U, &e, V);
    let eh = ctx.product(&e, V, &h, U);
    let zero = Scalar::zero();
    let eta = Scalar::eta();
    let terms = vec![
        AnsatzTerm { name: "(u-v)h(u)e(v)".into(), series: he.times_u_minus_v(&zero) },
        AnsatzTerm { name: "(u-v)e(v)h(u)".into(), series: eh.times_u_minus_v(&zero) },
        AnsatzTerm { name: "eta h(u)e(v)".into(), series: he.scale(&eta) },
        AnsatzTerm { name: "eta e(v)h(u)".into(), series: eh.scale(&eta) },
        AnsatzTerm { name: "eta h(u)e(u)".into(), series: ctx.product(&h, U, &e, U).scale(&eta) },
        AnsatzTerm { name: "eta e(u)h(u)".into(), series: ctx.product(&e, U, &h, U).scale(&eta) },
    ];
    let ker = fit_relation(&ctx, &terms);
    println!("{} relation(s)", ker.len());
    for v in ker {
        let parts: Vec<String> = v.iter().zip(&terms).filter(|(c, _)| !c.is_zero()).map(|(c, t)| format!("({c}) {}", t.name)).collect();
        println!("  {} = 0", parts.join(" + "));
    }
}
