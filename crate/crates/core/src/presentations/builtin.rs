//! Built-in presentations.
//!
//! Generator names: `f` = e_{-α}, `h` = h_α, `e` = e_α, `d` = e_{δ-α},
//! `T`/`Ti` = T_α^{±1}.

use crate::freealg::{Alphabet, Element};
use crate::scalar::Scalar;

use super::{Presentation, Rule};

/// Sort order of the sl2 generators: e_{-α} < h_α < e_α.
pub const SL2_ORDER: [&str; 3] = ["f", "h", "e"];

fn rule(p: &Presentation, lhs: &str, rhs: &str) -> Rule {
    Rule { lhs: p.alphabet().word(lhs), rhs: p.elem(rhs) }
}

fn sl2_relations(p: &Presentation) -> Vec<Element> {
    vec![p.elem("e f - f e - h"), p.elem("h e - e h - 2 e"), p.elem("h f - f h + 2 f")]
}

/// U(sl₂) with the PBW rules for f < h < e.
pub fn u_sl2() -> Presentation {
    let a = Alphabet::new("U(sl2)", &SL2_ORDER);
    let p = Presentation::new("U(sl2)", a.clone(), vec![]);
    let rels = sl2_relations(&p);
    let rules = vec![rule(&p, "e f", "f e + h"), rule(&p, "h f", "f h - 2 f"), rule(&p, "e h", "h e - 2 e")];
    Presentation::new("U(sl2)", a, rels).with_rules(rules, true)
}

/// U(b₋), generated by f and h.
pub fn u_b_minus() -> Presentation {
    let a = Alphabet::new("U(b-)", &["f", "h"]);
    let p = Presentation::new("U(b-)", a.clone(), vec![]);
    let rels = vec![p.elem("h f - f h + 2 f")];
    let rules = vec![rule(&p, "h f", "f h - 2 f")];
    Presentation::new("U(b-)", a, rels).with_rules(rules, true)
}

/// Which version of the Yangian relations involving e_{δ-α} to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum YangianForm {
    /// `[h,d] = d`, `[f,d] = η f` as printed.
    Printed,
    /// `[h,d] = -2d`, `[f,d] = η f²`, the form compatible with the coproduct.
    Corrected,
}

fn eta_coeff(k: i64) -> String {
    format!("({k}*eta)")
}

/// Y_η(sl₂) in Chevalley generators f < h < e < d, with the cubic
/// relations `[e,[e,[e,d]]] = c η e²` and `[[[e,d],d],d] = c η d²`.
/// Rules cover the quadratic relations only, so the system is partial.
pub fn yangian(form: YangianForm, cubic: i64) -> Presentation {
    let a = Alphabet::new("Y(sl2)", &["f", "h", "e", "d"]);
    let p = Presentation::new("Y(sl2)", a.clone(), vec![]);
    let mut rels = sl2_relations(&p);
    let (hd, fd) = match form {
        YangianForm::Printed => ("h d - d h - d", "f d - d f - (eta) f"),
        YangianForm::Corrected => ("h d - d h + 2 d", "f d - d f - (eta) f f"),
    };
    rels.push(p.elem(hd));
    rels.push(p.elem(fd));
    let e = p.gen("e");
    let d = p.gen("d");
    let c = Scalar::from_int(cubic).mul_ref(&Scalar::eta());
    let ed = e.commutator(&d);
    let ser1 = e.commutator(&e.commutator(&ed)).sub(&e.mul(&e).scale(&c));
    let ser2 = ed.commutator(&d).commutator(&d).sub(&d.mul(&d).scale(&c));
    rels.push(ser1);
    rels.push(ser2);
    let (dh, df) = match form {
        YangianForm::Printed => ("h d - d", format!("f d - {} f", eta_coeff(1))),
        YangianForm::Corrected => ("h d + 2 d", format!("f d - {} f f", eta_coeff(1))),
    };
    let rules = vec![
        rule(&p, "e f", "f e + h"),
        rule(&p, "h f", "f h - 2 f"),
        rule(&p, "e h", "h e - 2 e"),
        rule(&p, "d h", dh),
        rule(&p, "d f", &df),
    ];
    let name = match form {
        YangianForm::Printed => "Y(sl2) printed",
        YangianForm::Corrected => "Y(sl2)",
    };
    Presentation::new(name, a, rels).with_rules(rules, false)
}

/// The relations satisfied by h, e, T^{±1} in the twisted U(sl₂).
pub fn twisted_sl2() -> Presentation {
    let a = Alphabet::new("U_xi(sl2)", &["Ti", "T", "h", "e"]);
    let p = Presentation::new("U_xi(sl2)", a.clone(), vec![]);
    let rels = twisted_core(&p);
    Presentation::new("U_xi(sl2)", a, rels)
}

fn twisted_core(p: &Presentation) -> Vec<Element> {
    vec![
        p.elem("T Ti - 1"),
        p.elem("Ti T - 1"),
        p.elem("h T - T h - 2 + 2 T"),
        p.elem("h Ti - Ti h - 2 Ti + 2 Ti Ti"),
        p.elem("h e - e h - 2 e"),
        p.elem("T e - e T - (2*xi) h"),
        p.elem("Ti e - e Ti + (2*xi) Ti h Ti"),
    ]
}

/// The relations satisfied by h, e, T^{±1}, e_{δ-α} in the twisted Yangian.
pub fn twisted_yangian(cubic: i64) -> Presentation {
    let a = Alphabet::new("Y_xi(sl2)", &["Ti", "T", "h", "e", "d"]);
    let p = Presentation::new("Y_xi(sl2)", a.clone(), vec![]);
    let mut rels = twisted_core(&p);
    rels.push(p.elem("T d - d T + (eta/(2*xi)) T T - (eta/xi) T + (eta/(2*xi))"));
    rels.push(p.elem("Ti d - d Ti + (eta/(2*xi)) Ti Ti - (eta/xi) Ti + (eta/(2*xi))"));
    let e = p.gen("e");
    let d = p.gen("d");
    let c = Scalar::from_int(cubic).mul_ref(&Scalar::eta());
    let ed = e.commutator(&d);
    rels.push(e.commutator(&e.commutator(&ed)).sub(&e.mul(&e).scale(&c)));
    rels.push(ed.commutator(&d).commutator(&d).sub(&d.mul(&d).scale(&c)));
    Presentation::new("Y_xi(sl2)", a, rels)
}
