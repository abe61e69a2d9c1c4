//! The twist F, its inverse, the cocycle identity, conjugated coproducts and
//! the triangular R = F²¹F⁻¹.

use crate::freealg::Element;
use crate::presentations::{u_b_minus, u_sl2, Presentation};
use crate::report::{Check, CheckVerdict};
use crate::scalar::Scalar;
use crate::series::{SeriesVar, TruncatedSeries};

use super::{constant, flip, multiply_legs, render, SeriesHom};

/// F together with its inverse, both truncated at the same ξ-order.
#[derive(Clone, Debug)]
pub struct Twist {
    pub f: TruncatedSeries,
    pub inverse: TruncatedSeries,
}

impl Twist {
    pub fn new(p: &Presentation, n: usize) -> Twist {
        Twist { f: build_twist(p, n), inverse: build_twist_inverse(p, n) }
    }
}

fn reducer(p: &Presentation) -> impl Fn(Element) -> Element + '_ {
    move |e| p.reduce_with_rules(&e)
}

/// `T = 1 - 2ξ f` as a series.
pub fn t_series(p: &Presentation, n: usize) -> TruncatedSeries {
    let mut t = TruncatedSeries::one(SeriesVar::Xi, 1, n);
    t.set(1, p.gen("f").scale(&Scalar::from_int(-2)));
    t
}

/// `T⁻¹ = Σ (2ξ f)^k`.
pub fn t_inverse_series(p: &Presentation, n: usize) -> TruncatedSeries {
    let f = p.gen("f");
    TruncatedSeries::from_fn(SeriesVar::Xi, 1, n, |k| f.pow(k as u32).scale(&Scalar::from_int(1 << k)))
}

fn falling(p: &Presentation, k: usize, step: i64) -> Element {
    let h = p.gen("h");
    let mut acc = Element::one(1);
    for i in 0..k as i64 {
        acc = acc.mul(&h.add(&Element::scalar(1, Scalar::from_int(step * i))));
    }
    acc
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// Order k: `(1/k!) ∏_{i<k} (h + 2i) ⊗ f^k`.
pub fn build_twist(p: &Presentation, n: usize) -> TruncatedSeries {
    let f = p.gen("f");
    TruncatedSeries::from_fn(SeriesVar::Xi, 2, n, |k| {
        falling(p, k, 2).tensor(&f.pow(k as u32)).scale(&Scalar::ratio(1, factorial(k)))
    })
}

/// Order k: `((-1)^k/k!) ∏_{i<k} (h - 2i) ⊗ f^k`.
pub fn build_twist_inverse(p: &Presentation, n: usize) -> TruncatedSeries {
    let f = p.gen("f");
    TruncatedSeries::from_fn(SeriesVar::Xi, 2, n, |k| {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        falling(p, k, -2).tensor(&f.pow(k as u32)).scale(&Scalar::ratio(sign, factorial(k)))
    })
}

/// `1 + ξ f ⊗ h`: the flipped first-order twist, a negative control.
pub fn flipped_control(p: &Presentation, n: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(SeriesVar::Xi, 2, n);
    s.set(1, p.gen("f").tensor(&p.gen("h")));
    s
}

/// `F F⁻¹` and `F⁻¹ F` against `1 ⊗ 1`, order by order.
pub fn check_inverse(p: &Presentation, tw: &Twist) -> Vec<Check> {
    let red = reducer(p);
    let one = TruncatedSeries::one(SeriesVar::Xi, 2, tw.f.bound());
    let mut out = Vec::new();
    for (id, prod) in [
        ("twist/inverse/right", tw.f.mul_with(&tw.inverse, &red)),
        ("twist/inverse/left", tw.inverse.mul_with(&tw.f, &red)),
    ] {
        let bad = prod.first_difference(&one);
        let mut c = Check::new(id, "NSQ3", CheckVerdict::from_bool(bad.is_none()));
        if let Some(k) = bad {
            c = c.details(format!("order {k}: {}", prod.get(k).display(p.alphabet())));
        }
        out.push(c);
    }
    out
}

fn primitive_coproduct(p: &Presentation, n: usize) -> SeriesHom {
    let mut h = SeriesHom::new(p, 2, false);
    for (i, _) in p.alphabet().names().iter().enumerate() {
        let x = Element::gen(i as u16);
        h.set(i as u16, constant(x.tensor(&Element::one(1)).add(&Element::one(1).tensor(&x)), n));
    }
    h
}

/// Per-order truth of `F¹²(Δ⊗id)F = F²³(id⊗Δ)F` with the primitive
/// coproduct of U(b₋).
pub fn check_cocycle(p: &Presentation, f: &TruncatedSeries) -> Vec<bool> {
    let n = f.bound();
    let red = reducer(p);
    let delta = primitive_coproduct(p, n);
    let f12 = f.map(|_, c| c.embed(3, &[0, 1]));
    let f23 = f.map(|_, c| c.embed(3, &[1, 2]));
    let lhs = f12.mul_with(&delta.apply_on_leg(f, 0, &red), &red);
    let rhs = f23.mul_with(&delta.apply_on_leg(f, 1, &red), &red);
    (0..=n).map(|k| lhs.get(k) == rhs.get(k)).collect()
}

/// `F Δ(g) F⁻¹`, truncated at the twist's order.
pub fn twist_conjugate(p: &Presentation, tw: &Twist, delta_g: &TruncatedSeries) -> TruncatedSeries {
    let red = reducer(p);
    tw.f.mul_with(delta_g, &red).mul_with(&tw.inverse, &red)
}

/// `U S(a) U⁻¹` with `U = m(id ⊗ S)(F)`: the antipode of the twisted
/// coproduct, computed from the undeformed antipode `s`.
pub fn twisted_antipode(p: &Presentation, tw: &Twist, s: &SeriesHom, s_of_a: &TruncatedSeries) -> TruncatedSeries {
    let red = reducer(p);
    let u = multiply_legs(&s.apply_on_leg(&tw.f, 1, &red), &red);
    let u_inv = u.inverse_unipotent(&red);
    u.mul_with(s_of_a, &red).mul_with(&u_inv, &red)
}

/// `R = F²¹ F⁻¹`.
pub fn build_r_twist(p: &Presentation, tw: &Twist) -> TruncatedSeries {
    flip(&tw.f).mul_with(&tw.inverse, &reducer(p))
}

/// `R²¹ R = 1 ⊗ 1` up to the series bound, and the intertwining
/// `R Δ(g) = Δ^{op}(g) R` for each supplied coproduct, up to `n_int`.
pub fn check_triangular(
    p: &Presentation,
    r: &TruncatedSeries,
    coproducts: &[(String, TruncatedSeries)],
    n_int: usize,
) -> Vec<Check> {
    let red = reducer(p);
    let mut out = Vec::new();
    let unit = flip(r).mul_with(r, &red);
    let one = TruncatedSeries::one(SeriesVar::Xi, 2, r.bound());
    let bad = unit.first_difference(&one);
    let mut c = Check::new("twist/triangular/unitarity", "NSQ12", CheckVerdict::from_bool(bad.is_none()));
    if let Some(k) = bad {
        c = c.details(format!("order {k}: {}", unit.get(k).display(p.alphabet())));
    }
    out.push(c);
    let rn = r.truncate(n_int);
    for (name, dg) in coproducts {
        let dg = dg.truncate(n_int);
        let lhs = rn.mul_with(&dg, &red);
        let rhs = flip(&dg).mul_with(&rn, &red);
        let diff = lhs.sub(&rhs);
        let mut c = Check::new(
            format!("twist/triangular/intertwining/{name}"),
            "NSQ12",
            CheckVerdict::from_bool(diff.is_zero()),
        );
        if !diff.is_zero() {
            c = c.details(render(&diff, p));
        }
        out.push(c);
    }
    out
}

/// Inverse, cocycle with its flipped control, and triangularity of
/// `R = F²¹F⁻¹` in U(sl₂). Intertwining runs to `min(n, n_int)`.
pub fn verify_twist(n: usize, n_int: usize) -> Vec<Check> {
    let b = u_b_minus();
    let tw = Twist::new(&b, n);
    let mut out = check_inverse(&b, &tw);
    let cocycle = check_cocycle(&b, &tw.f);
    for (k, ok) in cocycle.iter().enumerate() {
        out.push(Check::new(format!("twist/cocycle/order-{k}"), "NSQ4", CheckVerdict::from_bool(*ok)));
    }
    let flipped = check_cocycle(&b, &flipped_control(&b, n.min(3)));
    let first = flipped.iter().position(|ok| !ok);
    out.push(
        Check::new("twist/cocycle/control/flipped", "NSQ4", CheckVerdict::from_bool(matches!(first, Some(k) if k <= 2)))
            .details(match first {
                Some(k) => format!("1 + xi f(x)h fails the cocycle identity at xi^{k}"),
                None => "flipped twist was not detected".into(),
            }),
    );
    let p = u_sl2();
    let tw = Twist::new(&p, n);
    let r = build_r_twist(&p, &tw);
    let n_int = n.min(n_int);
    let tw_int = Twist::new(&p, n_int);
    let coproducts: Vec<(String, TruncatedSeries)> = ["h", "e", "f"]
        .iter()
        .map(|g| {
            let x = p.gen(g);
            let dg = constant(x.tensor(&Element::one(1)).add(&Element::one(1).tensor(&x)), n_int);
            (g.to_string(), twist_conjugate(&p, &tw_int, &dg))
        })
        .collect();
    out.extend(check_triangular(&p, &r, &coproducts, n_int));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twist_low_orders() {
        let p = u_b_minus();
        let f = build_twist(&p, 2);
        assert_eq!(f.get(0), Element::one(2));
        assert_eq!(f.get(1), p.gen("h").tensor(&p.gen("f")));
        let h = p.gen("h");
        let two = Element::scalar(1, Scalar::from_int(2));
        let expect = h.mul(&h.add(&two)).tensor(&p.elem("f f")).scale(&Scalar::ratio(1, 2));
        assert_eq!(f.get(2), expect);
        let fi = build_twist_inverse(&p, 2);
        let expect = h.mul(&h.sub(&two)).tensor(&p.elem("f f")).scale(&Scalar::ratio(1, 2));
        assert_eq!(fi.get(2), expect);
    }

    #[test]
    fn inverse_and_cocycle() {
        let p = u_b_minus();
        let tw = Twist::new(&p, 4);
        assert!(check_inverse(&p, &tw).iter().all(Check::passed));
        assert!(check_cocycle(&p, &tw.f).iter().all(|&b| b));
        let bad = check_cocycle(&p, &flipped_control(&p, 3));
        assert!(bad.iter().take(3).any(|&b| !b));
    }

    #[test]
    fn conjugated_h_first_order() {
        let p = u_sl2();
        let tw = Twist::new(&p, 1);
        let h = p.gen("h");
        let dh = constant(h.tensor(&Element::one(1)).add(&Element::one(1).tensor(&h)), 1);
        let c = twist_conjugate(&p, &tw, &dh);
        assert_eq!(c.get(1), h.tensor(&p.gen("f")).scale(&Scalar::from_int(2)));
    }
}
