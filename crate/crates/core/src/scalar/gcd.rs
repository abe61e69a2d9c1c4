//! Multivariate polynomial gcd over the rationals by recursive primitive
//! polynomial remainder sequences.

use num_rational::BigRational;
use num_traits::One;

use super::poly::{Monomial, Poly, Var};

/// Monic gcd of two polynomials. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    // Pull out monomial contents first; this also handles monomial inputs.
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let a1 = if ma.is_one() { a.clone() } else { a.div_monomial(&ma) };
    let b1 = if mb.is_one() { b.clone() } else { b.div_monomial(&mb) };
    let core = if a1.is_constant() || b1.is_constant() {
        Poly::one()
    } else {
        gcd_no_monomial_content(&a1, &b1)
    };
    core.mul_monomial(&mg, &BigRational::one()).monic()
}

fn gcd_no_monomial_content(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.div_exact(b).is_some() {
        return b.monic();
    }
    if b.div_exact(a).is_some() {
        return a.monic();
    }
    let va = a.variables();
    let vb = b.variables();
    // A variable in only one operand: the gcd divides the content w.r.t. it.
    for v in &va {
        if !vb.contains(v) {
            let c = content_in(a, *v);
            return gcd(&c, b);
        }
    }
    for v in &vb {
        if !va.contains(v) {
            let c = content_in(b, *v);
            return gcd(a, &c);
        }
    }
    // Main variable: the shared variable with the smallest max degree keeps
    // the remainder sequences short.
    let x = *va
        .iter()
        .min_by_key(|v| a.degree_in(**v).max(b.degree_in(**v)))
        .expect("non-constant polynomial has a variable");
    let ca = content_in(a, x);
    let cb = content_in(b, x);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let gc = gcd(&ca, &cb);
    let gp = primitive_prs(pa, pb, x);
    gc.mul(&gp).monic()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `x`.
pub fn content_in(p: &Poly, x: Var) -> Poly {
    let coeffs = p.coefficients_in(x);
    let mut it = coeffs.values();
    let mut g = match it.next() {
        Some(c) => c.monic(),
        None => return Poly::zero(),
    };
    for c in it {
        if g.is_one() {
            break;
        }
        g = gcd(&g, c);
    }
    g
}

fn primitive_part(p: &Poly, x: Var) -> Poly {
    let c = content_in(p, x);
    if c.is_constant() {
        p.monic()
    } else {
        p.div_exact(&c).expect("content divides").monic()
    }
}

/// Sparse pseudo-remainder of `a` by `b` in the variable `x`.
fn pseudo_rem(a: &Poly, b: &Poly, x: Var) -> Poly {
    let bc = b.coefficients_in(x);
    let (&db, lcb) = bc.iter().next_back().expect("nonzero divisor");
    let mut r = a.clone();
    loop {
        let rc = r.coefficients_in(x);
        let (&dr, lcr) = match rc.iter().next_back() {
            Some(t) => t,
            None => return r,
        };
        if dr < db || r.is_zero() {
            return r;
        }
        let shift = Monomial::var(x, dr - db);
        let lhs = r.mul(lcb);
        let rhs = b.mul(lcr).mul_monomial(&shift, &BigRational::one());
        r = lhs.sub(&rhs);
    }
}

fn primitive_prs(a: Poly, b: Poly, x: Var) -> Poly {
    let (mut r0, mut r1) = if a.degree_in(x) >= b.degree_in(x) { (a, b) } else { (b, a) };
    loop {
        if r1.is_zero() {
            return primitive_part(&r0, x);
        }
        if r1.degree_in(x) == 0 {
            return Poly::one();
        }
        let r = pseudo_rem(&r0, &r1, x);
        r0 = r1;
        r1 = if r.is_zero() { r } else { primitive_part(&r, x) };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(v: Var) -> Poly {
        Poly::var(v)
    }

    #[test]
    fn gcd_of_products() {
        let f = x(Var::U).sub(&x(Var::V)).add(&x(Var::Eta));
        let g = x(Var::Xi).mul(&x(Var::U)).add(&Poly::int(1));
        let h = x(Var::Eta).add(&x(Var::Xi)).pow(2);
        let a = f.mul(&g);
        let b = f.mul(&h);
        assert_eq!(gcd(&a, &b), f.monic());
        assert_eq!(gcd(&g, &h), Poly::one());
    }

    #[test]
    fn gcd_with_monomials() {
        let a = x(Var::Eta).pow(2).mul(&x(Var::Xi));
        let b = x(Var::Eta).mul(&x(Var::Xi).add(&Poly::int(1)));
        assert_eq!(gcd(&a, &b), x(Var::Eta));
    }

    #[test]
    fn gcd_univariate_powers() {
        let a = x(Var::U).pow(3).sub(&Poly::int(1));
        let b = x(Var::U).pow(2).sub(&Poly::int(1));
        assert_eq!(gcd(&a, &b), x(Var::U).sub(&Poly::int(1)));
    }
}
