//! Exact coefficient field: rational functions in `eta, xi, u, v, w, t` over
//! the rationals, always held in canonical form.

mod gcd;
mod parse;
mod poly;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use gcd::gcd;
pub use parse::ParseScalarError;
pub use poly::{Monomial, Poly, Var, NVARS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero: ({numerator}) / ({denominator})")]
    DivisionByZero { numerator: String, denominator: String },
    #[error("substitution creates a pole: denominator {denominator} vanishes")]
    Pole { denominator: String },
}

/// A rational function `num / den` with `gcd(num, den) = 1` and `den` monic
/// under the degree-lexicographic order. The zero function is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Arc<Poly>,
    den: Arc<Poly>,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: Arc::new(Poly::zero()), den: Arc::new(Poly::one()) }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { num: Arc::new(Poly::int(n)), den: Arc::new(Poly::one()) }
    }

    pub fn from_rational(c: BigRational) -> Self {
        Scalar { num: Arc::new(Poly::constant(c)), den: Arc::new(Poly::one()) }
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn var(v: Var) -> Self {
        Scalar { num: Arc::new(Poly::var(v)), den: Arc::new(Poly::one()) }
    }

    pub fn eta() -> Self {
        Scalar::var(Var::Eta)
    }

    pub fn xi() -> Self {
        Scalar::var(Var::Xi)
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar { num: Arc::new(p), den: Arc::new(Poly::one()) }
    }

    /// Builds `num / den` in canonical form.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero {
                numerator: num.to_string(),
                denominator: den.to_string(),
            });
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Scalar::zero();
        }
        if den.is_constant() {
            let c = den.constant_value().unwrap();
            let num = if c.is_one() { num } else { num.scale(&c.recip()) };
            return Scalar { num: Arc::new(num), den: Arc::new(Poly::one()) };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            Scalar { num: Arc::new(num), den: Arc::new(den) }
        } else {
            let inv = lc.recip();
            Scalar { num: Arc::new(num.scale(&inv)), den: Arc::new(den.scale(&inv)) }
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The rational value if the function is constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn involves(&self, v: Var) -> bool {
        self.num.involves(v) || self.den.involves(v)
    }

    pub fn add_ref(&self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar::from_poly(self.num.add(&o.num));
        }
        if self.den == o.den {
            return Self::canonical(self.num.add(&o.num), (*self.den).clone());
        }
        let g = gcd(&self.den, &o.den);
        if g.is_one() {
            let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            let den = self.den.mul(&o.den);
            return Self::canonical(num, den);
        }
        let a = self.den.div_exact(&g).unwrap();
        let b = o.den.div_exact(&g).unwrap();
        let num = self.num.mul(&b).add(&o.num.mul(&a));
        let den = a.mul(&o.den);
        Self::canonical(num, den)
    }

    pub fn sub_ref(&self, o: &Scalar) -> Scalar {
        self.add_ref(&o.neg_ref())
    }

    pub fn neg_ref(&self) -> Scalar {
        if self.is_zero() {
            return self.clone();
        }
        Scalar { num: Arc::new(self.num.neg()), den: self.den.clone() }
    }

    pub fn mul_ref(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar::from_poly(self.num.mul(&o.num));
        }
        // Cross-cancel so the product is already reduced.
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let n1 = if g1.is_one() { (*self.num).clone() } else { self.num.div_exact(&g1).unwrap() };
        let d2 = if g1.is_one() { (*o.den).clone() } else { o.den.div_exact(&g1).unwrap() };
        let n2 = if g2.is_one() { (*o.num).clone() } else { o.num.div_exact(&g2).unwrap() };
        let d1 = if g2.is_one() { (*self.den).clone() } else { self.den.div_exact(&g2).unwrap() };
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading_coeff();
        if lc.is_one() {
            Scalar { num: Arc::new(num), den: Arc::new(den) }
        } else {
            let inv = lc.recip();
            Scalar { num: Arc::new(num.scale(&inv)), den: Arc::new(den.scale(&inv)) }
        }
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero {
                numerator: "1".into(),
                denominator: self.to_string(),
            });
        }
        Ok(Self::canonical((*self.den).clone(), (*self.num).clone()))
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        if o.is_zero() {
            return Err(ScalarError::DivisionByZero {
                numerator: self.to_string(),
                denominator: o.to_string(),
            });
        }
        Ok(self.mul_ref(&o.inv()?))
    }

    pub fn pow(&self, e: u32) -> Scalar {
        if e == 0 {
            return Scalar::one();
        }
        Scalar {
            num: Arc::new(self.num.pow(e)),
            den: Arc::new(self.den.pow(e)),
        }
    }

    pub fn scale_rational(&self, c: &BigRational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { num: Arc::new(self.num.scale(c)), den: self.den.clone() }
    }

    /// Substitutes a scalar for each bound variable.
    pub fn substitute(&self, bindings: &[(Var, Scalar)]) -> Result<Scalar, ScalarError> {
        if bindings.iter().all(|(v, _)| !self.involves(*v)) {
            return Ok(self.clone());
        }
        let num = substitute_poly(&self.num, bindings);
        let den = substitute_poly(&self.den, bindings);
        if den.is_zero() {
            return Err(ScalarError::Pole { denominator: self.den.to_string() });
        }
        num.checked_div(&den)
    }

    /// Coefficient of `v^k` when the scalar is a polynomial in `v` whose
    /// denominator is free of `v`.
    pub fn coefficient_of(&self, v: Var, k: u16) -> Option<Scalar> {
        if self.den.involves(v) {
            return None;
        }
        let parts = self.num.coefficients_in(v);
        let c = parts.get(&k).cloned().unwrap_or_else(Poly::zero);
        Some(Self::canonical(c, (*self.den).clone()))
    }

    /// Renders with integer coefficients: `(u - v - eta)/(u - v)`.
    pub fn to_canonical_string(&self) -> String {
        if self.num.is_zero() {
            return "0".into();
        }
        use num_integer::Integer;
        let l = self.num.denominator_lcm().lcm(&self.den.denominator_lcm());
        let lr = BigRational::from_integer(l);
        let mut n = self.num.scale(&lr);
        let mut d = self.den.scale(&lr);
        let g = n.numerator_gcd().gcd(&d.numerator_gcd());
        if !g.is_one() && !g.is_zero() {
            let gi = BigRational::new(BigInt::one(), g);
            n = n.scale(&gi);
            d = d.scale(&gi);
        }
        if d.leading_is_negative() {
            n = n.neg();
            d = d.neg();
        }
        if d.is_one() {
            return n.to_string();
        }
        let ns = if n.terms().len() > 1 { format!("({})", n) } else { n.to_string() };
        let bare = d.is_constant() || (d.is_monomial() && d.leading_coeff().is_one());
        let ds = if bare { d.to_string() } else { format!("({})", d) };
        format!("{}/{}", ns, ds)
    }

    pub fn is_negative_constant(&self) -> bool {
        self.as_rational().map(|c| c.is_negative()).unwrap_or(false)
    }
}

fn substitute_poly(p: &Poly, bindings: &[(Var, Scalar)]) -> Scalar {
    let mut acc = Scalar::zero();
    for (m, c) in p.terms() {
        let mut keep = *m;
        let mut term = Scalar::from_rational(c.clone());
        for (v, s) in bindings {
            let e = m.exp(*v);
            keep.0[v.index()] = 0;
            if e > 0 {
                term = term.mul_ref(&s.pow(e as u32));
            }
        }
        let mono = Scalar::from_poly(Poly::monomial(keep, BigRational::one()));
        acc = acc.add_ref(&term.mul_ref(&mono));
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self)
    }
}

impl std::str::FromStr for Scalar {
    type Err = ParseScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse_scalar(s)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                self.$f(o)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$f(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$f(o)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    /// Panics on division by zero; use [`Scalar::checked_div`] to handle it.
    fn div(self, o: &Scalar) -> Scalar {
        self.checked_div(o).expect("scalar division by zero")
    }
}

impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, o: Scalar) -> Scalar {
        &self / &o
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> Scalar {
        Scalar::var(Var::U)
    }
    fn v() -> Scalar {
        Scalar::var(Var::V)
    }

    #[test]
    fn cancellation() {
        let r = (Scalar::eta() / Scalar::xi()) * Scalar::xi();
        assert_eq!(r, Scalar::eta());
    }

    #[test]
    fn antisymmetric_sum_vanishes() {
        let one = Scalar::one();
        let a = &one / &(u() - v());
        let b = &one / &(v() - u());
        assert!((a + b).is_zero());
    }

    #[test]
    fn laurent_coefficient_cancels() {
        let c = Scalar::eta() / (Scalar::from_int(2) * Scalar::xi());
        assert_eq!(c * (Scalar::from_int(2) * Scalar::xi()), Scalar::eta());
    }

    #[test]
    fn division_by_zero_reports_operands() {
        let err = Scalar::eta().checked_div(&Scalar::zero()).unwrap_err();
        assert!(matches!(err, ScalarError::DivisionByZero { .. }));
    }

    #[test]
    fn substitution_examples() {
        let one = Scalar::one();
        let f = &one / &(u() - v());
        let shifted = f.substitute(&[(Var::V, u() - Scalar::eta())]).unwrap();
        assert_eq!(shifted, &one / &Scalar::eta());
        let sq = u() * u();
        let s = sq.substitute(&[(Var::U, u() - Scalar::eta())]).unwrap();
        let e = u() * u() - Scalar::from_int(2) * Scalar::eta() * u() + Scalar::eta() * Scalar::eta();
        assert_eq!(s, e);
        assert!(matches!(f.substitute(&[(Var::V, u())]), Err(ScalarError::Pole { .. })));
    }

    #[test]
    fn canonical_text() {
        let one = Scalar::one();
        let s = (u() - v() - Scalar::eta()) / (u() - v());
        assert_eq!(s.to_string(), "(-eta + u - v)/(u - v)");
        let c = Scalar::eta() / (Scalar::from_int(2) * Scalar::xi());
        assert_eq!(c.to_string(), "eta/(2*xi)");
        assert_eq!((&one / &Scalar::from_int(3)).to_string(), "1/3");
    }
}
