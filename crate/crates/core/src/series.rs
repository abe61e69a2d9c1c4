//! Truncated formal power series with algebra-element coefficients.

use std::collections::BTreeMap;

use crate::freealg::Element;
use crate::scalar::Scalar;

/// Which formal variable the order index counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum SeriesVar {
    /// Powers of the twist parameter.
    Xi,
    /// Powers of an inverse spectral parameter.
    UInv,
}

/// `Σ_{k ≤ bound} c_k x^k` with `c_k` elements on a fixed number of legs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    var: SeriesVar,
    legs: usize,
    bound: usize,
    coeffs: BTreeMap<usize, Element>,
}

impl TruncatedSeries {
    pub fn zero(var: SeriesVar, legs: usize, bound: usize) -> Self {
        TruncatedSeries { var, legs, bound, coeffs: BTreeMap::new() }
    }

    pub fn constant(var: SeriesVar, c: Element, bound: usize) -> Self {
        let mut s = Self::zero(var, c.legs(), bound);
        s.set(0, c);
        s
    }

    pub fn one(var: SeriesVar, legs: usize, bound: usize) -> Self {
        Self::constant(var, Element::one(legs), bound)
    }

    pub fn from_fn(var: SeriesVar, legs: usize, bound: usize, mut f: impl FnMut(usize) -> Element) -> Self {
        let mut s = Self::zero(var, legs, bound);
        for k in 0..=bound {
            s.set(k, f(k));
        }
        s
    }

    pub fn var(&self) -> SeriesVar {
        self.var
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Coefficient of order `k` (zero when absent or beyond the bound).
    pub fn get(&self, k: usize) -> Element {
        self.coeffs.get(&k).cloned().unwrap_or_else(|| Element::zero(self.legs))
    }

    pub fn coeff(&self, k: usize) -> Option<&Element> {
        self.coeffs.get(&k)
    }

    pub fn set(&mut self, k: usize, c: Element) {
        assert_eq!(c.legs(), self.legs, "series coefficient leg mismatch");
        if k > self.bound {
            return;
        }
        if c.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
    }

    pub fn orders(&self) -> impl Iterator<Item = (usize, &Element)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, bound: usize) -> Self {
        let mut s = Self::zero(self.var, self.legs, bound.min(self.bound));
        for (k, c) in self.coeffs.range(..=s.bound) {
            s.coeffs.insert(*k, c.clone());
        }
        s
    }

    pub fn map(&self, mut f: impl FnMut(usize, &Element) -> Element) -> Self {
        let mut s = Self::zero(self.var, self.legs, self.bound);
        let mut legs = None;
        for (k, c) in &self.coeffs {
            let v = f(*k, c);
            legs.get_or_insert(v.legs());
            s.legs = v.legs();
            s.set(*k, v);
        }
        if legs.is_none() {
            // Preserve the leg count of an empty series.
            s.legs = self.legs;
        }
        s
    }

    fn combine_bound(&self, o: &Self) -> usize {
        assert_eq!(self.var, o.var, "series variable mismatch");
        assert_eq!(self.legs, o.legs, "series leg mismatch");
        self.bound.min(o.bound)
    }

    pub fn add(&self, o: &Self) -> Self {
        let b = self.combine_bound(o);
        let mut s = self.truncate(b);
        for (k, c) in o.coeffs.range(..=b) {
            let v = s.get(*k).add(c);
            s.set(*k, v);
        }
        s
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map(|_, x| x.scale(c))
    }

    /// Series product, truncated at the smaller bound. `reduce` is applied
    /// to every accumulated coefficient (normal forms keep sizes small).
    pub fn mul_with(&self, o: &Self, reduce: &dyn Fn(Element) -> Element) -> Self {
        let b = self.combine_bound(o);
        let mut s = Self::zero(self.var, self.legs, b);
        for k in 0..=b {
            let mut acc = Element::zero(self.legs);
            for (i, a) in self.coeffs.range(..=k) {
                if let Some(c) = o.coeffs.get(&(k - i)) {
                    acc.add_assign_scaled(&a.mul(c), &Scalar::one());
                }
            }
            s.set(k, reduce(acc));
        }
        s
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_with(o, &|e| e)
    }

    /// Order-wise tensor product: legs of `o` follow those of `self`.
    pub fn tensor_with(&self, o: &Self, reduce: &dyn Fn(Element) -> Element) -> Self {
        assert_eq!(self.var, o.var);
        let b = self.bound.min(o.bound);
        let mut s = Self::zero(self.var, self.legs + o.legs, b);
        for k in 0..=b {
            let mut acc = Element::zero(self.legs + o.legs);
            for (i, a) in self.coeffs.range(..=k) {
                if let Some(c) = o.coeffs.get(&(k - i)) {
                    acc.add_assign_scaled(&a.tensor(c), &Scalar::one());
                }
            }
            s.set(k, reduce(acc));
        }
        s
    }

    /// Multiplies every coefficient by `x^shift` (shifting orders up).
    pub fn shift_up(&self, shift: usize) -> Self {
        let mut s = Self::zero(self.var, self.legs, self.bound);
        for (k, c) in &self.coeffs {
            s.set(k + shift, c.clone());
        }
        s
    }

    /// Inverse of a series with constant term 1, as `Σ (1 - a)^n`.
    pub fn inverse_unipotent(&self, reduce: &dyn Fn(Element) -> Element) -> Self {
        assert_eq!(self.get(0), Element::one(self.legs), "constant term must be 1");
        let one = Self::one(self.var, self.legs, self.bound);
        let x = one.sub(self);
        let mut out = one.clone();
        let mut p = one;
        for _ in 0..self.bound {
            p = p.mul_with(&x, reduce);
            out = out.add(&p);
        }
        out
    }

    /// First order at which two series differ, up to the smaller bound.
    pub fn first_difference(&self, o: &Self) -> Option<usize> {
        let b = self.bound.min(o.bound);
        (0..=b).find(|&k| self.get(k) != o.get(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{Alphabet, Element};

    #[test]
    fn geometric_inverse() {
        let a = Alphabet::new("x", &["f"]);
        let f = Element::gen(a.sym("f"));
        let mut t = TruncatedSeries::one(SeriesVar::Xi, 1, 5);
        t.set(1, f.scale(&Scalar::from_int(-2)));
        let inv = t.inverse_unipotent(&|e| e);
        assert_eq!(inv.get(3), f.pow(3).scale(&Scalar::from_int(8)));
        let prod = t.mul(&inv);
        assert_eq!(prod, TruncatedSeries::one(SeriesVar::Xi, 1, 5));
    }
}
