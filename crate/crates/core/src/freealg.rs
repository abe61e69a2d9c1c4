//! Free associative algebras with tensor legs over [`Scalar`].
//!
//! Words are stored as sequences of sort indices into an [`Alphabet`]; every
//! relation lives in a presentation, never here.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("leg mismatch: {left} legs against {right} legs")]
    LegMismatch { left: usize, right: usize },
    #[error("permutation {perm:?} is not a permutation of {legs} legs")]
    Arity { legs: usize, perm: Vec<usize> },
    #[error("no image given for generator {0}")]
    MissingImage(String),
    #[error("unknown generator {name:?} in alphabet {alphabet}")]
    UnknownSymbol { alphabet: String, name: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Ordered, named generator set. The position of a name is its sort index.
#[derive(Debug, PartialEq, Eq)]
pub struct Alphabet {
    id: String,
    names: Vec<String>,
    lookup: HashMap<String, u16>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(id: &str, names: &[S]) -> Arc<Alphabet> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let lookup: HashMap<String, u16> =
            names.iter().enumerate().map(|(i, n)| (n.clone(), i as u16)).collect();
        assert_eq!(lookup.len(), names.len(), "duplicate generator name in {id}");
        Arc::new(Alphabet { id: id.to_string(), names, lookup })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<u16> {
        self.lookup.get(name).copied()
    }

    pub fn sym(&self, name: &str) -> u16 {
        self.index(name).unwrap_or_else(|| panic!("no generator {name} in {}", self.id))
    }

    pub fn name(&self, s: u16) -> &str {
        &self.names[s as usize]
    }

    /// Word from space-separated generator names; `1` or empty is the unit.
    pub fn parse_word(&self, s: &str) -> Result<Word, AlgebraError> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::empty());
        }
        s.split_whitespace()
            .map(|n| {
                self.index(n).ok_or_else(|| AlgebraError::UnknownSymbol {
                    alphabet: self.id.clone(),
                    name: n.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn word(&self, s: &str) -> Word {
        self.parse_word(s).unwrap()
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let parts: Vec<&str> = w.0.iter().map(|&s| self.name(s)).collect();
        parts.join(" ")
    }
}

/// A word in generator sort indices, ordered by length and then
/// lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<u16>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(s: u16) -> Word {
        Word(vec![s])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + o.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&o.0);
        Word(v)
    }

    pub fn slice(&self, a: usize, b: usize) -> Word {
        Word(self.0[a..b].to_vec())
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// First position where `pat` occurs as a factor.
    pub fn find(&self, pat: &[u16]) -> Option<usize> {
        if pat.len() > self.len() {
            return None;
        }
        (0..=self.len() - pat.len()).find(|&i| &self.0[i..i + pat.len()] == pat)
    }
}

impl Ord for Word {
    fn cmp(&self, o: &Self) -> Ordering {
        self.len().cmp(&o.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Key of a term: one word per leg.
pub type Key = Vec<Word>;

/// Finite linear combination of tensor words. Zero coefficients are never
/// stored. A zero-leg element is a plain scalar.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    legs: usize,
    terms: BTreeMap<Key, Scalar>,
}

impl Element {
    pub fn zero(legs: usize) -> Element {
        Element { legs, terms: BTreeMap::new() }
    }

    pub fn one(legs: usize) -> Element {
        Element::scalar(legs, Scalar::one())
    }

    pub fn scalar(legs: usize, c: Scalar) -> Element {
        let mut e = Element::zero(legs);
        e.add_term(vec![Word::empty(); legs], c);
        e
    }

    pub fn from_word(w: Word) -> Element {
        Element::term(Scalar::one(), vec![w])
    }

    pub fn gen(s: u16) -> Element {
        Element::from_word(Word::letter(s))
    }

    pub fn term(c: Scalar, key: Key) -> Element {
        let mut e = Element::zero(key.len());
        e.add_term(key, c);
        e
    }

    pub fn from_terms(legs: usize, it: impl IntoIterator<Item = (Key, Scalar)>) -> Element {
        let mut e = Element::zero(legs);
        for (k, c) in it {
            e.add_term(k, c);
        }
        e
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Key, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Key, Scalar)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, key: &[Word]) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The scalar part (coefficient of the unit word in every leg).
    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&vec![Word::empty(); self.legs])
    }

    /// Largest total word length among the terms.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|k| k.iter().map(Word::len).sum()).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Key, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, key: Key, c: Scalar) {
        debug_assert_eq!(key.len(), self.legs);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add_ref(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, o: &Element, c: &Scalar) {
        assert_eq!(self.legs, o.legs, "leg mismatch");
        if c.is_zero() {
            return;
        }
        for (k, v) in &o.terms {
            self.add_term(k.clone(), v.mul_ref(c));
        }
    }

    pub fn add(&self, o: &Element) -> Element {
        let mut r = self.clone();
        r.add_assign_scaled(o, &Scalar::one());
        r
    }

    pub fn sub(&self, o: &Element) -> Element {
        let mut r = self.clone();
        r.add_assign_scaled(o, &Scalar::from_int(-1));
        r
    }

    pub fn neg(&self) -> Element {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero(self.legs);
        }
        Element {
            legs: self.legs,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.mul_ref(c))).collect(),
        }
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> Element {
        Element::from_terms(self.legs, self.terms.iter().map(|(k, v)| (k.clone(), f(v))))
    }

    /// Keeps the terms accepted by `keep`.
    pub fn filter(&self, keep: impl Fn(&Key, &Scalar) -> bool) -> Element {
        Element {
            legs: self.legs,
            terms: self.terms.iter().filter(|(k, v)| keep(k, v)).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    pub fn try_mul(&self, o: &Element) -> Result<Element, AlgebraError> {
        if self.legs == 0 {
            return Ok(o.scale(&self.constant_term()));
        }
        if o.legs == 0 {
            return Ok(self.scale(&o.constant_term()));
        }
        if self.legs != o.legs {
            return Err(AlgebraError::LegMismatch { left: self.legs, right: o.legs });
        }
        let mut r = Element::zero(self.legs);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                let key: Key = ka.iter().zip(kb).map(|(a, b)| a.concat(b)).collect();
                r.add_term(key, ca.mul_ref(cb));
            }
        }
        Ok(r)
    }

    /// Leg-wise concatenation product; panics on a leg mismatch.
    pub fn mul(&self, o: &Element) -> Element {
        self.try_mul(o).expect("multiply")
    }

    pub fn pow(&self, n: u32) -> Element {
        let mut r = Element::one(self.legs);
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    pub fn commutator(&self, o: &Element) -> Element {
        self.mul(o).sub(&o.mul(self))
    }

    /// Tensor product: the legs of `o` are appended after those of `self`.
    pub fn tensor(&self, o: &Element) -> Element {
        let mut r = Element::zero(self.legs + o.legs);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                let mut key = ka.clone();
                key.extend(kb.iter().cloned());
                r.add_term(key, ca.mul_ref(cb));
            }
        }
        r
    }

    /// Leg `i` of the result is leg `perm[i]` of `self`.
    pub fn leg_permute(&self, perm: &[usize]) -> Result<Element, AlgebraError> {
        let mut seen = vec![false; self.legs];
        let ok = perm.len() == self.legs
            && perm.iter().all(|&p| p < self.legs && !std::mem::replace(&mut seen[p], true));
        if !ok {
            return Err(AlgebraError::Arity { legs: self.legs, perm: perm.to_vec() });
        }
        Ok(Element {
            legs: self.legs,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (perm.iter().map(|&p| k[p].clone()).collect(), v.clone()))
                .collect(),
        })
    }

    /// Exchanges the two legs of a 2-leg element.
    pub fn flip(&self) -> Element {
        self.leg_permute(&[1, 0]).expect("two legs")
    }

    /// Inserts unit legs so that leg `i` of `self` lands at `positions[i]`
    /// in an element with `legs` legs.
    pub fn embed(&self, legs: usize, positions: &[usize]) -> Element {
        assert_eq!(positions.len(), self.legs);
        Element {
            legs,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| {
                    let mut key = vec![Word::empty(); legs];
                    for (i, &p) in positions.iter().enumerate() {
                        key[p] = k[i].clone();
                    }
                    (key, v.clone())
                })
                .collect(),
        }
    }

    /// Splits off one leg: a map from words of leg `leg` to the element made
    /// of the remaining legs.
    pub fn split_leg(&self, leg: usize) -> BTreeMap<Word, Element> {
        let mut out: BTreeMap<Word, Element> = BTreeMap::new();
        for (k, v) in &self.terms {
            let mut rest = k.clone();
            let w = rest.remove(leg);
            out.entry(w).or_insert_with(|| Element::zero(self.legs - 1)).add_term(rest, v.clone());
        }
        out
    }

    /// Replaces every word on `leg` by the element `f(word)`, whose legs are
    /// spliced in at that position.
    pub fn map_leg<F>(&self, leg: usize, image_legs: usize, mut f: F) -> Element
    where
        F: FnMut(&Word) -> Element,
    {
        assert!(leg < self.legs);
        let legs = self.legs - 1 + image_legs;
        let mut r = Element::zero(legs);
        let mut memo: HashMap<Word, Element> = HashMap::new();
        for (k, c) in &self.terms {
            let img = memo.entry(k[leg].clone()).or_insert_with(|| f(&k[leg]));
            debug_assert_eq!(img.legs, image_legs);
            for (ik, ic) in &img.terms {
                let mut key = Vec::with_capacity(legs);
                key.extend(k[..leg].iter().cloned());
                key.extend(ik.iter().cloned());
                key.extend(k[leg + 1..].iter().cloned());
                r.add_term(key, c.mul_ref(ic));
            }
        }
        r
    }

    /// Applies the algebra (or anti-algebra) homomorphism `hom` to leg `leg`.
    pub fn apply_hom_on_leg(&self, hom: &Hom, leg: usize) -> Result<Element, AlgebraError> {
        for k in self.terms.keys() {
            for &s in k[leg].letters() {
                hom.image(s)?;
            }
        }
        Ok(self.map_leg(leg, hom.target_legs, |w| hom.apply_word(w).expect("checked")))
    }

    /// Applies `hom` to a one-leg element.
    pub fn apply_hom(&self, hom: &Hom) -> Result<Element, AlgebraError> {
        if self.legs != 1 {
            return Err(AlgebraError::LegMismatch { left: self.legs, right: 1 });
        }
        self.apply_hom_on_leg(hom, 0)
    }

    /// Multiplies all legs together (the multiplication map), producing a
    /// one-leg element.
    pub fn multiply_legs(&self) -> Element {
        Element::from_terms(
            1,
            self.terms.iter().map(|(k, v)| {
                let mut w = Vec::new();
                for x in k {
                    w.extend_from_slice(x.letters());
                }
                (vec![Word(w)], v.clone())
            }),
        )
    }

    /// Exchange format: one `coeff | leg1 | leg2 | ...` line per term, in
    /// increasing term order.
    pub fn to_exchange(&self, alphabets: &[&Alphabet]) -> String {
        let mut out = String::new();
        for (k, c) in &self.terms {
            out.push_str(&c.to_string());
            for (i, w) in k.iter().enumerate() {
                out.push_str(" | ");
                out.push_str(&alphabets[i.min(alphabets.len() - 1)].format_word(w));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the exchange format. `alphabets` gives one alphabet per leg
    /// (the last one is reused for further legs).
    pub fn from_exchange(s: &str, legs: usize, alphabets: &[&Alphabet]) -> Result<Element, AlgebraError> {
        let mut e = Element::zero(legs);
        for (ln, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split('|').collect();
            if parts.len() != legs + 1 {
                return Err(AlgebraError::Parse {
                    line: ln + 1,
                    msg: format!("expected {} fields, found {}", legs + 1, parts.len()),
                });
            }
            let c: Scalar = parts[0]
                .trim()
                .parse()
                .map_err(|err| AlgebraError::Parse { line: ln + 1, msg: format!("{err}") })?;
            let mut key = Vec::with_capacity(legs);
            for (i, p) in parts[1..].iter().enumerate() {
                key.push(alphabets[i.min(alphabets.len() - 1)].parse_word(p)?);
            }
            e.add_term(key, c);
        }
        Ok(e)
    }

    /// Human-readable rendering such as `2*xi h (x) f + 1 (x) h`.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> DisplayElement<'a> {
        DisplayElement { e: self, alphabet }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element[{}]{{", self.legs)?;
        for (i, (k, v)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({}) {:?}", v, k)?;
        }
        write!(f, "}}")
    }
}

pub struct DisplayElement<'a> {
    e: &'a Element,
    alphabet: &'a Alphabet,
}

impl fmt::Display for DisplayElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, v)) in self.e.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let legs: Vec<String> = k.iter().map(|w| self.alphabet.format_word(w)).collect();
            if v.is_one() {
                write!(f, "{}", legs.join(" (x) "))?;
            } else {
                write!(f, "({}) {}", v, legs.join(" (x) "))?;
            }
        }
        Ok(())
    }
}

/// A generator map extended multiplicatively (or anti-multiplicatively).
#[derive(Clone, Debug)]
pub struct Hom {
    source: Arc<Alphabet>,
    images: Vec<Option<Element>>,
    target_legs: usize,
    anti: bool,
}

impl Hom {
    pub fn new(source: Arc<Alphabet>, target_legs: usize) -> Hom {
        let n = source.len();
        Hom { source, images: vec![None; n], target_legs, anti: false }
    }

    /// An anti-homomorphism: the image of `a b` is `image(b) image(a)`.
    pub fn anti(source: Arc<Alphabet>, target_legs: usize) -> Hom {
        Hom { anti: true, ..Hom::new(source, target_legs) }
    }

    pub fn identity(source: Arc<Alphabet>) -> Hom {
        let mut h = Hom::new(source.clone(), 1);
        for s in 0..source.len() as u16 {
            h.images[s as usize] = Some(Element::gen(s));
        }
        h
    }

    pub fn target_legs(&self) -> usize {
        self.target_legs
    }

    pub fn set(&mut self, name: &str, image: Element) -> &mut Self {
        assert_eq!(image.legs, self.target_legs, "image of {name} has wrong leg count");
        let s = self.source.sym(name);
        self.images[s as usize] = Some(image);
        self
    }

    pub fn set_sym(&mut self, s: u16, image: Element) -> &mut Self {
        assert_eq!(image.legs, self.target_legs);
        self.images[s as usize] = Some(image);
        self
    }

    pub fn image(&self, s: u16) -> Result<&Element, AlgebraError> {
        self.images
            .get(s as usize)
            .and_then(|x| x.as_ref())
            .ok_or_else(|| AlgebraError::MissingImage(self.source.name(s).to_string()))
    }

    pub fn apply_word(&self, w: &Word) -> Result<Element, AlgebraError> {
        let mut r = Element::one(self.target_legs);
        if self.anti {
            for &s in w.letters().iter().rev() {
                r = r.mul(self.image(s)?);
            }
        } else {
            for &s in w.letters() {
                r = r.mul(self.image(s)?);
            }
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2() -> Arc<Alphabet> {
        Alphabet::new("sl2", &["f", "h", "e"])
    }

    #[test]
    fn word_order_is_deglex() {
        let a = sl2();
        assert!(a.word("e") < a.word("f f"));
        assert!(a.word("f h") < a.word("h f"));
        assert!(a.word("1") < a.word("f"));
    }

    #[test]
    fn tensor_products_and_flip() {
        let a = sl2();
        let h = Element::gen(a.sym("h"));
        let f = Element::gen(a.sym("f"));
        let hf = h.tensor(&f);
        let sq = hf.mul(&hf);
        assert_eq!(sq, h.mul(&h).tensor(&f.mul(&f)));
        assert_eq!(hf.flip(), f.tensor(&h));
        assert_eq!(Element::one(2).mul(&hf), hf);
        assert!(hf.leg_permute(&[0, 0]).is_err());
    }

    #[test]
    fn hom_images_and_counit() {
        let a = sl2();
        let h = Element::gen(a.sym("h"));
        let e = Element::gen(a.sym("e"));
        let mut delta = Hom::new(a.clone(), 2);
        for g in ["f", "h", "e"] {
            let x = Element::gen(a.sym(g));
            delta.set(g, x.tensor(&Element::one(1)).add(&Element::one(1).tensor(&x)));
        }
        let dh = delta.apply_word(&Word::letter(a.sym("h"))).unwrap();
        assert_eq!(h.mul(&h).apply_hom(&delta).unwrap(), dh.mul(&dh));
        let mut eps = Hom::new(a.clone(), 0);
        for g in ["f", "h", "e"] {
            eps.set(g, Element::zero(0));
        }
        assert!(h.mul(&e).apply_hom(&eps).unwrap().is_zero());
        let partial = Hom::new(a.clone(), 1);
        assert_eq!(h.apply_hom(&partial), Err(AlgebraError::MissingImage("h".into())));
    }

    #[test]
    fn exchange_round_trip() {
        let a = sl2();
        let x = Element::from_exchange("eta/(2*xi) | h h | f\n-3 | 1 | e f\n", 2, &[&a]).unwrap();
        let text = x.to_exchange(&[&a]);
        let y = Element::from_exchange(&text, 2, &[&a]).unwrap();
        assert_eq!(x, y);
        assert_eq!(text, y.to_exchange(&[&a]));
    }
}
