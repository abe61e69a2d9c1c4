//! Oriented rewriting to normal form and overlap checking.

use std::sync::atomic::{AtomicUsize, Ordering};

use super::{Presentation, PresentationError};
use crate::freealg::{Element, Key, Word};
use crate::scalar::Scalar;

const STEP_BUDGET: usize = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ConfluenceFailure {
    pub word: String,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ConfluenceReport {
    pub degree_bound: usize,
    pub ambiguities: usize,
    pub failures: Vec<ConfluenceFailure>,
    /// Indices of relations that do not rewrite to zero.
    pub unreduced_relations: Vec<usize>,
}

impl ConfluenceReport {
    pub fn is_confluent(&self) -> bool {
        self.failures.is_empty() && self.unreduced_relations.is_empty()
    }
}

impl Presentation {
    /// Normal form under the rewrite rules; requires the confluent flag.
    /// Multi-leg elements are reduced leg by leg.
    pub fn normal_form(&self, a: &Element) -> Result<Element, PresentationError> {
        if !self.confluent {
            return Err(PresentationError::NotConfluent(self.name.clone()));
        }
        self.try_reduce(a)
    }

    /// Like [`normal_form`](Self::normal_form) but panics on errors; for
    /// built-in confluent presentations.
    pub fn nf(&self, a: &Element) -> Element {
        self.normal_form(a).expect("normal form")
    }

    /// Applies the rules until no rule applies. Sound for any rule set
    /// whose rules hold in the algebra; canonical only when confluent.
    pub fn reduce_with_rules(&self, a: &Element) -> Element {
        self.try_reduce(a).expect("rewriting budget")
    }

    fn try_reduce(&self, a: &Element) -> Result<Element, PresentationError> {
        if self.rules.is_empty() || a.legs() == 0 {
            return Ok(a.clone());
        }
        let steps = AtomicUsize::new(0);
        let mut out = Element::zero(a.legs());
        for (key, c) in a.terms() {
            let mut acc = Element::scalar(0, c.clone());
            for w in key {
                let nf = self.nf_word(w, &steps)?;
                acc = acc.tensor(&nf);
            }
            out.add_assign_scaled(&acc, &Scalar::one());
        }
        Ok(out)
    }

    fn cached(&self, w: &Word) -> Option<Element> {
        self.nf_cache.read().unwrap().get(w).cloned()
    }

    fn store(&self, w: Word, e: &Element) {
        self.nf_cache.write().unwrap().entry(w).or_insert_with(|| e.clone());
    }

    /// Normal form of a single word, built right to left: the suffix is
    /// reduced first and the leading letter is inserted into each of its
    /// irreducible terms.
    fn nf_word(&self, w: &Word, steps: &AtomicUsize) -> Result<Element, PresentationError> {
        if w.len() < 2 {
            return Ok(Element::from_word(w.clone()));
        }
        if let Some(e) = self.cached(w) {
            return Ok(e);
        }
        let x = w.letters()[0];
        let tail = self.nf_word(&w.slice(1, w.len()), steps)?;
        let mut out = Element::zero(1);
        for (k, c) in tail.terms() {
            let r = self.insert(x, &k[0], steps)?;
            out.add_assign_scaled(&r, c);
        }
        self.store(w.clone(), &out);
        Ok(out)
    }

    /// Normal form of `x u` where `u` is irreducible.
    fn insert(&self, x: u16, u: &Word, steps: &AtomicUsize) -> Result<Element, PresentationError> {
        let mut xu = Vec::with_capacity(u.len() + 1);
        xu.push(x);
        xu.extend_from_slice(u.letters());
        let xu = Word(xu);
        if let Some(e) = self.cached(&xu) {
            return Ok(e);
        }
        let rule = self.rules.iter().find(|r| xu.letters().starts_with(r.lhs.letters()));
        let out = match rule {
            None => Element::from_word(xu.clone()),
            Some(r) => {
                if steps.fetch_add(1, Ordering::Relaxed) > STEP_BUDGET {
                    return Err(PresentationError::StepBudget(STEP_BUDGET));
                }
                let rest = xu.slice(r.lhs.len(), xu.len());
                let mut acc = Element::zero(1);
                for (k, c) in r.rhs.terms() {
                    let nf = self.nf_word(&k[0].concat(&rest), steps)?;
                    acc.add_assign_scaled(&nf, c);
                }
                acc
            }
        };
        self.store(xu, &out);
        Ok(out)
    }

    /// Single leftmost rewrite step at a given position with a given rule.
    fn rewrite_at(&self, w: &Word, pos: usize, rule: usize) -> Element {
        let r = &self.rules[rule];
        let pre = w.slice(0, pos);
        let post = w.slice(pos + r.lhs.len(), w.len());
        Element::from_terms(
            1,
            r.rhs.terms().map(|(k, c)| -> (Key, Scalar) { (vec![pre.concat(&k[0]).concat(&post)], c.clone()) }),
        )
    }

    /// Checks every overlap and inclusion ambiguity of the rule left sides
    /// up to `degree_bound`, and that every relation rewrites to zero.
    pub fn check_confluence(&self, degree_bound: usize) -> ConfluenceReport {
        let mut failures = Vec::new();
        let mut ambiguities = 0;
        let a = &self.alphabet;
        let show = |e: &Element| e.display(a).to_string();
        for (i, ri) in self.rules.iter().enumerate() {
            for (j, rj) in self.rules.iter().enumerate() {
                let li = ri.lhs.letters();
                let lj = rj.lhs.letters();
                let mut cases: Vec<(Word, usize)> = Vec::new();
                for k in 1..li.len().min(lj.len()) {
                    if li[li.len() - k..] == lj[..k] {
                        let w = Word(li.iter().chain(&lj[k..]).copied().collect());
                        cases.push((w, li.len() - k));
                    }
                }
                if i != j && lj.len() < li.len() {
                    if let Some(p) = ri.lhs.find(lj) {
                        cases.push((ri.lhs.clone(), p));
                    }
                }
                for (w, pj) in cases {
                    if w.len() > degree_bound {
                        continue;
                    }
                    ambiguities += 1;
                    let left = self.reduce_with_rules(&self.rewrite_at(&w, 0, i));
                    let right = self.reduce_with_rules(&self.rewrite_at(&w, pj, j));
                    if left != right {
                        failures.push(ConfluenceFailure {
                            word: a.format_word(&w),
                            left: show(&left),
                            right: show(&right),
                        });
                    }
                }
            }
        }
        let unreduced_relations = self
            .relations
            .iter()
            .enumerate()
            .filter(|(_, r)| r.degree() <= degree_bound.max(r.degree()) && !self.reduce_with_rules(r).is_zero())
            .map(|(i, _)| i)
            .collect();
        ConfluenceReport { degree_bound, ambiguities, failures, unreduced_relations }
    }
}

#[cfg(test)]
mod tests {
    use crate::presentations::{u_sl2, Presentation};

    #[test]
    fn sl2_normal_forms() {
        let p = u_sl2();
        assert_eq!(p.nf(&p.elem("e f")), p.elem("f e + h"));
        assert_eq!(p.nf(&p.elem("e h")), p.elem("h e - 2 e"));
        assert_eq!(p.nf(&p.elem("f h e")), p.elem("f h e"));
        let x = p.elem("e e f f h");
        let n = p.nf(&x);
        assert_eq!(p.nf(&n), n);
    }

    #[test]
    fn confluence_detects_missing_rule() {
        let p = u_sl2();
        assert!(p.check_confluence(4).is_confluent());
        let mut rules = p.rules().to_vec();
        rules.retain(|r| r.lhs != p.alphabet().word("e h"));
        let q = Presentation::new("broken", p.alphabet().clone(), p.relations().to_vec()).with_rules(rules, false);
        let rep = q.check_confluence(4);
        assert!(!rep.is_confluent());
        let empty = Presentation::new("free", p.alphabet().clone(), vec![]);
        assert!(empty.check_confluence(4).is_confluent());
    }
}
