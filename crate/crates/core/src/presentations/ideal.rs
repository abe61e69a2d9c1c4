//! Bounded two-sided ideal membership by exact sparse elimination.
//!
//! The span of relation multiples `w1 · rel · w2` is grown by support
//! closure from the target's words, then kept in echelon form keyed by
//! leading words. The remainder of a target against the pivots is
//! canonical for the span, so tensor membership reduces one leg at a time.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use super::{Presentation, PresentationError};
use crate::freealg::{Element, Key, Word};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    InIdeal,
    NotInIdeal,
    InconclusiveAtBound,
}

/// One term `coeff · (context with left·rel·right in slot leg)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiple {
    pub leg: usize,
    pub context: Key,
    pub left: Word,
    pub relation: usize,
    pub right: Word,
    pub coeff: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub verdict: Verdict,
    pub combination: Vec<Multiple>,
    pub degree_bound: usize,
    pub legs: usize,
    /// Number of relation multiples spanned.
    pub span_size: usize,
    /// Nonzero residue when the verdict is not in-ideal.
    pub residue: Option<Element>,
}

impl MembershipCertificate {
    /// Rebuilds the element the combination witnesses.
    pub fn replay(&self, p: &Presentation) -> Element {
        let mut out = Element::zero(self.legs);
        for m in &self.combination {
            let rel = &p.relations()[m.relation];
            for (k, c) in rel.terms() {
                let mut key = m.context.clone();
                key[m.leg] = m.left.concat(&k[0]).concat(&m.right);
                out.add_term(key, c.mul_ref(&m.coeff));
            }
        }
        out
    }

    /// Text serialization: one `coeff | leg | context | left | rel | right`
    /// line per multiple.
    pub fn to_text(&self, p: &Presentation) -> String {
        let a = p.alphabet();
        let mut s = String::new();
        writeln!(s, "presentation {}", p.id()).unwrap();
        writeln!(s, "verdict {:?}", self.verdict).unwrap();
        writeln!(s, "degree-bound {}", self.degree_bound).unwrap();
        writeln!(s, "span {}", self.span_size).unwrap();
        for m in &self.combination {
            let ctx: Vec<String> = m.context.iter().map(|w| a.format_word(w)).collect();
            writeln!(
                s,
                "{} | {} | {} | {} | {} | {}",
                m.coeff,
                m.leg,
                ctx.join(" ; "),
                a.format_word(&m.left),
                m.relation,
                a.format_word(&m.right)
            )
            .unwrap();
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipOptions {
    pub degree_bound: usize,
    /// Letters whose mode index exceeds this are excluded from multiples.
    pub max_mode: Option<u32>,
    /// Cap on the weight (Σ (mode + 1)) of words in multiples; defaults to
    /// the largest weight in the target when modes are present.
    pub weight_cap: Option<u64>,
    /// Upper limit on spanned multiples; hitting it makes the result
    /// inconclusive rather than wrong.
    pub max_multiples: usize,
}

impl MembershipOptions {
    pub fn new(degree_bound: usize) -> Self {
        MembershipOptions { degree_bound, max_mode: None, weight_cap: None, max_multiples: 300_000 }
    }

    pub fn max_mode(mut self, m: u32) -> Self {
        self.max_mode = Some(m);
        self
    }

    pub fn weight_cap(mut self, w: u64) -> Self {
        self.weight_cap = Some(w);
        self
    }
}

type Vector = BTreeMap<Word, Scalar>;
type Provenance = BTreeMap<usize, Scalar>;

/// `vec = scale · (multiple − Σ c · rows[s])` over `steps = [(s, c)]`;
/// provenance is expanded only when a certificate is requested.
struct Row {
    vec: Vector,
    multiple: usize,
    steps: Vec<(usize, Scalar)>,
    scale: Scalar,
}

/// Echelon basis of a growing span of relation multiples.
pub struct ReducedSpan<'p> {
    p: &'p Presentation,
    opts: MembershipOptions,
    weights: Option<Vec<u64>>,
    cap: Option<u64>,
    allowed: Vec<bool>,
    rel_ok: Vec<bool>,
    rel_max_weight: Vec<u64>,
    index: HashMap<Vec<u16>, Vec<usize>>,
    factor_lens: BTreeSet<usize>,
    multiples: Vec<(Word, usize, Word)>,
    seen_multiples: HashSet<(Word, usize, Word)>,
    seen_words: HashSet<Word>,
    pivots: HashMap<Word, usize>,
    rows: Vec<Row>,
    saturated: bool,
}

impl<'p> ReducedSpan<'p> {
    pub fn new(p: &'p Presentation, opts: MembershipOptions) -> Self {
        let n = p.alphabet().len();
        let weights = p.modes().map(|m| m.iter().map(|&x| x as u64 + 1).collect::<Vec<_>>());
        let allowed: Vec<bool> = match (p.modes(), opts.max_mode) {
            (Some(m), Some(mm)) => m.iter().map(|&x| x <= mm).collect(),
            _ => vec![true; n],
        };
        let mut index: HashMap<Vec<u16>, Vec<usize>> = HashMap::new();
        let mut factor_lens = BTreeSet::new();
        let mut rel_ok = Vec::new();
        let mut rel_max_weight = Vec::new();
        for (i, r) in p.relations().iter().enumerate() {
            let ok = r.terms().all(|(k, _)| k[0].letters().iter().all(|&s| allowed[s as usize]));
            rel_ok.push(ok);
            let mw = r
                .terms()
                .map(|(k, _)| word_weight(&weights, &k[0]))
                .max()
                .unwrap_or(0);
            rel_max_weight.push(mw);
            if !ok {
                continue;
            }
            for (k, _) in r.terms() {
                factor_lens.insert(k[0].len());
                let e = index.entry(k[0].letters().to_vec()).or_default();
                if !e.contains(&i) {
                    e.push(i);
                }
            }
        }
        let cap = opts.weight_cap;
        ReducedSpan {
            p,
            opts,
            weights,
            cap,
            allowed,
            rel_ok,
            rel_max_weight,
            index,
            factor_lens,
            multiples: Vec::new(),
            seen_multiples: HashSet::new(),
            seen_words: HashSet::new(),
            pivots: HashMap::new(),
            rows: Vec::new(),
            saturated: false,
        }
    }

    pub fn len(&self) -> usize {
        self.multiples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multiples.is_empty()
    }

    /// Whether the multiple limit was hit.
    pub fn saturated(&self) -> bool {
        self.saturated
    }

    /// Grows the span by support closure from `words`.
    pub fn extend<I: IntoIterator<Item = Word>>(&mut self, words: I) {
        let words: Vec<Word> = words.into_iter().collect();
        if self.weights.is_some() && self.cap.is_none() {
            let w = words.iter().map(|w| word_weight(&self.weights, w)).max().unwrap_or(0);
            self.cap = Some(w);
        } else if let (Some(_), Some(c)) = (&self.weights, self.cap) {
            if self.opts.weight_cap.is_none() {
                let w = words.iter().map(|w| word_weight(&self.weights, w)).max().unwrap_or(0);
                self.cap = Some(c.max(w));
            }
        }
        let mut queue: VecDeque<Word> = VecDeque::new();
        for w in words {
            if self.seen_words.insert(w.clone()) {
                queue.push_back(w);
            }
        }
        while let Some(w) = queue.pop_front() {
            if self.saturated {
                return;
            }
            for (left, rel, right) in self.multiples_containing(&w) {
                if self.multiples.len() >= self.opts.max_multiples {
                    self.saturated = true;
                    break;
                }
                let key = (left, rel, right);
                if !self.seen_multiples.insert(key.clone()) {
                    continue;
                }
                let vec = self.expand(&key);
                for m in vec.keys() {
                    if self.seen_words.insert(m.clone()) {
                        queue.push_back(m.clone());
                    }
                }
                let idx = self.multiples.len();
                self.multiples.push(key);
                self.insert_row(vec, idx);
            }
        }
    }

    fn multiples_containing(&self, w: &Word) -> Vec<(Word, usize, Word)> {
        let mut out = Vec::new();
        if !w.letters().iter().all(|&s| self.allowed[s as usize]) {
            return out;
        }
        let ww = word_weight(&self.weights, w);
        for &len in &self.factor_lens {
            if len > w.len() {
                break;
            }
            for start in 0..=w.len() - len {
                let f = &w.letters()[start..start + len];
                let Some(rels) = self.index.get(f) else { continue };
                for &r in rels {
                    if !self.rel_ok[r] {
                        continue;
                    }
                    let rel = &self.p.relations()[r];
                    let degree = w.len() - len + rel.degree();
                    if degree > self.opts.degree_bound {
                        continue;
                    }
                    if let Some(cap) = self.cap {
                        let fw = word_weight(&self.weights, &Word(f.to_vec()));
                        if ww - fw + self.rel_max_weight[r] > cap {
                            continue;
                        }
                    }
                    out.push((w.slice(0, start), r, w.slice(start + len, w.len())));
                }
            }
        }
        out
    }

    fn expand(&self, (left, rel, right): &(Word, usize, Word)) -> Vector {
        let mut v = Vector::new();
        for (k, c) in self.p.relations()[*rel].terms() {
            v.insert(left.concat(&k[0]).concat(right), c.clone());
        }
        v
    }

    fn insert_row(&mut self, mut vec: Vector, idx: usize) {
        let mut steps = Vec::new();
        loop {
            let Some((lead, c)) = vec.iter().next_back().map(|(k, v)| (k.clone(), v.clone())) else {
                return;
            };
            match self.pivots.get(&lead) {
                Some(&r) => {
                    axpy(&mut vec, &self.rows[r].vec, &c.neg_ref());
                    steps.push((r, c));
                }
                None => {
                    let inv = c.inv().expect("nonzero pivot");
                    for v in vec.values_mut() {
                        *v = v.mul_ref(&inv);
                    }
                    self.pivots.insert(lead, self.rows.len());
                    self.rows.push(Row { vec, multiple: idx, steps, scale: inv });
                    return;
                }
            }
        }
    }

    /// Expands `Σ c · rows[r]` into a combination of multiples.
    fn expand_rows(&self, mut coeffs: BTreeMap<usize, Scalar>) -> Provenance {
        let mut out = Provenance::new();
        while let Some((r, a)) = coeffs.pop_last() {
            let row = &self.rows[r];
            let a = a.mul_ref(&row.scale);
            let mut single = Provenance::new();
            single.insert(row.multiple, a.clone());
            axpy(&mut out, &single, &Scalar::one());
            for (s, c) in &row.steps {
                let mut t = BTreeMap::new();
                t.insert(*s, c.clone());
                axpy(&mut coeffs, &t, &a.neg_ref());
            }
        }
        out
    }

    /// Canonical remainder of `v` against the span and the combination of
    /// multiples that was subtracted.
    pub fn reduce(&self, v: &Vector) -> (Vector, Provenance) {
        let mut work = v.clone();
        let mut rem = Vector::new();
        let mut used: BTreeMap<usize, Scalar> = BTreeMap::new();
        while let Some((lead, c)) = work.iter().next_back().map(|(k, v)| (k.clone(), v.clone())) {
            match self.pivots.get(&lead) {
                Some(&r) => {
                    axpy(&mut work, &self.rows[r].vec, &c.neg_ref());
                    let mut t = BTreeMap::new();
                    t.insert(r, c);
                    axpy(&mut used, &t, &Scalar::one());
                }
                None => {
                    work.remove(&lead);
                    rem.insert(lead, c);
                }
            }
        }
        (rem, self.expand_rows(used))
    }

    fn multiple(&self, idx: usize) -> &(Word, usize, Word) {
        &self.multiples[idx]
    }
}

fn word_weight(weights: &Option<Vec<u64>>, w: &Word) -> u64 {
    match weights {
        Some(ws) => w.letters().iter().map(|&s| ws[s as usize]).sum(),
        None => 0,
    }
}

fn axpy<K: Ord + Clone>(y: &mut BTreeMap<K, Scalar>, x: &BTreeMap<K, Scalar>, a: &Scalar) {
    for (k, v) in x {
        let t = v.mul_ref(a);
        match y.get_mut(k) {
            Some(cur) => {
                let s = cur.add_ref(&t);
                if s.is_zero() {
                    y.remove(k);
                } else {
                    *cur = s;
                }
            }
            None => {
                y.insert(k.clone(), t);
            }
        }
    }
}

/// Membership of a one-leg element with default options.
pub fn ideal_member(p: &Presentation, a: &Element, degree_bound: usize) -> Result<MembershipCertificate, PresentationError> {
    ideal_member_with(p, a, &MembershipOptions::new(degree_bound))
}

pub fn ideal_member_with(
    p: &Presentation,
    a: &Element,
    opts: &MembershipOptions,
) -> Result<MembershipCertificate, PresentationError> {
    if a.legs() != 1 {
        return Err(PresentationError::Algebra(crate::freealg::AlgebraError::LegMismatch {
            left: a.legs(),
            right: 1,
        }));
    }
    tensor_ideal_member(p, a, opts)
}

/// Membership of an n-leg element in `Σ_i A ⊗ … ⊗ I ⊗ … ⊗ A`.
pub fn tensor_ideal_member(
    p: &Presentation,
    a: &Element,
    opts: &MembershipOptions,
) -> Result<MembershipCertificate, PresentationError> {
    Ok(tensor_ideal_member_batch(p, std::slice::from_ref(a), opts)?.pop().expect("one target"))
}

/// Membership of several targets against one shared span, grown from the
/// union of their words. The weight cap, when defaulted, is the largest
/// target weight.
pub fn tensor_ideal_member_batch(
    p: &Presentation,
    targets: &[Element],
    opts: &MembershipOptions,
) -> Result<Vec<MembershipCertificate>, PresentationError> {
    for a in targets {
        let degree = a.terms().flat_map(|(k, _)| k.iter().map(Word::len)).max().unwrap_or(0);
        if degree > opts.degree_bound {
            return Err(PresentationError::BoundTooSmall { degree, bound: opts.degree_bound });
        }
    }
    let mut span = ReducedSpan::new(p, opts.clone());
    let words: BTreeSet<Word> = targets.iter().flat_map(|a| a.terms().flat_map(|(k, _)| k.iter().cloned())).collect();
    span.extend(words);
    Ok(targets.iter().map(|a| certify(p, &span, a, opts)).collect())
}

fn certify(p: &Presentation, span: &ReducedSpan<'_>, a: &Element, opts: &MembershipOptions) -> MembershipCertificate {
    let legs = a.legs();
    let mut x = a.clone();
    let mut combination = Vec::new();
    for leg in 0..legs {
        let mut groups: BTreeMap<Key, Vector> = BTreeMap::new();
        for (k, c) in x.terms() {
            let mut ctx = k.clone();
            let w = std::mem::take(&mut ctx[leg]);
            groups.entry(ctx).or_default().insert(w, c.clone());
        }
        let mut next = Element::zero(legs);
        for (ctx, v) in groups {
            let (rem, comb) = span.reduce(&v);
            for (w, c) in rem {
                let mut key = ctx.clone();
                key[leg] = w;
                next.add_term(key, c);
            }
            for (idx, c) in comb {
                let (left, relation, right) = span.multiple(idx).clone();
                combination.push(Multiple { leg, context: ctx.clone(), left, relation, right, coeff: c });
            }
        }
        x = next;
    }
    let verdict = if x.is_zero() {
        Verdict::InIdeal
    } else if p.is_confluent() && !p.nf(&x).is_zero() {
        Verdict::NotInIdeal
    } else {
        Verdict::InconclusiveAtBound
    };
    MembershipCertificate {
        verdict,
        combination: if verdict == Verdict::InIdeal { combination } else { Vec::new() },
        degree_bound: opts.degree_bound,
        legs,
        span_size: span.len(),
        residue: if x.is_zero() { None } else { Some(x) },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::u_sl2;

    #[test]
    fn relation_is_member_with_replay() {
        let p = u_sl2();
        let r = p.relations()[0].clone();
        let cert = ideal_member(&p, &r, 2).unwrap();
        assert_eq!(cert.verdict, Verdict::InIdeal);
        assert_eq!(cert.replay(&p), r);
        let left = p.gen("e").mul(&r);
        let cert = ideal_member(&p, &left, 3).unwrap();
        assert_eq!(cert.verdict, Verdict::InIdeal);
        assert_eq!(cert.replay(&p), left);
    }

    #[test]
    fn generator_is_not_member() {
        let p = u_sl2();
        let cert = ideal_member(&p, &p.gen("h"), 3).unwrap();
        assert_eq!(cert.verdict, Verdict::NotInIdeal);
        assert!(matches!(ideal_member(&p, &p.elem("h h h"), 2), Err(PresentationError::BoundTooSmall { .. })));
    }

    #[test]
    fn tensor_membership() {
        let p = u_sl2();
        let r = p.relations()[1].clone();
        let x = r.tensor(&p.elem("e f")).add(&p.elem("h").tensor(&r));
        let cert = tensor_ideal_member(&p, &x, &MembershipOptions::new(4)).unwrap();
        assert_eq!(cert.verdict, Verdict::InIdeal);
        assert_eq!(cert.replay(&p), x);
    }
}
