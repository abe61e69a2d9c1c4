//! Presented algebras: alphabet, relations, optional rewrite rules, and the
//! two reduction backends (rewriting and bounded ideal membership).

mod builtin;
mod ideal;
mod rewrite;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, RwLock};

use sha2::{Digest, Sha256};

use crate::freealg::{AlgebraError, Alphabet, Element, Word};
use crate::scalar::Scalar;

pub use builtin::{
    twisted_sl2, twisted_yangian, u_b_minus, u_sl2, yangian, YangianForm, SL2_ORDER,
};
pub use ideal::{
    ideal_member, ideal_member_with, tensor_ideal_member, tensor_ideal_member_batch, MembershipCertificate, MembershipOptions,
    Multiple, ReducedSpan, Verdict,
};
pub use rewrite::{ConfluenceFailure, ConfluenceReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("presentation {0} is not marked confluent")]
    NotConfluent(String),
    #[error("rewriting exceeded the step budget of {0}")]
    StepBudget(usize),
    #[error("element degree {degree} exceeds the degree bound {bound}")]
    BoundTooSmall { degree: usize, bound: usize },
    #[error("presentation file line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// An oriented rule `lhs -> rhs`; `rhs` is strictly smaller than `lhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Element,
}

pub struct Presentation {
    name: String,
    alphabet: Arc<Alphabet>,
    relations: Vec<Element>,
    rules: Vec<Rule>,
    confluent: bool,
    /// Per-letter mode index, used to cap relation multiples.
    modes: Option<Vec<u32>>,
    id: String,
    nf_cache: RwLock<HashMap<Word, Element>>,
}

impl std::fmt::Debug for Presentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Presentation")
            .field("name", &self.name)
            .field("generators", &self.alphabet.names())
            .field("relations", &self.relations.len())
            .field("rules", &self.rules.len())
            .field("confluent", &self.confluent)
            .finish()
    }
}

impl Presentation {
    pub fn new(name: &str, alphabet: Arc<Alphabet>, relations: Vec<Element>) -> Presentation {
        let mut p = Presentation {
            name: name.to_string(),
            alphabet,
            relations: relations.into_iter().filter(|r| !r.is_zero()).collect(),
            rules: Vec::new(),
            confluent: false,
            modes: None,
            id: String::new(),
            nf_cache: RwLock::new(HashMap::new()),
        };
        p.refresh_id();
        p
    }

    /// Adds rewrite rules. Panics if a rule does not decrease the word order.
    pub fn with_rules(mut self, rules: Vec<Rule>, confluent: bool) -> Presentation {
        for r in &rules {
            for (k, _) in r.rhs.terms() {
                assert!(k[0] < r.lhs, "rule right side must precede its left side");
            }
        }
        self.rules = rules;
        self.confluent = confluent;
        self.refresh_id();
        self
    }

    pub fn with_modes(mut self, modes: Vec<u32>) -> Presentation {
        assert_eq!(modes.len(), self.alphabet.len());
        self.modes = Some(modes);
        self
    }

    fn refresh_id(&mut self) {
        let mut h = Sha256::new();
        h.update(self.to_definition().as_bytes());
        self.id = hex::encode(&h.finalize()[..8]);
        self.nf_cache = RwLock::new(HashMap::new());
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Content hash of the definition; keys normal-form caches.
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn relations(&self) -> &[Element] {
        &self.relations
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_confluent(&self) -> bool {
        self.confluent
    }

    pub fn modes(&self) -> Option<&[u32]> {
        self.modes.as_deref()
    }

    pub fn gen(&self, name: &str) -> Element {
        Element::gen(self.alphabet.sym(name))
    }

    /// Parses a one-leg element from whitespace-separated factors and `+`
    /// separated terms, e.g. `2 e f - h`.
    pub fn elem(&self, s: &str) -> Element {
        parse_polynomial(&self.alphabet, s).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    /// Plain-text definition: alphabet line, relations and rules in element
    /// exchange format.
    pub fn to_definition(&self) -> String {
        let a = &self.alphabet;
        let mut out = String::new();
        writeln!(out, "name {}", self.name).unwrap();
        writeln!(out, "alphabet {}", a.names().join(" ")).unwrap();
        if let Some(m) = &self.modes {
            let ms: Vec<String> = m.iter().map(|x| x.to_string()).collect();
            writeln!(out, "modes {}", ms.join(" ")).unwrap();
        }
        for r in &self.relations {
            out.push_str("relation\n");
            out.push_str(&r.to_exchange(&[a]));
            out.push_str("end\n");
        }
        for r in &self.rules {
            writeln!(out, "rule {}", a.format_word(&r.lhs)).unwrap();
            out.push_str(&r.rhs.to_exchange(&[a]));
            out.push_str("end\n");
        }
        if self.confluent {
            out.push_str("confluent\n");
        }
        out
    }

    pub fn from_definition(text: &str) -> Result<Presentation, PresentationError> {
        let perr = |line: usize, msg: &str| PresentationError::Parse { line, msg: msg.to_string() };
        let mut name = None;
        let mut alphabet: Option<Arc<Alphabet>> = None;
        let mut modes = None;
        let mut relations = Vec::new();
        let mut rules = Vec::new();
        let mut confluent = false;
        let lines: Vec<&str> = text.lines().collect();
        let mut i = 0;
        while i < lines.len() {
            let line = lines[i].trim();
            let ln = i + 1;
            i += 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (head, rest) = line.split_once(' ').unwrap_or((line, ""));
            match head {
                "name" => name = Some(rest.trim().to_string()),
                "alphabet" => {
                    let names: Vec<&str> = rest.split_whitespace().collect();
                    alphabet = Some(Alphabet::new(name.as_deref().unwrap_or("anon"), &names));
                }
                "modes" => {
                    let m: Result<Vec<u32>, _> = rest.split_whitespace().map(str::parse).collect();
                    modes = Some(m.map_err(|_| perr(ln, "bad mode list"))?);
                }
                "relation" | "rule" => {
                    let a = alphabet.as_ref().ok_or_else(|| perr(ln, "alphabet must come first"))?;
                    let start = i;
                    while i < lines.len() && lines[i].trim() != "end" {
                        i += 1;
                    }
                    if i == lines.len() {
                        return Err(perr(ln, "missing end"));
                    }
                    let body = lines[start..i].join("\n");
                    i += 1;
                    let e = Element::from_exchange(&body, 1, &[a]).map_err(|err| match err {
                        AlgebraError::Parse { line, msg } => perr(start + line, &msg),
                        other => PresentationError::Algebra(other),
                    })?;
                    if head == "relation" {
                        relations.push(e);
                    } else {
                        rules.push(Rule { lhs: a.parse_word(rest)?, rhs: e });
                    }
                }
                "confluent" => confluent = true,
                _ => return Err(perr(ln, "unknown directive")),
            }
        }
        let alphabet = alphabet.ok_or_else(|| perr(0, "no alphabet"))?;
        let mut p = Presentation::new(name.as_deref().unwrap_or("anon"), alphabet, relations);
        if !rules.is_empty() {
            p = p.with_rules(rules, confluent);
        }
        if let Some(m) = modes {
            p = p.with_modes(m);
        }
        Ok(p)
    }
}

/// Parses `c1 w1 + c2 w2 - ...` where each term is an optional rational
/// coefficient followed by generator names. Scalar coefficients with
/// variables must be parenthesized: `(2*xi) h f`.
pub fn parse_polynomial(a: &Alphabet, s: &str) -> Result<Element, AlgebraError> {
    let mut out = Element::zero(1);
    let toks: Vec<String> = tokenize(s);
    let mut i = 0;
    let mut sign = 1i64;
    let perr = |msg: String| AlgebraError::Parse { line: 1, msg };
    while i < toks.len() {
        match toks[i].as_str() {
            "+" => {
                i += 1;
                continue;
            }
            "-" => {
                sign = -sign;
                i += 1;
                continue;
            }
            _ => {}
        }
        let mut c = Scalar::from_int(sign);
        let mut w = Vec::new();
        while i < toks.len() && toks[i] != "+" && toks[i] != "-" {
            let t = &toks[i];
            if t.starts_with('(') || t.chars().next().is_some_and(|ch| ch.is_ascii_digit()) {
                let v: Scalar = t.parse().map_err(|e| perr(format!("{t}: {e}")))?;
                c = c.mul_ref(&v);
            } else {
                w.push(a.index(t).ok_or_else(|| AlgebraError::UnknownSymbol {
                    alphabet: a.id().to_string(),
                    name: t.clone(),
                })?);
            }
            i += 1;
        }
        out.add_term(vec![Word(w)], c);
        sign = 1;
    }
    Ok(out)
}

fn tokenize(s: &str) -> Vec<String> {
    let mut toks = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '+' || c == '-' {
            toks.push(c.to_string());
            i += 1;
        } else if c == '(' {
            let mut depth = 0;
            let start = i;
            while i < chars.len() {
                if chars[i] == '(' {
                    depth += 1;
                } else if chars[i] == ')' {
                    depth -= 1;
                    if depth == 0 {
                        i += 1;
                        break;
                    }
                }
                i += 1;
            }
            toks.push(chars[start..i].iter().collect());
        } else {
            let start = i;
            while i < chars.len() && !chars[i].is_whitespace() && chars[i] != '+' && chars[i] != '-' && chars[i] != '(' {
                i += 1;
            }
            toks.push(chars[start..i].iter().collect());
        }
    }
    toks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn definition_round_trip() {
        let p = u_sl2();
        let text = p.to_definition();
        let q = Presentation::from_definition(&text).unwrap();
        assert_eq!(q.to_definition(), text);
        assert_eq!(q.id(), p.id());
        assert!(q.is_confluent());
    }

    #[test]
    fn polynomial_parser() {
        let p = u_sl2();
        let x = p.elem("e f - f e - h");
        assert_eq!(x, p.relations()[0]);
        let y = p.elem("(eta/2) h h + 3");
        assert_eq!(y.constant_term(), Scalar::from_int(3));
    }
}
