//! Free associative superalgebra on the symbols `x^±_{i,k}` (also used for
//! `E_{i,k}`, `F_{i,k}` with signed levels), with coefficients polynomial
//! in ℏ.
//!
//! Relations are built as formal elements (left side minus right side) and
//! compared through exact linear algebra over the (word, ℏ-power) basis.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cartan::CartanDatum;
use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::series::{Series, VarSpec, HBAR};

pub mod families;
pub mod instances;

pub use families::{ShiftPoly, SpanComparison};
pub use instances::Relation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn both() -> [Sign; 2] {
        [Sign::Plus, Sign::Minus]
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GenSym {
    pub sign: Sign,
    pub node: usize,
    pub level: i32,
    pub odd: bool,
}

impl GenSym {
    pub fn parity(&self) -> u8 {
        u8::from(self.odd)
    }

    pub fn shifted(&self, by: i32) -> GenSym {
        GenSym {
            level: self.level + by,
            ..*self
        }
    }
}

impl fmt::Display for GenSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}[{},{}]", self.sign, self.node, self.level)
    }
}

pub type Word = Vec<GenSym>;

pub fn word_parity(w: &[GenSym]) -> u8 {
    w.iter().map(GenSym::parity).sum::<u8>() % 2
}

pub fn word_string(w: &[GenSym]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Datum, level range and ℏ truncation shared by all elements of one check.
#[derive(Clone, Debug)]
pub struct RelContext {
    pub datum: CartanDatum,
    /// Levels must lie in `0..=R`, or `−R..=R` for loop generators.
    pub level_bound: i32,
    pub signed_levels: bool,
    spec: Arc<VarSpec>,
}

impl RelContext {
    pub fn new(datum: CartanDatum, level_bound: u32, hbar_order: u32) -> Result<RelContext> {
        Ok(RelContext {
            datum,
            level_bound: level_bound as i32,
            signed_levels: false,
            spec: VarSpec::graded(&[HBAR], hbar_order)?,
        })
    }

    /// Same context with levels allowed down to `−R`.
    pub fn with_signed_levels(mut self) -> RelContext {
        self.signed_levels = true;
        self
    }

    pub fn spec(&self) -> &Arc<VarSpec> {
        &self.spec
    }

    pub fn check_level(&self, level: i32) -> Result<()> {
        let lo = if self.signed_levels { -self.level_bound } else { 0 };
        if (lo..=self.level_bound).contains(&level) {
            Ok(())
        } else {
            Err(Error::LevelOverflow {
                level,
                bound: self.level_bound,
            })
        }
    }

    pub fn sym(&self, sign: Sign, node: usize, level: i32) -> Result<GenSym> {
        self.datum.check(node)?;
        self.check_level(level)?;
        Ok(GenSym {
            sign,
            node,
            level,
            odd: self.datum.parity(node) == 1,
        })
    }

    pub fn gen(&self, sign: Sign, node: usize, level: i32) -> Result<AlgElem> {
        Ok(AlgElem::word(&self.spec, vec![self.sym(sign, node, level)?]))
    }

    pub fn hbar(&self) -> Series {
        Series::var(&self.spec, HBAR).expect("context spec has hbar")
    }

    pub fn zero(&self) -> AlgElem {
        AlgElem::zero(&self.spec)
    }
}

/// Finite combination of words; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgElem {
    spec: Arc<VarSpec>,
    terms: BTreeMap<Word, Series>,
}

impl AlgElem {
    pub fn zero(spec: &Arc<VarSpec>) -> AlgElem {
        AlgElem {
            spec: spec.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn word(spec: &Arc<VarSpec>, w: Word) -> AlgElem {
        let mut e = AlgElem::zero(spec);
        e.terms.insert(w, Series::one(spec));
        e
    }

    pub fn from_terms(spec: &Arc<VarSpec>, terms: impl IntoIterator<Item = (Word, Series)>) -> Result<AlgElem> {
        let mut e = AlgElem::zero(spec);
        for (w, c) in terms {
            e.add_word(w, &c)?;
        }
        Ok(e)
    }

    pub fn spec(&self) -> &Arc<VarSpec> {
        &self.spec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Series)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[GenSym]) -> Series {
        self.terms.get(w).cloned().unwrap_or_else(|| Series::zero(&self.spec))
    }

    pub fn add_word(&mut self, w: Word, c: &Series) -> Result<()> {
        let cur = self.coeff(&w);
        let next = cur.add(c)?;
        if next.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, next);
        }
        Ok(())
    }

    pub fn add(&self, o: &AlgElem) -> Result<AlgElem> {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_word(w.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, o: &AlgElem) -> Result<AlgElem> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> AlgElem {
        AlgElem {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &Series) -> Result<AlgElem> {
        let mut out = AlgElem::zero(&self.spec);
        for (w, c) in &self.terms {
            out.add_word(w.clone(), &c.mul(s)?)?;
        }
        Ok(out)
    }

    pub fn scale_int(&self, n: i64) -> AlgElem {
        if n == 0 {
            return AlgElem::zero(&self.spec);
        }
        AlgElem {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.scale_int(n))).collect(),
        }
    }

    /// Concatenation product.
    pub fn mul(&self, o: &AlgElem) -> Result<AlgElem> {
        let mut out = AlgElem::zero(&self.spec);
        for (u, a) in &self.terms {
            for (v, b) in &o.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_word(w, &a.mul(b)?)?;
            }
        }
        Ok(out)
    }

    /// Common parity of all words, `None` if mixed or zero.
    pub fn parity(&self) -> Option<u8> {
        let mut it = self.terms.keys().map(|w| word_parity(w));
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// `(word, ℏ-power) ↦ coefficient`, one coordinate per pair.
    pub fn coordinates(&self) -> Vec<((Word, i16), Coefficient)> {
        let h = self.spec.hbar_index().unwrap_or(0);
        let mut out = Vec::new();
        for (w, c) in &self.terms {
            for (m, x) in c.terms() {
                out.push(((w.clone(), m[h]), x.clone()));
            }
        }
        out
    }

    /// Largest level appearing in any word.
    pub fn max_level(&self) -> Option<i32> {
        self.terms.keys().flatten().map(|g| g.level).max()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| json!({"word": word_string(w), "coeff": c.to_string()}))
                .collect(),
        )
    }
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("({c})·{}", word_string(w)))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `[a,b] = ab − (−1)^{p(a)p(b)} ba`, extended bilinearly over words.
pub fn super_commutator(a: &AlgElem, b: &AlgElem) -> Result<AlgElem> {
    q_commutator(a, b, &Series::one(a.spec()))
}

/// `[a,b]_q = ab − (−1)^{p(a)p(b)} q·ba`, extended bilinearly over words.
pub fn q_commutator(a: &AlgElem, b: &AlgElem, q: &Series) -> Result<AlgElem> {
    let mut out = AlgElem::zero(a.spec());
    for (u, x) in a.terms() {
        for (v, y) in b.terms() {
            let c = x.mul(y)?;
            let mut uv = u.clone();
            uv.extend_from_slice(v);
            out.add_word(uv, &c)?;
            let mut vu = v.clone();
            vu.extend_from_slice(u);
            let mut back = c.mul(q)?;
            if word_parity(u) * word_parity(v) == 0 {
                back = back.neg();
            }
            out.add_word(vu, &back)?;
        }
    }
    Ok(out)
}
