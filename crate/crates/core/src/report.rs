//! Verification reports: one case per parameter tuple, with the first
//! differing monomial when a comparison fails.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::relations::{word_string, AlgElem};
use crate::roots::Cleared;
use crate::series::Series;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FirstDiff {
    /// Variable names, one per monomial slot.
    pub vars: Vec<String>,
    pub monomial: Vec<i32>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub params: BTreeMap<String, Value>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_diff: Option<FirstDiff>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Case {
    pub fn new(params: BTreeMap<String, Value>) -> Case {
        Case {
            params,
            pass: true,
            first_diff: None,
            note: None,
        }
    }

    /// Records a series comparison; later failures do not overwrite the first.
    pub fn compare(&mut self, lhs: &Series, rhs: &Series) -> bool {
        match lhs.first_diff(rhs) {
            None => true,
            Some(d) => {
                if self.pass {
                    let spec = lhs.spec();
                    self.first_diff = Some(FirstDiff {
                        vars: (0..spec.arity()).map(|s| spec.name_of(s).to_string()).collect(),
                        monomial: d.monomial,
                        lhs: d.lhs.to_string(),
                        rhs: d.rhs.to_string(),
                    });
                }
                self.pass = false;
                false
            }
        }
    }

    /// Compares `x` against a cleared quotient through `x·den = num`,
    /// keeping graded degree `≤ t`.
    pub fn compare_cleared(&mut self, x: &Series, c: &Cleared, t: i32) -> crate::Result<bool> {
        let lhs = x.mul(&c.den)?.truncate_degree(t);
        Ok(self.compare(&lhs, &c.num.truncate_degree(t)))
    }

    /// Two cleared quotients compared by cross-multiplication.
    pub fn compare_cross(&mut self, a: &Cleared, b: &Cleared, t: i32) -> crate::Result<bool> {
        let l = a.num.mul(&b.den)?.truncate_degree(t);
        let r = b.num.mul(&a.den)?.truncate_degree(t);
        Ok(self.compare(&l, &r))
    }

    /// Compares two free-algebra elements; a mismatch is noted at the first
    /// differing word.
    pub fn compare_elem(&mut self, lhs: &AlgElem, rhs: &AlgElem) -> bool {
        let diff = match lhs.sub(rhs) {
            Ok(d) => d,
            Err(e) => {
                self.fail(format!("error: {e}"));
                return false;
            }
        };
        let Some((w, _)) = diff.terms().next() else {
            return true;
        };
        self.fail(format!("differs at {}: {} vs {}", word_string(w), lhs.coeff(w), rhs.coeff(w)));
        false
    }

    pub fn fail(&mut self, note: impl Into<String>) {
        self.pass = false;
        self.note.get_or_insert_with(|| note.into());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.note = Some(note.into());
    }
}

/// Builds a params map from `(key, value)` pairs.
#[macro_export]
macro_rules! params {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut m = ::std::collections::BTreeMap::<String, ::serde_json::Value>::new();
        $( m.insert($k.to_string(), ::serde_json::json!($v)); )*
        m
    }};
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: Vec<Case>,
}

impl SuiteReport {
    pub fn new(suite: &str, mut cases: Vec<Case>) -> SuiteReport {
        cases.sort_by(|a, b| param_key(&a.params).cmp(&param_key(&b.params)));
        SuiteReport {
            suite: suite.to_string(),
            cases,
        }
    }

    pub fn pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> usize {
        self.cases.iter().filter(|c| !c.pass).count()
    }

    /// Stable, diff-friendly table.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "suite {}: {} ({}/{} cases pass)",
            self.suite,
            if self.pass() { "PASS" } else { "FAIL" },
            self.cases.len() - self.failures(),
            self.cases.len()
        );
        for c in &self.cases {
            let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = write!(s, "  {:<4} {}", if c.pass { "ok" } else { "FAIL" }, params.join(" "));
            if let Some(d) = &c.first_diff {
                let mono: Vec<String> = d
                    .vars
                    .iter()
                    .zip(&d.monomial)
                    .filter(|(_, e)| **e != 0)
                    .map(|(v, e)| format!("{v}^{e}"))
                    .collect();
                let mono = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
                let _ = write!(s, "  first diff at {mono}: {} vs {}", d.lhs, d.rhs);
            }
            if let Some(n) = &c.note {
                let _ = write!(s, "  ({n})");
            }
            s.push('\n');
        }
        s
    }
}

/// Sort key: params rendered in key order, numbers compared numerically.
fn param_key(p: &BTreeMap<String, Value>) -> Vec<(String, ParamOrd)> {
    p.iter()
        .map(|(k, v)| {
            let o = match v {
                Value::Number(n) if n.as_i64().is_some() => ParamOrd::Num(n.as_i64().unwrap_or(0)),
                other => ParamOrd::Str(other.to_string()),
            };
            (k.clone(), o)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum ParamOrd {
    Num(i64),
    Str(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::VarSpec;

    #[test]
    fn first_diff_is_recorded_once() {
        let spec = VarSpec::graded(&["x"], 3).unwrap();
        let x = Series::var(&spec, "x").unwrap();
        let mut c = Case::new(params! {"k" => 1});
        assert!(c.compare(&x, &x));
        assert!(!c.compare(&x, &x.scale_int(2)));
        assert!(!c.compare(&x, &Series::zero(&spec)));
        let d = c.first_diff.clone().unwrap();
        assert_eq!((d.monomial, d.lhs.as_str(), d.rhs.as_str()), (vec![1], "1", "2"));
        let r = SuiteReport::new("demo", vec![c, Case::new(params! {"k" => -2})]);
        assert!(!r.pass());
        let text = r.to_text();
        assert!(text.starts_with("suite demo: FAIL (1/2 cases pass)"));
        assert!(text.lines().nth(1).unwrap().contains("k=-2"));
        assert!(text.contains("first diff at x^1: 1 vs 2"));
    }
}
