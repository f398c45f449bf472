//! Drinfeld root data and partial-fraction sums over it.
//!
//! A root is `c + x` for a rational `c` and an optional formal variable `x`.
//! Pure rationals give identity-testing points, pure variables give formal
//! roots, and the shifted form `1 + x` keeps a formal root invertible.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coeff::{fmt_rational, parse_rational};
use crate::error::{Error, Result};
use crate::series::{Series, VarSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub constant: BigRational,
    pub var: Option<String>,
}

impl Root {
    pub fn rational(q: BigRational) -> Root {
        Root { constant: q, var: None }
    }

    pub fn int(n: i64) -> Root {
        Self::rational(BigRational::from_integer(n.into()))
    }

    pub fn formal(name: &str) -> Root {
        Root {
            constant: BigRational::zero(),
            var: Some(name.to_string()),
        }
    }

    pub fn shifted(c: i64, name: &str) -> Root {
        Root {
            constant: BigRational::from_integer(c.into()),
            var: Some(name.to_string()),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.var.is_none()
    }

    pub fn to_series(&self, spec: &Arc<VarSpec>) -> Result<Series> {
        let c = Series::from_rational(spec, self.constant.clone());
        match &self.var {
            Some(v) => c.add(&Series::var(spec, v)?),
            None => Ok(c),
        }
    }

    /// Parses `p/q`, a variable name, or `c+name`.
    pub fn parse(s: &str) -> Result<Root> {
        let s = s.trim();
        if let Some((c, v)) = s.split_once('+') {
            let v = v.trim();
            check_name(v)?;
            return Ok(Root {
                constant: parse_rational(c)?,
                var: Some(v.to_string()),
            });
        }
        if s.starts_with(|ch: char| ch.is_ascii_alphabetic() || ch == '_') {
            check_name(s)?;
            Ok(Root::formal(s))
        } else {
            Ok(Root::rational(parse_rational(s)?))
        }
    }
}

fn check_name(s: &str) -> Result<()> {
    let ok = s.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(Error::Parse(format!("bad variable name {s:?}")))
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.var, self.constant.is_zero()) {
            (None, _) => write!(f, "{}", fmt_rational(&self.constant)),
            (Some(v), true) => write!(f, "{v}"),
            (Some(v), false) => write!(f, "{}+{v}", fmt_rational(&self.constant)),
        }
    }
}

impl Serialize for Root {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Root {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Root::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Roots of one node: numerator roots `a` and denominator roots `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRoots {
    pub node: usize,
    pub a: Vec<Root>,
    pub b: Vec<Root>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub qloop: bool,
}

impl NodeRoots {
    pub fn new(node: usize, a: Vec<Root>, b: Vec<Root>) -> Result<NodeRoots> {
        let r = NodeRoots {
            node,
            a,
            b,
            qloop: false,
        };
        r.validate()?;
        Ok(r)
    }

    /// Formal roots `a_1..a_N`, `b_1..b_N` with the given prefix.
    pub fn formal(node: usize, n: usize, prefix: &str) -> NodeRoots {
        NodeRoots {
            node,
            a: (1..=n).map(|p| Root::formal(&format!("{prefix}a{p}"))).collect(),
            b: (1..=n).map(|p| Root::formal(&format!("{prefix}b{p}"))).collect(),
            qloop: false,
        }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.len() != self.b.len() {
            return Err(Error::InvalidArgument(format!(
                "node {}: {} numerator roots vs {} denominator roots",
                self.node,
                self.a.len(),
                self.b.len()
            )));
        }
        Ok(())
    }

    pub fn is_rational(&self) -> bool {
        self.a.iter().chain(&self.b).all(Root::is_rational)
    }

    /// Formal variable names in first-appearance order.
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in self.a.iter().chain(&self.b) {
            if let Some(v) = &r.var {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
        out
    }

    pub fn series(&self, spec: &Arc<VarSpec>) -> Result<(Vec<Series>, Vec<Series>)> {
        let a = self.a.iter().map(|r| r.to_series(spec)).collect::<Result<_>>()?;
        let b = self.b.iter().map(|r| r.to_series(spec)).collect::<Result<_>>()?;
        Ok((a, b))
    }
}

/// A quotient `num/den` kept uncleared so that formal roots, for which the
/// denominator has no constant term, can still be compared exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Cleared {
    pub num: Series,
    pub den: Series,
}

impl Cleared {
    /// The quotient as a series; needs an invertible denominator.
    pub fn value(&self) -> Result<Series> {
        if self.den.is_zero() {
            return Err(Error::Precondition("coincident denominator roots".into()));
        }
        self.num.mul(&self.den.inverse().map_err(|_| {
            Error::Precondition("denominator not invertible; compare cleared forms".into())
        })?)
    }

    /// Whether `self == other * den`, i.e. `other = num/den`.
    pub fn matches(&self, other: &Series) -> Result<bool> {
        Ok(other.mul(&self.den)? == self.num)
    }
}

/// `Σ_p w_p Π_{p′≠p} (b_p − a_{p′})/(b_p − b_{p′})` multiplied through by the
/// Vandermonde `V = Π_{p<p′} (b_p − b_{p′})`.
pub fn partial_fraction(
    spec: &Arc<VarSpec>,
    weights: &[Series],
    a: &[Series],
    b: &[Series],
) -> Result<Cleared> {
    let n = b.len();
    if weights.len() != n || a.len() != n {
        return Err(Error::InvalidArgument("mismatched root counts".into()));
    }
    let vandermonde = |skip: Option<usize>| -> Result<Series> {
        let mut v = Series::one(spec);
        for p in 0..n {
            for q in p + 1..n {
                if Some(p) == skip || Some(q) == skip {
                    continue;
                }
                v = v.mul(&b[p].sub(&b[q])?)?;
            }
        }
        Ok(v)
    };
    let den = vandermonde(None)?;
    let mut num = Series::zero(spec);
    for p in 0..n {
        // V / Π_{p′≠p}(b_p − b_{p′}) = (−1)^p · Π over pairs avoiding p
        let mut term = weights[p].mul(&vandermonde(Some(p))?)?;
        for q in 0..n {
            if q != p {
                term = term.mul(&b[p].sub(&a[q])?)?;
            }
        }
        if p % 2 == 1 {
            term = term.neg();
        }
        num = num.add(&term)?;
    }
    Ok(Cleared { num, den })
}

/// Rational variant returning a single coefficient; fails on coincident `b`.
pub fn partial_fraction_value(
    spec: &Arc<VarSpec>,
    weights: &[Series],
    a: &[Series],
    b: &[Series],
) -> Result<Series> {
    partial_fraction(spec, weights, a, b)?.value()
}

/// `Π_p x_p`.
pub fn product(xs: &[Series], spec: &Arc<VarSpec>) -> Result<Series> {
    xs.iter().try_fold(Series::one(spec), |acc, x| acc.mul(x))
}
