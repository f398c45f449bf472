//! Finite-dimensionality test for highest-weight data and recovery of the
//! Drinfeld polynomials by exact Hankel/Padé linear algebra.
//!
//! Series are coefficient lists `c_0, c_1, …` of an expansion in `w`, where
//! `w = u^{-1}` (additive side, or the plus series of the multiplicative side)
//! or `w = z` (minus series). Polynomials are ascending coefficient lists.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cartan::CartanDatum;
use crate::coeff::{fmt_rational, parse_rational};
use crate::error::{Error, Result};
use crate::linalg::{determinant, solve, Solution};

type Q = BigRational;

fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

// ---------------------------------------------------------------- polynomials

/// Drops trailing zeros.
pub fn trim(p: &[Q]) -> Vec<Q> {
    let mut v = p.to_vec();
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

pub fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `Π (u − r)` for the given roots.
pub fn from_roots(roots: &[Q]) -> Vec<Q> {
    roots
        .iter()
        .fold(vec![Q::one()], |acc, r| poly_mul(&acc, &[-r.clone(), Q::one()]))
}

/// `P(u + s)`.
pub fn shift_poly(p: &[Q], s: &Q) -> Vec<Q> {
    // Horner in the shifted variable
    let mut out: Vec<Q> = Vec::new();
    for c in p.iter().rev() {
        out = poly_mul(&out, &[s.clone(), Q::one()]);
        if out.is_empty() {
            out.push(Q::zero());
        }
        out[0] += c;
    }
    trim(&out)
}

/// `P(s z)`.
pub fn scale_poly(p: &[Q], s: &Q) -> Vec<Q> {
    let mut f = Q::one();
    p.iter()
        .map(|c| {
            let t = c * &f;
            f *= s;
            t
        })
        .collect()
}

pub fn poly_eval(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

/// Power-series quotient `num/den` to `n` coefficients; `den[0] ≠ 0`.
pub fn series_div(num: &[Q], den: &[Q], n: usize) -> Result<Vec<Q>> {
    let d0 = den.first().filter(|d| !d.is_zero()).ok_or(Error::DivisionByZero)?;
    let inv = d0.recip();
    let mut out: Vec<Q> = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = num.get(k).cloned().unwrap_or_else(Q::zero);
        for j in 1..=k.min(den.len().saturating_sub(1)) {
            acc -= &den[j] * &out[k - j];
        }
        out.push(acc * &inv);
    }
    Ok(out)
}

/// Expansion of `P/Q` in `u^{-1}` for `deg P ≤ deg Q`, `n` coefficients.
pub fn expand_at_infinity(p: &[Q], q: &[Q], n: usize) -> Result<Vec<Q>> {
    let (p, q) = (trim(p), trim(q));
    if q.is_empty() {
        return Err(Error::DivisionByZero);
    }
    let d = q.len() - 1;
    if p.len() > q.len() {
        return Err(Error::InvalidArgument("numerator degree exceeds denominator".into()));
    }
    let rev = |x: &[Q]| (0..=d).map(|j| x.get(d - j).cloned().unwrap_or_else(Q::zero)).collect::<Vec<_>>();
    series_div(&rev(&p), &rev(&q), n)
}

/// Expansion of `P/Q` around `z = 0`.
pub fn expand_at_zero(p: &[Q], q: &[Q], n: usize) -> Result<Vec<Q>> {
    series_div(p, q, n)
}

/// Forward map for a regular node on the additive side: coefficients of
/// `P(u+s)/P(u)` in `u^{-1}`.
pub fn additive_series(p: &[Q], s: &Q, n: usize) -> Result<Vec<Q>> {
    expand_at_infinity(&shift_poly(p, s), p, n)
}

/// Forward map for a regular node on the multiplicative side: plus and minus
/// expansions of `c·P(sz)/P(z)`.
pub fn multiplicative_series(p: &[Q], s: &Q, c: &Q, n: usize) -> Result<(Vec<Q>, Vec<Q>)> {
    let ps = scale_poly(p, s);
    let plus = expand_at_infinity(&ps, p, n)?;
    let minus = expand_at_zero(&ps, p, n)?;
    let sc = |v: Vec<Q>| v.into_iter().map(|x| x * c).collect();
    Ok((sc(plus), sc(minus)))
}

// ---------------------------------------------------------------- certificates

/// Why a node admits no polynomial of degree ≤ the bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `det [c_{i+j+1}]_{i,j ≤ D} ≠ 0`, so no ratio of degree ≤ D fits.
    HankelNonsingular { size: usize, det: String },
    /// For every degree `d ≤ D`, `rank A_d < rank [A_d | b_d]`.
    Inconsistent { ranks: Vec<(usize, usize, usize)> },
    /// The data ran out before a certificate could be formed.
    Unresolved,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Ratio {
    Found { p: Vec<Q>, q: Vec<Q> },
    None(Certificate),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Shifted {
    Found(Vec<Q>),
    None(Certificate),
}

fn need(c: &[Q], max_deg: usize) -> Result<()> {
    if c.len() < 2 * max_deg + 1 {
        return Err(Error::InsufficientCoefficients {
            needed: 2 * max_deg + 1,
            have: c.len(),
        });
    }
    Ok(())
}

/// Minimal monic `P/Q` of equal degree `≤ max_deg` matching every given
/// coefficient of a series in `u^{-1}` with constant term 1.
pub fn reconstruct_ratio(c: &[Q], max_deg: usize) -> Result<Ratio> {
    need(c, max_deg)?;
    if !c[0].is_one() {
        return Err(Error::Precondition("series must start with 1".into()));
    }
    let k = c.len();
    for d in 0..=max_deg {
        // Σ_{j=1..d} q̃_j c_{n−j} = −c_n for d < n < k
        let rows: Vec<Vec<Q>> = (d + 1..k).map(|n| (1..=d).map(|j| c[n - j].clone()).collect()).collect();
        let rhs: Vec<Q> = (d + 1..k).map(|n| -c[n].clone()).collect();
        let qt = if d == 0 {
            if rhs.iter().all(Zero::is_zero) {
                Some(Vec::new())
            } else {
                None
            }
        } else {
            match solve(&rows, &rhs) {
                Solution::Unique(x) | Solution::Many(x) => Some(x),
                Solution::Inconsistent { .. } => None,
            }
        };
        if let Some(qt) = qt {
            let mut qtil = vec![Q::one()];
            qtil.extend(qt);
            let ptil: Vec<Q> = (0..=d)
                .map(|n| (0..=n).map(|j| &qtil[j] * &c[n - j]).sum())
                .collect();
            // reverse to ascending powers of u
            let p: Vec<Q> = ptil.into_iter().rev().collect();
            let q: Vec<Q> = qtil.into_iter().rev().collect();
            return Ok(Ratio::Found { p, q });
        }
    }
    Ok(Ratio::None(hankel_certificate(c, max_deg)))
}

fn hankel_certificate(c: &[Q], max_deg: usize) -> Certificate {
    let size = max_deg + 1;
    if c.len() < 2 * size {
        return Certificate::Unresolved;
    }
    let h: Vec<Vec<Q>> = (0..size).map(|i| (0..size).map(|j| c[i + j + 1].clone()).collect()).collect();
    let det = determinant(&h);
    if det.is_zero() {
        Certificate::Unresolved
    } else {
        Certificate::HankelNonsingular {
            size,
            det: fmt_rational(&det),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftMode {
    /// `P(u + s)/P(u)`.
    Additive,
    /// `P(s z)/P(z)`, normalized to constant term 1 at `z = ∞`.
    Multiplicative,
}

/// Minimal monic `P` of degree `≤ max_deg` with `P(u+s)/P(u)` (or the
/// normalized `P(sz)/P(z)`) equal to the series in `u^{-1}`.
pub fn reconstruct_shifted(c: &[Q], shift: &Q, mode: ShiftMode, max_deg: usize) -> Result<Shifted> {
    need(c, max_deg)?;
    match mode {
        ShiftMode::Additive if shift.is_zero() => {
            return Err(Error::InvalidArgument("zero shift".into()))
        }
        ShiftMode::Multiplicative if shift.is_zero() || shift.is_one() || *shift == -Q::one() => {
            return Err(Error::InvalidArgument("multiplicative shift must not be 0 or ±1".into()))
        }
        _ => {}
    }
    if !c[0].is_one() {
        return Err(Error::Precondition("series must start with 1".into()));
    }
    let k = c.len();
    let mut ranks = Vec::new();
    for d in 0..=max_deg {
        // lhs(w) = Σ_j p̃_j w^j L_j(w), so lhs = S(w)·Σ_j p̃_j w^j
        // additive:       L_j = (1 + s w)^{d−j}
        // multiplicative: L_j = s^{−j}
        let basis = |j: usize| -> Vec<Q> {
            let mut l = vec![Q::zero(); k];
            match mode {
                ShiftMode::Additive => {
                    let mut binom = Q::one();
                    let mut sp = Q::one();
                    for t in 0..=(d - j) {
                        if j + t < k {
                            l[j + t] = &binom * &sp;
                        }
                        binom = binom * qi((d - j - t) as i64) / qi(t as i64 + 1);
                        sp *= shift;
                    }
                }
                ShiftMode::Multiplicative => {
                    if j < k {
                        l[j] = shift.pow(-(j as i32));
                    }
                }
            }
            // subtract S(w) w^j
            for n in j..k {
                l[n] -= &c[n - j];
            }
            l
        };
        let cols: Vec<Vec<Q>> = (0..=d).map(basis).collect();
        // unknowns p̃_1..p̃_d, p̃_0 = 1 moves to the right-hand side
        let rows: Vec<Vec<Q>> = (1..k).map(|n| (1..=d).map(|j| cols[j][n].clone()).collect()).collect();
        let rhs: Vec<Q> = (1..k).map(|n| -cols[0][n].clone()).collect();
        let sol = if d == 0 {
            if rhs.iter().all(Zero::is_zero) {
                Solution::Unique(Vec::new())
            } else {
                Solution::Inconsistent { rank: 0, augmented_rank: 1 }
            }
        } else {
            solve(&rows, &rhs)
        };
        match sol {
            Solution::Unique(x) | Solution::Many(x) => {
                let mut pt = vec![Q::one()];
                pt.extend(x);
                return Ok(Shifted::Found(pt.into_iter().rev().collect()));
            }
            Solution::Inconsistent { rank, augmented_rank } => ranks.push((d, rank, augmented_rank)),
        }
    }
    Ok(Shifted::None(Certificate::Inconsistent { ranks }))
}

// ---------------------------------------------------------------- classify

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Yangian,
    Qloop,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeData {
    pub i: usize,
    /// `d_{i,k}` (additive) or `δ⁺_{i,k}` (multiplicative), `k = 0, 1, …`
    pub coeffs: Vec<String>,
    /// `δ⁻_{i,−k}`, `k = 0, 1, …`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs_minus: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HighestWeight {
    pub side: Side,
    #[serde(default)]
    pub hbar: Option<String>,
    #[serde(default)]
    pub q: Option<String>,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub max_deg: Option<usize>,
    pub nodes: Vec<NodeData>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodePolys {
    pub i: usize,
    #[serde(rename = "P")]
    pub p: Vec<String>,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rejection {
    pub i: usize,
    pub reason: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrinfeldResult {
    pub finite_dimensional: bool,
    pub polys: Vec<NodePolys>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rejected: Vec<Rejection>,
}

fn parse_all(xs: &[String]) -> Result<Vec<Q>> {
    xs.iter().map(|s| parse_rational(s)).collect()
}

fn show(p: &[Q]) -> Vec<String> {
    p.iter().map(fmt_rational).collect()
}

impl HighestWeight {
    /// The datum from `m`, `n`; a lone `m` or `n` is completed from the node
    /// count, and with neither the odd node is taken to be node 1.
    pub fn datum(&self) -> Result<CartanDatum> {
        let size = self.nodes.len();
        if size == 0 {
            return Err(Error::InvalidArgument("no nodes".into()));
        }
        let (m, n) = match (self.m, self.n) {
            (Some(m), Some(n)) => (m, n),
            (Some(m), None) => (m, (size - 1).checked_sub(m).ok_or_else(|| bad_size(size))?),
            (None, Some(n)) => ((size - 1).checked_sub(n).ok_or_else(|| bad_size(size))?, n),
            (None, None) => (0, size - 1),
        };
        let datum = CartanDatum::build(m, n);
        if datum.size() != size {
            return Err(bad_size(size));
        }
        Ok(datum)
    }

    fn hbar_value(&self) -> Result<Q> {
        let h = match &self.hbar {
            Some(s) => parse_rational(s)?,
            None => Q::one(),
        };
        if h <= Q::zero() {
            return Err(Error::InvalidArgument("hbar must be positive".into()));
        }
        Ok(h)
    }

    fn q_value(&self) -> Result<Q> {
        let q = match &self.q {
            Some(s) => parse_rational(s)?,
            None => qi(2),
        };
        if q.is_zero() || q.is_one() || q == -Q::one() {
            return Err(Error::InvalidArgument("q must not be 0 or ±1".into()));
        }
        Ok(q)
    }
}

fn bad_size(size: usize) -> Error {
    Error::InvalidArgument(format!("{size} nodes do not match the Cartan datum"))
}

/// Runs the per-node reconstruction; `max_deg` overrides the input's bound.
pub fn classify(hw: &HighestWeight, max_deg: Option<usize>) -> Result<DrinfeldResult> {
    let datum = hw.datum()?;
    let mut seen = vec![false; datum.size()];
    for nd in &hw.nodes {
        if nd.i == 0 || nd.i > datum.size() || std::mem::replace(&mut seen[nd.i - 1], true) {
            return Err(Error::InvalidArgument(format!("node {} missing, repeated or out of range", nd.i)));
        }
    }
    let mut nodes: Vec<&NodeData> = hw.nodes.iter().collect();
    nodes.sort_by_key(|nd| nd.i);

    let mut out = DrinfeldResult {
        finite_dimensional: true,
        polys: Vec::new(),
        rejected: Vec::new(),
    };
    for nd in nodes {
        let verdict = match hw.side {
            Side::Yangian => yangian_node(hw, &datum, nd, max_deg)?,
            Side::Qloop => qloop_node(hw, &datum, nd, max_deg)?,
        };
        match verdict {
            Ok(p) => out.polys.push(p),
            Err(r) => {
                out.finite_dimensional = false;
                out.rejected.push(r);
            }
        }
    }
    if !out.finite_dimensional {
        out.polys.clear();
    }
    Ok(out)
}

fn bound(hw: &HighestWeight, max_deg: Option<usize>, known: usize) -> usize {
    max_deg.or(hw.max_deg).unwrap_or(known.saturating_sub(1) / 2)
}

type Verdict = std::result::Result<NodePolys, Rejection>;

fn reject(i: usize, reason: &str, certificate: Option<Certificate>) -> Verdict {
    Err(Rejection {
        i,
        reason: reason.into(),
        certificate,
    })
}

fn yangian_node(hw: &HighestWeight, datum: &CartanDatum, nd: &NodeData, max_deg: Option<usize>) -> Result<Verdict> {
    let h = hw.hbar_value()?;
    let mut c = vec![Q::one()];
    c.extend(parse_all(&nd.coeffs)?.into_iter().map(|d| d * &h));
    let md = bound(hw, max_deg, c.len());
    let i = nd.i;
    if i == datum.odd_node() {
        Ok(match reconstruct_ratio(&c, md)? {
            Ratio::Found { p, q } => Ok(NodePolys {
                i,
                p: show(&p),
                q: Some(show(&q)),
                scalar: None,
            }),
            Ratio::None(cert) => reject(i, "no ratio of bounded degree", Some(cert)),
        })
    } else {
        let s = qi(datum.b(i, i)) * &h / qi(2);
        Ok(match reconstruct_shifted(&c, &s, ShiftMode::Additive, md)? {
            Shifted::Found(p) => Ok(NodePolys {
                i,
                p: show(&p),
                q: None,
                scalar: None,
            }),
            Shifted::None(cert) => reject(i, "no shifted polynomial of bounded degree", Some(cert)),
        })
    }
}

fn qloop_node(hw: &HighestWeight, datum: &CartanDatum, nd: &NodeData, max_deg: Option<usize>) -> Result<Verdict> {
    let q = hw.q_value()?;
    let plus = parse_all(&nd.coeffs)?;
    let minus = nd.coeffs_minus.as_deref().map(parse_all).transpose()?;
    let i = nd.i;
    let Some(c0) = plus.first().filter(|x| !x.is_zero()).cloned() else {
        return Ok(reject(i, "vanishing leading plus coefficient", None));
    };
    let normed: Vec<Q> = plus.iter().map(|x| x / &c0).collect();
    let md = bound(hw, max_deg, normed.len());
    let (p, qpoly, scalar) = if i == datum.odd_node() {
        match reconstruct_ratio(&normed, md)? {
            Ratio::Found { p, q } => (p, Some(q), c0),
            Ratio::None(cert) => return Ok(reject(i, "no ratio of bounded degree", Some(cert))),
        }
    } else {
        let s = q.pow(datum.b(i, i) as i32);
        match reconstruct_shifted(&normed, &s, ShiftMode::Multiplicative, md)? {
            Shifted::Found(p) => {
                let d = (p.len() - 1) as i32;
                let scalar = &c0 / s.pow(d);
                (p, None, scalar)
            }
            Shifted::None(cert) => {
                return Ok(reject(i, "no scaled polynomial of bounded degree", Some(cert)))
            }
        }
    };
    let den = qpoly.clone().unwrap_or_else(|| p.clone());
    let num = match &qpoly {
        Some(_) => p.clone(),
        None => scale_poly(&p, &q.pow(datum.b(i, i) as i32)),
    };
    if p[0].is_zero() || den[0].is_zero() {
        return Ok(reject(i, "polynomial with zero free term", None));
    }
    if let Some(minus) = minus {
        let expect = expand_at_zero(&num, &den, minus.len())?;
        if let Some(k) = (0..minus.len()).find(|&k| &expect[k] * &scalar != minus[k]) {
            return Ok(reject(
                i,
                &format!("plus and minus series disagree at z^{k}"),
                None,
            ));
        }
    }
    Ok(Ok(NodePolys {
        i,
        p: show(&p),
        q: qpoly.map(|x| show(&x)),
        scalar: Some(fmt_rational(&scalar)),
    }))
}
