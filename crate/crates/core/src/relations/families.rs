//! Shift-operator calculus on tensor templates and span comparison of
//! relation families.
//!
//! `σ_(j)` raises the level of the j-th slot of a word by one. The
//! generating-function families are derived from the shift relation by
//! moving σ-monomials across the bracket, so nothing here depends on how
//! the generating form is printed.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::instances::{serre, serre_order, shift_relation};
use super::{super_commutator, AlgElem, GenSym, RelContext, Sign, Word};
use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::linalg::SparseEchelon;
use crate::series::{Series, VarSpec};

/// Commutative polynomial in `σ_(1)..σ_(n)` with ℏ-polynomial coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftPoly {
    spec: Arc<VarSpec>,
    slots: usize,
    terms: BTreeMap<Vec<u32>, Series>,
}

impl ShiftPoly {
    pub fn zero(spec: &Arc<VarSpec>, slots: usize) -> ShiftPoly {
        ShiftPoly {
            spec: spec.clone(),
            slots,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(spec: &Arc<VarSpec>, slots: usize, c: Series) -> ShiftPoly {
        let mut p = ShiftPoly::zero(spec, slots);
        if !c.is_zero() {
            p.terms.insert(vec![0; slots], c);
        }
        p
    }

    pub fn one(spec: &Arc<VarSpec>, slots: usize) -> ShiftPoly {
        ShiftPoly::constant(spec, slots, Series::one(spec))
    }

    /// `σ_(j)`, zero-based slot.
    pub fn var(spec: &Arc<VarSpec>, slots: usize, j: usize) -> ShiftPoly {
        ShiftPoly::monomial(spec, &{
            let mut e = vec![0; slots];
            e[j] = 1;
            e
        })
    }

    pub fn monomial(spec: &Arc<VarSpec>, exps: &[u32]) -> ShiftPoly {
        let mut p = ShiftPoly::zero(spec, exps.len());
        p.terms.insert(exps.to_vec(), Series::one(spec));
        p
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Series)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Vec<u32>, c: &Series) -> Result<()> {
        let next = match self.terms.get(&e) {
            Some(x) => x.add(c)?,
            None => c.clone(),
        };
        if next.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, next);
        }
        Ok(())
    }

    pub fn add(&self, o: &ShiftPoly) -> Result<ShiftPoly> {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, o: &ShiftPoly) -> Result<ShiftPoly> {
        self.add(&o.scale(&Series::from_int(&self.spec, -1))?)
    }

    pub fn scale(&self, s: &Series) -> Result<ShiftPoly> {
        let mut out = ShiftPoly::zero(&self.spec, self.slots);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &c.mul(s)?)?;
        }
        Ok(out)
    }

    pub fn mul(&self, o: &ShiftPoly) -> Result<ShiftPoly> {
        let mut out = ShiftPoly::zero(&self.spec, self.slots);
        for (e, a) in &self.terms {
            for (f, b) in &o.terms {
                let g = e.iter().zip(f).map(|(x, y)| x + y).collect();
                out.add_term(g, &a.mul(b)?)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<ShiftPoly> {
        let mut out = ShiftPoly::one(&self.spec, self.slots);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Renames `σ_(j)` to `σ_(perm[j])`.
    pub fn permute(&self, perm: &[usize]) -> ShiftPoly {
        let mut out = ShiftPoly::zero(&self.spec, self.slots);
        for (e, c) in &self.terms {
            let mut f = vec![0; self.slots];
            for (j, x) in e.iter().enumerate() {
                f[perm[j]] = *x;
            }
            out.terms.insert(f, c.clone());
        }
        out
    }

    /// Power sum `Σ_j σ_(j)^k`.
    pub fn power_sum(spec: &Arc<VarSpec>, slots: usize, k: u32) -> Result<ShiftPoly> {
        let mut out = ShiftPoly::zero(spec, slots);
        for j in 0..slots {
            out = out.add(&ShiftPoly::var(spec, slots, j).pow(k)?)?;
        }
        Ok(out)
    }
}

/// Applies `poly(σ_(1),…,σ_(n))` to the word `template` of length `n`.
pub fn shift_apply(ctx: &RelContext, poly: &ShiftPoly, template: &[GenSym]) -> Result<AlgElem> {
    if template.len() != poly.slots {
        return Err(Error::InvalidArgument(format!(
            "{}-slot operator applied to a {}-letter template",
            poly.slots,
            template.len()
        )));
    }
    let mut out = ctx.zero();
    for (e, c) in &poly.terms {
        let w: Word = template.iter().zip(e).map(|(g, k)| g.shifted(*k as i32)).collect();
        for g in &w {
            ctx.check_level(g.level)?;
        }
        out.add_word(w, c)?;
    }
    Ok(out)
}

/// `ad^{(n)}`: each word `a_1…a_n` of `t` acts as `ad(a_1)∘…∘ad(a_n)` on `y`.
pub fn ad_tensor(t: &AlgElem, y: &AlgElem) -> Result<AlgElem> {
    let spec = t.spec().clone();
    let mut out = AlgElem::zero(&spec);
    for (w, c) in t.terms() {
        let mut acc = y.clone();
        for g in w.iter().rev() {
            acc = super_commutator(&AlgElem::word(&spec, vec![*g]), &acc)?;
        }
        out = out.add(&acc.scale(c)?)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// `"a"` or `"b"`: the family containing the element.
    pub family: String,
    pub index: usize,
    pub element: Value,
}

/// Ranks and mutual containment of two spans over the (word, ℏ-power) basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanComparison {
    pub rank_a: usize,
    pub rank_b: usize,
    pub rank_union: usize,
    pub a_in_b: bool,
    pub b_in_a: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl SpanComparison {
    pub fn equal(&self) -> bool {
        self.a_in_b && self.b_in_a
    }
}

#[derive(Default)]
struct Coordinates {
    index: BTreeMap<(Word, i16), usize>,
}

impl Coordinates {
    fn vector(&mut self, e: &AlgElem) -> BTreeMap<usize, Coefficient> {
        let mut v = BTreeMap::new();
        for (key, c) in e.coordinates() {
            let n = self.index.len();
            let k = *self.index.entry(key).or_insert(n);
            v.insert(k, c);
        }
        v
    }
}

pub fn compare_spans(a: &[AlgElem], b: &[AlgElem]) -> SpanComparison {
    let mut coords = Coordinates::default();
    let va: Vec<_> = a.iter().map(|e| coords.vector(e)).collect();
    let vb: Vec<_> = b.iter().map(|e| coords.vector(e)).collect();
    let mut ea = SparseEchelon::new();
    let mut eb = SparseEchelon::new();
    let mut eu = SparseEchelon::new();
    for v in &va {
        ea.insert(v);
        eu.insert(v);
    }
    for v in &vb {
        eb.insert(v);
        eu.insert(v);
    }
    let out_a = va.iter().position(|v| !eb.contains(v));
    let out_b = vb.iter().position(|v| !ea.contains(v));
    let witness = out_a
        .map(|k| ("a", k, &a[k]))
        .or_else(|| out_b.map(|k| ("b", k, &b[k])))
        .map(|(f, k, e)| Witness {
            family: f.into(),
            index: k,
            element: e.to_json(),
        });
    SpanComparison {
        rank_a: ea.rank(),
        rank_b: eb.rank(),
        rank_union: eu.rank(),
        a_in_b: out_a.is_none(),
        b_in_a: out_b.is_none(),
        witness,
    }
}

/// Shift-relation instances `(r, s)` with `r + s ≤ deg`.
pub fn shift_instances(ctx: &RelContext, sign: Sign, i: usize, j: usize, deg: u32) -> Result<Vec<AlgElem>> {
    let mut out = Vec::new();
    for r in 0..=deg as i32 {
        for s in 0..=deg as i32 - r {
            out.push(shift_relation(ctx, sign, i, j, r, s)?);
        }
    }
    Ok(out)
}

/// Generating form of the shift relation for `i ≠ j`, with `A` a polynomial
/// in `(σ_i, σ_j)`:
///
/// `A·(σ_i − σ_j ∓ cℏ)·x_i x_j − ε·A·(σ_i − σ_j ± ε cℏ)·x_j x_i`,
///
/// `c = B_ij/2`, `ε = (−1)^{p(i)p(j)}`. On the reversed template σ_i acts
/// on the second slot.
pub fn generating_element(ctx: &RelContext, sign: Sign, i: usize, j: usize, a: &ShiftPoly) -> Result<AlgElem> {
    if i == j {
        return Err(Error::Inapplicable("generating form needs i ≠ j".into()));
    }
    let spec = ctx.spec();
    let eps = if ctx.datum.parity(i) * ctx.datum.parity(j) == 1 { -1 } else { 1 };
    let c = |k: i64| {
        ctx.hbar()
            .scale(&Coefficient::real(BigRational::new((k * ctx.datum.b(i, j)).into(), 2.into())))
    };
    let diff = ShiftPoly::var(spec, 2, 0).sub(&ShiftPoly::var(spec, 2, 1))?;
    let fwd = a.mul(&diff.sub(&ShiftPoly::constant(spec, 2, c(sign.factor())))?)?;
    let bwd = a
        .mul(&diff.add(&ShiftPoly::constant(spec, 2, c(eps * sign.factor())))?)?
        .permute(&[1, 0]);
    let xi = ctx.sym(sign, i, 0)?;
    let xj = ctx.sym(sign, j, 0)?;
    let f = shift_apply(ctx, &fwd, &[xi, xj])?;
    let b = shift_apply(ctx, &bwd, &[xj, xi])?;
    f.sub(&b.scale_int(eps))
}

/// Generating forms over the basis `(σ_i + σ_j)^p σ_j^q`, `p + q ≤ deg`.
pub fn generating_family(ctx: &RelContext, sign: Sign, i: usize, j: usize, deg: u32) -> Result<Vec<AlgElem>> {
    let spec = ctx.spec();
    let sum = ShiftPoly::var(spec, 2, 0).add(&ShiftPoly::var(spec, 2, 1))?;
    let sj = ShiftPoly::var(spec, 2, 1);
    let mut out = Vec::new();
    for p in 0..=deg {
        for q in 0..=deg - p {
            let a = sum.pow(p)?.mul(&sj.pow(q)?)?;
            out.push(generating_element(ctx, sign, i, j, &a)?);
        }
    }
    Ok(out)
}

/// `μ(B(σ_(1),σ_(2))(σ_(1) − σ_(2) ∓ d_i ℏ) x_i⊗x_i)` for an even node.
pub fn symmetric_element(ctx: &RelContext, sign: Sign, i: usize, b: &ShiftPoly) -> Result<AlgElem> {
    if ctx.datum.parity(i) == 1 {
        return Err(Error::Inapplicable("symmetrized form is stated for even nodes".into()));
    }
    let spec = ctx.spec();
    let shift = ctx.hbar().scale_int(sign.factor() * ctx.datum.d(i));
    let op = ShiftPoly::var(spec, 2, 0)
        .sub(&ShiftPoly::var(spec, 2, 1))?
        .sub(&ShiftPoly::constant(spec, 2, shift))?;
    let x = ctx.sym(sign, i, 0)?;
    shift_apply(ctx, &b.mul(&op)?, &[x, x])
}

/// Symmetric basis `e1^p e2^q` (`e1 = σ_(1)+σ_(2)`, `e2 = σ_(1)σ_(2)`),
/// `p + 2q ≤ deg`.
pub fn symmetric_family(ctx: &RelContext, sign: Sign, i: usize, deg: u32) -> Result<Vec<AlgElem>> {
    let spec = ctx.spec();
    let e1 = ShiftPoly::var(spec, 2, 0).add(&ShiftPoly::var(spec, 2, 1))?;
    let e2 = ShiftPoly::monomial(spec, &[1, 1]);
    let mut out = Vec::new();
    for q in 0..=deg / 2 {
        for p in 0..=deg - 2 * q {
            out.push(symmetric_element(ctx, sign, i, &e1.pow(p)?.mul(&e2.pow(q)?)?)?);
        }
    }
    Ok(out)
}

/// Serre instances over nondecreasing level tuples with sum `≤ deg`.
pub fn serre_instances(ctx: &RelContext, sign: Sign, i: usize, j: usize, l: i32, deg: u32) -> Result<Vec<AlgElem>> {
    let r = serre_order(ctx, i, j);
    let mut out = Vec::new();
    for t in multisets(r, deg) {
        let t: Vec<i32> = t.into_iter().map(|x| x as i32).collect();
        out.push(serre(ctx, sign, i, j, &t, l)?);
    }
    Ok(out)
}

/// `ad^{(n)}(A(σ_(1..n)) x_i^{⊗n}) x_{j,l}` for `A` running over products of
/// power sums of total degree `≤ deg`.
pub fn ad_family(ctx: &RelContext, sign: Sign, i: usize, j: usize, l: i32, n: usize, deg: u32) -> Result<Vec<AlgElem>> {
    let spec = ctx.spec();
    let x = ctx.sym(sign, i, 0)?;
    let y = ctx.gen(sign, j, l)?;
    let mut out = Vec::new();
    for lambda in partitions_up_to(deg) {
        let mut a = ShiftPoly::one(spec, n);
        for part in lambda {
            a = a.mul(&ShiftPoly::power_sum(spec, n, part)?)?;
        }
        let t = shift_apply(ctx, &a, &vec![x; n])?;
        out.push(ad_tensor(&t, &y)?);
    }
    Ok(out)
}

/// Nondecreasing tuples of length `n` with entries summing to `≤ deg`.
fn multisets(n: usize, deg: u32) -> Vec<Vec<u32>> {
    fn go(n: usize, min: u32, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let left = (n - cur.len()) as u32;
        let mut v = min;
        while v * left <= budget {
            cur.push(v);
            go(n, v, budget - v, cur, out);
            cur.pop();
            v += 1;
        }
    }
    let mut out = Vec::new();
    go(n, 0, deg, &mut Vec::new(), &mut out);
    out
}

/// Partitions (nonincreasing, positive parts) of every integer `0..=deg`.
fn partitions_up_to(deg: u32) -> Vec<Vec<u32>> {
    fn go(max: u32, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(cur.clone());
        for p in (1..=max.min(budget)).rev() {
            cur.push(p);
            go(p, budget - p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(deg, deg, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanDatum;

    fn ctx() -> RelContext {
        RelContext::new(CartanDatum::build(1, 1), 4, 2).unwrap()
    }

    #[test]
    fn shift_apply_raises_slots() {
        let c = ctx();
        let s = c.spec();
        let t = [c.sym(Sign::Plus, 1, 0).unwrap(), c.sym(Sign::Plus, 2, 0).unwrap()];
        let e = shift_apply(&c, &ShiftPoly::var(s, 2, 0), &t).unwrap();
        assert_eq!(e, AlgElem::word(s, vec![t[0].shifted(1), t[1]]));
        let d = ShiftPoly::var(s, 2, 0).sub(&ShiftPoly::var(s, 2, 1)).unwrap();
        let e = shift_apply(&c, &d, &t).unwrap();
        let want = AlgElem::word(s, vec![t[0].shifted(1), t[1]])
            .sub(&AlgElem::word(s, vec![t[0], t[1].shifted(1)]))
            .unwrap();
        assert_eq!(e, want);
        let big = ShiftPoly::monomial(s, &[5, 0]);
        assert!(matches!(shift_apply(&c, &big, &t), Err(Error::LevelOverflow { .. })));
    }

    #[test]
    fn monomial_generating_form_is_the_instance() {
        let c = ctx();
        let s = c.spec();
        for sign in Sign::both() {
            for (i, j) in [(2, 1), (2, 3), (3, 2), (1, 3)] {
                let a = ShiftPoly::monomial(s, &[2, 1]);
                let g = generating_element(&c, sign, i, j, &a).unwrap();
                assert_eq!(g, shift_relation(&c, sign, i, j, 2, 1).unwrap(), "({i},{j}) {sign}");
            }
        }
    }

    #[test]
    fn span_basics() {
        let c = ctx();
        let v = shift_relation(&c, Sign::Plus, 2, 1, 0, 1).unwrap();
        let w = shift_relation(&c, Sign::Plus, 2, 1, 1, 0).unwrap();
        let same = compare_spans(&[v.clone()], &[v.clone()]);
        assert!(same.equal());
        assert!(compare_spans(&[v.clone()], &[v.scale_int(2)]).equal());
        let diff = compare_spans(&[v.clone(), w.clone()], &[v]);
        assert!(!diff.equal() && diff.b_in_a && !diff.a_in_b);
        assert_eq!((diff.rank_a, diff.rank_b, diff.rank_union), (2, 1, 2));
        assert_eq!(diff.witness.unwrap().index, 1);
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(multisets(2, 2), vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 1]]);
        assert_eq!(partitions_up_to(3).len(), 7);
    }

    #[test]
    fn ad_family_matches_serre_span() {
        let c = ctx();
        for (i, j) in [(1, 2), (2, 3), (1, 3)] {
            let n = serre_order(&c, i, j);
            let a = serre_instances(&c, Sign::Plus, i, j, 1, 2).unwrap();
            let b = ad_family(&c, Sign::Plus, i, j, 1, n, 2).unwrap();
            assert!(compare_spans(&a, &b).equal(), "({i},{j})");
        }
    }
}
