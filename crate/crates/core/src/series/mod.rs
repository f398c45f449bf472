//! Truncated multivariate formal power series over ℚ(i).
//!
//! A [`Series`] lives in a [`VarSpec`]: an ordered list of *graded* variables
//! sharing one total-degree bound `T`, plus an optional *loop* variable with
//! its own order bound `U`. The loop variable stands for `u⁻¹` or `z^{∓1}`,
//! so its exponents are non-negative. The graded variable named `hbar` may
//! carry negative exponents down to `hbar_floor`.
//!
//! Terms beyond either bound are dropped on every operation and zero
//! coefficients are never stored, so structural equality is semantic
//! equality at the given truncation.

mod analytic;
mod borel;
mod json;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};

pub use borel::{borel, borel_eval, inverse_borel};
pub use json::SeriesJson;

/// Name of the graded variable allowed to take negative exponents.
pub const HBAR: &str = "hbar";

pub type Monomial = SmallVec<[i16; 8]>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSpec {
    graded: Vec<String>,
    total_order: u32,
    loop_var: Option<String>,
    loop_order: u32,
    hbar_floor: i32,
}

impl VarSpec {
    pub fn graded(vars: &[&str], total_order: u32) -> Result<Arc<VarSpec>> {
        Self::build(
            vars.iter().map(|s| s.to_string()).collect(),
            total_order,
            None,
            0,
            0,
        )
    }

    pub fn build(
        graded: Vec<String>,
        total_order: u32,
        loop_var: Option<String>,
        loop_order: u32,
        hbar_floor: i32,
    ) -> Result<Arc<VarSpec>> {
        if hbar_floor > 0 {
            return Err(Error::InvalidSpec(format!("hbar_floor {hbar_floor} > 0")));
        }
        let mut seen: Vec<&str> = graded.iter().map(String::as_str).collect();
        if let Some(l) = &loop_var {
            seen.push(l);
        }
        let mut sorted = seen.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != seen.len() {
            return Err(Error::InvalidSpec(format!("duplicate variable names in {seen:?}")));
        }
        if seen.iter().any(|s| s.is_empty()) {
            return Err(Error::InvalidSpec("empty variable name".into()));
        }
        Ok(Arc::new(VarSpec {
            graded,
            total_order,
            loop_var,
            loop_order,
            hbar_floor,
        }))
    }

    pub fn with_loop(&self, name: &str, loop_order: u32) -> Result<Arc<VarSpec>> {
        Self::build(
            self.graded.clone(),
            self.total_order,
            Some(name.to_string()),
            loop_order,
            self.hbar_floor,
        )
    }

    pub fn without_loop(&self) -> Arc<VarSpec> {
        Arc::new(VarSpec {
            loop_var: None,
            loop_order: 0,
            ..self.clone()
        })
    }

    pub fn with_hbar_floor(&self, floor: i32) -> Result<Arc<VarSpec>> {
        Self::build(
            self.graded.clone(),
            self.total_order,
            self.loop_var.clone(),
            self.loop_order,
            floor,
        )
    }

    pub fn with_total_order(&self, total_order: u32) -> Arc<VarSpec> {
        Arc::new(VarSpec {
            total_order,
            ..self.clone()
        })
    }

    pub fn with_loop_order(&self, loop_order: u32) -> Arc<VarSpec> {
        Arc::new(VarSpec {
            loop_order,
            ..self.clone()
        })
    }

    /// Appends graded variables not already present.
    pub fn with_graded(&self, extra: &[&str]) -> Result<Arc<VarSpec>> {
        let mut graded = self.graded.clone();
        for v in extra {
            if !graded.iter().any(|g| g == v) {
                graded.push(v.to_string());
            }
        }
        Self::build(
            graded,
            self.total_order,
            self.loop_var.clone(),
            self.loop_order,
            self.hbar_floor,
        )
    }

    pub fn graded_vars(&self) -> &[String] {
        &self.graded
    }

    pub fn total_order(&self) -> u32 {
        self.total_order
    }

    pub fn loop_var(&self) -> Option<&str> {
        self.loop_var.as_deref()
    }

    pub fn loop_order(&self) -> u32 {
        self.loop_order
    }

    pub fn hbar_floor(&self) -> i32 {
        self.hbar_floor
    }

    pub fn arity(&self) -> usize {
        self.graded.len() + usize::from(self.loop_var.is_some())
    }

    pub fn graded_index(&self, name: &str) -> Option<usize> {
        self.graded.iter().position(|g| g == name)
    }

    pub fn hbar_index(&self) -> Option<usize> {
        self.graded_index(HBAR)
    }

    /// Slot index of any variable, graded or loop.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.graded_index(name).or_else(|| {
            (self.loop_var.as_deref() == Some(name)).then_some(self.graded.len())
        })
    }

    fn loop_slot(&self) -> Option<usize> {
        self.loop_var.as_ref().map(|_| self.graded.len())
    }

    pub fn name_of(&self, slot: usize) -> &str {
        if slot < self.graded.len() {
            &self.graded[slot]
        } else {
            self.loop_var.as_deref().unwrap_or("?")
        }
    }

    pub(crate) fn graded_degree(&self, m: &[i16]) -> i32 {
        m[..self.graded.len()].iter().map(|&e| i32::from(e)).sum()
    }

    pub(crate) fn loop_exp(&self, m: &[i16]) -> i32 {
        self.loop_slot().map_or(0, |s| i32::from(m[s]))
    }

    /// Whether a monomial lies inside the truncation window.
    pub(crate) fn keeps(&self, m: &[i16]) -> bool {
        self.graded_degree(m) <= self.total_order as i32
            && self.loop_exp(m) <= self.loop_order as i32
    }

    pub(crate) fn check_exponents(&self, m: &[i16]) -> Result<()> {
        let hb = self.hbar_index();
        for (slot, &e) in m.iter().enumerate() {
            if e < 0 {
                if Some(slot) == hb {
                    if i32::from(e) < self.hbar_floor {
                        return Err(Error::HbarFloor {
                            exp: e.into(),
                            floor: self.hbar_floor,
                        });
                    }
                } else {
                    return Err(Error::Precondition(format!(
                        "negative exponent of `{}`",
                        self.name_of(slot)
                    )));
                }
            }
        }
        Ok(())
    }

    fn same(a: &Arc<VarSpec>, b: &Arc<VarSpec>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

impl fmt::Display for VarSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; T={}", self.graded.join(","), self.total_order)?;
        if let Some(l) = &self.loop_var {
            write!(f, "; loop {l}, U={}", self.loop_order)?;
        }
        write!(f, "; hbar_floor={}]", self.hbar_floor)
    }
}

/// First monomial at which two series disagree.
#[derive(Clone, Debug, PartialEq)]
pub struct TermDiff {
    pub monomial: Vec<i32>,
    pub lhs: Coefficient,
    pub rhs: Coefficient,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    spec: Arc<VarSpec>,
    terms: BTreeMap<Monomial, Coefficient>,
}

impl Series {
    pub fn zero(spec: &Arc<VarSpec>) -> Series {
        Series {
            spec: spec.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(spec: &Arc<VarSpec>) -> Series {
        Self::constant(spec, Coefficient::one())
    }

    pub fn constant(spec: &Arc<VarSpec>, c: Coefficient) -> Series {
        let mut s = Self::zero(spec);
        s.insert_unchecked(SmallVec::from_elem(0, spec.arity()), c);
        s
    }

    pub fn from_int(spec: &Arc<VarSpec>, n: i64) -> Series {
        Self::constant(spec, Coefficient::from_int(n))
    }

    pub fn from_rational(spec: &Arc<VarSpec>, q: BigRational) -> Series {
        Self::constant(spec, Coefficient::real(q))
    }

    /// The variable `name` itself (graded or loop).
    pub fn var(spec: &Arc<VarSpec>, name: &str) -> Result<Series> {
        Self::var_pow(spec, name, 1)
    }

    pub fn var_pow(spec: &Arc<VarSpec>, name: &str, e: i32) -> Result<Series> {
        let slot = spec
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut m: Monomial = SmallVec::from_elem(0, spec.arity());
        m[slot] = e as i16;
        Self::monomial(spec, &m, Coefficient::one())
    }

    pub fn monomial(spec: &Arc<VarSpec>, exps: &[i16], c: Coefficient) -> Result<Series> {
        let mut s = Self::zero(spec);
        s.add_term(exps, c)?;
        Ok(s)
    }

    pub fn from_terms<I>(spec: &Arc<VarSpec>, terms: I) -> Result<Series>
    where
        I: IntoIterator<Item = (Vec<i16>, Coefficient)>,
    {
        let mut s = Self::zero(spec);
        for (m, c) in terms {
            s.add_term(&m, c)?;
        }
        Ok(s)
    }

    /// Adds `c·x^m`, dropping it if it falls outside the truncation window.
    pub fn add_term(&mut self, m: &[i16], c: Coefficient) -> Result<()> {
        if m.len() != self.spec.arity() {
            return Err(Error::InvalidArgument(format!(
                "exponent vector of length {} for spec of arity {}",
                m.len(),
                self.spec.arity()
            )));
        }
        self.spec.check_exponents(m)?;
        if c.is_zero() || !self.spec.keeps(m) {
            return Ok(());
        }
        self.accumulate(SmallVec::from_slice(m), &c);
        Ok(())
    }

    fn accumulate(&mut self, m: Monomial, c: &Coefficient) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn insert_unchecked(&mut self, m: Monomial, c: Coefficient) {
        if !c.is_zero() && self.spec.keeps(&m) {
            self.terms.insert(m, c);
        }
    }

    pub fn spec(&self) -> &Arc<VarSpec> {
        &self.spec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i16], &Coefficient)> {
        self.terms.iter().map(|(m, c)| (m.as_slice(), c))
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

    pub fn constant_term(&self) -> Coefficient {
        let z: Monomial = SmallVec::from_elem(0, self.spec.arity());
        self.terms.get(&z).cloned().unwrap_or_else(Coefficient::zero)
    }

    pub fn coeff(&self, exps: &[i16]) -> Coefficient {
        self.terms.get(exps).cloned().unwrap_or_else(Coefficient::zero)
    }

    /// Whether some stored term carries a negative power of `hbar`.
    pub fn has_laurent_part(&self) -> bool {
        match self.spec.hbar_index() {
            Some(h) => self.terms.keys().any(|m| m[h] < 0),
            None => false,
        }
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.keys().map(|m| self.spec.graded_degree(m)).min()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.keys().map(|m| self.spec.graded_degree(m)).max()
    }

    /// Largest exponent of `name` among stored terms.
    pub fn degree_in(&self, name: &str) -> Result<i32> {
        let slot = self
            .spec
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(self.terms.keys().map(|m| i32::from(m[slot])).max().unwrap_or(0))
    }

    fn check_same(&self, o: &Series) -> Result<()> {
        if VarSpec::same(&self.spec, &o.spec) {
            Ok(())
        } else {
            Err(Error::IncompatibleSpec(format!("{} vs {}", self.spec, o.spec)))
        }
    }

    pub fn add(&self, o: &Series) -> Result<Series> {
        self.check_same(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.accumulate(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Series) -> Result<Series> {
        self.check_same(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.accumulate(m.clone(), &-c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Series {
        Series {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Coefficient) -> Series {
        if c.is_zero() {
            return Series::zero(&self.spec);
        }
        Series {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Series {
        self.scale(&Coefficient::from_int(n))
    }

    pub fn scale_frac(&self, num: i64, den: i64) -> Series {
        self.scale(&Coefficient::from_frac(num, den))
    }

    pub fn mul(&self, o: &Series) -> Result<Series> {
        self.mul_to_degree(o, self.spec.total_order as i32)
    }

    /// Product keeping only graded degree `≤ min(t, T)`.
    pub fn mul_to_degree(&self, o: &Series, t: i32) -> Result<Series> {
        self.check_same(o)?;
        let spec = &self.spec;
        let t = t.min(spec.total_order as i32);
        let u = spec.loop_order as i32;
        // Bucket the right factor by graded degree so each left term only
        // visits partners that can stay under `T`.
        let mut buckets: BTreeMap<i32, Vec<(&Monomial, &Coefficient, i32)>> = BTreeMap::new();
        for (m, c) in &o.terms {
            buckets
                .entry(spec.graded_degree(m))
                .or_default()
                .push((m, c, spec.loop_exp(m)));
        }
        let mut acc: HashMap<Monomial, Coefficient> = HashMap::new();
        for (m1, c1) in &self.terms {
            let d1 = spec.graded_degree(m1);
            let l1 = spec.loop_exp(m1);
            for (_, bucket) in buckets.range(..=t - d1) {
                for &(m2, c2, l2) in bucket {
                    if l1 + l2 > u {
                        continue;
                    }
                    let m: Monomial = m1.iter().zip(m2.iter()).map(|(a, b)| a + b).collect();
                    let prod = c1 * c2;
                    match acc.get_mut(&m) {
                        Some(x) => *x += &prod,
                        None => {
                            acc.insert(m, prod);
                        }
                    }
                }
            }
        }
        let mut out = Series::zero(spec);
        for (m, c) in acc {
            if !c.is_zero() {
                spec.check_exponents(&m)?;
                out.terms.insert(m, c);
            }
        }
        Ok(out)
    }

    /// `x^k · self` for a single variable; `k` may be negative only for `hbar`.
    pub fn mul_var_pow(&self, name: &str, k: i32) -> Result<Series> {
        let slot = self
            .spec
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut out = Series::zero(&self.spec);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            m2[slot] += k as i16;
            self.spec.check_exponents(&m2)?;
            out.insert_unchecked(m2, c.clone());
        }
        Ok(out)
    }

    /// Exact division by a variable; every term must contain it.
    pub fn div_var(&self, name: &str) -> Result<Series> {
        let slot = self
            .spec
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let is_hbar = Some(slot) == self.spec.hbar_index();
        if !is_hbar && self.terms.keys().any(|m| m[slot] == 0) {
            return Err(Error::Precondition(format!("series not divisible by `{name}`")));
        }
        self.mul_var_pow(name, -1)
    }

    /// Formal partial derivative in a graded variable.
    pub fn derivative(&self, name: &str) -> Result<Series> {
        let slot = self
            .spec
            .graded_index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut out = Series::zero(&self.spec);
        for (m, c) in &self.terms {
            let e = m[slot];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[slot] -= 1;
            self.spec.check_exponents(&m2)?;
            out.accumulate(m2, &(c * &Coefficient::from_int(e.into())));
        }
        Ok(out)
    }

    /// Coefficient of `name^k`, as a series in the same spec with that
    /// variable's exponent cleared.
    pub fn coeff_of(&self, name: &str, k: i32) -> Result<Series> {
        let slot = self
            .spec
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut out = Series::zero(&self.spec);
        for (m, c) in &self.terms {
            if i32::from(m[slot]) == k {
                let mut m2 = m.clone();
                m2[slot] = 0;
                out.accumulate(m2, c);
            }
        }
        Ok(out)
    }

    /// Splits off powers of a graded variable: `self = Σ_k out[k]·x^k`.
    pub(crate) fn split_by(&self, slot: usize) -> BTreeMap<i32, Series> {
        let mut parts: BTreeMap<i32, Series> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let k = i32::from(m2[slot]);
            m2[slot] = 0;
            parts
                .entry(k)
                .or_insert_with(|| Series::zero(&self.spec))
                .terms
                .insert(m2, c.clone());
        }
        parts
    }

    /// Coefficient of the `k`-th power of the loop variable, as a series in
    /// the loop-free spec.
    pub fn loop_coeff(&self, k: u32) -> Result<Series> {
        let slot = self
            .spec
            .loop_slot()
            .ok_or_else(|| Error::Precondition("spec has no loop variable".into()))?;
        let target = self.spec.without_loop();
        let mut out = Series::zero(&target);
        for (m, c) in &self.terms {
            if m[slot] as u32 == k {
                out.terms.insert(SmallVec::from_slice(&m[..slot]), c.clone());
            }
        }
        Ok(out)
    }

    /// Builds `Σ_k coeffs[k]·w^k` where `w` is the loop variable of `spec`.
    pub fn from_loop_coeffs(spec: &Arc<VarSpec>, coeffs: &[(u32, Series)]) -> Result<Series> {
        let slot = spec
            .loop_slot()
            .ok_or_else(|| Error::Precondition("spec has no loop variable".into()))?;
        let mut out = Series::zero(spec);
        for (k, s) in coeffs {
            let s = s.embed(&spec.without_loop())?;
            for (m, c) in &s.terms {
                let mut m2: Monomial = m.clone();
                m2.push(*k as i16);
                debug_assert_eq!(m2.len(), slot + 1);
                if spec.keeps(&m2) {
                    out.accumulate(m2, c);
                }
            }
        }
        Ok(out)
    }

    /// Re-expresses the series in another spec, matching variables by name.
    /// Terms outside the target's truncation window are dropped.
    pub fn embed(&self, target: &Arc<VarSpec>) -> Result<Series> {
        if VarSpec::same(&self.spec, target) {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = (0..self.spec.arity())
            .map(|slot| {
                let name = self.spec.name_of(slot);
                if slot < self.spec.graded.len() {
                    target.graded_index(name)
                } else {
                    (target.loop_var() == Some(name)).then(|| target.graded.len())
                }
            })
            .collect();
        let mut out = Series::zero(target);
        for (m, c) in &self.terms {
            let mut m2: Monomial = SmallVec::from_elem(0, target.arity());
            for (slot, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[slot] {
                    Some(t) => m2[t] = e,
                    None => {
                        return Err(Error::IncompatibleSpec(format!(
                            "variable `{}` missing from {}",
                            self.spec.name_of(slot),
                            target
                        )))
                    }
                }
            }
            target.check_exponents(&m2)?;
            if target.keeps(&m2) {
                out.accumulate(m2, c);
            }
        }
        Ok(out)
    }

    /// Drops all terms of graded degree above `t`, keeping the spec's bound.
    pub fn truncate_degree(&self, t: i32) -> Series {
        Series {
            spec: self.spec.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| self.spec.graded_degree(m) <= t)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Evaluates a polynomial exactly. Every variable appearing in a term must
    /// be assigned; whether truncation has cut off part of the intended
    /// polynomial is the caller's concern.
    pub fn eval_at(&self, assignments: &[(&str, Coefficient)]) -> Result<Coefficient> {
        let mut vals: Vec<Option<&Coefficient>> = vec![None; self.spec.arity()];
        for (name, v) in assignments {
            let slot = self
                .spec
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            vals[slot] = Some(v);
        }
        let mut total = Coefficient::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (slot, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = vals[slot].ok_or_else(|| {
                    Error::Precondition(format!("unassigned variable `{}`", self.spec.name_of(slot)))
                })?;
                t = &t * &v.pow(e.into())?;
            }
            total += &t;
        }
        Ok(total)
    }

    pub fn eval_at_rational(&self, assignments: &[(&str, BigRational)]) -> Result<Coefficient> {
        let a: Vec<(&str, Coefficient)> = assignments
            .iter()
            .map(|(n, q)| (*n, Coefficient::real(q.clone())))
            .collect();
        self.eval_at(&a)
    }

    /// Composition `f(…, x := g, …)` in a graded variable.
    ///
    /// Exact when `g` has no constant term, or when `self` is a polynomial
    /// that never reaches the truncation bound.
    pub fn substitute(&self, name: &str, g: &Series) -> Result<Series> {
        self.check_same(g)?;
        let slot = self
            .spec
            .graded_index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let parts = self.split_by(slot);
        if parts.keys().any(|&k| k < 0) {
            return Err(Error::Precondition(format!(
                "negative powers of `{name}` cannot be substituted"
            )));
        }
        let g_const = !g.constant_term().is_zero() || g.has_laurent_part();
        if g_const {
            let bounded = self
                .max_degree()
                .map_or(true, |d| d < self.spec.total_order as i32);
            if !bounded {
                return Err(Error::Precondition(format!(
                    "substituting a series with constant term requires `{name}` to occur \
                     polynomially below the truncation bound"
                )));
            }
        }
        let Some((&top, _)) = parts.iter().next_back() else {
            return Ok(Series::zero(&self.spec));
        };
        // Horner from the highest power down.
        let mut acc = Series::zero(&self.spec);
        for k in (0..=top).rev() {
            acc = acc.mul(g)?;
            if let Some(p) = parts.get(&k) {
                acc = acc.add(p)?;
            }
        }
        Ok(acc)
    }

    /// First differing monomial in the canonical term order, if any.
    pub fn first_diff(&self, other: &Series) -> Option<TermDiff> {
        let mut keys: Vec<&Monomial> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        for m in keys {
            let a = self.terms.get(m).cloned().unwrap_or_else(Coefficient::zero);
            let b = other.terms.get(m).cloned().unwrap_or_else(Coefficient::zero);
            if a != b {
                return Some(TermDiff {
                    monomial: m.iter().map(|&e| e.into()).collect(),
                    lhs: a,
                    rhs: b,
                });
            }
        }
        None
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Sort by total degree for readability.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| (self.spec.graded_degree(m) + self.spec.loop_exp(m), (*m).clone()));
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(slot, &e)| {
                    let n = self.spec.name_of(slot);
                    if e == 1 {
                        n.to_string()
                    } else {
                        format!("{n}^{e}")
                    }
                })
                .collect();
            let cs = if c.is_real() { c.to_string() } else { format!("({c})") };
            if vars.is_empty() {
                write!(f, "{cs}")?;
            } else {
                write!(f, "{cs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;
    fn add(self, o: &Series) -> Series {
        Series::add(self, o).expect("series addition")
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;
    fn sub(self, o: &Series) -> Series {
        Series::sub(self, o).expect("series subtraction")
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;
    fn mul(self, o: &Series) -> Series {
        Series::mul(self, o).expect("series multiplication")
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series::neg(self)
    }
}
