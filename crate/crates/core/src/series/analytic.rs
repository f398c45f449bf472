//! exp, log, inverse, sqrt and integer powers.
//!
//! All four transcendental operations run the same recurrence over weight
//! components, where the weight of a monomial is its graded degree plus its
//! loop exponent. Weight is additive under multiplication and every kept term
//! has weight at most `T + U`, so the recurrences terminate. Inputs with
//! negative powers of `hbar` have no such grading and are rejected.

use std::collections::HashMap;

use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::{Monomial, Series, VarSpec};
use crate::coeff::Coefficient;
use crate::error::{Error, Result};

type Component = Vec<(Monomial, Coefficient)>;

fn weight(spec: &VarSpec, m: &[i16]) -> usize {
    (spec.graded_degree(m) + spec.loop_exp(m)) as usize
}

impl Series {
    fn max_weight(&self) -> usize {
        (self.spec.total_order() + self.spec.loop_order()) as usize
    }

    fn components(&self, what: &str) -> Result<Vec<Component>> {
        if self.has_laurent_part() {
            return Err(Error::Precondition(format!(
                "{what} of a series with negative powers of hbar"
            )));
        }
        let mut comps = vec![Vec::new(); self.max_weight() + 1];
        for (m, c) in &self.terms {
            comps[weight(&self.spec, m)].push((m.clone(), c.clone()));
        }
        Ok(comps)
    }

    fn assemble(&self, comps: Vec<Component>) -> Series {
        let mut out = Series::zero(&self.spec);
        for comp in comps {
            for (m, c) in comp {
                out.insert_unchecked(m, c);
            }
        }
        out
    }

    /// `exp(f)` for `f` with zero constant term.
    pub fn exp(&self) -> Result<Series> {
        if !self.constant_term().is_zero() {
            return Err(Error::Precondition("exp needs a zero constant term".into()));
        }
        let f = self.components("exp")?;
        let w = self.max_weight();
        let mut e: Vec<Component> = Vec::with_capacity(w + 1);
        e.push(vec![(unit(&self.spec), Coefficient::one())]);
        for n in 1..=w {
            let mut acc = HashMap::new();
            for k in 1..=n {
                let s = Coefficient::from_frac(k as i64, n as i64);
                mul_into(&mut acc, &f[k], &e[n - k], &s, &self.spec);
            }
            e.push(finish(acc));
        }
        Ok(self.assemble(e))
    }

    /// `log(f)` for `f` with constant term 1.
    pub fn log(&self) -> Result<Series> {
        if !self.constant_term().is_one() {
            return Err(Error::Precondition("log needs constant term 1".into()));
        }
        let f = self.components("log")?;
        let w = self.max_weight();
        let mut l: Vec<Component> = vec![Vec::new()];
        for n in 1..=w {
            let mut acc: HashMap<Monomial, Coefficient> = f[n].iter().cloned().collect();
            for k in 1..n {
                let s = Coefficient::from_frac(-((n - k) as i64), n as i64);
                mul_into(&mut acc, &f[k], &l[n - k], &s, &self.spec);
            }
            l.push(finish(acc));
        }
        Ok(self.assemble(l))
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Series> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::Precondition("inverse needs a nonzero constant term".into()));
        }
        let f = self.components("inverse")?;
        let cinv = c.inv()?;
        let neg = -&cinv;
        let w = self.max_weight();
        let mut g: Vec<Component> = vec![vec![(unit(&self.spec), cinv)]];
        for n in 1..=w {
            let mut acc = HashMap::new();
            for k in 1..=n {
                mul_into(&mut acc, &f[k], &g[n - k], &neg, &self.spec);
            }
            g.push(finish(acc));
        }
        Ok(self.assemble(g))
    }

    /// Square root with constant term `±r²`; `√(−r²) = i·|r|`.
    pub fn sqrt(&self) -> Result<Series> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::UnsupportedSqrt("zero constant term".into()));
        }
        let s0 = c.sqrt_signed_square()?;
        let f = self.components("sqrt")?;
        let half_inv = (&s0 * &Coefficient::from_int(2)).inv()?;
        let neg_half_inv = -&half_inv;
        let w = self.max_weight();
        let mut s: Vec<Component> = vec![vec![(unit(&self.spec), s0)]];
        for n in 1..=w {
            let mut acc: HashMap<Monomial, Coefficient> = f[n]
                .iter()
                .map(|(m, x)| (m.clone(), x * &half_inv))
                .collect();
            for k in 1..n {
                mul_into(&mut acc, &s[k], &s[n - k], &neg_half_inv, &self.spec);
            }
            s.push(finish(acc));
        }
        Ok(self.assemble(s))
    }

    /// Integer power; negative exponents go through [`Series::inverse`].
    pub fn pow(&self, n: i64) -> Result<Series> {
        let mut base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Series::one(&self.spec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }
}

fn unit(spec: &VarSpec) -> Monomial {
    SmallVec::from_elem(0, spec.arity())
}

fn mul_into(
    acc: &mut HashMap<Monomial, Coefficient>,
    a: &[(Monomial, Coefficient)],
    b: &[(Monomial, Coefficient)],
    scale: &Coefficient,
    spec: &VarSpec,
) {
    for (m1, c1) in a {
        let c1s = c1 * scale;
        for (m2, c2) in b {
            let m: Monomial = m1.iter().zip(m2.iter()).map(|(x, y)| x + y).collect();
            if !spec.keeps(&m) {
                continue;
            }
            let p = &c1s * c2;
            match acc.get_mut(&m) {
                Some(x) => *x += &p,
                None => {
                    acc.insert(m, p);
                }
            }
        }
    }
}

fn finish(acc: HashMap<Monomial, Coefficient>) -> Component {
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}
