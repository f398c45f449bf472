//! Constructors for the x-only defining relations, each returned as the
//! element whose vanishing is the relation.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{q_commutator, super_commutator, AlgElem, RelContext, Sign};
use crate::cartan::exp_hbar;
use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::series::Series;

/// Relation families of the free algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `[x_{i,k+1}, x_{j,l}] − [x_{i,k}, x_{j,l+1}] ∓ (B_ij/2)ℏ{x_{i,k}, x_{j,l}}`
    Shift,
    /// `[x_{m+1,k+1}, x_{m+1,l}]`
    OddSquare,
    /// symmetrized nested brackets of order `1 − ã_ij`
    Serre,
    /// `[[x_{m,k}, x_{m+1,0}], [x_{m+1,0}, x_{m+2,t}]]`
    OddQuartic,
    /// loop version of `Shift` with `q_i^{±a_ij}` factors
    QShift,
    /// q-Serre sum with Gaussian binomials
    QSerre,
    /// nested q-brackets around the odd node
    QOddQuartic,
}

/// Dispatches to the constructor for `rel`. `nodes` holds `(i, j)` where the
/// relation takes node indices; `levels` lists the level parameters in the
/// order of the named constructor.
pub fn instance(ctx: &RelContext, rel: Relation, sign: Sign, nodes: &[usize], levels: &[i32]) -> Result<AlgElem> {
    let node = |k: usize| {
        nodes
            .get(k)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("{rel:?} needs {} node indices", k + 1)))
    };
    let lv = |k: usize| {
        levels
            .get(k)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("{rel:?} needs {} levels", k + 1)))
    };
    match rel {
        Relation::Shift => shift_relation(ctx, sign, node(0)?, node(1)?, lv(0)?, lv(1)?),
        Relation::OddSquare => odd_square(ctx, sign, lv(0)?, lv(1)?),
        Relation::Serre => {
            let (t, s) = levels.split_at(levels.len().saturating_sub(1));
            serre(ctx, sign, node(0)?, node(1)?, t, *s.first().ok_or_else(|| Error::InvalidArgument("Serre needs levels".into()))?)
        }
        Relation::OddQuartic => odd_quartic(ctx, sign, lv(0)?, lv(1)?),
        Relation::QShift => q_shift(ctx, sign, node(0)?, node(1)?, lv(0)?, lv(1)?),
        Relation::QSerre => {
            let (k, l) = levels.split_at(levels.len().saturating_sub(1));
            q_serre(ctx, sign, node(0)?, node(1)?, k, *l.first().ok_or_else(|| Error::InvalidArgument("q-Serre needs levels".into()))?)
        }
        Relation::QOddQuartic => q_odd_quartic(ctx, sign, lv(0)?, lv(1)?),
    }
}

fn rational(n: i64, d: i64) -> Coefficient {
    Coefficient::real(BigRational::new(n.into(), d.into()))
}

/// Shift relation for `x^±`; the ℏ term carries the sign `±`.
pub fn shift_relation(ctx: &RelContext, sign: Sign, i: usize, j: usize, k: i32, l: i32) -> Result<AlgElem> {
    let m = ctx.datum.m;
    if i == m && j == m + 1 {
        return Err(Error::Inapplicable(format!("shift relation excludes (i,j) = ({m},{})", m + 1)));
    }
    let xi1 = ctx.gen(sign, i, k + 1)?;
    let xi = ctx.gen(sign, i, k)?;
    let xj = ctx.gen(sign, j, l)?;
    let xj1 = ctx.gen(sign, j, l + 1)?;
    let lhs = super_commutator(&xi1, &xj)?.sub(&super_commutator(&xi, &xj1)?)?;
    let anti = xi.mul(&xj)?.add(&xj.mul(&xi)?)?;
    let c = ctx
        .hbar()
        .scale(&rational(sign.factor() * ctx.datum.b(i, j), 2));
    lhs.sub(&anti.scale(&c)?)
}

pub fn odd_square(ctx: &RelContext, sign: Sign, k: i32, l: i32) -> Result<AlgElem> {
    let o = ctx.datum.odd_node();
    super_commutator(&ctx.gen(sign, o, k + 1)?, &ctx.gen(sign, o, l)?)
}

/// Order of the Serre relations for `(i, j)`: `1 − ã_ij`.
pub fn serre_order(ctx: &RelContext, i: usize, j: usize) -> usize {
    (1 - ctx.datum.a_tilde(i, j)) as usize
}

/// `Σ_{π∈S_r} [x_{i,t_π1}, [x_{i,t_π2}, … [x_{i,t_πr}, x_{j,s}]…]]`.
pub fn serre(ctx: &RelContext, sign: Sign, i: usize, j: usize, t: &[i32], s: i32) -> Result<AlgElem> {
    if i == j {
        return Err(Error::Inapplicable("Serre relation needs i ≠ j".into()));
    }
    ctx.datum.check(i)?;
    ctx.datum.check(j)?;
    let r = serre_order(ctx, i, j);
    if t.len() != r {
        return Err(Error::InvalidArgument(format!("Serre relation for ({i},{j}) takes {r} levels, got {}", t.len())));
    }
    let y = ctx.gen(sign, j, s)?;
    let mut out = ctx.zero();
    for p in permutations(r) {
        let mut acc = y.clone();
        for &k in p.iter().rev() {
            acc = super_commutator(&ctx.gen(sign, i, t[k])?, &acc)?;
        }
        out = out.add(&acc)?;
    }
    Ok(out)
}

fn require_quartic(ctx: &RelContext) -> Result<usize> {
    let m = ctx.datum.m;
    if m < 1 || ctx.datum.n < 1 {
        return Err(Error::Inapplicable("quartic relation needs m ≥ 1 and n ≥ 1".into()));
    }
    Ok(m)
}

pub fn odd_quartic(ctx: &RelContext, sign: Sign, k: i32, t: i32) -> Result<AlgElem> {
    let m = require_quartic(ctx)?;
    let left = super_commutator(&ctx.gen(sign, m, k)?, &ctx.gen(sign, m + 1, 0)?)?;
    let right = super_commutator(&ctx.gen(sign, m + 1, 0)?, &ctx.gen(sign, m + 2, t)?)?;
    super_commutator(&left, &right)
}

/// `E_{i,k+1}E_{j,l} − q_i^{a}E_{j,l}E_{i,k+1} − q_i^{a}E_{i,k}E_{j,l+1} + E_{j,l+1}E_{i,k}`
/// with `a = ±a_ij` (`+` for E, `−` for F).
pub fn q_shift(ctx: &RelContext, sign: Sign, i: usize, j: usize, k: i32, l: i32) -> Result<AlgElem> {
    let qa = ctx.datum.q_pow(i, sign.factor() * ctx.datum.a(i, j), ctx.spec())?;
    let ei1 = ctx.gen(sign, i, k + 1)?;
    let ei = ctx.gen(sign, i, k)?;
    let ej = ctx.gen(sign, j, l)?;
    let ej1 = ctx.gen(sign, j, l + 1)?;
    let mut out = ei1.mul(&ej)?;
    out = out.sub(&ej.mul(&ei1)?.scale(&qa)?)?;
    out = out.sub(&ei.mul(&ej1)?.scale(&qa)?)?;
    out.add(&ej1.mul(&ei)?)
}

/// `Σ_{π∈S_r} Σ_{s=0}^{r} (−1)^s [r s]_{q_i} E_{i,k_π1}…E_{i,k_πs} E_{j,l} E_{i,k_π(s+1)}…E_{i,k_πr}`
/// with `r = 1 − ã_ij`.
pub fn q_serre(ctx: &RelContext, sign: Sign, i: usize, j: usize, k: &[i32], l: i32) -> Result<AlgElem> {
    if i == j {
        return Err(Error::Inapplicable("q-Serre relation needs i ≠ j".into()));
    }
    ctx.datum.check(i)?;
    ctx.datum.check(j)?;
    let r = serre_order(ctx, i, j);
    if k.len() != r {
        return Err(Error::InvalidArgument(format!("q-Serre relation for ({i},{j}) takes {r} levels, got {}", k.len())));
    }
    let binom: Vec<Series> = (0..=r as i64)
        .map(|s| ctx.datum.q_binomial(r as i64, s, i, ctx.spec()))
        .collect::<Result<_>>()?;
    let y = ctx.gen(sign, j, l)?;
    let mut out = ctx.zero();
    for p in permutations(r) {
        let gens: Vec<AlgElem> = p.iter().map(|&x| ctx.gen(sign, i, k[x])).collect::<Result<_>>()?;
        for (s, b) in binom.iter().enumerate() {
            let mut w = AlgElem::word(ctx.spec(), Vec::new());
            for g in &gens[..s] {
                w = w.mul(g)?;
            }
            w = w.mul(&y)?;
            for g in &gens[s..] {
                w = w.mul(g)?;
            }
            let c = if s % 2 == 0 { b.clone() } else { b.neg() };
            out = out.add(&w.scale(&c)?)?;
        }
    }
    Ok(out)
}

/// `[[E_{m,k}, E_{m+1,0}]_q, [E_{m+1,0}, E_{m+2,t}]_q]_q` with `q = e^{ℏ/2}`,
/// and `q⁻¹` in every bracket for F.
pub fn q_odd_quartic(ctx: &RelContext, sign: Sign, k: i32, t: i32) -> Result<AlgElem> {
    let m = require_quartic(ctx)?;
    let q = exp_hbar(ctx.spec(), BigRational::new(sign.factor().into(), 2.into()))?;
    let left = q_commutator(&ctx.gen(sign, m, k)?, &ctx.gen(sign, m + 1, 0)?, &q)?;
    let right = q_commutator(&ctx.gen(sign, m + 1, 0)?, &ctx.gen(sign, m + 2, t)?, &q)?;
    q_commutator(&left, &right, &q)
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                go(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanDatum;

    fn ctx(m: usize, n: usize) -> RelContext {
        RelContext::new(CartanDatum::build(m, n), 4, 4).unwrap()
    }

    #[test]
    fn serre_two_term_form() {
        let c = ctx(1, 1);
        let x = |i, k| c.gen(Sign::Plus, i, k).unwrap();
        let b = |a: &AlgElem, b: &AlgElem| super_commutator(a, b).unwrap();
        let got = serre(&c, Sign::Plus, 1, 2, &[1, 3], 2).unwrap();
        let want = b(&x(1, 1), &b(&x(1, 3), &x(2, 2))).add(&b(&x(1, 3), &b(&x(1, 1), &x(2, 2)))).unwrap();
        assert_eq!(got, want);
        let commuting = serre(&c, Sign::Minus, 1, 3, &[2], 0).unwrap();
        assert_eq!(commuting, super_commutator(&c.gen(Sign::Minus, 1, 2).unwrap(), &c.gen(Sign::Minus, 3, 0).unwrap()).unwrap());
        assert!(serre(&c, Sign::Plus, 1, 3, &[0, 0], 0).is_err());
    }

    #[test]
    fn odd_square_is_not_zero_in_free_algebra() {
        let c = ctx(1, 1);
        for (k, l) in [(0, 0), (0, 1), (1, 0), (2, 2)] {
            assert!(!odd_square(&c, Sign::Plus, k, l).unwrap().is_zero());
        }
    }

    #[test]
    fn shift_relation_excludes_odd_pair() {
        let c = ctx(1, 1);
        assert!(matches!(shift_relation(&c, Sign::Plus, 1, 2, 0, 0), Err(Error::Inapplicable(_))));
        assert!(shift_relation(&c, Sign::Plus, 2, 1, 0, 0).is_ok());
        // m = 0: node 0 does not exist, so nothing is excluded
        assert!(shift_relation(&ctx(0, 1), Sign::Plus, 1, 2, 0, 0).is_ok());
    }

    #[test]
    fn q_serre_middle_coefficient() {
        let c = ctx(1, 1);
        let e = q_serre(&c, Sign::Plus, 1, 2, &[0, 0], 0).unwrap();
        let w = |nodes: [usize; 3]| nodes.iter().map(|&i| c.sym(Sign::Plus, i, 0).unwrap()).collect::<Vec<_>>();
        // two permutations of equal levels: every coefficient is doubled
        let q2 = c.datum.q_number(2, 1, c.spec()).unwrap();
        assert_eq!(e.coeff(&w([1, 2, 1])), q2.scale_int(-2));
        assert_eq!(e.coeff(&w([1, 1, 2])), Series::from_int(c.spec(), 2));
        assert_eq!(e.coeff(&w([2, 1, 1])), Series::from_int(c.spec(), 2));
    }

    #[test]
    fn quartic_needs_both_sides() {
        assert!(odd_quartic(&ctx(0, 1), Sign::Plus, 0, 0).is_err());
        assert!(q_odd_quartic(&ctx(1, 0), Sign::Plus, 0, 0).is_err());
        let c = ctx(1, 1);
        assert!(!odd_quartic(&c, Sign::Plus, 1, 2).unwrap().is_zero());
        let q = q_odd_quartic(&c, Sign::Minus, 0, 1).unwrap();
        // at ℏ = 0 the q-brackets reduce to super brackets
        let classical = odd_quartic(&c, Sign::Minus, 0, 1).unwrap();
        for (w, s) in classical.terms() {
            assert_eq!(q.coeff(w).constant_term(), s.constant_term());
        }
    }

    #[test]
    fn q_shift_at_hbar_zero() {
        let c = ctx(1, 1);
        let e = q_shift(&c, Sign::Plus, 1, 2, 0, 1).unwrap();
        assert_eq!(e.len(), 4);
        let f = q_shift(&c, Sign::Minus, 1, 2, 0, 1).unwrap();
        let w = vec![c.sym(Sign::Minus, 2, 1).unwrap(), c.sym(Sign::Minus, 1, 1).unwrap()];
        // q_1^{+1} for F since a_12 = −1
        assert_eq!(f.coeff(&w), c.datum.q_pow(1, 1, c.spec()).unwrap().neg());
    }

    #[test]
    fn dispatcher_matches_constructors() {
        let c = ctx(1, 1);
        assert_eq!(
            instance(&c, Relation::Serre, Sign::Plus, &[2, 1], &[0, 1, 2]).unwrap(),
            serre(&c, Sign::Plus, 2, 1, &[0, 1], 2).unwrap()
        );
        assert!(instance(&c, Relation::Shift, Sign::Plus, &[1], &[0, 0]).is_err());
        assert_eq!(permutations(3).len(), 6);
    }
}
