//! Quantum-loop Cartan-side series `ψ(z)`, `φ(z)` and their evaluation on
//! Drinfeld root data `A_p`, `B_p`.
//!
//! `ψ` is a series in `z⁻¹` (loop variable `zinv`), `φ` a series in `z`
//! (loop variable `z`). Both expand `Π_p (z − A_p)/(z − B_p)`, at infinity
//! and at the origin respectively.

use std::sync::Arc;

use num_traits::Zero;

use crate::cartan::CartanDatum;
use crate::error::{Error, Result};
use crate::roots::{partial_fraction, Cleared, NodeRoots};
use crate::series::{Series, VarSpec, HBAR};
use crate::yangian::h_from_roots;

pub const Z_INV: &str = "zinv";
pub const Z: &str = "z";

/// `ψ(z) = exp(ℏ d_i H_0/2) exp((q_i − q_i⁻¹) Σ_{s≥1} H_s z^{−s})` and
/// `φ(z) = exp(−ℏ d_i H_0/2) exp(−(q_i − q_i⁻¹) Σ_{s≥1} H_{−s} z^s)`.
///
/// `h_pos[s−1] = H_s`, `h_neg[s−1] = H_{−s}`; all in the loop-free base of
/// the two target specs.
pub fn psi_phi_from_h(
    datum: &CartanDatum,
    i: usize,
    h0: &Series,
    h_pos: &[Series],
    h_neg: &[Series],
    psi_spec: &Arc<VarSpec>,
    phi_spec: &Arc<VarSpec>,
) -> Result<(Series, Series)> {
    let base = psi_spec.without_loop();
    let d = datum.d(i);
    let pre = h0.embed(&base)?.mul_var_pow(HBAR, 1)?.scale_frac(d, 2);
    let qd = datum.q_diff(i, &base)?;
    let build = |spec: &Arc<VarSpec>, hs: &[Series], sign: i64, pre: &Series| -> Result<Series> {
        let mut coeffs = Vec::new();
        for (s, h) in hs.iter().enumerate() {
            coeffs.push((s as u32 + 1, h.embed(&base)?.mul(&qd)?.scale_int(sign)));
        }
        let inner = Series::from_loop_coeffs(spec, &coeffs)?;
        let outer = Series::from_loop_coeffs(spec, &[(0, pre.clone())])?;
        outer.exp()?.mul(&inner.exp()?)
    };
    let psi = build(psi_spec, h_pos, 1, &pre)?;
    let phi = build(phi_spec, h_neg, -1, &pre.neg())?;
    Ok((psi, phi))
}

/// `Π_p (z − A_p)/(z − B_p)` in powers of `z⁻¹`.
pub fn psi_from_roots(spec: &Arc<VarSpec>, a: &[Series], b: &[Series]) -> Result<Series> {
    h_from_roots(spec, a, b)
}

/// `Π_p (z − A_p)/(z − B_p) = Π_p (A_p − z)/(B_p − z)` in powers of `z`.
pub fn phi_from_roots(spec: &Arc<VarSpec>, a: &[Series], b: &[Series]) -> Result<Series> {
    let z = Series::var(spec, spec.loop_var().unwrap_or(Z))?;
    let mut num = Series::one(spec);
    let mut den = Series::one(spec);
    for (ap, bp) in a.iter().zip(b) {
        if ap.constant_term().is_zero() || bp.constant_term().is_zero() {
            return Err(Error::Precondition("expansion at z = 0 needs nonzero roots".into()));
        }
        num = num.mul(&ap.embed(spec)?.sub(&z)?)?;
        den = den.mul(&bp.embed(spec)?.sub(&z)?)?;
    }
    num.mul(&den.inverse()?)
}

/// Closed form of `ψ_{r+1}`: `Σ_p B_p^r (B_p − A_p) Π_{p′≠p} (B_p − A_{p′})/(B_p − B_{p′})`.
pub fn du_psi(spec: &Arc<VarSpec>, a: &[Series], b: &[Series], r: u32) -> Result<Cleared> {
    let weights = b
        .iter()
        .zip(a)
        .map(|(bp, ap)| bp.pow(r as i64)?.mul(&bp.sub(ap)?))
        .collect::<Result<Vec<_>>>()?;
    partial_fraction(spec, &weights, a, b)
}

/// Closed form of `φ_{r−1}` minus its constant for `r ≥ 1`:
/// `Σ_p B_p^{−r} (A_p − B_p) Π_{p′≠p} (B_p − A_{p′})/(B_p − B_{p′})`.
pub fn du_phi(spec: &Arc<VarSpec>, a: &[Series], b: &[Series], r: u32) -> Result<Cleared> {
    if r == 0 {
        return Err(Error::InvalidArgument("closed form of φ needs r ≥ 1".into()));
    }
    let weights = b
        .iter()
        .zip(a)
        .map(|(bp, ap)| {
            if bp.constant_term().is_zero() {
                return Err(Error::Precondition("zero root".into()));
            }
            bp.pow(-(r as i64))?.mul(&ap.sub(bp)?)
        })
        .collect::<Result<Vec<_>>>()?;
    partial_fraction(spec, &weights, a, b)
}

/// `(q − q⁻¹) H_k = (1/k) Σ_p (B_p^k − A_p^k)` for `k ≥ 1`.
pub fn du_h(spec: &Arc<VarSpec>, a: &[Series], b: &[Series], k: u32) -> Result<Series> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let mut out = Series::zero(spec);
    for (ap, bp) in a.iter().zip(b) {
        out = out.add(&bp.pow(k as i64)?.sub(&ap.pow(k as i64)?)?)?;
    }
    Ok(out.scale_frac(1, k as i64))
}

#[derive(Clone, Debug)]
pub struct QContext {
    pub datum: CartanDatum,
    /// Graded `[hbar, roots…]`, `hbar_floor = −1`.
    pub spec: Arc<VarSpec>,
    pub psi_spec: Arc<VarSpec>,
    pub phi_spec: Arc<VarSpec>,
    pub roots: Vec<NodeRoots>,
}

impl QContext {
    pub fn new(
        datum: CartanDatum,
        roots: Vec<NodeRoots>,
        total_order: u32,
        loop_order: u32,
    ) -> Result<QContext> {
        let mut graded = vec![HBAR.to_string()];
        for r in &roots {
            r.validate()?;
            datum.check(r.node)?;
            for v in r.variables() {
                if !graded.contains(&v) {
                    graded.push(v);
                }
            }
        }
        let spec = VarSpec::build(graded, total_order, None, 0, -1)?;
        Ok(QContext {
            datum,
            psi_spec: spec.with_loop(Z_INV, loop_order)?,
            phi_spec: spec.with_loop(Z, loop_order)?,
            spec,
            roots,
        })
    }

    pub fn root_series(&self, i: usize) -> Result<(Vec<Series>, Vec<Series>)> {
        self.datum.check(i)?;
        match self.roots.iter().find(|r| r.node == i) {
            Some(r) => r.series(&self.spec),
            None => Ok((vec![], vec![])),
        }
    }

    pub fn psi(&self, i: usize) -> Result<Series> {
        let (a, b) = self.root_series(i)?;
        psi_from_roots(&self.psi_spec, &a, &b)
    }

    pub fn phi(&self, i: usize) -> Result<Series> {
        let (a, b) = self.root_series(i)?;
        phi_from_roots(&self.phi_spec, &a, &b)
    }

    pub fn du_psi(&self, i: usize, r: u32) -> Result<Cleared> {
        let (a, b) = self.root_series(i)?;
        du_psi(&self.spec, &a, &b, r)
    }

    pub fn du_phi(&self, i: usize, r: u32) -> Result<Cleared> {
        let (a, b) = self.root_series(i)?;
        du_phi(&self.spec, &a, &b, r)
    }

    pub fn du_h(&self, i: usize, k: u32) -> Result<Series> {
        let (a, b) = self.root_series(i)?;
        du_h(&self.spec, &a, &b, k)
    }
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::*;
    use crate::coeff::Coefficient;
    use crate::roots::Root;

    fn sl11(roots: Vec<NodeRoots>, t: u32, u: u32) -> QContext {
        QContext::new(CartanDatum::build(0, 0), roots, t, u).unwrap()
    }

    fn rat(n: i64, d: i64) -> Root {
        Root::rational(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn zero_h_gives_unit_series() {
        let ctx = sl11(vec![], 4, 4);
        let z = Series::zero(&ctx.spec);
        let (psi, phi) =
            psi_phi_from_h(&ctx.datum, 1, &z, &[z.clone()], &[z.clone()], &ctx.psi_spec, &ctx.phi_spec)
                .unwrap();
        assert_eq!(psi, Series::one(&ctx.psi_spec));
        assert_eq!(phi, Series::one(&ctx.phi_spec));
    }

    #[test]
    fn first_coefficients_from_h() {
        let spec0 = VarSpec::graded(&[HBAR, "x", "y"], 5).unwrap().with_hbar_floor(-1).unwrap();
        let psi_spec = spec0.with_loop(Z_INV, 3).unwrap();
        let phi_spec = spec0.with_loop(Z, 3).unwrap();
        let d = CartanDatum::build(1, 1);
        let x = Series::var(&spec0, "x").unwrap();
        let y = Series::var(&spec0, "y").unwrap();
        for i in 1..=3 {
            let (psi, phi) =
                psi_phi_from_h(&d, i, &x, &[y.clone()], &[], &psi_spec, &phi_spec).unwrap();
            let pre = x.mul_var_pow(HBAR, 1).unwrap().scale_frac(d.d(i), 2).exp().unwrap();
            assert_eq!(psi.loop_coeff(0).unwrap(), pre);
            let want = &(&pre * &d.q_diff(i, &spec0).unwrap()) * &y;
            assert_eq!(psi.loop_coeff(1).unwrap(), want);
            assert_eq!(&psi.loop_coeff(0).unwrap() * &phi.loop_coeff(0).unwrap(), Series::one(&spec0));
        }
    }

    #[test]
    fn root_expansions_single_pair() {
        let ctx = sl11(vec![NodeRoots::new(1, vec![Root::formal("A")], vec![Root::formal("B")]).unwrap()], 6, 5);
        let psi = ctx.psi(1).unwrap();
        let s = &ctx.spec;
        let a = Series::var(s, "A").unwrap();
        let b = Series::var(s, "B").unwrap();
        assert_eq!(psi.loop_coeff(0).unwrap(), Series::one(s));
        for r in 1..=4u32 {
            let want = &b.pow(r as i64 - 1).unwrap() * &(&b - &a);
            assert_eq!(psi.loop_coeff(r).unwrap(), want);
            assert_eq!(ctx.du_psi(1, r - 1).unwrap().value().unwrap(), want);
        }
        // formal roots without a constant term cannot be expanded at 0
        assert!(ctx.phi(1).is_err());
    }

    #[test]
    fn phi_expansion_at_origin() {
        let ctx = sl11(vec![NodeRoots::new(1, vec![rat(1, 1)], vec![rat(2, 1)]).unwrap()], 2, 4);
        let phi = ctx.phi(1).unwrap();
        assert_eq!(phi.loop_coeff(0).unwrap(), Series::constant(&ctx.spec, Coefficient::from_frac(1, 2)));
        for r in 1..=4u32 {
            let lhs = phi.loop_coeff(r - 1).unwrap();
            let lhs = if r == 1 { &lhs - &Series::one(&ctx.spec) } else { lhs };
            assert_eq!(lhs, ctx.du_phi(1, r).unwrap().value().unwrap(), "r = {r}");
        }
    }

    #[test]
    fn log_coefficient_example() {
        let ctx = sl11(vec![NodeRoots::new(1, vec![rat(1, 1)], vec![rat(2, 1)]).unwrap()], 2, 4);
        assert_eq!(ctx.du_h(1, 2).unwrap(), Series::constant(&ctx.spec, Coefficient::from_frac(3, 2)));
        let lg = ctx.psi(1).unwrap().log().unwrap();
        for k in 1..=4 {
            assert_eq!(lg.loop_coeff(k).unwrap(), ctx.du_h(1, k).unwrap());
        }
    }

    #[test]
    fn equal_roots_cancel() {
        let same = NodeRoots::new(1, vec![rat(3, 1)], vec![rat(3, 1)]).unwrap();
        let ctx = sl11(vec![same], 2, 4);
        assert_eq!(ctx.psi(1).unwrap(), Series::one(&ctx.psi_spec));
        assert_eq!(ctx.phi(1).unwrap(), Series::one(&ctx.phi_spec));
    }

    #[test]
    fn log_psi_recovers_h() {
        let spec0 = VarSpec::graded(&[HBAR, "x", "y", "w"], 6).unwrap().with_hbar_floor(-1).unwrap();
        let psi_spec = spec0.with_loop(Z_INV, 3).unwrap();
        let phi_spec = spec0.with_loop(Z, 3).unwrap();
        let d = CartanDatum::build(0, 1);
        let hs: Vec<Series> = ["y", "w"].iter().map(|n| Series::var(&spec0, n).unwrap()).collect();
        let x = Series::var(&spec0, "x").unwrap();
        let (psi, _) = psi_phi_from_h(&d, 2, &x, &hs, &[], &psi_spec, &phi_spec).unwrap();
        let c0 = psi.loop_coeff(0).unwrap();
        let normalized = &psi * &Series::from_loop_coeffs(&psi_spec, &[(0, c0.inverse().unwrap())]).unwrap();
        let lg = normalized.log().unwrap();
        for (s, h) in hs.iter().enumerate() {
            assert_eq!(lg.loop_coeff(s as u32 + 1).unwrap(), h * &d.q_diff(2, &spec0).unwrap());
        }
        assert!(lg.loop_coeff(3).unwrap().is_zero());
    }
}
