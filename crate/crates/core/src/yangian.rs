//! Yangian Cartan-side series evaluated on Drinfeld root data.
//!
//! For a node with roots `a_p`, `b_p` the highest-weight series is
//! `h(u) = Π_p (u − a_p)/(u − b_p)`, expanded in `w = u⁻¹`. Its logarithm is
//! `ℏ t(u)`, whose Borel transform is `B(t)(v) = Σ_p (e^{b_p v} − e^{a_p v})/v`.
//! From `t` one builds `γ(v)` and the normalizing series `g(v)`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cartan::CartanDatum;
use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::roots::{partial_fraction, Cleared, NodeRoots};
use crate::series::{borel, Series, VarSpec, HBAR};

/// Name of the Borel-dual variable.
pub const V: &str = "v";
/// Name of the loop variable standing for `u⁻¹`.
pub const U_INV: &str = "uinv";

/// How the coefficients `h_k` sit inside `h(u)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum HNormalization {
    /// `h(u) = 1 + ℏ Σ h_k u^{−k−1}`.
    #[default]
    HbarScaled,
    /// `h(u) = 1 + Σ h_k u^{−k−1}`.
    Absorbed,
}

/// Deliberate corruptions used to confirm that verifications can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Replace `G(v)` by `−G(v)`.
    GSignFlip,
    /// Use `borel(t)` in place of `borel(ℏ t)`.
    DropBorelHbar,
}

#[derive(Clone, Debug)]
pub struct YContext {
    pub datum: CartanDatum,
    /// Graded `[hbar, v, roots…]`, `hbar_floor = −1`, no loop variable.
    pub spec: Arc<VarSpec>,
    /// `spec` plus the loop variable `uinv`.
    pub loop_spec: Arc<VarSpec>,
    pub roots: Vec<NodeRoots>,
    pub norm: HNormalization,
    pub mutation: Option<Mutation>,
}

impl YContext {
    pub fn new(
        datum: CartanDatum,
        roots: Vec<NodeRoots>,
        total_order: u32,
        loop_order: u32,
        norm: HNormalization,
    ) -> Result<YContext> {
        let mut graded = vec![HBAR.to_string(), V.to_string()];
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
        let loop_spec = spec.with_loop(U_INV, loop_order)?;
        Ok(YContext {
            datum,
            spec,
            loop_spec,
            roots,
            norm,
            mutation: None,
        })
    }

    /// The sl(1,1) datum with `n` formal root pairs `a1..an`, `b1..bn`.
    pub fn sl11_formal(n: usize, total_order: u32, loop_order: u32) -> Result<YContext> {
        YContext::new(
            CartanDatum::build(0, 0),
            vec![NodeRoots::formal(1, n, "")],
            total_order,
            loop_order,
            HNormalization::HbarScaled,
        )
    }

    pub fn with_mutation(mut self, m: Option<Mutation>) -> Self {
        self.mutation = m;
        self
    }

    pub fn node_roots(&self, i: usize) -> Result<NodeRoots> {
        self.datum.check(i)?;
        Ok(self
            .roots
            .iter()
            .find(|r| r.node == i)
            .cloned()
            .unwrap_or(NodeRoots {
                node: i,
                a: vec![],
                b: vec![],
                qloop: false,
            }))
    }

    pub fn root_series(&self, i: usize) -> Result<(Vec<Series>, Vec<Series>)> {
        self.node_roots(i)?.series(&self.spec)
    }

    /// `h(u) = Π_p (1 − a_p w)/(1 − b_p w)`, `w = u⁻¹`.
    pub fn h_series(&self, i: usize) -> Result<Series> {
        let (a, b) = self.node_roots(i)?.series(&self.loop_spec)?;
        h_from_roots(&self.loop_spec, &a, &b)
    }

    /// `h_k` read off the expansion of `h(u)`.
    pub fn h_coeff(&self, i: usize, k: u32) -> Result<Series> {
        let c = self.h_series(i)?.loop_coeff(k + 1)?;
        match self.norm {
            HNormalization::Absorbed => Ok(c),
            HNormalization::HbarScaled => c.div_var(HBAR),
        }
    }

    /// `ℏ t(u) = log h(u)`.
    pub fn log_h(&self, i: usize) -> Result<Series> {
        self.h_series(i)?.log()
    }

    pub fn t_series(&self, i: usize) -> Result<Series> {
        t_from_h(&self.h_series(i)?)
    }

    /// `t_r` read off the expansion of `t(u)`. Valid below degree `T`.
    pub fn t_coeff(&self, i: usize, r: u32) -> Result<Series> {
        self.t_series(i)?.loop_coeff(r + 1)
    }

    /// The `u⁻¹`-series whose Borel transform is `B(t)`: `ℏ t = log h`,
    /// or `t` alone under [`Mutation::DropBorelHbar`].
    pub fn borel_source(&self, i: usize) -> Result<Series> {
        match self.mutation {
            Some(Mutation::DropBorelHbar) => self.t_series(i),
            _ => self.log_h(i),
        }
    }

    /// `B(t)(v) = borel(ℏ t)`.
    pub fn borel_t(&self, i: usize) -> Result<Series> {
        let src = self.borel_source(i)?;
        borel(&src, &self.spec, V)
    }

    /// Closed form `Σ_p (e^{b_p v} − e^{a_p v})/v`.
    pub fn borel_t_closed(&self, i: usize) -> Result<Series> {
        let (a, b) = self.root_series(i)?;
        let mut out = Series::zero(&self.spec);
        for (ap, bp) in a.iter().zip(&b) {
            out = out.add(&exp_diff_over_v(&self.spec, bp)?)?;
            out = out.sub(&exp_diff_over_v(&self.spec, ap)?)?;
        }
        Ok(out)
    }

    /// Closed form of `h_r`: `Σ_p b_p^r (b_p − a_p) Π_{p′≠p} (b_p − a_{p′})/(b_p − b_{p′})`,
    /// divided by `ℏ` in the `HbarScaled` normalization.
    pub fn dy_h(&self, i: usize, r: u32) -> Result<Cleared> {
        let (a, b) = self.root_series(i)?;
        let weights = b
            .iter()
            .zip(&a)
            .map(|(bp, ap)| bp.pow(r as i64)?.mul(&bp.sub(ap)?))
            .collect::<Result<Vec<_>>>()?;
        let mut c = partial_fraction(&self.spec, &weights, &a, &b)?;
        if self.norm == HNormalization::HbarScaled {
            c.num = c.num.mul_var_pow(HBAR, -1)?;
        }
        Ok(c)
    }

    /// Closed form of `t_r`: `Σ_p (b_p^{r+1} − a_p^{r+1}) / ((r+1) ℏ)`.
    pub fn dy_t(&self, i: usize, r: u32) -> Result<Series> {
        let (a, b) = self.root_series(i)?;
        let mut out = Series::zero(&self.spec);
        for (ap, bp) in a.iter().zip(&b) {
            out = out.add(&bp.pow(r as i64 + 1)?.sub(&ap.pow(r as i64 + 1)?)?)?;
        }
        out.scale_frac(1, r as i64 + 1).mul_var_pow(HBAR, -1)
    }

    fn g_function(&self) -> Result<Series> {
        let g = g_function(&self.spec, V)?;
        Ok(match self.mutation {
            Some(Mutation::GSignFlip) => g.neg(),
            _ => g,
        })
    }

    fn check_loop_depth(&self) -> Result<()> {
        if self.loop_spec.loop_order() < self.spec.total_order() {
            return Err(Error::NotGradedAdmissible(format!(
                "loop order {} below total order {}",
                self.loop_spec.loop_order(),
                self.spec.total_order()
            )));
        }
        Ok(())
    }

    /// `γ(v) = Σ_r (ℏ t_r / r!) (−d/dv)^{r+1} G(v)`.
    pub fn gamma(&self, i: usize) -> Result<Series> {
        self.check_loop_depth()?;
        let lh = self.borel_source(i)?;
        let derivs = neg_derivatives(&self.g_function()?, V, self.spec.total_order() + 1)?;
        let mut out = Series::zero(&self.spec);
        let mut fact = BigInt::one();
        for r in 0..self.loop_spec.loop_order() {
            if r > 0 {
                fact *= BigInt::from(r);
            }
            let c = lh.loop_coeff(r + 1)?;
            let Some(d) = c.min_degree() else { continue };
            if d < r as i32 + 1 && self.mutation.is_none() {
                return Err(Error::NotGradedAdmissible(format!(
                    "coefficient of u^-{} has degree {d}; needs formal roots",
                    r + 1
                )));
            }
            let Some(dr) = derivs.get(r as usize + 1) else { break };
            let scale = Coefficient::real(BigRational::new(BigInt::one(), fact.clone()));
            out = out.add(&c.mul(dr)?.scale(&scale))?;
        }
        Ok(out)
    }

    /// `γ(v) = B(t)(−∂_v) (−G′(v))`, reading the operator off the Borel
    /// transform term by term.
    pub fn gamma_operator(&self, i: usize) -> Result<Series> {
        self.check_loop_depth()?;
        // The operator lowers v-degree, so B(t) is needed past the total bound.
        let wide = self
            .spec
            .with_total_order(self.spec.total_order() + self.loop_spec.loop_order());
        let src = self.borel_source(i)?;
        let bt = borel(&src, &wide, V)?;
        let derivs = neg_derivatives(&self.g_function()?, V, self.spec.total_order() + 1)?;
        let slot = wide.graded_index(V).expect("v in spec");
        let mut out = Series::zero(&self.spec);
        for (r, c) in bt.split_by(slot) {
            // v^r ↦ (−∂)^r applied to −G′ = (−∂)^{r+1} G
            if let Some(dr) = derivs.get(r as usize + 1) {
                out = out.add(&c.embed(&self.spec)?.mul(dr)?)?;
            }
        }
        Ok(out)
    }

    /// `γ(v) = Σ_p G(v − b_p) − G(v − a_p)`, valid for formal roots.
    pub fn gamma_closed(&self, i: usize) -> Result<Series> {
        let (a, b) = self.root_series(i)?;
        let g = self.g_function()?;
        let v = Series::var(&self.spec, V)?;
        let mut out = Series::zero(&self.spec);
        for (ap, bp) in a.iter().zip(&b) {
            out = out.add(&g.substitute(V, &v.sub(bp)?)?)?;
            out = out.sub(&g.substitute(V, &v.sub(ap)?)?)?;
        }
        Ok(out)
    }

    /// `g(v) = (ℏ/(q_i − q_i⁻¹))^{1/2} exp(γ(v)/2)`.
    pub fn g_series(&self, i: usize) -> Result<Series> {
        let pre = self.datum.hbar_over_q_diff(i, &self.spec)?.sqrt()?;
        let gamma = self.gamma(i)?;
        pre.mul(&gamma.scale_frac(1, 2).exp()?)
    }
}

/// `Π_p (1 − a_p w)/(1 − b_p w)` in a spec whose loop variable is `w`.
pub fn h_from_roots(spec: &Arc<VarSpec>, a: &[Series], b: &[Series]) -> Result<Series> {
    let w = Series::var(spec, spec.loop_var().unwrap_or(U_INV))?;
    let one = Series::one(spec);
    let mut num = one.clone();
    let mut den = one.clone();
    for (ap, bp) in a.iter().zip(b) {
        num = num.mul(&one.sub(&ap.embed(spec)?.mul(&w)?)?)?;
        den = den.mul(&one.sub(&bp.embed(spec)?.mul(&w)?)?)?;
    }
    num.mul(&den.inverse()?)
}

/// `t(u) = ℏ⁻¹ log h(u)`; the top order is lost to the `ℏ⁻¹`.
pub fn t_from_h(h: &Series) -> Result<Series> {
    h.log()?.mul_var_pow(HBAR, -1)
}

/// `h(u) = exp(ℏ t(u))`.
pub fn h_from_t(t: &Series) -> Result<Series> {
    t.mul_var_pow(HBAR, 1)?.exp()
}

/// `(e^{p v} − 1)/v = Σ_k p^{k+1} v^k/(k+1)!`.
pub fn exp_diff_over_v(spec: &Arc<VarSpec>, p: &Series) -> Result<Series> {
    let v = Series::var(spec, V)?;
    let pv = p.mul(&v)?;
    let mut out = Series::zero(spec);
    let mut pw = p.clone();
    let mut fact = BigInt::one();
    for k in 0..=spec.total_order() {
        fact *= BigInt::from(k + 1);
        if pw.is_zero() {
            break;
        }
        out = out.add(&pw.scale(&Coefficient::real(BigRational::new(BigInt::one(), fact.clone()))))?;
        pw = pw.mul(&pv)?;
    }
    Ok(out)
}

/// `2 sinh(v/2)/v = Σ_k v^{2k}/(4^k (2k+1)!)`.
pub fn sinh_ratio(spec: &Arc<VarSpec>, var: &str) -> Result<Series> {
    let slot = spec
        .graded_index(var)
        .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
    let mut out = Series::zero(spec);
    let mut den = BigInt::one();
    let mut k = 0i64;
    while 2 * k <= spec.total_order() as i64 {
        if k > 0 {
            den *= BigInt::from(4 * (2 * k) * (2 * k + 1));
        }
        let mut m = vec![0i16; spec.arity()];
        m[slot] = (2 * k) as i16;
        out.add_term(&m, Coefficient::real(BigRational::new(BigInt::one(), den.clone())))?;
        k += 1;
    }
    Ok(out)
}

/// `G(v) = log(v/(e^{v/2} − e^{−v/2})) = −v²/24 + v⁴/2880 − …`.
pub fn g_function(spec: &Arc<VarSpec>, var: &str) -> Result<Series> {
    Ok(sinh_ratio(spec, var)?.log()?.neg())
}

/// `[(−d/dv)^k f]` for `k = 0..=n`.
fn neg_derivatives(f: &Series, var: &str, n: u32) -> Result<Vec<Series>> {
    let mut out = vec![f.clone()];
    for _ in 0..n {
        let next = out.last().expect("nonempty").derivative(var)?.neg();
        if next.is_zero() {
            break;
        }
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;

    use super::*;
    use crate::roots::Root;

    #[test]
    fn h_expansion_single_root_pair() {
        let ctx = YContext::sl11_formal(1, 4, 4).unwrap();
        let h = ctx.h_series(1).unwrap();
        let s = &ctx.spec;
        let a = Series::var(s, "a1").unwrap();
        let b = Series::var(s, "b1").unwrap();
        assert_eq!(h.loop_coeff(0).unwrap(), Series::one(s));
        let ba = &b - &a;
        assert_eq!(h.loop_coeff(1).unwrap(), ba);
        assert_eq!(h.loop_coeff(2).unwrap(), &ba * &b);
        assert_eq!(h.loop_coeff(3).unwrap(), &(&ba * &b) * &b);
    }

    #[test]
    fn trivial_root_data() {
        let d = CartanDatum::build(0, 0);
        let same = NodeRoots::new(1, vec![Root::formal("x")], vec![Root::formal("x")]).unwrap();
        let ctx = YContext::new(d, vec![same], 4, 4, HNormalization::Absorbed).unwrap();
        assert_eq!(ctx.h_series(1).unwrap(), Series::one(&ctx.loop_spec));
        assert!(ctx.t_series(1).unwrap().is_zero());
        let ctx = YContext::new(d, vec![], 4, 4, HNormalization::Absorbed).unwrap();
        assert_eq!(ctx.h_series(1).unwrap(), Series::one(&ctx.loop_spec));
        assert!(ctx.borel_t(1).unwrap().is_zero());
        assert!(ctx.gamma(1).unwrap().is_zero());
    }

    #[test]
    fn t_leading_coefficient_matches_h() {
        // h = 1 + ℏ c w  ⇒  t_0 = c + O(ℏ)
        let spec = VarSpec::graded(&[HBAR, "c"], 4)
            .unwrap()
            .with_hbar_floor(-1)
            .unwrap()
            .with_loop(U_INV, 4)
            .unwrap();
        let hc = &Series::var(&spec, HBAR).unwrap() * &Series::var(&spec, "c").unwrap();
        let h = &Series::one(&spec) + &(&hc * &Series::var(&spec, U_INV).unwrap());
        let t0 = t_from_h(&h).unwrap().loop_coeff(1).unwrap();
        assert_eq!(t0, Series::var(&t0.spec().clone(), "c").unwrap());
        assert_eq!(h_from_t(&t_from_h(&h).unwrap()).unwrap(), h);
    }

    #[test]
    fn t_closed_form_single_pair() {
        let ctx = YContext::sl11_formal(1, 6, 7).unwrap();
        for r in 0..4 {
            let lhs = ctx.t_coeff(1, r).unwrap().truncate_degree(5);
            assert_eq!(lhs, ctx.dy_t(1, r).unwrap().truncate_degree(5), "r = {r}");
        }
    }

    #[test]
    fn borel_t_matches_exponentials() {
        for n in 1..=2 {
            let ctx = YContext::sl11_formal(n, 8, 9).unwrap();
            assert_eq!(ctx.borel_t(1).unwrap(), ctx.borel_t_closed(1).unwrap());
        }
    }

    #[test]
    fn g_function_expansion() {
        let s = VarSpec::graded(&[V], 6).unwrap();
        let g = g_function(&s, V).unwrap();
        assert_eq!(g.coeff(&[2]), Coefficient::from_frac(-1, 24));
        assert_eq!(g.coeff(&[4]), Coefficient::from_frac(1, 2880));
        assert_eq!(g.constant_term(), Coefficient::zero());
        let minus_v = Series::var(&s, V).unwrap().neg();
        assert_eq!(g.substitute(V, &minus_v).unwrap(), g);
        let s0 = VarSpec::graded(&[V], 0).unwrap();
        assert!(g_function(&s0, V).unwrap().is_zero());
    }

    #[test]
    fn gamma_routes_agree() {
        for n in 1..=2 {
            let ctx = YContext::sl11_formal(n, 8, 9).unwrap();
            let g1 = ctx.gamma(1).unwrap();
            assert_eq!(g1, ctx.gamma_operator(1).unwrap());
            assert_eq!(g1, ctx.gamma_closed(1).unwrap());
        }
    }

    #[test]
    fn gamma_leading_term() {
        // lowest order comes from t_0 alone: γ = ℏ t_0 · (−G′) = ℏ t_0 (v/12 + O(v³))
        let ctx = YContext::sl11_formal(1, 3, 4).unwrap();
        let g = ctx.gamma(1).unwrap();
        let s = &ctx.spec;
        let ba = &Series::var(s, "b1").unwrap() - &Series::var(s, "a1").unwrap();
        assert_eq!(g.coeff_of(V, 1).unwrap().truncate_degree(1), ba.scale_frac(1, 12));
    }

    #[test]
    fn g_series_constant_terms() {
        let d = CartanDatum::build(1, 1);
        let ctx = YContext::new(d, vec![], 4, 4, HNormalization::HbarScaled).unwrap();
        let g1 = ctx.g_series(1).unwrap();
        assert_eq!(g1.constant_term(), Coefficient::one());
        assert_eq!(g1.coeff(&[2, 0]), Coefficient::from_frac(-1, 48));
        let g3 = ctx.g_series(3).unwrap();
        assert_eq!(g3.constant_term(), Coefficient::i());
    }

    #[test]
    fn g_squared_gives_exp_gamma() {
        let ctx = YContext::sl11_formal(1, 6, 7).unwrap();
        let g = ctx.g_series(1).unwrap();
        let lhs = &(&g * &g) * &ctx.datum.q_diff_over_hbar(1, &ctx.spec).unwrap();
        assert_eq!(lhs, ctx.gamma(1).unwrap().exp().unwrap());
    }

    #[test]
    fn dy_h_rational_example() {
        let d = CartanDatum::build(0, 0);
        let roots = NodeRoots::new(
            1,
            vec![Root::int(0), Root::int(1)],
            vec![Root::int(2), Root::int(3)],
        )
        .unwrap();
        let ctx = YContext::new(d, vec![roots], 4, 6, HNormalization::Absorbed).unwrap();
        let v = ctx.dy_h(1, 1).unwrap().value().unwrap();
        assert_eq!(v, Series::from_int(&ctx.spec, 14));
        assert_eq!(ctx.h_coeff(1, 1).unwrap(), v);
        // ℏ-scaled normalization carries 1/ℏ
        let ctx2 = YContext { norm: HNormalization::HbarScaled, ..ctx };
        let v2 = ctx2.dy_h(1, 1).unwrap().value().unwrap();
        assert_eq!(v2, Series::var_pow(&ctx2.spec, HBAR, -1).unwrap().scale_int(14));
        assert_eq!(ctx2.h_coeff(1, 1).unwrap(), v2);
    }

    #[test]
    fn dy_t_at_zero() {
        let ctx = YContext::sl11_formal(2, 4, 4).unwrap();
        let s = &ctx.spec;
        let mut want = Series::zero(s);
        for p in 1..=2 {
            want = &want + &(&Series::var(s, &format!("b{p}")).unwrap() - &Series::var(s, &format!("a{p}")).unwrap());
        }
        assert_eq!(ctx.dy_t(1, 0).unwrap(), want.mul_var_pow(HBAR, -1).unwrap());
    }

    #[test]
    fn mutations_change_results() {
        let ctx = YContext::sl11_formal(1, 6, 7).unwrap();
        let flipped = ctx.clone().with_mutation(Some(Mutation::GSignFlip));
        assert_eq!(flipped.gamma(1).unwrap(), ctx.gamma(1).unwrap().neg());
        let dropped = ctx.with_mutation(Some(Mutation::DropBorelHbar));
        assert!(dropped.borel_t(1).unwrap().has_laurent_part());
    }
}
